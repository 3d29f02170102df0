"""Mutual information: two evaluation routes and the exact identities
connecting it to conditional entropy and ensemble quantities.
"""

import numpy as np

from entrocap import (
    chi_through,
    coherent_information,
    complementary,
    conditional_entropy,
    entropy,
    identity_channel,
    mutual_information,
    pure_state_ensemble,
    sample_channel,
    sample_pure,
    sample_state,
)

rng = np.random.default_rng(0)

# Route agreement: the defining relative-entropy expression versus the
# entropy-difference formula, on a random channel and a rank-deficient state.
channel = sample_channel(3, 3, 2, seed=5)
rho = sample_state(3, rank=2, seed=6)
primary = mutual_information(rho, channel)
cross = mutual_information(rho, channel, route="entropies")
print(f"relative-entropy route: {primary:.12f} bits")
print(f"entropy-difference route: {cross:.12f} bits")
print(f"route discrepancy: {abs(primary - cross):.2e}\n")

# Benchmarks: identity doubles the input entropy, dephasing keeps one bit.
print(f"I(I/2, identity)  = {mutual_information(np.eye(2) / 2, identity_channel(2)):.6f} bits")

# Conditional entropy is negative on entangled states ...
bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
rho_bell = np.outer(bell, bell.conj())
print(f"H(A|B) at a Bell state = {conditional_entropy(rho_bell, (2, 2)):.6f} bits")

# ... monotone under discarding a subsystem, and sign-flipping on pure states.
v = sample_pure(8, seed=9).vec
pure3 = np.outer(v, v.conj())
hab = conditional_entropy(pure3, (2, 2, 2), sys=(0,), cond=(1,))
hac = conditional_entropy(pure3, (2, 2, 2), sys=(0,), cond=(2,))
habc = conditional_entropy(pure3, (2, 2, 2), sys=(0,), cond=(1, 2))
print(f"tripartite pure state: H(A|B) = {hab:+.6f}, H(A|C) = {hac:+.6f} "
      f"(sum {hab + hac:+.2e}), H(A|BC) = {habc:+.6f} <= H(A|B)\n")

# Receiver-minus-environment identity: for any pure-state ensemble with
# barycenter rho, the difference of chi-quantities through the channel and
# through its complement equals the coherent information at rho.
members = 5
weights = rng.dirichlet(np.ones(members))
vecs = [rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(members)]
mu = pure_state_ensemble(weights, vecs)
avg = mu.barycenter()

difference = chi_through(channel, mu) - chi_through(complementary(channel), mu)
coherent = coherent_information(avg, channel)
print(f"chi(receiver) - chi(environment) = {difference:+.12f} bits")
print(f"coherent information at the barycenter = {coherent:+.12f} bits")
print(f"identity residual: {abs(difference - coherent):.2e}")
print("(the difference is the same for every pure decomposition of the barycenter)")

# The private-transmission reading: a positive difference means the receiver
# learns more about the ensemble than the environment does.
print(f"\ninput entropy H(rho) = {entropy(avg):.6f} bits; "
      f"mutual information I(rho, channel) = {mutual_information(avg, channel):.6f} bits")
