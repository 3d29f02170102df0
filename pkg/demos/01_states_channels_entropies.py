"""States, channels, and the basic entropic quantities.

Builds a few channels, inspects their Stinespring dilations and
complements, and evaluates entropies and relative entropy in bits.
"""

import numpy as np

from entrocap import (
    apply,
    complementary,
    dephasing_channel,
    entropy,
    environment_output,
    identity_channel,
    partial_trace,
    purify,
    raw_entropy,
    relative_entropy,
    sample_channel,
    sample_state,
    stinespring,
)

# A random qubit state and its canonical purification.
rho = sample_state(2, seed=7)
print("random qubit state:")
print(np.round(rho, 4))
print(f"entropy: {entropy(rho):.6f} bits")

phi = purify(rho)
recovered = partial_trace(phi.projector(), (2, 2), (0,))
print(f"purification round-trip residual: {np.abs(recovered - rho).max():.2e}")

# Entropy of the maximally mixed qubit is exactly one bit; pure states carry none.
print(f"\nH(I/2) = {entropy(np.eye(2) / 2):.6f} bits")
print(f"H(diag(3/4, 1/4)) = {entropy(np.diag([0.75, 0.25])):.6f} bits")

# The trace-homogeneous extension scales linearly on subnormalized operators,
# the raw extension picks up the -t log2 t term.
half = 0.5 * rho
print(f"\nhomogeneous extension on rho/2: {entropy(half):.6f} (= H(rho)/2)")
print(f"raw extension on rho/2:         {raw_entropy(half):.6f}")

# Relative entropy: zero on identical states, infinite on disjoint supports.
sigma = sample_state(2, seed=8)
print(f"\nH(rho || rho)   = {relative_entropy(rho, rho):.2e}")
print(f"H(rho || sigma) = {relative_entropy(rho, sigma):.6f} bits")
print(f"H(|0><0| || |1><1|) = {relative_entropy(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))}")

# A random channel, its dilation isometry, and the complementary channel.
channel = sample_channel(2, 3, 2, seed=21)
dil = stinespring(channel)
print(f"\nrandom channel 2 -> 3 with {channel.env_dim} Kraus operators")
print(f"dilation isometry residual |V†V - I|: "
      f"{np.abs(dil.isometry.conj().T @ dil.isometry - np.eye(2)).max():.2e}")

out = apply(channel, rho)
env = environment_output(channel, rho)
print(f"output entropy:      {entropy(out):.6f} bits")
print(f"environment entropy: {entropy(env):.6f} bits")

comp = complementary(channel)
print(f"complementary channel output dim: {comp.dim_out} (= Kraus count)")
print(f"complement reproduces environment: {np.abs(apply(comp, rho) - env).max():.2e}")

# For the complete dephasing the output and environment coincide.
deph = dephasing_channel(2)
print(f"\ndephasing at I/2: output entropy {entropy(apply(deph, np.eye(2) / 2)):.4f}, "
      f"environment entropy {entropy(environment_output(deph, np.eye(2) / 2)):.4f}")

# Identity channel: trivial one-dimensional environment.
ident = identity_channel(2)
print(f"identity channel environment entropy: "
      f"{entropy(environment_output(ident, rho)):.4f} bits")
