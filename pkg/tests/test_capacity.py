import math

import numpy as np
import pytest

from entrocap import (
    EnergyConstraint,
    OptimizerOptions,
    ResourceLimitError,
    ValidationError,
    additivity_probe,
    cea_capacity,
    check_prop1,
    chi_at_state,
    chi_capacity,
    coincidence_certificate,
    complementary,
    constraint_tensor,
    cq_channel,
    dephasing_channel,
    depolarizing_channel,
    entropy,
    feasible_linear_max,
    identity_channel,
    mutual_information,
    replacement_channel,
    sample_channel,
    sample_hermitian,
    sample_state,
    tensor,
    truncation_convergence,
)
from entrocap.capacity import frank_wolfe_trace
from entrocap.channels import apply

QUBIT_F = np.diag([0.0, 1.0])


def shannon(probabilities):
    p = np.asarray(probabilities, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def water_filling(levels, bound):
    """Max Shannon entropy over distributions with mean level <= bound."""
    f = np.asarray(levels, dtype=float)

    def tilt(beta):
        p = np.exp(-beta * (f - f.min()))
        return p / p.sum()

    if float(tilt(0.0) @ f) <= bound:
        return shannon(tilt(0.0))
    lo, hi = 0.0, 1.0
    while float(tilt(hi) @ f) > bound:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(tilt(mid) @ f) <= bound:
            hi = mid
        else:
            lo = mid
    return shannon(tilt(hi))


def basis_state(dim, k):
    e = np.zeros((dim, dim), dtype=complex)
    e[k, k] = 1.0
    return e


class TestEnergyConstraint:
    def test_infeasible_rejected(self):
        with pytest.raises(ValidationError):
            EnergyConstraint(np.diag([1.0, 2.0]), 0.5)

    def test_non_psd_rejected(self):
        with pytest.raises(ValidationError):
            EnergyConstraint(np.diag([-0.2, 1.0]), 0.5)

    def test_constraint_tensor_single_copy(self):
        c = EnergyConstraint(QUBIT_F, 0.3)
        c1 = constraint_tensor(c, 1)
        assert np.abs(c1.operator - c.operator).max() <= 1e-14
        assert c1.bound == c.bound

    def test_constraint_tensor_two_copies(self):
        c2 = constraint_tensor(EnergyConstraint(QUBIT_F, 0.3), 2)
        assert np.allclose(np.diagonal(c2.operator).real, [0.0, 1.0, 1.0, 2.0])
        assert abs(c2.bound - 0.6) <= 1e-14

    def test_energy_additive_on_products(self):
        rho = sample_state(2, seed=1)
        c2 = constraint_tensor(EnergyConstraint(QUBIT_F, 1.0), 2)
        single = float(np.trace(rho @ QUBIT_F).real)
        assert abs(c2.energy(tensor(rho, rho)) - 2 * single) <= 1e-12


class TestFeasibleLinearMax:
    def test_forced_support(self):
        res = feasible_linear_max(np.diag([1.0, 0.0]), EnergyConstraint(QUBIT_F, 0.0))
        assert abs(res.value - 1.0) <= 1e-10
        assert np.abs(res.state - np.diag([1.0, 0.0])).max() <= 1e-9

    def test_inactive_constraint(self):
        g = sample_hermitian(3, seed=2)
        res = feasible_linear_max(g, EnergyConstraint(np.eye(3), 1.0))
        assert abs(res.value - np.linalg.eigvalsh(g).max()) <= 1e-9

    def test_matches_brute_force_oracle(self):
        # fine multiplier grid over mixtures of eigenvector pairs hitting the bound
        for trial in range(8):
            g = sample_hermitian(4, seed=10 + trial)
            f_raw = sample_hermitian(4, seed=100 + trial)
            f = f_raw @ f_raw.conj().T / 4.0
            bound = float(np.linalg.eigvalsh(f).min()) + 0.3
            con = EnergyConstraint(f, bound)
            got = feasible_linear_max(g, con)
            best = -math.inf
            for lam in np.linspace(0.0, 50.0, 2001):
                w, u = np.linalg.eigh(g - lam * f)
                fvals = [float(np.vdot(u[:, i], f @ u[:, i]).real) for i in range(4)]
                gvals = [float(np.vdot(u[:, i], g @ u[:, i]).real) for i in range(4)]
                for i in range(4):
                    if fvals[i] <= bound:
                        best = max(best, gvals[i])
                    for j in range(i + 1, 4):
                        lo, hi = sorted([(fvals[i], gvals[i]), (fvals[j], gvals[j])])
                        if lo[0] <= bound <= hi[0] and hi[0] - lo[0] > 1e-12:
                            t = (bound - lo[0]) / (hi[0] - lo[0])
                            best = max(best, (1 - t) * lo[1] + t * hi[1])
            assert got.value >= best - 1e-6
            assert got.gap <= 1e-9
            assert con.is_feasible(got.state, slack=1e-9)

    def test_certificate_and_feasibility_random(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            d = int(rng.integers(2, 6))
            g = sample_hermitian(d, seed=int(rng.integers(0, 2**31)))
            f_raw = sample_hermitian(d, seed=int(rng.integers(0, 2**31)))
            f = f_raw @ f_raw.conj().T / d
            bound = float(np.linalg.eigvalsh(f).min()) + float(rng.uniform(0.05, 1.0))
            con = EnergyConstraint(f, bound)
            res = feasible_linear_max(g, con)
            assert res.gap <= 1e-9
            assert con.is_feasible(res.state, slack=1e-9)
            tr = float(np.trace(res.state).real)
            assert abs(tr - 1.0) <= 1e-9


class TestCeaCapacity:
    def test_identity_qubit_closed_form(self):
        con = EnergyConstraint(QUBIT_F, 0.25)
        res = cea_capacity(identity_channel(2), con, OptimizerOptions(max_iterations=500))
        target = 2.0 * shannon([0.75, 0.25])
        assert res.gap <= 1e-4
        assert res.value - 1e-12 <= target <= res.value + res.gap + 1e-12
        # the optimum sits at the constrained max-entropy state
        w = np.linalg.eigvalsh(res.optimizer)
        assert np.abs(np.sort(w) - [0.25, 0.75]).max() <= 1e-4

    def test_depolarizing_oracle(self):
        chan = depolarizing_channel(0.5)
        oracle = mutual_information(np.eye(2) / 2, chan, route="entropies")
        res = cea_capacity(chan, EnergyConstraint(QUBIT_F, 1.0), OptimizerOptions(max_iterations=300))
        assert res.gap <= 1e-4
        assert res.value - 1e-12 <= oracle <= res.value + res.gap + 1e-12

    def test_replacement_is_zero(self):
        chan = replacement_channel(sample_state(2, seed=4), dim_in=2)
        for bound in (0.1, 0.9):
            res = cea_capacity(chan, EnergyConstraint(QUBIT_F, bound))
            assert abs(res.value) <= 1e-9
            assert res.gap <= 1e-6

    def test_feasibility_and_monotone_ascent(self):
        con = EnergyConstraint(QUBIT_F, 0.4)
        for seed in range(4):
            chan = sample_channel(2, 2, 2, seed=seed)
            records = frank_wolfe_trace(chan, con, OptimizerOptions(max_iterations=40))
            assert all(energy <= con.bound + 1e-9 for _, energy in records)
            diffs = [records[k + 1][0] - records[k][0] for k in range(len(records) - 1)]
            assert all(d >= -1e-10 for d in diffs)

    def test_flagged_on_iteration_starvation(self):
        chan = sample_channel(3, 3, 3, seed=7)
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 0.8)
        res = cea_capacity(chan, con, OptimizerOptions(max_iterations=2, gap_tolerance=1e-9))
        assert not res.converged
        assert res.gap > 1e-9  # wide but still certified

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            cea_capacity(identity_channel(3), EnergyConstraint(QUBIT_F, 0.5))


class TestGradientAudits:
    def test_ascent_gradient_matches_finite_differences(self):
        # the +c*I ambiguity cancels along traceless Hermitian directions
        from entrocap.capacity import _mi_gradient, mutual_information_value

        rng = np.random.default_rng(30)
        chan = sample_channel(3, 3, 2, seed=31)
        rho = sample_state(3, seed=32)
        grad = _mi_gradient(chan, rho)
        eps = 1e-6
        worst = 0.0
        for _ in range(10):
            direction = sample_hermitian(3, seed=int(rng.integers(0, 2**31)))
            direction -= np.trace(direction) / 3 * np.eye(3)
            direction /= np.linalg.norm(direction)
            num = (
                mutual_information_value(chan, rho + eps * direction)
                - mutual_information_value(chan, rho - eps * direction)
            ) / (2 * eps)
            ana = float(np.trace(grad @ direction).real)
            worst = max(worst, abs(num - ana))
        assert worst <= 1e-5, worst

    def test_decomposition_gradient_matches_finite_differences(self):
        from entrocap.channels import dual_apply
        from entrocap.linalg import hermitian_eig, hermitian_log2, sample_isometry

        rng = np.random.default_rng(33)
        chan = sample_channel(3, 3, 2, seed=34)
        rho = sample_state(3, seed=35)
        w, u = hermitian_eig(rho)
        root = u * np.sqrt(np.clip(w, 0.0, None))
        m = 5
        stiefel = sample_isometry(3, m, seed=36)

        def objective(mat):
            x = mat @ root.T
            return sum(entropy(apply(chan, np.outer(x[i], x[i].conj()))) for i in range(m))

        x = stiefel @ root.T
        rows = []
        for i in range(m):
            xi = x[i]
            tr = float(np.vdot(xi, xi).real)
            sig = apply(chan, np.outer(xi, xi.conj()))
            mat = dual_apply(chan, -hermitian_log2(sig) + math.log2(tr) * np.eye(chan.dim_out))
            rows.append(mat @ xi)
        grad = np.stack(rows, axis=0) @ root.conj()

        eps = 1e-6
        worst = 0.0
        for _ in range(10):
            direction = rng.standard_normal(stiefel.shape) + 1j * rng.standard_normal(stiefel.shape)
            direction /= np.linalg.norm(direction)
            num = (objective(stiefel + eps * direction) - objective(stiefel - eps * direction)) / (2 * eps)
            ana = 2.0 * float(np.real(np.vdot(grad, direction)))
            worst = max(worst, abs(num - ana))
        assert worst <= 1e-5, worst


class TestChiAtState:
    def test_identity_gives_input_entropy(self):
        rho = sample_state(3, seed=8)
        res = chi_at_state(identity_channel(3), rho)
        assert abs(res.value - entropy(rho)) <= 5e-3
        assert res.heuristic and res.gap is None

    def test_replacement_is_zero(self):
        chan = replacement_channel(sample_state(2, seed=9), dim_in=2)
        res = chi_at_state(chan, sample_state(2, seed=10))
        assert abs(res.value) <= 1e-8

    def test_dephasing_matches_grid_oracle(self):
        chan = dephasing_channel(2)
        res = chi_at_state(chan, np.eye(2) / 2, members=2)
        # exhaustive search over 2-member decompositions (orthonormal bases)
        best = math.inf
        for theta in np.linspace(0.0, np.pi / 2, 61):
            for phase in np.linspace(0.0, np.pi, 61):
                v1 = np.array([np.cos(theta), np.exp(1j * phase) * np.sin(theta)])
                v2 = np.array([-np.exp(-1j * phase) * np.sin(theta), np.cos(theta)])
                avg = 0.5 * (
                    entropy(apply(chan, np.outer(v1, v1.conj())))
                    + entropy(apply(chan, np.outer(v2, v2.conj())))
                )
                best = min(best, avg)
        oracle = entropy(apply(chan, np.eye(2) / 2)) - best
        assert abs(oracle - 1.0) <= 1e-6
        assert abs(res.value - oracle) <= 5e-3

    def test_member_count_validation(self):
        with pytest.raises(ValidationError):
            chi_at_state(identity_channel(2), np.eye(2) / 2, members=1)

    def test_decomposition_reconstructs_average(self):
        rho = sample_state(3, rank=2, seed=11)
        res = chi_at_state(identity_channel(3), rho)
        assert np.abs(res.optimizer.barycenter() - rho).max() <= 1e-8


class TestChiCapacity:
    def test_identity_qubit_constrained(self):
        res = chi_capacity(identity_channel(2), EnergyConstraint(QUBIT_F, 0.25))
        assert abs(res.value - shannon([0.75, 0.25])) <= 5e-3
        assert res.heuristic

    def test_replacement_is_zero(self):
        chan = replacement_channel(sample_state(2, seed=12), dim_in=2)
        res = chi_capacity(chan, EnergyConstraint(QUBIT_F, 0.5))
        assert abs(res.value) <= 1e-8

    def test_cq_channel_water_filling(self):
        sigmas = [basis_state(3, k) for k in range(3)]
        chan = cq_channel(sigmas)
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 0.5)
        res = chi_capacity(chan, con)
        assert abs(res.value - water_filling([0.0, 1.0, 2.0], 0.5)) <= 5e-3

    def test_barycenter_feasible(self):
        rng = np.random.default_rng(13)
        for _ in range(3):
            chan = sample_channel(2, 2, 2, seed=int(rng.integers(0, 2**31)))
            con = EnergyConstraint(QUBIT_F, 0.3)
            res = chi_capacity(chan, con, opts=OptimizerOptions(max_iterations=60))
            assert con.is_feasible(res.optimizer.barycenter(), slack=1e-9)


class TestInequalities:
    def test_cea_dominates_chi(self):
        rng = np.random.default_rng(14)
        for _ in range(5):
            chan = sample_channel(2, 2, 2, seed=int(rng.integers(0, 2**31)))
            con = EnergyConstraint(QUBIT_F, 0.6)
            cea = cea_capacity(chan, con, OptimizerOptions(max_iterations=200))
            chi = chi_capacity(chan, con, opts=OptimizerOptions(max_iterations=80))
            assert cea.value + cea.gap >= chi.value - 1e-6

    def test_chain_identity_at_optimizer_ensemble(self):
        rng = np.random.default_rng(15)
        from entrocap import chi_through

        for _ in range(5):
            chan = sample_channel(2, 2, 2, seed=int(rng.integers(0, 2**31)))
            con = EnergyConstraint(np.eye(2), 1.0)
            chi = chi_capacity(chan, con, opts=OptimizerOptions(max_iterations=80))
            mu = chi.optimizer
            avg = mu.barycenter()
            lhs = mutual_information(avg, chan)
            rhs = entropy(avg) + chi_through(chan, mu) - chi_through(complementary(chan), mu)
            assert abs(lhs - rhs) <= 1e-8


class TestProp1:
    def test_noiseless_equality(self):
        report = check_prop1(identity_channel(2), EnergyConstraint(QUBIT_F, 0.25))
        assert report["status"] == "satisfied"
        assert abs(report["margin"]) <= 5e-3  # equality for the noiseless channel

    def test_replacement(self):
        # both capacities vanish; the complement is noiseless-like, which only
        # strengthens the inequality margin
        chan = replacement_channel(sample_state(2, seed=16), dim_in=2)
        report = check_prop1(chan, EnergyConstraint(QUBIT_F, 0.5))
        assert report["status"] == "satisfied"
        assert abs(report["cea_value"]) <= 1e-8
        assert abs(report["chi_value"]) <= 1e-8
        assert report["margin"] >= -1e-6

    def test_random_channels_satisfied(self):
        for seed in range(6):
            chan = sample_channel(2, 2, 2, seed=seed)
            report = check_prop1(
                chan,
                EnergyConstraint(np.eye(2), 1.0),
                OptimizerOptions(max_iterations=120),
            )
            assert report["margin"] >= -1e-6
            assert report["status"] == "satisfied"


class TestCoincidence:
    def test_identity_qubit_has_gap_and_is_not_cq(self):
        report = coincidence_certificate(
            identity_channel(2), EnergyConstraint(QUBIT_F, 0.25)
        )
        assert report["cq_discrete"] is False
        # gap approaches H(rho*) at the constrained optimum
        assert report["gap_estimate"] >= 0.5
        assert report["barycenter_rank"] == 2

    def test_discrete_cq_with_diagonal_constraint(self):
        sigmas = [basis_state(3, k) for k in range(3)]
        chan = cq_channel(sigmas)
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 0.5)
        report = coincidence_certificate(chan, con)
        assert report["cq_discrete"] is True
        assert abs(report["gap_estimate"]) <= 5e-3

    def test_replacement(self):
        chan = replacement_channel(sample_state(2, seed=17), dim_in=2)
        report = coincidence_certificate(chan, EnergyConstraint(QUBIT_F, 0.5))
        assert report["cq_discrete"] is True
        assert abs(report["gap_estimate"]) <= 1e-8


class TestTruncationConvergence:
    def test_full_rank_row_matches_untruncated(self):
        chan = sample_channel(3, 3, 2, seed=18)
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 1.0)
        table = truncation_convergence(chan, con, [3], basis_state(3, 0))
        row, full = table["rows"][0], table["full"]
        assert abs(row["value"] - full["value"]) <= row["gap"] + full["gap"] + 1e-9

    def test_rank_one_with_matching_target_is_constant(self):
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 1.0)
        table = truncation_convergence(identity_channel(3), con, [1], basis_state(3, 0))
        assert abs(table["rows"][0]["value"]) <= 1e-9

    def test_monotone_within_brackets(self):
        chan = sample_channel(3, 3, 3, seed=19)
        con = EnergyConstraint(np.diag([0.0, 1.0, 2.0]), 1.0)
        table = truncation_convergence(
            chan, con, [1, 2, 3], basis_state(3, 0), opts=OptimizerOptions(max_iterations=200)
        )
        rows = table["rows"]
        for a, b in zip(rows, rows[1:]):
            assert b["value"] + b["gap"] >= a["value"] - 1e-9


class TestAdditivityProbe:
    def test_identity_qubit_unconstrained(self):
        report = additivity_probe(
            identity_channel(2),
            EnergyConstraint(QUBIT_F, 1.0),
            OptimizerOptions(max_iterations=300, gap_tolerance=1e-5),
        )
        assert abs(report["single_value"] - 2.0) <= 1e-4
        assert abs(report["double_value"] - 4.0) <= 1e-3
        assert report["additive_within_gaps"]

    def test_replacement(self):
        chan = replacement_channel(sample_state(2, seed=20), dim_in=2)
        report = additivity_probe(chan, EnergyConstraint(QUBIT_F, 0.5))
        assert abs(report["single_value"]) <= 1e-9
        assert abs(report["double_value"]) <= 1e-9

    def test_resource_limit(self):
        with pytest.raises(ResourceLimitError):
            additivity_probe(identity_channel(7), EnergyConstraint(np.eye(7), 1.0))
