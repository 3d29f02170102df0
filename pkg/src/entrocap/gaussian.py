"""Bosonic Gaussian channel parameters, validity, classification, and a
Fock-truncated single-mode attenuator with a covariance-matrix oracle.

Conventions: the symplectic form is the block form [[0, 1], [-1, 0]] per
mode and the vacuum covariance is I/2, so channel validity reads
``alpha >= +/- (i/2)(Delta_B - K^T Delta_A K)`` as two Hermitian PSD
conditions.  ``K`` maps the output symplectic space into the input one,
matching the dual action on Weyl generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .channels import KrausChannel
from .errors import ValidationError

__all__ = [
    "GaussianChannelParams",
    "GaussianState",
    "SymplecticSpace",
    "attenuator_params",
    "classify_gaussian",
    "fock_attenuator",
    "gaussian_mi_oracle",
    "mean_photon_entropy",
    "number_operator",
    "random_symplectic",
    "standard_symplectic_form",
    "symplectic_eigenvalues",
    "thermal_gaussian_state",
    "thermal_state",
    "validate_gaussian",
]


def standard_symplectic_form(modes: int) -> np.ndarray:
    """Direct sum of [[0, 1], [-1, 0]] blocks."""
    if modes < 1:
        raise ValidationError("mode count must be positive")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * modes, 2 * modes))
    for m in range(modes):
        out[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = block
    return out


@dataclass(frozen=True)
class SymplecticSpace:
    """Even-dimensional real space with a nondegenerate skew-symmetric form."""

    dim: int
    form: np.ndarray

    def __post_init__(self):
        d = int(self.dim)
        if d < 2 or d % 2:
            raise ValidationError(f"symplectic dimension must be even and >= 2, got {d}")
        delta = np.asarray(self.form, dtype=float)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "form", delta)
        if delta.shape != (d, d):
            raise ValidationError("form shape does not match dimension")
        if np.abs(delta + delta.T).max() > 1e-12:
            raise ValidationError("symplectic form must be skew-symmetric")
        if abs(np.linalg.det(delta)) < 1e-12:
            raise ValidationError("symplectic form must be nondegenerate")

    @classmethod
    def standard(cls, modes: int) -> "SymplecticSpace":
        return cls(2 * modes, standard_symplectic_form(modes))

    @property
    def modes(self) -> int:
        return self.dim // 2


@dataclass(frozen=True)
class GaussianChannelParams:
    """Gaussian channel data (K, l, alpha) between two symplectic spaces.

    ``K`` is a real (dim_A x dim_B) matrix acting on output-side symplectic
    vectors, ``l`` a real output-side vector, ``alpha`` a real symmetric
    output-side matrix.
    """

    K: np.ndarray
    l: np.ndarray
    alpha: np.ndarray
    space_in: SymplecticSpace
    space_out: SymplecticSpace

    def __post_init__(self):
        k = np.asarray(self.K, dtype=float)
        vec = np.asarray(self.l, dtype=float).reshape(-1)
        alpha = np.asarray(self.alpha, dtype=float)
        da, db = self.space_in.dim, self.space_out.dim
        if k.shape != (da, db):
            raise ValidationError(f"K must be {da} x {db}, got {k.shape}")
        if vec.shape != (db,):
            raise ValidationError(f"l must have length {db}")
        if alpha.shape != (db, db):
            raise ValidationError(f"alpha must be {db} x {db}")
        if np.abs(alpha - alpha.T).max() > 1e-12:
            raise ValidationError("alpha must be symmetric")
        object.__setattr__(self, "K", k)
        object.__setattr__(self, "l", vec)
        object.__setattr__(self, "alpha", alpha)


def attenuator_params(eta: float, env_photons: float = 0.0) -> GaussianChannelParams:
    """Single-mode attenuator: K = sqrt(eta) I, alpha = (1-eta)(2N_E+1)/2 I."""
    if not 0.0 < eta <= 1.0:
        raise ValidationError(f"attenuation must satisfy 0 < eta <= 1, got {eta}")
    if env_photons < 0.0:
        raise ValidationError("environment photon number must be nonnegative")
    space = SymplecticSpace.standard(1)
    k = math.sqrt(eta) * np.eye(2)
    alpha = (1.0 - eta) * (2.0 * env_photons + 1.0) / 2.0 * np.eye(2)
    return GaussianChannelParams(k, np.zeros(2), alpha, space, space)


def validate_gaussian(params: GaussianChannelParams, tol: float = 1e-10) -> dict:
    """Check alpha -/+ (i/2)(Delta_B - K^T Delta_A K) >= 0 for both signs."""
    mism = params.space_out.form - params.K.T @ params.space_in.form @ params.K
    mins = []
    for sign in (1.0, -1.0):
        h = params.alpha.astype(complex) + sign * 0.5j * mism
        mins.append(float(np.linalg.eigvalsh(0.5 * (h + h.conj().T)).min()))
    binding = min(mins)
    return {
        "valid": binding >= -tol,
        "min_eig_both_signs": tuple(mins),
        "min_eig": binding,
    }


def classify_gaussian(params: GaussianChannelParams, tol: float = 1e-12, rank_tol: float = 1e-10) -> dict:
    """Commutativity classification of the dual image of the Weyl generators.

    ``cq`` iff K^T Delta_A K = 0; among those, ``discrete_type`` iff K = 0
    (complete depolarization); ``no_discrete_subchannel`` iff K has full rank
    equal to the input symplectic dimension.
    """
    twisted = params.K.T @ params.space_in.form @ params.K
    cq = float(np.abs(twisted).max()) <= tol
    discrete = cq and float(np.abs(params.K).max()) <= tol
    rank = int((np.linalg.svd(params.K, compute_uv=False) > rank_tol).sum())
    return {
        "cq": bool(cq),
        "discrete_type": bool(discrete),
        "no_discrete_subchannel": bool(rank == params.space_in.dim),
        "twisted_norm": float(np.abs(twisted).max()),
        "rank_K": rank,
    }


def random_symplectic(dim: int, seed=0, scale: float = 0.4) -> np.ndarray:
    """Random symplectic matrix exp(Delta Q) with Q symmetric Gaussian."""
    if dim < 2 or dim % 2:
        raise ValidationError("dimension must be even")
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((dim, dim))
    q = scale * 0.5 * (q + q.T)
    delta = standard_symplectic_form(dim // 2)
    return expm(delta @ q)


def symplectic_eigenvalues(cov, delta=None) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix (each value >= 1/2 if valid)."""
    cov = np.asarray(cov, dtype=float)
    if delta is None:
        delta = standard_symplectic_form(cov.shape[0] // 2)
    ev = np.linalg.eigvals(np.linalg.inv(delta) @ cov)
    nus = np.sort(np.abs(ev.imag))[::-1]
    return nus[::2]  # eigenvalues come in +/- i nu pairs


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        d = mean.shape[0]
        if d < 2 or d % 2:
            raise ValidationError("Gaussian state dimension must be even")
        if cov.shape != (d, d) or np.abs(cov - cov.T).max() > 1e-10:
            raise ValidationError("covariance must be symmetric of matching shape")
        delta = standard_symplectic_form(d // 2)
        h = cov.astype(complex) + 0.5j * delta
        if float(np.linalg.eigvalsh(0.5 * (h + h.conj().T)).min()) < -1e-10:
            raise ValidationError("covariance violates the uncertainty condition")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def modes(self) -> int:
        return self.mean.shape[0] // 2


def thermal_gaussian_state(mean_photons: float) -> GaussianState:
    if mean_photons < 0.0:
        raise ValidationError("mean photon number must be nonnegative")
    v = (2.0 * mean_photons + 1.0) / 2.0
    return GaussianState(np.zeros(2), v * np.eye(2))


def mean_photon_entropy(n: float) -> float:
    """g(N) = (N+1) log2(N+1) - N log2 N, the thermal-state entropy in bits."""
    if n < 0.0:
        n = 0.0
    if n < 1e-300:
        return 0.0
    return float((n + 1.0) * math.log2(n + 1.0) - n * math.log2(n))


def fock_attenuator(eta: float, cutoff: int) -> KrausChannel:
    """Pure-loss channel on the Fock space truncated at ``cutoff`` photons.

    Kraus operator ell removes ell photons with binomial amplitudes; photon
    loss never leaves the truncated space, so after normalizing the columns
    the family is exactly trace preserving on it.
    """
    if not 0.0 < eta < 1.0:
        raise ValidationError(f"attenuation must satisfy 0 < eta < 1, got {eta}")
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValidationError("cutoff must be at least 2")
    dim = cutoff + 1
    ops = np.zeros((dim, dim, dim))  # (ell, m, n)
    for n in range(dim):
        for ell in range(n + 1):
            amp = math.sqrt(math.comb(n, ell) * eta ** (n - ell) * (1.0 - eta) ** ell)
            ops[ell, n - ell, n] = amp
    col_norm = np.sqrt(np.einsum("lmn->n", ops**2))
    ops /= col_norm[None, None, :]
    return KrausChannel(tuple(ops[ell] for ell in range(dim)))


def thermal_state(mean_photons: float, cutoff: int) -> np.ndarray:
    """Truncated and renormalized thermal state diag((N/(N+1))^n)."""
    if mean_photons < 0.0:
        raise ValidationError("mean photon number must be nonnegative")
    cutoff = int(cutoff)
    n = np.arange(cutoff + 1, dtype=float)
    if mean_photons == 0.0:
        probs = np.zeros(cutoff + 1)
        probs[0] = 1.0
    else:
        ratio = mean_photons / (mean_photons + 1.0)
        probs = ratio**n
        probs /= probs.sum()
    return np.diag(probs).astype(complex)


def number_operator(cutoff: int) -> np.ndarray:
    """Photon-number observable diag(0, 1, ..., cutoff)."""
    return np.diag(np.arange(int(cutoff) + 1, dtype=float)).astype(complex)


def _attenuator_form(params: GaussianChannelParams):
    """Extract (eta, env_photons) or raise for non-attenuator parameters."""
    if params.space_in.dim != 2 or params.space_out.dim != 2:
        raise ValidationError("oracle supports single-mode channels only")
    check = validate_gaussian(params)
    if not check["valid"]:
        raise ValidationError("invalid Gaussian channel parameters")
    k = params.K
    if abs(k[0, 0] - k[1, 1]) > 1e-10 or abs(k[0, 1]) > 1e-10 or abs(k[1, 0]) > 1e-10:
        raise ValidationError("oracle supports attenuator form K = sqrt(eta) I only")
    scale = k[0, 0]
    if not 0.0 < scale <= 1.0 + 1e-12:
        raise ValidationError("attenuator form requires 0 < sqrt(eta) <= 1")
    eta = min(scale * scale, 1.0)
    a = params.alpha
    if abs(a[0, 0] - a[1, 1]) > 1e-10 or abs(a[0, 1]) > 1e-10:
        raise ValidationError("oracle supports isotropic alpha only")
    if eta >= 1.0 - 1e-14:
        return 1.0, 0.0
    env = (2.0 * a[0, 0] / (1.0 - eta) - 1.0) / 2.0
    if env < -1e-9:
        raise ValidationError("alpha below the attenuator family")
    return eta, max(env, 0.0)


def gaussian_mi_oracle(params: GaussianChannelParams, state: GaussianState) -> float:
    """Mutual information of an attenuator on a thermal input, in bits.

    Covariance-matrix evaluation: the input and channel-output entropies come
    from single-mode symplectic eigenvalues; the environment side of the
    dilation (beamsplitter against a purified thermal mode) contributes the
    entropy of its full output covariance.  For a vacuum environment this is
    ``g(N) + g(eta N) - g((1-eta) N)``.
    """
    eta, env = _attenuator_form(params)
    if state.modes != 1:
        raise ValidationError("oracle supports single-mode inputs only")
    cov = state.cov
    if abs(cov[0, 0] - cov[1, 1]) > 1e-10 or abs(cov[0, 1]) > 1e-10:
        raise ValidationError("oracle supports thermal inputs only")
    v_in = cov[0, 0]
    n_in = max(v_in - 0.5, 0.0)

    v_out = eta * v_in + (1.0 - eta) * (2.0 * env + 1.0) / 2.0
    n_out = max(v_out - 0.5, 0.0)

    w = (2.0 * env + 1.0) / 2.0
    c = math.sqrt(env * (env + 1.0))
    zmat = np.diag([1.0, -1.0])
    env_cov = np.zeros((4, 4))
    env_cov[:2, :2] = ((1.0 - eta) * v_in + eta * w) * np.eye(2)
    env_cov[2:, 2:] = w * np.eye(2)
    env_cov[:2, 2:] = math.sqrt(eta) * c * zmat
    env_cov[2:, :2] = math.sqrt(eta) * c * zmat
    h_env = sum(mean_photon_entropy(max(nu - 0.5, 0.0)) for nu in symplectic_eigenvalues(env_cov))

    return mean_photon_entropy(n_in) + mean_photon_entropy(n_out) - h_env
