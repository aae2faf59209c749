"""Uniformly distributed random moment sequences.

A uniform point of the moment space 𝓜_{2n−1} has independent canonical
moments P_j ~ Beta(2n − j, 2n − j), j = 1..2n−1. This module samples them
reproducibly, builds the two tridiagonal models whose eigenvalues are the
roots of the random orthogonal polynomial, and evaluates the densities of
the canonical moments and of the roots.
"""

from __future__ import annotations

import dataclasses
import typing

import numpy as np
from scipy import stats as spstats
from scipy.special import gammaln

from . import canonical
from .exceptions import DimensionMismatchError, DomainError
from .spectral import SymmetricTridiagonal
from .utils import INTERIOR_TOL, FloatArray, as_vector


@dataclasses.dataclass(frozen=True)
class EnsembleSpec:
    """Order ``n`` of the ensemble plus the (``seed``, ``replicate``) pair
    that fixes the random stream."""

    n: int
    seed: int
    replicate: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"Ensemble order must be at least 1, got {self.n}.")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"Seed must be a 64-bit unsigned integer, got {self.seed}.")
        if self.replicate < 0:
            raise DomainError(f"Replicate index must be non-negative, got {self.replicate}.")

    def generator(self) -> np.random.Generator:
        """Independent PCG64 stream keyed by (seed, replicate)."""
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.replicate,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclasses.dataclass(frozen=True, eq=False)
class CanonicalSample:
    """Canonical moments of a random point of 𝓜_{2n−1} (or a prefix of them)."""

    n: int
    p: FloatArray

    @property
    def alpha(self) -> FloatArray:
        """α_j = 2p_{j+1} − 1, j = 0..len(p)−1."""
        return 2.0 * self.p - 1.0

    @property
    def zeta(self) -> FloatArray:
        return canonical.canonical_to_zeta(self.p)


def beta_shapes(n: int, length: int | None = None) -> FloatArray:
    """Shapes 2n − j, j = 1..length, of the canonical-moment marginals."""
    length = 2 * n - 1 if length is None else length
    return 2.0 * n - np.arange(1, length + 1, dtype=np.float64)


def beta_symmetric_variance(a: float) -> float:
    """Variance 1/(4(2a + 1)) of the Beta(a, a) law."""
    return 1.0 / (4.0 * (2.0 * a + 1.0))


def sample_beta_symmetric(
    a: typing.Any, rng: np.random.Generator, size: int | tuple[int, ...] | None = None
) -> typing.Any:
    """Draw from Beta(a, a) as G₁/(G₁ + G₂) with independent Gamma(a)
    variates, clamped into [ε, 1 − ε].

    ``a`` may be an array of shapes, broadcast against ``size``.
    """
    shape = np.asarray(a, dtype=np.float64)
    if np.any(shape <= 0.0):
        raise DomainError("Beta shape parameters must be positive.")
    g1 = rng.standard_gamma(shape, size=size)
    g2 = rng.standard_gamma(shape, size=size)
    return np.clip(g1 / (g1 + g2), INTERIOR_TOL, 1.0 - INTERIOR_TOL)


def sample_canonical(spec: EnsembleSpec, length: int | None = None) -> CanonicalSample:
    """Sample the canonical moments P_1, …, P_{2n−1} of a uniform point of
    𝓜_{2n−1}, or only the first ``length`` of them.

    The coordinates are independent, so a prefix has the same law as the
    corresponding part of the full vector.
    """
    full = 2 * spec.n - 1
    length = full if length is None else length
    if not 1 <= length <= full:
        raise DomainError(f"Prefix length must be in [1, {full}], got {length}.")
    rng = spec.generator()
    p = sample_beta_symmetric(beta_shapes(spec.n, length), rng)
    return CanonicalSample(spec.n, np.atleast_1d(p))


def build_jacobi(s: CanonicalSample, m: int) -> SymmetricTridiagonal:
    """The m x m random Jacobi matrix J_{m,n} whose eigenvalues are the roots
    of the degree-m random orthogonal polynomial."""
    if not 1 <= m <= s.n:
        raise DomainError(f"Matrix dimension must be in [1, {s.n}], got {m}.")
    return SymmetricTridiagonal.from_zeta(s.zeta, m)


def build_killip_nenciu(s: CanonicalSample) -> SymmetricTridiagonal:
    """The n x n matrix with entries

    b_{k+1} = (1 − α_{2k−1})α_{2k} − (1 + α_{2k−1})α_{2k−2},
    a_{k+1} = √((1 − α_{2k−1})(1 − α_{2k}²)(1 + α_{2k+1})),

    where α_{−1} = −1. It equals 4·J_{n,n} − 2·I.
    """
    n = s.n
    if s.p.size != 2 * n - 1:
        raise DimensionMismatchError(
            f"The full model needs {2 * n - 1} canonical moments, got {s.p.size}."
        )
    # shifted[j + 1] holds α_j, so shifted[0] is the sentinel α_{-1}
    shifted = np.concatenate([[-1.0], s.alpha])
    k = np.arange(n)
    odd = shifted[2 * k]
    even = shifted[2 * k + 1]
    before = np.where(k > 0, shifted[np.maximum(2 * k - 1, 0)], 0.0)
    diag = (1.0 - odd) * even - (1.0 + odd) * before
    j = np.arange(n - 1)
    offdiag = np.sqrt(
        (1.0 - shifted[2 * j]) * (1.0 - shifted[2 * j + 1] ** 2) * (1.0 + shifted[2 * j + 2])
    )
    return SymmetricTridiagonal(diag, offdiag)


def joint_root_log_constant(n: int) -> float:
    """log c with c = Γ(n+1)⁻¹ ∏_{r=0}^{n−1} Γ(2r+2n) / (Γ(2r+1)² Γ(2r+2))."""
    if n < 1:
        raise DomainError(f"Order must be at least 1, got {n}.")
    r = np.arange(n, dtype=np.float64)
    terms = gammaln(2 * r + 2 * n) - 2.0 * gammaln(2 * r + 1) - gammaln(2 * r + 2)
    return float(terms.sum() - gammaln(n + 1))


def joint_root_log_density(x: typing.Any, n: int) -> float:
    """Log of the symmetric joint density c ∏_{i<j} |x_i − x_j|⁴ of the n
    roots; ``-inf`` outside the support or on coincident roots."""
    x = as_vector(x, "roots")
    if x.size != n:
        raise DimensionMismatchError(f"Expected {n} roots, got {x.size}.")
    if np.any(x < 0.0) or np.any(x > 1.0):
        return -np.inf
    i, j = np.triu_indices(n, k=1)
    gaps = np.abs(x[i] - x[j])
    if np.any(gaps == 0.0):
        return -np.inf
    return joint_root_log_constant(n) + 4.0 * float(np.sum(np.log(gaps)))


def canonical_log_density(p: typing.Any, n: int) -> float:
    """Log density of the canonical moments of a uniform point of
    𝓜_{2n−1}: Σ_j log Beta(2n − j, 2n − j)(p_j)."""
    p = as_vector(p, "p")
    if p.size != 2 * n - 1:
        raise DimensionMismatchError(
            f"Order {n} needs {2 * n - 1} canonical moments, got {p.size}."
        )
    shapes = beta_shapes(n)
    return float(np.sum(spstats.beta.logpdf(p, shapes, shapes)))
