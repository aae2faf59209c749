"""Distances between distribution functions, the arcsine law, covariance
estimation and the reference covariance matrices of the limit theorems."""

from __future__ import annotations

import dataclasses
import math
import typing
import warnings

import numpy as np
import scipy.linalg
from scipy import stats as spstats

from .exceptions import DimensionMismatchError, DomainError
from .orthopoly import chebyshev_grid, chebyshev_roots, chebyshev_table
from .spectral import SymmetricTridiagonal
from .utils import FloatArray, as_vector, check_unit_interval

PREFACTOR_MODES = ("derived", "linear")

LEVY_TOL = 1e-9
# Extra evaluation points used when both distributions are continuous.
LEVY_GRID = np.linspace(0.0, 1.0, 1001)


class NormalityCheck(typing.NamedTuple):
    statistic: float
    pvalue: float


class EmpiricalCdf:
    """Right-continuous empirical distribution function of a sample.

    :param sample: Observations, any order
    """

    def __init__(self, sample: typing.Any) -> None:
        self.sample = np.sort(as_vector(sample, "sample"))

    def __repr__(self) -> str:
        return f"<EmpiricalCdf n={self.sample.size}>"

    def __len__(self) -> int:
        return int(self.sample.size)

    def __call__(self, x: typing.Any) -> typing.Any:
        return np.searchsorted(self.sample, x, side="right") / self.sample.size

    def left_limit(self, x: typing.Any) -> typing.Any:
        return np.searchsorted(self.sample, x, side="left") / self.sample.size

    @property
    def atoms(self) -> FloatArray:
        return np.unique(self.sample)


class _ContinuousCdf:
    """Adapter giving a cdf callable on [0, 1] the EmpiricalCdf interface."""

    def __init__(self, func: typing.Callable[[typing.Any], typing.Any]) -> None:
        self.func = func

    def __call__(self, x: typing.Any) -> typing.Any:
        return self.func(np.clip(x, 0.0, 1.0))

    left_limit = __call__
    atoms = np.empty(0)


CdfLike = typing.Union[EmpiricalCdf, typing.Callable[[typing.Any], typing.Any]]


def _as_cdf(f: CdfLike) -> EmpiricalCdf | _ContinuousCdf:
    return f if isinstance(f, EmpiricalCdf) else _ContinuousCdf(f)


def arcsine_cdf(x: typing.Any) -> typing.Any:
    """(2/π) arcsin(√x), the distribution function of the arcsine law."""
    arr = check_unit_interval(x, "x")
    value = np.where(arr >= 1.0, 1.0, 2.0 / np.pi * np.arcsin(np.sqrt(arr)))
    return float(value) if np.ndim(x) == 0 else value


def arcsine_quantile(u: typing.Any) -> typing.Any:
    """Inverse of :func:`arcsine_cdf`."""
    arr = check_unit_interval(u, "u")
    value = spstats.arcsine.ppf(arr)
    return float(value) if np.ndim(u) == 0 else value


def ks_distance(e: EmpiricalCdf, f: CdfLike) -> float:
    """Kolmogorov-Smirnov distance sup |e − f| between an empirical cdf and
    either a cdf callable or a second empirical cdf."""
    if isinstance(f, EmpiricalCdf):
        return float(spstats.ks_2samp(e.sample, f.sample, method="asymp").statistic)
    return float(spstats.kstest(e.sample, _as_cdf(f), method="asymp").statistic)


def _levy_feasible(f: typing.Any, g: typing.Any, h: float, grid: FloatArray) -> bool:
    """Whether f(x − h) − h ≤ g(x) ≤ f(x + h) + h for all x, checked with
    right values and left limits at every breakpoint."""
    fa, ga = f.atoms, g.atoms
    xs = np.unique(np.concatenate([fa, fa + h, fa - h, ga, ga + h, ga - h, grid]))
    tol = 1e-12
    if np.any(f(xs - h) - h > g(xs) + tol):
        return False
    if np.any(f.left_limit(xs - h) - h > g.left_limit(xs) + tol):
        return False
    if np.any(g(xs) > f(xs + h) + h + tol):
        return False
    return not np.any(g.left_limit(xs) > f.left_limit(xs + h) + h + tol)


def levy_distance(f: CdfLike, g: CdfLike, *, tol: float = LEVY_TOL) -> float:
    """Lévy distance inf{h : f(x − h) − h ≤ g(x) ≤ f(x + h) + h for all x},
    by bisection on h.

    Either argument may be an :class:`EmpiricalCdf` or a cdf callable of a
    law on [0, 1].
    """
    fc, gc = _as_cdf(f), _as_cdf(g)
    continuous = not isinstance(f, EmpiricalCdf) or not isinstance(g, EmpiricalCdf)
    grid = LEVY_GRID if continuous else np.empty(0)
    if _levy_feasible(fc, gc, 0.0, grid):
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _levy_feasible(fc, gc, mid, grid):
            hi = mid
        else:
            lo = mid
    return hi


def levy_bound_statistic(j: SymmetricTridiagonal, d: SymmetricTridiagonal) -> float:
    """(1/n) tr((J − D)²) from the tridiagonal entries; an upper bound for the
    cube of the Lévy distance between the spectral distributions."""
    if j.size != d.size:
        raise DimensionMismatchError(
            f"Matrices differ in size: {j.size} and {d.size}."
        )
    diag = j.diag - d.diag
    off = j.offdiag - d.offdiag
    return float((np.sum(diag**2) + 2.0 * np.sum(off**2)) / j.size)


@dataclasses.dataclass(frozen=True, eq=False)
class GammaMatrix:
    """Limiting covariance of the centred, scaled roots.

    ``gamma_raw`` holds γ_{k,l}; ``gamma`` applies the prefactor, 4/m² in
    ``derived`` mode and 2/m in ``linear`` mode.
    """

    m: int
    gamma_raw: FloatArray
    prefactor_mode: str = "derived"

    @property
    def prefactor(self) -> float:
        return gamma_prefactor(self.m, self.prefactor_mode)

    @property
    def gamma(self) -> FloatArray:
        return self.prefactor * self.gamma_raw


def gamma_prefactor(m: int, mode: str) -> float:
    if mode == "derived":
        return 4.0 / m**2
    if mode == "linear":
        return 2.0 / m
    raise DomainError(f"Unknown prefactor mode {mode!r}; use one of {PREFACTOR_MODES}.")


def gamma_matrix(m: int, prefactor_mode: str = "derived") -> GammaMatrix:
    """Assemble γ_{k,l} from its closed form in shifted Chebyshev values
    T_j(x_{k,m}) (with T₀ = 1).

    :param int m: Number of roots
    :param str prefactor_mode: ``"derived"`` (4/m², default) or ``"linear"``
        (2/m, reproduces the printed normalization)
    """
    if m < 1:
        raise DomainError(f"Dimension must be at least 1, got {m}.")
    gamma_prefactor(m, prefactor_mode)
    if prefactor_mode == "linear":
        warnings.warn(
            "The 2/m prefactor does not match the m = 1 variance; use it only "
            "to reproduce the printed normalization.",
            UserWarning,
            stacklevel=2,
        )
    t = chebyshev_table(max(m, 2), chebyshev_roots(m))
    sq = t**2
    # b[j] = T_j T_{j+1}
    b = t[:-1] * t[1:]
    cross_sq = sq[: m - 1].T @ sq[1:m]
    cross_b = b[: max(m - 2, 0)].T @ b[1 : m - 1]
    gamma = (
        0.25
        + 0.5 * sq[1:m].T @ sq[1:m]
        - 0.25 * (cross_sq + cross_sq.T)
        + 0.25 * np.outer(t[1], t[1])
        + 0.5 * b[1 : m - 1].T @ b[1 : m - 1]
        - 0.25 * (cross_b + cross_b.T)
    )
    return GammaMatrix(m, gamma, prefactor_mode)


def _root_fluctuation_covariance(size: int) -> FloatArray:
    """Tridiagonal A_size: diagonal (1, ½, ½, …), off-diagonal (−½, −¼, …)."""
    diag = np.full(size, 0.5)
    diag[0] = 1.0
    off = np.full(size - 1, -0.25)
    if size > 1:
        off[0] = -0.5
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _offdiag_fluctuation_covariance(size: int) -> FloatArray:
    """⅛ times the tridiagonal matrix with unit diagonal and off-diagonal
    (−1/√2, −½, −½, …)."""
    off = np.full(size - 1, -0.5)
    if size > 1:
        off[0] = -1.0 / math.sqrt(2.0)
    return 0.125 * (np.eye(size) + np.diag(off, 1) + np.diag(off, -1))


def intermediate_covariances(m: int) -> tuple[FloatArray, FloatArray]:
    """Return (A_{2m−1}, V) with V = diag(A_m, V₂₂) block diagonal."""
    if m < 2:
        raise DomainError(f"Intermediate covariances need m >= 2, got {m}.")
    a = _root_fluctuation_covariance(2 * m - 1)
    v = scipy.linalg.block_diag(_root_fluctuation_covariance(m), _offdiag_fluctuation_covariance(m - 1))
    return a, v


def quadratic_form_covariance(m: int) -> FloatArray:
    """Exact covariance of (t_kᵀ S t_k)_{k=1..m} for the Gaussian tridiagonal
    matrix S with diagonal covariance A_m and off-diagonal covariance V₂₂.

    Dividing by (m/2)² gives the covariance of the limiting root vector.
    """
    if m < 1:
        raise DomainError(f"Dimension must be at least 1, got {m}.")
    vecs = chebyshev_grid(m).eigvecs
    sq = vecs**2
    adjacent = vecs[:, :-1] * vecs[:, 1:]
    cov = sq @ _root_fluctuation_covariance(m) @ sq.T
    if m > 1:
        cov = cov + 4.0 * adjacent @ _offdiag_fluctuation_covariance(m - 1) @ adjacent.T
    return cov


@dataclasses.dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    mean: FloatArray
    cov: FloatArray
    count: int

    @property
    def mean_stderr(self) -> FloatArray:
        return np.sqrt(np.diag(self.cov) / self.count)


def covariance_estimate(samples: typing.Any) -> CovarianceEstimate:
    """Sample mean and unbiased sample covariance of the rows of ``samples``."""
    try:
        arr = np.asarray(samples, dtype=np.float64)
    except ValueError as err:
        raise DimensionMismatchError(f"Samples must form an (N, d) array: {err}") from err
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionMismatchError(
            f"Samples must form an (N, d) array, got shape {arr.shape}."
        )
    if arr.shape[0] < 2:
        raise DomainError(f"Need at least 2 samples, got {arr.shape[0]}.")
    cov = np.atleast_2d(np.cov(arr, rowvar=False, ddof=1))
    return CovarianceEstimate(arr.mean(axis=0), cov, int(arr.shape[0]))


def frobenius_distance(a: typing.Any, b: typing.Any) -> float:
    a, b = np.atleast_2d(a), np.atleast_2d(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Shapes differ: {a.shape} and {b.shape}.")
    return float(np.linalg.norm(a - b, "fro"))


def mahalanobis_normality(
    samples: typing.Any, cov: typing.Any, mean: typing.Any = None
) -> NormalityCheck:
    """KS test of the squared Mahalanobis distances of ``samples`` against
    the χ² law with d degrees of freedom."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    dim = arr.shape[1]
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    if cov.shape != (dim, dim):
        raise DimensionMismatchError(
            f"Covariance of shape {cov.shape} does not match dimension {dim}."
        )
    centre = np.zeros(dim) if mean is None else as_vector(mean, "mean")
    try:
        factor = scipy.linalg.cho_factor(cov)
    except np.linalg.LinAlgError as err:
        raise DomainError("Covariance matrix must be positive definite.") from err
    diff = arr - centre
    dist = np.sum(diff * scipy.linalg.cho_solve(factor, diff.T).T, axis=1)
    result = spstats.kstest(dist, spstats.chi2(df=dim).cdf, method="asymp")
    return NormalityCheck(float(result.statistic), float(result.pvalue))
