"""Canonical moments of probability measures on [0, 1].

Maps between ordinary moments (c₁, …, c_k), canonical moments
(p₁, …, p_k) and the recurrence products ζ₁ = p₁, ζⱼ = (1 − p_{j−1})pⱼ,
together with the moment ranges, the arcsine reference moments, the
asymptotic moment covariance and the volume of the moment space.
"""

from __future__ import annotations

import logging
import typing
import warnings

import mpmath
import numpy as np
from scipy.special import gammaln

from .exceptions import BoundaryPointError, DomainError, NonInteriorError
from .orthopoly import HANKEL_DPS, exact_moments
from .utils import INTERIOR_TOL, FloatArray, as_vector

logger = logging.getLogger(__name__)

# Beyond this length double-precision moments fix the canonical moments
# to no better than ~1e-5.
CONDITIONING_LIMIT = 15


class VolumeEstimate(typing.NamedTuple):
    value: float
    stderr: float
    samples: int


def canonical_to_zeta(p: typing.Any) -> FloatArray:
    """Return ζ₁ = p₁ and ζⱼ = (1 − p_{j−1})pⱼ.

    :param p: Canonical moments, each in [ε, 1 − ε]
    :raises BoundaryPointError: if some pⱼ lies outside [ε, 1 − ε]
    """
    p = as_vector(p, "p")
    outside = (p < INTERIOR_TOL) | (p > 1.0 - INTERIOR_TOL)
    if outside.any():
        index = int(np.argmax(outside)) + 1
        raise BoundaryPointError(
            f"Canonical moment p_{index} = {p[index - 1]!r} is not interior.", index
        )
    z = p.copy()
    z[1:] = (1.0 - p[:-1]) * p[1:]
    return z


def zeta_to_canonical(z: typing.Any) -> FloatArray:
    """Invert :func:`canonical_to_zeta` by sequential division.

    :raises BoundaryPointError: if some q_{j−1} = 1 − p_{j−1} is at most ε
    """
    z = as_vector(z, "zeta")
    p = np.empty_like(z)
    p[0] = z[0]
    for i in range(1, z.size):
        q = 1.0 - p[i - 1]
        if q <= INTERIOR_TOL:
            raise BoundaryPointError(
                f"Cannot divide by q_{i} = {q!r}: p_{i} sits on the boundary.", i
            )
        p[i] = z[i] / q
    return p


def zeta_to_moments(z: typing.Any, k: int) -> FloatArray:
    """Return the first k moments of the measure whose recurrence
    coefficients are ``z``.

    c_j = e₁ᵀ Tʲ e₁ for the tridiagonal T with diagonal (ζ₁, ζ₂ + ζ₃, …),
    superdiagonal (ζ₁ζ₂, ζ₃ζ₄, …) and unit subdiagonal, which is diagonally
    similar to the Jacobi matrix. Every term is non-negative, so each
    moment carries a few units of relative rounding at most. c_j depends on
    ζ₁, …, ζ_j only.

    :param z: ζ coefficients of an interior point
    :param int k: Number of moments, 1 ≤ k ≤ len(z)
    """
    z = as_vector(z, "zeta")
    if not 1 <= k <= z.size:
        raise DomainError(f"Moment count must be in [1, {z.size}], got {k}.")
    m = k // 2 + 1
    if 2 * m - 1 > z.size:
        # The padded coefficient only feeds moments of order above k
        z = np.append(z, np.zeros(2 * m - 1 - z.size))
    diag = np.empty(m)
    diag[0] = z[0]
    diag[1:] = z[1 : 2 * m - 2 : 2] + z[2 : 2 * m - 1 : 2]
    upper = z[0 : 2 * m - 2 : 2] * z[1 : 2 * m - 1 : 2]
    vec = np.zeros(m)
    vec[0] = 1.0
    moments = np.empty(k)
    for j in range(k):
        nxt = diag * vec
        nxt[:-1] += upper * vec[1:]
        nxt[1:] += vec[:-1]
        vec = nxt
        moments[j] = vec[0]
    return moments


def _zeta_from_moment_rows(c: FloatArray) -> tuple[FloatArray, FloatArray, np.ndarray]:
    """Chebyshev's moment-to-recurrence algorithm on every row of ``c``, in
    double precision.

    Returns (zeta, p, first_bad) where ``first_bad`` holds the first 1-based
    index whose canonical moment is not interior, or 0.
    """
    rows, k = c.shape
    mu = np.concatenate([np.ones((rows, 1)), c], axis=1)
    zeta = np.empty((rows, k))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        prev2 = np.zeros((rows, k + 1))
        prev = mu
        alpha = mu[:, 1] / mu[:, 0]
        beta = np.zeros(rows)
        zeta[:, 0] = alpha
        j = 1
        while 2 * j <= k:
            cur = np.zeros((rows, k + 1))
            hi = k - j + 1
            cur[:, j:hi] = (
                prev[:, j + 1 : hi + 1]
                - alpha[:, None] * prev[:, j:hi]
                - beta[:, None] * prev2[:, j:hi]
            )
            beta = cur[:, j] / prev[:, j - 1]
            zeta[:, 2 * j - 1] = beta / zeta[:, 2 * j - 2]
            if 2 * j + 1 <= k:
                alpha = cur[:, j + 1] / cur[:, j] - prev[:, j] / prev[:, j - 1]
                zeta[:, 2 * j] = alpha - zeta[:, 2 * j - 1]
            prev2, prev = prev, cur
            j += 1
        p = np.empty_like(zeta)
        p[:, 0] = zeta[:, 0]
        for i in range(1, k):
            p[:, i] = zeta[:, i] / (1.0 - p[:, i - 1])
    # NaN compares False, so broken rows are flagged too
    interior = (p > INTERIOR_TOL) & (p < 1.0 - INTERIOR_TOL)
    bad = ~interior
    first_bad = np.where(bad.any(axis=1), np.argmax(bad, axis=1) + 1, 0)
    return zeta, p, first_bad


def _moment_values(c: typing.Any) -> list[typing.Any]:
    """Moments as mpmath numbers; mpmath input keeps its extra digits."""
    if isinstance(c, (list, tuple)) and any(isinstance(v, mpmath.mpf) for v in c):
        return [mpmath.mpf(v) for v in c]
    return [mpmath.mpf(float(v)) for v in as_vector(c, "moments")]


def _canonical_from_moments(c: typing.Any) -> tuple[FloatArray, FloatArray]:
    """Chebyshev's moment-to-recurrence algorithm for one moment vector,
    carried out in HANKEL_DPS-digit arithmetic.

    Canonical moments are checked as soon as they are known, so no division
    by a vanishing Hankel ratio is attempted.

    :returns: (zeta, p) rounded to double precision
    :raises NonInteriorError: with the first index whose canonical moment
        leaves (ε, 1 − ε)
    """
    with mpmath.workdps(HANKEL_DPS):
        mu = [mpmath.mpf(1), *_moment_values(c)]
        k = len(mu) - 1
        zeta: list[typing.Any] = []
        p: list[typing.Any] = []

        def push(value: typing.Any) -> None:
            i = len(zeta)
            pk = value if i == 0 else value / (1 - p[i - 1])
            if not INTERIOR_TOL < pk < 1 - INTERIOR_TOL:
                raise NonInteriorError(
                    "Moment vector is not interior to the moment space: canonical "
                    f"moment p_{i + 1} = {float(pk)!r}.",
                    i + 1,
                )
            zeta.append(value)
            p.append(pk)

        prev2 = [mpmath.mpf(0)] * (k + 1)
        prev = mu
        alpha = mu[1]
        beta = mpmath.mpf(0)
        push(alpha)
        j = 1
        while 2 * j <= k:
            cur = [mpmath.mpf(0)] * (k + 1)
            for i in range(j, k - j + 1):
                cur[i] = prev[i + 1] - alpha * prev[i] - beta * prev2[i]
            beta = cur[j] / prev[j - 1]
            push(beta / zeta[2 * j - 2])
            if 2 * j + 1 <= k:
                alpha = cur[j + 1] / cur[j] - prev[j] / prev[j - 1]
                push(alpha - zeta[2 * j - 1])
            prev2, prev = prev, cur
            j += 1
        return (
            np.array([float(v) for v in zeta]),
            np.array([float(v) for v in p]),
        )


def _warn_if_long(size: int) -> None:
    if size > CONDITIONING_LIMIT:
        warnings.warn(
            f"Recovering {size} recurrence coefficients from moments is "
            "ill-conditioned; expect a loss of accuracy.",
            UserWarning,
            stacklevel=3,
        )


def moments_to_zeta(c: typing.Any) -> FloatArray:
    """Recover ζ₁, …, ζ_k from interior moments c₁, …, c_k.

    ``c`` may hold mpmath numbers (see
    :func:`momentlab.orthopoly.exact_moments`); their extra digits are used.

    :raises NonInteriorError: with the first index whose canonical moment
        leaves (ε, 1 − ε)
    """
    zeta, _ = _canonical_from_moments(c)
    _warn_if_long(zeta.size)
    return zeta


def moments_to_canonical(c: typing.Any) -> FloatArray:
    """Return the canonical moments of the interior moment vector ``c``.

    Double-precision moments determine p_k only up to ulp(c_k) / r_k, with
    r_k = ∏_{j<k} pⱼ(1 − pⱼ); pass mpmath moments for more.
    """
    _, p = _canonical_from_moments(c)
    _warn_if_long(p.size)
    return p


def canonical_to_moments(
    p: typing.Any, k: int | None = None, *, exact: bool = False
) -> typing.Any:
    """Return the first ``k`` (default ``len(p)``) ordinary moments of the
    point with canonical moments ``p``.

    :param bool exact: Return a list of HANKEL_DPS-digit mpmath numbers
        instead of a float array; :func:`moments_to_canonical` inverts these
        to 1e-8 up to length 15.
    """
    z = canonical_to_zeta(p)
    k = z.size if k is None else k
    if exact:
        return exact_moments(z, k)
    return zeta_to_moments(z, k)


def in_moment_space(points: typing.Any) -> np.ndarray:
    """Vectorized interior test for the rows of an (N, k) array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise DomainError(f"Expected an (N, k) array of moment vectors, got {arr.shape}.")
    return _zeta_from_moment_rows(arr)[2] == 0


def moment_range_width(p: typing.Any) -> float:
    """Return r_{k+1} = ∏ pⱼ(1 − pⱼ); the empty product is 1."""
    p = as_vector(p, "p", allow_empty=True)
    return float(np.prod(p * (1.0 - p)))


def moment_range(c_prefix: typing.Any) -> tuple[float, float]:
    """Return (c_k⁻, c_k⁺), the range of the next moment given the interior
    prefix (c₁, …, c_{k−1}).

    c_k is affine in p_k with slope r_k, so the range is centred on the
    moment obtained with p_k = 1/2.
    """
    prefix = as_vector(c_prefix, "prefix", allow_empty=True)
    if prefix.size == 0:
        return 0.0, 1.0
    p = moments_to_canonical(prefix)
    width = moment_range_width(p)
    middle = canonical_to_moments(np.append(p, 0.5))[-1]
    lower = float(middle - 0.5 * width)
    return lower, lower + width


def moment_jacobian(p: typing.Any, step: float = 1e-6) -> FloatArray:
    """Central-difference Jacobian ∂c_k/∂p_j of the canonical -> moment map.

    Lower triangular with diagonal r_k; ``p ± step`` must stay interior.
    """
    p = as_vector(p, "p")
    if step <= 0.0:
        raise DomainError(f"Finite-difference step must be positive, got {step}.")
    jac = np.empty((p.size, p.size))
    for j in range(p.size):
        shift = np.zeros(p.size)
        shift[j] = step
        jac[:, j] = (canonical_to_moments(p + shift) - canonical_to_moments(p - shift)) / (
            2.0 * step
        )
    return jac


def arcsine_moment(k: int) -> float:
    """Return c⁰_k = 2^{−2k} (2k choose k), the k-th moment of the arcsine law."""
    if k < 0:
        raise DomainError(f"Moment index must be non-negative, got {k}.")
    i = np.arange(1, k + 1, dtype=np.float64)
    return float(np.prod((2.0 * i - 1.0) / (2.0 * i)))


def arcsine_moments(k: int) -> FloatArray:
    """Return (c⁰₁, …, c⁰_k)."""
    if k < 1:
        raise DomainError(f"Moment count must be at least 1, got {k}.")
    i = np.arange(1, k + 1, dtype=np.float64)
    return np.cumprod((2.0 * i - 1.0) / (2.0 * i))


def sigma_matrix(k: int) -> FloatArray:
    """Asymptotic covariance Σᵢⱼ = ½(c⁰_{i+j} − c⁰ᵢc⁰ⱼ) of √n(C − c⁰)."""
    if k < 1:
        raise DomainError(f"Dimension must be at least 1, got {k}.")
    c = np.concatenate([[1.0], arcsine_moments(2 * k)])
    idx = np.arange(1, k + 1)
    return 0.5 * (c[idx[:, None] + idx[None, :]] - np.outer(c[idx], c[idx]))


def log_moment_space_volume(n: int) -> float:
    """Return log Vol(𝓜ₙ) = Σ_{k=1}^{n} [2 log Γ(k) − log Γ(2k)]."""
    if n < 1:
        raise DomainError(f"Dimension must be at least 1, got {n}.")
    k = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum(2.0 * gammaln(k) - gammaln(2.0 * k)))


def moment_space_volume(n: int) -> float:
    """Lebesgue volume of the n-th moment space 𝓜ₙ ⊂ [0, 1]ⁿ."""
    return float(np.exp(log_moment_space_volume(n)))


def estimate_moment_space_volume(
    n: int, samples: int, seed: int, *, batch: int = 100_000
) -> VolumeEstimate:
    """Hit-or-miss Monte Carlo estimate of Vol(𝓜ₙ) from uniform points of
    the unit cube.

    :param int n: Dimension
    :param int samples: Number of uniform points
    :param int seed: Seed of the generator
    """
    if n < 1 or samples < 1:
        raise DomainError(f"Need n >= 1 and samples >= 1, got n={n}, samples={samples}.")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    hits = 0
    remaining = samples
    while remaining:
        size = min(batch, remaining)
        hits += int(in_moment_space(rng.random((size, n))).sum())
        remaining -= size
    value = hits / samples
    stderr = float(np.sqrt(value * (1.0 - value) / samples))
    logger.debug("Volume estimate for n=%d: %d/%d hits", n, hits, samples)
    return VolumeEstimate(value, stderr, samples)
