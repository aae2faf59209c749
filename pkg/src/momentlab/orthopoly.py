"""Monic orthogonal polynomials and the shifted Chebyshev family on [0, 1]."""

from __future__ import annotations

import dataclasses
import math
import typing

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from .exceptions import DomainError, InsufficientLengthError, NonInteriorError
from .spectral import SymmetricTridiagonal
from .utils import FloatArray, as_vector, check_unit_interval

# Largest degree the determinant oracle accepts.
HANKEL_MAX_DEGREE = 8
HANKEL_DPS = 50


@dataclasses.dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """Polynomial with ascending ``coefficients`` and leading coefficient 1."""

    coefficients: FloatArray

    def __post_init__(self) -> None:
        coeffs = as_vector(self.coefficients, "coefficients")
        if coeffs[-1] != 1.0:
            raise DomainError(
                f"A monic polynomial needs leading coefficient 1, got {coeffs[-1]!r}."
            )
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return int(self.coefficients.size - 1)

    def __call__(self, x: typing.Any) -> typing.Any:
        return nppoly.polyval(x, self.coefficients)


@dataclasses.dataclass(frozen=True, eq=False)
class ChebyshevGrid:
    """Roots x_{k,m} (descending) and eigenvectors t_{k,m} (rows of
    ``eigvecs``) of the m x m Chebyshev matrix."""

    m: int
    roots: FloatArray
    eigvecs: FloatArray


def _monic(coeffs: FloatArray) -> MonicPolynomial:
    coeffs = np.array(coeffs, dtype=np.float64)
    coeffs[-1] = 1.0
    return MonicPolynomial(coeffs)


def monic_from_zeta(z: typing.Any, m: int) -> MonicPolynomial:
    """Degree-m monic orthogonal polynomial of the recurrence

    P_{j+1}(x) = (x − ζ_{2j} − ζ_{2j+1})P_j(x) − ζ_{2j−1}ζ_{2j}P_{j−1}(x),

    with P₀ = 1 and P₁ = x − ζ₁.

    :param z: At least 2m - 1 ζ coefficients
    :param int m: Degree
    """
    z = as_vector(z, "zeta", allow_empty=True)
    if m < 0:
        raise DomainError(f"Degree must be non-negative, got {m}.")
    if z.size < 2 * m - 1:
        raise InsufficientLengthError(
            f"Degree {m} needs {2 * m - 1} zeta coefficients, got {z.size}."
        )
    prev = np.array([1.0])
    if m == 0:
        return MonicPolynomial(prev)
    cur = np.array([-z[0], 1.0])
    for j in range(1, m):
        shift = z[2 * j - 1] + z[2 * j]
        weight = z[2 * j - 2] * z[2 * j - 1]
        nxt = nppoly.polymulx(cur)
        nxt[:-1] -= shift * cur
        nxt[:-2] -= weight * prev
        prev, cur = cur, nxt
    return _monic(cur)


def hankel_polynomial(c: typing.Any, m: int) -> MonicPolynomial:
    """Degree-m monic orthogonal polynomial as a ratio of Hankel determinants,
    expanded by cofactors along the column of powers of x.

    Evaluated in 50-digit arithmetic; meant as a reference for small m.

    :param c: Moments c₁, …, c_{2m−1} (or more), floats or mpmath numbers
    :param int m: Degree, 1 ≤ m ≤ 8
    """
    c = list(c)
    if not 1 <= m <= HANKEL_MAX_DEGREE:
        raise DomainError(f"Degree must be in [1, {HANKEL_MAX_DEGREE}], got {m}.")
    if len(c) < 2 * m - 1:
        raise InsufficientLengthError(
            f"Degree {m} needs {2 * m - 1} moments, got {len(c)}."
        )
    with mpmath.workdps(HANKEL_DPS):
        mu = [mpmath.mpf(1)] + [mpmath.mpf(v) for v in c[: 2 * m - 1]]
        # Rows i = 0..m, columns j = 0..m-1 hold μ_{i+j}
        rows = [[mu[i + j] for j in range(m)] for i in range(m + 1)]
        denominator = mpmath.det(mpmath.matrix(rows[:m]))
        if denominator <= 0:
            raise NonInteriorError(
                f"Hankel determinant of order {m - 1} is not positive; the moments "
                "are not interior.",
                max(1, 2 * m - 2),
            )
        coeffs = np.empty(m + 1)
        for i in range(m + 1):
            minor = mpmath.matrix(rows[:i] + rows[i + 1 :])
            sign = -1 if (i + m) % 2 else 1
            coeffs[i] = float(sign * mpmath.det(minor) / denominator)
    return _monic(coeffs)


def chebyshev_T(j: int, x: typing.Any) -> typing.Any:
    """Shifted Chebyshev polynomial T_j(x) = cos(j arccos(2x − 1)) on [0, 1],
    by the three-term recurrence."""
    if j < 0:
        raise DomainError(f"Index must be non-negative, got {j}.")
    arr = check_unit_interval(x, "x")
    y = 2.0 * arr - 1.0
    prev, cur = np.ones_like(y), y
    if j == 0:
        cur = prev
    for _ in range(1, j):
        prev, cur = cur, 2.0 * y * cur - prev
    return float(cur) if np.ndim(x) == 0 else cur


def chebyshev_table(j_max: int, x: typing.Any) -> FloatArray:
    """Return T_0, …, T_{j_max} at the points ``x`` as rows of a matrix."""
    if j_max < 0:
        raise DomainError(f"Index must be non-negative, got {j_max}.")
    y = 2.0 * np.atleast_1d(check_unit_interval(x, "x")) - 1.0
    table = np.empty((j_max + 1, y.size))
    table[0] = 1.0
    if j_max >= 1:
        table[1] = y
    for j in range(2, j_max + 1):
        table[j] = 2.0 * y * table[j - 1] - table[j - 2]
    return table


def monic_chebyshev(m: int) -> MonicPolynomial:
    """T̄_m = 2^{1−2m} T_m, the monic shifted Chebyshev polynomial."""
    if m < 1:
        raise DomainError(f"Degree must be at least 1, got {m}.")
    power = npcheb.Chebyshev.basis(m, domain=[0.0, 1.0]).convert(kind=np.polynomial.Polynomial)
    coeffs = power.coef
    return _monic(coeffs / coeffs[-1])


def chebyshev_roots(m: int) -> FloatArray:
    """Roots x_{k,m} = (cos((2k−1)π/(2m)) + 1)/2, k = 1..m, descending."""
    if m < 1:
        raise DomainError(f"Degree must be at least 1, got {m}.")
    k = np.arange(1, m + 1, dtype=np.float64)
    return (np.cos((2.0 * k - 1.0) * np.pi / (2.0 * m)) + 1.0) / 2.0


def chebyshev_matrix(m: int) -> SymmetricTridiagonal:
    """Jacobi matrix of the arcsine law: diagonal ½, off-diagonal
    (1/(2√2), ¼, ¼, …)."""
    if m < 1:
        raise DomainError(f"Dimension must be at least 1, got {m}.")
    offdiag = np.full(m - 1, 0.25)
    if m > 1:
        offdiag[0] = 1.0 / (2.0 * math.sqrt(2.0))
    return SymmetricTridiagonal(np.full(m, 0.5), offdiag)


def chebyshev_eigvec(m: int, k: int) -> FloatArray:
    """Eigenvector t_{k,m} = (1/√2, cos θ, …, cos((m−1)θ)), θ = (2k−1)π/(2m),
    of :func:`chebyshev_matrix` for the root x_{k,m}. Its squared norm is m/2.
    """
    if m < 1 or not 1 <= k <= m:
        raise DomainError(f"Need 1 <= k <= m, got k={k}, m={m}.")
    theta = (2 * k - 1) * math.pi / (2 * m)
    vec = np.cos(np.arange(m) * theta)
    vec[0] = 1.0 / math.sqrt(2.0)
    return vec


def chebyshev_grid(m: int) -> ChebyshevGrid:
    eigvecs = np.vstack([chebyshev_eigvec(m, k) for k in range(1, m + 1)])
    return ChebyshevGrid(m, chebyshev_roots(m), eigvecs)


def exact_moments(z: typing.Any, k: int) -> list[typing.Any]:
    """Moments c₁, …, c_k of the ζ coefficients ``z`` as 50-digit mpmath
    numbers, from c_j = e₁ᵀ Jʲ e₁. Reference values for
    :func:`hankel_polynomial` and the moment transforms."""
    z = as_vector(z, "zeta")
    if not 1 <= k <= z.size:
        raise DomainError(f"Moment count must be in [1, {z.size}], got {k}.")
    m = k // 2 + 1
    with mpmath.workdps(HANKEL_DPS):
        zeta = [mpmath.mpf(float(v)) for v in z] + [mpmath.mpf(0)] * max(0, 2 * m - 1 - z.size)
        jac = mpmath.zeros(m, m)
        jac[0, 0] = zeta[0]
        for i in range(1, m):
            jac[i, i] = zeta[2 * i - 1] + zeta[2 * i]
            jac[i - 1, i] = jac[i, i - 1] = mpmath.sqrt(zeta[2 * i - 2] * zeta[2 * i - 1])
        vec = mpmath.zeros(m, 1)
        vec[0] = 1
        moments = []
        for _ in range(k):
            vec = jac * vec
            moments.append(+vec[0])
    return moments
