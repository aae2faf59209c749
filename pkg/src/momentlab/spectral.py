"""Eigenvalues, first-row spectral weights and spectral moments of real
symmetric tridiagonal matrices.

Two independent eigenvalue paths are available through :func:`eigenvalues`:
LAPACK's implicit-shift QL/QR iteration (``method="ql"``) and Sturm-sequence
bisection (``method="bisect"``). :func:`principal_representation` runs its own
implicit QL sweep that rotates only the first row of the eigenvector matrix,
which is all the Gauss-quadrature weights need.
"""

from __future__ import annotations

import dataclasses
import math
import typing

import numpy as np
import scipy.linalg

from .exceptions import (
    ConvergenceError,
    DegenerateMatrixError,
    DimensionMismatchError,
    DomainError,
    InsufficientLengthError,
)
from .utils import FloatArray, as_vector

# Implicit QL sweeps allowed per eigenvalue before giving up.
MAX_SWEEPS = 50

_LAPACK_DRIVERS = {"ql": "stev", "bisect": "stebz"}


@dataclasses.dataclass(frozen=True, eq=False)
class SymmetricTridiagonal:
    """Real symmetric tridiagonal matrix stored as its diagonal and
    first off-diagonal.

    :param diag: Diagonal entries, length m
    :param offdiag: Off-diagonal entries, length m - 1
    """

    diag: FloatArray
    offdiag: FloatArray

    def __post_init__(self) -> None:
        diag = as_vector(self.diag, "diag")
        offdiag = as_vector(self.offdiag, "offdiag", allow_empty=True)
        if offdiag.size != diag.size - 1:
            raise DimensionMismatchError(
                f"A {diag.size}x{diag.size} tridiagonal matrix needs "
                f"{diag.size - 1} off-diagonal entries, got {offdiag.size}."
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @classmethod
    def from_zeta(cls, zeta: typing.Any, m: int) -> SymmetricTridiagonal:
        """Build the m x m Jacobi matrix of the recurrence coefficients ``zeta``.

        The diagonal is (ζ₁, ζ₂+ζ₃, …, ζ_{2m−2}+ζ_{2m−1}) and the off-diagonal
        is (√(ζ₁ζ₂), √(ζ₃ζ₄), …, √(ζ_{2m−3}ζ_{2m−2})).

        :param zeta: At least 2m - 1 coefficients
        :param int m: Matrix dimension
        """
        z = as_vector(zeta, "zeta")
        if m < 1:
            raise DomainError(f"Matrix dimension must be at least 1, got {m}.")
        if z.size < 2 * m - 1:
            raise InsufficientLengthError(
                f"A {m}x{m} Jacobi matrix needs {2 * m - 1} zeta coefficients, "
                f"got {z.size}."
            )
        diag = np.empty(m)
        diag[0] = z[0]
        diag[1:] = z[1 : 2 * m - 2 : 2] + z[2 : 2 * m - 1 : 2]
        offdiag = np.sqrt(z[0 : 2 * m - 2 : 2] * z[1 : 2 * m - 2 : 2])
        return cls(diag, offdiag)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    def to_dense(self) -> FloatArray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def trace(self) -> float:
        return float(self.diag.sum())

    def frobenius_squared(self) -> float:
        """Return tr(T²), the squared Frobenius norm."""
        return float(np.sum(self.diag**2) + 2.0 * np.sum(self.offdiag**2))

    def leading(self, m: int) -> SymmetricTridiagonal:
        """Return the leading m x m block."""
        if not 1 <= m <= self.size:
            raise DomainError(f"Block size must be in [1, {self.size}], got {m}.")
        return SymmetricTridiagonal(self.diag[:m], self.offdiag[: m - 1])

    def scaled(self, factor: float, shift: float = 0.0) -> SymmetricTridiagonal:
        """Return ``factor * T + shift * I``."""
        return SymmetricTridiagonal(factor * self.diag + shift, factor * self.offdiag)

    def max_abs_difference(self, other: SymmetricTridiagonal) -> float:
        if self.size != other.size:
            raise DimensionMismatchError(
                f"Cannot compare a {self.size}x{self.size} matrix with a "
                f"{other.size}x{other.size} matrix."
            )
        diffs = [np.abs(self.diag - other.diag), np.abs(self.offdiag - other.offdiag)]
        return float(max(np.max(d, initial=0.0) for d in diffs))


@dataclasses.dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues of a symmetric matrix."""

    eigenvalues: FloatArray

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    def descending(self) -> FloatArray:
        return self.eigenvalues[::-1].copy()


@dataclasses.dataclass(frozen=True, eq=False)
class PrincipalRepresentation:
    """Discrete measure with ``support`` points and positive ``weights``
    summing to one: the Gauss-quadrature (lower principal) measure of a
    Jacobi matrix.
    """

    support: FloatArray
    weights: FloatArray

    def moments(self, k: int) -> FloatArray:
        """Return (∫x dη, …, ∫x^k dη)."""
        if k < 1:
            raise DomainError(f"Moment count must be at least 1, got {k}.")
        powers = np.vander(self.support, k + 1, increasing=True)[:, 1:]
        return self.weights @ powers


def eigenvalues(t: SymmetricTridiagonal, *, method: str = "ql") -> Spectrum:
    """Return all eigenvalues of ``t`` in ascending order.

    :param SymmetricTridiagonal t: Matrix
    :param str method: ``"ql"`` (implicit-shift QL/QR, LAPACK ``stev``) or
        ``"bisect"`` (Sturm-sequence bisection, LAPACK ``stebz``)
    """
    try:
        driver = _LAPACK_DRIVERS[method]
    except KeyError as err:
        raise DomainError(
            f"Unknown eigenvalue method {method!r}; use one of {sorted(_LAPACK_DRIVERS)}."
        ) from err
    if t.size == 1:
        return Spectrum(t.diag.copy())
    try:
        values = scipy.linalg.eigh_tridiagonal(
            t.diag, t.offdiag, eigvals_only=True, lapack_driver=driver
        )
    except np.linalg.LinAlgError as err:
        raise ConvergenceError(
            f"Eigenvalue iteration ({method}) did not converge for a "
            f"{t.size}x{t.size} matrix: {err}"
        ) from err
    return Spectrum(np.sort(values))


def _first_row_ql(
    diag: FloatArray, offdiag: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """Implicit QL with Wilkinson-type shifts, accumulating only the first
    row of the eigenvector matrix. Returns (eigenvalues, first components).
    """
    n = diag.size
    d = diag.astype(np.float64, copy=True)
    e = np.append(offdiag.astype(np.float64), 0.0)
    z = np.zeros(n)
    z[0] = 1.0
    eps = np.finfo(np.float64).eps
    for lo in range(n):
        sweeps = 0
        while True:
            # Find a negligible off-diagonal element to split the matrix
            hi = lo
            while hi < n - 1:
                dd = abs(d[hi]) + abs(d[hi + 1])
                if abs(e[hi]) <= eps * dd:
                    break
                hi += 1
            if hi == lo:
                break
            sweeps += 1
            if sweeps > MAX_SWEEPS:
                raise ConvergenceError(
                    f"Implicit QL exceeded {MAX_SWEEPS} sweeps for eigenvalue {lo + 1} "
                    f"of a {n}x{n} matrix."
                )
            g = (d[lo + 1] - d[lo]) / (2.0 * e[lo])
            r = math.hypot(g, 1.0)
            g = d[hi] - d[lo] + e[lo] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(hi - 1, lo - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[hi] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if deflated:
                continue
            d[lo] -= p
            e[lo] = g
            e[hi] = 0.0
    return d, z


def principal_representation(t: SymmetricTridiagonal) -> PrincipalRepresentation:
    """Return the discrete measure whose moments match the Jacobi matrix ``t``
    up to order 2m - 1.

    The support points are the eigenvalues of ``t`` and the weight of each is
    the squared first component of its normalized eigenvector.

    :param SymmetricTridiagonal t: Jacobi matrix with positive off-diagonal
    """
    if np.any(t.offdiag <= 0.0):
        index = int(np.argmax(t.offdiag <= 0.0)) + 1
        raise DegenerateMatrixError(
            f"Off-diagonal entry {index} is not positive; the principal "
            "representation needs an unreduced Jacobi matrix."
        )
    nodes, first = _first_row_ql(t.diag, t.offdiag)
    order = np.argsort(nodes)
    weights = first[order] ** 2
    return PrincipalRepresentation(nodes[order], weights / weights.sum())


def spectral_moments(t: SymmetricTridiagonal, k: int) -> FloatArray:
    """Return (c₁, …, c_k) with c_j = e₁ᵀ T^j e₁ = Σ wᵢ xᵢʲ.

    Exact (up to rounding) for j ≤ 2m - 1 where m is the size of ``t``.
    """
    if k < 1:
        raise DomainError(f"Moment count must be at least 1, got {k}.")
    return principal_representation(t).moments(k)


def interlaces(outer: Spectrum, inner: Spectrum) -> bool:
    """Whether ``inner`` (m - 1 values) strictly interlaces ``outer`` (m values)."""
    lam, mu = outer.eigenvalues, inner.eigenvalues
    if mu.size != lam.size - 1:
        raise DimensionMismatchError(
            f"Interlacing needs {lam.size - 1} inner eigenvalues, got {mu.size}."
        )
    return bool(np.all(lam[:-1] < mu) and np.all(mu < lam[1:]))
