"""Invariant suite over every numerical module.

Checks reach the numerical code through module attributes
(``ensemble.build_killip_nenciu`` rather than a bound name) so a patched
implementation is what gets checked.
"""

from __future__ import annotations

import logging
import math
import typing

import numpy as np

from .. import canonical, ensemble, orthopoly, spectral, stats
from ..core import CheckResult
from ..exceptions import DuplicateCheckNameError, MomentLabError
from ..experiment import BaseExperiment
from ..schemas import CheckRowSchema

if typing.TYPE_CHECKING:
    from ..schemas import ExperimentConfig

logger = logging.getLogger(__name__)

CheckFunc = typing.Callable[[np.random.Generator], tuple[bool, str]]

SELFTEST_CHECKS: dict[str, CheckFunc] = {}


def selftest_check(name: str) -> typing.Callable[[CheckFunc], CheckFunc]:
    """Register a check under ``name``; a check returns (passed, detail)."""

    def decorator(func: CheckFunc) -> CheckFunc:
        if name in SELFTEST_CHECKS:
            raise DuplicateCheckNameError(
                f'Another check with name "{name}" is already registered.'
            )
        SELFTEST_CHECKS[name] = func
        return func

    return decorator


def _within(name: str, error: float, limit: float) -> tuple[bool, str]:
    return error < limit, f"max {name} error {error:.3g} (limit {limit:.0e})"


def _random_zeta(rng: np.random.Generator, length: int, lo: float = 0.2, hi: float = 0.8) -> np.ndarray:
    return canonical.canonical_to_zeta(rng.uniform(lo, hi, length))


@selftest_check("canonical-zeta-roundtrip")
def check_canonical_zeta_roundtrip(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for _ in range(1000):
        p = rng.uniform(0.01, 0.99, 9)
        back = canonical.zeta_to_canonical(canonical.canonical_to_zeta(p))
        error = max(error, float(np.max(np.abs(back - p))))
    return _within("round-trip", error, 1e-12)


@selftest_check("moments-canonical-roundtrip")
def check_moments_roundtrip(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for _ in range(500):
        p = rng.uniform(0.3, 0.7, 9)
        back = canonical.moments_to_canonical(canonical.canonical_to_moments(p))
        error = max(error, float(np.max(np.abs(back - p))))
    # Length 15 needs moments beyond double precision
    for _ in range(100):
        p = rng.uniform(0.2, 0.8, 15)
        back = canonical.moments_to_canonical(canonical.canonical_to_moments(p, exact=True))
        error = max(error, float(np.max(np.abs(back - p))))
    return _within("round-trip", error, 1e-8)


@selftest_check("jacobian-structure")
def check_jacobian(rng: np.random.Generator) -> tuple[bool, str]:
    upper = diag = 0.0
    for _ in range(100):
        p = rng.uniform(0.2, 0.8, 6)
        jac = canonical.moment_jacobian(p)
        upper = max(upper, float(np.max(np.abs(np.triu(jac, k=1)))))
        widths = [canonical.moment_range_width(p[:k]) for k in range(p.size)]
        diag = max(diag, float(np.max(np.abs(np.diag(jac) - widths))))
    passed = upper < 1e-6 and diag < 1e-6
    return passed, f"upper triangle {upper:.3g}, diagonal vs range width {diag:.3g} (limit 1e-06)"


@selftest_check("moment-range-width")
def check_moment_range(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for _ in range(100):
        p = rng.uniform(0.3, 0.7, 5)
        lower, upper = canonical.moment_range(canonical.canonical_to_moments(p))
        error = max(error, abs((upper - lower) - canonical.moment_range_width(p)))
    return _within("width", error, 1e-12)


@selftest_check("arcsine-moments")
def check_arcsine_moments(rng: np.random.Generator) -> tuple[bool, str]:
    z = canonical.canonical_to_zeta(np.full(20, 0.5))
    error = float(np.max(np.abs(canonical.zeta_to_moments(z, 20) - canonical.arcsine_moments(20))))
    return _within("moment", error, 1e-10)


@selftest_check("recurrence-vs-hankel")
def check_recurrence_vs_hankel(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for trial in range(200):
        m = trial % 6 + 1
        z = _random_zeta(rng, 2 * m - 1)
        recurrence = orthopoly.monic_from_zeta(z, m).coefficients
        hankel = orthopoly.hankel_polynomial(orthopoly.exact_moments(z, 2 * m - 1), m).coefficients
        error = max(error, float(np.max(np.abs(recurrence - hankel))))
    return _within("coefficient", error, 1e-8)


@selftest_check("orthogonality")
def check_orthogonality(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for m in range(2, 7):
        z = _random_zeta(rng, 2 * m + 1)
        rep = spectral.principal_representation(spectral.SymmetricTridiagonal.from_zeta(z, m + 1))
        values = np.array([orthopoly.monic_from_zeta(z, j)(rep.support) for j in range(m + 1)])
        gram = (values * rep.weights) @ values.T
        error = max(error, float(np.max(np.abs(gram - np.diag(np.diag(gram))))))
    return _within("inner product", error, 1e-9)


@selftest_check("chebyshev-spectrum")
def check_chebyshev_spectrum(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for m in (2, 8, 64, 512):
        expected = np.sort(orthopoly.chebyshev_roots(m))
        for method in ("ql", "bisect"):
            computed = spectral.eigenvalues(orthopoly.chebyshev_matrix(m), method=method).eigenvalues
            error = max(error, float(np.max(np.abs(computed - expected))))
    return _within("eigenvalue", error, 1e-11)


@selftest_check("chebyshev-identity")
def check_chebyshev_identity(rng: np.random.Generator) -> tuple[bool, str]:
    x = np.linspace(0.0, 1.0, 100)
    error = 0.0
    for m in range(1, 9):
        scaled = 2.0 ** (2 * m - 1) * orthopoly.monic_chebyshev(m)(x)
        error = max(error, float(np.max(np.abs(scaled - orthopoly.chebyshev_T(m, x)))))
    return _within("value", error, 1e-10)


@selftest_check("chebyshev-eigvecs")
def check_chebyshev_eigvecs(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for m in range(1, 65):
        dense = orthopoly.chebyshev_matrix(m).to_dense()
        grid = orthopoly.chebyshev_grid(m)
        for root, vec in zip(grid.roots, grid.eigvecs):
            error = max(error, float(np.max(np.abs(dense @ vec - root * vec))))
            error = max(error, abs(float(vec @ vec) - m / 2))
    return _within("eigenpair or norm", error, 1e-12)


@selftest_check("principal-representation-moments")
def check_principal_moments(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for n in range(1, 9):
        z = _random_zeta(rng, 2 * n - 1)
        moments = spectral.spectral_moments(spectral.SymmetricTridiagonal.from_zeta(z, n), 2 * n - 1)
        exact = np.array([float(v) for v in orthopoly.exact_moments(z, 2 * n - 1)])
        error = max(error, float(np.max(np.abs(moments - exact))))
    return _within("moment", error, 1e-9)


@selftest_check("killip-nenciu-affine")
def check_killip_nenciu(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    seed = int(rng.integers(2**63))
    for replicate in range(1000):
        n = replicate % 50 + 1
        sample = ensemble.sample_canonical(ensemble.EnsembleSpec(n, seed, replicate))
        model = ensemble.build_killip_nenciu(sample)
        affine = ensemble.build_jacobi(sample, n).scaled(4.0, -2.0)
        error = max(error, model.max_abs_difference(affine))
    return _within("entry", error, 1e-12)


@selftest_check("eigenvalue-methods-agree")
def check_eigenvalue_methods(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for _ in range(100):
        size = int(rng.integers(1, 201))
        matrix = spectral.SymmetricTridiagonal(rng.uniform(0, 1, size), rng.uniform(0.01, 0.5, size - 1))
        ql = spectral.eigenvalues(matrix, method="ql").eigenvalues
        bisect = spectral.eigenvalues(matrix, method="bisect").eigenvalues
        error = max(error, float(np.max(np.abs(ql - bisect))))
    return _within("eigenvalue", error, 1e-10)


@selftest_check("similarity-invariants")
def check_similarity_invariants(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    seed = int(rng.integers(2**63))
    for replicate in range(50):
        sample = ensemble.sample_canonical(ensemble.EnsembleSpec(100, seed, replicate))
        jacobi = ensemble.build_jacobi(sample, 100)
        values = spectral.eigenvalues(jacobi).eigenvalues
        error = max(
            error,
            abs(values.sum() - jacobi.trace()),
            abs(np.sum(values**2) - jacobi.frobenius_squared()),
        )
    return _within("invariant", error, 1e-10)


@selftest_check("interlacing")
def check_interlacing(rng: np.random.Generator) -> tuple[bool, str]:
    failures = 0
    for _ in range(50):
        z = _random_zeta(rng, 19)
        matrix = spectral.SymmetricTridiagonal.from_zeta(z, 10)
        outer = spectral.eigenvalues(matrix)
        inner = spectral.eigenvalues(matrix.leading(9))
        failures += not spectral.interlaces(outer, inner)
    return failures == 0, f"{failures} of 50 matrices fail strict interlacing"


@selftest_check("gamma-oracle")
def check_gamma_oracle(rng: np.random.Generator) -> tuple[bool, str]:
    error = 0.0
    for m in range(1, 9):
        closed = stats.gamma_matrix(m).gamma_raw
        error = max(error, float(np.max(np.abs(closed - stats.quadratic_form_covariance(m)))))
    return _within("entry", error, 1e-10)


@selftest_check("gamma-prefactors")
def check_gamma_prefactors(rng: np.random.Generator) -> tuple[bool, str]:
    raw = stats.gamma_matrix(1).gamma_raw
    derived = stats.GammaMatrix(1, raw, "derived").gamma[0, 0]
    linear = stats.GammaMatrix(1, raw, "linear").gamma[0, 0]
    passed = math.isclose(derived, 1.0) and math.isclose(linear, 0.5)
    return passed, f"m = 1: derived {derived!r}, linear {linear!r}"


@selftest_check("covariances-psd")
def check_covariances_psd(rng: np.random.Generator) -> tuple[bool, str]:
    smallest = math.inf
    for k in range(1, 11):
        smallest = min(smallest, float(np.linalg.eigvalsh(canonical.sigma_matrix(k)).min()))
    for m in range(2, 9):
        for matrix in stats.intermediate_covariances(m):
            smallest = min(smallest, float(np.linalg.eigvalsh(matrix).min()))
    return smallest >= -1e-12, f"smallest eigenvalue {smallest:.3g}"


@selftest_check("moment-space-volume")
def check_volume(rng: np.random.Generator) -> tuple[bool, str]:
    values = [canonical.moment_space_volume(n) for n in (1, 2, 3)]
    passed = all(
        math.isclose(v, e, rel_tol=1e-12) for v, e in zip(values, (1.0, 1 / 6, 1 / 180))
    )
    return passed, f"volumes {values}"


@selftest_check("moment-space-volume-mc")
def check_volume_estimate(rng: np.random.Generator) -> tuple[bool, str]:
    details = []
    passed = True
    for n in (2, 3):
        estimate = canonical.estimate_moment_space_volume(n, 1_000_000, int(rng.integers(2**32)))
        gap = abs(estimate.value - canonical.moment_space_volume(n))
        passed = passed and gap <= 3 * estimate.stderr
        details.append(f"n={n}: {estimate.value:.5g} ({gap / estimate.stderr:.2f} s.e.)")
    return passed, "; ".join(details)


@selftest_check("joint-root-constant")
def check_joint_constant(rng: np.random.Generator) -> tuple[bool, str]:
    values = [math.exp(ensemble.joint_root_log_constant(n)) for n in (1, 2)]
    passed = math.isclose(values[0], 1.0, rel_tol=1e-12) and math.isclose(values[1], 15.0, rel_tol=1e-12)
    return passed, f"c(1) = {values[0]!r}, c(2) = {values[1]!r}"


def run_checks(seed: int, names: typing.Iterable[str] | None = None) -> list[CheckResult]:
    """Run the registered checks (all by default) in registration order."""
    selected = set(SELFTEST_CHECKS) if names is None else set(names)
    results = []
    for position, (name, func) in enumerate(SELFTEST_CHECKS.items()):
        if name not in selected:
            continue
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(position,)))
        )
        try:
            passed, detail = func(rng)
        except (MomentLabError, ArithmeticError, np.linalg.LinAlgError) as err:
            passed, detail = False, f"{type(err).__name__}: {err}"
        logger.debug("%s: %s", name, detail)
        results.append(CheckResult(name, bool(passed), detail))
    return results


class SelftestExperiment(BaseExperiment):
    name = "selftest"
    row_schema = CheckRowSchema

    def n_values(self, config: ExperimentConfig) -> list[int]:
        return []

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        return run_checks(config.seed)

    def report_rows(
        self,
        config: ExperimentConfig,
        rows: list[dict[str, typing.Any]],
        checks: list[CheckResult],
    ) -> list[dict[str, typing.Any]]:
        return [check.to_dict() for check in checks]
