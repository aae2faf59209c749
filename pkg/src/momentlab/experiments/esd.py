"""Empirical spectral distribution of the random roots against the arcsine law."""

from __future__ import annotations

import functools
import typing

import numpy as np

from .. import ensemble, spectral
from ..core import CheckResult
from ..experiment import BaseExperiment
from ..orthopoly import chebyshev_matrix, chebyshev_roots
from ..schemas import EsdRowSchema
from ..stats import (
    LEVY_TOL,
    EmpiricalCdf,
    arcsine_cdf,
    ks_distance,
    levy_bound_statistic,
    levy_distance,
)

if typing.TYPE_CHECKING:
    from ..schemas import ExperimentConfig

# Bisection returns an upper bound within LEVY_TOL of the Lévy distance.
BOUND_SLACK = 3.0 * LEVY_TOL
KS_TARGET = 0.05
KS_TARGET_ORDER = 800


@functools.lru_cache(maxsize=16)
def _chebyshev_reference(n: int) -> tuple[EmpiricalCdf, spectral.SymmetricTridiagonal]:
    return EmpiricalCdf(chebyshev_roots(n)), chebyshev_matrix(n)


def expected_dispersions(n: int) -> tuple[float, float]:
    """Exact expectations of the even and odd dispersion columns."""
    variances = np.array(
        [ensemble.beta_symmetric_variance(a) for a in ensemble.beta_shapes(n)]
    )
    # variances[j - 1] belongs to P_j
    return float(variances[1::2].sum() / n), float(variances[0::2].sum() / n)


class EsdExperiment(BaseExperiment):
    name = "esd"
    row_schema = EsdRowSchema

    def replicate_row(
        self, config: ExperimentConfig, n: int, replicate: int
    ) -> dict[str, typing.Any]:
        sample = ensemble.sample_canonical(ensemble.EnsembleSpec(n, config.seed, replicate))
        jacobi = ensemble.build_jacobi(sample, n)
        roots = EmpiricalCdf(spectral.eigenvalues(jacobi).eigenvalues)
        reference, chebyshev = _chebyshev_reference(n)
        deviation = (sample.p - 0.5) ** 2
        return {
            "n": n,
            "replicate": replicate,
            "ks": ks_distance(roots, arcsine_cdf),
            "levy": levy_distance(roots, arcsine_cdf),
            "levy_chebyshev": levy_distance(roots, reference),
            "levy_bound": levy_bound_statistic(jacobi, chebyshev),
            "dispersion_even": float(deviation[1::2].sum() / n),
            "dispersion_odd": float(deviation[0::2].sum() / n),
            "seed": config.seed,
        }

    def summary(
        self, config: ExperimentConfig, n: int, rows: list[dict[str, typing.Any]]
    ) -> dict[str, typing.Any]:
        def column(name: str) -> np.ndarray:
            return np.array([row[name] for row in rows])

        levy_chebyshev = column("levy_chebyshev")
        violations = int(np.sum(levy_chebyshev**3 > column("levy_bound") + BOUND_SLACK))
        even, odd = expected_dispersions(n)
        return {
            "median_ks": float(np.median(column("ks"))),
            "median_levy": float(np.median(column("levy"))),
            "median_levy_chebyshev": float(np.median(levy_chebyshev)),
            "median_levy_bound": float(np.median(column("levy_bound"))),
            "bound_violations": violations,
            "mean_dispersion_even": float(column("dispersion_even").mean()),
            "mean_dispersion_odd": float(column("dispersion_odd").mean()),
            "expected_dispersion_even": even,
            "expected_dispersion_odd": odd,
            "levy_chebyshev_to_arcsine": levy_distance(_chebyshev_reference(n)[0], arcsine_cdf),
        }

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        results = [
            CheckResult(
                f"levy-bound n={s['n']}",
                s["bound_violations"] == 0,
                f"{s['bound_violations']} replicate(s) with levy^3 above (1/n) tr((J - D)^2)",
            )
            for s in summaries
        ]
        ordered = sorted(summaries, key=lambda s: s["n"])
        medians = [s["median_ks"] for s in ordered]
        if len(medians) > 1:
            results.append(
                CheckResult(
                    "ks-decreasing",
                    all(a > b for a, b in zip(medians, medians[1:])),
                    "median KS by n: " + ", ".join(f"{s['n']}: {s['median_ks']:.4g}" for s in ordered),
                )
            )
        results.extend(
            CheckResult(
                f"ks-small n={s['n']}",
                s["median_ks"] < KS_TARGET,
                f"median KS {s['median_ks']:.4g} (threshold {KS_TARGET})",
            )
            for s in ordered
            if s["n"] >= KS_TARGET_ORDER
        )
        return results
