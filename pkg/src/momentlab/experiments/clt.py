"""Central limit theorems for the random roots and the random moments."""

from __future__ import annotations

import math
import typing

import numpy as np

from .. import canonical, ensemble, spectral
from ..core import CheckResult
from ..experiment import BaseExperiment
from ..orthopoly import chebyshev_roots
from ..schemas import clt_moments_row_schema, clt_roots_row_schema
from ..stats import (
    GammaMatrix,
    covariance_estimate,
    frobenius_distance,
    gamma_matrix,
    mahalanobis_normality,
)

if typing.TYPE_CHECKING:
    import marshmallow

    from ..schemas import ExperimentConfig

COVARIANCE_TOL = 0.05
MEAN_SIGMAS = 3.0
# Relative tolerance on the variance of the first moment.
VARIANCE_RTOL = 0.05


def _matrix(rows: list[dict[str, typing.Any]], prefix: str, dim: int) -> np.ndarray:
    return np.array([[row[f"{prefix}{i}"] for i in range(1, dim + 1)] for row in rows])


def _covariance_summary(
    samples: np.ndarray, reference: np.ndarray
) -> dict[str, typing.Any]:
    estimate = covariance_estimate(samples)
    normality = mahalanobis_normality(samples, reference)
    return {
        "count": estimate.count,
        "mean": estimate.mean.tolist(),
        "mean_stderr": estimate.mean_stderr.tolist(),
        "cov": estimate.cov.tolist(),
        "frobenius": frobenius_distance(estimate.cov, reference),
        "mahalanobis_ks": normality.statistic,
        "mahalanobis_pvalue": normality.pvalue,
    }


def _mean_check(name: str, summary: dict[str, typing.Any]) -> CheckResult:
    mean = np.array(summary["mean"])
    stderr = np.array(summary["mean_stderr"])
    worst = float(np.max(np.abs(mean) / stderr))
    return CheckResult(
        f"{name} n={summary['n']}",
        worst <= MEAN_SIGMAS,
        f"largest |mean| is {worst:.3g} standard errors (limit {MEAN_SIGMAS})",
    )


class CltRootsExperiment(BaseExperiment):
    """Fluctuations 4√n(X − x) of the m largest-to-smallest roots of the
    degree-m random orthogonal polynomial around the Chebyshev roots."""

    name = "clt-roots"

    def get_row_schema(self, config: ExperimentConfig) -> type[marshmallow.Schema]:
        return clt_roots_row_schema(config.m)

    def replicate_row(
        self, config: ExperimentConfig, n: int, replicate: int
    ) -> dict[str, typing.Any]:
        m = config.m
        # The m x m truncation only reads the first 2m - 1 canonical moments
        sample = ensemble.sample_canonical(
            ensemble.EnsembleSpec(n, config.seed, replicate), length=2 * m - 1
        )
        roots = spectral.eigenvalues(ensemble.build_jacobi(sample, m)).descending()
        z = 4.0 * math.sqrt(n) * (roots - chebyshev_roots(m))
        row: dict[str, typing.Any] = {"n": n, "replicate": replicate}
        row.update({f"z{i}": float(v) for i, v in enumerate(z, start=1)})
        return row

    def summary(
        self, config: ExperimentConfig, n: int, rows: list[dict[str, typing.Any]]
    ) -> dict[str, typing.Any]:
        m = config.m
        reference = gamma_matrix(m, config.prefactor_mode)
        derived = GammaMatrix(m, reference.gamma_raw, "derived").gamma
        linear = GammaMatrix(m, reference.gamma_raw, "linear").gamma
        samples = _matrix(rows, "z", m)
        summary = _covariance_summary(samples, reference.gamma)
        summary.update(
            {
                "prefactor_mode": config.prefactor_mode,
                "gamma": reference.gamma.tolist(),
                "frobenius_derived": frobenius_distance(summary["cov"], derived),
                "frobenius_linear": frobenius_distance(summary["cov"], linear),
            }
        )
        return summary

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        results = []
        for s in summaries:
            results.append(_mean_check("roots-centred", s))
            results.append(
                CheckResult(
                    f"roots-covariance n={s['n']}",
                    s["frobenius"] <= COVARIANCE_TOL,
                    f"Frobenius distance {s['frobenius']:.4g} to Gamma "
                    f"({s['prefactor_mode']} prefactor, limit {COVARIANCE_TOL})",
                )
            )
            # Both prefactors agree at m = 2
            if config.m != 2 and config.prefactor_mode == "derived":
                results.append(
                    CheckResult(
                        f"linear-prefactor-rejected n={s['n']}",
                        s["frobenius_linear"] > COVARIANCE_TOL,
                        f"Frobenius distance {s['frobenius_linear']:.4g} to the 2/m Gamma",
                    )
                )
        return results


class CltMomentsExperiment(BaseExperiment):
    """Fluctuations √n(C − c⁰) of the first k random moments around the
    arcsine moments."""

    name = "clt-moments"

    def get_row_schema(self, config: ExperimentConfig) -> type[marshmallow.Schema]:
        return clt_moments_row_schema(config.k)

    def replicate_row(
        self, config: ExperimentConfig, n: int, replicate: int
    ) -> dict[str, typing.Any]:
        k = config.k
        sample = ensemble.sample_canonical(
            ensemble.EnsembleSpec(n, config.seed, replicate), length=k
        )
        moments = canonical.zeta_to_moments(sample.zeta, k)
        y = math.sqrt(n) * (moments - canonical.arcsine_moments(k))
        row: dict[str, typing.Any] = {"n": n, "replicate": replicate}
        row.update({f"y{i}": float(v) for i, v in enumerate(y, start=1)})
        return row

    def summary(
        self, config: ExperimentConfig, n: int, rows: list[dict[str, typing.Any]]
    ) -> dict[str, typing.Any]:
        sigma = canonical.sigma_matrix(config.k)
        summary = _covariance_summary(_matrix(rows, "y", config.k), sigma)
        summary["sigma"] = sigma.tolist()
        return summary

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        results = []
        sigma11 = canonical.sigma_matrix(1)[0, 0]
        for s in summaries:
            results.append(_mean_check("moments-centred", s))
            results.append(
                CheckResult(
                    f"moments-covariance n={s['n']}",
                    s["frobenius"] <= COVARIANCE_TOL,
                    f"Frobenius distance {s['frobenius']:.4g} to Sigma (limit {COVARIANCE_TOL})",
                )
            )
            variance = s["cov"][0][0]
            results.append(
                CheckResult(
                    f"first-moment-variance n={s['n']}",
                    abs(variance - sigma11) <= VARIANCE_RTOL * sigma11,
                    f"n Var(C_1) = {variance:.5g}, limit {sigma11:.5g} within {VARIANCE_RTOL:.0%}",
                )
            )
        return results
