"""Goodness of fit of the n = 2 root pairs to the density 30 (x − y)⁴ on x > y."""

from __future__ import annotations

import math
import typing

import numpy as np
from scipy import integrate
from scipy import stats as spstats

from .. import ensemble, spectral
from ..core import CheckResult
from ..experiment import BaseExperiment
from ..schemas import DensityRowSchema

if typing.TYPE_CHECKING:
    from ..schemas import ExperimentConfig

ORDER = 2
BINS = 20
MIN_EXPECTED = 5.0
PVALUE_THRESHOLD = 1e-3
MEAN_SIGMAS = 3.0
CONSTANT_RTOL = 1e-12


def _antiderivative(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """F with ∂²F/∂x∂y = −(x − y)⁴."""
    return (x - y) ** 6 / 30.0


def cell_probabilities(bins: int = BINS) -> np.ndarray:
    """Probability of each cell (i, j) of a bins x bins grid under the
    sorted density 30 (x − y)⁴, x > y; row i bins the larger root.

    Cells above the diagonal get probability zero.
    """
    edges = np.linspace(0.0, 1.0, bins + 1)
    a, b = edges[:-1, None], edges[1:, None]
    c, d = edges[None, :-1], edges[None, 1:]
    probs = -30.0 * (
        _antiderivative(b, d) - _antiderivative(a, d) - _antiderivative(b, c) + _antiderivative(a, c)
    )
    probs = np.tril(probs, k=-1)
    width = np.diff(edges)
    probs[np.diag_indices(bins)] = width**6
    return probs


def pooled_chisquare(observed: np.ndarray, expected: np.ndarray) -> tuple[float, float, int]:
    """Chi-square test after pooling every cell whose expected count is
    below MIN_EXPECTED into one bin. Returns (statistic, p-value, bins)."""
    small = expected < MIN_EXPECTED
    obs = list(observed[~small])
    exp = list(expected[~small])
    if small.any():
        obs.append(observed[small].sum())
        exp.append(expected[small].sum())
    obs_arr, exp_arr = np.array(obs, dtype=np.float64), np.array(exp)
    # chisquare wants identical totals
    exp_arr *= obs_arr.sum() / exp_arr.sum()
    result = spstats.chisquare(obs_arr, exp_arr)
    return float(result.statistic), float(result.pvalue), int(obs_arr.size)


def expected_min_root() -> float:
    """E[min root] = ∫∫_{y<x} y · 30 (x − y)⁴ dy dx by 2-D quadrature."""
    value, _ = integrate.dblquad(
        lambda y, x: y * 30.0 * (x - y) ** 4, 0.0, 1.0, 0.0, lambda x: x
    )
    return float(value)


class DensityExperiment(BaseExperiment):
    name = "density-check"
    row_schema = DensityRowSchema

    def n_values(self, config: ExperimentConfig) -> list[int]:
        return [ORDER]

    def replicate_row(
        self, config: ExperimentConfig, n: int, replicate: int
    ) -> dict[str, typing.Any]:
        sample = ensemble.sample_canonical(ensemble.EnsembleSpec(n, config.seed, replicate))
        low, high = spectral.eigenvalues(ensemble.build_jacobi(sample, n)).eigenvalues
        return {"n": n, "replicate": replicate, "x_max": float(high), "x_min": float(low)}

    def summary(
        self, config: ExperimentConfig, n: int, rows: list[dict[str, typing.Any]]
    ) -> dict[str, typing.Any]:
        x_max = np.array([row["x_max"] for row in rows])
        x_min = np.array([row["x_min"] for row in rows])
        counts, _, _ = np.histogram2d(x_max, x_min, bins=BINS, range=[[0.0, 1.0], [0.0, 1.0]])
        lower = np.tril_indices(BINS)
        expected = cell_probabilities() * len(rows)
        statistic, pvalue, cells = pooled_chisquare(counts[lower], expected[lower])
        return {
            "count": len(rows),
            "chi2": statistic,
            "pvalue": pvalue,
            "cells": cells,
            "constant_n1": math.exp(ensemble.joint_root_log_constant(1)),
            "constant_n2": math.exp(ensemble.joint_root_log_constant(2)),
            "mean_min_root": float(x_min.mean()),
            "mean_min_root_stderr": float(x_min.std(ddof=1) / math.sqrt(len(rows))),
            "mean_min_root_expected": expected_min_root(),
        }

    def checks(
        self, config: ExperimentConfig, summaries: list[dict[str, typing.Any]]
    ) -> list[CheckResult]:
        (s,) = summaries
        gap = abs(s["mean_min_root"] - s["mean_min_root_expected"])
        return [
            CheckResult(
                "root-pair-chisquare",
                s["pvalue"] > PVALUE_THRESHOLD,
                f"chi2 = {s['chi2']:.4g} over {s['cells']} cells, p = {s['pvalue']:.4g}",
            ),
            CheckResult(
                "normalizing-constant",
                math.isclose(s["constant_n1"], 1.0, rel_tol=CONSTANT_RTOL)
                and math.isclose(s["constant_n2"], 15.0, rel_tol=CONSTANT_RTOL),
                f"c(1) = {s['constant_n1']!r}, c(2) = {s['constant_n2']!r}",
            ),
            CheckResult(
                "mean-min-root",
                gap <= MEAN_SIGMAS * s["mean_min_root_stderr"],
                f"{s['mean_min_root']:.6f} vs {s['mean_min_root_expected']:.6f} "
                f"({gap / s['mean_min_root_stderr']:.2f} standard errors)",
            ),
        ]
