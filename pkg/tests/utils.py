"""Helpers shared by the test modules"""

import json

import numpy as np

from momentlab import canonical


def random_canonical(rng, length, lo=0.2, hi=0.8):
    return rng.uniform(lo, hi, length)


def random_zeta(rng, length, lo=0.2, hi=0.8):
    return canonical.canonical_to_zeta(random_canonical(rng, length, lo, hi))


def arcsine_zeta(length):
    return canonical.canonical_to_zeta(np.full(length, 0.5))


def get_check(report, name):
    (check,) = [c for c in report.checks if c.name == name]
    return check


def column(report, name):
    return np.array([row[name] for row in report.rows])


def read_json(path):
    with open(path, encoding="utf-8") as fp:
        return json.load(fp)
