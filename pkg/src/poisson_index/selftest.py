"""Invariant sweeps shared by the ``selftest`` subcommand.

Each suite returns a ``SuiteResult`` with the worst observed discrepancy
and the bound it was held to.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .conditional_test import check_duality, p_value_expressions
from .index import ComparisonQuery, Direction, index
from .mc_oracle import estimate_index
from .model import GammaPosterior, Observation

EXPRESSION_BOUND = 1e-10
DUALITY_BOUND = 1e-12
MC_SIGMAS = 4.0


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    bound: float
    cases: int
    detail: str = ""

    def to_dict(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "worst": self.worst,
            "bound": self.bound,
            "cases": self.cases,
            "detail": self.detail,
        }


def expression_agreement(shapes, rates, thresholds, bound=EXPRESSION_BOUND):
    """Largest spread among the index expressions and the p-value forms."""
    worst = 0.0
    cases = 0
    for a1, a2, b1, b2, c in itertools.product(shapes, shapes, rates, rates, thresholds):
        report = index(GammaPosterior(float(a1), b1), GammaPosterior(float(a2), b2),
                       ComparisonQuery(Direction.LESS, c))
        worst = max(worst, report.spread())
        # the same (counts, exposures) read as conditional-test data
        forms = p_value_expressions(Observation(a1, b1), Observation(a2, b2),
                                    ComparisonQuery(Direction.LESS, c))
        worst = max(worst, max(forms.values()) - min(forms.values()))
        cases += 1
    return SuiteResult("expression agreement", worst <= bound, worst, bound, cases)


def duality_sweep(k1s, k2s, exposures, thresholds, bound=DUALITY_BOUND, perturb=0.0):
    """Worst ``|theta_shifted - (1 - p)|``; ``perturb`` is a negative-control hook."""
    worst = 0.0
    cases = 0
    for k1, k2, (n1, n2), c in itertools.product(k1s, k2s, exposures, thresholds):
        chk = check_duality(Observation(k1, n1), Observation(k2, n2), c)
        worst = max(worst, abs(chk.theta_shifted + perturb - chk.one_minus_p))
        cases += 1
    return SuiteResult("duality", worst <= bound, worst, bound, cases)


def random_posterior_pairs(count, seed):
    """Shapes in [0.5, 100], rates log-uniform in [1, 1e5], c log-uniform in [0.25, 4]."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = []
    for _ in range(count):
        a1, a2 = rng.uniform(0.5, 100.0, 2)
        b1, b2 = 10.0 ** rng.uniform(0.0, 5.0, 2)
        c = 2.0 ** rng.uniform(-2.0, 2.0)
        pairs.append((GammaPosterior(float(a1), float(b1)), GammaPosterior(float(a2), float(b2)), float(c)))
    return pairs


def mc_band(theta, estimate):
    """Acceptance half-width: ``MC_SIGMAS`` standard errors.

    The larger of the plug-in error and the error implied by the closed
    form is used, so an estimate of exactly 0 or 1 is not given a zero band.
    """
    null_se = math.sqrt(theta * (1.0 - theta) / estimate.draws)
    return MC_SIGMAS * max(estimate.std_error, null_se)


def mc_concordance(pairs, draws, seed, max_excursions=1):
    excursions = 0
    worst = 0.0
    for i, (post1, post2, c) in enumerate(pairs):
        query = ComparisonQuery(Direction.LESS, c)
        theta = index(post1, post2, query).theta
        est = estimate_index(post1, post2, query, draws, (seed + i) % 2**64)
        band = mc_band(theta, est)
        ratio = abs(est.estimate - theta) / band if band > 0 else (0.0 if est.estimate == theta else math.inf)
        worst = max(worst, ratio)
        if ratio > 1.0:
            excursions += 1
    return SuiteResult(
        "monte carlo concordance",
        excursions <= max_excursions,
        worst,
        1.0,
        len(pairs),
        f"{excursions} excursion(s) beyond {MC_SIGMAS:g} standard errors",
    )


def run_all(draws, seed, perturb=0.0):
    shapes = range(1, 21)
    rates = (1.0, 10.0, 28010.0, 19017.0)
    thresholds = (0.5, 1.0, 1.5, 2.0)
    exposures = ((1.0, 1.0), (10.0, 10.0), (10.0, 20.0), (28010.0, 19017.0))
    return [
        expression_agreement(shapes, rates, thresholds),
        duality_sweep(range(0, 21), range(1, 21), exposures, thresholds, perturb=perturb),
        mc_concordance(random_posterior_pairs(5, seed), draws, seed),
    ]
