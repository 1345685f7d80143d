"""Bayesian index ``P(lam1 / lam2 < c | data)`` between two gamma posteriors.

The regularized incomplete beta form is canonical.  The F-distribution,
binomial-sum, negative-binomial-sum and terminating hypergeometric forms
are evaluated alongside it as cross-checks wherever they apply.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

from .model import GammaPosterior, is_integer_shape
from .special_functions import (
    DomainError,
    _log_2f1_terminating,
    binomial_tail,
    f_cdf,
    log_beta,
    neg_binomial_cdf,
    reg_inc_beta,
)

__all__ = [
    "Direction",
    "ComparisonQuery",
    "IndexReport",
    "ExpressionDisagreementWarning",
    "EXPRESSIONS",
    "NOT_APPLICABLE",
    "index",
    "theta_less",
    "ratio_cdf",
    "ratio_pdf",
]

EXPRESSIONS = ("IncBeta", "FDist", "BinomialSum", "NegBinomialSum", "Hypergeometric2F1")
NOT_APPLICABLE = "not-applicable"
DISAGREEMENT_WARN = 1e-9


class ExpressionDisagreementWarning(RuntimeWarning):
    pass


class Direction(str, enum.Enum):
    LESS = "less"
    GREATER = "greater"


@dataclass(frozen=True)
class ComparisonQuery:
    """``direction`` of the comparison of ``lam1 / lam2`` against ``threshold``."""

    direction: Direction = Direction.LESS
    threshold: float = 1.0

    def __post_init__(self):
        try:
            direction = Direction(
                self.direction.lower() if isinstance(self.direction, str) else self.direction
            )
        except ValueError:
            raise ValueError(f"direction must be 'less' or 'greater', got {self.direction!r}") from None
        object.__setattr__(self, "direction", direction)
        c = self.threshold
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c) or c <= 0:
            raise ValueError(f"threshold must be a positive finite number, got {c!r}")


@dataclass(frozen=True)
class IndexReport:
    theta: float
    by_expression: dict
    max_disagreement: float
    posterior1: GammaPosterior = field(repr=False, default=None)
    posterior2: GammaPosterior = field(repr=False, default=None)
    query: ComparisonQuery = field(repr=False, default=None)

    def applicable(self):
        return {k: v for k, v in self.by_expression.items() if v != NOT_APPLICABLE}

    def spread(self):
        """Largest pairwise gap among the applicable expressions."""
        vals = list(self.applicable().values())
        return max(vals) - min(vals)

    def to_dict(self):
        out = {
            "theta": self.theta,
            "by_expression": dict(self.by_expression),
            "max_disagreement": self.max_disagreement,
        }
        if self.query is not None:
            out["direction"] = self.query.direction.value
            out["threshold"] = self.query.threshold
        for i, post in ((1, self.posterior1), (2, self.posterior2)):
            if post is not None:
                out[f"posterior{i}"] = {"shape": post.a, "rate": post.b}
        return out


def _split(b1, b2, c):
    u = b1 * c
    s = u + b2
    return u / s, b2 / s


def theta_less(post1, post2, c=1.0):
    """Canonical ``P(lam1 / lam2 < c)``: ``I_{b1 c / (b1 c + b2)}(a1, a2)``."""
    x, y = _split(post1.b, post2.b, c)
    return reg_inc_beta(x, post1.a, post2.a, xc=y)


def _hypergeometric_form(a1, a2, y):
    # 1 - z^a2 / (a2 B(a1, a2)) * 2F1(a2, 1 - a1; 1 + a2; z) with z = b2 / (b1 c + b2)
    if y == 0.0:
        return 1.0
    log_f, sign = _log_2f1_terminating(a2, int(round(a1)) - 1, 1.0 + a2, y)
    if sign == 0:
        return 1.0
    tail = sign * math.exp(a2 * math.log(y) - math.log(a2) - log_beta(a1, a2) + log_f)
    return 1.0 - tail


def index(post1, post2, query=None):
    """Bayesian index for ``query`` evaluated by every applicable expression.

    Parameters
    ----------
    post1, post2 : GammaPosterior
        Posteriors of the two rates.
    query : ComparisonQuery, optional
        Defaults to ``P(lam1 < lam2)``.

    Returns
    -------
    IndexReport
        ``theta`` is the incomplete-beta value.  The binomial and
        negative-binomial sums need integer shapes on both arms, the
        hypergeometric form an integer ``a1``; otherwise the entry is
        ``"not-applicable"``.  ``GREATER`` is the complement of ``LESS``.
    """
    query = ComparisonQuery() if query is None else query
    for post in (post1, post2):
        if not isinstance(post, GammaPosterior):
            raise TypeError(f"expected GammaPosterior, got {post!r}")
    a1, b1, a2, b2 = post1.a, post1.b, post2.a, post2.b
    c = query.threshold
    x, y = _split(b1, b2, c)

    less = dict.fromkeys(EXPRESSIONS, NOT_APPLICABLE)
    less["IncBeta"] = reg_inc_beta(x, a1, a2, xc=y)
    less["FDist"] = f_cdf((b1 * c / a1) / (b2 / a2), 2.0 * a1, 2.0 * a2)
    int1, int2 = is_integer_shape(post1), is_integer_shape(post2)
    if int1 and int2:
        n1, n2 = int(round(a1)), int(round(a2))
        less["BinomialSum"] = binomial_tail(n1 + n2 - 1, 0, n2 - 1, y, qc=x)
        if x > 0.0 and y > 0.0:
            less["NegBinomialSum"] = neg_binomial_cdf(n1, n2 - 1, x, pc=y)
    if int1:
        less["Hypergeometric2F1"] = _hypergeometric_form(a1, a2, y)

    if query.direction is Direction.GREATER:
        values = {k: (v if v == NOT_APPLICABLE else 1.0 - v) for k, v in less.items()}
    else:
        values = less
    theta = values["IncBeta"]
    gap = max(abs(v - theta) for v in values.values() if v != NOT_APPLICABLE)
    if gap > DISAGREEMENT_WARN:
        warnings.warn(
            f"index expressions disagree by {gap:.3g} for Ga({a1}, {b1}) vs Ga({a2}, {b2}), c={c}",
            ExpressionDisagreementWarning,
            stacklevel=2,
        )
    return IndexReport(theta, values, gap, post1, post2, query)


def _check_point(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or math.isnan(x) or x <= 0:
        raise DomainError(f"ratio must be positive, got {x!r}")


def ratio_cdf(post1, post2, x):
    """Posterior CDF of ``lam1 / lam2`` at ``x > 0``."""
    _check_point(x)
    if x == math.inf:
        return 1.0
    return theta_less(post1, post2, x)


def ratio_pdf(post1, post2, x):
    """Posterior density of ``lam1 / lam2`` at ``x > 0``, evaluated in log space."""
    _check_point(x)
    if x == math.inf:
        return 0.0
    a1, b1, a2, b2 = post1.a, post1.b, post2.a, post2.b
    u = b1 * x
    s = u + b2
    log_f = a1 * math.log(u / s) + a2 * math.log(b2 / s) - math.log(x) - log_beta(a1, a2)
    return math.exp(log_f)
