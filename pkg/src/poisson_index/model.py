"""Observations, prior families and the conjugate gamma update.

Gamma laws use the shape-rate convention: density proportional to
``lam**(a - 1) * exp(-b * lam)``, mean ``a / b``.
"""

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "ImproperPosteriorError",
    "Observation",
    "ProperGamma",
    "NonInformative",
    "Jeffreys",
    "ConditionalPower",
    "PriorSpec",
    "GammaPosterior",
    "posterior",
    "is_integer_shape",
    "parse_prior",
]

INTEGER_SHAPE_TOL = 1e-9


class ImproperPosteriorError(ValueError):
    """The prior and data do not combine into a proper gamma posterior."""


def _positive_finite(name, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {v!r}")


def _count(name, v):
    if isinstance(v, bool):
        raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if not isinstance(v, int) or v < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
    return v


@dataclass(frozen=True)
class Observation:
    """Event count ``k`` observed over exposure ``n`` (person-years or subjects)."""

    k: int
    n: float

    def __post_init__(self):
        object.__setattr__(self, "k", _count("k", self.k))
        _positive_finite("n", self.n)


@dataclass(frozen=True)
class ProperGamma:
    alpha: float
    beta: float

    def __post_init__(self):
        _positive_finite("alpha", self.alpha)
        _positive_finite("beta", self.beta)


@dataclass(frozen=True)
class NonInformative:
    """Improper prior proportional to ``1 / lam``."""


@dataclass(frozen=True)
class Jeffreys:
    """Improper prior proportional to ``lam ** -0.5``."""


@dataclass(frozen=True)
class ConditionalPower:
    """Historical likelihood raised to ``weight``, on top of the ``1 / lam`` base.

    The resulting prior is ``Ga(weight * x0, weight * m)``.  A historical
    count of zero is accepted; the prior then degenerates to the
    non-informative limit.
    """

    historical: Observation
    weight: float

    def __post_init__(self):
        if not isinstance(self.historical, Observation):
            raise TypeError("historical must be an Observation")
        if (
            isinstance(self.weight, bool)
            or not isinstance(self.weight, (int, float))
            or not 0.0 < self.weight <= 1.0
        ):
            raise ValueError(f"power-prior weight must lie in (0, 1], got {self.weight!r}")


PriorSpec = Union[ProperGamma, NonInformative, Jeffreys, ConditionalPower]


@dataclass(frozen=True)
class GammaPosterior:
    a: float
    b: float

    def __post_init__(self):
        if not math.isfinite(self.a) or not math.isfinite(self.b):
            raise ValueError(f"posterior parameters must be finite, got Ga({self.a!r}, {self.b!r})")
        if self.a <= 0 or self.b <= 0:
            raise ImproperPosteriorError(
                f"Ga({self.a!r}, {self.b!r}) is not a proper gamma law"
            )

    @property
    def mean(self):
        return self.a / self.b

    @property
    def variance(self):
        return self.a / self.b**2


def posterior(prior, obs):
    """Gamma posterior of a Poisson rate given ``prior`` and ``obs``.

    Raises
    ------
    ImproperPosteriorError
        Non-informative prior with zero events, or a power prior whose
        posterior shape ``weight * x0 + k`` is zero.
    """
    k, n = obs.k, obs.n
    if isinstance(prior, ProperGamma):
        return GammaPosterior(prior.alpha + k, prior.beta + n)
    if isinstance(prior, NonInformative):
        if k == 0:
            raise ImproperPosteriorError(
                "non-informative prior with k = 0 gives an improper posterior; "
                "the closed-form index does not apply"
            )
        return GammaPosterior(float(k), n)
    if isinstance(prior, Jeffreys):
        return GammaPosterior(k + 0.5, n)
    if isinstance(prior, ConditionalPower):
        w = prior.weight
        shape = w * prior.historical.k + k
        if shape == 0:
            raise ImproperPosteriorError(
                "power prior with x0 = 0 and k = 0 gives an improper posterior"
            )
        return GammaPosterior(shape, w * prior.historical.n + n)
    raise TypeError(f"unsupported prior {prior!r}")


def is_integer_shape(post):
    """True when the posterior shape is (within 1e-9 of) a positive integer."""
    nearest = round(post.a)
    return nearest >= 1 and abs(post.a - nearest) <= INTEGER_SHAPE_TOL


def parse_prior(text):
    """Parse ``noninformative``, ``jeffreys``, ``gamma:ALPHA,BETA`` or ``power:X0,M,A``."""
    kind, _, args = text.strip().partition(":")
    kind = kind.lower()
    if kind in ("noninformative", "non-informative", "ni"):
        return NonInformative()
    if kind == "jeffreys":
        return Jeffreys()
    values = [v for v in args.split(",") if v.strip()] if args else []
    try:
        nums = [float(v) for v in values]
    except ValueError:
        raise ValueError(f"cannot parse prior parameters in {text!r}") from None
    if kind == "gamma" and len(nums) == 2:
        return ProperGamma(*nums)
    if kind == "power" and len(nums) == 3:
        x0, m, w = nums
        return ConditionalPower(Observation(x0, m), w)
    raise ValueError(
        f"unrecognised prior {text!r}; expected noninformative, jeffreys, "
        "gamma:ALPHA,BETA or power:X0,M,A"
    )
