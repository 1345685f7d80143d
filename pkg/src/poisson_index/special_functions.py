"""Numerical kernels: log-gamma, regularized incomplete beta, F CDF,
terminating Gauss hypergeometric series and log-space binomial tails.

Everything here is a pure function of its arguments.  Where a caller has
``1 - x`` available more accurately than by subtraction (e.g. ``b2 / (b1 + b2)``
next to ``b1 / (b1 + b2)``), the complement can be passed explicitly.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "ConvergenceError",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "log_gamma",
    "log_beta",
    "log_binom",
    "reg_inc_beta",
    "f_cdf",
    "gauss_2f1_terminating",
    "binomial_tail",
    "neg_binomial_cdf",
]

_FPMIN = 1e-300
_ARANGE = np.arange(4096, dtype=float)
# above this size math.comb gets slow enough that lgamma differences win
_EXACT_COMB_LIMIT = 1024


class DomainError(ValueError):
    """An argument lies outside the domain of a numerical kernel."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation failed to converge within ``max_iter``."""


@dataclass(frozen=True)
class Tolerance:
    """Stopping rule for iterative kernels."""

    rel_eps: float = 1e-15
    max_iter: int = 500

    def __post_init__(self):
        if not (0.0 < self.rel_eps <= 1e-6):
            raise DomainError(f"rel_eps must lie in (0, 1e-6], got {self.rel_eps!r}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 50:
            raise DomainError(f"max_iter must be an integer >= 50, got {self.max_iter!r}")


DEFAULT_TOLERANCE = Tolerance()


def _is_int(v):
    return isinstance(v, int) or (isinstance(v, float) and v.is_integer())


def _check_finite(name, v):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise DomainError(f"{name} must be a finite real number, got {v!r}")


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    _check_finite("x", x)
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


@lru_cache(maxsize=4096)
def _log_comb_exact(n, k):
    return math.log(math.comb(n, k))


def log_binom(n, k):
    """``log C(n, k)`` for integers ``0 <= k <= n``.

    Exact binomial coefficients are used for moderate ``n`` (one rounding
    of the logarithm); larger ``n`` falls back to log-gamma differences.
    """
    n, k = int(n), int(k)
    if k < 0 or k > n:
        raise DomainError(f"log_binom requires 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    if n <= _EXACT_COMB_LIMIT:
        return _log_comb_exact(n, k)
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@lru_cache(maxsize=512)
def _log_binom_row(n):
    """``log C(n, r)`` for ``r = 0..n`` as a read-only array."""
    if n <= _EXACT_COMB_LIMIT:
        half = [_log_comb_exact(n, r) if 0 < r < n else 0.0 for r in range(n // 2 + 1)]
        row = np.array(half + half[: (n + 1) // 2][::-1])
    else:
        r = np.arange(n + 1)
        lg = np.vectorize(math.lgamma, otypes=[float])
        row = math.lgamma(n + 1) - lg(r + 1.0) - lg(n - r + 1.0)
    row.setflags(write=False)
    return row


def log_beta(a, b):
    """``log B(a, b)`` for ``a, b > 0``."""
    if _is_int(a) and _is_int(b) and a + b - 1 <= _EXACT_COMB_LIMIT:
        # B(a, b) = 1 / ((a + b - 1) * C(a + b - 2, a - 1))
        a, b = int(a), int(b)
        return -math.log(a + b - 1) - log_binom(a + b - 2, a - 1)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(x, a, b, tol):
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, tol.max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol.rel_eps:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge in {tol.max_iter} "
        f"iterations (x={x!r}, a={a!r}, b={b!r})"
    )


def _inc_beta_lower(x, y, a, b, tol):
    # I_x(a, b) evaluated directly; caller guarantees x is on the convergent side
    log_front = a * math.log(x) + b * math.log(y) - log_beta(a, b)
    return math.exp(log_front) * _beta_cf(x, a, b, tol) / a


def reg_inc_beta(x, a, b, tol=None, *, xc=None):
    """Regularized incomplete beta function ``I_x(a, b)``.

    Parameters
    ----------
    x : float
        Evaluation point in ``[0, 1]``.
    a, b : float
        Positive shape parameters.
    tol : Tolerance, optional
        Continued-fraction stopping rule, defaults to ``DEFAULT_TOLERANCE``.
    xc : float, optional
        ``1 - x`` if the caller can supply it without cancellation.

    Returns
    -------
    float
        ``I_x(a, b)``.  Values of ``x`` beyond ``(a + 1) / (a + b + 2)`` are
        evaluated as ``1 - I_{1-x}(b, a)`` so the continued fraction always
        runs on its fast side.
    """
    tol = DEFAULT_TOLERANCE if tol is None else tol
    _check_finite("x", x)
    _check_finite("a", a)
    _check_finite("b", b)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= x <= 1, got {x!r}")
    if a <= 0 or b <= 0:
        raise DomainError(f"reg_inc_beta requires a, b > 0, got a={a!r}, b={b!r}")
    y = 1.0 - x if xc is None else xc
    if x == 0.0 or y == 1.0:
        return 0.0
    if x == 1.0 or y == 0.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _inc_beta_lower(y, x, b, a, tol)
    return _inc_beta_lower(x, y, a, b, tol)


def f_cdf(x, d1, d2, tol=None):
    """CDF of the F distribution with ``(d1, d2)`` degrees of freedom."""
    if isinstance(x, (int, float)) and x == math.inf:
        return 1.0
    _check_finite("x", x)
    _check_finite("d1", d1)
    _check_finite("d2", d2)
    if x < 0:
        raise DomainError(f"f_cdf requires x >= 0, got {x!r}")
    if d1 <= 0 or d2 <= 0:
        raise DomainError(f"f_cdf requires positive degrees of freedom, got {d1!r}, {d2!r}")
    if x == 0:
        return 0.0
    num = d1 * x
    den = num + d2
    return reg_inc_beta(num / den, d1 / 2.0, d2 / 2.0, tol, xc=d2 / den)


_RESCALE = 1e250


def _log_series_sum(a, m, c, z):
    """``(log|S|, sign)`` of ``S = sum_{t=0}^{m} (a)_t (-m)_t / (c)_t z^t / t!``.

    Terms come from the ratio recurrence; the running term and its
    exactly-summed partials are rescaled before they can overflow.
    """
    terms = [1.0]
    term = 1.0
    log_scale = 0.0
    for t in range(m):
        term *= (a + t) * (t - m) / ((c + t) * (t + 1)) * z
        if term == 0.0:
            break
        if abs(term) > _RESCALE:
            terms = [v / _RESCALE for v in terms]
            term /= _RESCALE
            log_scale += math.log(_RESCALE)
        terms.append(term)
    total = math.fsum(terms)
    if total == 0.0:
        return -math.inf, 0
    return log_scale + math.log(abs(total)), (1 if total > 0 else -1)


def _log_2f1_terminating(a, m, c, z):
    """``(log|F|, sign)`` for ``F = 2F1(a, -m; c; z)``, ``m`` a non-negative integer.

    For ``0 < z < 1`` with ``a, c > 0`` the direct terms alternate and
    cancel badly once ``m`` is large; if also ``c > a`` the Pfaff transform
    ``F = (1 - z)^m 2F1(c - a, -m; c; z / (z - 1))`` has terms of one sign
    and is summed instead.
    """
    if 0.0 < z < 1.0 and a > 0 and c > a and m > 0:
        log_s, sign = _log_series_sum(c - a, m, c, z / (z - 1.0))
        return log_s + m * math.log1p(-z), sign
    return _log_series_sum(a, m, c, z)


def _check_2f1_args(a, b, c, z):
    for name, v in (("a", a), ("b", b), ("c", c), ("z", z)):
        _check_finite(name, v)
    if not (_is_int(b) and b <= 0):
        raise DomainError(
            f"only the terminating series is supported: b must be a non-positive integer, got {b!r}"
        )
    if _is_int(c) and c <= 0:
        raise DomainError(f"c must not be a non-positive integer, got {c!r}")
    return int(-b)


def gauss_2f1_terminating(a, b, c, z):
    """Terminating Gauss hypergeometric series ``2F1(a, b; c; z)``.

    ``b`` must be a non-positive integer so the series is the finite sum
    ``sum_{t=0}^{-b} (a)_t (b)_t / (c)_t * z^t / t!``.  Terms are formed in
    log space and added with exact (``math.fsum``) summation.
    """
    m = _check_2f1_args(a, b, c, z)
    if not -1.0 < z < 1.0:
        raise DomainError(f"z must lie in (-1, 1), got {z!r}")
    log_f, sign = _log_2f1_terminating(a, m, c, z)
    return sign * math.exp(log_f) if sign else 0.0


@lru_cache(maxsize=4096)
def _neg_binom_log_coefs(a, kmax):
    return tuple(log_binom(a + r - 1, a - 1) for r in range(kmax + 1))


def _sum_log_terms(log_terms):
    top = max(log_terms)
    return math.exp(top) * math.fsum([math.exp(t - top) for t in log_terms])


def binomial_tail(n, lo, hi, q, *, qc=None):
    """``sum_{r=lo}^{hi} C(n, r) q^r (1-q)^(n-r)`` with log-space terms.

    ``qc`` optionally supplies ``1 - q`` computed without cancellation.
    """
    if not (_is_int(n) and _is_int(lo) and _is_int(hi)):
        raise DomainError(f"n, lo, hi must be integers, got {n!r}, {lo!r}, {hi!r}")
    n, lo, hi = int(n), int(lo), int(hi)
    if not 0 <= lo <= hi <= n:
        raise DomainError(f"binomial_tail requires 0 <= lo <= hi <= n, got {lo}, {hi}, {n}")
    _check_finite("q", q)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q!r}")
    if lo == 0 and hi == n:
        return 1.0
    qc = 1.0 - q if qc is None else qc
    if q == 0.0 or qc == 0.0:
        # all mass sits on r = 0 or r = n
        edge = 0 if q == 0.0 else n
        return 1.0 if lo <= edge <= hi else 0.0
    r = _ARANGE[lo : hi + 1] if hi < _ARANGE.size else np.arange(lo, hi + 1, dtype=float)
    terms = _log_binom_row(n)[lo : hi + 1] + r * math.log(q) + (n - r) * math.log(qc)
    top = terms.max()
    return min(1.0, math.exp(top) * math.fsum(np.exp(terms - top).tolist()))


def neg_binomial_cdf(a, kmax, p, *, pc=None):
    """``sum_{r=0}^{kmax} C(a+r-1, a-1) p^a (1-p)^r`` in log space."""
    if not (_is_int(a) and _is_int(kmax)):
        raise DomainError(f"a and kmax must be integers, got {a!r}, {kmax!r}")
    a, kmax = int(a), int(kmax)
    if a < 1 or kmax < 0:
        raise DomainError(f"neg_binomial_cdf requires a >= 1 and kmax >= 0, got {a}, {kmax}")
    _check_finite("p", p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    pc = 1.0 - p if pc is None else pc
    lp, lpc = math.log(p), math.log(pc)
    head = a * lp
    terms = [c + head + r * lpc for r, c in enumerate(_neg_binom_log_coefs(a, kmax))]
    return min(1.0, _sum_log_terms(terms))
