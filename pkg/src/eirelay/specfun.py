"""Scalar special functions behind the closed-form PER expressions.

Everything here is pure. ``q_exact`` additionally accepts numpy arrays so the
simulator can evaluate conditional PERs for whole batches of packets.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc as _erfc

EULER_GAMMA = float(np.euler_gamma)
_SQRT1_2 = math.sqrt(0.5)
_FPMIN = 1e-300
_EPS = 1e-16
_MAX_ITER = 500
# ln C(n, k) is taken from exact integer arithmetic up to this n
_EXACT_BINOMIAL_MAX_N = 1000


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


def q_exact(x):
    """Gaussian tail probability Q(x) = P(Z > x) for a standard normal Z.

    Accepts a float or an array. ``+inf`` maps to 0 and ``-inf`` to 1; NaN is
    rejected.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError("q_exact is undefined for NaN")
    out = 0.5 * _erfc(arr * _SQRT1_2)
    if out.ndim == 0:
        return float(out)
    return out


def q_approx(x: float) -> float:
    """Two-exponential approximation of Q(x), valid for x >= 0.

    Q(x) ~ (1/4) * (exp(-x^2/2)/3 + exp(-2x^2/3)).
    """
    if not x >= 0:
        raise DomainError(f"q_approx requires x >= 0, got {x!r}")
    h = 0.5 * x * x
    return 0.25 * (math.exp(-h) / 3.0 + math.exp(-4.0 * h / 3.0))


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    else:
        raise ArithmeticError(f"E1 series did not converge at x={x!r}")
    return -EULER_GAMMA - math.log(x) - total


def _e1_scaled_cf(x: float) -> float:
    # exp(x) E1(x) by modified Lentz on the continued fraction
    # 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    b = x + 1.0
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x!r}")


def exp_integral_gamma0(x: float) -> float:
    """Upper incomplete gamma function at order zero, Gamma(0, x) = E1(x)."""
    if not x > 0 or math.isnan(x):
        raise DomainError(f"Gamma(0, x) requires x > 0, got {x!r}")
    if x < 1.0:
        return _e1_series(x)
    if math.isinf(x):
        return 0.0
    return _e1_scaled_cf(x) * math.exp(-x)


def scaled_exp_integral(x: float) -> float:
    """exp(x) * Gamma(0, x), evaluated without forming exp(x) for large x."""
    if not x > 0 or math.isnan(x):
        raise DomainError(f"exp(x) Gamma(0, x) requires x > 0, got {x!r}")
    if x < 1.0:
        return math.exp(x) * _e1_series(x)
    if math.isinf(x):
        return 0.0
    return _e1_scaled_cf(x)


def log_binomial(n: int, k: int) -> float:
    """Natural log of the binomial coefficient C(n, k)."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if n <= _EXACT_BINOMIAL_MAX_N:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
