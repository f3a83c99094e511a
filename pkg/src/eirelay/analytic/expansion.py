"""Sum-of-exponentials representation of the BPSK packet error rate.

With Q(x) ~ (1/4)(e^{-x^2/2}/3 + e^{-2x^2/3}) the block PER becomes

    PER(g) ~ sum_{n=1}^{K} D[K,n] sum_{m=0}^{n} C[n,m] exp(-A[n,m] g)

    D[K,n] = (-1)^(n+1) binom(K, n)
    C[n,m] = binom(n, m) / (4^n 3^(n-m))
    A[n,m] = n + m/3

so any fading average reduces to evaluating an MGF at the exponents A[n,m].
The D terms alternate in sign and grow like binom(K, K/2) / 3^(K/2), hence
the log-domain bookkeeping and ``math.fsum`` accumulation below.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from eirelay.specfun import DomainError, log_binomial, q_exact

K_MAX = 64
CANCELLATION_TOL = 1e-9

_LOG4 = math.log(4.0)
_LOG3 = math.log(3.0)


class CapabilityError(ValueError):
    """The expansion path cannot serve this request; use the quadrature path."""


class NumericalCancellationError(ArithmeticError):
    """The alternating expansion lost too many digits to be trusted."""


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Flattened (n, m) tables for one packet length K.

    Entry ``j`` corresponds to the pair ``(n[j], m[j])`` with n = 1..K and
    m = 0..n, in lexicographic order.
    """

    K: int
    n: np.ndarray
    m: np.ndarray
    exponent: np.ndarray  # A[n,m] as float
    log_c: np.ndarray  # ln C[n,m]
    d_sign: np.ndarray  # sign of D[K,n], broadcast over m
    log_d: np.ndarray  # ln |D[K,n]|, broadcast over m
    weight: np.ndarray  # D[K,n] C[n,m], correctly rounded from exact rationals

    def _index(self, n: int, m: int) -> int:
        if not (1 <= n <= self.K and 0 <= m <= n):
            raise IndexError(f"(n={n}, m={m}) outside 1 <= n <= {self.K}, 0 <= m <= n")
        return (n - 1) * (n + 2) // 2 + m

    def D(self, n: int) -> float:
        j = self._index(n, 0)
        return float(self.d_sign[j] * math.exp(self.log_d[j]))

    def C(self, n: int, m: int) -> float:
        return math.exp(self.log_c[self._index(n, m)])

    def A(self, n: int, m: int) -> Fraction:
        self._index(n, m)
        return Fraction(3 * n + m, 3)

    def __len__(self) -> int:
        return len(self.n)


@functools.lru_cache(maxsize=None)
def expansion_coefficients(K: int, k_max: int = K_MAX) -> ExpansionCoefficients:
    """Coefficient tables D, C, A for packet length ``K``."""
    if K < 1:
        raise DomainError(f"packet length must be >= 1, got {K}")
    if K > k_max:
        raise CapabilityError(
            f"K={K} exceeds the expansion limit K_max={k_max}; "
            "use the quadrature path (method='quadrature')"
        )
    ns, ms, log_c, sign, log_d, weight = [], [], [], [], [], []
    for n in range(1, K + 1):
        ld = log_binomial(K, n)
        sg = 1.0 if n % 2 == 1 else -1.0
        for m in range(n + 1):
            ns.append(n)
            ms.append(m)
            log_c.append(log_binomial(n, m) - n * _LOG4 - (n - m) * _LOG3)
            sign.append(sg)
            log_d.append(ld)
            # going through logs would cost ~|ln w| ulps per term, which the
            # cancellation then amplifies
            exact = Fraction(math.comb(K, n) * math.comb(n, m), 4**n * 3 ** (n - m))
            weight.append(sg * float(exact))
    n_arr = np.array(ns, dtype=np.int64)
    m_arr = np.array(ms, dtype=np.int64)
    tables = ExpansionCoefficients(
        K=K,
        n=n_arr,
        m=m_arr,
        exponent=n_arr + m_arr / 3.0,
        log_c=np.array(log_c),
        d_sign=np.array(sign),
        log_d=np.array(log_d),
        weight=np.array(weight),
    )
    for arr in (tables.n, tables.m, tables.exponent, tables.log_c, tables.d_sign, tables.log_d, tables.weight):
        arr.setflags(write=False)
    return tables


def expansion_sum(K: int, log_mgf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Evaluate sum D[K,n] C[n,m] Phi(A[n,m]) for an MGF given in log form.

    ``log_mgf`` receives the array of exponents A and must return ln Phi(A)
    elementwise (``-inf`` where Phi underflows to zero).
    """
    coef = expansion_coefficients(K)
    log_phi = np.asarray(log_mgf(coef.exponent), dtype=float)
    total = math.fsum((coef.weight * np.exp(log_phi)).tolist())
    if total < -CANCELLATION_TOL or total > 1.0 + CANCELLATION_TOL or math.isnan(total):
        raise NumericalCancellationError(
            f"expansion sum {total!r} left [0, 1] for K={K}; "
            "the alternating series lost precision, use the quadrature path"
        )
    return min(max(total, 0.0), 1.0)


def per_conditional_exact(gamma, K: int):
    """Block PER 1 - (1 - Q(sqrt(2 gamma)))^K at instantaneous SNR ``gamma``.

    Works elementwise on arrays.
    """
    if K < 1:
        raise DomainError(f"packet length must be >= 1, got {K}")
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("SNR must be nonnegative")
    q = np.asarray(q_exact(np.sqrt(2.0 * g)))
    out = -np.expm1(K * np.log1p(-q))
    if out.ndim == 0:
        return float(out)
    return out


def per_conditional_approx(gamma: float, K: int) -> float:
    """Sum-of-exponentials approximation of the block PER at SNR ``gamma``."""
    if not gamma >= 0:
        raise DomainError(f"SNR must be nonnegative, got {gamma!r}")
    if math.isinf(gamma):
        return 0.0
    return expansion_sum(K, lambda a: -a * gamma)


def per_conditional_approx_closed(gamma, K: int):
    """1 - (1 - Q~)^K with the two-exponential Q~; the expansion's exact sum.

    Usable for any K since it involves no alternating series.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("SNR must be nonnegative")
    q = 0.25 * (np.exp(-g) / 3.0 + np.exp(-4.0 * g / 3.0))
    out = -np.expm1(K * np.log1p(-q))
    if out.ndim == 0:
        return float(out)
    return out


__all__ = [
    "K_MAX",
    "CapabilityError",
    "ExpansionCoefficients",
    "NumericalCancellationError",
    "expansion_coefficients",
    "expansion_sum",
    "per_conditional_approx",
    "per_conditional_approx_closed",
    "per_conditional_exact",
]
