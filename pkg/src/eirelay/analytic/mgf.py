"""Moment generating functions E[exp(-s * gamma)] of the relevant SNRs."""

from __future__ import annotations

import math

import numpy as np

from eirelay.analytic.model import LinkBudget
from eirelay.specfun import DomainError, scaled_exp_integral


def _check_ordered(i: int, N: int, gamma_bar: float) -> None:
    if N < 1 or not 1 <= i <= N:
        raise DomainError(f"order index must satisfy 1 <= i <= N, got i={i}, N={N}")
    if not gamma_bar > 0:
        raise DomainError(f"average SNR must be positive, got {gamma_bar!r}")


def log_mgf_ordered(i: int, N: int, gamma_bar: float, s):
    """ln of the MGF of the i-th smallest of N iid exponential SNRs.

    Uses the spacing form gamma_(i) = sum_{m<=i} gamma_bar/(N-m+1) V_m, giving
    ln Phi_i(s) = -sum_{m<=i} log1p(s gamma_bar / (N-m+1)).
    """
    _check_ordered(i, N, gamma_bar)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise DomainError("MGF argument s must be nonnegative")
    out = np.zeros_like(s_arr)
    for m in range(1, i + 1):
        out -= np.log1p(s_arr * gamma_bar / (N - m + 1))
    return out


def mgf_ordered(i: int, N: int, gamma_bar: float, s: float) -> float:
    """MGF of the i-th weakest of N iid exponential SNRs with mean ``gamma_bar``."""
    return float(np.exp(log_mgf_ordered(i, N, gamma_bar, s)))


def log_mgf_exponential(s, gamma_bar: float):
    if not gamma_bar > 0:
        raise DomainError(f"average SNR must be positive, got {gamma_bar!r}")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise DomainError("MGF argument s must be nonnegative")
    return -np.log1p(s_arr * gamma_bar)


def mgf_exponential(s: float, gamma_bar: float) -> float:
    """1 / (1 + s * gamma_bar), the MGF of an exponential SNR."""
    return float(np.exp(log_mgf_exponential(s, gamma_bar)))


def mgf_af_combined(s: float, budget: LinkBudget) -> float:
    """MGF of the fixed-gain AF relayed SNR g_sr*g_rd/(g_rd + c1).

    Closed form c2 * (1 + (c1 - c1 c2)/G_rd * exp(x) E1(x)), x = c1 c2 / G_rd,
    with c2 = 1/(1 + s G_sr). exp(x) E1(x) is evaluated fused.
    """
    if not s >= 0:
        raise DomainError(f"MGF argument s must be nonnegative, got {s!r}")
    c1 = budget.c1
    c2 = 1.0 / (1.0 + s * budget.gamma_sr)
    x = c1 * c2 / budget.gamma_rd
    # c1 - c1 c2 written as c1 s G_sr c2 to avoid cancellation at small s
    spread = c1 * s * budget.gamma_sr * c2
    return c2 * (1.0 + spread / budget.gamma_rd * scaled_exp_integral(x))


def log_mgf_af_combined(s, budget: LinkBudget):
    s_arr = np.asarray(s, dtype=float)
    flat = [math.log(mgf_af_combined(v, budget)) for v in s_arr.ravel().tolist()]
    return np.array(flat).reshape(s_arr.shape)
