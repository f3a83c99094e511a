"""Fading-averaged exact PER by adaptive numerical integration.

This path uses the exact conditional PER 1 - (1 - Q(sqrt(2g)))^K, so it
carries no approximation error and no alternating-sum cancellation. It serves
any packet length and acts as the independent check of the expansion path.

Densities used:

* unordered / S->R link: exponential;
* i-th weakest of N: N!/((i-1)!(N-i)!) F^{i-1} (1-F)^{N-i} f;
* AF relayed SNR g_sr g_rd/(g_rd + c1): obtained from its survival function
  exp(-w/G_sr) z K1(z), z = 2 sqrt(w c1/(G_sr G_rd)), giving the density
  exp(-w/G_sr) (z K1(z)/G_sr + 2 c1/(G_sr G_rd) K0(z)).
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import k0e, k1e

from eirelay.analytic.expansion import per_conditional_exact
from eirelay.analytic.model import FrameConfig, LinkBudget
from eirelay.specfun import DomainError

ABS_TOL = 1e-8
_QUAD_EPSABS = 1e-14
_QUAD_EPSREL = 1e-10
_QUAD_LIMIT = 400
# conditional PER is below this past the integration cutoff
_NEGLIGIBLE_PER = 1e-16

BRANCHES = ("direct", "sr", "af", "df")


class QuadratureError(ArithmeticError):
    """Adaptive integration failed to reach the requested accuracy."""


def _snr_cutoff(K: int) -> float:
    # smallest g (on a coarse geometric grid) where PER_exact(g) < _NEGLIGIBLE_PER
    g = 8.0
    while per_conditional_exact(g, K) > _NEGLIGIBLE_PER:
        g *= 1.25
    return g


def _quad(f: Callable[[float], float], lo: float, hi: float, points, what: str) -> float:
    if hi <= lo:
        return 0.0
    pts = sorted({p for p in points if lo < p < hi})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f,
            lo,
            hi,
            points=pts or None,
            epsabs=_QUAD_EPSABS,
            epsrel=_QUAD_EPSREL,
            limit=_QUAD_LIMIT,
            full_output=1,
        )
    value, abserr = out[0], out[1]
    if not math.isfinite(value) or abserr > ABS_TOL:
        message = out[3] if len(out) > 3 else "no message"
        raise QuadratureError(
            f"{what}: integral over [{lo:g}, {hi:g}] = {value!r} with error estimate "
            f"{abserr:.3g} (> {ABS_TOL:g}); quad said: {message}"
        )
    return value


def _breakpoints(scale: float, cutoff: float) -> list[float]:
    pts = [0.25, 1.0, 3.0, 6.0, 12.0, 24.0]
    pts += [scale * f for f in (0.01, 0.1, 1.0, 5.0)]
    return [p for p in pts if 0 < p < cutoff]


def exponential_pdf(gamma_bar: float) -> Callable[[float], float]:
    def pdf(g: float) -> float:
        return math.exp(-g / gamma_bar) / gamma_bar

    return pdf


def ordered_pdf(i: int, N: int, gamma_bar: float) -> Callable[[float], float]:
    """Density of the i-th smallest of N iid exponential SNRs with mean gamma_bar."""
    if not 1 <= i <= N:
        raise DomainError(f"need 1 <= i <= N, got i={i}, N={N}")
    log_norm = math.lgamma(N + 1) - math.lgamma(i) - math.lgamma(N - i + 1) - math.log(gamma_bar)

    def pdf(g: float) -> float:
        u = g / gamma_bar
        if u <= 0:
            return math.exp(log_norm) if i == 1 else 0.0
        log_f = log_norm - (N - i + 1) * u
        if i > 1:
            log_f += (i - 1) * math.log(-math.expm1(-u))
        return math.exp(log_f)

    return pdf


def af_relayed_pdf(budget: LinkBudget) -> Callable[[float], float]:
    """Density of the fixed-gain AF relayed SNR."""
    a = budget.gamma_sr
    b = budget.c1 / (budget.gamma_sr * budget.gamma_rd)

    def pdf(w: float) -> float:
        if w <= 0:
            return math.inf
        z = 2.0 * math.sqrt(b * w)
        # k*e(z) = exp(z) k*(z)
        damp = math.exp(-w / a - z)
        return damp * (z * float(k1e(z)) / a + 2.0 * b * float(k0e(z)))

    return pdf


def _expect(per_of: Callable[[float], float], pdf, scale: float, cutoff: float, what: str) -> float:
    return _quad(lambda g: per_of(g) * pdf(g), 0.0, cutoff, _breakpoints(scale, cutoff), what)


def _expect_sum(K: int, pdf_x, scale_x: float, pdf_y, scale_y: float, cutoff: float, what: str) -> float:
    """E[PER(X + Y)] for independent X, Y given by densities (nested quad)."""

    def inner(y: float) -> float:
        return _expect(lambda x: per_conditional_exact(x + y, K), pdf_x, scale_x, cutoff - y, what)

    return _quad(lambda y: inner(y) * pdf_y(y), 0.0, cutoff, _breakpoints(scale_y, cutoff), what)


def per_unconditional_quadrature(
    i: int | None,
    cfg: FrameConfig,
    budget: LinkBudget,
    branch: str = "direct",
) -> float:
    """Average exact PER by numerical integration against the fading law.

    ``branch``:

    * ``"direct"`` - direct link only; ``i`` selects the i-th weakest of N,
      ``None`` an unordered packet;
    * ``"sr"`` - the S->R link (``i`` ignored);
    * ``"af"`` - i-th weakest packet combined with its AF-relayed copy;
    * ``"df"`` - i-th weakest packet with a decode-checked DF relay.
    """
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}; expected one of {BRANCHES}")
    K = cfg.packet_len
    N = cfg.n_packets
    cutoff = _snr_cutoff(K)
    label = f"{branch} branch (i={i}, N={N}, K={K})"

    def per_k(g: float) -> float:
        return per_conditional_exact(g, K)

    sr = exponential_pdf(budget.gamma_sr)
    if branch == "sr":
        return _expect(per_k, sr, budget.gamma_sr, cutoff, label)

    if i is None:
        if branch != "direct":
            raise DomainError("combined branches need a packet order index i")
        direct = exponential_pdf(budget.gamma_sd)
    else:
        direct = ordered_pdf(i, N, budget.gamma_sd)
    if branch == "direct":
        return _expect(per_k, direct, budget.gamma_sd, cutoff, label)

    if branch == "af":
        relayed = af_relayed_pdf(budget)
        return _expect_sum(K, direct, budget.gamma_sd, relayed, budget.gamma_sr, cutoff, label)

    p_sr = _expect(per_k, sr, budget.gamma_sr, cutoff, label)
    p_direct = _expect(per_k, direct, budget.gamma_sd, cutoff, label)
    rd = exponential_pdf(budget.gamma_rd)
    p_both = _expect_sum(K, direct, budget.gamma_sd, rd, budget.gamma_rd, cutoff, label)
    return p_sr * p_direct + (1.0 - p_sr) * p_both


def per_rayleigh_bpsk_closed(gamma_bar) -> np.ndarray | float:
    """Exact average BPSK bit error probability over Rayleigh fading."""
    g = np.asarray(gamma_bar, dtype=float)
    out = 0.5 * (1.0 - np.sqrt(g / (1.0 + g)))
    return float(out) if out.ndim == 0 else out
