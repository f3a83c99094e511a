"""Closed-form (expansion-path) packet error rates for the proposed scheme."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from eirelay.analytic import quadrature
from eirelay.analytic.expansion import K_MAX, expansion_sum
from eirelay.analytic.mgf import log_mgf_af_combined, log_mgf_exponential, log_mgf_ordered
from eirelay.analytic.model import FrameConfig, LinkBudget, RelayMode
from eirelay.specfun import DomainError


def _check_relayed_index(i: int, cfg: FrameConfig) -> None:
    if not 1 <= i <= cfg.n_relayed:
        raise DomainError(f"relayed packet index must satisfy 1 <= i <= M={cfg.n_relayed}, got {i}")


def per_rayleigh(K: int, gamma_bar: float) -> float:
    """Average PER over an unordered Rayleigh-faded packet."""
    return expansion_sum(K, lambda a: log_mgf_exponential(a, gamma_bar))


def per_sr(K: int, gamma_sr: float) -> float:
    """Probability that the relay fails to decode a packet."""
    return per_rayleigh(K, gamma_sr)


def per_direct_ordered(i: int, cfg: FrameConfig, budget: LinkBudget) -> float:
    """PER of the i-th weakest packet of the frame using only the direct link."""
    N = cfg.n_packets
    return expansion_sum(cfg.packet_len, lambda a: log_mgf_ordered(i, N, budget.gamma_sd, a))


def per_direct_tail(first: int, last: int, cfg: FrameConfig, budget: LinkBudget) -> float:
    """Sum of per_direct_ordered(j) over first <= j <= last, as a single expansion.

    Adding the ordered MGFs before the alternating sum means the cancellation
    happens once instead of once per packet.
    """
    if last < first:
        return 0.0
    N = cfg.n_packets
    count = last - first + 1
    log_count = math.log(count)

    def log_phi(a):
        # mean MGF over the tail, so the expansion stays a probability
        terms = [log_mgf_ordered(j, N, budget.gamma_sd, a) for j in range(first, last + 1)]
        return logsumexp(terms, axis=0) - log_count

    return count * expansion_sum(cfg.packet_len, log_phi)


def per_combined_af(i: int, cfg: FrameConfig, budget: LinkBudget) -> float:
    """PER of the i-th weakest packet after MRC with its AF-relayed copy."""
    _check_relayed_index(i, cfg)
    N = cfg.n_packets

    def log_phi(a):
        return log_mgf_ordered(i, N, budget.gamma_sd, a) + log_mgf_af_combined(a, budget)

    return expansion_sum(cfg.packet_len, log_phi)


def per_relay_decoded(i: int, cfg: FrameConfig, budget: LinkBudget) -> float:
    """PER of the i-th weakest packet when the DF relay decoded it correctly."""
    N = cfg.n_packets

    def log_phi(a):
        return log_mgf_ordered(i, N, budget.gamma_sd, a) + log_mgf_exponential(a, budget.gamma_rd)

    return expansion_sum(cfg.packet_len, log_phi)


def per_combined_df(i: int, cfg: FrameConfig, budget: LinkBudget) -> float:
    """PER of the i-th weakest packet with a decode-checked DF relay."""
    _check_relayed_index(i, cfg)
    p_sr = per_sr(cfg.packet_len, budget.gamma_sr)
    return p_sr * per_direct_ordered(i, cfg, budget) + (1.0 - p_sr) * per_relay_decoded(i, cfg, budget)


def per_total(
    mode: RelayMode | str,
    cfg: FrameConfig,
    budget: LinkBudget,
    *,
    paper_compat_sum: bool = False,
    method: str = "auto",
) -> float:
    """Frame-average PER when the relay forwards the M weakest packets.

    ``method`` is ``"expansion"``, ``"quadrature"`` or ``"auto"`` (expansion
    when K <= K_MAX, quadrature otherwise). With ``paper_compat_sum`` the
    unrelayed sum stops at N-1, which drops the strongest packet (kept for
    reproducing results computed with that bound).
    """
    mode = RelayMode.parse(mode)
    if method == "auto":
        method = "expansion" if cfg.packet_len <= K_MAX else "quadrature"
    if method not in ("expansion", "quadrature"):
        raise ValueError(f"unknown method {method!r}")

    N, M = cfg.n_packets, cfg.n_relayed
    last_direct = N - 1 if paper_compat_sum else N
    if method == "expansion":
        combined = per_combined_af if mode is RelayMode.AF else per_combined_df
        relayed = [combined(i, cfg, budget) for i in range(1, M + 1)]
        direct = [per_direct_tail(M + 1, last_direct, cfg, budget)]
    else:
        branch = mode.value.lower()
        relayed = [quadrature.per_unconditional_quadrature(i, cfg, budget, branch) for i in range(1, M + 1)]
        direct = [
            quadrature.per_unconditional_quadrature(j, cfg, budget, "direct")
            for j in range(M + 1, last_direct + 1)
        ]
    return math.fsum(relayed + direct) / N


def efficiency(M: int, N: int) -> tuple[float, float]:
    """Forwarding rate FR = M/N and spectral efficiency eta = 1/(1+FR) = N/(N+M)."""
    if N < 1 or not 0 <= M <= N:
        raise DomainError(f"need N >= 1 and 0 <= M <= N, got M={M}, N={N}")
    fr = M / N
    return fr, 1.0 / (1.0 + fr)


def diversity_slope(curve: Iterable[Sequence[float]]) -> float:
    """Least-squares slope of -log10(PER) against SNR in decades (dB/10).

    ``curve`` is an iterable of ``(snr_db, per)`` pairs.
    """
    pts = np.array([(float(x), float(y)) for x, y in curve], dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise DomainError("diversity_slope needs at least two (snr_db, per) points")
    if np.any(pts[:, 1] <= 0):
        raise DomainError("diversity_slope needs strictly positive PER values")
    slope, _ = np.polyfit(pts[:, 0] / 10.0, -np.log10(pts[:, 1]), 1)
    return float(slope)
