"""Fading draws, weakest-packet selection and the physical-layer signal chain.

Symbol-level conventions: Es = 1 and a reference noise power N0 = 1, so a
link with SNR g has a channel coefficient of magnitude sqrt(g) (uniform
random phase). ``noise_var`` scales the actual receiver noise; the fixed AF
gain and the MRC weights are designed for the reference N0.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from eirelay.analytic.model import LinkBudget, RelayMode
from eirelay.sim.rng import RngStream, as_generator


def sample_rayleigh_snr(gamma_bar: float, rng: RngStream | np.random.Generator, size=None):
    """Instantaneous SNR of a Rayleigh-faded link: exponential with mean gamma_bar."""
    if not gamma_bar > 0:
        raise ValueError(f"average SNR must be positive, got {gamma_bar!r}")
    return as_generator(rng).exponential(gamma_bar, size)


def select_weakest(direct_snrs: Sequence[float], M: int) -> list[int]:
    """Indices of the M weakest packets, weakest first; ties go to the lower index."""
    if not 0 <= M <= len(direct_snrs):
        raise ValueError(f"need 0 <= M <= N={len(direct_snrs)}, got M={M}")
    order = sorted(range(len(direct_snrs)), key=lambda j: (direct_snrs[j], j))
    return order[:M]


def weakest_order(direct_snrs: np.ndarray) -> np.ndarray:
    """Batched ascending order along the last axis with the same tie rule."""
    return np.argsort(direct_snrs, axis=-1, kind="stable")


def af_relayed_snr(gamma_sr, gamma_rd, budget: LinkBudget):
    g_sr = np.asarray(gamma_sr, dtype=float)
    g_rd = np.asarray(gamma_rd, dtype=float)
    with np.errstate(divide="ignore"):
        share = 1.0 / (1.0 + budget.c1 / g_rd)
    return g_sr * share


def af_combined_snr(gamma_direct, gamma_sr, gamma_rd, budget: LinkBudget):
    """Post-MRC SNR of a direct packet plus its fixed-gain AF copy."""
    out = np.asarray(gamma_direct, dtype=float) + af_relayed_snr(gamma_sr, gamma_rd, budget)
    return float(out) if out.ndim == 0 else out


def _coefficient(gamma: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    phase = gen.uniform(0.0, 2.0 * np.pi, np.shape(gamma))
    return np.sqrt(gamma) * np.exp(1j * phase)


def _awgn(shape, noise_var: float, gen: np.random.Generator) -> np.ndarray:
    scale = np.sqrt(noise_var / 2.0)
    return scale * (gen.standard_normal(shape) + 1j * gen.standard_normal(shape))


def relay_decode(h_sr: np.ndarray, x: np.ndarray, gen: np.random.Generator, noise_var: float = 1.0):
    """Hard BPSK decisions at the relay for symbols ``x`` (shape (..., K))."""
    r = h_sr[..., None] * x + _awgn(x.shape, noise_var, gen)
    return np.where(np.real(np.conj(h_sr)[..., None] * r) >= 0, 1.0, -1.0)


def symbol_level_packet(
    gamma_direct,
    K: int,
    rng: RngStream | np.random.Generator,
    mode: RelayMode | str | None = None,
    gamma_sr=None,
    gamma_rd=None,
    budget: LinkBudget | None = None,
    noise_var: float = 1.0,
) -> np.ndarray:
    """Send packets of K random BPSK symbols through the literal signal chain.

    ``gamma_direct`` (and, for relayed packets, ``gamma_sr``/``gamma_rd``) are
    arrays of one instantaneous SNR per packet. ``mode=None`` means direct
    only. Returns a boolean array, True where any of the K symbols was
    detected wrongly after MRC.
    """
    gen = as_generator(rng)
    g_d = np.asarray(gamma_direct, dtype=float)
    shape = g_d.shape
    x = np.where(gen.random(shape + (K,)) < 0.5, -1.0, 1.0)
    h_d = _coefficient(g_d, gen)
    y = h_d[..., None] * x + _awgn(x.shape, noise_var, gen)
    stat = np.real(np.conj(h_d)[..., None] * y)

    if mode is not None:
        mode = RelayMode.parse(mode)
        if budget is None or gamma_sr is None or gamma_rd is None:
            raise ValueError("relayed packets need gamma_sr, gamma_rd and the link budget")
        h_sr = _coefficient(np.broadcast_to(np.asarray(gamma_sr, dtype=float), shape), gen)
        h_rd = _coefficient(np.broadcast_to(np.asarray(gamma_rd, dtype=float), shape), gen)
        if mode is RelayMode.AF:
            gain = np.sqrt(1.0 / (budget.gamma_sr + 1.0))
            r = h_sr[..., None] * x + _awgn(x.shape, noise_var, gen)
            z = (h_rd * gain)[..., None] * r + _awgn(x.shape, noise_var, gen)
            h_eff = h_rd * gain * h_sr
            # relayed-branch noise power in units of the reference N0
            branch_noise = np.abs(h_rd * gain) ** 2 + 1.0
            stat = stat + np.real((np.conj(h_eff) / branch_noise)[..., None] * z)
        else:
            x_relay = relay_decode(h_sr, x, gen, noise_var)
            relay_ok = np.all(x_relay == x, axis=-1)
            z = h_rd[..., None] * x_relay + _awgn(x.shape, noise_var, gen)
            relayed = np.real(np.conj(h_rd)[..., None] * z)
            stat = stat + np.where(relay_ok[..., None], relayed, 0.0)

    x_hat = np.where(stat >= 0, 1.0, -1.0)
    return np.any(x_hat != x, axis=-1)
