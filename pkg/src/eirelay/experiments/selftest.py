"""Fast invariant checks runnable from the CLI without pytest."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from eirelay.analytic import (
    FrameConfig,
    LinkBudget,
    efficiency,
    mgf_af_combined,
    mgf_ordered,
    per_direct_ordered,
    per_rayleigh,
    per_total,
)
from eirelay.analytic.quadrature import per_unconditional_quadrature
from eirelay.sim import RngStream, estimate_per
from eirelay.specfun import exp_integral_gamma0, q_approx, q_exact


def _mgf_averaging() -> str:
    worst = 0.0
    for N in (1, 4, 8, 16):
        for s in (0.1, 1.0, 10.0):
            for g in (1.0, 10.0, 100.0):
                avg = math.fsum(mgf_ordered(i, N, g, s) for i in range(1, N + 1)) / N
                worst = max(worst, abs(avg * (1 + s * g) - 1))
    assert worst <= 1e-12, worst
    return f"max rel err {worst:.1e}"


def _exchangeability() -> str:
    worst = 0.0
    for db in (0.0, 10.0, 20.0):
        b = LinkBudget.symmetric_db(db)
        cfg = FrameConfig(8, 16, 0)
        ref = per_rayleigh(16, b.gamma_sd)
        for mode in ("AF", "DF"):
            worst = max(worst, abs(per_total(mode, cfg, b) / ref - 1))
        avg = math.fsum(per_direct_ordered(i, cfg, b) for i in range(1, 9)) / 8
        worst = max(worst, abs(avg / ref - 1))
    assert worst <= 1e-10, worst
    return f"max rel err {worst:.1e}"


def _efficiency() -> str:
    for N in range(1, 17):
        for M in range(N + 1):
            fr, eta = efficiency(M, N)
            assert eta == 1 / (1 + fr) or abs(eta - 1 / (1 + fr)) <= 1e-15
    return "eta = 1/(1+FR)"


def _e1_bounds() -> str:
    for x in np.geomspace(1e-6, 600, 400):
        e1 = exp_integral_gamma0(float(x))
        lo = 0.5 * math.exp(-x) * math.log1p(2 / x)
        hi = math.exp(-x) * math.log1p(1 / x)
        assert lo < e1 < hi, x
    return "E1 sandwich holds on 400 points"


def _q_monotone() -> str:
    xs = np.linspace(0, 10, 2001)
    qe = q_exact(xs)
    qa = np.array([q_approx(float(x)) for x in xs])
    assert np.all(np.diff(qe) <= 0) and np.all(np.diff(qa) <= 0)
    return "Q and approximation nonincreasing"


def _af_mgf_limits() -> str:
    assert mgf_af_combined(0.0, LinkBudget(10, 10, 10)) == 1.0
    b = LinkBudget(10, 10, 1e12)
    assert abs(mgf_af_combined(1.0, b) - 1 / 11) < 1e-6
    return "Phi_C(0)=1, transparent relay limit"


def _quadrature_closed_form() -> str:
    for g in (1.0, 10.0, 100.0):
        q = per_unconditional_quadrature(None, FrameConfig(1, 1, 0), LinkBudget(g, g, g), "direct")
        exact = 0.5 * (1 - math.sqrt(g / (1 + g)))
        assert abs(q - exact) <= 1e-6, (g, q, exact)
    return "K=1 quadrature = closed-form BPSK BEP"


def _sim_matches_quadrature() -> str:
    cfg = FrameConfig(8, 16, 1)
    b = LinkBudget.symmetric_db(10)
    out = []
    for mode in ("AF", "DF"):
        est = estimate_per(mode, cfg, b, 100_000, seed=7)
        ref = per_total(mode, cfg, b, method="quadrature")
        # exact reference, so only Monte Carlo error is allowed
        assert est.ci_low <= ref <= est.ci_high or abs(ref / est.per - 1) < 0.05, (mode, est, ref)
        out.append(f"{mode} sim {est.per:.4g} vs {ref:.4g}")
    return "; ".join(out)


def _determinism() -> str:
    cfg = FrameConfig(8, 16, 2)
    b = LinkBudget.symmetric_db(12)
    a = estimate_per("DF", cfg, b, 200_000, seed=3, workers=1)
    c = estimate_per("DF", cfg, b, 200_000, seed=3, workers=4)
    assert (a.packet_errors, a.packets) == (c.packet_errors, c.packets)
    g1 = RngStream(5, 1).generator(2).random(4)
    g2 = RngStream(5, 1).generator(2).random(4)
    assert np.array_equal(g1, g2)
    return "identical counts across worker counts"


CHECKS: list[tuple[str, Callable[[], str]]] = [
    ("mgf averaging identity", _mgf_averaging),
    ("M=0 equals unordered Rayleigh PER", _exchangeability),
    ("efficiency", _efficiency),
    ("E1 bounds", _e1_bounds),
    ("Q monotonicity", _q_monotone),
    ("AF MGF limits", _af_mgf_limits),
    ("quadrature closed form", _quadrature_closed_form),
    ("simulation vs exact quadrature", _sim_matches_quadrature),
    ("determinism", _determinism),
]


def run_selftest(echo: Callable[[str], None] = print) -> bool:
    ok = True
    for name, check in CHECKS:
        try:
            detail = check()
            echo(f"PASS  {name}: {detail}")
        except AssertionError as exc:
            ok = False
            echo(f"FAIL  {name}: {exc}")
    return ok
