"""Sweep execution: analytic and simulated PER per (mode, M, SNR) point."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from eirelay.analytic.model import RelayMode
from eirelay.analytic.per import per_total
from eirelay.experiments.config import SweepSpec
from eirelay.sim.frame import estimate_per

# analytic vs simulated agreement: inside the 95% CI, or this relative gap
AGREEMENT_REL_TOL = 0.20


@dataclass(frozen=True)
class ResultRow:
    snr_db: float
    mode: RelayMode
    N: int
    K: int
    M: int
    per_analytic: Optional[float] = None
    per_sim: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    trials: Optional[int] = None
    seed: Optional[int] = None

    @property
    def curve_id(self) -> str:
        return curve_id(self.mode, self.N, self.K, self.M)

    @property
    def agreement(self) -> Optional[bool]:
        """None unless both outputs are present."""
        if self.per_analytic is None or self.per_sim is None:
            return None
        if self.ci_low <= self.per_analytic <= self.ci_high:
            return True
        if self.per_sim > 0:
            return abs(self.per_analytic - self.per_sim) / self.per_sim <= AGREEMENT_REL_TOL
        return False


def curve_id(mode: RelayMode | str, N: int, K: int, M: int) -> str:
    return f"{RelayMode.parse(mode).value}-N{N}-K{K}-M{M}"


def sweep_points(spec: SweepSpec) -> list[tuple[RelayMode, int, float]]:
    """Points in emission order: mode, then M, then SNR (curve-major)."""
    return [(mode, M, snr) for mode in spec.modes for M in spec.n_relayed for snr in spec.snr_db]


def _run_point(spec: SweepSpec, index: int, mode: RelayMode, M: int, snr_db: float) -> ResultRow:
    cfg = spec.frame_config(M)
    budget = spec.budget(snr_db)
    row = dict(snr_db=snr_db, mode=mode, N=cfg.n_packets, K=cfg.packet_len, M=M)
    if spec.want_analytic:
        row["per_analytic"] = per_total(mode, cfg, budget, paper_compat_sum=spec.paper_compat_sum)
    if spec.want_simulated:
        est = estimate_per(mode, cfg, budget, spec.n_frames, spec.seed, spec.fidelity, stream_id=index)
        row.update(per_sim=est.per, ci_low=est.ci_low, ci_high=est.ci_high, trials=est.trials, seed=est.seed)
    return ResultRow(**row)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[ResultRow]:
    """Evaluate every point; point k simulates on stream (seed, k).

    Rows come back in ``sweep_points`` order whatever the worker count.
    """
    workers = spec.workers if workers is None else workers
    points = sweep_points(spec)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_point, spec, k, *p) for k, p in enumerate(points)]
            return [f.result() for f in futures]
    return [_run_point(spec, k, *p) for k, p in enumerate(points)]
