"""Declarative sweep configuration (one JSON document per sweep).

Schema, with defaults::

    {
      "modes": ["AF", "DF"],            # required, nonempty
      "snr_db": [5, 10, 15]             # required, strictly increasing
              | {"start": 5, "stop": 25, "step": 2.5},
      "N": 8, "K": 16,                  # required
      "M": [0, 1, 2],                   # int or list, default 0
      "budget": {"rule": "symmetric"}   # default
              | {"rule": "explicit", "sr_offset_db": 0.0, "rd_offset_db": 0.0},
      "n_frames": 1000000,
      "seed": 0,
      "fidelity": "snr",                # or "symbol"
      "outputs": ["both"],              # any of analytic / simulated / both
      "paper_compat_sum": false,
      "workers": 1
    }

With the explicit rule the S->R and R->D averages sit the given number of dB
above (or below) the S->D average at every grid point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from eirelay.analytic.model import FrameConfig, LinkBudget, RelayMode
from eirelay.sim.frame import Fidelity

DEFAULT_FRAMES = 10**6
OUTPUT_KINDS = ("analytic", "simulated", "both")
_KNOWN_KEYS = {
    "modes", "snr_db", "N", "K", "M", "budget", "n_frames", "seed",
    "fidelity", "outputs", "paper_compat_sum", "workers",
}


class ConfigError(ValueError):
    """A sweep configuration violates one or more constraints."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid sweep configuration:\n  - " + "\n  - ".join(self.errors))


@dataclass(frozen=True)
class SweepSpec:
    modes: tuple[RelayMode, ...]
    snr_db: tuple[float, ...]
    n_packets: int
    packet_len: int
    n_relayed: tuple[int, ...] = (0,)
    budget_rule: str = "symmetric"
    sr_offset_db: float = 0.0
    rd_offset_db: float = 0.0
    n_frames: int = DEFAULT_FRAMES
    seed: int = 0
    fidelity: Fidelity = Fidelity.SNR
    outputs: frozenset[str] = field(default_factory=lambda: frozenset({"analytic", "simulated"}))
    paper_compat_sum: bool = False
    workers: int = 1

    @property
    def want_analytic(self) -> bool:
        return "analytic" in self.outputs

    @property
    def want_simulated(self) -> bool:
        return "simulated" in self.outputs

    def frame_config(self, M: int) -> FrameConfig:
        return FrameConfig(self.n_packets, self.packet_len, M)

    def budget(self, snr_db: float) -> LinkBudget:
        if self.budget_rule == "symmetric":
            return LinkBudget.symmetric_db(snr_db)
        return LinkBudget.from_db(snr_db, snr_db + self.sr_offset_db, snr_db + self.rd_offset_db)

    def with_overrides(self, **changes: Any) -> "SweepSpec":
        changes = {k: v for k, v in changes.items() if v is not None}
        if "fidelity" in changes:
            changes["fidelity"] = Fidelity.parse(changes["fidelity"])
        spec = replace(self, **changes)
        errors = spec.violations()
        if errors:
            raise ConfigError(errors)
        return spec

    def violations(self) -> list[str]:
        errors = []
        if not self.modes:
            errors.append("modes: at least one relay mode is required")
        if not self.snr_db:
            errors.append("snr_db: grid must be nonempty")
        elif any(b <= a for a, b in zip(self.snr_db, self.snr_db[1:])):
            errors.append("snr_db: grid must be strictly increasing")
        if self.n_frames < 1:
            errors.append(f"n_frames: must be >= 1 (got {self.n_frames})")
        if not 0 <= self.seed < 2**64:
            errors.append(f"seed: must be an unsigned 64-bit integer (got {self.seed})")
        if self.workers < 1:
            errors.append(f"workers: must be >= 1 (got {self.workers})")
        if self.n_packets < 1:
            errors.append(f"N: must be >= 1 (got {self.n_packets})")
        if self.packet_len < 1:
            errors.append(f"K: must be >= 1 (got {self.packet_len})")
        for M in self.n_relayed:
            if not 0 <= M <= self.n_packets:
                errors.append(f"M: each value must satisfy 0 <= M <= N={self.n_packets} (got {M})")
        if self.budget_rule not in ("symmetric", "explicit"):
            errors.append(f"budget.rule: expected 'symmetric' or 'explicit' (got {self.budget_rule!r})")
        if not self.outputs:
            errors.append("outputs: at least one output kind is required")
        return errors


def _as_list(value: Any) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _snr_grid(raw: Any, errors: list[str]) -> tuple[float, ...]:
    if isinstance(raw, dict):
        try:
            start, stop, step = float(raw["start"]), float(raw["stop"]), float(raw["step"])
        except (KeyError, TypeError, ValueError):
            errors.append("snr_db: range form needs numeric start, stop and step")
            return ()
        if step <= 0:
            errors.append(f"snr_db: step must be positive (got {step})")
            return ()
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(max(count, 0)))
    try:
        return tuple(float(v) for v in _as_list(raw))
    except (TypeError, ValueError):
        errors.append(f"snr_db: expected numbers (got {raw!r})")
        return ()


def _int(doc: dict, key: str, default: Any, errors: list[str]) -> int:
    value = doc.get(key, default)
    if value is None:
        errors.append(f"{key}: required")
        return 0
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
        errors.append(f"{key}: expected an integer (got {value!r})")
        return 0
    return int(value)


def parse_spec(doc: dict[str, Any]) -> SweepSpec:
    """Build a validated SweepSpec, reporting every violated constraint at once."""
    if not isinstance(doc, dict):
        raise ConfigError([f"top level must be a JSON object (got {type(doc).__name__})"])
    errors: list[str] = []
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        errors.append(f"unknown keys: {', '.join(unknown)}")

    modes: list[RelayMode] = []
    if "modes" not in doc:
        errors.append("modes: required")
    for m in _as_list(doc.get("modes", [])):
        try:
            modes.append(RelayMode.parse(m))
        except ValueError as exc:
            errors.append(f"modes: {exc}")

    if "snr_db" not in doc:
        errors.append("snr_db: required")
    grid = _snr_grid(doc.get("snr_db", []), errors)

    n_packets = _int(doc, "N", None, errors)
    packet_len = _int(doc, "K", None, errors)
    relayed = []
    for M in _as_list(doc.get("M", 0)):
        if isinstance(M, bool) or not isinstance(M, int):
            errors.append(f"M: expected integers (got {M!r})")
        else:
            relayed.append(M)

    budget = doc.get("budget", {"rule": "symmetric"})
    if not isinstance(budget, dict):
        errors.append("budget: expected an object")
        budget = {}
    rule = budget.get("rule", "symmetric")
    try:
        sr_off = float(budget.get("sr_offset_db", 0.0))
        rd_off = float(budget.get("rd_offset_db", 0.0))
    except (TypeError, ValueError):
        errors.append("budget: offsets must be numbers")
        sr_off = rd_off = 0.0

    fidelity = Fidelity.SNR
    try:
        fidelity = Fidelity.parse(doc.get("fidelity", "snr"))
    except ValueError as exc:
        errors.append(f"fidelity: {exc}")

    outputs: set[str] = set()
    for kind in _as_list(doc.get("outputs", ["both"])):
        if kind not in OUTPUT_KINDS:
            errors.append(f"outputs: unknown kind {kind!r}; expected one of {OUTPUT_KINDS}")
        elif kind == "both":
            outputs |= {"analytic", "simulated"}
        else:
            outputs.add(kind)

    compat = doc.get("paper_compat_sum", False)
    if not isinstance(compat, bool):
        errors.append("paper_compat_sum: expected true or false")

    spec = SweepSpec(
        modes=tuple(modes),
        snr_db=grid,
        n_packets=n_packets,
        packet_len=packet_len,
        n_relayed=tuple(relayed),
        budget_rule=rule,
        sr_offset_db=sr_off,
        rd_offset_db=rd_off,
        n_frames=_int(doc, "n_frames", DEFAULT_FRAMES, errors),
        seed=_int(doc, "seed", 0, errors),
        fidelity=fidelity,
        outputs=frozenset(outputs),
        paper_compat_sum=bool(compat),
        workers=_int(doc, "workers", 1, errors),
    )
    errors += [e for e in spec.violations() if e not in errors]
    if errors:
        raise ConfigError(errors)
    return spec


def load_spec(path: str | Path) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: not valid JSON ({exc})"]) from None
    return parse_spec(doc)
