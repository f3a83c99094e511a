"""Configuration types shared by the analytic engine and the simulator."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def linear_to_db(snr: float) -> float:
    return 10.0 * math.log10(snr)


class RelayMode(str, enum.Enum):
    AF = "AF"
    DF = "DF"

    @classmethod
    def parse(cls, value: "RelayMode | str") -> "RelayMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown relay mode {value!r}; expected AF or DF") from None


@dataclass(frozen=True)
class FrameConfig:
    """A frame of ``n_packets`` packets of ``packet_len`` BPSK symbols each,
    of which the ``n_relayed`` weakest are forwarded by the relay."""

    n_packets: int
    packet_len: int
    n_relayed: int = 0

    def __post_init__(self) -> None:
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))

    def violations(self) -> list[str]:
        errors = []
        if self.n_packets < 1:
            errors.append(f"N must be >= 1 (got {self.n_packets})")
        if self.packet_len < 1:
            errors.append(f"K must be >= 1 (got {self.packet_len})")
        if not 0 <= self.n_relayed <= max(self.n_packets, 0):
            errors.append(f"M must satisfy 0 <= M <= N (got M={self.n_relayed}, N={self.n_packets})")
        return errors

    @property
    def frame_len(self) -> int:
        return self.n_packets * self.packet_len

    @property
    def forwarding_rate(self) -> float:
        return self.n_relayed / self.n_packets

    def with_relayed(self, m: int) -> "FrameConfig":
        return FrameConfig(self.n_packets, self.packet_len, m)


@dataclass(frozen=True)
class LinkBudget:
    """Average linear SNRs of the S->D, S->R and R->D links."""

    gamma_sd: float
    gamma_sr: float
    gamma_rd: float

    def __post_init__(self) -> None:
        for name in ("gamma_sd", "gamma_sr", "gamma_rd"):
            value = getattr(self, name)
            if not (value > 0) or math.isnan(value):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    @classmethod
    def from_db(cls, sd_db: float, sr_db: float | None = None, rd_db: float | None = None) -> "LinkBudget":
        sr_db = sd_db if sr_db is None else sr_db
        rd_db = sd_db if rd_db is None else rd_db
        return cls(db_to_linear(sd_db), db_to_linear(sr_db), db_to_linear(rd_db))

    @classmethod
    def symmetric_db(cls, snr_db: float) -> "LinkBudget":
        return cls.from_db(snr_db)

    @property
    def c1(self) -> float:
        # Fixed AF gain sqrt(Es / (Es*Omega_SR + N0)) gives
        # gamma_R = g_sr*g_rd / (g_rd + 1 + Gamma_SR).
        return 1.0 + self.gamma_sr
