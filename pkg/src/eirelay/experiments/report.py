"""CSV export, text summary and gain-at-target extraction."""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from pathlib import Path
from typing import Iterable, Sequence

from eirelay.analytic.model import RelayMode
from eirelay.analytic.per import diversity_slope, efficiency
from eirelay.experiments.runner import ResultRow

CSV_FIELDS = ("snr_db", "mode", "N", "K", "M", "per_analytic", "per_sim", "ci_low", "ci_high", "trials", "seed")
# summary fits the diversity slope over the last SLOPE_WINDOW_DB of each curve
SLOPE_WINDOW_DB = 10.0


class TargetNotBracketed(ValueError):
    """The curve never crosses the requested PER."""


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, RelayMode):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in CSV_FIELDS])
    return buf.getvalue()


def _parse_opt(text: str, kind):
    return None if text == "" else kind(text)


def read_csv(path: str | Path) -> list[ResultRow]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def parse_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}; expected {list(CSV_FIELDS)}")
    rows = []
    for rec in reader:
        rows.append(
            ResultRow(
                snr_db=float(rec["snr_db"]),
                mode=RelayMode.parse(rec["mode"]),
                N=int(rec["N"]),
                K=int(rec["K"]),
                M=int(rec["M"]),
                per_analytic=_parse_opt(rec["per_analytic"], float),
                per_sim=_parse_opt(rec["per_sim"], float),
                ci_low=_parse_opt(rec["ci_low"], float),
                ci_high=_parse_opt(rec["ci_high"], float),
                trials=_parse_opt(rec["trials"], int),
                seed=_parse_opt(rec["seed"], int),
            )
        )
    return rows


def curves(rows: Iterable[ResultRow], column: str | None = None) -> "OrderedDict[str, list[tuple[float, float]]]":
    """Group rows into ``curve_id -> [(snr_db, per), ...]`` sorted by SNR.

    ``column`` is ``"analytic"``, ``"sim"`` or None (analytic where present,
    else simulated).
    """
    out: OrderedDict[str, list[tuple[float, float]]] = OrderedDict()
    for row in rows:
        if column == "analytic":
            per = row.per_analytic
        elif column == "sim":
            per = row.per_sim
        else:
            per = row.per_analytic if row.per_analytic is not None else row.per_sim
        if per is None:
            continue
        out.setdefault(row.curve_id, []).append((row.snr_db, per))
    for pts in out.values():
        pts.sort()
    return out


def snr_at_target(curve: Sequence[tuple[float, float]], target_per: float) -> float:
    """SNR where a decreasing PER curve first reaches ``target_per``.

    Interpolates linearly in log10(PER) between the bracketing points.
    """
    if not target_per > 0:
        raise ValueError(f"target PER must be positive, got {target_per!r}")
    pts = sorted(curve)
    log_t = math.log10(target_per)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 >= target_per >= y1 and y1 > 0:
            if y0 == y1:
                return x0
            l0, l1 = math.log10(y0), math.log10(y1)
            return x0 + (log_t - l0) * (x1 - x0) / (l1 - l0)
    for x, y in pts:
        if y == target_per:
            return x
    raise TargetNotBracketed(f"target PER {target_per:g} is not bracketed by the curve")


def gain_at_target(
    rows,
    target_per: float,
    baseline: str,
    candidate: str,
    column: str | None = None,
) -> float:
    """SNR saving (dB) of ``candidate`` over ``baseline`` at ``target_per``.

    ``rows`` is a list of ResultRow or a mapping ``curve_id -> [(snr, per)]``.
    """
    table = rows if isinstance(rows, dict) else curves(rows, column)
    missing = [c for c in (baseline, candidate) if c not in table]
    if missing:
        raise KeyError(f"unknown curve id(s): {', '.join(missing)}; available: {', '.join(table)}")
    return snr_at_target(table[baseline], target_per) - snr_at_target(table[candidate], target_per)


def config_table(rows: Sequence[ResultRow]) -> list[dict]:
    """One entry per curve with its efficiency figures and fitted slope."""
    table = []
    curve_points = curves(rows)
    seen = OrderedDict((row.curve_id, row) for row in rows)
    for cid, row in seen.items():
        fr, eta = efficiency(row.M, row.N)
        pts = [(x, y) for x, y in curve_points.get(cid, []) if y > 0]
        slope = float("nan")
        if pts:
            top = pts[-1][0]
            window = [(x, y) for x, y in pts if x >= top - SLOPE_WINDOW_DB]
            if len(window) >= 2:
                slope = diversity_slope(window)
        table.append(dict(curve=cid, mode=row.mode.value, N=row.N, K=row.K, M=row.M, FR=fr, eta=eta, slope=slope))
    return table


def summary_text(rows: Sequence[ResultRow]) -> str:
    lines = ["curve                  mode   N    K    M        FR       eta  diversity_slope"]
    for e in config_table(rows):
        lines.append(
            f"{e['curve']:<22} {e['mode']:<4} {e['N']:>3} {e['K']:>4} {e['M']:>4}"
            f" {e['FR']:>9.6f} {e['eta']:>9.6f} {e['slope']:>16.4f}"
        )
    checked = [r for r in rows if r.agreement is not None]
    bad = [r for r in checked if not r.agreement]
    lines.append("")
    lines.append(f"analytic/simulation agreement: {len(checked) - len(bad)}/{len(checked)} rows")
    for r in bad:
        lines.append(
            f"DISAGREE {r.curve_id} snr_db={r.snr_db:g} analytic={r.per_analytic:.6g} "
            f"sim={r.per_sim:.6g} ci=[{r.ci_low:.6g}, {r.ci_high:.6g}]"
        )
    return "\n".join(lines) + "\n"


def gnuplot_script(rows: Sequence[ResultRow], csv_name: str = "results.csv") -> str:
    ids = list(curves(rows))
    lines = [
        "set datafile separator ','",
        "set logscale y",
        "set xlabel 'SNR (dB)'",
        "set ylabel 'PER'",
        "set key outside",
    ]
    plots = []
    for cid in ids:
        mode, n, k, m = cid.split("-")
        sel = f"(strcol(2) eq '{mode}' && $3=={n[1:]} && $4=={k[1:]} && $5=={m[1:]} ? $%d : 1/0)"
        if any(r.per_analytic is not None for r in rows if r.curve_id == cid):
            plots.append(f"'{csv_name}' every ::1 using 1:{sel % 6} with lines title '{cid} analytic'")
        if any(r.per_sim is not None for r in rows if r.curve_id == cid):
            plots.append(f"'{csv_name}' every ::1 using 1:{sel % 7} with points title '{cid} sim'")
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def emit_report(rows: Sequence[ResultRow], out_dir: str | Path, formats: Sequence[str] = ("csv", "summary")) -> dict[str, Path]:
    """Write the requested artifacts into ``out_dir``; return their paths.

    ``formats`` may contain ``csv``, ``summary`` and ``gnuplot``.
    """
    if not rows:
        raise ValueError("emit_report needs at least one row")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    if "csv" in formats:
        written["csv"] = out / "results.csv"
        written["csv"].write_text(rows_to_csv(rows), encoding="utf-8")
    if "summary" in formats:
        written["summary"] = out / "summary.txt"
        written["summary"].write_text(summary_text(rows), encoding="utf-8")
    if "gnuplot" in formats:
        written["gnuplot"] = out / "plot.gp"
        written["gnuplot"].write_text(gnuplot_script(rows), encoding="utf-8")
    return written
