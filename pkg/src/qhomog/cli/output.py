"""CSV emission and generated gnuplot scripts."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from ..engine import TrajectoryRecord

HEADER = ("n", "fid", "kx", "ky", "kz", "lout_x", "lout_y", "lout_z", "ratio")


def fmt(x: Optional[float]) -> str:
    # 17 significant digits round-trips every double; +0.0 folds -0.0 away
    return "" if x is None else f"{float(x) + 0.0:.16e}"


def trajectory_rows(trajectory: Iterable[TrajectoryRecord]):
    for rec in trajectory:
        lout = rec.l_out if rec.l_out is not None else (None, None, None)
        yield [str(rec.n), fmt(rec.fidelity), *map(fmt, rec.k), *map(fmt, lout), fmt(rec.ratio)]


def trajectory_csv(trajectory: Iterable[TrajectoryRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(trajectory_rows(trajectory))
    return buf.getvalue()


def write_text(path, text: str) -> Path:
    """Write ``text``, creating parent directories; OSError propagates."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def read_trajectory_csv(path) -> list:
    """Rows as dicts of floats, with None for empty cells."""
    with open(path, newline="") as fh:
        return [
            {k: (float(v) if v != "" else None) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]


def index_csv(columns: Sequence[str], rows: Iterable[Mapping[str, object]]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row.get(k) is None else row[k]) for k in columns})
    return buf.getvalue()


def plot_script(title: str, curves: Sequence[tuple], squared: bool = False, output: str = "") -> str:
    """A gnuplot script drawing fidelity against n for each (label, csv path).

    Set ``squared = 1`` in the script to plot F^2 instead of F.
    """
    out = output or (title + ".png")
    lines = [
        f"# fidelity vs number of collisions: {title}",
        f"squared = {1 if squared else 0}",
        "set datafile separator ','",
        "set key bottom right",
        "set xlabel 'n'",
        "set ylabel (squared ? 'F^2' : 'F')",
        "set terminal pngcairo size 800,560",
        f"set output '{out}'",
        "fid(f) = squared ? f**2 : f",
    ]
    parts = [
        f"'{path}' using 1:(fid($2)) with lines title '{label}'" for label, path in curves
    ]
    lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"
