"""Reproduce every fidelity-vs-n figure and check its qualitative shape."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .. import engine
from . import output, presets
from .config import build_run_spec

SETTLE_LEVEL = 0.999
SETTLE_FRACTION = 0.75
SETTLE_DROP = 1e-6
ENVELOPE_BLOCKS = 10
SCHEMES_CLOSE = 0.02
BURN_IN = 0.25


@dataclass(frozen=True)
class FigureCheck:
    figure: str
    check: str
    passed: bool
    detail: str


def settle_index(fid: np.ndarray, level: float = SETTLE_LEVEL) -> Optional[int]:
    """First n after which the curve never drops below ``level`` again."""
    below = np.flatnonzero(fid < level)
    if below.size == 0:
        return 0
    idx = int(below[-1]) + 1
    return idx if idx < fid.size else None


def check_settles(curves: Dict[str, np.ndarray]) -> FigureCheck:
    """Each curve climbs past the threshold for good, and from then on the
    worst fidelity deficit per block of collisions never grows."""
    parts, ok = [], True
    for label, fid in curves.items():
        n0 = settle_index(fid)
        if n0 is None or n0 > SETTLE_FRACTION * (fid.size - 1):
            ok = False
            parts.append(f"{label}: not settled (max {fid.max():.6f})")
            continue
        envelope = np.array([b.max() for b in np.array_split(1.0 - fid[n0:], ENVELOPE_BLOCKS) if b.size])
        rise = float(np.max(np.diff(envelope), initial=0.0))
        ok &= rise <= SETTLE_DROP
        parts.append(f"{label}: settled at n={n0}, worst envelope rise {rise:.1e}")
    return FigureCheck("", "settles", ok, "; ".join(parts))


def check_markov_first(curves: Dict[str, np.ndarray]) -> FigureCheck:
    times = {label: settle_index(fid) for label, fid in curves.items()}
    markov = times["markov"]
    others = {k: v for k, v in times.items() if k != "markov"}
    ok = markov is not None and all(v is None or markov <= v for v in others.values())
    return FigureCheck("", "markov-first", ok, f"settle times {times}")


def check_schemes_close(curves: Dict[str, np.ndarray]) -> FigureCheck:
    labels = [k for k in curves if k != "markov"]
    gap = max(
        float(np.abs(curves[a] - curves[b]).max()) for i, a in enumerate(labels) for b in labels[i + 1:]
    )
    return FigureCheck("", "schemes-close", gap <= SCHEMES_CLOSE, f"max fidelity gap {gap:.4f} between {labels}")


def check_pstheta_stalls(curves: Dict[str, np.ndarray]) -> FigureCheck:
    fid = curves["s1-pstheta"]
    return FigureCheck(
        "", "pstheta-stalls", bool(fid.max() < SETTLE_LEVEL),
        f"modified-swap curve peaks at {fid.max():.6f} over {fid.size - 1} collisions",
    )


def check_pstheta_beats_pswap(curves: Dict[str, np.ndarray]) -> FigureCheck:
    """After the burn-in the modified-swap curve is pointwise >= the PSWAP one
    and both sit at or below the Markovian curve up to rounding."""
    start = int(BURN_IN * (curves["s1-pstheta"].size - 1))
    theta, swap, markov = (curves[k][start:] for k in ("s1-pstheta", "s1-pswap", "markov"))
    lead = float(np.min(theta - swap))
    excess = float(np.max(np.maximum(theta, swap) - markov))
    ok = lead >= -SETTLE_DROP and excess <= SETTLE_DROP
    return FigureCheck(
        "", "pstheta-beats-pswap", ok,
        f"from n={start}: min(theta - pswap) = {lead:.2e}, max excess over markov = {excess:.2e}",
    )


CHECKS = {
    "settles": check_settles,
    "markov-first": check_markov_first,
    "schemes-close": check_schemes_close,
    "pstheta-stalls": check_pstheta_stalls,
    "pstheta-beats-pswap": check_pstheta_beats_pswap,
}


@dataclass
class FigureResult:
    name: str
    files: Dict[str, Path]
    script: Path
    checks: List[FigureCheck]
    final_fidelity: Dict[str, float]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_figure(fig: presets.Figure, out_dir) -> FigureResult:
    out_dir = Path(out_dir)
    curves, files, finals = {}, {}, {}
    for curve in fig.curves:
        spec = build_run_spec({**curve.params, "n": str(fig.n)})
        traj = engine.run(spec.engine_config())
        path = out_dir / f"{fig.name}-{curve.label}.csv"
        output.write_text(path, output.trajectory_csv(traj))
        files[curve.label] = path
        curves[curve.label] = np.array([r.fidelity for r in traj])
        finals[curve.label] = traj[-1].fidelity
    script = output.write_text(
        out_dir / f"{fig.name}.gp",
        output.plot_script(fig.name, [(label, p.name) for label, p in files.items()]),
    )
    checks = []
    for name in fig.checks:
        c = CHECKS[name](curves)
        checks.append(FigureCheck(fig.name, c.check, c.passed, c.detail))
    return FigureResult(fig.name, files, script, checks, finals)


def select(which: str) -> Sequence[presets.Figure]:
    if which == "all":
        return presets.FIGURES
    try:
        return (presets.FIGURE_BY_NAME[which],)
    except KeyError:
        raise KeyError(
            f"unknown figure {which!r}; choose 'all' or one of: {', '.join(presets.figure_names())}"
        ) from None
