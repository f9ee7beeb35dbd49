"""The four subcommands. Each returns a process exit status."""

from __future__ import annotations

import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, TextIO

from .. import analysis, engine, qstate
from . import figures, output
from .config import RunSpec, SweepSpec, point_filename
from .verify import run_verification

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def simulate(spec: RunSpec):
    """Trajectory and convergence report for one spec."""
    cfg = spec.engine_config()
    traj = engine.run(cfg)
    report = analysis.homogenization_time(traj, qstate.bloch_components(cfg.ancilla0), spec.epsilon)
    return traj, report


def summary_line(report: analysis.ConvergenceReport) -> str:
    n_star = "none" if report.n_star is None else str(report.n_star)
    return f"n_star={n_star} final_fidelity={report.final_fidelity:.16e}"


def cmd_run(spec: RunSpec, stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    traj, report = simulate(spec)
    path = output.write_text(spec.out, output.trajectory_csv(traj))
    if spec.emit_plot_script:
        output.write_text(path.with_suffix(".gp"), output.plot_script(path.stem, [(path.stem, path.name)]))
    print(summary_line(report), file=stdout)
    return EXIT_OK


def _sweep_point(args):
    spec, path = args
    traj, report = simulate(spec)
    output.write_text(path, output.trajectory_csv(traj))
    return report.n_star, report.final_fidelity


def cmd_sweep(sweep: SweepSpec, stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    out_dir = Path(sweep.base.out)
    points = list(sweep.points())
    jobs = [(sweep.spec_for(p), out_dir / point_filename(p)) for p in points]
    workers = sweep.workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        results = [_sweep_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_sweep_point, jobs))
    names = [a for a, _ in sweep.axes]
    rows = []
    for point, (_, path), (n_star, fid) in zip(points, jobs, results):
        rows.append({**point, "n_star": n_star, "final_fidelity": output.fmt(fid), "file": path.name})
    output.write_text(out_dir / "index.csv", output.index_csv(names + ["n_star", "final_fidelity", "file"], rows))
    print(f"wrote {len(rows)} trajectories and index.csv to {out_dir}", file=stdout)
    return EXIT_OK


def cmd_verify(seed: int = 0, level: str = "quick", stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    results = run_verification(seed, level)
    for r in results:
        print(r.line(), file=stdout)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties hold", file=stdout)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_figures(which: str, out_dir, stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    chosen = figures.select(which)
    ok = True
    for fig in chosen:
        res = figures.run_figure(fig, out_dir)
        finals = " ".join(f"{k}={v:.6f}" for k, v in res.final_fidelity.items())
        print(f"{fig.name}: {len(res.files)} curves, final fidelity {finals}", file=stdout)
        for c in res.checks:
            print(f"  {'PASS' if c.passed else 'FAIL'} {c.check}: {c.detail}", file=stdout)
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAILED
