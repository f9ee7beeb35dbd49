"""Convergence metrics over trajectories and universality classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import engine, qstate
from .engine import EngineConfig, TrajectoryRecord
from .recurrence import ratio_statistic

DEFAULT_EPSILON = 1e-3
RATIO_SLACK = 1e-10


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    n_star: Optional[int]
    epsilon: float
    final_distance: float
    final_fidelity: float
    ratio_violations: Optional[int] = None


def homogenization_time(
    trajectory: Sequence[TrajectoryRecord],
    eta_bloch,
    epsilon: float = DEFAULT_EPSILON,
    alpha: Optional[float] = None,
) -> ConvergenceReport:
    """First recorded n with Bloch distance to the ancilla state <= epsilon.

    Passing ``alpha`` for a Markovian trajectory also counts ratio-bound
    violations among the recorded ratios.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not trajectory:
        raise ValueError("empty trajectory")
    l = np.asarray(eta_bloch, dtype=float)
    n_star = None
    for rec in trajectory:
        if np.linalg.norm(rec.k - l) <= epsilon:
            n_star = rec.n
            break
    last = trajectory[-1]
    violations = None
    if alpha is not None:
        bound = np.cos(alpha) ** 2 + RATIO_SLACK
        violations = sum(1 for r in trajectory if r.ratio is not None and r.ratio > bound)
    return ConvergenceReport(
        converged=n_star is not None,
        n_star=n_star,
        epsilon=epsilon,
        final_distance=float(np.linalg.norm(last.k - l)),
        final_fidelity=last.fidelity,
        ratio_violations=violations,
    )


def default_label(cfg: EngineConfig) -> str:
    if cfg.scheme is engine.Scheme.MARKOV:
        return "MARKOV"
    return f"{cfg.scheme.value}/{cfg.interaction.value}"


def compare_rates(
    configs: Sequence[EngineConfig],
    epsilon: float = DEFAULT_EPSILON,
    labels: Optional[Sequence[str]] = None,
) -> List[Tuple[str, Optional[int]]]:
    """Run every config and order them by homogenization time (absent last)."""
    if not configs:
        return []
    ref = configs[0]
    for cfg in configs[1:]:
        if (
            cfg.alpha != ref.alpha
            or not np.array_equal(cfg.system0, ref.system0)
            or not np.array_equal(cfg.ancilla0, ref.ancilla0)
        ):
            raise ValueError("compare_rates needs a common system state, ancilla state and alpha")
    labels = list(labels) if labels is not None else [default_label(c) for c in configs]
    l = qstate.bloch_components(ref.ancilla0)
    rows = []
    for label, cfg in zip(labels, configs):
        report = homogenization_time(engine.run(cfg), l, epsilon)
        rows.append((label, report.n_star))
    # stable: equal times keep input order
    return sorted(rows, key=lambda r: (r[1] is None, r[1] if r[1] is not None else 0))


class Universality(str, enum.Enum):
    UNIVERSAL = "UNIVERSAL"
    DIAGONAL_ONLY = "DIAGONAL_ONLY"
    NEITHER = "NEITHER"


def _random_directions(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_states(rng: np.random.Generator, samples: int) -> dict:
    """Bloch vectors for the universality test, keyed by family."""
    pure = _random_directions(rng, samples)
    mixed = _random_directions(rng, samples) * rng.uniform(0.0, 1.0, size=(samples, 1))
    diag = np.zeros((samples, 3))
    diag[:, 2] = rng.uniform(-1.0, 1.0, size=samples)
    return {"pure": pure, "mixed": mixed, "diagonal": diag}


def classify_universality(u, samples: int = 500, tol: float = 1e-9, seed: int = 0) -> Universality:
    if samples < 100:
        raise ValueError("classify_universality needs at least 100 samples per family")
    rng = np.random.default_rng(seed)
    fam = sample_states(rng, samples)

    def holds(vectors):
        return all(
            qstate.homogenizer_condition_check(u, qstate.bloch_to_density(b), tol) for b in vectors
        )

    diagonal_ok = holds(fam["diagonal"])
    general_ok = diagonal_ok and holds(fam["pure"]) and holds(fam["mixed"])
    if general_ok:
        return Universality.UNIVERSAL
    if diagonal_ok:
        return Universality.DIAGONAL_ONLY
    return Universality.NEITHER


@dataclass(frozen=True)
class RatioMonitorReport:
    violations: int
    max_ratio: Optional[float]
    checked: int
    terminal: bool


def ratio_monitor(trajectory: Sequence[TrajectoryRecord], l, alpha: float) -> RatioMonitorReport:
    """Check every consecutive pair of a Markovian trajectory against cos^2(alpha).

    Pairs must be consecutive collisions (record_every == 1).  Once the
    system sits on ``l`` the ratio is undefined; those pairs are skipped and
    the report is flagged terminal.
    """
    bound = np.cos(alpha) ** 2 + RATIO_SLACK
    violations, checked, terminal = 0, 0, False
    max_ratio = None
    for prev, cur in zip(trajectory, trajectory[1:]):
        if cur.n != prev.n + 1:
            raise ValueError("ratio_monitor needs a trajectory recorded at every collision")
        stat = ratio_statistic(prev.k, cur.k, l, alpha)
        if stat.converged:
            terminal = True
            continue
        checked += 1
        max_ratio = stat.ratio if max_ratio is None else max(max_ratio, stat.ratio)
        if stat.ratio > bound:
            violations += 1
    return RatioMonitorReport(violations, max_ratio, checked, terminal)
