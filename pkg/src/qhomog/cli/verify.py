"""Invariant suites run by ``qhomog verify``.

Every check looks its collaborators up through the module objects at call
time, so a patched recurrence or engine function is exercised here too.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .. import analysis, engine, qstate, recurrence
from ..recurrence import Interaction, RecurrenceParams

ORACLE_TOL = 1e-10
SCHEME_TOL = 1e-12
COVARIANCE_TOL = 1e-10
SEMIGROUP_TOL = 1e-12
FULLSWAP_TOL = 1e-10

# (configs per kind, steps, scheme configs, covariance draws, ratio draws, universality samples)
LEVELS = {
    "quick": dict(oracle=10, steps=200, schemes=5, scheme_steps=100, cov=5, ratio=2000, univ=100),
    "full": dict(oracle=100, steps=200, schemes=50, scheme_steps=200, cov=20, ratio=10_000, univ=500),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    cases: int
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"{tag} {self.name:<28} worst={self.worst:.3e} tol={self.tol:.0e} "
            f"cases={self.cases} ({self.seconds:.2f}s)"
        )


def random_bloch(rng: np.random.Generator) -> np.ndarray:
    """Uniform in the unit ball."""
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform() ** (1 / 3)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_engine_config(rng, scheme, interaction, n) -> engine.EngineConfig:
    return engine.EngineConfig(
        scheme=scheme,
        interaction=interaction,
        alpha=rng.uniform(0, np.pi),
        delta=rng.uniform(0, np.pi),
        theta=rng.uniform(0, np.pi),
        phi=rng.uniform(0, 2 * np.pi),
        system0=qstate.bloch_to_density(random_bloch(rng)),
        ancilla0=qstate.bloch_to_density(random_bloch(rng)),
        n_collisions=n,
    )


def oracle_deviation(cfg: engine.EngineConfig) -> float:
    """Max componentwise gap between the recurrence and the dense scheme-1 engine."""
    params = RecurrenceParams(
        alpha=cfg.alpha, delta=cfg.delta, theta=cfg.theta, phi=cfg.phi, kind=cfg.interaction
    )
    k0 = qstate.bloch_components(cfg.system0)
    l = qstate.bloch_components(cfg.ancilla0)
    rec = recurrence.trajectory(k0, l, params, cfg.n_collisions)
    dense = engine.run_scheme1(cfg)
    worst = 0.0
    for s, d in zip(rec, dense):
        worst = max(worst, float(np.abs(s.k - d.k).max()))
        for mine, theirs in ((s.l_out, d.l_out), (s.l_in, d.l_in), (s.l_pending, d.l_pending)):
            if mine is not None and theirs is not None:
                worst = max(worst, float(np.abs(mine - theirs).max()))
    return worst


def check_oracle(rng, kind: Interaction, configs: int, steps: int) -> CheckResult:
    worst = max(
        oracle_deviation(random_engine_config(rng, engine.Scheme.S1, kind, steps))
        for _ in range(configs)
    )
    return CheckResult(f"oracle-equivalence[{kind.value}]", worst <= ORACLE_TOL, worst, ORACLE_TOL, configs)


def check_schemes(rng, configs: int, steps: int) -> CheckResult:
    worst = 0.0
    for i in range(configs):
        kind = (Interaction.PSWAP, Interaction.PSTHETA)[i % 2]
        cfg = random_engine_config(rng, engine.Scheme.S2, kind, steps)
        a = engine.run_scheme2(cfg)
        b = engine.run_scheme3(cfg)
        worst = max(worst, max(float(np.abs(x.k - y.k).max()) for x, y in zip(a, b)))
    return CheckResult("scheme-2==scheme-3", worst <= SCHEME_TOL, worst, SCHEME_TOL, configs)


def check_rotation(rng, draws: int, steps: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        r = random_rotation(rng)
        alpha, delta = rng.uniform(0, np.pi, size=2)
        k0, l = random_bloch(rng), random_bloch(rng)
        rotated = recurrence.trajectory(
            k0, l, RecurrenceParams(alpha, delta, rotation=r), steps, step=recurrence.rotated_pswap_step
        )
        plain = recurrence.trajectory(r.T @ k0, l, RecurrenceParams(alpha, delta), steps)
        for a, b in zip(rotated, plain):
            back = recurrence.transform_state(a, r.T)
            for name, v in back.vectors().items():
                if v is not None:
                    worst = max(worst, float(np.abs(v - b.vectors()[name]).max()))
    return CheckResult("rotation-covariance", worst <= COVARIANCE_TOL, worst, COVARIANCE_TOL, draws)


def check_scaling(rng, draws: int, steps: int = 100) -> CheckResult:
    worst = 0.0
    z = recurrence.Z_HAT
    for i in range(draws):
        lam = rng.uniform(-1, 1)
        alpha, delta, theta = rng.uniform(0, np.pi, size=3)
        phi = rng.uniform(0, 2 * np.pi)
        k0 = random_bloch(rng)
        if i % 2 == 0:
            l = random_bloch(rng)
            params = RecurrenceParams(alpha, delta, lam=lam)
            scaled = recurrence.trajectory(k0, l, params, steps, step=recurrence.scaled_pswap_step)
            plain = recurrence.trajectory(lam * k0, lam * l, RecurrenceParams(alpha, delta), steps)
        else:
            params = RecurrenceParams(alpha, delta, theta, phi, Interaction.PSTHETA, lam=lam)
            scaled = recurrence.trajectory(k0, z, params, steps, step=recurrence.scaled_pstheta_step)
            plain = recurrence.trajectory(
                lam * k0, lam * z, RecurrenceParams(alpha, delta, theta, phi, Interaction.PSTHETA), steps
            )
        for a, b in zip(scaled, plain):
            back = recurrence.scale_state(a, lam)
            for name, v in back.vectors().items():
                if v is not None:
                    worst = max(worst, float(np.abs(v - b.vectors()[name]).max()))
    return CheckResult("scaling-covariance", worst <= COVARIANCE_TOL, worst, COVARIANCE_TOL, draws)


def check_ratio(rng, draws: int) -> CheckResult:
    """Markovian steps never exceed the cos^2(alpha) contraction ratio."""
    worst = -np.inf
    for _ in range(draws):
        k, l = random_bloch(rng), random_bloch(rng)
        alpha = rng.uniform(0, np.pi)
        k_next, _ = recurrence.markov_step(k, l, alpha)
        stat = recurrence.ratio_statistic(k, k_next, l, alpha)
        if not stat.converged:
            worst = max(worst, stat.ratio - stat.bound)
    # dense Markovian runs through the monitor
    for _ in range(max(1, draws // 500)):
        cfg = random_engine_config(rng, engine.Scheme.MARKOV, Interaction.PSWAP, 100)
        rep = analysis.ratio_monitor(engine.run_markovian(cfg), qstate.bloch_components(cfg.ancilla0), cfg.alpha)
        if rep.max_ratio is not None:
            worst = max(worst, rep.max_ratio - np.cos(cfg.alpha) ** 2)
    slack = analysis.RATIO_SLACK
    return CheckResult("ratio-bound", worst <= slack, max(worst, 0.0), slack, draws)


def check_universality(rng, samples: int) -> CheckResult:
    """PSWAP is universal; the modified partial swap only fixes diagonal states."""
    seed = int(rng.integers(2**32))
    cases = [
        (qstate.pswap(rng.uniform(0.1, np.pi - 0.1)), analysis.Universality.UNIVERSAL),
        (qstate.pstheta(1.45, 0.40, 0.15), analysis.Universality.DIAGONAL_ONLY),
        (qstate.custom(np.kron(qstate.SIGMA_X, qstate.SIGMA_X)), analysis.Universality.NEITHER),
    ]
    wrong = sum(analysis.classify_universality(u, samples, seed=seed) is not want for u, want in cases)
    return CheckResult("universality", wrong == 0, float(wrong), 0.0, len(cases))


def check_memory(rng) -> CheckResult:
    """Full-swap ancillas reproduce repeated first-collision dynamics; Markov maps compose."""
    worst = 0.0
    for _ in range(3):
        cfg = random_engine_config(rng, engine.Scheme.FULLSWAP_MEMORY, Interaction.PSWAP, 100)
        worst = max(worst, engine.run_full_swap_memory(cfg).max_deviation)
    u = qstate.pswap(rng.uniform(0, np.pi)).matrix
    eta = qstate.bloch_to_density(random_bloch(rng))
    for n in range(1, 11):
        whole = engine.markov_power_map(u, eta, n)
        for m in range(n + 1):
            parts = engine.markov_power_map(u, eta, n - m).compose(engine.markov_power_map(u, eta, m))
            worst = max(worst, float(np.abs(whole.M - parts.M).max()), float(np.abs(whole.c - parts.c).max()))
    return CheckResult("memory-and-semigroup", worst <= FULLSWAP_TOL, worst, FULLSWAP_TOL, 3)


def suites(level: str) -> Dict[str, Callable[[np.random.Generator], CheckResult]]:
    p = LEVELS[level]
    return {
        "oracle-pswap": lambda rng: check_oracle(rng, Interaction.PSWAP, p["oracle"], p["steps"]),
        "oracle-pstheta": lambda rng: check_oracle(rng, Interaction.PSTHETA, p["oracle"], p["steps"]),
        "schemes": lambda rng: check_schemes(rng, p["schemes"], p["scheme_steps"]),
        "rotation": lambda rng: check_rotation(rng, p["cov"]),
        "scaling": lambda rng: check_scaling(rng, p["cov"]),
        "ratio": lambda rng: check_ratio(rng, p["ratio"]),
        "universality": lambda rng: check_universality(rng, p["univ"]),
        "memory": check_memory,
    }


def run_verification(seed: int = 0, level: str = "quick") -> List[CheckResult]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {', '.join(LEVELS)}")
    results = []
    # one child generator per suite keeps each suite's draws independent of the others
    streams = np.random.SeedSequence(seed).spawn(len(suites(level)))
    for stream, (name, check) in zip(streams, suites(level).items()):
        t0 = time.perf_counter()
        try:
            res = check(np.random.default_rng(stream))
        except Exception as exc:  # a crashing suite is a failed property, not a crashed report
            res = CheckResult(f"{name} ({type(exc).__name__}: {exc})", False, float("inf"), float("nan"), 0)
        results.append(CheckResult(res.name, res.passed, res.worst, res.tol, res.cases, time.perf_counter() - t0))
    return results
