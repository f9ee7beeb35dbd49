"""Dense density-matrix collision schedulers.

These are the ground-truth simulators: every state is an explicit 2x2, 4x4
or 8x8 matrix and every reduced state comes from an actual partial trace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional

import numpy as np

from . import qstate
from .qstate import apply, bloch_components, embed_pair, partial_trace
from .recurrence import Interaction, ratio_statistic


class Scheme(str, enum.Enum):
    MARKOV = "MARKOV"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    FULLSWAP_MEMORY = "FULLSWAP_MEMORY"


@dataclass(frozen=True, eq=False)
class EngineConfig:
    scheme: Scheme
    alpha: float
    system0: np.ndarray
    ancilla0: np.ndarray
    n_collisions: int
    interaction: Interaction = Interaction.PSWAP
    delta: float = 0.0
    theta: float = np.pi / 2
    phi: float = 0.0
    record_every: int = 1
    validate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "interaction", Interaction(self.interaction))
        if int(self.n_collisions) < 1:
            raise ValueError(f"n_collisions must be >= 1, got {self.n_collisions}")
        if int(self.record_every) < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")
        for name in ("system0", "ancilla0"):
            rho = qstate.check_density(getattr(self, name))
            if rho.shape != (2, 2):
                raise qstate.DimensionError(f"{name} must be a single-qubit state")
            object.__setattr__(self, name, rho)

    def system_unitary(self) -> np.ndarray:
        return qstate.pswap(self.alpha).matrix

    def ancilla_unitary(self) -> np.ndarray:
        if self.interaction is Interaction.PSWAP:
            return qstate.pswap(self.delta).matrix
        return qstate.pstheta(self.delta, self.theta, self.phi).matrix


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    n: int
    k: np.ndarray
    fidelity: float
    l_out: Optional[np.ndarray] = None
    ratio: Optional[float] = None
    l_in: Optional[np.ndarray] = None
    l_pending: Optional[np.ndarray] = None


@dataclass(eq=False)
class Snapshot:
    """Dense states after ``n`` system collisions."""

    n: int
    system: np.ndarray
    l_in: Optional[np.ndarray] = None
    l_pending: Optional[np.ndarray] = None
    l_out: Optional[np.ndarray] = None
    joint: Optional[np.ndarray] = field(default=None, repr=False)


def _reduce(rho, keep, validate=False):
    # Re-hermitise and renormalise: unit-trace rounding errors otherwise
    # compound geometrically through the product/partial-trace cycle.
    m = partial_trace(rho, keep)
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m).real
    if validate:
        qstate.check_density(m)
    return m


def _check(rho, validate):
    if validate:
        qstate.check_density(rho)
    return rho


def _first_collision(cfg: EngineConfig) -> Snapshot:
    joint = _check(apply(np.kron(cfg.system0, cfg.ancilla0), cfg.system_unitary()), cfg.validate)
    return Snapshot(
        n=1,
        system=_reduce(joint, [0], cfg.validate),
        l_in=cfg.ancilla0,
        l_pending=_reduce(joint, [1], cfg.validate),
        joint=joint,
    )


def iter_markovian(cfg: EngineConfig) -> Iterator[Snapshot]:
    u = cfg.system_unitary()
    eta = cfg.ancilla0
    rho = cfg.system0
    for n in range(1, cfg.n_collisions + 1):
        joint = _check(apply(np.kron(rho, eta), u), cfg.validate)
        rho = _reduce(joint, [0], cfg.validate)
        yield Snapshot(n=n, system=rho, l_in=eta, l_pending=_reduce(joint, [1], cfg.validate))


def iter_scheme1(cfg: EngineConfig) -> Iterator[Snapshot]:
    """Marginals only: every collision starts from a product of reduced states."""
    usa, uaa = cfg.system_unitary(), cfg.ancilla_unitary()
    eta, v = cfg.ancilla0, cfg.validate
    snap = _first_collision(cfg)
    yield snap
    rho, pending = snap.system, snap.l_pending
    for n in range(2, cfg.n_collisions + 1):
        pair = _check(apply(np.kron(pending, eta), uaa), v)
        l_out = _reduce(pair, [0], v)
        l_in = _reduce(pair, [1], v)
        joint = _check(apply(np.kron(rho, l_in), usa), v)
        rho = _reduce(joint, [0], v)
        pending = _reduce(joint, [1], v)
        yield Snapshot(n=n, system=rho, l_in=l_in, l_pending=pending, l_out=l_out)


def iter_scheme2(cfg: EngineConfig) -> Iterator[Snapshot]:
    """Keeps the system-ancilla correlation; the old ancilla is dropped
    right after it meets the fresh one."""
    usa, v = cfg.system_unitary(), cfg.validate
    uaa3 = embed_pair(cfg.ancilla_unitary(), (1, 2), 3)
    eta = cfg.ancilla0
    snap = _first_collision(cfg)
    yield snap
    sb = snap.joint
    for n in range(2, cfg.n_collisions + 1):
        sbb = _check(apply(np.kron(sb, eta), uaa3), v)
        l_out = _reduce(sbb, [1], v)
        sb = _reduce(sbb, [0, 2], v)
        l_in = _reduce(sb, [1], v)
        sb = _check(apply(sb, usa), v)
        yield Snapshot(
            n=n, system=_reduce(sb, [0], v), l_in=l_in,
            l_pending=_reduce(sb, [1], v), l_out=l_out, joint=sb,
        )


def iter_scheme3(cfg: EngineConfig) -> Iterator[Snapshot]:
    """Keeps the old ancilla until the system has met the new one."""
    v = cfg.validate
    usa3 = embed_pair(cfg.system_unitary(), (0, 2), 3)
    uaa3 = embed_pair(cfg.ancilla_unitary(), (1, 2), 3)
    eta = cfg.ancilla0
    snap = _first_collision(cfg)
    yield snap
    sb = snap.joint
    for n in range(2, cfg.n_collisions + 1):
        sbb = _check(apply(np.kron(sb, eta), uaa3), v)
        l_in = _reduce(sbb, [2], v)
        sbb = _check(apply(sbb, usa3), v)
        sb = _reduce(sbb, [0, 2], v)
        yield Snapshot(
            n=n, system=_reduce(sbb, [0], v), l_in=l_in,
            l_pending=_reduce(sbb, [2], v), l_out=_reduce(sbb, [1], v), joint=sb,
        )


def iterate(cfg: EngineConfig) -> Iterator[Snapshot]:
    """Snapshots for n = 1..n_collisions under ``cfg.scheme``."""
    if cfg.scheme is Scheme.MARKOV:
        return iter_markovian(cfg)
    if cfg.scheme is Scheme.S1:
        return iter_scheme1(cfg)
    if cfg.scheme is Scheme.S2:
        return iter_scheme2(cfg)
    if cfg.scheme is Scheme.S3:
        return iter_scheme3(cfg)
    return iter_scheme2(_full_swap_config(cfg))


def _bloch(rho):
    return None if rho is None else bloch_components(rho)


def _record(cfg: EngineConfig, snaps: Iterator[Snapshot], with_ratio: bool) -> List[TrajectoryRecord]:
    eta = cfg.ancilla0
    l = bloch_components(eta)
    k_prev = bloch_components(cfg.system0)
    out = [TrajectoryRecord(n=0, k=k_prev, fidelity=qstate.fidelity(cfg.system0, eta))]
    every, last = cfg.record_every, cfg.n_collisions
    for snap in snaps:
        k = bloch_components(snap.system)
        if snap.n % every == 0 or snap.n == last:
            ratio = None
            if with_ratio:
                ratio = ratio_statistic(k_prev, k, l, cfg.alpha).ratio
            out.append(TrajectoryRecord(
                n=snap.n,
                k=k,
                fidelity=qstate.fidelity(snap.system, eta),
                l_out=_bloch(snap.l_out),
                ratio=ratio,
                l_in=_bloch(snap.l_in),
                l_pending=_bloch(snap.l_pending),
            ))
        k_prev = k
    return out


def run_markovian(cfg: EngineConfig) -> List[TrajectoryRecord]:
    return _record(cfg, iter_markovian(cfg), with_ratio=True)


def run_scheme1(cfg: EngineConfig) -> List[TrajectoryRecord]:
    return _record(cfg, iter_scheme1(cfg), with_ratio=False)


def run_scheme2(cfg: EngineConfig) -> List[TrajectoryRecord]:
    return _record(cfg, iter_scheme2(cfg), with_ratio=False)


def run_scheme3(cfg: EngineConfig) -> List[TrajectoryRecord]:
    return _record(cfg, iter_scheme3(cfg), with_ratio=False)


def _full_swap_config(cfg: EngineConfig) -> EngineConfig:
    return replace(cfg, interaction=Interaction.PSWAP, delta=np.pi / 2)


@dataclass(eq=False)
class FullSwapResult:
    trajectory: List[TrajectoryRecord]
    closed_form: List[np.ndarray]  # system Bloch vectors for n = 0..N
    max_deviation: float


def full_swap_closed_form(cfg: EngineConfig, n: int) -> np.ndarray:
    """System state after ``n`` collisions when ancillas fully swap each step.

    The system keeps meeting the same recycled ancilla, so the state is the
    first collision unitary applied ``n`` times.
    """
    un = np.linalg.matrix_power(cfg.system_unitary(), n)
    joint = apply(np.kron(cfg.system0, cfg.ancilla0), un)
    return partial_trace(joint, [0])


def run_full_swap_memory(cfg: EngineConfig) -> FullSwapResult:
    cfg = _full_swap_config(cfg)
    traj = _record(cfg, iter_scheme2(cfg), with_ratio=False)
    closed = [bloch_components(full_swap_closed_form(cfg, rec.n)) for rec in traj]
    dev = max(float(np.abs(rec.k - c).max()) for rec, c in zip(traj, closed))
    return FullSwapResult(traj, closed, dev)


def run(cfg: EngineConfig) -> List[TrajectoryRecord]:
    if cfg.scheme is Scheme.MARKOV:
        return run_markovian(cfg)
    if cfg.scheme is Scheme.S1:
        return run_scheme1(cfg)
    if cfg.scheme is Scheme.S2:
        return run_scheme2(cfg)
    if cfg.scheme is Scheme.S3:
        return run_scheme3(cfg)
    return run_full_swap_memory(cfg).trajectory


# -- affine (Bloch) representation of the single-collision channel -------------

@dataclass(frozen=True, eq=False)
class AffineMap:
    """Bloch-space map ``b -> M b + c``."""

    M: np.ndarray
    c: np.ndarray

    def __call__(self, b) -> np.ndarray:
        return self.M @ np.asarray(b, dtype=float) + self.c

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self`` after ``inner``."""
        return AffineMap(self.M @ inner.M, self.M @ inner.c + self.c)

    def power(self, n: int) -> "AffineMap":
        out = AffineMap(np.eye(3), np.zeros(3))
        for _ in range(n):
            out = self.compose(out)
        return out


_PROBES = [np.zeros(3), *np.eye(3)]


def affine_from_channel(channel) -> AffineMap:
    """Read off (M, c) by probing a single-qubit channel on I/2 and (I + sigma_i)/2."""
    images = [bloch_components(channel(qstate.bloch_to_density(p))) for p in _PROBES]
    c = images[0]
    m = np.column_stack([images[i + 1] - c for i in range(3)])
    return AffineMap(m, c)


def markov_channel(interaction, eta):
    """The single-collision map ``rho -> Tr_B[U (rho x eta) U^+]``."""
    u = np.asarray(interaction, dtype=complex)
    eta = np.asarray(eta, dtype=complex)

    def xi(rho):
        return partial_trace(apply(np.kron(rho, eta), u), [0])

    return xi


def channel_as_affine_map(interaction, eta) -> AffineMap:
    eta = np.asarray(eta, dtype=complex)
    if eta.shape != (2, 2):
        raise qstate.DimensionError("ancilla state must be a single qubit")
    return affine_from_channel(markov_channel(interaction, eta))


def markov_power_map(interaction, eta, n: int) -> AffineMap:
    """Affine map of ``n`` fresh-ancilla collisions, obtained by dense simulation."""
    xi = markov_channel(interaction, eta)

    def lam(rho):
        for _ in range(n):
            rho = xi(rho)
        return rho

    return affine_from_channel(lam)
