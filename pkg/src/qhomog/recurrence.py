"""Closed-form Bloch-vector recurrences for the collision chain.

Vectors are float arrays of shape (3,).  A chain step consumes one fresh
ancilla: the ancilla that met the system on the previous step collides with
the fresh one, then the system collides with the result.

Naming of the tracked vectors, for the ancilla currently at the system:

``l_in``       the incoming ancilla after its ancilla-ancilla collision
``l_pending``  that ancilla right after meeting the system
``l_out``      the previous ancilla after it collided with the fresh one
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional

import numpy as np

NORM_TOL = 1e-9
ORTHO_TOL = 1e-12
RATIO_DENOM_TOL = 1e-14

Z_HAT = np.array([0.0, 0.0, 1.0])


class Interaction(str, enum.Enum):
    PSWAP = "PSWAP"
    PSTHETA = "PSTHETA"


class UnsupportedConfigurationError(ValueError):
    pass


def _vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(3)
    return a


@dataclass(frozen=True)
class RecurrenceParams:
    alpha: float
    delta: float = 0.0
    theta: float = np.pi / 2
    phi: float = 0.0
    kind: Interaction = Interaction.PSWAP
    lam: float = 1.0
    rotation: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Interaction(self.kind))
        if abs(self.lam) > 1.0:
            raise ValueError(f"scale lambda must lie in [-1, 1], got {self.lam}")
        if self.rotation is not None:
            r = np.asarray(self.rotation, dtype=float)
            if r.shape != (3, 3):
                raise ValueError(f"rotation must be 3x3, got {r.shape}")
            err = np.abs(r.T @ r - np.eye(3)).max()
            if err > ORTHO_TOL:
                raise ValueError(f"rotation is not orthogonal (max |R^T R - I| = {err:.3g})")
            object.__setattr__(self, "rotation", r)

    @property
    def R(self) -> np.ndarray:
        return np.eye(3) if self.rotation is None else self.rotation


@dataclass(frozen=True)
class RecurrenceState:
    """Tracked Bloch vectors after ``n`` system collisions.

    ``l_in`` and ``l_pending`` are absent before the first collision and
    ``l_out`` until the second one.
    """

    n: int
    k: np.ndarray
    l_in: Optional[np.ndarray] = None
    l_pending: Optional[np.ndarray] = None
    l_out: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("k", "l_in", "l_pending", "l_out"):
            v = getattr(self, name)
            if v is None:
                continue
            v = _vec(v)
            nrm = float(np.linalg.norm(v))
            if nrm > 1.0 + NORM_TOL:
                raise ValueError(f"{name} has norm {nrm:.17g} > 1 at n={self.n}")
            object.__setattr__(self, name, v)

    def vectors(self) -> dict:
        return {k: getattr(self, k) for k in ("k", "l_in", "l_pending", "l_out")}


def initial_state(k0) -> RecurrenceState:
    return RecurrenceState(n=0, k=_vec(k0))


def _pair_collision(first, second, angle, lam=1.0):
    """Marginals after a partial swap of angle ``angle`` on ``first (x) second``.

    ``lam`` scales the cross-product term; 1 gives the physical update.
    """
    c, s = np.cos(angle), np.sin(angle)
    cross = np.cross(second, first)
    first_out = c * c * first + s * s * second - lam * c * s * cross
    second_out = s * s * first + c * c * second + lam * c * s * cross
    return first_out, second_out


def markov_step(k, l, alpha):
    """One system collision with a fresh ancilla; returns (k_next, l_collided)."""
    return _pair_collision(_vec(k), _vec(l), alpha)


# -- modified partial swap between ancillas, component by component ----------

def _pstheta_coeffs(delta, theta, phi):
    sd, cd = np.sin(delta), np.cos(delta)
    st, ct = np.sin(theta), np.cos(theta)
    sf, cf = np.sin(phi), np.cos(phi)
    return sd, cd, st, ct, sf, cf


def pstheta_outgoing(l1, m, delta, theta, phi):
    """Older ancilla (``l1``) after colliding with fresh ancilla ``m``."""
    sd, cd, st, ct, sf, cf = _pstheta_coeffs(delta, theta, phi)
    x = (cd**2 * l1[0] + sd * cd * ct * l1[1] + sd**2 * st * cf * m[0] - sd**2 * st * sf * m[1]
         - sd**2 * ct * l1[0] * m[2] - sd * cd * st * sf * l1[2] * m[0]
         + sd * cd * l1[1] * m[2] - sd * cd * st * cf * l1[2] * m[1])
    y = (cd**2 * l1[1] - sd * cd * ct * l1[0] + sd**2 * st * cf * m[1] + sd**2 * st * sf * m[0]
         - sd**2 * ct * l1[1] * m[2] - sd * cd * st * sf * l1[2] * m[1]
         - sd * cd * l1[0] * m[2] + sd * cd * st * cf * l1[2] * m[0])
    a = sd * cd * st * cf - sd**2 * st * ct * sf
    b = sd * cd * st * sf + sd**2 * st * ct * cf
    z = ((1 - sd**2 * st**2) * l1[2] + sd**2 * st**2 * m[2]
         + a * (l1[0] * m[1] - l1[1] * m[0]) + b * (l1[0] * m[0] + l1[1] * m[1]))
    return np.array([x, y, z])


def pstheta_incoming(l1, m, delta, theta, phi):
    """Fresh ancilla (``m``) after colliding with the older ancilla ``l1``."""
    sd, cd, st, ct, sf, cf = _pstheta_coeffs(delta, theta, phi)
    x = (cd**2 * m[0] - sd * cd * ct * m[1] + sd**2 * st * cf * l1[0] + sd**2 * st * sf * l1[1]
         + sd**2 * ct * l1[2] * m[0] + sd * cd * st * sf * l1[0] * m[2]
         + sd * cd * l1[2] * m[1] - sd * cd * st * cf * l1[1] * m[2])
    y = (cd**2 * m[1] + sd * cd * ct * m[0] + sd**2 * st * cf * l1[1] - sd**2 * st * sf * l1[0]
         + sd**2 * ct * l1[2] * m[1] + sd * cd * st * sf * l1[1] * m[2]
         - sd * cd * l1[2] * m[0] + sd * cd * st * cf * l1[0] * m[2])
    a = sd * cd * st * cf - sd**2 * st * ct * sf
    b = sd * cd * st * sf + sd**2 * st * ct * cf
    z = ((1 - sd**2 * st**2) * m[2] + sd**2 * st**2 * l1[2]
         - a * (l1[0] * m[1] - l1[1] * m[0]) - b * (l1[0] * m[0] + l1[1] * m[1]))
    return np.array([x, y, z])


def scaled_pstheta_outgoing(l1, delta, theta, lam):
    """Outgoing starred ancilla when every fresh ancilla is ``lam * z_hat``."""
    sd, cd, st, ct, _, _ = _pstheta_coeffs(delta, theta, 0.0)
    x = cd**2 * l1[0] + sd * cd * ct * l1[1] - lam * sd**2 * ct * l1[0] + lam * sd * cd * l1[1]
    y = cd**2 * l1[1] - sd * cd * ct * l1[0] - lam * sd**2 * ct * l1[1] - lam * sd * cd * l1[0]
    z = (1 - sd**2 * st**2) * l1[2] + sd**2 * st**2
    return np.array([x, y, z])


def scaled_pstheta_incoming(l1, delta, theta, phi, lam):
    """Incoming starred ancilla when every fresh ancilla is ``lam * z_hat``."""
    sd, cd, st, ct, sf, cf = _pstheta_coeffs(delta, theta, phi)
    x = (sd**2 * st * cf * l1[0] + sd**2 * st * sf * l1[1]
         + lam * sd * cd * st * sf * l1[0] - lam * sd * cd * st * cf * l1[1])
    y = (sd**2 * st * cf * l1[1] - sd**2 * st * sf * l1[0]
         + lam * sd * cd * st * sf * l1[1] + lam * sd * cd * st * cf * l1[0])
    z = (1 - sd**2 * st**2) + sd**2 * st**2 * l1[2]
    return np.array([x, y, z])


# -- chain steps ---------------------------------------------------------------

def _chain_step(state, alpha, lam, l_fresh, ancilla_collision):
    if state.n == 0:
        k, l_pending = _pair_collision(state.k, l_fresh, alpha, lam)
        return RecurrenceState(n=1, k=k, l_in=l_fresh, l_pending=l_pending)
    l_out, l_in = ancilla_collision(state.l_pending, l_fresh)
    k, l_pending = _pair_collision(state.k, l_in, alpha, lam)
    return RecurrenceState(n=state.n + 1, k=k, l_in=l_in, l_pending=l_pending, l_out=l_out)


def _require(params, kind):
    if params.kind != kind:
        raise UnsupportedConfigurationError(f"step needs kind {kind.value}, got {params.kind.value}")


def pswap_chain_step(state: RecurrenceState, params: RecurrenceParams, l_fresh) -> RecurrenceState:
    _require(params, Interaction.PSWAP)

    def ancillas(old, fresh):
        return _pair_collision(old, fresh, params.delta)

    return _chain_step(state, params.alpha, 1.0, _vec(l_fresh), ancillas)


def pstheta_chain_step(state: RecurrenceState, params: RecurrenceParams, l_fresh) -> RecurrenceState:
    _require(params, Interaction.PSTHETA)
    d, t, f = params.delta, params.theta, params.phi

    def ancillas(old, fresh):
        return pstheta_outgoing(old, fresh, d, t, f), pstheta_incoming(old, fresh, d, t, f)

    return _chain_step(state, params.alpha, 1.0, _vec(l_fresh), ancillas)


def rotated_pswap_step(state: RecurrenceState, params: RecurrenceParams, l_fresh) -> RecurrenceState:
    """Chain step in which every fresh ancilla is ``R l`` instead of ``l``."""
    _require(params, Interaction.PSWAP)
    r = params.R
    if np.linalg.det(r) < 0:
        raise ValueError("rotation must be proper (det +1); reflections flip the cross products")
    return pswap_chain_step(state, params, r @ _vec(l_fresh))


def scaled_pswap_step(state: RecurrenceState, params: RecurrenceParams, l_fresh) -> RecurrenceState:
    """Chain step for the rescaled vectors ``v / lam`` of a chain fed with ``lam * l``.

    ``l_fresh`` is the unscaled ancilla vector; ``lam`` enters only through the
    cross-product terms.
    """
    _require(params, Interaction.PSWAP)
    lam = params.lam

    def ancillas(old, fresh):
        return _pair_collision(old, fresh, params.delta, lam)

    return _chain_step(state, params.alpha, lam, _vec(l_fresh), ancillas)


def scaled_pstheta_step(state: RecurrenceState, params: RecurrenceParams, l_fresh=Z_HAT) -> RecurrenceState:
    """Rescaled chain step for the modified partial swap with ancillas ``lam * z_hat``."""
    _require(params, Interaction.PSTHETA)
    l_fresh = _vec(l_fresh)
    if np.abs(l_fresh - Z_HAT).max() > 1e-12:
        raise UnsupportedConfigurationError(
            "scaled modified-swap recurrence is only defined for ancillas along +z"
        )
    d, t, f, lam = params.delta, params.theta, params.phi, params.lam

    def ancillas(old, _fresh):
        return scaled_pstheta_outgoing(old, d, t, lam), scaled_pstheta_incoming(old, d, t, f, lam)

    return _chain_step(state, params.alpha, lam, l_fresh, ancillas)


def chain_step_for(params: RecurrenceParams) -> Callable:
    """The plain chain step matching ``params.kind``."""
    return pswap_chain_step if params.kind is Interaction.PSWAP else pstheta_chain_step


def trajectory(k0, l, params: RecurrenceParams, n_steps: int, step: Optional[Callable] = None):
    """States for n = 0..n_steps with identical fresh ancillas ``l``."""
    step = step or chain_step_for(params)
    state = initial_state(k0)
    out = [state]
    for _ in range(n_steps):
        state = step(state, params, l)
        out.append(state)
    return out


def scale_state(state: RecurrenceState, factor: float) -> RecurrenceState:
    """Multiply every tracked vector by ``factor`` (no norm check on the way in)."""
    kw = {
        name: (None if v is None else factor * v)
        for name, v in state.vectors().items()
    }
    return RecurrenceState(n=state.n, **kw)


def transform_state(state: RecurrenceState, matrix: np.ndarray) -> RecurrenceState:
    kw = {
        name: (None if v is None else matrix @ v)
        for name, v in state.vectors().items()
    }
    return replace(state, **kw)


class RatioStatistic(NamedTuple):
    ratio: Optional[float]
    bound: float
    kfactor: Optional[float]
    converged: bool = False


def ratio_statistic(k_prev, k_cur, l, alpha) -> RatioStatistic:
    """Squared-distance contraction of one Markovian collision.

    When ``k_prev`` already sits on ``l`` the ratio is undefined and the
    result is flagged ``converged`` with ``ratio`` and ``kfactor`` set to None.
    """
    k_prev, k_cur, l = _vec(k_prev), _vec(k_cur), _vec(l)
    bound = float(np.cos(alpha) ** 2)
    d = k_prev - l
    denom = float(d @ d)
    if denom < RATIO_DENOM_TOL:
        return RatioStatistic(None, bound, None, True)
    num = k_cur - l
    ratio = float(num @ num) / denom
    # |l|^2 sin^2(angle(l, d)) == |l x d|^2 / |d|^2
    lxd = np.cross(l, d)
    kfactor = bound + float(np.sin(alpha) ** 2) * float(lxd @ lxd) / denom
    return RatioStatistic(ratio, bound, kfactor, False)
