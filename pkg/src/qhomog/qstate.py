"""Dense qubit states, collision unitaries, partial traces and fidelity.

Everything here works on plain complex ``numpy`` arrays of dimension 2, 4 or
8.  Qubit 0 is the system; higher indices are ancillas in collision order,
and tensor products are taken left to right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_SLACK = 1e-10
UNITARY_TOL = 1e-12
BLOCH_TOL = 1e-12
MAX_STATE_DIM = 8

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

SWAP = 0.5 * (np.kron(I2, I2) + sum(np.kron(p, p) for p in PAULIS))


class InvalidStateError(ValueError):
    """Raised when an array is not a valid Bloch vector or density matrix."""


class DimensionError(ValueError):
    pass


class CapacityError(ValueError):
    """Raised when a state would grow beyond three qubits."""


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector parametrising a qubit state, ``rho = (I + b.sigma) / 2``."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.norm() > 1.0 + BLOCH_TOL:
            raise InvalidStateError(f"Bloch vector norm {self.norm():.17g} exceeds 1")

    @classmethod
    def from_array(cls, v: Iterable[float]) -> "BlochVector":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y, self.z], dtype=dtype or float)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


class UnitaryKind(str, enum.Enum):
    PSWAP = "PSWAP"
    PSTHETA = "PSTHETA"
    SWAP = "SWAP"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True, eq=False)
class CollisionUnitary:
    """A two-qubit collision unitary together with how it was built."""

    matrix: np.ndarray
    kind: UnitaryKind = UnitaryKind.CUSTOM
    angles: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise DimensionError(f"collision unitary must be 4x4, got {m.shape}")
        err = np.abs(m @ m.conj().T - np.eye(4)).max()
        if err > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (max |UU^+ - I| = {err:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def dim(self) -> int:
        return 4


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, CollisionUnitary):
        return a.matrix
    return np.asarray(a, dtype=complex)


def _num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def check_density(rho, *, psd_slack: float = PSD_SLACK) -> np.ndarray:
    """Validate and return ``rho`` as a complex array.

    Raises InvalidStateError when the matrix is not Hermitian, not unit trace
    or has an eigenvalue below ``-psd_slack``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4, 8):
        raise DimensionError(f"density matrix must be 2x2, 4x4 or 8x8, got {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"matrix is not Hermitian (deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.17g}, expected 1")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < -psd_slack:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})")
    return rho


def density_matrix(entries) -> np.ndarray:
    """Build a validated density matrix from nested sequences or an array."""
    rho = np.array(entries, dtype=complex)
    return check_density(rho)


def bloch_to_density(b) -> np.ndarray:
    if not isinstance(b, BlochVector):
        b = BlochVector.from_array(b)
    return 0.5 * (I2 + b.x * SIGMA_X + b.y * SIGMA_Y + b.z * SIGMA_Z)


def density_to_bloch(rho) -> BlochVector:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(f"expected a single-qubit state, got shape {rho.shape}")
    return BlochVector.from_array(bloch_components(rho))


def bloch_components(rho: np.ndarray) -> np.ndarray:
    """Bloch components of a 2x2 matrix as a float array, without validation."""
    return np.array([
        2.0 * rho[0, 1].real,
        -2.0 * rho[0, 1].imag,
        (rho[0, 0] - rho[1, 1]).real,
    ])


def ket_to_density(ket: Sequence[complex]) -> np.ndarray:
    psi = np.asarray(ket, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def pswap(alpha: float) -> CollisionUnitary:
    """Partial swap ``cos(alpha) I + i sin(alpha) SWAP``."""
    m = np.cos(alpha) * np.eye(4) + 1j * np.sin(alpha) * SWAP
    return CollisionUnitary(m, UnitaryKind.PSWAP, {"alpha": float(alpha)})


def s_theta_phi(theta: float, phi: float) -> np.ndarray:
    """Generator of the modified partial swap; equals SWAP at theta=pi/2, phi=0."""
    zz = np.kron(SIGMA_Z, SIGMA_Z)
    z_diff = np.kron(SIGMA_Z, I2) - np.kron(I2, SIGMA_Z)
    xx_yy = np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y)
    yx_xy = np.kron(SIGMA_Y, SIGMA_X) - np.kron(SIGMA_X, SIGMA_Y)
    return 0.5 * (
        np.eye(4)
        + zz
        + np.cos(theta) * z_diff
        + np.sin(theta) * np.cos(phi) * xx_yy
        + np.sin(theta) * np.sin(phi) * yx_xy
    )


def pstheta(delta: float, theta: float, phi: float) -> CollisionUnitary:
    m = np.cos(delta) * np.eye(4) + 1j * np.sin(delta) * s_theta_phi(theta, phi)
    return CollisionUnitary(
        m, UnitaryKind.PSTHETA, {"delta": float(delta), "theta": float(theta), "phi": float(phi)}
    )


def swap() -> CollisionUnitary:
    return CollisionUnitary(SWAP, UnitaryKind.SWAP)


def custom(matrix) -> CollisionUnitary:
    return CollisionUnitary(matrix, UnitaryKind.CUSTOM)


def tensor(a, b):
    """Kronecker product of two states or two unitaries.

    Products of states are limited to three qubits.
    """
    a_is_u = isinstance(a, CollisionUnitary)
    b_is_u = isinstance(b, CollisionUnitary)
    if a_is_u != b_is_u:
        raise TypeError("tensor() needs two states or two unitaries")
    ma, mb = _as_matrix(a), _as_matrix(b)
    if not a_is_u and ma.shape[0] * mb.shape[0] > MAX_STATE_DIM:
        raise CapacityError(
            f"state of dimension {ma.shape[0] * mb.shape[0]} exceeds the 3-qubit limit"
        )
    return np.kron(ma, mb)


def embed_pair(u, pair: tuple[int, int], width: int) -> np.ndarray:
    """Lift a two-qubit unitary onto qubits ``pair`` of a ``width``-qubit register.

    The first index of ``pair`` receives the first tensor factor of ``u``.
    """
    if width not in (2, 3):
        raise IndexError(f"width must be 2 or 3, got {width}")
    a, b = pair
    if a == b or not (0 <= a < width and 0 <= b < width):
        raise IndexError(f"invalid qubit pair {pair} for width {width}")
    u4 = _as_matrix(u).reshape(2, 2, 2, 2)
    ident = np.eye(2**width, dtype=complex).reshape((2,) * (2 * width))
    # contract u's input legs with the identity's output legs a, b
    out = np.tensordot(u4, ident, axes=([2, 3], [a, b]))
    out = np.moveaxis(out, [0, 1], [a, b])
    return out.reshape(2**width, 2**width)


def apply(rho, u) -> np.ndarray:
    """Conjugate ``rho`` by ``u``: returns ``u rho u^dagger``."""
    rho = np.asarray(rho)
    m = _as_matrix(u)
    if m.shape != rho.shape:
        raise DimensionError(f"unitary shape {m.shape} does not match state shape {rho.shape}")
    return m @ rho @ m.conj().T


_LETTERS = "abcdefghijklmnop"


def partial_trace(rho, keep: Iterable[int]) -> np.ndarray:
    """Reduced state on the qubits in ``keep`` (returned in ascending order)."""
    rho = np.asarray(rho)
    n = _num_qubits(rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"qubit index out of range for a {n}-qubit state")
    row = list(_LETTERS[:n])
    col = [row[i] if i not in keep else _LETTERS[n + i] for i in range(n)]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    t = np.einsum("".join(row) + "".join(col) + "->" + out, rho.reshape((2,) * (2 * n)))
    d = 2 ** len(keep)
    return t.reshape(d, d)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    if w.min() < -PSD_SLACK:
        raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))`` (not squared)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    r = _psd_sqrt(rho)
    inner = r @ sigma @ r
    inner = 0.5 * (inner + inner.conj().T)
    w = np.linalg.eigvalsh(inner)
    if w.min() < -PSD_SLACK:
        raise InvalidStateError(f"sigma is not positive semidefinite (min eigenvalue {w.min():.3g})")
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))))
    return min(max(f, 0.0), 1.0)


def trace_overlap(rho, sigma) -> float:
    """``Tr(rho sigma)``, which is what ``Tr(rho^1/2 sigma rho^1/2)`` reduces to."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    return float(np.real(np.trace(rho @ sigma)))


def homogenizer_condition_check(u, rho, tol: float = 1e-9) -> bool:
    """True if both marginals of ``u (rho x rho) u^dagger`` equal ``rho`` within ``tol``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError("homogenizer condition is defined for single-qubit states")
    out = apply(np.kron(rho, rho), u)
    first = partial_trace(out, [0])
    second = partial_trace(out, [1])
    return bool(np.abs(first - rho).max() <= tol and np.abs(second - rho).max() <= tol)
