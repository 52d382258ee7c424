"""Nearest-neighbour Heisenberg-XY chains and the Bell/W/GHZ protocols.

Time is carried by the dimensionless angle ``phi = J t / sqrt(2)``; use
:func:`phi_from_time` at the boundary when working with (J, t) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qlinalg import (
    SM,
    SP,
    SX,
    SY,
    SZ,
    basis_state,
    embed,
    expm_hermitian,
    tensor,
)

PHI_BELL = np.pi / 4
PHI_W = np.arctan(np.sqrt(2)) / 2
PHI_GHZ = np.pi / 2


@dataclass(frozen=True)
class ChainSpec:
    n_qubits: int
    couplings: tuple[float, ...]

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("a chain needs at least two qubits")
        object.__setattr__(self, "couplings", tuple(float(j) for j in self.couplings))
        if len(self.couplings) != self.n_qubits - 1:
            raise ValueError(
                f"expected {self.n_qubits - 1} couplings, got {len(self.couplings)}"
            )

    @classmethod
    def uniform(cls, n_qubits: int = 3, j: float = 1.0) -> "ChainSpec":
        return cls(n_qubits, (j,) * (n_qubits - 1))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.couplings)) == 1


def phi_from_time(j: float, t: float) -> float:
    return j * t / np.sqrt(2)


def time_from_phi(j: float, phi: float) -> float:
    return np.sqrt(2) * phi / j


def xy_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Sum over bonds of (J_i/2)(XX + YY)."""
    n = spec.n_qubits
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i, j in enumerate(spec.couplings, start=1):
        h += 0.5 * j * (embed({i: SX, i + 1: SX}, n) + embed({i: SY, i + 1: SY}, n))
    return h


def xy_hamiltonian_ladder(spec: ChainSpec) -> np.ndarray:
    """Same operator written as J_i (s+ s- + s- s+) hopping terms."""
    n = spec.n_qubits
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i, j in enumerate(spec.couplings, start=1):
        h += j * (embed({i: SP, i + 1: SM}, n) + embed({i: SM, i + 1: SP}, n))
    return h


def xy_unitary_closed_form(phi: float) -> np.ndarray:
    """Exact 8x8 propagator of the uniform three-spin chain at angle ``phi``."""
    c2 = np.cos(phi) ** 2
    s2 = np.sin(phi) ** 2
    c = np.cos(2 * phi)
    a = -1j / np.sqrt(2) * np.sin(2 * phi)
    u = np.zeros((8, 8), dtype=complex)
    u[0, 0] = u[7, 7] = 1.0
    # one-excitation block on |001>, |010>, |100>
    u[1, 1], u[1, 2], u[1, 4] = c2, a, -s2
    u[2, 1], u[2, 2], u[2, 4] = a, c, a
    u[4, 1], u[4, 2], u[4, 4] = -s2, a, c2
    # two-excitation block on |011>, |101>, |110>
    u[3, 3], u[3, 5], u[3, 6] = c2, a, -s2
    u[5, 3], u[5, 5], u[5, 6] = a, c, a
    u[6, 3], u[6, 5], u[6, 6] = -s2, a, c2
    return u


def xy_unitary(spec: ChainSpec, phi: float) -> np.ndarray:
    """Propagator at angle ``phi``; closed form for the uniform 3-chain.

    For other chains ``phi`` is measured against the first coupling, i.e.
    t = sqrt(2) phi / J_1.
    """
    if spec.n_qubits == 3 and spec.is_uniform:
        return xy_unitary_closed_form(phi)
    t = time_from_phi(spec.couplings[0], phi)
    return expm_hermitian(xy_hamiltonian(spec), t)


def evolve(state: np.ndarray, spec: ChainSpec, phi: float) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**spec.n_qubits,):
        raise ValueError(
            f"state of length {state.shape} does not fit a {spec.n_qubits}-qubit chain"
        )
    return xy_unitary(spec, phi) @ state


def split_generators() -> tuple[np.ndarray, np.ndarray]:
    """The two commuting pieces X1X2 + Y2Y3 and Y1Y2 + X2X3."""
    a = embed({1: SX, 2: SX}, 3) + embed({2: SY, 3: SY}, 3)
    b = embed({1: SY, 2: SY}, 3) + embed({2: SX, 3: SX}, 3)
    return a, b


def split_factors(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """cos(phi) I - (i/sqrt 2) sin(phi) G for each commuting piece G."""
    eye = np.eye(8, dtype=complex)
    return tuple(
        np.cos(phi) * eye - 1j / np.sqrt(2) * np.sin(phi) * g for g in split_generators()
    )


def commuting_split_check(phi: float, tol: float = 1e-12) -> bool:
    a, b = split_generators()
    if np.abs(a @ b - b @ a).max() > tol:
        return False
    fa, fb = split_factors(phi)
    # with J = 1, t = sqrt(2) phi and each factor is exp(-i (t/2) G)
    t = np.sqrt(2) * phi
    ea, eb = expm_hermitian(a, t / 2), expm_hermitian(b, t / 2)
    direct = expm_hermitian(xy_hamiltonian(ChainSpec.uniform(3)), t)
    return (
        np.abs(fa - ea).max() <= tol
        and np.abs(fb - eb).max() <= tol
        and np.abs(fa @ fb - direct).max() <= tol
    )


def rotation(axis: str, angle: float) -> np.ndarray:
    """Single-qubit R_axis(angle) = exp(-i angle sigma_axis / 2)."""
    sigma = {"x": SX, "y": SY, "z": SZ}[axis]
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * sigma


def superposition_state(n: int = 3) -> np.ndarray:
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    return tensor(*([plus] * n)).ravel()


def initial_state(label: str) -> np.ndarray:
    """Basis label such as ``"010"`` or ``"superposition"`` / ``"+++"``."""
    if label in ("superposition", "+++"):
        return superposition_state(3)
    return basis_state(label)


W_STATE = (basis_state("101") + basis_state("011") + basis_state("110")) / np.sqrt(3)
GHZ_STATE = (basis_state("000") + basis_state("111")) / np.sqrt(2)
BELL_010 = -1j / np.sqrt(2) * (basis_state("001") + basis_state("100"))
BELL_101 = -1j / np.sqrt(2) * (basis_state("011") + basis_state("110"))


@dataclass(frozen=True)
class ProtocolResult:
    final_state: np.ndarray
    intermediate_state: np.ndarray
    phi_used: float


_UNIFORM3 = ChainSpec.uniform(3)


def _same_ray(a: np.ndarray, b: np.ndarray) -> bool:
    return abs(abs(np.vdot(a, b)) - 1.0) < 1e-10


def prepare_bell(initial: np.ndarray | str = "010") -> ProtocolResult:
    psi0 = basis_state(initial) if isinstance(initial, str) else np.asarray(initial, complex)
    if not (_same_ray(psi0, basis_state("010")) or _same_ray(psi0, basis_state("101"))):
        raise ValueError("Bell protocol starts from |010> or |101>")
    out = evolve(psi0, _UNIFORM3, PHI_BELL)
    return ProtocolResult(out, out, PHI_BELL)


def prepare_w(initial: np.ndarray | str = "101") -> ProtocolResult:
    psi0 = basis_state(initial) if isinstance(initial, str) else np.asarray(initial, complex)
    if not _same_ray(psi0, basis_state("101")):
        raise ValueError("W protocol starts from |101>")
    mid = evolve(psi0, _UNIFORM3, PHI_W)
    final = embed({2: rotation("z", np.pi / 2)}, 3) @ mid
    return ProtocolResult(final, mid, PHI_W)


def prepare_ghz() -> ProtocolResult:
    ry = rotation("y", np.pi / 2)
    rx = rotation("x", np.pi / 2)
    start = tensor(ry, ry, ry) @ basis_state("000")
    mid = evolve(start, _UNIFORM3, PHI_GHZ)
    final = tensor(rx, rx, rx) @ mid
    return ProtocolResult(final, mid, PHI_GHZ)
