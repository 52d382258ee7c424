"""Pseudo-pure states, T1/T2 relaxation, schedule simulation and tomography."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .chain import rotation, xy_unitary_closed_form
from .pulses import (
    PROTOCOL_INITIAL,
    Delay,
    Schedule,
    compile_xy_unitary,
    lower_to_schedule,
    protocol_schedule,
)
from .qlinalg import I2, SX, SZ, basis_state, embed, ket_to_dm, n_qubits_of, pauli_string
from .spins import SpinSystem, equilibrium_deviation, zz_hamiltonian

# --- pseudo-pure states -------------------------------------------------------


@dataclass(frozen=True)
class PseudoPureState:
    label: str
    epsilon: float
    matrix: np.ndarray

    @property
    def deviation(self) -> np.ndarray:
        d = self.matrix.shape[0]
        return self.matrix - np.eye(d) / d


def make_pps(label: str, epsilon: float = 1.0) -> PseudoPureState:
    """(1 - eps) I/2^N + eps |label><label|.

    Built from the all-zero PPS by pi_x flips on the spins set in ``label``.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    n = len(label)
    d = 2**n
    zero = (1 - epsilon) * np.eye(d) / d + epsilon * ket_to_dm(basis_state("0" * n))
    flips = {q: SX for q, bit in enumerate(label, start=1) if bit == "1"}
    x = embed(flips, n)
    return PseudoPureState(label, float(epsilon), x @ zero @ x)


# --- relaxation ------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseParams:
    enabled: bool = True
    slices: int = 16

    def __post_init__(self):
        if self.slices < 1:
            raise ValueError("need at least one slice per delay")


def dephasing_rate(t1: float, t2: float) -> float:
    """Pure dephasing rate 1/T2' = 1/T2 - 1/(2 T1)."""
    rate = 1.0 / t2 - 0.5 / t1
    if rate < -1e-15:
        raise ValueError("T2 > 2 T1 gives a negative dephasing rate")
    return max(rate, 0.0)


def t1_kraus(duration: float, t1: float) -> list[np.ndarray]:
    """Generalised amplitude damping toward I/2 with gamma = 1 - exp(-t/T1)."""
    gamma = -np.expm1(-duration / t1)
    s = np.sqrt(0.5)
    return [
        s * np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex),
        s * np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex),
        s * np.array([[np.sqrt(1 - gamma), 0], [0, 1]], dtype=complex),
        s * np.array([[0, 0], [np.sqrt(gamma), 0]], dtype=complex),
    ]


def dephasing_kraus(duration: float, t1: float, t2: float) -> list[np.ndarray]:
    lam = np.exp(-duration * dephasing_rate(t1, t2))
    return [np.sqrt((1 + lam) / 2) * I2, np.sqrt((1 - lam) / 2) * SZ]


def qubit_kraus(duration: float, t1: float, t2: float) -> list[np.ndarray]:
    """Kraus set for T1 relaxation followed by pure dephasing on one spin."""
    return [d @ k for d in dephasing_kraus(duration, t1, t2) for k in t1_kraus(duration, t1)]


def _apply_local(rho: np.ndarray, kraus: Sequence[np.ndarray], qubit: int, n: int) -> np.ndarray:
    t = rho.reshape([2] * (2 * n))
    row, col = qubit - 1, n + qubit - 1
    out = np.zeros_like(t)
    for k in kraus:
        s = np.moveaxis(np.tensordot(k, t, axes=([1], [row])), 0, row)
        s = np.moveaxis(np.tensordot(s, k.conj(), axes=([col], [1])), -1, col)
        out += s
    return out.reshape(rho.shape)


def apply_decoherence(rho: np.ndarray, duration: float, system: SpinSystem) -> np.ndarray:
    """Independent T1/T2 relaxation of every spin over ``duration`` seconds."""
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    if duration == 0:
        return rho.copy()
    for q in range(1, n + 1):
        rho = _apply_local(rho, qubit_kraus(duration, system.t1_s[q - 1], system.t2_s[q - 1]), q, n)
    return rho


def simulate_schedule(
    rho0: np.ndarray,
    schedule: Schedule,
    system: SpinSystem,
    noise: NoiseParams | None = None,
) -> np.ndarray:
    """Evolve a density matrix through pulses and ZZ free evolution.

    With noise enabled each delay is cut into ``noise.slices`` pieces, and
    relaxation is applied at the middle of every piece.
    """
    rho = np.asarray(rho0, dtype=complex).copy()
    n = n_qubits_of(rho)
    hdiag = np.real(np.diag(zz_hamiltonian(system)))
    noisy = noise is not None and noise.enabled
    for e in schedule.events:
        if isinstance(e, Delay):
            if not noisy:
                ph = np.exp(-1j * hdiag * e.duration)
                rho = ph[:, None] * rho * ph.conj()[None, :]
                continue
            sup = _noisy_delay_superop(e.duration, noise.slices, _system_key(system))
            rho = (sup @ rho.reshape(-1)).reshape(rho.shape)
        else:
            u = embed({e.qubit: rotation(e.axis, e.angle)}, n)
            rho = u @ rho @ u.conj().T
    return rho


def _system_key(system: SpinSystem) -> tuple:
    return (tuple(system.j_hz.ravel()), tuple(system.t1_s), tuple(system.t2_s))


@lru_cache(maxsize=256)
def _noisy_delay_superop(duration: float, slices: int, key: tuple) -> np.ndarray:
    """Superoperator (row-major vec) of one sliced noisy delay.

    Each slice is a half step of ZZ evolution, relaxation over the full
    slice, then the other half step.
    """
    j_flat, t1, t2 = key
    n = len(t1)
    system = SpinSystem(
        names=tuple(str(i) for i in range(n)),
        gamma_ratios=(1.0,) * n,
        j_hz=np.array(j_flat).reshape(n, n),
        t1_s=t1,
        t2_s=t2,
    )
    d = 2**n
    dt = duration / slices
    hdiag = np.real(np.diag(zz_hamiltonian(system)))
    half = np.exp(-1j * hdiag * dt / 2)
    coh = np.outer(half, half.conj()).reshape(-1)
    # row-major vec(K rho K^dag) = (K kron conj(K)) vec(rho)
    relax = np.eye(d * d, dtype=complex)
    for q in range(1, n + 1):
        ks = qubit_kraus(dt, t1[q - 1], t2[q - 1])
        sq = sum(np.kron(kf, kf.conj()) for kf in (embed({q: k}, n) for k in ks))
        relax = sq @ relax
    step = coh[:, None] * relax * coh[None, :]
    return np.linalg.matrix_power(step, slices)


# --- figures of merit -----------------------------------------------------------


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Tr(a b) / sqrt(Tr(a^2) Tr(b^2))."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("fidelity needs matrices of equal dimension")
    pa = np.real(np.trace(a @ a))
    pb = np.real(np.trace(b @ b))
    if pa <= 0 or pb <= 0:
        raise ValueError("fidelity is undefined for zero-purity input")
    return float(np.real(np.trace(a @ b)) / np.sqrt(pa * pb))


def attenuated_correlation(theory: np.ndarray, experiment: np.ndarray) -> float:
    """Tr(theory experiment) / Tr(theory^2); not symmetric in its arguments."""
    theory = np.asarray(theory)
    experiment = np.asarray(experiment)
    if theory.shape != experiment.shape:
        raise ValueError("attenuated correlation needs matrices of equal dimension")
    norm = np.real(np.trace(theory @ theory))
    if norm <= 0:
        raise ValueError("theory state has zero purity")
    return float(np.real(np.trace(theory @ experiment)) / norm)


# --- Pauli set -------------------------------------------------------------------

PAULI_LABELS = tuple("".join(p) for p in product("IXYZ", repeat=3))


def pauli_set(rho: np.ndarray) -> dict[str, float]:
    """All 64 <LMR> in lexicographic order with I < X < Y < Z."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError("Pauli set is defined for three-qubit states")
    return {lab: float(np.real(np.trace(rho @ pauli_string(lab)))) for lab in PAULI_LABELS}


def reconstruct_from_pauli_set(values: Mapping[str, float]) -> np.ndarray:
    missing = [lab for lab in PAULI_LABELS if lab not in values]
    if missing:
        raise ValueError(f"missing Pauli labels: {missing[:5]}{'...' if len(missing) > 5 else ''}")
    rho = sum(values[lab] * pauli_string(lab) for lab in PAULI_LABELS) / 8
    return np.asarray(rho, dtype=complex)


# --- sweeps and estimates --------------------------------------------------------

XX13 = pauli_string("XIX")


def correlation_sweep(initial: PseudoPureState | np.ndarray, phi_grid: Sequence[float]):
    """<X1 X3> after ideal XY evolution, one (phi, value) per grid point."""
    rho = initial.matrix if isinstance(initial, PseudoPureState) else np.asarray(initial)
    out = []
    for phi in phi_grid:
        u = xy_unitary_closed_form(phi)
        r = u @ rho @ u.conj().T
        out.append((float(phi), float(np.real(np.trace(r @ XX13)))))
    return out


def noisy_correlation_sweep(
    initial: PseudoPureState,
    phi_grid: Sequence[float],
    system: SpinSystem,
    noise: NoiseParams | None = None,
):
    noise = noise or NoiseParams()
    out = []
    for phi in phi_grid:
        sched = lower_to_schedule(compile_xy_unitary(phi), system)
        r = simulate_schedule(initial.matrix, sched, system, noise)
        out.append((float(phi), float(np.real(np.trace(r @ XX13)))))
    return out


def decoherence_estimate(
    protocol: str,
    system: SpinSystem | None = None,
    delay_scale: float = 1.0,
    noise: NoiseParams | None = None,
) -> float:
    """Attenuated correlation of the noisy versus noiseless lowered protocol.

    ``delay_scale`` stretches every delay by dividing all couplings, so the
    target unitary is unchanged while the time spent relaxing grows.
    """
    name = {"bell": "bell-010"}.get(protocol, protocol)
    system = system or SpinSystem()
    if delay_scale <= 0:
        raise ValueError("delay_scale must be positive")
    system = system.scaled(1.0 / delay_scale)
    sched = protocol_schedule(name, system)
    rho0 = make_pps(PROTOCOL_INITIAL[name], 1.0).matrix
    ideal = simulate_schedule(rho0, sched, system, None)
    noisy = simulate_schedule(rho0, sched, system, noise or NoiseParams())
    return attenuated_correlation(ideal, noisy)


__all__ = [
    "SpinSystem",
    "PseudoPureState",
    "NoiseParams",
    "make_pps",
    "equilibrium_deviation",
    "zz_hamiltonian",
    "apply_decoherence",
    "simulate_schedule",
    "fidelity",
    "attenuated_correlation",
    "pauli_set",
    "reconstruct_from_pauli_set",
    "correlation_sweep",
    "noisy_correlation_sweep",
    "decoherence_estimate",
]
