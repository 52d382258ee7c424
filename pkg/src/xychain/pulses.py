"""Gate IR, the XY-to-ZZ compiler and delay-level lowering.

A ``GateSequence`` lists gates in time order: the first gate acts first.
Operator products written right-to-left go through
``GateSequence.from_operator_order``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .chain import PHI_BELL, PHI_GHZ, PHI_W, rotation
from .qlinalg import SZ, PhaseReport, embed, equal_up_to_global_phase, n_qubits_of
from .spins import SpinSystem, zz_hamiltonian

QUARTER = np.pi / 4


@dataclass(frozen=True)
class Rotation:
    """exp(-i angle sigma_axis / 2) on one qubit."""

    qubit: int
    axis: str
    angle: float

    def __post_init__(self):
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"bad rotation axis {self.axis!r}")


@dataclass(frozen=True)
class ZZ:
    """exp(-i angle Z_a Z_b)."""

    pair: tuple[int, int]
    angle: float

    def __post_init__(self):
        a, b = self.pair
        if a == b:
            raise ValueError("ZZ needs two distinct qubits")


@dataclass(frozen=True)
class ZZZ:
    """exp(-i angle Z_1 Z_2 Z_3)."""

    angle: float


Gate = Union[Rotation, ZZ, ZZZ]


def rot_from_exponent(qubit: int, axis: str, coeff: float) -> Rotation:
    """exp(-i coeff sigma) written as a rotation by 2 coeff."""
    return Rotation(qubit, axis, 2 * coeff)


@dataclass
class GateSequence:
    gates: list = field(default_factory=list)

    @classmethod
    def from_operator_order(cls, factors: Iterable[Gate]) -> "GateSequence":
        return cls(list(factors)[::-1])

    def __iter__(self):
        return iter(self.gates)

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "GateSequence") -> "GateSequence":
        return GateSequence(self.gates + list(other.gates))

    def counts(self) -> dict[str, int]:
        out = {"rotation": 0, "zz": 0, "zzz": 0}
        for g in self.gates:
            out[_gate_type(g)] += 1
        return out

    def to_json(self) -> list[dict]:
        return [gate_to_json(g) for g in self.gates]

    @classmethod
    def from_json(cls, data: list[dict]) -> "GateSequence":
        return cls([gate_from_json(d) for d in data])


def _gate_type(g: Gate) -> str:
    return {Rotation: "rotation", ZZ: "zz", ZZZ: "zzz"}[type(g)]


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Rotation):
        return {"type": "rotation", "qubits": [g.qubit], "axis": g.axis, "angle": g.angle}
    if isinstance(g, ZZ):
        return {"type": "zz", "qubits": list(g.pair), "angle": g.angle}
    return {"type": "zzz", "qubits": [1, 2, 3], "angle": g.angle}


def gate_from_json(d: dict) -> Gate:
    kind = d["type"]
    if kind == "rotation":
        return Rotation(int(d["qubits"][0]), d["axis"], float(d["angle"]))
    if kind == "zz":
        a, b = d["qubits"]
        return ZZ((int(a), int(b)), float(d["angle"]))
    if kind == "zzz":
        return ZZZ(float(d["angle"]))
    raise ValueError(f"unknown gate type {kind!r}")


def _check_qubits(qubits, n):
    for q in qubits:
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} out of range for {n} qubits")


def _diag_zz(qubits, n) -> np.ndarray:
    return np.real(np.diag(embed({q: SZ for q in qubits}, n)))


def gate_unitary(g: Gate, n_qubits: int) -> np.ndarray:
    if isinstance(g, Rotation):
        _check_qubits([g.qubit], n_qubits)
        return embed({g.qubit: rotation(g.axis, g.angle)}, n_qubits)
    if isinstance(g, ZZ):
        _check_qubits(g.pair, n_qubits)
        return np.diag(np.exp(-1j * g.angle * _diag_zz(g.pair, n_qubits)))
    if isinstance(g, ZZZ):
        if n_qubits != 3:
            raise ValueError("ZZZ gates act on exactly three qubits")
        return np.diag(np.exp(-1j * g.angle * _diag_zz((1, 2, 3), 3)))
    raise TypeError(f"not a gate: {g!r}")


def sequence_unitary(seq: GateSequence | Iterable[Gate], n_qubits: int = 3) -> np.ndarray:
    u = np.eye(2**n_qubits, dtype=complex)
    for g in seq:
        u = gate_unitary(g, n_qubits) @ u
    return u


def compile_zzz(angle: float) -> GateSequence:
    """exp(-i angle ZZZ) from ZZ(1,2), ZZ(2,3) and rotations on qubit 2.

    The outer ZZ(1,2) conjugation is angle independent; only the inner
    ZZ(2,3) angle carries ``angle``.
    """
    return GateSequence.from_operator_order(
        [
            rot_from_exponent(2, "x", QUARTER),
            ZZ((1, 2), QUARTER),
            rot_from_exponent(2, "y", QUARTER),
            ZZ((2, 3), angle),
            rot_from_exponent(2, "y", QUARTER),
            ZZ((1, 2), QUARTER),
            rot_from_exponent(2, "y", -np.pi / 2),
            rot_from_exponent(2, "x", -QUARTER),
        ]
    )


def inline_zzz(seq: GateSequence) -> GateSequence:
    out = []
    for g in seq:
        out.extend(compile_zzz(g.angle).gates if isinstance(g, ZZZ) else [g])
    return GateSequence(out)


def compile_xy_unitary(phi: float, inline: bool = False) -> GateSequence:
    """Uniform three-spin XY propagator at ``phi`` as rotations + ZZ + ZZZ."""
    e = QUARTER
    zzz = np.pi / 8
    seq = GateSequence.from_operator_order(
        [
            rot_from_exponent(1, "y", e),
            rot_from_exponent(3, "x", -e),
            ZZZ(zzz),
            rot_from_exponent(2, "y", e),
            ZZ((1, 2), phi),
            rot_from_exponent(2, "y", -e),
            ZZZ(-zzz),
            rot_from_exponent(1, "y", -e),
            rot_from_exponent(3, "x", e),
            rot_from_exponent(1, "x", -e),
            rot_from_exponent(3, "y", e),
            ZZZ(zzz),
            rot_from_exponent(2, "y", e),
            ZZ((2, 3), phi),
            rot_from_exponent(2, "y", -e),
            ZZZ(-zzz),
            rot_from_exponent(1, "x", e),
            rot_from_exponent(3, "y", -e),
        ]
    )
    return inline_zzz(seq) if inline else seq


def compile_z_rotation(qubit: int, angle: float = np.pi / 2) -> GateSequence:
    """Composite Z rotation [pi/2]_Y - [angle]_X - [pi/2]_-Y in time order."""
    return GateSequence(
        [
            Rotation(qubit, "y", np.pi / 2),
            Rotation(qubit, "x", angle),
            Rotation(qubit, "y", -np.pi / 2),
        ]
    )


# --- protocol circuits ------------------------------------------------------

PROTOCOLS = ("bell-010", "bell-101", "w", "ghz")

PROTOCOL_INITIAL = {"bell-010": "010", "bell-101": "101", "w": "101", "ghz": "000"}
PROTOCOL_PHI = {"bell-010": PHI_BELL, "bell-101": PHI_BELL, "w": PHI_W, "ghz": PHI_GHZ}


def protocol_sequence(protocol: str, inline: bool = False) -> GateSequence:
    """Full gate-level circuit for a preparation protocol from its basis state."""
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; choose from {PROTOCOLS}")
    core = compile_xy_unitary(PROTOCOL_PHI[protocol], inline=inline)
    if protocol == "w":
        return core + compile_z_rotation(2)
    if protocol == "ghz":
        pre = GateSequence([Rotation(q, "y", np.pi / 2) for q in (1, 2, 3)])
        post = GateSequence([Rotation(q, "x", np.pi / 2) for q in (1, 2, 3)])
        return pre + core + post
    return core


# --- timed schedules --------------------------------------------------------


@dataclass(frozen=True)
class Pulse:
    """Ideal instantaneous pulse, exp(-i angle sigma_axis / 2)."""

    qubit: int
    axis: str
    angle: float


@dataclass(frozen=True)
class Delay:
    duration: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("delays cannot be negative")


@dataclass
class Schedule:
    events: list = field(default_factory=list)

    @property
    def total_duration(self) -> float:
        return sum(e.duration for e in self.events if isinstance(e, Delay))

    def delays(self) -> list[float]:
        return [e.duration for e in self.events if isinstance(e, Delay)]

    def __add__(self, other: "Schedule") -> "Schedule":
        return Schedule(self.events + list(other.events))

    def to_json(self) -> dict:
        events = []
        for e in self.events:
            if isinstance(e, Delay):
                events.append({"delay_s": e.duration})
            else:
                events.append({"pulse": {"qubits": [e.qubit], "axis": e.axis, "angle": e.angle}})
        return {"events": events}

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        events = []
        for e in data["events"]:
            if "delay_s" in e:
                events.append(Delay(float(e["delay_s"])))
            else:
                p = e["pulse"]
                events.append(Pulse(int(p["qubits"][0]), p["axis"], float(p["angle"])))
        return cls(events)


def expand_zz_to_schedule(pair: tuple[int, int], phi: float, system: SpinSystem) -> Schedule:
    """Realise exp(-i phi Z_a Z_b) with free evolution and spectator refocusing.

    Two delays of tau/2 with tau = 2|phi| / (pi |J_ab|), each followed by a
    pi_x pulse on the third spin. When phi and J_ab differ in sign the block
    is bracketed by pi_x pulses on spin ``a`` so the delay stays positive.
    """
    a, b = sorted(pair)
    n = system.n_spins
    if n != 3:
        raise ValueError("refocused ZZ lowering is implemented for three spins")
    j = system.j(a, b)
    if j == 0:
        raise ValueError(f"spins {a} and {b} are not coupled")
    if phi == 0:
        return Schedule([])
    (spectator,) = [q for q in (1, 2, 3) if q not in (a, b)]
    tau = 2 * abs(phi) / (np.pi * abs(j))
    core = [
        Delay(tau / 2),
        Pulse(spectator, "x", np.pi),
        Delay(tau / 2),
        Pulse(spectator, "x", np.pi),
    ]
    if np.sign(phi) != np.sign(j):
        core = [Pulse(a, "x", np.pi)] + core + [Pulse(a, "x", np.pi)]
    return Schedule(core)


def lower_to_schedule(seq: GateSequence, system: SpinSystem) -> Schedule:
    """Rotations become pulses, ZZ gates become refocused delays."""
    events = []
    for g in inline_zzz(seq):
        if isinstance(g, Rotation):
            events.append(Pulse(g.qubit, g.axis, g.angle))
        else:
            events.extend(expand_zz_to_schedule(g.pair, g.angle, system).events)
    return Schedule(events)


def protocol_schedule(protocol: str, system: SpinSystem) -> Schedule:
    return lower_to_schedule(protocol_sequence(protocol), system)


def schedule_unitary(schedule: Schedule, system: SpinSystem) -> np.ndarray:
    """Coherent propagator of a schedule under the full ZZ Hamiltonian."""
    n = system.n_spins
    hdiag = np.real(np.diag(zz_hamiltonian(system)))
    u = np.eye(2**n, dtype=complex)
    for e in schedule.events:
        if isinstance(e, Delay):
            u = np.exp(-1j * hdiag * e.duration)[:, None] * u
        else:
            u = embed({e.qubit: rotation(e.axis, e.angle)}, n) @ u
    return u


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    phase: complex
    residual: float

    def __bool__(self) -> bool:
        return self.passed


def verify_equivalence(
    seq: GateSequence | Schedule,
    target: np.ndarray,
    tol: float = 1e-9,
    system: SpinSystem | None = None,
) -> EquivalenceReport:
    target = np.asarray(target, dtype=complex)
    n = n_qubits_of(target)
    if isinstance(seq, Schedule):
        u = schedule_unitary(seq, system or SpinSystem())
    else:
        u = sequence_unitary(seq, n)
    rep: PhaseReport = equal_up_to_global_phase(u, target, tol)
    return EquivalenceReport(rep.equal, rep.phase, rep.residual)


__all__ = [
    "Rotation",
    "ZZ",
    "ZZZ",
    "GateSequence",
    "Pulse",
    "Delay",
    "Schedule",
    "gate_unitary",
    "sequence_unitary",
    "compile_xy_unitary",
    "compile_zzz",
    "compile_z_rotation",
    "inline_zzz",
    "expand_zz_to_schedule",
    "lower_to_schedule",
    "protocol_sequence",
    "protocol_schedule",
    "schedule_unitary",
    "verify_equivalence",
]
