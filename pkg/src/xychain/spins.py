"""NMR spin-system parameters and the rotating-frame ZZ Hamiltonian."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .qlinalg import SZ, embed


def _default_j() -> np.ndarray:
    return np.array(
        [
            [0.0, 224.5, 49.7],
            [224.5, 0.0, -310.9],
            [49.7, -310.9, 0.0],
        ]
    )


@dataclass
class SpinSystem:
    """Three-spin 13CHFBr2 defaults: 1H, 13C and 19F as qubits 1, 2, 3.

    J couplings in Hz, relaxation times in seconds.
    """

    names: tuple[str, ...] = ("H", "C", "F")
    gamma_ratios: tuple[float, ...] = (1.0, 0.25, 0.94)
    j_hz: np.ndarray = field(default_factory=_default_j)
    t1_s: tuple[float, ...] = (6.7, 1.9, 4.0)
    t2_s: tuple[float, ...] = (1.4, 0.71, 0.70)

    def __post_init__(self):
        self.j_hz = np.asarray(self.j_hz, dtype=float)
        n = len(self.names)
        if self.j_hz.shape != (n, n):
            raise ValueError(f"J matrix must be {n}x{n}")
        if not np.allclose(self.j_hz, self.j_hz.T) or np.any(np.diag(self.j_hz) != 0):
            raise ValueError("J matrix must be symmetric with zero diagonal")
        for seq in (self.gamma_ratios, self.t1_s, self.t2_s):
            if len(seq) != n:
                raise ValueError("per-spin parameter lists must match the number of spins")
        for t1, t2 in zip(self.t1_s, self.t2_s):
            if t1 <= 0 or t2 <= 0:
                raise ValueError("relaxation times must be positive")
            if t2 > 2 * t1:
                raise ValueError("unphysical relaxation: T2 > 2 T1")

    @property
    def n_spins(self) -> int:
        return len(self.names)

    def j(self, a: int, b: int) -> float:
        """Coupling between 1-based spins ``a`` and ``b`` in Hz."""
        return float(self.j_hz[a - 1, b - 1])

    def scaled(self, j_factor: float = 1.0) -> "SpinSystem":
        return SpinSystem(self.names, self.gamma_ratios, self.j_hz * j_factor, self.t1_s, self.t2_s)

    def without_relaxation(self) -> "SpinSystem":
        inf = (np.inf,) * self.n_spins
        return SpinSystem(self.names, self.gamma_ratios, self.j_hz, inf, inf)

    @classmethod
    def from_dict(cls, data: dict) -> "SpinSystem":
        spins = data["spins"]
        return cls(
            names=tuple(s["name"] for s in spins),
            gamma_ratios=tuple(float(s["gamma_ratio"]) for s in spins),
            j_hz=np.array(data["j_hz"], dtype=float),
            t1_s=tuple(float(s["t1_s"]) for s in spins),
            t2_s=tuple(float(s["t2_s"]) for s in spins),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "SpinSystem":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {
            "spins": [
                {"name": n, "gamma_ratio": g, "t1_s": t1, "t2_s": t2}
                for n, g, t1, t2 in zip(self.names, self.gamma_ratios, self.t1_s, self.t2_s)
            ],
            "j_hz": self.j_hz.tolist(),
        }


NEAREST_NEIGHBOURS = ((1, 2), (2, 3))


def zz_hamiltonian(system: SpinSystem, include_pairs=None) -> np.ndarray:
    """Sum of (pi/2) J_ab Z_a Z_b in rad/s; all coupled pairs by default."""
    n = system.n_spins
    if include_pairs is None:
        include_pairs = [p for p in combinations(range(1, n + 1), 2) if system.j(*p) != 0]
    h = np.zeros((2**n, 2**n), dtype=complex)
    for a, b in include_pairs:
        if system.j(a, b) == 0:
            raise ValueError(f"pair {(a, b)} is uncoupled")
        h += 0.5 * np.pi * system.j(a, b) * embed({a: SZ, b: SZ}, n)
    return h


def equilibrium_deviation(system: SpinSystem) -> np.ndarray:
    """High-temperature deviation sum_i (gamma_i / gamma_1) Z_i."""
    n = system.n_spins
    g1 = system.gamma_ratios[0]
    return sum(g / g1 * embed({i: SZ}, n) for i, g in enumerate(system.gamma_ratios, start=1))
