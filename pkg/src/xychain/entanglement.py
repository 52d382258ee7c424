"""Pairwise concurrence, one-tangle and three-tangle for 2/3-qubit states."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Sequence

import numpy as np

from .chain import ChainSpec, evolve
from .qlinalg import SY, is_psd, partial_trace

_YY = np.kron(SY, SY)
PURITY_TOL = 1e-8


def spin_flip(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("spin flip is defined for two-qubit density matrices")
    return _YY @ rho.conj() @ _YY


def _concurrence_from_factor(w: np.ndarray) -> float:
    """Concurrence of rho = w w^dag from the singular values of w^T YY w.

    Those singular values are the square roots of the eigenvalues of
    rho * flip(rho), so no square root of a near-zero eigenvalue is taken.
    """
    t = w.T @ _YY @ w
    lam = np.zeros(4)
    sv = np.linalg.svd(t, compute_uv=False)
    lam[: min(4, sv.size)] = np.sort(sv)[::-1][:4]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence(rho: np.ndarray, tol: float = 1e-10) -> float:
    """Wootters concurrence of a two-qubit density matrix (or ket)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        if rho.shape != (4,):
            raise ValueError("concurrence needs a two-qubit state")
        return _concurrence_from_factor(rho[:, None])
    if rho.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    if not is_psd(rho, tol):
        raise ValueError("concurrence input is not positive semidefinite")
    ev, vec = np.linalg.eigh((rho + rho.conj().T) / 2)
    return _concurrence_from_factor(vec * np.sqrt(np.clip(ev, 0.0, None)))


def _pair_factor(psi: np.ndarray, i: int, j: int) -> np.ndarray:
    """w with rho_ij = w w^dag, read directly off the amplitudes of ``psi``."""
    n = int(np.log2(psi.size))
    t = np.moveaxis(psi.reshape([2] * n), [i - 1, j - 1], [0, 1])
    return t.reshape(4, -1)


def pair_concurrence(state: np.ndarray, i: int, j: int) -> float:
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return _concurrence_from_factor(_pair_factor(state, i, j))
    return concurrence(partial_trace(state, {i, j}))


def one_tangle(state: np.ndarray, i: int) -> float:
    """sqrt(2 (1 - Tr rho_i^2)) for the marginal of qubit ``i``.

    Evaluated as 2 sqrt(det rho_i); for a ket the determinant is the sum of
    squared 2x2 minors of the split amplitude matrix, which avoids the
    cancellation in 1 - Tr rho_i^2 near product states.
    """
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        n = int(np.log2(state.size))
        m = np.moveaxis(state.reshape([2] * n), i - 1, 0).reshape(2, -1)
        minors = np.outer(m[0], m[1]) - np.outer(m[1], m[0])
        det = 0.5 * float(np.sum(np.abs(minors) ** 2))
    else:
        rho_i = partial_trace(state, {i})
        det = float(np.real(rho_i[0, 0] * rho_i[1, 1] - rho_i[0, 1] * rho_i[1, 0]))
    return float(2.0 * np.sqrt(max(0.0, det)))


def three_tangle(psi: np.ndarray, focus: int = 1, tol: float = 1e-10) -> float:
    """Residual tripartite entanglement of a pure three-qubit state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape not in ((8,), (8, 8)):
        raise ValueError("three_tangle needs a three-qubit state")
    if psi.ndim == 2:
        purity = float(np.real(np.trace(psi @ psi)))
        if purity < 1.0 - PURITY_TOL:
            raise ValueError(
                f"three_tangle is defined for pure states only (purity {purity:.6f})"
            )
        ev, vec = np.linalg.eigh((psi + psi.conj().T) / 2)
        psi = vec[:, -1] * np.sqrt(max(ev[-1], 0.0))
    j, k = (q for q in (1, 2, 3) if q != focus)
    tau = (
        one_tangle(psi, focus) ** 2
        - pair_concurrence(psi, focus, j) ** 2
        - pair_concurrence(psi, focus, k) ** 2
    )
    if tau < -tol:
        raise ValueError(f"negative residual tangle {tau:.3e}")
    return float(min(1.0, max(0.0, tau)))


@dataclass(frozen=True)
class EntanglementProfile:
    phi: float
    c12: float
    c13: float
    c23: float
    c1_23: float
    c123: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def profile(state: np.ndarray, phi: float = 0.0) -> EntanglementProfile:
    """All measures for a three-qubit state; ``c123`` is None for mixed input."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        pure = True
    else:
        pure = float(np.real(np.trace(state @ state))) >= 1.0 - PURITY_TOL
    return EntanglementProfile(
        phi=float(phi),
        c12=pair_concurrence(state, 1, 2),
        c13=pair_concurrence(state, 1, 3),
        c23=pair_concurrence(state, 2, 3),
        c1_23=one_tangle(state, 1),
        c123=three_tangle(state) if pure else None,
    )

def default_phi_grid(start: float = 0.0, stop: float = np.pi, step: float = np.pi / 628) -> np.ndarray:
    if step <= 0:
        raise ValueError("phi step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def dynamics_sweep(
    initial: np.ndarray, phi_grid: Sequence[float] | None = None
) -> list[EntanglementProfile]:
    spec = ChainSpec.uniform(3)
    grid = default_phi_grid() if phi_grid is None else phi_grid
    return [profile(evolve(initial, spec, phi), phi) for phi in grid]
