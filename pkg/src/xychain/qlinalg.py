"""Dense complex linear algebra for small qubit registers.

States are plain numpy arrays. Qubit 1 is the most significant bit of the
basis index, so for three qubits the basis runs |000>, |001>, ..., |111>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

DEFAULT_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_+ raises |1> -> |0> with |0> as spin up (sigma_z eigenvalue +1)
SP = np.array([[0, 1], [0, 0]], dtype=complex)
SM = np.array([[0, 0], [1, 0]], dtype=complex)

PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor acting on qubit 1."""
    if not ops:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, ops)


def n_qubits_of(mat: np.ndarray) -> int:
    dim = mat.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def embed(single: dict[int, np.ndarray], n: int) -> np.ndarray:
    """Place 2x2 operators on the given 1-based qubits, identity elsewhere."""
    for q in single:
        _check_qubit(q, n)
    return tensor(*(single.get(q, I2) for q in range(1, n + 1)))


def pauli_string(label: str) -> np.ndarray:
    """Operator for a string such as ``"XZI"``."""
    return tensor(*(PAULI[c] for c in label.upper()))


def basis_state(label: str) -> np.ndarray:
    """Computational basis ket for a bit string such as ``"010"``."""
    if not label or any(c not in "01" for c in label):
        raise ValueError(f"bad basis label {label!r}")
    psi = np.zeros(2 ** len(label), dtype=complex)
    psi[int(label, 2)] = 1.0
    return psi


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _check_qubit(q: int, n: int) -> None:
    if not 1 <= q <= n:
        raise ValueError(f"qubit index {q} outside [1, {n}]")


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.abs(a - a.conj().T).max() <= tol


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return np.abs(a @ a.conj().T - np.eye(a.shape[0])).max() <= tol


def is_psd(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    if not is_hermitian(a, tol):
        return False
    return np.linalg.eigvalsh((a + a.conj().T) / 2).min() >= -tol


def is_normalized(psi: np.ndarray, tol: float = 1e-12) -> bool:
    return abs(np.linalg.norm(psi) - 1.0) <= tol


def is_density_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return is_psd(rho, tol) and abs(np.trace(rho) - 1.0) <= tol


def check_density_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    n_qubits_of(rho)
    if not is_density_matrix(rho, tol):
        raise ValueError("not a valid density matrix (Hermitian, unit trace, PSD)")
    return rho


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the 1-based qubits in ``keep``.

    Kept qubits come out in increasing index order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    for q in keep:
        _check_qubit(q, n)
    drop = [q - 1 for q in range(1, n + 1) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # trace out from the highest axis down so remaining axis numbers stay valid
    for k, ax in enumerate(sorted(drop, reverse=True)):
        m = n - k
        t = np.trace(t, axis1=ax, axis2=ax + m)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def expm_hermitian(h: np.ndarray, t: float = 1.0, tol: float = DEFAULT_TOL) -> np.ndarray:
    """exp(-i h t) through the eigendecomposition of Hermitian ``h``."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise ValueError("expm_hermitian needs a Hermitian generator")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


@dataclass(frozen=True)
class PhaseReport:
    equal: bool
    phase: complex
    residual: float

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = DEFAULT_TOL) -> PhaseReport:
    """Check u == c v for some unit complex c.

    c is read off the entry where ``v`` is largest in magnitude; the residual
    is max |u - c v| over all entries.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    ratio = u[k] / v[k] if v[k] != 0 else 1.0
    c = ratio / abs(ratio) if ratio != 0 else 1.0
    residual = float(np.abs(u - c * v).max())
    return PhaseReport(residual <= tol, complex(c), residual)


def expectation(rho: np.ndarray, obs: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Tr(rho obs) for a Hermitian observable."""
    if not is_hermitian(obs, tol):
        raise ValueError("observable is not Hermitian")
    val = np.trace(np.asarray(rho) @ obs)
    if abs(val.imag) > tol:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return psi / np.linalg.norm(psi)
