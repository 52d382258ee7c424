"""Exact simulation of three-spin Heisenberg-XY chains and their NMR compilation."""

from .chain import ChainSpec, evolve, prepare_bell, prepare_ghz, prepare_w, xy_hamiltonian, xy_unitary_closed_form
from .entanglement import concurrence, one_tangle, three_tangle
from .spins import SpinSystem

__all__ = [
    "ChainSpec",
    "SpinSystem",
    "concurrence",
    "evolve",
    "one_tangle",
    "prepare_bell",
    "prepare_ghz",
    "prepare_w",
    "three_tangle",
    "xy_hamiltonian",
    "xy_unitary_closed_form",
]
