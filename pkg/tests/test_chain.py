import numpy as np
import pytest
from scipy.linalg import expm

from xychain.chain import (
    BELL_010, BELL_101, GHZ_STATE, PHI_W, W_STATE,
    ChainSpec, commuting_split_check, evolve, initial_state, phi_from_time,
    prepare_bell, prepare_ghz, prepare_w, split_factors, time_from_phi,
    xy_hamiltonian, xy_hamiltonian_ladder, xy_unitary, xy_unitary_closed_form,
)
from xychain.entanglement import pair_concurrence, three_tangle
from xychain.qlinalg import SZ, basis_state, embed, equal_up_to_global_phase

BASIS = [format(i, "03b") for i in range(8)]


def overlap(a, b):
    return abs(np.vdot(a, b))


def test_chainspec_validation():
    with pytest.raises(ValueError):
        ChainSpec(3, (1.0,))
    with pytest.raises(ValueError):
        ChainSpec(1, ())
    assert ChainSpec.uniform(4, 2.0).couplings == (2.0, 2.0, 2.0)


def test_phi_time_roundtrip():
    assert phi_from_time(2.0, time_from_phi(2.0, 0.37)) == pytest.approx(0.37)


def test_hamiltonian_hopping():
    h = xy_hamiltonian(ChainSpec.uniform(2, 1.0))
    assert np.allclose(h @ basis_state("01"), basis_state("10"))


def test_hamiltonian_forms_agree():
    spec = ChainSpec(4, (0.3, -1.2, 2.0))
    assert np.array_equal(xy_hamiltonian(spec), xy_hamiltonian_ladder(spec))


def test_ferromagnetic_states_are_zero_modes():
    h = xy_hamiltonian(ChainSpec.uniform(3, 1.7))
    assert np.allclose(h @ basis_state("000"), 0)
    assert np.allclose(h @ basis_state("111"), 0)


def test_hamiltonian_conserves_magnetisation():
    h = xy_hamiltonian(ChainSpec(3, (0.4, 1.3)))
    mz = sum(embed({q: SZ}, 3) for q in (1, 2, 3))
    assert np.abs(h @ mz - mz @ h).max() == 0


def test_closed_form_examples():
    assert np.array_equal(xy_unitary_closed_form(0.0), np.eye(8))
    u = xy_unitary_closed_form(np.pi / 4)
    assert abs(u[2, 2]) < 1e-16
    assert abs(u[1, 2] - (-1j / np.sqrt(2))) < 1e-15


def test_closed_form_vs_scipy_expm(rng):
    j = 1.3
    h = xy_hamiltonian(ChainSpec.uniform(3, j))
    for phi in rng.uniform(-2 * np.pi, 2 * np.pi, 100):
        t = time_from_phi(j, phi)
        assert np.abs(expm(-1j * h * t) - xy_unitary_closed_form(phi)).max() < 1e-12


def test_closed_form_periodic_and_unitary(rng):
    for phi in rng.uniform(-10, 10, 100):
        u = xy_unitary_closed_form(phi)
        assert np.abs(xy_unitary_closed_form(phi + 2 * np.pi) - u).max() < 1e-12
        assert np.abs(u @ u.conj().T - np.eye(8)).max() < 1e-12


def test_nonuniform_uses_spectral_path():
    spec = ChainSpec(3, (1.0, 0.5))
    h = xy_hamiltonian(spec)
    assert np.allclose(xy_unitary(spec, 0.8), expm(-1j * h * np.sqrt(2) * 0.8))


def test_commuting_split():
    assert commuting_split_check(0.0)
    assert commuting_split_check(np.pi / 3)
    fa, fb = split_factors(0.0)
    assert np.array_equal(fa, np.eye(8)) and np.array_equal(fb, np.eye(8))
    fa, fb = split_factors(np.pi / 3)
    assert np.abs(fa @ fb - xy_unitary_closed_form(np.pi / 3)).max() < 1e-12


def test_evolve_examples():
    spec = ChainSpec.uniform(3)
    assert np.abs(evolve(basis_state("010"), spec, np.pi / 4) - BELL_010).max() < 1e-15
    psi = evolve(basis_state("111"), spec, 1.234)
    assert equal_up_to_global_phase(psi, basis_state("111"))
    expect = (basis_state("101") - 1j * basis_state("011") - 1j * basis_state("110")) / np.sqrt(3)
    assert np.abs(evolve(basis_state("101"), spec, PHI_W) - expect).max() < 1e-15


def test_evolve_dimension_mismatch():
    with pytest.raises(ValueError):
        evolve(basis_state("01"), ChainSpec.uniform(3), 0.1)


def test_w_angle_matches_decimal():
    # the printed angle pi/6.577 is a rounding of arctan(sqrt 2)/2
    assert abs(PHI_W - np.pi / 6.577) < 5e-5


@pytest.mark.parametrize("label", BASIS)
def test_excitation_sector_conserved(label, rng):
    weight = label.count("1")
    outside = [i for i, b in enumerate(BASIS) if b.count("1") != weight]
    for phi in rng.uniform(0, 2 * np.pi, 20):
        psi = evolve(basis_state(label), ChainSpec.uniform(3), phi)
        assert np.abs(psi[outside]).max(initial=0) < 1e-12
        assert abs(np.linalg.norm(psi) - 1) < 1e-12


def test_ferromagnetic_states_static(rng):
    for phi in rng.uniform(0, 10, 10):
        for lab in ("000", "111"):
            assert equal_up_to_global_phase(evolve(basis_state(lab), ChainSpec.uniform(3), phi), basis_state(lab))


@pytest.mark.parametrize("label,target", [("010", BELL_010), ("101", BELL_101)])
def test_prepare_bell(label, target):
    res = prepare_bell(label)
    assert np.abs(res.final_state - target).max() < 1e-15
    assert res.final_state is res.intermediate_state
    assert pair_concurrence(res.final_state, 1, 3) == pytest.approx(1, abs=1e-12)


def test_prepare_bell_rejects_other_states():
    with pytest.raises(ValueError):
        prepare_bell("000")


def test_prepare_w():
    res = prepare_w()
    expect_mid = (basis_state("101") - 1j * basis_state("011") - 1j * basis_state("110")) / np.sqrt(3)
    assert np.abs(res.intermediate_state - expect_mid).max() < 1e-15
    assert overlap(W_STATE, res.final_state) == pytest.approx(1, abs=1e-12)
    assert three_tangle(res.final_state) < 1e-10
    for i, j in ((1, 2), (1, 3), (2, 3)):
        assert pair_concurrence(res.final_state, i, j) == pytest.approx(2 / 3, abs=1e-10)
    with pytest.raises(ValueError):
        prepare_w("010")


def test_prepare_ghz():
    res = prepare_ghz()
    signs = np.array([1, -1, -1, -1, -1, -1, -1, 1]) / np.sqrt(8)
    assert equal_up_to_global_phase(res.intermediate_state, signs.astype(complex), 1e-12)
    assert overlap(GHZ_STATE, res.final_state) == pytest.approx(1, abs=1e-12)
    assert three_tangle(res.final_state) == pytest.approx(1, abs=1e-10)


def test_initial_state_labels():
    assert np.allclose(initial_state("superposition"), np.full(8, 1 / np.sqrt(8)))
    with pytest.raises(ValueError):
        initial_state("0a1")
