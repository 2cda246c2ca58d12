"""Product-state expectations against the dense oracle and the lattice
observables/states used in the experiments."""

import numpy as np
import pytest

from majprop.oracle import poly_to_dense
from majprop.states import (
    ProductState,
    antiferromagnetic_hole_state,
    expectation,
    hole_density_observable,
    number_operator,
)
from majprop.strings import MajoranaPolynomial

from conftest import random_poly


def state_vector(state: ProductState) -> np.ndarray:
    """Independent dense |psi>: qubit j = fermionic mode j, mode 0 leftmost."""
    n_ferm = len(state.occupations)
    idx = 0
    for n in state.occupations:
        idx = (idx << 1) | n
    v = np.zeros(2**n_ferm, dtype=np.complex128)
    v[idx] = 1.0
    return v


def test_product_state_basics():
    s = ProductState((1, 0, 1))
    assert s.n_modes == 6
    assert s.particle_number == 2
    assert s.to_bitstring() == "101"
    assert ProductState.from_bitstring("101") == s
    with pytest.raises(ValueError):
        ProductState((2, 0))


def test_expectation_matches_dense():
    rng = np.random.default_rng(31)
    for n_ferm in (2, 3, 4):
        n_modes = 2 * n_ferm
        for _ in range(8):
            occ = tuple(int(b) for b in rng.integers(0, 2, n_ferm))
            state = ProductState(occ)
            p = random_poly(rng, n_modes, n_terms=6)
            # symmetrize so the expectation is real
            p_h = MajoranaPolynomial(
                {m: c + np.conj(c) for m, c in p.terms.items()}, n_modes
            )
            v = state_vector(state)
            want = float(np.real(v.conj() @ poly_to_dense(p_h) @ v))
            assert expectation(p_h, state) == pytest.approx(want, abs=1e-10)


def test_expectation_rejects_mode_mismatch():
    with pytest.raises(ValueError):
        expectation(MajoranaPolynomial({3: 1.0}, 4), ProductState((1, 0, 0)))


def test_number_operator_eigenvalues():
    n_modes = 6
    for mode in range(3):
        n_op = number_operator(mode, n_modes)
        for occ in ((0, 0, 0), (1, 1, 1), (1, 0, 1)):
            state = ProductState(occ)
            assert expectation(n_op, state) == pytest.approx(occ[mode])


def test_hole_density_observable_values():
    n_modes = 8  # two sites
    h0 = hole_density_observable(0, n_modes)
    cases = {
        (0, 0, 0, 0): 1.0,  # site 0 empty
        (1, 0, 0, 0): 0.0,  # up only
        (0, 1, 1, 1): 0.0,  # down only
        (1, 1, 0, 0): 0.0,  # doubly occupied
        (0, 0, 1, 1): 1.0,  # other site irrelevant
    }
    for occ, want in cases.items():
        assert expectation(h0, ProductState(occ)) == pytest.approx(want), occ


def test_hole_density_is_projector():
    p = hole_density_observable(1, 8)
    d = poly_to_dense(p)
    assert np.allclose(d @ d, d, atol=1e-12)
    assert np.allclose(d, d.conj().T, atol=1e-12)


def test_afm_hole_state_l3():
    s = antiferromagnetic_hole_state(3)
    # frozen layout: 8 electrons, central site (index 4) empty, spins alternate
    assert s.to_bitstring() == "100110010010011001"
    assert s.particle_number == 8
    assert s.occupations[8] == 0 and s.occupations[9] == 0
    # every non-central site holds exactly one electron
    for site in range(9):
        up, dn = s.occupations[2 * site], s.occupations[2 * site + 1]
        assert up + dn == (0 if site == 4 else 1)


def test_afm_hole_state_requires_odd_l():
    with pytest.raises(ValueError):
        antiferromagnetic_hole_state(2)


def test_afm_alternation_rule():
    # spin alternates with site parity, flipping orientation past the hole
    for L in (3, 5):
        s = antiferromagnetic_hole_state(L)
        centre = (L * L + 1) // 2  # 1-based
        for i in range(1, L * L + 1):
            site = i - 1
            up, dn = s.occupations[2 * site], s.occupations[2 * site + 1]
            if i == centre:
                assert (up, dn) == (0, 0)
                continue
            expect_up = (i < centre and i % 2 == 1) or (i > centre and i % 2 == 0)
            assert (up, dn) == ((1, 0) if expect_up else (0, 1)), (L, i)
