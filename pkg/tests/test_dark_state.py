import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossed_cra.dark_state import (
    basis_transform_check,
    detunings,
    dressed_triple,
    interaction_hamiltonian,
    overlaps,
)
from crossed_cra.errors import NotResonant
from crossed_cra.model import SystemParams
from crossed_cra.scattering import full_solution, spectrum


def test_default_params_not_resonant(params):
    det = detunings(params)
    assert det.delta_1 == pytest.approx(-0.05)
    assert det.delta_2 == pytest.approx(-0.10)
    with pytest.raises(NotResonant) as info:
        dressed_triple(params)
    assert info.value.suggested_omega_b == pytest.approx(0.85)


def test_working_point_triple(resonant):
    triple = dressed_triple(resonant)
    assert triple.e_plus == pytest.approx(0.276247, abs=1e-6)
    assert triple.e_minus == pytest.approx(-0.226247, abs=1e-6)
    ham = interaction_hamiltonian(resonant)
    assert np.linalg.norm(ham @ triple.dark) < 1e-12
    assert triple.dark[0] == 0


def test_basis_transform(resonant):
    report = basis_transform_check(resonant)
    assert report.spectrum_deviation < 1e-12
    assert report.diagonal["D"] == pytest.approx(resonant.omega_a, abs=1e-12)
    j = np.hypot(resonant.j_a, resonant.j_b)
    # |D> talks to chain A through J_b and to chain B through J_a
    assert report.couplings[("D", "A+1")] == pytest.approx(resonant.j_b * resonant.xi_a / j, abs=1e-12)
    assert report.couplings[("D", "B-1")] == pytest.approx(-resonant.j_a * resonant.xi_b / j, abs=1e-12)
    assert report.far_coupling == 0.0
    with pytest.raises(ValueError):
        basis_transform_check(resonant, n_half=5)


def test_dark_overlap_equals_t_without_chain_b_coupling(resonant):
    p = resonant.replace(j_b=0.0)
    for sol in spectrum(p, np.linspace(0.51, 1.49, 50)):
        assert overlaps(p, sol).dark == pytest.approx(sol.t_rate, abs=1e-12)


def test_normalized_overlaps_sum_to_one(resonant):
    sol = full_solution(resonant, 1.0)
    frac = overlaps(resonant, sol, normalize=True)
    assert frac.dark + frac.bright_plus + frac.bright_minus == pytest.approx(1.0, abs=1e-12)


def test_zero_coupling_rejected(resonant):
    with pytest.raises(ValueError):
        dressed_triple(resonant.replace(j_a=0.0, j_b=0.0))


@st.composite
def resonant_params(draw):
    omega_a = draw(st.floats(min_value=0.5, max_value=2.0))
    eps_f = draw(st.floats(min_value=0.0, max_value=0.4))
    return SystemParams(
        omega_a=omega_a,
        omega_b=omega_a - eps_f,
        xi_a=draw(st.floats(min_value=0.05, max_value=0.5)),
        xi_b=draw(st.floats(min_value=0.05, max_value=0.5)),
        j_a=draw(st.floats(min_value=0.01, max_value=1.0)),
        j_b=draw(st.floats(min_value=0.01, max_value=1.0)),
        eps_e=draw(st.floats(min_value=0.0, max_value=3.0)),
        eps_f=eps_f,
    )


@settings(max_examples=100, deadline=None)
@given(p=resonant_params())
def test_closed_forms_match_diagonalization(p):
    triple = dressed_triple(p, self_check=False)
    ham = interaction_hamiltonian(p)
    assert np.max(np.abs(np.sort(triple.eigenvalues()) - np.linalg.eigvalsh(ham))) < 1e-12
    u = triple.unitary()
    assert np.max(np.abs(ham @ u - u * triple.eigenvalues())) < 1e-12
    assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-12
