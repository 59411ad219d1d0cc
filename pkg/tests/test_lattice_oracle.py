import math

import numpy as np
import pytest

from crossed_cra.bound_states import solve_bound_states
from crossed_cra.errors import BoundaryContamination, InvalidSize, PacketLeavesBand, SingularSystem
from crossed_cra.lattice_oracle import build, diagonalize, stationary_scatter, wavepacket_transport
from crossed_cra.scattering import full_solution, packet_averaged_rates


def test_layout(params):
    lat = build(params, 5)
    assert lat.dimension == 23
    assert lat.index_a(-5) == 0 and lat.index_b(5) == 21 and lat.index_e == 22
    ham = lat.hamiltonian.toarray()
    assert np.allclose(ham, ham.T)
    assert ham[lat.index_e, lat.index_a(0)] == params.j_a
    assert ham[lat.index_e, lat.index_b(0)] == params.j_b
    assert ham[lat.index_b(0), lat.index_b(0)] == pytest.approx(params.omega_b + params.eps_f)


def test_single_chain_layout(params):
    lat = build(params, 5, chains="A")
    assert lat.dimension == 12
    with pytest.raises(IndexError):
        lat.index_b(0)


def test_build_rejects_small_lattice(params):
    with pytest.raises(InvalidSize):
        build(params, 4)


@pytest.mark.parametrize("energy", [0.6, 0.69, 0.8, 1.0, 1.29999, 1.306, 1.4])
def test_stationary_matches_closed_form(params, energy):
    oracle = stationary_scatter(params, energy)
    closed = full_solution(params, energy)
    for name in ("s", "r", "a_amp", "u_e"):
        assert abs(getattr(oracle, name) - getattr(closed, name)) < 1e-10
    assert oracle.total_rate == pytest.approx(1.0, abs=1e-10)


def test_oracle_is_independent_of_size(params):
    small = stationary_scatter(params, 1.1, 10)
    large = stationary_scatter(params, 1.1, 300)
    assert abs(small.s - large.s) < 1e-12


def test_free_chain(params):
    free = params.replace(j_a=0.0, j_b=0.0)
    sol = stationary_scatter(free, 1.0)
    assert sol.s == pytest.approx(1.0) and abs(sol.r) < 1e-12
    assert sol.a_amp == 0 and sol.u_e == 0


def test_feshbach_root_reflects(params):
    root = solve_bound_states(params)[0].energy
    assert abs(stationary_scatter(params, root).s) < 1e-6


@pytest.mark.parametrize("energy", [0.55, 0.7, 1.3, 1.6])
def test_singular_energies_rejected(params, energy):
    with pytest.raises(SingularSystem):
        stationary_scatter(params, energy)


def test_diagonalize_finds_bound_states(params):
    eig = diagonalize(params, 400, chains="A")
    isolated = eig.energies[eig.isolated()]
    roots = [s.energy for s in solve_bound_states(params)]
    assert len(isolated) == 2
    assert np.max(np.abs(np.sort(isolated) - roots)) < 1e-6
    assert np.all(eig.ipr[eig.isolated()] > 0.05)


def test_ipr_scaling(params):
    medians = []
    for n in (100, 200, 400):
        eig = diagonalize(params, n, chains="A")
        band_idx = np.setdiff1d(np.arange(eig.energies.size), eig.isolated())
        medians.append(np.median(eig.ipr[band_idx]))
        assert np.min(eig.ipr[eig.isolated()]) > 0.05
    # band states spread over the lattice, so IPR falls roughly like 1/N
    assert medians[0] / medians[2] == pytest.approx(4.0, rel=0.1)


def test_free_spectrum_inside_bands(params):
    free = params.replace(j_a=0.0, j_b=0.0)
    eig = diagonalize(free, 50)
    assert eig.isolated().size == 0
    assert np.any(np.isclose(eig.energies, free.eps_e, atol=1e-14))


def test_diagonalize_requires_size(params):
    with pytest.raises(InvalidSize):
        diagonalize(params, 49)


def test_wavepacket_matches_averaged_rates(params):
    sigma = 0.05 * math.pi
    res = wavepacket_transport(params, 1.0, sigma)
    expected = packet_averaged_rates(params, 1.0, sigma)
    got = (res.transmitted, res.reflected, res.leaked)
    assert np.max(np.abs(np.array(got) - expected)) < 1e-2
    assert res.norm_drift < 1e-10
    assert abs(res.total - 1.0) < 1e-8


def test_wavepacket_free_chain(params):
    res = wavepacket_transport(params.replace(j_a=0.0, j_b=0.0), 1.0, 0.05 * math.pi)
    assert res.transmitted > 1 - 1e-6


@pytest.mark.slow
def test_wavepacket_at_feshbach_root(params):
    root = solve_bound_states(params)[0].energy
    res = wavepacket_transport(params, root, 0.001 * math.pi)
    assert res.transmitted < 0.05


def test_wavepacket_rejects_wide_packet(params):
    with pytest.raises(PacketLeavesBand):
        wavepacket_transport(params, 0.56, 0.05 * math.pi)
    with pytest.raises(PacketLeavesBand):
        wavepacket_transport(params, 1.6, 0.05 * math.pi)


def test_wavepacket_boundary_check(params):
    with pytest.raises(BoundaryContamination):
        wavepacket_transport(params, 1.0, 0.05 * math.pi, n_half=200, t_final=800.0)
