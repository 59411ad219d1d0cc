import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossed_cra.model import (
    DEFAULT_PARAMS,
    Chain,
    SystemParams,
    WaveVector,
    band,
    bands,
    dispersion_energy,
    group_velocity,
    resonant_working_point,
    wavevector_from_energy,
)


def test_default_bands(params):
    a_band, b_band = bands(params)
    assert (a_band.lower_edge, a_band.upper_edge) == pytest.approx((0.7, 1.3))
    assert (b_band.lower_edge, b_band.upper_edge) == pytest.approx((0.55, 1.55))
    assert b_band.upper_edge - b_band.lower_edge == pytest.approx(4 * params.xi_b)


@pytest.mark.parametrize(
    "field, value, exc",
    [
        ("xi_a", 0.0, ValueError),
        ("xi_b", -0.1, ValueError),
        ("j_a", -1e-3, ValueError),
        ("eps_e", math.nan, ValueError),
        ("omega_a", math.inf, ValueError),
        ("j_b", True, TypeError),
        ("omega_b", "0.9", TypeError),
    ],
)
def test_params_rejected(field, value, exc):
    with pytest.raises(exc):
        DEFAULT_PARAMS.replace(**{field: value})


def test_params_are_immutable(params):
    with pytest.raises(AttributeError):
        params.xi_a = 1.0


def test_resonant_working_point(params):
    assert resonant_working_point(params).omega_b == pytest.approx(0.85)


def test_band_membership_is_closed(params):
    b = band(params, Chain.B)
    assert b.contains(0.55) and b.contains(1.55)
    assert not b.strictly_contains(0.55)
    assert b.at_edge(1.55)
    assert not b.contains(1.56)


def test_band_centre_inverts_to_half_pi(params):
    k = wavevector_from_energy(params, 1.0, Chain.A)
    assert k.value == pytest.approx(math.pi / 2)
    assert k.is_real


def test_edges_map_to_zero_and_pi(params):
    assert wavevector_from_energy(params, 0.55, Chain.B).value == 0.0
    assert wavevector_from_energy(params, 1.55, Chain.B).value.real == pytest.approx(math.pi)


def test_evanescent_below_band(params):
    k = wavevector_from_energy(params, 0.6879544230811134, Chain.A)
    assert k.value.imag < 0
    assert abs(k.decay_factor) < 1
    assert abs(k.value.real) < 1e-15


def test_evanescent_above_band(params):
    k = wavevector_from_energy(params, 1.31, Chain.A)
    assert k.value.imag < 0
    assert k.value.real == pytest.approx(math.pi)
    assert abs(k.decay_factor) < 1


def test_group_velocity_zero_out_of_band(params):
    assert group_velocity(params, 0.6, Chain.A) == 0.0
    assert group_velocity(params, 1.0, Chain.A) == pytest.approx(2 * params.xi_a)


energies = st.floats(min_value=0.2, max_value=1.8, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(energy=energies, chain=st.sampled_from([Chain.A, Chain.B]))
def test_dispersion_round_trip(energy, chain):
    k = wavevector_from_energy(DEFAULT_PARAMS, energy, chain)
    assert dispersion_energy(DEFAULT_PARAMS, k) == pytest.approx(energy, abs=1e-12)
    if band(DEFAULT_PARAMS, chain).strictly_contains(energy):
        assert 0.0 < k.value.real < math.pi and k.is_real
    elif not band(DEFAULT_PARAMS, chain).contains(energy):
        assert k.value.imag < 0 and abs(k.decay_factor) < 1


@settings(max_examples=100, deadline=None)
# k is ill-conditioned near 0 and pi (dk ~ dE / sin k), and edge snapping moves it by ~1e-6
@given(k=st.floats(min_value=1e-4, max_value=math.pi - 1e-4))
def test_real_k_round_trip(k):
    energy = dispersion_energy(DEFAULT_PARAMS, WaveVector(complex(k), Chain.B))
    back = wavevector_from_energy(DEFAULT_PARAMS, energy, Chain.B)
    assert back.value.real == pytest.approx(k, abs=1e-6)
    assert abs(back.outgoing_factor - cmath.exp(1j * k)) < 1e-6


@settings(max_examples=50, deadline=None)
@given(
    xi=st.floats(min_value=0.01, max_value=2.0),
    centre=st.floats(min_value=-5, max_value=5),
)
def test_band_width_is_four_xi(xi, centre):
    p = SystemParams(centre, centre, xi, xi, 0.1, 0.1, 0.0, 0.0)
    b = band(p, Chain.A)
    assert b.upper_edge - b.lower_edge == pytest.approx(4 * xi)
