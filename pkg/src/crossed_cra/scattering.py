"""Closed-form single-photon scattering at the intersection resonator.

A photon enters chain B from the left.  After eliminating the atomic
amplitude the intersection acts as a pair of delta potentials coupling
the two chains.  Every amplitude is written over the common denominator

    D(E) = i kappa (J_a^2 + (E - eps_e) zeta) - J_b^2 zeta

which is finite at the bare atomic energy ``E = eps_e``:

    s   = i kappa (J_a^2 + (E - eps_e) zeta) / D
    A   = -J_a J_b i kappa / D           (chain-A amplitude at site 0)
    u_e = J_b zeta i kappa / D           (excited-state amplitude)
    r   = s - 1

``kappa = 2 xi_b sin k'`` is the chain-B flux factor and ``zeta`` is the
chain-A self-energy kernel of the outgoing (or decaying) wave,

    zeta = xi_a (1/lam - lam),   lam = u_g(|m|+1) / u_g(|m|).

Inside the A band this is ``-i sqrt(f)`` with ``f = 4 xi_a^2 - (E-omega_a)^2``;
below it ``+sqrt(-f)`` and above it ``-sqrt(-f)``.  The Feshbach poles of
the chain-A channel are the zeros of ``J_a^2 + (E - eps_e) zeta``, where
``s`` vanishes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .errors import EmptyGrid, OutOfBand, PoleAtBareAtom
from .model import (
    Chain,
    SystemParams,
    WaveVector,
    band,
    group_velocity,
    reduced_cosine,
    wavevector_from_energy,
)


class OutOfBandWarning(UserWarning):
    """A spectrum grid point outside the chain-B band was skipped."""


@dataclass(frozen=True)
class EffectivePotentials:
    v_a: float
    v_b: float
    v_cross: float


def effective_potentials(params: SystemParams, energy: float) -> EffectivePotentials:
    """Strengths of the delta potentials seen at site 0 (diverge at ``eps_e``)."""
    detuning = energy - params.eps_e
    if detuning == 0.0:
        raise PoleAtBareAtom(f"effective potentials diverge at E = eps_e = {params.eps_e}")
    return EffectivePotentials(
        v_a=params.j_a**2 / detuning,
        v_b=params.j_b**2 / detuning,
        v_cross=params.j_a * params.j_b / detuning,
    )


def kappa(params: SystemParams, energy: float) -> float | complex:
    """Chain-B flux factor ``sqrt(4 xi_b^2 - (E - omega_b - eps_f)^2)``.

    Real and non-negative inside the B band.  Outside it the value is
    imaginary with the sign of the decaying continuation, ``i kappa =
    xi_b (lam - 1/lam)``: ``+i|kappa|`` below the band, ``-i|kappa|`` above.
    """
    cos_k = reduced_cosine(params, energy, Chain.B)
    if abs(cos_k) <= 1.0:
        return 2.0 * params.xi_b * math.sqrt(1.0 - cos_k * cos_k)
    magnitude = 2.0 * params.xi_b * math.sqrt(cos_k * cos_k - 1.0)
    return 1j * magnitude if cos_k > 1.0 else -1j * magnitude


def zeta(params: SystemParams, energy: float) -> complex:
    """Chain-A self-energy kernel of the outgoing/decaying wave.

    Zero at the A-band edges, ``-i sqrt(f)`` inside the band, ``+sqrt(-f)``
    below it and ``-sqrt(-f)`` above it.
    """
    cos_k = reduced_cosine(params, energy, Chain.A)
    if abs(cos_k) <= 1.0:
        return complex(0.0, -2.0 * params.xi_a * math.sqrt(1.0 - cos_k * cos_k))
    magnitude = 2.0 * params.xi_a * math.sqrt(cos_k * cos_k - 1.0)
    return complex(magnitude if cos_k > 1.0 else -magnitude, 0.0)


@dataclass(frozen=True)
class ScatteringSolution:
    """Stationary scattering state for unit incident amplitude in chain B.

    ``a_amp`` is the chain-A amplitude at site 0 (the profile is
    ``a_amp * lam_A**|m|``).  ``leak_rate`` is the probability flux carried
    into both arms of chain A.  ``edge`` marks energies on a band edge of
    either chain, where ``s`` takes its analytic limit.
    """

    energy: float
    k: WaveVector
    k_prime: WaveVector
    s: complex
    r: complex
    a_amp: complex
    u_e: complex
    t_rate: float
    r_rate: float
    leak_rate: float
    edge: bool = False

    @property
    def total_rate(self) -> float:
        return self.t_rate + self.r_rate + self.leak_rate

    def u_g(self, m: int) -> complex:
        """Chain-A amplitude on site ``m`` (reconstructed from the ansatz)."""
        return self.a_amp * self.k.outgoing_factor ** abs(m)

    def u_f(self, n: int) -> complex:
        """Chain-B amplitude on site ``n``: incident + reflected left, transmitted right."""
        lam = self.k_prime.outgoing_factor
        if n < 0:
            return lam**n + self.r * lam ** (-n)
        return self.s * lam**n


def _amplitudes(params, energy, flip_zeta=False):
    """Return ``(s, a_amp, u_e, kappa, zeta)`` over the regularized denominator."""
    kap = kappa(params, energy)
    zt = zeta(params, energy)
    if flip_zeta:
        zt = zt.conjugate()
    ja2, jb2 = params.j_a**2, params.j_b**2
    if params.j_b == 0.0:
        # atom invisible from chain B
        return 1.0 + 0j, 0j, 0j, kap, zt
    channel = ja2 + (energy - params.eps_e) * zt
    ik = 1j * kap
    denom = ik * channel - jb2 * zt
    if denom == 0:
        raise PoleAtBareAtom(
            f"scattering denominator vanishes at E={energy!r} "
            f"(eps_e={params.eps_e}, kappa={kap}, zeta={zt})"
        )
    s = ik * channel / denom
    a_amp = -params.j_a * params.j_b * ik / denom
    u_e = params.j_b * zt * ik / denom
    return s, a_amp, u_e, kap, zt


def _require_in_b_band(params, energy):
    b_band = band(params, Chain.B)
    if not b_band.contains(energy):
        raise OutOfBand(
            f"E={energy!r} lies outside the chain-B band "
            f"[{b_band.lower_edge}, {b_band.upper_edge}]"
        )


def transmission_amplitude(params: SystemParams, energy: float, *, flip_zeta: bool = False) -> complex:
    """Transmission amplitude ``s(E)`` of a chain-B photon.

    ``flip_zeta`` conjugates ``zeta`` (the incoming-wave branch).  It is a
    negative control for oracle comparisons and yields unphysical results.
    """
    _require_in_b_band(params, energy)
    return _amplitudes(params, energy, flip_zeta)[0]


def full_solution(params: SystemParams, energy: float, *, flip_zeta: bool = False) -> ScatteringSolution:
    """All amplitudes and the flux triple ``(T, R, L)`` at ``energy``."""
    _require_in_b_band(params, energy)
    s, a_amp, u_e, kap, _ = _amplitudes(params, energy, flip_zeta)
    r = s - 1.0
    v_b = kap.real if isinstance(kap, complex) else kap
    v_a = group_velocity(params, energy, Chain.A)
    leak = 2.0 * abs(a_amp) ** 2 * v_a / v_b if v_b > 0.0 else 0.0
    a_band, b_band = band(params, Chain.A), band(params, Chain.B)
    return ScatteringSolution(
        energy=float(energy),
        k=wavevector_from_energy(params, energy, Chain.A),
        k_prime=wavevector_from_energy(params, energy, Chain.B),
        s=complex(s),
        r=complex(r),
        a_amp=complex(a_amp),
        u_e=complex(u_e),
        t_rate=abs(s) ** 2,
        r_rate=abs(r) ** 2,
        leak_rate=leak,
        edge=a_band.at_edge(energy) or b_band.at_edge(energy),
    )


def spectrum(
    params: SystemParams, energies: Iterable[float], *, flip_zeta: bool = False
) -> list[ScatteringSolution]:
    """Evaluate :func:`full_solution` on a grid, preserving order.

    Points outside the chain-B band are skipped with an
    :class:`OutOfBandWarning`.
    """
    energies = list(energies)
    if not energies:
        raise EmptyGrid("energy grid is empty")
    b_band = band(params, Chain.B)
    out = []
    for energy in energies:
        energy = float(energy)
        if not b_band.contains(energy):
            warnings.warn(
                f"skipping E={energy!r}: outside chain-B band "
                f"[{b_band.lower_edge}, {b_band.upper_edge}]",
                OutOfBandWarning,
                stacklevel=2,
            )
            continue
        out.append(full_solution(params, energy, flip_zeta=flip_zeta))
    return out


def packet_momentum_density(k: np.ndarray, k0: float, sigma_k: float) -> np.ndarray:
    """Momentum-space probability density of a Gaussian site-basis packet.

    ``psi(n) ~ exp(-(n - n0)^2 sigma_k^2) exp(i k0 n)`` has momentum density
    ``exp(-(k - k0)^2 / (2 sigma_k^2))`` up to exponentially small aliasing.
    """
    return np.exp(-((k - k0) ** 2) / (2.0 * sigma_k**2))


def packet_averaged_rates(
    params: SystemParams, e0: float, sigma_k: float, *, n_nodes: int = 4001, width: float = 8.0
) -> tuple[float, float, float]:
    """Closed-form ``(T, R, L)`` averaged over the packet's momentum density.

    The packet is centred on the chain-B wave number of ``e0``.  Nodes are
    restricted to ``(0, pi)`` where the incident wave moves right.
    """
    k0 = wavevector_from_energy(params, e0, Chain.B).value.real
    lo = max(k0 - width * sigma_k, 0.0)
    hi = min(k0 + width * sigma_k, math.pi)
    ks = np.linspace(lo, hi, n_nodes)[1:-1]
    weights = packet_momentum_density(ks, k0, sigma_k)
    centre = params.center(Chain.B)
    rates = np.empty((ks.size, 3))
    for i, kk in enumerate(ks):
        sol = full_solution(params, centre - 2.0 * params.xi_b * math.cos(kk))
        rates[i] = sol.t_rate, sol.r_rate, sol.leak_rate
    norm = trapezoid(weights, ks)
    t, r, leak = (trapezoid(weights * rates[:, j], ks) / norm for j in range(3))
    return float(t), float(r), float(leak)


def as_rows(solutions: Sequence[ScatteringSolution]) -> list[dict]:
    rows = []
    for sol in solutions:
        rows.append(
            {
                "E": sol.energy,
                "T": sol.t_rate,
                "R": sol.r_rate,
                "L": sol.leak_rate,
                "T+R": sol.t_rate + sol.r_rate,
                "s_re": sol.s.real,
                "s_im": sol.s.imag,
                "r_re": sol.r.real,
                "r_im": sol.r.imag,
                "edge": int(sol.edge),
            }
        )
    return rows
