"""System parameters, band structure and dispersion inversion.

Two tight-binding chains cross at a shared resonator (site 0).  Chain A
carries photons while the atom sits in ``|g>``; chain B carries photons
while the atom sits in ``|f>``.  Energies are measured in units of
``omega_a`` by convention, but ``omega_a`` is stored explicitly so any
value is accepted.

Wave-vector conventions
-----------------------
Inside a band the wave number ``k`` is real and lies in ``[0, pi]``.
Outside a band it is complex with ``Im k < 0`` so that the bound-state
profile ``exp(-i k |m|)`` decays away from the intersection.  Below the
band ``Re k = 0``; above it ``Re k = pi``.
"""

from __future__ import annotations

import cmath
import dataclasses
import enum
import math
from dataclasses import dataclass

# relative slack on cos(k) used to snap round-off at band edges onto k = 0, pi
EDGE_TOL = 1e-12


class Chain(str, enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class SystemParams:
    """Model constants of the crossed-array system.

    Parameters
    ----------
    omega_a, omega_b : float
        Resonator frequencies of chain A and chain B.
    xi_a, xi_b : float
        Nearest-neighbour hopping energies (must be positive).
    j_a, j_b : float
        Atom coupling to the chain-A mode (``g <-> e``) and to the chain-B
        mode (``f <-> e``).
    eps_e, eps_f : float
        Excited and metastable atomic energies; the ground state is at 0.
    """

    omega_a: float
    omega_b: float
    xi_a: float
    xi_b: float
    j_a: float
    j_b: float
    eps_e: float
    eps_f: float

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"{field.name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{field.name} must be finite, got {value!r}")
            object.__setattr__(self, field.name, float(value))
        if self.xi_a <= 0 or self.xi_b <= 0:
            raise ValueError(
                f"hopping energies must be positive (xi_a={self.xi_a}, xi_b={self.xi_b})"
            )
        if self.j_a < 0 or self.j_b < 0:
            raise ValueError(
                f"couplings must be non-negative (j_a={self.j_a}, j_b={self.j_b})"
            )

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def center(self, chain: Chain) -> float:
        if Chain(chain) is Chain.A:
            return self.omega_a
        return self.omega_b + self.eps_f

    def hopping(self, chain: Chain) -> float:
        return self.xi_a if Chain(chain) is Chain.A else self.xi_b


#: Parameter set of the reference transmission spectrum (units of omega_a).
DEFAULT_PARAMS = SystemParams(
    omega_a=1.0,
    omega_b=0.9,
    xi_a=0.15,
    xi_b=0.25,
    j_a=0.15,
    j_b=0.2,
    eps_e=0.95,
    eps_f=0.15,
)


def resonant_working_point(params: SystemParams = DEFAULT_PARAMS) -> SystemParams:
    """Return ``params`` with ``omega_b`` shifted to ``omega_a - eps_f``.

    This enforces two-photon resonance by moving the least constrained
    parameter.  For the reference set it gives ``omega_b = 0.85``.
    """
    return params.replace(omega_b=params.omega_a - params.eps_f)


@dataclass(frozen=True)
class Band:
    center: float
    half_width: float

    @property
    def lower_edge(self) -> float:
        return self.center - self.half_width

    @property
    def upper_edge(self) -> float:
        return self.center + self.half_width

    def _reduced(self, energy: float) -> float:
        return abs(energy - self.center) / self.half_width

    def contains(self, energy: float) -> bool:
        """Closed-interval membership (edges count as in-band)."""
        return self._reduced(energy) <= 1.0 + EDGE_TOL

    def strictly_contains(self, energy: float) -> bool:
        return self._reduced(energy) < 1.0 - EDGE_TOL

    def at_edge(self, energy: float) -> bool:
        return abs(self._reduced(energy) - 1.0) <= EDGE_TOL


@dataclass(frozen=True)
class WaveVector:
    value: complex
    chain: Chain

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0.0

    @property
    def decay_factor(self) -> complex:
        """``exp(-i k)``: ratio of successive bound-state amplitudes."""
        return cmath.exp(-1j * self.value)

    @property
    def outgoing_factor(self) -> complex:
        """Ratio ``u(|m|+1) / u(|m|)`` of the outgoing or decaying solution.

        ``exp(+i k)`` for a propagating wave (moving away from site 0 when
        ``k`` is in ``(0, pi)``), ``exp(-i k)`` for an evanescent one.  Its
        modulus never exceeds one.
        """
        if self.is_real:
            return cmath.exp(1j * self.value.real)
        return self.decay_factor


def band(params: SystemParams, chain: Chain) -> Band:
    return Band(params.center(chain), 2.0 * params.hopping(chain))


def bands(params: SystemParams) -> tuple[Band, Band]:
    """Bands of chain A and chain B, in that order."""
    return band(params, Chain.A), band(params, Chain.B)


def dispersion_energy(params: SystemParams, k: WaveVector) -> float | complex:
    """Energy ``center - 2 xi cos k`` of a plane wave on the given chain."""
    energy = params.center(k.chain) - 2.0 * params.hopping(k.chain) * cmath.cos(k.value)
    if k.is_real or abs(energy.imag) <= 1e-12 * max(1.0, abs(energy.real)):
        return energy.real
    return energy


def reduced_cosine(params: SystemParams, energy: float, chain: Chain) -> float:
    """``cos k = (center - E) / (2 xi)``, snapped to +-1 within round-off of an edge."""
    if not math.isfinite(energy):
        raise ValueError(f"energy must be finite, got {energy!r}")
    cos_k = (params.center(chain) - energy) / (2.0 * params.hopping(chain))
    if abs(abs(cos_k) - 1.0) <= EDGE_TOL:
        cos_k = math.copysign(1.0, cos_k)
    return cos_k


def wavevector_from_energy(params: SystemParams, energy: float, chain: Chain) -> WaveVector:
    """Invert the dispersion relation of ``chain`` at ``energy``.

    In-band energies give the real root in ``[0, pi]``; out-of-band
    energies give the root with negative imaginary part.  Energies within
    round-off of a band edge are mapped onto ``k = 0`` or ``k = pi``
    exactly.
    """
    chain = Chain(chain)
    cos_k = reduced_cosine(params, energy, chain)
    if abs(cos_k) <= 1.0:
        return WaveVector(complex(math.acos(cos_k), 0.0), chain)
    q = math.acosh(abs(cos_k))
    if cos_k > 1.0:  # below the band
        return WaveVector(complex(0.0, -q), chain)
    return WaveVector(complex(math.pi, -q), chain)


def outgoing_factor(params: SystemParams, energy: float, chain: Chain) -> complex:
    """Shorthand for ``wavevector_from_energy(...).outgoing_factor``."""
    return wavevector_from_energy(params, energy, chain).outgoing_factor


def group_velocity(params: SystemParams, energy: float, chain: Chain) -> float:
    """``2 xi sin k`` inside the band, zero outside (evanescent waves carry no flux)."""
    cos_k = reduced_cosine(params, energy, chain)
    if abs(cos_k) > 1.0:
        return 0.0
    return 2.0 * params.hopping(chain) * math.sqrt(1.0 - cos_k * cos_k)
