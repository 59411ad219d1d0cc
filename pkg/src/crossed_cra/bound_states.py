"""Photon bound states of the atom-dressed chain A and Fano-Feshbach resonances.

With the atom in ``|g>`` and no chain-B photon, chain A plus the
``g <-> e`` transition is a two-level atom in a single array.  Its
normalizable eigenstates sit outside the A band at the roots of

    E = eps_e -+ J_a^2 / sqrt((E - omega_a)^2 - 4 xi_a^2)

(minus sign below the band, plus sign above).  A chain-B photon whose
energy coincides with one of these roots is perfectly reflected.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import bisect

from .errors import NoConvergence
from .model import Band, Chain, SystemParams, WaveVector, band

#: Relative distances from the band edge tried as the inner bracket end
#: (the residual diverges at the edge, so a small enough offset always brackets).
EDGE_OFFSETS = (1e-9, 1e-11, 1e-13, 0.0)
MAX_ITER = 200
XTOL = 1e-15


class Branch(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"

    @property
    def sign(self) -> int:
        return -1 if self is Branch.LOWER else 1


@dataclass(frozen=True)
class BoundState:
    """A normalized chain-A bound state.

    The photon profile is ``amplitude * lam**|j|`` with
    ``lam = evanescent_k.decay_factor``; the atom carries ``u_e``.
    """

    energy: float
    branch: Branch
    evanescent_k: WaveVector
    amplitude: float
    u_e: float
    residual: float
    on_b_band_edge: bool = False

    @property
    def atom_weight(self) -> float:
        return self.u_e**2

    @property
    def localization_length(self) -> float:
        """Decay length ``1 / |Im k|`` in lattice sites."""
        return 1.0 / abs(self.evanescent_k.value.imag)

    def u_g(self, j: int) -> float:
        return (self.amplitude * self.evanescent_k.decay_factor ** abs(j)).real

    def photon_weight(self) -> float:
        """``sum_j |u_g(j)|^2`` summed in closed form."""
        q2 = abs(self.evanescent_k.decay_factor) ** 2
        return self.amplitude**2 * (1.0 + q2) / (1.0 - q2)


def bound_state_residual(energy: float, branch: Branch, omega_a: float, xi_a: float, j_a: float, eps: float) -> float:
    """Residual ``E - eps -+ J_a^2 / sqrt((E - omega_a)^2 - 4 xi_a^2)`` of one branch."""
    gap = (energy - omega_a) ** 2 - 4.0 * xi_a**2
    return energy - eps - Branch(branch).sign * j_a**2 / math.sqrt(gap)


@dataclass
class BoundStateSearch:
    """Result of a two-branch search; ``failures`` maps branch to error text."""

    states: list[BoundState] = field(default_factory=list)
    failures: dict = field(default_factory=dict)


def _solve_branch(branch, omega_a, xi_a, j_a, eps, window):
    a_band = Band(omega_a, 2.0 * xi_a)

    def residual(energy):
        return bound_state_residual(energy, branch, omega_a, xi_a, j_a, eps)

    edge, direction = (
        (a_band.lower_edge, -1.0) if branch is Branch.LOWER else (a_band.upper_edge, 1.0)
    )
    far = edge + direction * window
    f_far = residual(far)
    if f_far == 0.0:
        return far
    # the residual tends to +inf (lower) or -inf (upper) at the edge
    if (f_far > 0) == (branch is Branch.LOWER):
        return None
    # weak coupling pushes the root towards the edge; walk the bracket in until it flips
    for offset in EDGE_OFFSETS:
        near = edge + direction * offset * max(1.0, abs(edge))
        if near == edge:
            near = math.nextafter(edge, edge + direction)
        f_near = residual(near)
        if f_near == 0.0:
            return near
        if (f_near > 0) != (f_far > 0):
            break
    else:
        raise NoConvergence(f"{branch.value} branch: root lies within round-off of the band edge")
    try:
        return bisect(residual, min(near, far), max(near, far), xtol=XTOL, maxiter=MAX_ITER)
    except RuntimeError as exc:
        raise NoConvergence(f"{branch.value} branch: {exc}") from exc


def _make_state(energy, branch, omega_a, xi_a, j_a, eps):
    # no edge snapping here: weakly bound roots may sit within round-off of the edge
    q = math.acosh(abs(omega_a - energy) / (2.0 * xi_a))
    if q == 0.0:
        raise NoConvergence(f"{branch.value} branch: root {energy!r} is indistinguishable from the band edge")
    k = WaveVector(complex(0.0 if branch is Branch.LOWER else math.pi, -q), Chain.A)
    q2 = abs(k.decay_factor) ** 2
    photon_sum = (1.0 + q2) / (1.0 - q2)
    atom_ratio = j_a / (energy - eps)  # u_e / u_g(0)
    amplitude = 1.0 / math.sqrt(photon_sum + atom_ratio**2)
    return BoundState(
        energy=energy,
        branch=branch,
        evanescent_k=k,
        amplitude=amplitude,
        u_e=atom_ratio * amplitude,
        residual=bound_state_residual(energy, branch, omega_a, xi_a, j_a, eps),
    )


def search_bound_states(
    omega_a: float, xi_a: float, j_a: float, eps: float, *, window: float | None = None
) -> BoundStateSearch:
    """Search both branches; a failing branch is recorded, the other still returned."""
    result = BoundStateSearch()
    if j_a <= 0.0:
        return result
    if window is None:
        window = abs(eps - omega_a) + j_a + 4.0 * xi_a
    for branch in (Branch.LOWER, Branch.UPPER):
        try:
            root = _solve_branch(branch, omega_a, xi_a, j_a, eps, window)
        except NoConvergence as exc:
            result.failures[branch] = str(exc)
            continue
        if root is None:
            continue
        try:
            result.states.append(_make_state(root, branch, omega_a, xi_a, j_a, eps))
        except NoConvergence as exc:
            result.failures[branch] = str(exc)
    return result


def single_chain_bound_states(
    omega_a: float, xi_a: float, j_a: float, eps: float, *, window: float | None = None
) -> list[BoundState]:
    """Bound states of a two-level atom (excited energy ``eps``) in one array.

    Returns at most one state per branch, lower first.  ``j_a = 0`` gives
    an empty list.  Raises :class:`NoConvergence` only if every branch
    that has a sign change fails to converge.
    """
    if xi_a <= 0:
        raise ValueError(f"xi_a must be positive, got {xi_a}")
    search = search_bound_states(omega_a, xi_a, j_a, eps, window=window)
    if search.failures and not search.states:
        raise NoConvergence("; ".join(search.failures.values()))
    return search.states


def solve_bound_states(params: SystemParams, *, window: float | None = None) -> list[BoundState]:
    """Chain-A bound states of the crossed system (chain B closed)."""
    states = single_chain_bound_states(params.omega_a, params.xi_a, params.j_a, params.eps_e, window=window)
    b_band = band(params, Chain.B)
    return [
        dataclasses.replace(st, on_b_band_edge=b_band.at_edge(st.energy))
        for st in states
    ]


def feshbach_resonances(params: SystemParams, *, window: float | None = None) -> list[float]:
    """Bound-state energies strictly inside the chain-B band.

    A chain-B photon at one of these energies is perfectly reflected.
    """
    b_band = band(params, Chain.B)
    return [
        st.energy
        for st in solve_bound_states(params, window=window)
        if b_band.strictly_contains(st.energy)
    ]
