"""Dark and bright dressed states of the intersection resonator.

Within the single-excitation sector the intersection carries three states,
ordered here as ``(|phi,e>, |0,g>, |0,f>)``.  In the interaction picture
their Hamiltonian is

    [[-Delta_1,      J_a,            J_b          ],
     [ J_a,          0,              0            ],
     [ J_b,          0,   -(Delta_1 - Delta_2)    ]]

with ``Delta_1 = eps_e - omega_a`` and ``Delta_2 = eps_e - eps_f - omega_b``.
At two-photon resonance (``Delta_1 = Delta_2 = Delta``) it has a zero-energy
dark state with no excited-state component and two bright states:

    |D>  = (J_a |0,f> - J_b |0,g>) / J
    |B+> = ((J' - Delta) |e> + 2 (J_a |0,g> + J_b |0,f>)) / chi,   E = (J' - Delta) / 2
    |B-> = ((J' + Delta) |e> - 2 (J_a |0,g> + J_b |0,f>)) / eta,   E = -(J' + Delta) / 2

where ``J = sqrt(J_a^2 + J_b^2)``, ``J' = sqrt(4 J^2 + Delta^2)``,
``chi = sqrt((J' - Delta)^2 + 4 J^2)`` and ``eta = sqrt((J' + Delta)^2 + 4 J^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotResonant
from .lattice_oracle import build
from .model import SystemParams
from .scattering import ScatteringSolution

RESONANCE_TOL = 1e-9
#: basis labels of the intersection subspace, in matrix order
BASIS = ("phi,e", "0,g", "0,f")


@dataclass(frozen=True)
class Detunings:
    delta_1: float
    delta_2: float

    @property
    def two_photon_resonant(self) -> bool:
        return abs(self.delta_1 - self.delta_2) < RESONANCE_TOL


def detunings(params: SystemParams) -> Detunings:
    return Detunings(
        delta_1=params.eps_e - params.omega_a,
        delta_2=params.eps_e - params.eps_f - params.omega_b,
    )


def _require_resonant(params):
    det = detunings(params)
    if not det.two_photon_resonant:
        suggested = params.omega_a - params.eps_f
        raise NotResonant(
            f"two-photon resonance requires omega_a = omega_b + eps_f "
            f"(Delta_1={det.delta_1:.6g}, Delta_2={det.delta_2:.6g}); "
            f"try omega_b = {suggested:.6g}",
            suggested_omega_b=suggested,
        )
    return det.delta_1


def interaction_hamiltonian(params: SystemParams) -> np.ndarray:
    """3x3 interaction-picture Hamiltonian on ``(|phi,e>, |0,g>, |0,f>)``."""
    det = detunings(params)
    ja, jb = params.j_a, params.j_b
    return np.array(
        [
            [-det.delta_1, ja, jb],
            [ja, 0.0, 0.0],
            [jb, 0.0, -(det.delta_1 - det.delta_2)],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class DressedTriple:
    """Closed-form eigensystem of the resonant intersection Hamiltonian.

    ``e_plus`` / ``e_minus`` are the eigenvalues of ``b_plus`` / ``b_minus``.
    """

    delta: float
    e_plus: float
    e_minus: float
    e_zero: float
    b_plus: np.ndarray
    b_minus: np.ndarray
    dark: np.ndarray
    j_norm: float
    j_prime: float
    chi: float
    eta: float

    def unitary(self) -> np.ndarray:
        """Columns ``(|B+>, |B->, |D>)`` in the intersection basis."""
        return np.column_stack([self.b_plus, self.b_minus, self.dark])

    def eigenvalues(self) -> np.ndarray:
        return np.array([self.e_plus, self.e_minus, self.e_zero])


def dressed_triple(params: SystemParams, *, self_check: bool = True) -> DressedTriple:
    """Dark/bright eigensystem at two-photon resonance.

    With ``self_check`` the closed forms are compared against a direct
    diagonalization and a ``RuntimeError`` is raised on disagreement.
    """
    delta = _require_resonant(params)
    ja, jb = params.j_a, params.j_b
    j = math.hypot(ja, jb)
    if j == 0.0:
        raise ValueError("dressed states are undefined when j_a = j_b = 0")
    jp = math.sqrt(4.0 * j * j + delta * delta)
    chi = math.sqrt((jp - delta) ** 2 + 4.0 * j * j)
    eta = math.sqrt((jp + delta) ** 2 + 4.0 * j * j)
    triple = DressedTriple(
        delta=delta,
        e_plus=(jp - delta) / 2.0,
        e_minus=-(jp + delta) / 2.0,
        e_zero=0.0,
        b_plus=np.array([jp - delta, 2.0 * ja, 2.0 * jb], dtype=complex) / chi,
        b_minus=np.array([jp + delta, -2.0 * ja, -2.0 * jb], dtype=complex) / eta,
        dark=np.array([0.0, -jb, ja], dtype=complex) / j,
        j_norm=j,
        j_prime=jp,
        chi=chi,
        eta=eta,
    )
    if self_check:
        ham = interaction_hamiltonian(params)
        scale = max(1.0, np.abs(ham).max())
        numeric = np.linalg.eigvalsh(ham)
        if np.max(np.abs(np.sort(triple.eigenvalues()) - numeric)) > 1e-12 * scale:
            raise RuntimeError("closed-form dressed eigenvalues disagree with diagonalization")
        vecs = triple.unitary()
        if np.max(np.abs(ham @ vecs - vecs * triple.eigenvalues())) > 1e-12 * scale:
            raise RuntimeError("closed-form dressed eigenvectors fail the eigen-equation")
    return triple


@dataclass(frozen=True)
class Overlaps:
    """Squared overlaps of a scattering state with ``|D>``, ``|B+>``, ``|B->``."""

    dark: float
    bright_plus: float
    bright_minus: float


def overlaps(params: SystemParams, sol: ScatteringSolution, *, normalize: bool = False) -> Overlaps:
    """Overlaps of the scattering state's intersection components.

    Uses unit incident amplitude, so values are not bounded by one.  With
    ``normalize`` they are divided by the intersection population
    ``|u_e|^2 + |u_g(0)|^2 + |u_f(0)|^2``, giving fractions that sum to one.
    """
    triple = dressed_triple(params, self_check=False)
    local = np.array([sol.u_e, sol.a_amp, sol.s], dtype=complex)
    # <E|X> = sum_i conj(local_i) X_i
    dark, bp, bm = (abs(np.vdot(local, vec)) ** 2 for vec in (triple.dark, triple.b_plus, triple.b_minus))
    if normalize:
        population = float(np.vdot(local, local).real)
        if population == 0.0:
            raise ZeroDivisionError("scattering state has no weight on the intersection")
        dark, bp, bm = dark / population, bp / population, bm / population
    return Overlaps(float(dark), float(bp), float(bm))


@dataclass(frozen=True)
class BasisTransformReport:
    """Result of rewriting the lattice Hamiltonian in the dressed basis.

    ``couplings`` maps ``(state, site)`` to the matrix element between a
    dressed state (``"B+"``, ``"B-"``, ``"D"``) and a neighbouring site label
    such as ``"A+1"`` or ``"B-1"``; ``"B+|B-"`` holds their mutual coupling.
    ``far_coupling`` is the largest element between a dressed state and
    any site beyond the nearest neighbours (zero by structure).
    """

    spectrum_deviation: float
    diagonal: dict
    couplings: dict
    far_coupling: float
    n_half: int


def basis_transform_check(params: SystemParams, n_half: int = 50) -> BasisTransformReport:
    """Conjugate the full lattice Hamiltonian by the dressed-state unitary."""
    if n_half < 10:
        raise ValueError(f"n_half must be >= 10, got {n_half}")
    triple = dressed_triple(params)
    lattice = build(params, n_half)
    ham = lattice.hamiltonian.toarray().astype(complex)
    local = [lattice.index_e, lattice.index_a(0), lattice.index_b(0)]
    unitary = np.eye(lattice.dimension, dtype=complex)
    unitary[np.ix_(local, local)] = triple.unitary()
    rotated = unitary.conj().T @ ham @ unitary

    deviation = float(np.max(np.abs(np.linalg.eigvalsh(ham) - np.linalg.eigvalsh(rotated))))
    names = ("B+", "B-", "D")
    diagonal = {name: rotated[idx, idx].real for name, idx in zip(names, local)}
    neighbours = {
        "A-1": lattice.index_a(-1),
        "A+1": lattice.index_a(1),
        "B-1": lattice.index_b(-1),
        "B+1": lattice.index_b(1),
    }
    couplings = {
        (name, site): rotated[site_idx, idx]
        for name, idx in zip(names, local)
        for site, site_idx in neighbours.items()
    }
    couplings["B+|B-"] = rotated[local[0], local[1]]
    mask = np.ones(lattice.dimension, dtype=bool)
    mask[local] = False
    mask[list(neighbours.values())] = False
    far = float(np.max(np.abs(rotated[np.ix_(local, np.flatnonzero(mask))])))
    return BasisTransformReport(deviation, diagonal, couplings, far, n_half)
