"""Brute-force lattice backend used to validate the closed forms.

Everything here works from the single-excitation Hamiltonian matrix and
the dispersion relation only: stationary solves with exact open-boundary
closure, exact diagonalization, and wave-packet propagation.

Basis layout (``N = n_half``)::

    0 .. 2N          chain-A sites m = -N .. N   (|m, g>)
    2N+1 .. 4N+1     chain-B sites n = -N .. N   (|n, f>)
    4N+2             atom excited                (|phi, e>)

The single-chain model (two-level atom in chain A only) drops the chain-B
block and puts the atom at index ``2N+1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    BoundaryContamination,
    InvalidSize,
    PacketLeavesBand,
    SingularSystem,
    TailNotConverged,
)
from .model import Chain, SystemParams, band, group_velocity, wavevector_from_energy
from .scattering import ScatteringSolution

MIN_N_HALF = 5
MIN_DIAG_N_HALF = 50
TAIL_TOL = 1e-12
MAX_AUTO_N_HALF = 50_000


@dataclass(frozen=True)
class LatticeSystem:
    params: SystemParams
    n_half: int
    hamiltonian: sp.csr_matrix
    has_chain_b: bool = True

    @property
    def sites(self) -> int:
        return 2 * self.n_half + 1

    @property
    def dimension(self) -> int:
        return self.hamiltonian.shape[0]

    def index_a(self, m: int) -> int:
        return m + self.n_half

    def index_b(self, n: int) -> int:
        if not self.has_chain_b:
            raise IndexError("single-chain lattice has no chain B")
        return self.sites + n + self.n_half

    @property
    def index_e(self) -> int:
        return self.dimension - 1

    def chain_slice(self, chain: Chain) -> slice:
        if Chain(chain) is Chain.A:
            return slice(0, self.sites)
        if not self.has_chain_b:
            raise IndexError("single-chain lattice has no chain B")
        return slice(self.sites, 2 * self.sites)


def _chain_block(n_sites, onsite, hopping):
    off = np.full(n_sites - 1, -hopping)
    return sp.diags([off, np.full(n_sites, onsite), off], [-1, 0, 1], format="csr")


def build(params: SystemParams, n_half: int, *, chains: str = "AB") -> LatticeSystem:
    """Truncated single-excitation Hamiltonian.

    ``chains="AB"`` gives the crossed system; ``chains="A"`` the
    single-chain two-level-atom model with excited energy ``eps_e``.
    """
    if not isinstance(n_half, (int, np.integer)) or n_half < MIN_N_HALF:
        raise InvalidSize(f"n_half must be an integer >= {MIN_N_HALF}, got {n_half!r}")
    if chains not in ("AB", "A"):
        raise ValueError(f"chains must be 'AB' or 'A', got {chains!r}")
    n_half = int(n_half)
    n_sites = 2 * n_half + 1
    blocks = [_chain_block(n_sites, params.omega_a, params.xi_a)]
    if chains == "AB":
        blocks.append(_chain_block(n_sites, params.omega_b + params.eps_f, params.xi_b))
    blocks.append(sp.csr_matrix([[params.eps_e]]))
    ham = sp.block_diag(blocks, format="lil")
    atom = ham.shape[0] - 1
    ham[atom, n_half] = ham[n_half, atom] = params.j_a
    if chains == "AB":
        b0 = n_sites + n_half
        ham[atom, b0] = ham[b0, atom] = params.j_b
    return LatticeSystem(params, n_half, ham.tocsr(), has_chain_b=chains == "AB")


def stationary_scatter(
    params: SystemParams, energy: float, n_half: int = 200, *, auto_extend: bool = True
) -> ScatteringSolution:
    """Solve ``(H - E) u = 0`` for a unit wave incident from chain B's left end.

    The missing neighbours beyond each end are eliminated exactly: outgoing
    (or decaying) waves on both chain-A ends and the chain-B right end,
    incident-plus-reflected on the chain-B left end.  If the chain-A tail
    has not decayed below ``TAIL_TOL`` at the boundary the lattice is
    enlarged (``auto_extend``) or :class:`TailNotConverged` is raised.
    """
    a_band, b_band = band(params, Chain.A), band(params, Chain.B)
    if not b_band.strictly_contains(energy):
        raise SingularSystem(f"E={energy!r} is not strictly inside the chain-B band")
    if a_band.at_edge(energy):
        raise SingularSystem(f"E={energy!r} sits on a chain-A band edge")
    k = wavevector_from_energy(params, energy, Chain.A)
    kp = wavevector_from_energy(params, energy, Chain.B)
    lam_a, lam_b = k.outgoing_factor, kp.outgoing_factor

    if not k.is_real:
        needed = math.ceil(math.log(TAIL_TOL) / math.log(abs(lam_a)))
        if needed > n_half:
            if not auto_extend or needed > MAX_AUTO_N_HALF:
                raise TailNotConverged(
                    f"chain-A tail |lam|^N = {abs(lam_a) ** n_half:.3e} at n_half={n_half}; "
                    f"need n_half >= {needed}"
                )
            n_half = needed

    lattice = build(params, n_half)
    N = n_half
    mat = (lattice.hamiltonian - energy * sp.identity(lattice.dimension, format="csr")).tolil()
    mat = mat.astype(complex)
    # u(N+1) = lam u(N) folded into the boundary rows
    for idx in (lattice.index_a(N), lattice.index_a(-N)):
        mat[idx, idx] += -params.xi_a * lam_a
    mat[lattice.index_b(N), lattice.index_b(N)] += -params.xi_b * lam_b
    left = lattice.index_b(-N)
    mat[left, left] += -params.xi_b * lam_b
    # u(-N-1) = I(-N-1) + lam (u(-N) - I(-N)) with I(n) = lam_b**n
    rhs = np.zeros(lattice.dimension, dtype=complex)
    rhs[left] = params.xi_b * (lam_b ** (-N - 1) - lam_b * lam_b ** (-N))

    mat = mat.tocsc()
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            u = spla.spsolve(mat, rhs)
        except (spla.MatrixRankWarning, RuntimeError) as exc:
            raise SingularSystem(f"lattice system singular at E={energy!r}: {exc}") from exc
    if not np.all(np.isfinite(u)):
        raise SingularSystem(f"non-finite solution at E={energy!r}")
    resid = np.linalg.norm(mat @ u - rhs) / np.linalg.norm(rhs)
    if resid > 1e-8:
        raise SingularSystem(f"ill-conditioned lattice solve at E={energy!r} (residual {resid:.2e})")

    s = u[lattice.index_b(N)] / lam_b**N
    r = (u[lattice.index_b(-N)] - lam_b ** (-N)) / lam_b**N
    a_amp = u[lattice.index_a(0)]
    u_e = u[lattice.index_e]
    v_a = group_velocity(params, energy, Chain.A)
    v_b = group_velocity(params, energy, Chain.B)
    return ScatteringSolution(
        energy=float(energy),
        k=k,
        k_prime=kp,
        s=complex(s),
        r=complex(r),
        a_amp=complex(a_amp),
        u_e=complex(u_e),
        t_rate=abs(s) ** 2,
        r_rate=abs(r) ** 2,
        leak_rate=2.0 * abs(a_amp) ** 2 * v_a / v_b,
    )


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of a truncated lattice, ascending in energy.

    ``ipr`` is the inverse participation ratio ``sum |psi|^4`` of each
    eigenvector: ``O(1)`` for localized states, ``O(1/N)`` for band states.
    """

    energies: np.ndarray
    ipr: np.ndarray
    vectors: np.ndarray
    lattice: LatticeSystem

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.energies.tolist(), self.ipr.tolist()))

    def isolated(self, tol: float = 1e-9) -> np.ndarray:
        """Indices of eigenvalues outside every band present in the lattice."""
        present = [band(self.lattice.params, Chain.A)]
        if self.lattice.has_chain_b:
            present.append(band(self.lattice.params, Chain.B))
        outside = np.ones(self.energies.size, dtype=bool)
        for b in present:
            outside &= (self.energies < b.lower_edge - tol) | (self.energies > b.upper_edge + tol)
        return np.flatnonzero(outside)


def diagonalize(params: SystemParams, n_half: int, *, chains: str = "AB") -> EigenSystem:
    """Full Hermitian eigendecomposition of the truncated lattice."""
    if n_half < MIN_DIAG_N_HALF:
        raise InvalidSize(f"n_half must be >= {MIN_DIAG_N_HALF} for diagonalization, got {n_half}")
    lattice = build(params, n_half, chains=chains)
    energies, vectors = np.linalg.eigh(lattice.hamiltonian.toarray())
    ipr = np.sum(np.abs(vectors) ** 4, axis=0)
    return EigenSystem(energies, ipr, vectors, lattice)


@dataclass(frozen=True)
class WavepacketResult:
    transmitted: float
    reflected: float
    leaked: float
    residual: float
    norm_drift: float
    times: np.ndarray
    n_half: int
    t_final: float

    @property
    def total(self) -> float:
        return self.transmitted + self.reflected + self.leaked


def gaussian_packet(lattice: LatticeSystem, k0: float, sigma_k: float, n0: int) -> np.ndarray:
    """Normalized ``exp(-(n-n0)^2 sigma_k^2 + i k0 n)`` on chain B."""
    n = np.arange(-lattice.n_half, lattice.n_half + 1)
    amp = np.exp(-((n - n0) ** 2) * sigma_k**2 + 1j * k0 * n)
    psi = np.zeros(lattice.dimension, dtype=complex)
    psi[lattice.chain_slice(Chain.B)] = amp
    return psi / np.linalg.norm(psi)


def _edge_weight(lattice, psi, width):
    weight = 0.0
    for chain in (Chain.A, Chain.B):
        block = np.abs(psi[lattice.chain_slice(chain)]) ** 2
        weight += block[:width].sum() + block[-width:].sum()
    return weight


def wavepacket_transport(
    params: SystemParams,
    e0: float,
    sigma_k: float,
    n_half: int | None = None,
    t_final: float | None = None,
    *,
    start: int | None = None,
    settle_time: float = 1200.0,
    n_records: int = 16,
    edge_sites: int = 10,
    edge_tol: float = 1e-8,
) -> WavepacketResult:
    """Scatter a Gaussian chain-B packet off the intersection.

    The packet starts centred on chain-B site ``-start`` with carrier wave
    number ``k0(e0)`` and momentum spread ``sigma_k``, and is propagated
    with the exact exponential of the lattice Hamiltonian.  Final
    probabilities are summed over the chain-B right arm, the chain-B left
    arm and all of chain A; ``residual`` is what remains on ``|0,f>`` and
    the atom.

    By default the run lasts until the packet centre reaches the
    intersection plus ``settle_time``, which lets slow components near the
    chain-A band edges drain the intersection; ``n_half`` is then chosen
    so no probability reaches the lattice ends.
    """
    if sigma_k <= 0:
        raise ValueError(f"sigma_k must be positive, got {sigma_k}")
    b_band = band(params, Chain.B)
    if not b_band.strictly_contains(e0):
        raise PacketLeavesBand(f"carrier energy {e0} is outside the chain-B band")
    k0 = wavevector_from_energy(params, e0, Chain.B).value.real
    if k0 - 5.0 * sigma_k <= 0.0 or k0 + 5.0 * sigma_k >= math.pi:
        raise PacketLeavesBand(
            f"packet k0={k0:.4f} +- 5*sigma_k={5 * sigma_k:.4f} leaves (0, pi)"
        )
    spread = 1.0 / (2.0 * sigma_k)  # position-space standard deviation
    margin = 8.0 * spread + 20.0
    v_group = group_velocity(params, e0, Chain.B)
    if start is None:
        start = math.ceil(margin)
        if n_half is not None:
            start = min(start, n_half // 2)
    if t_final is None:
        t_final = start / v_group + settle_time
    if n_half is None:
        # reflected centre ends near -v t_final; dispersion widens both packets
        dispersion = 2.0 * params.xi_b * abs(math.cos(k0)) * 3.0 * sigma_k * t_final
        reach = max(v_group * t_final + dispersion, 2.0 * params.xi_a * t_final)
        n_half = math.ceil(reach + margin)

    lattice = build(params, n_half)
    psi = gaussian_packet(lattice, k0, sigma_k, -start)
    if _edge_weight(lattice, psi, edge_sites) > edge_tol:
        raise BoundaryContamination("initial packet overlaps the lattice ends; increase n_half")

    times = np.linspace(0.0, t_final, n_records)
    gen = (-1j * lattice.hamiltonian).tocsc()
    states = spla.expm_multiply(gen, psi, start=0.0, stop=t_final, num=n_records, endpoint=True)
    norms = np.linalg.norm(states, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    for t, state in zip(times, states):
        weight = _edge_weight(lattice, state, edge_sites)
        if weight > edge_tol:
            raise BoundaryContamination(
                f"probability {weight:.2e} within {edge_sites} sites of a lattice end at t={t:.1f}"
            )

    final = states[-1]
    b_amp = np.abs(final[lattice.chain_slice(Chain.B)]) ** 2
    a_amp = np.abs(final[lattice.chain_slice(Chain.A)]) ** 2
    N = lattice.n_half
    return WavepacketResult(
        transmitted=float(b_amp[N + 1:].sum()),
        reflected=float(b_amp[:N].sum()),
        leaked=float(a_amp.sum()),
        residual=float(b_amp[N] + abs(final[lattice.index_e]) ** 2),
        norm_drift=drift,
        times=times,
        n_half=n_half,
        t_final=float(t_final),
    )
