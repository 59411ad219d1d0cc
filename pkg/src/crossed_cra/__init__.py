"""Single-photon transport through two crossed coupled-resonator arrays.

A Lambda-type atom sits at the intersection of chain A (carrying the
``g <-> e`` transition) and chain B (carrying ``f <-> e``).  The package
provides closed-form scattering amplitudes, chain-A photon bound states,
dark/bright dressed states of the intersection, and a finite-lattice
oracle that checks all of them numerically.
"""

__version__ = "0.1.0"

from .bound_states import (
    BoundState,
    Branch,
    single_chain_bound_states,
    bound_state_residual,
    feshbach_resonances,
    solve_bound_states,
)
from .dark_state import (
    DressedTriple,
    Overlaps,
    basis_transform_check,
    detunings,
    dressed_triple,
    interaction_hamiltonian,
    overlaps,
)
from .errors import (
    BoundaryContamination,
    ConfigError,
    CrossedCRAError,
    EmptyGrid,
    InvalidSize,
    NoConvergence,
    NotResonant,
    OutOfBand,
    PacketLeavesBand,
    PoleAtBareAtom,
    SingularSystem,
    TailNotConverged,
    ToleranceExceeded,
)
from .lattice_oracle import build, diagonalize, stationary_scatter, wavepacket_transport
from .model import (
    DEFAULT_PARAMS,
    Band,
    Chain,
    SystemParams,
    WaveVector,
    band,
    dispersion_energy,
    group_velocity,
    resonant_working_point,
    wavevector_from_energy,
)
from .scattering import (
    ScatteringSolution,
    full_solution,
    packet_averaged_rates,
    spectrum,
    transmission_amplitude,
)

__all__ = [
    "__version__",
    "BoundState",
    "Branch",
    "single_chain_bound_states",
    "bound_state_residual",
    "feshbach_resonances",
    "solve_bound_states",
    "DressedTriple",
    "Overlaps",
    "basis_transform_check",
    "detunings",
    "dressed_triple",
    "interaction_hamiltonian",
    "overlaps",
    "BoundaryContamination",
    "ConfigError",
    "CrossedCRAError",
    "EmptyGrid",
    "InvalidSize",
    "NoConvergence",
    "NotResonant",
    "OutOfBand",
    "PacketLeavesBand",
    "PoleAtBareAtom",
    "SingularSystem",
    "TailNotConverged",
    "ToleranceExceeded",
    "build",
    "diagonalize",
    "stationary_scatter",
    "wavepacket_transport",
    "DEFAULT_PARAMS",
    "Band",
    "Chain",
    "SystemParams",
    "WaveVector",
    "band",
    "dispersion_energy",
    "group_velocity",
    "resonant_working_point",
    "wavevector_from_energy",
    "ScatteringSolution",
    "full_solution",
    "packet_averaged_rates",
    "spectrum",
    "transmission_amplitude",
]
