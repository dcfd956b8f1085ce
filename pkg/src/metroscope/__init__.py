"""metroscope: Fisher information of random bosonic states.

Numerical library and experiment CLI for quantum/classical Fisher information
of random quantum states on full and symmetric (bosonic) Hilbert spaces,
particle-loss channels, Mach-Zehnder photon counting, and random optical
circuits.
"""

__version__ = "0.1.0"

from ._kernels import USING_NUMBA
from .circuits import (
    Circuit,
    ConvergenceResult,
    GATE_SET,
    Gate,
    apply_circuit,
    circuit_convergence,
    gate_matrix,
    sample_circuit,
    start_state,
)
from .dicke import (
    CapacityError,
    DickeBasis,
    FullState,
    SymmetricState,
    SymmetryLeakageError,
    dicke_basis,
    dicke_embed,
    dicke_project,
    sym_dim,
    sym_power_lift,
)
from .fisher import (
    C_MINUS,
    C_PLUS,
    NonRemovableSingularityError,
    Povm,
    Spectrum,
    analytic_avg_qfi,
    asymmetry_bounds,
    classical_fi,
    fi_avg_bounds,
    fidelity_bures,
    lambda_of_spectrum,
    loss_avg_bounds,
    lu_optimize_qfi,
    lu_upper_bound,
    qfi,
)
from .hamiltonians import (
    CollectiveHamiltonian,
    LocalHamiltonian,
    angular_momentum,
    beam_splitter,
    collective_full,
    collective_sym,
    expm_hermitian,
)
from .interferometer import mz_fi, mz_fi_scan, mz_povm, mz_probabilities
from .loss import (
    LossBlocks,
    bs_loss,
    partial_trace_bruteforce,
    partial_trace_dicke,
    verify_bs_trace_equivalence,
)
from .sampling import (
    ConcentrationReport,
    EnsembleSpec,
    McResult,
    concentration_report,
    haar_unitary,
    mc_estimate,
    sample_state,
)

__all__ = [
    "USING_NUMBA",
    "__version__",
    # dicke
    "CapacityError", "DickeBasis", "FullState", "SymmetricState",
    "SymmetryLeakageError", "dicke_basis", "dicke_embed", "dicke_project",
    "sym_dim", "sym_power_lift",
    # hamiltonians
    "CollectiveHamiltonian", "LocalHamiltonian", "angular_momentum",
    "beam_splitter", "collective_full", "collective_sym", "expm_hermitian",
    # fisher
    "C_MINUS", "C_PLUS", "NonRemovableSingularityError", "Povm", "Spectrum",
    "analytic_avg_qfi", "asymmetry_bounds", "classical_fi", "fi_avg_bounds",
    "fidelity_bures", "lambda_of_spectrum", "loss_avg_bounds",
    "lu_optimize_qfi", "lu_upper_bound", "qfi",
    # loss
    "LossBlocks", "bs_loss", "partial_trace_bruteforce", "partial_trace_dicke",
    "verify_bs_trace_equivalence",
    # interferometer
    "mz_fi", "mz_fi_scan", "mz_povm", "mz_probabilities",
    # circuits
    "Circuit", "ConvergenceResult", "GATE_SET", "Gate", "apply_circuit",
    "circuit_convergence", "gate_matrix", "sample_circuit", "start_state",
    # sampling
    "ConcentrationReport", "EnsembleSpec", "McResult", "concentration_report",
    "haar_unitary", "mc_estimate", "sample_state",
]
