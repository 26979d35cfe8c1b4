"""Polarization and entanglement dynamics of driven dipolar spin-1/2 chains."""
from .analytic import AnalyticParams, analytic_polarization, calibrate_convention
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DimensionMismatch,
    DomainError,
    DuplicateSite,
    NotHermitian,
    NotPSD,
    SiteOutOfRange,
    SpinpolError,
)
from .linalg import evolve_unitary, hermitian_eigen, kron, partial_trace, psd_sqrt
from .measures import (
    concurrence,
    concurrence_from_polarization,
    entanglement_entropy,
    entropy_from_concurrence,
    entropy_from_polarization,
    noninteracting_entropy,
    polarization,
    total_polarization,
)
from .propagator import EvolutionResult, TimeGrid, evolve
from .scenarios import ScenarioConfig, load_scenario, run_scenario
from .spins import ChainSpec, build_hamiltonian, build_secular_dipolar, build_zz, couplings, site_operator
from .states import product_state, pseudopure, rho_minus, rho_plus

__version__ = "0.1.0"
