"""Exceptional points of a linearized optomechanical system whose mechanics
damps into a structured (Lorentzian-cutoff) bath, treated exactly through an
auxiliary-mode embedding.

The package locates the memory-renormalized exceptional point of the
three-mode drift matrix, quantifies mode nonorthogonality through Petermann
factors, computes the cavity reflection spectrum, and cross-validates the
embedding by direct integration of the memory convolution.
"""

__version__ = "0.1.0"

from .charpoly import (
    CubicPoly,
    FactorTriple,
    char_cubic,
    cubic_roots,
    factors,
    schur_effective_block,
    self_energy,
    third_root_viete,
)
from .config import DEFAULT_VALUES_HZ, load_config
from .embedcheck import (
    Trajectory,
    compare_embeddings,
    convergence_order,
    integrate_nonmarkovian,
    integrate_pseudomode,
    kernel_fourier_error,
)
from .epsolver import (
    KIND_EXACT,
    KIND_MARKOVIAN,
    KIND_PERTURBATIVE,
    EpSolution,
    MechRenorm,
    OrderCertificate,
    certify_order_two,
    ep_candidates,
    markovian_ep,
    mech_renorm,
    perturbative_ep,
    solve_exact_ep,
)
from .errors import (
    ConfigError,
    DegenerateDenominator,
    NoConvergence,
    NoMarkovianEp,
    NonPhysicalEp,
    OrderCheckFailed,
    PolePseudomode,
    SingularDenominator,
    StepTooLarge,
    ToolkitError,
)
from .model import (
    TWO_PI,
    DriftMatrix,
    DriveParams,
    SystemParams,
    drift_markovian,
    drift_nonmarkovian,
    hz_to_rad,
    memory_kernel_smooth,
    rad_to_hz,
    spectral_density,
)
from .response import (
    Cooperativity,
    DipMetrics,
    SpectrumPoint,
    Susceptibilities,
    cooperativity,
    dip_metrics,
    reflection,
    spectrum,
    susceptibilities,
)
from .spectral import (
    EigenMode,
    SweepRow,
    eigensystem,
    petermann,
    petermann_at,
    sweep_eigs,
    sweep_petermann,
)

__all__ = [
    "__version__",
    "ConfigError",
    "Cooperativity",
    "CubicPoly",
    "DEFAULT_VALUES_HZ",
    "DegenerateDenominator",
    "DipMetrics",
    "DriftMatrix",
    "DriveParams",
    "EigenMode",
    "EpSolution",
    "FactorTriple",
    "KIND_EXACT",
    "KIND_MARKOVIAN",
    "KIND_PERTURBATIVE",
    "MechRenorm",
    "NoConvergence",
    "NoMarkovianEp",
    "NonPhysicalEp",
    "OrderCertificate",
    "OrderCheckFailed",
    "PolePseudomode",
    "SingularDenominator",
    "SpectrumPoint",
    "StepTooLarge",
    "Susceptibilities",
    "SweepRow",
    "SystemParams",
    "TWO_PI",
    "ToolkitError",
    "Trajectory",
    "certify_order_two",
    "char_cubic",
    "compare_embeddings",
    "convergence_order",
    "cooperativity",
    "cubic_roots",
    "dip_metrics",
    "drift_markovian",
    "drift_nonmarkovian",
    "eigensystem",
    "ep_candidates",
    "factors",
    "hz_to_rad",
    "integrate_nonmarkovian",
    "integrate_pseudomode",
    "kernel_fourier_error",
    "load_config",
    "markovian_ep",
    "mech_renorm",
    "memory_kernel_smooth",
    "perturbative_ep",
    "petermann",
    "petermann_at",
    "rad_to_hz",
    "reflection",
    "schur_effective_block",
    "self_energy",
    "solve_exact_ep",
    "spectral_density",
    "spectrum",
    "susceptibilities",
    "sweep_eigs",
    "sweep_petermann",
    "third_root_viete",
]
