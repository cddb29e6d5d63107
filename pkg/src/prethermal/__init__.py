"""Two-qubit prethermalization toolkit: correlated-bath Lindblad dynamics,
TPM/EPM energy-exchange statistics and heat-exchange fluctuation theorems."""

from .errors import ConfigError, NumericalError
from .linalg import eig_general, kron, matexp, trace_distance
from .measurement import (
    JointDistribution,
    MeasurementBasis,
    coherent_energy_difference,
    common_basis,
    computational_basis,
    dephase,
    epm_distribution,
    mean_energy_change,
    tpm_distribution,
)
from .model import (
    BathParams,
    GGEResult,
    ModelSpectrum,
    build_liouvillian,
    gge_state,
    gibbs_state,
    hamiltonian,
    inverse_temperature,
    magnetizations,
    propagate,
    spectrum,
)
from .states import (
    CoherenceBlock,
    bell_state,
    mms_with_coherence,
    thermal_coherent_product,
    validate,
)
from .thermo import (
    EntropyPairTable,
    EntropySeries,
    average_entropy,
    classical_xft,
    entropy_rate,
    gamma_correction,
    pairwise_entropy,
    reverse_normalization_defect,
)

__all__ = [
    "BathParams",
    "CoherenceBlock",
    "ConfigError",
    "EntropyPairTable",
    "EntropySeries",
    "GGEResult",
    "JointDistribution",
    "MeasurementBasis",
    "ModelSpectrum",
    "NumericalError",
    "average_entropy",
    "bell_state",
    "build_liouvillian",
    "classical_xft",
    "coherent_energy_difference",
    "common_basis",
    "computational_basis",
    "dephase",
    "eig_general",
    "entropy_rate",
    "epm_distribution",
    "gamma_correction",
    "gge_state",
    "gibbs_state",
    "hamiltonian",
    "inverse_temperature",
    "kron",
    "magnetizations",
    "matexp",
    "mean_energy_change",
    "mms_with_coherence",
    "pairwise_entropy",
    "propagate",
    "reverse_normalization_defect",
    "spectrum",
    "thermal_coherent_product",
    "tpm_distribution",
    "trace_distance",
    "validate",
]

__version__ = "0.1.0"
