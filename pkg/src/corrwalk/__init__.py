"""Discrete-time quantum walks with Markov-chain-correlated coin disorder.

The walk alternates a two-level coin rotation and a spin-conditioned
shift; the coin angle follows a binary Markov chain with tunable
autocorrelation and kick strength.  Submodules: ``lattice`` (state and
unitary update), ``disorder`` (chain and angle generation), ``observables``
(spreading, entanglement, classical contrast, interference, asymmetry),
``ensemble`` (seeded Monte Carlo runs), ``cli`` (experiment presets).
"""

from .backend import available_backends, kernel_backend
from .disorder import (
    AngleSequence,
    DisorderParams,
    angles_from_chain,
    empirical_autocorrelation,
    ingredient_fractions,
    persistence_from_correlation,
    sample_chain,
)
from .ensemble import EnsembleConfig, EnsembleResult, run_ensemble, run_single, sample_seed
from .lattice import (
    BoundaryLeakError,
    SpinorField,
    apply_coin,
    apply_shift,
    evolve,
    init_state,
    step,
)
from .observables import (
    NumericDomainError,
    ObservableSeries,
    ReducedCoinDensity,
    SeriesRecorder,
    asymmetry_profile,
    classical_step,
    entanglement_entropy,
    fit_alpha,
    interference_profile,
    jsd,
    probability_distribution,
    reconstruct_next_distribution,
    reduced_density,
    second_moment,
    shannon_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "AngleSequence",
    "BoundaryLeakError",
    "DisorderParams",
    "EnsembleConfig",
    "EnsembleResult",
    "NumericDomainError",
    "ObservableSeries",
    "ReducedCoinDensity",
    "SeriesRecorder",
    "SpinorField",
    "angles_from_chain",
    "apply_coin",
    "apply_shift",
    "asymmetry_profile",
    "available_backends",
    "classical_step",
    "empirical_autocorrelation",
    "entanglement_entropy",
    "evolve",
    "fit_alpha",
    "ingredient_fractions",
    "init_state",
    "interference_profile",
    "jsd",
    "kernel_backend",
    "persistence_from_correlation",
    "probability_distribution",
    "reconstruct_next_distribution",
    "reduced_density",
    "run_ensemble",
    "run_single",
    "sample_chain",
    "sample_seed",
    "second_moment",
    "shannon_entropy",
    "step",
    "__version__",
]
