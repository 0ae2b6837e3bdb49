"""Radiation-pressure entanglement of a mirror's vibrational and rotational modes."""

from ._core import (
    BistabilityBranch,
    DerivedParams,
    DetuningMode,
    ImbalanceMechanism,
    LinearModel,
    Peak,
    PhysicalParams,
    RovibError,
    SpectrumPoint,
    SteadyState,
    TuneResult,
    apply_imbalance,
    apply_tuning,
    build_linear_model,
    coupling_ratio,
    derive_params,
    entanglement_curve,
    entanglement_measure,
    find_peak,
    selfcheck,
    spectrum_grid,
    steady_state_feedback,
    steady_state_fixed_detuning,
    transfer,
    tune_couplings,
    working_point,
)

__version__ = "0.1.0"


def model(params=None):
    """Derived parameters and linearized model at the working point of `params`."""
    p = params if params is not None else PhysicalParams.defaults()
    d = derive_params(p)
    return d, build_linear_model(d, working_point(p, d))
