from echolab.analysis.fitting import (
    DecayFit,
    DecayModel,
    ModelComparison,
    WindowPolicy,
    compare_models,
    fit_exponential,
    fit_gaussian,
    fit_lyapunov_capped,
    rates_agree,
)
from echolab.analysis.saturation import SaturationEstimate, detect_saturation
from echolab.analysis.scaling import CappedRateFit, ScalingFit, fit_capped_rate, scaling_regression

__all__ = [
    'CappedRateFit', 'DecayFit', 'DecayModel', 'ModelComparison', 'SaturationEstimate',
    'ScalingFit', 'WindowPolicy', 'compare_models', 'detect_saturation', 'fit_capped_rate',
    'fit_exponential', 'fit_gaussian', 'fit_lyapunov_capped', 'rates_agree',
    'scaling_regression',
]
