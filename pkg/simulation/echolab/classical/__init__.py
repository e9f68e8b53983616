from echolab.classical.standard_map import (
    ClassicalTrajectory,
    LyapunovEstimate,
    iterate_map,
    lyapunov_exponent,
    standard_map_step,
    tangent_map,
)
from echolab.classical.rates import (
    RateEstimate,
    classify_regime,
    correlator,
    gamma_coupling,
    gamma_sigma1,
    predict_decay_rate,
)

__all__ = [
    'ClassicalTrajectory', 'LyapunovEstimate', 'RateEstimate', 'classify_regime',
    'correlator', 'gamma_coupling', 'gamma_sigma1', 'iterate_map', 'lyapunov_exponent',
    'predict_decay_rate', 'standard_map_step', 'tangent_map',
]
