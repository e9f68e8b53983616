from echolab.preparation.wavepacket import (
    WavepacketSpec,
    make_wavepacket,
    position_expectation,
    position_variance,
    realization_wavepacket,
)
from echolab.preparation.ensembles import Rho2Kind, Rho2Spec, sample_rho2

__all__ = [
    'Rho2Kind', 'Rho2Spec', 'WavepacketSpec', 'make_wavepacket',
    'position_expectation', 'position_variance', 'realization_wavepacket',
    'sample_rho2',
]
