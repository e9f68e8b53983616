from echolab.quantum.params import ModelParams, RegimeScales, regime_scales
from echolab.quantum.states import Basis, JointState, WaveFunction1P
from echolab.quantum.floquet import (
    Direction,
    FloquetStep,
    apply_step,
    build_backward_step,
    build_forward_step,
    build_loschmidt_steps,
    evolve,
)
from echolab.quantum.oracle import dense_boltzmann_echo, dense_propagator

__all__ = [
    'Basis', 'Direction', 'FloquetStep', 'JointState', 'ModelParams',
    'RegimeScales', 'WaveFunction1P', 'apply_step', 'build_backward_step',
    'build_forward_step', 'build_loschmidt_steps', 'dense_boltzmann_echo',
    'dense_propagator', 'evolve', 'regime_scales',
]
