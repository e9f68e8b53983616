from echolab.echo.engine import (
    EchoCurve,
    EchoRunSpec,
    boltzmann_echo_curve,
    boltzmann_echo_single,
    count_steps,
    default_times,
)
from echolab.echo.loschmidt import loschmidt_echo_curve, loschmidt_echo_single

__all__ = [
    'EchoCurve', 'EchoRunSpec', 'boltzmann_echo_curve', 'boltzmann_echo_single',
    'count_steps', 'default_times', 'loschmidt_echo_curve', 'loschmidt_echo_single',
]
