"""
Dense-matrix reference implementation for small torus sizes.

Only used to check the split-step propagation; memory grows as N^4.
"""
import numpy as np

from echolab.errors import OracleSizeError
from echolab.quantum.floquet import Direction, build_backward_step, build_forward_step

ORACLE_MAX_N = 32


def dft_matrix(N):
    """Unitary DFT, F[n, m] = exp(-2 pi i n m / N) / sqrt(N)."""
    n = np.arange(N)
    return np.exp(-2j * np.pi * np.outer(n, n) / N) / np.sqrt(N)


def dense_propagator(step, max_n=ORACLE_MAX_N):
    """
    One period of `step` as an explicit N^2 x N^2 unitary.

    Rows and columns index the joint grid flattened as m1 * N + m2.
    """
    N = step.N
    if N > max_n:
        raise OracleSizeError(N, max_n)

    joint_dft = np.kron(dft_matrix(N), dft_matrix(N))
    free = step.free_phase_grid.ravel()
    kick = step.kick_phase.ravel()
    free_evolution = joint_dft.conj().T @ (free[:, None] * joint_dft)

    if step.direction is Direction.FORWARD:
        return free_evolution * kick[None, :]
    return kick[:, None] * free_evolution


def dense_boltzmann_echo(params, psi1, phi2, t, max_n=ORACLE_MAX_N):
    """Boltzmann echo from matrix powers and an explicit partial trace."""
    forward = dense_propagator(build_forward_step(params), max_n)
    backward = dense_propagator(build_backward_step(params), max_n)

    vector = np.kron(psi1.amplitudes, phi2.amplitudes)
    vector = np.linalg.matrix_power(backward, t) @ (np.linalg.matrix_power(forward, t) @ vector)

    grid = vector.reshape(params.N, params.N)
    rho1 = grid @ grid.conj().T
    return float(np.real(psi1.amplitudes.conj() @ rho1 @ psi1.amplitudes))
