"""
Wavefunctions on the torus and their position/momentum representations.

Position sites x_m = 2*pi*m/N and momenta p_n = 2*pi*n/N are linked by the
unitary discrete Fourier transform, phi(n) = N^-1/2 sum_m exp(-2*pi*i*m*n/N) psi(m).
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import fft as sfft

from echolab.errors import ContractViolationError, ValidationError


class Basis(str, Enum):
    POSITION = 'position'
    MOMENTUM = 'momentum'


def position_grid(N):
    return 2.0 * np.pi * np.arange(N) / N


def momentum_grid(N):
    return 2.0 * np.pi * np.arange(N) / N


@dataclass
class WaveFunction1P:
    """Single-particle state, length-N complex amplitudes."""
    amplitudes: np.ndarray
    basis: Basis = Basis.POSITION

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.ndim != 1:
            raise ValidationError(
                f"Single-particle amplitudes must be 1-D, got shape {self.amplitudes.shape}"
            )
        self.basis = Basis(self.basis)

    @property
    def N(self):
        return self.amplitudes.shape[0]

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self):
        norm = self.norm()
        if norm == 0.0:
            raise ValidationError("Cannot normalize the zero vector")
        return WaveFunction1P(self.amplitudes / norm, self.basis)

    def to_momentum(self):
        if self.basis is Basis.MOMENTUM:
            return WaveFunction1P(self.amplitudes.copy(), Basis.MOMENTUM)
        return WaveFunction1P(sfft.fft(self.amplitudes, norm='ortho'), Basis.MOMENTUM)

    def to_position(self):
        if self.basis is Basis.POSITION:
            return WaveFunction1P(self.amplitudes.copy(), Basis.POSITION)
        return WaveFunction1P(sfft.ifft(self.amplitudes, norm='ortho'), Basis.POSITION)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


@dataclass
class JointState:
    """
    Two-particle pure state on the N x N grid.

    First index is particle 1, second index is particle 2.
    """
    amplitudes: np.ndarray
    basis: tuple = (Basis.POSITION, Basis.POSITION)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.ndim != 2 or self.amplitudes.shape[0] != self.amplitudes.shape[1]:
            raise ValidationError(
                f"Joint amplitudes must be a square grid, got shape {self.amplitudes.shape}"
            )
        self.basis = (Basis(self.basis[0]), Basis(self.basis[1]))

    @classmethod
    def product(cls, psi1, phi2):
        """psi1 (x) phi2 from two position-basis single-particle states."""
        if psi1.basis is not Basis.POSITION or phi2.basis is not Basis.POSITION:
            raise ContractViolationError(
                "Product states are built from position-basis factors",
                {'psi1_basis': psi1.basis.value, 'phi2_basis': phi2.basis.value}
            )
        if psi1.N != phi2.N:
            raise ValidationError(
                f"Factor dimensions differ: {psi1.N} vs {phi2.N}"
            )
        return cls(np.multiply.outer(psi1.amplitudes, phi2.amplitudes))

    @property
    def N(self):
        return self.amplitudes.shape[0]

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return JointState(self.amplitudes.copy(), self.basis)

    def to_momentum(self, axis=None):
        """Transform one axis (0 or 1) or both axes to the momentum basis."""
        return self._transform(axis, Basis.MOMENTUM)

    def to_position(self, axis=None):
        return self._transform(axis, Basis.POSITION)

    def _transform(self, axis, target):
        axes = (0, 1) if axis is None else (axis,)
        amplitudes = self.amplitudes.copy()
        basis = list(self.basis)
        for ax in axes:
            if basis[ax] is target:
                continue
            if target is Basis.MOMENTUM:
                amplitudes = sfft.fft(amplitudes, axis=ax, norm='ortho')
            else:
                amplitudes = sfft.ifft(amplitudes, axis=ax, norm='ortho')
            basis[ax] = target
        return JointState(amplitudes, tuple(basis))

    def project_onto(self, psi1):
        """
        Fidelity of the particle-1 reduced state with psi1.

        Returns sum_j |c_j|^2 with c_j = sum_m conj(psi1[m]) Psi[m, j].
        """
        if self.basis != (Basis.POSITION, Basis.POSITION) or psi1.basis is not Basis.POSITION:
            raise ContractViolationError("Projection requires position-basis states")
        overlaps = psi1.amplitudes.conj() @ self.amplitudes
        return float(np.vdot(overlaps, overlaps).real)

    def reduced_density_matrix(self):
        """Tr_2 |Psi><Psi| as an N x N matrix."""
        return self.amplitudes @ self.amplitudes.conj().T
