"""Dense statevector with in-place single-qubit and CX application.

Amplitude array index convention: qubit k is bit k of the basis index
(qubit 0 is the least-significant bit). One instance belongs to exactly
one simulation job; instances are not shared between threads.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ControlEqualsTarget, IndexOutOfRange


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """The primitive single-qubit gate:

    [[cos(t/2),            -e^{i*lam} sin(t/2)],
     [e^{i*phi} sin(t/2),  e^{i*(phi+lam)} cos(t/2)]]
    """
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ],
        dtype=np.complex128,
    )


class Statevector:
    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.amplitudes = np.zeros(1 << num_qubits, dtype=np.complex128)
        self.amplitudes[0] = 1.0

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.num_qubits:
            raise IndexOutOfRange(f"qubit {q} out of range for {self.num_qubits}-qubit state")

    def apply_matrix(self, matrix: np.ndarray, q: int) -> "Statevector":
        """Apply a 2x2 matrix to qubit `q` in place."""
        self._check_qubit(q)
        view = self.amplitudes.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = matrix[0, 0] * a + matrix[0, 1] * b
        view[:, 1, :] = matrix[1, 0] * a + matrix[1, 1] * b
        return self

    def apply_u(self, theta: float, phi: float, lam: float, q: int) -> "Statevector":
        return self.apply_matrix(u_matrix(theta, phi, lam), q)

    def apply_cx(self, control: int, target: int) -> "Statevector":
        """Flip `target` amplitude pairs wherever the control bit is set."""
        self._check_qubit(control)
        self._check_qubit(target)
        if control == target:
            raise ControlEqualsTarget(f"CX control and target are both {control}")
        n = self.num_qubits
        idx = np.arange(1 << n)
        src = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
        dst = src | (1 << target)
        tmp = self.amplitudes[src].copy()
        self.amplitudes[src] = self.amplitudes[dst]
        self.amplitudes[dst] = tmp
        return self

    def apply_x(self, q: int) -> "Statevector":
        return self.apply_u(math.pi, 0.0, math.pi, q)

    def prob_one(self, q: int) -> float:
        """Probability that measuring qubit `q` yields 1."""
        self._check_qubit(q)
        view = self.amplitudes.reshape(-1, 2, 1 << q)
        return float(np.sum(np.abs(view[:, 1, :]) ** 2))

    def collapse(self, q: int, outcome: int) -> "Statevector":
        """Project qubit `q` onto `outcome` and renormalize."""
        self._check_qubit(q)
        view = self.amplitudes.reshape(-1, 2, 1 << q)
        view[:, 1 - outcome, :] = 0.0
        norm = np.linalg.norm(self.amplitudes)
        if norm > 0.0:
            self.amplitudes /= norm
        return self

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))
