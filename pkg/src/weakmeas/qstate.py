"""Minimal state and operator algebra for polarization qubits.

Amplitudes are plain complex numbers. Linear polarizations are labeled by
an angle on the great circle of linear polarizations of the Poincare
sphere: 0 deg is horizontal (H), 180 deg vertical (V), 90 deg diagonal (D)
and 270 deg anti-diagonal (A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class PolarAngle:
    """Angle in degrees on the linear-polarization circle, reduced mod 360."""

    degrees: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.degrees):
            raise ValueError("angle must be finite")
        object.__setattr__(self, "degrees", float(self.degrees) % 360.0)

    @property
    def radians(self) -> float:
        return math.radians(self.degrees)


def _degrees(angle: float | PolarAngle) -> float:
    if isinstance(angle, PolarAngle):
        return angle.degrees
    return PolarAngle(float(angle)).degrees


class QubitState:
    """Normalized complex 2-vector (amp_H, amp_V).

    Unnormalized input is accepted and normalized eagerly; the zero vector
    is rejected. The global phase is preserved as given.
    """

    __slots__ = ("_v",)

    def __init__(self, amp_h: complex, amp_v: complex):
        v = np.array([amp_h, amp_v], dtype=complex)
        if not np.all(np.isfinite(v.view(float))):
            raise ValueError("state amplitudes must be finite")
        norm = np.linalg.norm(v)
        if norm < NORM_TOL:
            raise ValueError("cannot normalize the zero vector")
        v /= norm
        v.flags.writeable = False
        self._v = v

    @property
    def amp_h(self) -> complex:
        return complex(self._v[0])

    @property
    def amp_v(self) -> complex:
        return complex(self._v[1])

    def vector(self) -> np.ndarray:
        """Amplitudes as a read-only ndarray of shape (2,)."""
        return self._v

    def __repr__(self) -> str:
        return f"QubitState({self.amp_h!r}, {self.amp_v!r})"


class Observable:
    """Hermitian 2x2 operator."""

    __slots__ = ("_m",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("observable must be a 2x2 matrix")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("observable entries must be finite")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise ValueError("observable must be Hermitian")
        m.flags.writeable = False
        self._m = m

    @property
    def matrix(self) -> np.ndarray:
        """The operator as a read-only 2x2 ndarray."""
        return self._m

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self._m))))

    def __repr__(self) -> str:
        return f"Observable({self._m.tolist()!r})"


def linear_pol_state(angle: float | PolarAngle) -> QubitState:
    """State cos(theta/2)|H> + sin(theta/2)|V> for a polarization angle theta."""
    half = math.radians(_degrees(angle)) / 2.0
    return QubitState(math.cos(half), math.sin(half))


def diag_states() -> tuple[QubitState, QubitState]:
    """The diagonal pair (|D>, |A>) = ((|H>+|V>)/sqrt2, (|H>-|V>)/sqrt2)."""
    return QubitState(1.0, 1.0), QubitState(1.0, -1.0)


def inner_product(bra: QubitState, ket: QubitState) -> complex:
    """<bra|ket>, conjugate-linear in the first argument."""
    return complex(np.vdot(bra.vector(), ket.vector()))


def matrix_element(bra: QubitState, obs: Observable, ket: QubitState) -> complex:
    """<bra|obs|ket>."""
    return complex(np.vdot(bra.vector(), obs.matrix @ ket.vector()))


def stokes_hv() -> Observable:
    """Stokes polarization observable |H><H| - |V><V| (eigenvalues +-1)."""
    return Observable([[1.0, 0.0], [0.0, -1.0]])
