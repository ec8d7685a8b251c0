"""Pure qubit states on the Bloch sphere and a product quadrature over them.

The sphere carries the measure ``dV = sin(theta) dtheta dphi / (2 pi)`` whose
total volume is 2, the Hilbert-space dimension. With this normalization the
continuous family of projectors ``|alpha><alpha| dV`` resolves the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import ParameterRangeError


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi):
            raise ParameterRangeError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi < 2 * np.pi):
            raise ParameterRangeError(f"phi must lie in [0, 2 pi), got {self.phi!r}")


def _angles(a) -> tuple[float, float]:
    if isinstance(a, BlochAngles):
        return a.theta, a.phi
    theta, phi = a
    return float(theta), float(phi)


def bloch_state(angles) -> np.ndarray:
    """Return ``(cos(theta/2), e^{i phi} sin(theta/2))``; theta = 0 gives ``|1>``.

    ``angles`` is a :class:`BlochAngles` or a ``(theta, phi)`` pair.
    """
    theta, phi = _angles(angles)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex)


def bloch_states(theta, phi) -> np.ndarray:
    """Vectorized :func:`bloch_state`; returns an array of shape ``theta.shape + (2,)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def basis_rotation(angles) -> np.ndarray:
    """Unitary ``U`` with ``U^{-1}|1> = |alpha>`` and ``U^{-1}|2> = |alpha-perp>``.

    Rows of ``U`` are the bras of the rotated measurement basis, so
    ``<k| U rho U^{-1} |k>`` is the probability of the k-th rotated outcome.
    """
    theta, phi = _angles(angles)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    u_inv = np.array([[c, -np.conj(e) * s], [e * s, c]], dtype=complex)
    return u_inv.conj().T


@dataclass(frozen=True)
class BlochGrid:
    """Gauss-Legendre nodes in cos(theta) times uniform nodes in phi.

    Weights sum to 2. The rule integrates polynomials in the Cartesian
    coordinates exactly up to degree ``min(2 n_theta - 1, n_phi - 1)``, which
    for ``n_theta >= 2, n_phi >= 2`` includes the completeness relation.
    """

    n_theta: int = 32
    n_phi: int = 64

    def __post_init__(self):
        if int(self.n_theta) < 1 or int(self.n_phi) < 1:
            raise ParameterRangeError(
                f"grid resolution must be positive, got ({self.n_theta}, {self.n_phi})"
            )

    @cached_property
    def _nodes(self):
        u, wu = np.polynomial.legendre.leggauss(int(self.n_theta))
        theta = np.arccos(u)
        phi = 2 * np.pi * np.arange(int(self.n_phi)) / int(self.n_phi)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        w = np.repeat(wu[:, None], int(self.n_phi), axis=1) / int(self.n_phi)
        return th.ravel(), ph.ravel(), w.ravel()

    @property
    def theta(self) -> np.ndarray:
        return self._nodes[0]

    @property
    def phi(self) -> np.ndarray:
        return self._nodes[1]

    @property
    def weights(self) -> np.ndarray:
        return self._nodes[2]

    @property
    def size(self) -> int:
        return int(self.n_theta) * int(self.n_phi)

    @cached_property
    def states(self) -> np.ndarray:
        """Pure states at the nodes, shape ``(size, 2)``."""
        return bloch_states(self.theta, self.phi)

    @cached_property
    def projectors(self) -> np.ndarray:
        """Projectors ``|alpha><alpha|`` at the nodes, shape ``(size, 2, 2)``."""
        v = self.states
        return v[:, :, None] * v[:, None, :].conj()

    def nodes(self) -> Iterator[tuple[BlochAngles, float]]:
        for th, ph, w in zip(self.theta, self.phi, self.weights):
            yield BlochAngles(float(th), float(ph)), float(w)

    def integrate(self, values) -> np.ndarray:
        """Weighted sum over the leading axis of ``values`` (one entry per node)."""
        values = np.asarray(values)
        return np.tensordot(self.weights, values, axes=(0, 0))

    def completeness(self) -> np.ndarray:
        """``sum_j w_j |alpha_j><alpha_j|``; equals the 2x2 identity."""
        return self.integrate(self.projectors)

    def refined(self) -> "BlochGrid":
        """Grid with both resolutions doubled (mesh halved)."""
        return BlochGrid(2 * int(self.n_theta), 2 * int(self.n_phi))
