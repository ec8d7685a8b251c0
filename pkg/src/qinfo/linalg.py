"""Dense linear algebra over small Hilbert spaces.

Index convention: in ``tensor(a, b)`` the first factor is the slow index, so a
basis vector ``|i>|j>`` of dimensions ``(da, db)`` sits at position
``i * db + j``. Every other module relies on this ordering.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError
from .validation import as_matrix, validate_density_matrix

HERMITIAN_TOL = 1e-8
ZERO_PROB = 1e-14


class HermitianEig(NamedTuple):
    """Eigenvalues in ascending order and the matching unitary of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), first factor slowest."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Args:
        m: square matrix on the composite space.
        dims: subsystem dimensions, in tensor order.
        keep: indices of subsystems to retain. Their order in the result follows
            ``dims``, not the order given here.

    Returns:
        The reduced matrix of dimension ``prod(dims[k] for k in keep)``.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise DimensionMismatchError(
            f"dims {dims} imply a {n}x{n} matrix, got {m.shape[0]}x{m.shape[1]}"
        )
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    nsys = len(dims)
    t = m.reshape(dims + dims)
    # ket axes 0..nsys-1, bra axes nsys..2nsys-1
    traced = [k for k in range(nsys) if k not in keep]
    for offset, k in enumerate(traced):
        ax = k - offset
        cur = t.ndim // 2
        t = np.trace(t, axis1=ax, axis2=ax + cur)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian within ``tol``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix is not square: {m.shape}")
    dev = np.max(np.abs(m - dagger(m))) if m.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"max |m - m^dagger| = {dev:.3e} exceeds {tol:.1e}")
    return 0.5 * (m + dagger(m))


def eig_hermitian(m, tol: float = HERMITIAN_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, symmetrized before solving."""
    h = hermitian_part(m, tol)
    w, v = np.linalg.eigh(h)
    return HermitianEig(w, v)


def shannon_entropy(p) -> float:
    """Entropy in bits of a probability vector; entries at or below 1e-14 count as zero."""
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > ZERO_PROB]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho, in bits.

    ``rho`` is validated as a density matrix first, so an invalid state raises
    :class:`~qinfo.errors.InvalidStateError` rather than returning garbage.
    """
    rho = validate_density_matrix(rho)
    w = eig_hermitian(rho).eigenvalues
    return max(shannon_entropy(w), 0.0)


def qubit_rotation(angle: float) -> np.ndarray:
    """U(angle) = exp(i sigma_y angle / 2) = [[cos, sin], [-sin, cos]] of angle/2."""
    angle = float(angle)
    if not np.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def is_unitary(u, atol: float = 1e-10) -> bool:
    u = as_matrix(u)
    return u.shape[0] == u.shape[1] and np.allclose(dagger(u) @ u, np.eye(u.shape[0]), atol=atol)
