"""Input validation helpers shared by the public functions."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError, ParameterRangeError

STATE_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Convert to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf entries")
    return arr


def validate_density_matrix(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the symmetrized matrix.

    Raises:
        InvalidStateError: if any of the three conditions fails by more than ``tol``.
    """
    try:
        rho = as_matrix(rho)
    except ValueError as exc:
        raise InvalidStateError(str(exc)) from exc
    if rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
        raise InvalidStateError(f"density matrix must be square and non-empty, got {rho.shape}")
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_dev > tol:
        raise InvalidStateError(f"not Hermitian: max deviation {herm_dev:.3e}")
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -tol:
        raise InvalidStateError(f"not positive semidefinite: minimum eigenvalue {lam_min:.3e}")
    return rho


def validate_pure_state(psi, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise InvalidStateError(f"state vector must be 1-D and non-empty, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise InvalidStateError("state vector contains NaN or Inf entries")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"state vector norm is {norm!r}, expected 1")
    return psi


def check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ParameterRangeError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_dims(dims, total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != total:
        raise DimensionMismatchError(f"subsystem dims {dims} do not multiply to {total}")
    return dims
