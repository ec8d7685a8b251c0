"""Density matrices, the two-qubit state families, and overlap statistics.

Basis labels ``|1>, |2>`` of a qubit map to coordinate indices 0 and 1.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate

from .bloch import BlochAngles, BlochGrid, bloch_state  # noqa: F401  (re-exported)
from .errors import ParameterRangeError
from .linalg import eig_hermitian, partial_trace, tensor
from .validation import check_unit_interval, validate_density_matrix, validate_pure_state

KET1 = np.array([1, 0], dtype=complex)
KET2 = np.array([0, 1], dtype=complex)

# Bell basis: singlet first, then the three triplet states.
BELL_STATES = np.array(
    [
        (np.kron(KET1, KET2) - np.kron(KET2, KET1)) / np.sqrt(2),
        (np.kron(KET1, KET1) + np.kron(KET2, KET2)) / np.sqrt(2),
        (np.kron(KET1, KET1) - np.kron(KET2, KET2)) / np.sqrt(2),
        (np.kron(KET1, KET2) + np.kron(KET2, KET1)) / np.sqrt(2),
    ]
)
BELL_STATES.setflags(write=False)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(int(dim), dtype=complex) / int(dim)


def purity(rho) -> float:
    rho = validate_density_matrix(rho)
    return float(np.trace(rho @ rho).real)


def entangled_amplitudes(q: float) -> np.ndarray:
    """Two-qubit vector ``sqrt(1 - q^2/2)|1>|1> + (q/sqrt 2)|2>|2>``."""
    q = check_unit_interval("q", q)
    return np.sqrt(1 - q**2 / 2) * np.kron(KET1, KET1) + q / np.sqrt(2) * np.kron(KET2, KET2)


def pure_family(q: float) -> np.ndarray:
    """Pure two-qubit state interpolating from ``|1>|1>`` (q=0) to a Bell state (q=1)."""
    return projector(entangled_amplitudes(q))


def mixed_family(q: float) -> np.ndarray:
    """Mixture of the classically correlated state (weight 1-q) and the Bell state (weight q).

    Both one-qubit marginals are ``I/2`` for every q.
    """
    q = check_unit_interval("q", q)
    classical = 0.5 * (projector(np.kron(KET1, KET1)) + projector(np.kron(KET2, KET2)))
    return (1 - q) * classical + q * pure_family(1.0)


def epsilon_operator() -> np.ndarray:
    """Mean-square discrepancy operator of two qubits' projector ensembles.

    Singlet eigenvalue 1, triplet eigenvalue 1/3 (threefold).
    """
    singlet = projector(BELL_STATES[0])
    triplet = sum(projector(b) for b in BELL_STATES[1:])
    return singlet + triplet / 3


def epsilon_by_quadrature(grid: BlochGrid | None = None) -> np.ndarray:
    """Integrate ``(P_a x I - I x P_a)^2 dV / D`` over the Bloch sphere numerically."""
    grid = grid or BlochGrid(32, 64)
    eye = np.eye(2)
    p = grid.projectors
    diff = np.einsum("nij,kl->nikjl", p, eye) - np.einsum("ij,nkl->nikjl", eye, p)
    diff = diff.reshape(-1, 4, 4)
    sq = diff @ diff
    return grid.integrate(sq) / 2


def overlap_information(dim: int) -> float:
    """Shannon information shared by two random pure states with overlap-weighted coincidence.

    Evaluates ``I(D) = int_0^1 D(D-1) x (1-x)^(D-2) log2(D x) dx`` by adaptive
    quadrature, after substituting ``y = D x`` so large D stays well scaled.
    """
    dim = int(dim)
    if dim < 2:
        raise ParameterRangeError(f"dimension must be >= 2, got {dim}")
    n = float(dim)

    def integrand(y):
        if y <= 0.0:
            return 0.0
        # (1 - y/D)^(D-2) computed in log space
        tail = np.exp((n - 2) * np.log1p(-y / n)) if y < n else 0.0
        return (n - 1) / n * tail * y * np.log2(y)

    # beyond y = 800 the factor (1-y/D)^(D-2) is below e^-400 for every D >= 4
    upper = n if dim <= 4 else min(n, 800.0)
    breaks = [b for b in (1.0, 5.0, 20.0, 100.0) if b < upper]
    val, _ = integrate.quad(integrand, 0.0, upper, points=breaks or None, limit=200,
                            epsabs=1e-11, epsrel=1e-11)
    return float(val)


def distinguishable_count(dim: int) -> float:
    """Effective number of distinguishable states, ``2 ** overlap_information(dim)``."""
    return float(2.0 ** overlap_information(dim))


def overlap_information_mc(dim: int, n_samples: int, rng: np.random.Generator | int | None = None,
                           chunk: int = 1_000_000) -> tuple[float, float]:
    """Monte Carlo estimate of :func:`overlap_information` from Haar-random state pairs.

    Returns:
        ``(estimate, standard_error)``.
    """
    dim = int(dim)
    if dim < 2:
        raise ParameterRangeError(f"dimension must be >= 2, got {dim}")
    rng = np.random.default_rng(rng)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        a = rng.standard_normal((m, dim)) + 1j * rng.standard_normal((m, dim))
        b = rng.standard_normal((m, dim)) + 1j * rng.standard_normal((m, dim))
        ov = np.abs(np.sum(a.conj() * b, axis=1)) ** 2
        ov /= np.sum(np.abs(a) ** 2, axis=1) * np.sum(np.abs(b) ** 2, axis=1)
        r = dim * ov
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(r > 0, r * np.log2(r), 0.0)
        total += f.sum()
        total_sq += (f**2).sum()
        done += m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean**2, 0.0)
    return float(mean), float(np.sqrt(var / n_samples))


def purify(rho) -> np.ndarray:
    """Pure state ``sum_k sqrt(p_k) |v_k>_A |v_k>_R`` over the eigenvectors of ``rho``.

    System A is the slow index, reference R the fast one. Both marginals equal ``rho``.
    """
    rho = validate_density_matrix(rho)
    d = rho.shape[0]
    w, v = eig_hermitian(rho)
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        if w[k] > 0:
            psi += np.sqrt(w[k]) * np.kron(v[:, k], v[:, k])
    return psi / np.linalg.norm(psi)


def reduced_states(rho_ab, dims) -> tuple[np.ndarray, np.ndarray]:
    """Both one-party marginals of a bipartite state."""
    rho_ab = validate_density_matrix(rho_ab)
    return partial_trace(rho_ab, dims, [0]), partial_trace(rho_ab, dims, [1])


__all__ = [
    "BELL_STATES",
    "BlochAngles",
    "bloch_state",
    "distinguishable_count",
    "entangled_amplitudes",
    "epsilon_by_quadrature",
    "epsilon_operator",
    "maximally_mixed",
    "mixed_family",
    "overlap_information",
    "overlap_information_mc",
    "projector",
    "pure_family",
    "purify",
    "purity",
    "reduced_states",
    "tensor",
    "validate_density_matrix",
    "validate_pure_state",
]
