"""POVMs on qubit pairs and the compatible information they extract.

A POVM is stored as effect *densities* ``E_a`` with cell weights ``w_a``; the
actual effect of cell ``a`` is ``w_a E_a``. Discrete outcomes have weight 1,
continuous outcomes carry the Bloch-quadrature weight. Joint outcome tables
use the same convention, so Shannon quantities computed from densities
relative to cell weights approximate the continuum integrals while discrete
blocks stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bloch import BlochAngles, BlochGrid, basis_rotation
from .errors import CompletenessError, DimensionMismatchError, NegativeMassError, NormalizationError
from .linalg import dagger, qubit_rotation, shannon_entropy
from .validation import check_unit_interval, validate_density_matrix

COMPLETENESS_TOL = 1e-10
NEGATIVE_MASS_TOL = 1e-8
NORMALIZATION_TOL = 1e-8

# cells per block when streaming over large continuous tables
_BLOCK_CELLS = 1 << 22


@dataclass(frozen=True, eq=False)
class Povm:
    """Effect densities, cell weights and outcome labels of a generalized measurement."""

    kind: str
    effects: np.ndarray
    weights: np.ndarray
    labels: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("discrete", "continuous", "mixed"):
            raise ValueError(f"unknown POVM kind {self.kind!r}")
        effects = np.asarray(self.effects, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        if effects.ndim != 3 or effects.shape[1] != effects.shape[2]:
            raise DimensionMismatchError(f"effects must have shape (n, d, d), got {effects.shape}")
        if weights.shape != (effects.shape[0],) or len(self.labels) != effects.shape[0]:
            raise DimensionMismatchError("effects, weights and labels disagree in length")
        if np.any(weights < 0):
            raise CompletenessError("cell weights must be non-negative")
        effects.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "effects", effects)
        object.__setattr__(self, "weights", weights)
        dev = float(np.max(np.abs(self.total() - np.eye(self.dim))))
        if dev > COMPLETENESS_TOL:
            raise CompletenessError(f"effects sum to identity only within {dev:.3e}")
        lam = np.linalg.eigvalsh(0.5 * (effects + dagger(effects)))
        if lam.size and lam.min() < -COMPLETENESS_TOL:
            raise CompletenessError(f"an effect has negative eigenvalue {lam.min():.3e}")

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    def __len__(self) -> int:
        return self.effects.shape[0]

    def total(self) -> np.ndarray:
        """``sum_a w_a E_a``, the identity for a valid POVM."""
        return np.tensordot(self.weights, self.effects, axes=(0, 0))

    @classmethod
    def discrete(cls, effects, labels: Sequence | None = None) -> "Povm":
        effects = np.asarray(effects, dtype=complex)
        labels = tuple(labels) if labels is not None else tuple(("k", i) for i in range(len(effects)))
        return cls("discrete", effects, np.ones(len(effects)), labels)

    @classmethod
    def orthoprojective(cls, vartheta: float = 0.0) -> "Povm":
        """Qubit projectors ``U^{-1}|l><l|U`` with ``U = exp(i sigma_y vartheta/2)``."""
        return cls.discrete(_rotated_projectors(vartheta), labels=(("k", 0), ("k", 1)))

    @classmethod
    def from_basis(cls, unitary) -> "Povm":
        """Projectors onto the columns of ``unitary``."""
        u = np.asarray(unitary, dtype=complex)
        effects = np.einsum("ik,jk->kij", u, u.conj())
        return cls.discrete(effects)

    @classmethod
    def continuous(cls, grid: BlochGrid) -> "Povm":
        labels = tuple(("alpha", j) for j in range(grid.size))
        return cls("continuous", grid.projectors, grid.weights, labels,
                   {"n_theta": grid.n_theta, "n_phi": grid.n_phi})

    @classmethod
    def mixed(cls, chi: float, grid: BlochGrid, vartheta: float = 0.0) -> "Povm":
        """``(1-chi)|alpha><alpha| dV`` on the grid plus ``chi U^{-1}|l><l|U`` discrete outcomes."""
        chi = check_unit_interval("chi", chi)
        effects = np.concatenate([(1 - chi) * grid.projectors, chi * _rotated_projectors(vartheta)])
        weights = np.concatenate([grid.weights, np.ones(2)])
        labels = tuple(("alpha", j) for j in range(grid.size)) + (("k", 0), ("k", 1))
        return cls("mixed", effects, weights, labels,
                   {"chi": chi, "vartheta": float(vartheta),
                    "n_theta": grid.n_theta, "n_phi": grid.n_phi})


def _rotated_projectors(vartheta: float) -> np.ndarray:
    u = qubit_rotation(vartheta)
    # U^{-1}|l> is the l-th column of U^dagger
    cols = dagger(u)
    return np.einsum("ik,jk->kij", cols, cols.conj())


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Outcome table: ``mass[a, b] = density[a, b] * weights_a[a] * weights_b[b]``."""

    density: np.ndarray
    weights_a: np.ndarray
    weights_b: np.ndarray
    labels_a: tuple = ()
    labels_b: tuple = ()

    def __post_init__(self):
        dens = np.array(self.density, dtype=float)
        wa = np.asarray(self.weights_a, dtype=float)
        wb = np.asarray(self.weights_b, dtype=float)
        if dens.shape != (wa.size, wb.size):
            raise DimensionMismatchError(
                f"density shape {dens.shape} does not match weights ({wa.size}, {wb.size})"
            )
        mass = dens * np.outer(wa, wb)
        worst = float(mass.min()) if mass.size else 0.0
        if worst < -NEGATIVE_MASS_TOL:
            raise NegativeMassError(f"cell mass {worst:.3e} is below -{NEGATIVE_MASS_TOL:.0e}")
        dens[mass < 0] = 0.0
        total = float(np.sum(dens * np.outer(wa, wb)))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"total mass is {total!r}, expected 1")
        dens.setflags(write=False)
        object.__setattr__(self, "density", dens)
        object.__setattr__(self, "weights_a", wa)
        object.__setattr__(self, "weights_b", wb)
        if not self.labels_a:
            object.__setattr__(self, "labels_a", tuple(range(wa.size)))
        if not self.labels_b:
            object.__setattr__(self, "labels_b", tuple(range(wb.size)))

    @property
    def mass(self) -> np.ndarray:
        return self.density * np.outer(self.weights_a, self.weights_b)

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def marginal_a(self) -> np.ndarray:
        return self.mass.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.mass.sum(axis=0)

    def block_masses(self) -> dict:
        """Total mass per (label kind of a, label kind of b) block, e.g. ``("alpha", "k")``."""
        kinds_a = [_kind(lbl) for lbl in self.labels_a]
        kinds_b = [_kind(lbl) for lbl in self.labels_b]
        arr_a, arr_b = np.array(kinds_a), np.array(kinds_b)
        mass = self.mass
        out = {}
        for ka in dict.fromkeys(kinds_a):
            for kb in dict.fromkeys(kinds_b):
                out[(ka, kb)] = float(mass[np.ix_(arr_a == ka, arr_b == kb)].sum())
        return out


def _kind(label) -> str:
    if isinstance(label, tuple) and label:
        return str(label[0])
    return "outcome"


def _check_pair(rho_ab, povm_a: Povm, povm_b: Povm) -> np.ndarray:
    rho = validate_density_matrix(rho_ab)
    if rho.shape[0] != povm_a.dim * povm_b.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.shape[0]} != {povm_a.dim} x {povm_b.dim}"
        )
    return rho


def _partial_contract(rho: np.ndarray, effects_a: np.ndarray, da: int, db: int) -> np.ndarray:
    # T[a, (k, l)] = sum_ij E_a[i, j] rho[(j, l), (i, k)]
    r4 = rho.reshape(da, db, da, db)
    t = np.einsum("aij,jlik->akl", effects_a, r4)
    return t.reshape(effects_a.shape[0], db * db)


def _density_block(t_rows: np.ndarray, effects_b_flat: np.ndarray) -> np.ndarray:
    # density[a, b] = sum_kl E_b[k, l] T[a, (k, l)]  -> one GEMM
    return (t_rows @ effects_b_flat.T).real


def joint_distribution(rho_ab, povm_a: Povm, povm_b: Povm) -> JointDistribution:
    """Tabulate ``Tr[(E_A(a) x E_B(b)) rho_AB]`` over all outcome pairs."""
    rho = _check_pair(rho_ab, povm_a, povm_b)
    t = _partial_contract(rho, povm_a.effects, povm_a.dim, povm_b.dim)
    dens = _density_block(t, povm_b.effects.reshape(len(povm_b), -1))
    return JointDistribution(dens, povm_a.weights, povm_b.weights, povm_a.labels, povm_b.labels)


def _mi_terms(dens, wa, wb, pa, pb):
    mass = dens * np.outer(wa, wb)
    worst = float(mass.min())
    if worst < -NEGATIVE_MASS_TOL:
        raise NegativeMassError(f"cell mass {worst:.3e} is below -{NEGATIVE_MASS_TOL:.0e}")
    denom = np.outer(pa, pb)
    ok = (mass > 0) & (denom > 0)
    ratio = np.where(ok, dens, 1.0) / np.where(ok, denom, 1.0)
    return float(np.sum(np.where(ok, mass * np.log2(ratio), 0.0))), float(mass.sum())


def shannon_mutual(d: JointDistribution) -> float:
    """Mutual information in bits with densities taken relative to cell weights."""
    pa = d.density @ d.weights_b
    pb = d.weights_a @ d.density
    val, _ = _mi_terms(d.density, d.weights_a, d.weights_b, pa, pb)
    return val


def mutual_information(rho_ab, povm_a: Povm, povm_b: Povm) -> float:
    """``shannon_mutual(joint_distribution(...))`` without materializing the full table.

    Rows are streamed in blocks, so grids up to a few hundred thousand cell
    pairs per row stay within memory.
    """
    rho = _check_pair(rho_ab, povm_a, povm_b)
    da, db = povm_a.dim, povm_b.dim
    t = _partial_contract(rho, povm_a.effects, da, db)
    eb = povm_b.effects.reshape(len(povm_b), -1)
    wa, wb = povm_a.weights, povm_b.weights
    # marginal densities: contract with the weighted sum of the other POVM
    pa = (t @ povm_b.total().reshape(-1)).real
    pb = _density_block(_partial_contract(rho, povm_a.total()[None], da, db), eb)[0]
    rows = max(1, _BLOCK_CELLS // max(len(povm_b), 1))
    info = 0.0
    total = 0.0
    for start in range(0, len(povm_a), rows):
        stop = min(start + rows, len(povm_a))
        dens = _density_block(t[start:stop], eb)
        val, tot = _mi_terms(dens, wa[start:stop], wb, pa[start:stop], pb)
        info += val
        total += tot
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"total mass is {total!r}, expected 1")
    return info


def _check_two_qubit(rho_ab) -> np.ndarray:
    rho = validate_density_matrix(rho_ab)
    if rho.shape != (4, 4):
        raise DimensionMismatchError(f"expected a two-qubit (4x4) state, got {rho.shape}")
    return rho


def nonselected_information(rho_ab, grid: BlochGrid | None = None) -> float:
    """Compatible information of the uniform pure-state POVM applied to both qubits."""
    rho = _check_two_qubit(rho_ab)
    grid = grid or BlochGrid()
    povm = Povm.continuous(grid)
    return mutual_information(rho, povm, povm)


def selected_information(rho_ab, chi: float, vartheta: float, grid: BlochGrid | None = None) -> float:
    """Compatible information of the mixed continuous/orthoprojective measurements.

    Qubit A uses ``(1-chi) dV |alpha><alpha|`` plus ``chi |k><k|``; qubit B the
    same with its projectors rotated by ``vartheta``. At ``chi = 0`` this is
    the nonselected information, at ``chi = 1`` the orthoprojective one.
    """
    rho = _check_two_qubit(rho_ab)
    chi = check_unit_interval("chi", chi)
    grid = grid or BlochGrid()
    povm_a = Povm.mixed(chi, grid, 0.0)
    povm_b = Povm.mixed(chi, grid, vartheta)
    return mutual_information(rho, povm_a, povm_b)


def orientation_kernel(rho_ab, alpha, beta) -> np.ndarray:
    """``P_kl = <k|<l| U_A U_B rho U_B^{-1} U_A^{-1} |l>|k>`` for rotated measurement bases.

    ``U^{-1}|1>`` is the Bloch state at the given angles, so entry ``[0, 0]``
    equals the continuous joint density at ``(alpha, beta)``.
    """
    rho = _check_two_qubit(rho_ab)
    u = np.kron(basis_rotation(alpha), basis_rotation(beta))
    rotated = u @ rho @ dagger(u)
    return np.clip(np.diag(rotated).real, 0.0, None).reshape(2, 2)


def _four_outcome_mi(p: np.ndarray) -> np.ndarray:
    # p: (..., 2, 2) probability tables -> mutual information per table
    pa = p.sum(axis=-1)
    pb = p.sum(axis=-2)
    ent = lambda x: -np.sum(np.where(x > 0, x * np.log2(np.where(x > 0, x, 1.0)), 0.0), axis=-1)
    return ent(pa) + ent(pb) - ent(p.reshape(p.shape[:-2] + (4,)))


@dataclass(frozen=True)
class OrientationAverageReport:
    averaged_selected: float
    nonselected: float

    @property
    def difference(self) -> float:
        return self.averaged_selected - self.nonselected


def orientation_average_experiment(rho_ab, grid: BlochGrid | None = None) -> OrientationAverageReport:
    """Average the orthoprojective information over all basis orientations of both qubits.

    Returns the orientation average alongside :func:`nonselected_information`
    on the same grid. No relation between the two numbers is enforced.
    """
    rho = _check_two_qubit(rho_ab)
    grid = grid or BlochGrid(16, 32)
    n = grid.size
    states = grid.states
    perp = np.stack([-np.conj(states[:, 1]), np.conj(states[:, 0])], axis=-1)
    proj = [np.einsum("ni,nj->nij", v, v.conj()) for v in (states, perp)]
    t = [_partial_contract(rho, proj[k], 2, 2) for k in range(2)]
    eb = [proj[l].reshape(n, -1) for l in range(2)]
    w = grid.weights / 2.0  # normalized orientation measure
    total = 0.0
    rows = max(1, _BLOCK_CELLS // (4 * n))
    for start in range(0, n, rows):
        stop = min(start + rows, n)
        p = np.empty((stop - start, n, 2, 2))
        for k in range(2):
            for l in range(2):
                p[:, :, k, l] = _density_block(t[k][start:stop], eb[l])
        mi = _four_outcome_mi(np.clip(p, 0.0, None))
        total += float(w[start:stop] @ mi @ w)
    return OrientationAverageReport(total, nonselected_information(rho, grid))


__all__ = [
    "BlochAngles",
    "BlochGrid",
    "JointDistribution",
    "OrientationAverageReport",
    "Povm",
    "joint_distribution",
    "mutual_information",
    "nonselected_information",
    "orientation_average_experiment",
    "orientation_kernel",
    "selected_information",
    "shannon_mutual",
    "shannon_entropy",
]
