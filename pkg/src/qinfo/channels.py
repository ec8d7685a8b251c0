"""Kraus-form channels, coherent and one-time information, and the atom-to-photon channel.

Joint states produced here keep a fixed subsystem order: the channel output B
is the slow index and the reference R the fast one (``dims = (dim_out, dim_in)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, ParameterRangeError, TracePreservationError
from .linalg import dagger, partial_trace, von_neumann_entropy
from .states import purify
from .validation import as_matrix, check_dims, validate_density_matrix

TP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map ``rho -> sum_i K_i rho K_i^dagger``."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise TracePreservationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionMismatchError("Kraus operators have inconsistent shapes")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        dev = np.max(np.abs(self.completeness() - np.eye(self.dim_in)))
        if dev > TP_TOL:
            raise TracePreservationError(
                f"sum K^dagger K deviates from identity by {dev:.3e} (tolerance {TP_TOL:.0e})"
            )

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def completeness(self) -> np.ndarray:
        return sum(dagger(k) @ k for k in self.kraus)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def __len__(self) -> int:
        return len(self.kraus)

    def compose(self, first: "KrausChannel") -> "KrausChannel":
        """Channel that applies ``first`` and then ``self``."""
        if first.dim_out != self.dim_in:
            raise DimensionMismatchError(
                f"cannot compose: {first.dim_out}-dim output into {self.dim_in}-dim input"
            )
        return KrausChannel(tuple(b @ a for b in self.kraus for a in first.kraus))


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((as_matrix(u),))


PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def depolarizing_channel(p: float = 1.0) -> KrausChannel:
    """Qubit depolarizing channel; ``p = 1`` sends every state to ``I/2``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"p must lie in [0, 1], got {p!r}")
    ops = [np.sqrt(1 - 3 * p / 4) * PAULIS[0]] + [np.sqrt(p / 4) * s for s in PAULIS[1:]]
    return KrausChannel(tuple(ops))


def classical_channel(transition) -> KrausChannel:
    """Measure-and-prepare channel with ``K_{ji} = sqrt(p(j|i)) |j><i|``.

    ``transition[i, j]`` is the probability of output j given input i; rows sum to one.
    """
    t = np.asarray(transition, dtype=float)
    if t.ndim != 2 or np.any(t < 0) or not np.allclose(t.sum(axis=1), 1.0, atol=1e-12):
        raise ParameterRangeError("transition must be a row-stochastic matrix")
    n_in, n_out = t.shape
    ops = []
    for i in range(n_in):
        for j in range(n_out):
            if t[i, j] > 0:
                k = np.zeros((n_out, n_in), dtype=complex)
                k[j, i] = np.sqrt(t[i, j])
                ops.append(k)
    return KrausChannel(tuple(ops))


def _check_input(channel: KrausChannel, rho) -> np.ndarray:
    rho = validate_density_matrix(rho)
    if rho.shape[0] != channel.dim_in:
        raise DimensionMismatchError(
            f"state has dimension {rho.shape[0]}, channel expects {channel.dim_in}"
        )
    return rho


def apply(channel: KrausChannel, rho) -> np.ndarray:
    rho = _check_input(channel, rho)
    out = sum(k @ rho @ dagger(k) for k in channel.kraus)
    return 0.5 * (out + dagger(out))


def apply_on_subsystem(channel: KrausChannel, rho, dims: Sequence[int], target: int) -> np.ndarray:
    """Apply ``channel`` to one factor of a multipartite state, identity elsewhere."""
    rho = validate_density_matrix(rho)
    dims = check_dims(dims, rho.shape[0])
    if dims[target] != channel.dim_in:
        raise DimensionMismatchError(
            f"subsystem {target} has dimension {dims[target]}, channel expects {channel.dim_in}"
        )
    out = 0
    for k in channel.kraus:
        factors = [np.eye(d) for d in dims]
        factors[target] = k
        big = factors[0]
        for f in factors[1:]:
            big = np.kron(big, f)
        out = out + big @ rho @ dagger(big)
    return 0.5 * (out + dagger(out))


def apply_with_reference(channel: KrausChannel, rho_a) -> np.ndarray:
    """Joint output-reference state ``(N x I)|Psi_AR><Psi_AR|`` for a purification of ``rho_a``.

    The result is ordered (B, R) with ``dims = (channel.dim_out, channel.dim_in)``.
    """
    rho_a = _check_input(channel, rho_a)
    d = rho_a.shape[0]
    psi = purify(rho_a)
    proj = np.outer(psi, psi.conj())
    out = sum(np.kron(k, np.eye(d)) @ proj @ dagger(np.kron(k, np.eye(d))) for k in channel.kraus)
    return 0.5 * (out + dagger(out))


def coherent_information(channel: KrausChannel, rho_a) -> float:
    """``S[rho_B] - S[rho_BR]`` in bits; negative values are returned unchanged."""
    rho_br = apply_with_reference(channel, rho_a)
    rho_b = partial_trace(rho_br, (channel.dim_out, channel.dim_in), [0])
    return von_neumann_entropy(rho_b) - von_neumann_entropy(rho_br)


def coherent_information_clamped(channel: KrausChannel, rho_a) -> float:
    """Coherent information with negative values replaced by zero."""
    return max(coherent_information(channel, rho_a), 0.0)


def swap_subsystems(rho, dims: Sequence[int]) -> np.ndarray:
    """Reorder a bipartite operator from (A, B) to (B, A)."""
    rho = as_matrix(rho)
    da, db = check_dims(dims, rho.shape[0])
    t = rho.reshape(da, db, da, db).transpose(1, 0, 3, 2)
    return t.reshape(da * db, da * db)


def _marginal_entropies(rho_ab, dims):
    rho_ab = validate_density_matrix(rho_ab)
    dims = check_dims(dims, rho_ab.shape[0])
    if len(dims) != 2:
        raise DimensionMismatchError(f"expected two subsystems, got dims {dims}")
    s_a = von_neumann_entropy(partial_trace(rho_ab, dims, [0]))
    s_b = von_neumann_entropy(partial_trace(rho_ab, dims, [1]))
    return s_a, s_b, von_neumann_entropy(rho_ab)


def one_time_mutual(rho_ab, dims: Sequence[int]) -> float:
    """Quantum mutual information ``S_A + S_B - S_AB`` of a joint state."""
    s_a, s_b, s_ab = _marginal_entropies(rho_ab, dims)
    return s_a + s_b - s_ab


def one_time_coherent(rho_ab, dims: Sequence[int]) -> float:
    """``S_B - S_AB`` with B the second factor; may be negative."""
    _, s_b, s_ab = _marginal_entropies(rho_ab, dims)
    return s_b - s_ab


def one_time_coherent_clamped(rho_ab, dims: Sequence[int]) -> float:
    return max(one_time_coherent(rho_ab, dims), 0.0)


def joint_from_channel(channel: KrausChannel, rho_a) -> np.ndarray:
    """Forward construction ``(I x N)|Psi_AB0><Psi_AB0|`` of an input-output joint state.

    ``Psi_AB0 = sum_k sqrt(p_k) |v_k>|v_k>`` so both A and the channel input B0
    carry ``rho_a``.
    Result ordered (A, B) with ``dims = (dim_in, dim_out)``.
    """
    rho_a = _check_input(channel, rho_a)
    d = rho_a.shape[0]
    psi = purify(rho_a)
    proj = np.outer(psi, psi.conj())
    out = sum(np.kron(np.eye(d), k) @ proj @ dagger(np.kron(np.eye(d), k)) for k in channel.kraus)
    return 0.5 * (out + dagger(out))


@dataclass(frozen=True)
class LambdaParams:
    """Decay rates of the two radiative transitions, pulse area ``theta`` and decay time ``t``."""

    gamma1: float
    gamma2: float
    theta: float
    t: float

    def __post_init__(self):
        vals = (self.gamma1, self.gamma2, self.theta, self.t)
        if not all(np.isfinite(v) for v in vals):
            raise ParameterRangeError("Lambda-system parameters must be finite")
        if self.gamma1 < 0 or self.gamma2 < 0 or self.gamma1 + self.gamma2 <= 0:
            raise ParameterRangeError(
                f"need gamma1, gamma2 >= 0 with positive sum, got ({self.gamma1}, {self.gamma2})"
            )
        if not 0.0 <= self.theta <= 2 * np.pi:
            raise ParameterRangeError(f"theta must lie in [0, 2 pi], got {self.theta!r}")
        if self.t < 0:
            raise ParameterRangeError(f"t must be non-negative, got {self.t!r}")

    @property
    def total_rate(self) -> float:
        return self.gamma1 + self.gamma2

    @property
    def survival(self) -> float:
        """Excited-state amplitude-squared ``eta = exp(-(gamma1 + gamma2) t)``."""
        return float(np.exp(-self.total_rate * self.t))


# atom levels: ground |1>, ground |2>, excited |e>; field modes: vacuum, photon 1, photon 2
_G1, _G2, _E = 0, 1, 2
_VAC, _PH1, _PH2 = 0, 1, 2


def _atom_field(atom: int, mode: int) -> int:
    return 3 * atom + mode


def _kraus_from_isometry(w: np.ndarray) -> KrausChannel:
    # w: (atom x field, input) -> trace out the atom, one Kraus operator per atom level
    cube = w.reshape(3, 3, w.shape[1])
    return KrausChannel(tuple(cube[m] for m in range(3)))


def _decay_isometry(gamma1: float, gamma2: float, eta: float) -> np.ndarray:
    g = gamma1 + gamma2
    v = np.zeros((9, 3), dtype=complex)
    v[_atom_field(_G1, _VAC), _G1] = 1.0
    v[_atom_field(_G2, _VAC), _G2] = 1.0
    v[_atom_field(_E, _VAC), _E] = np.sqrt(eta)
    v[_atom_field(_G1, _PH1), _E] = np.sqrt(gamma1 * (1 - eta) / g)
    v[_atom_field(_G2, _PH2), _E] = np.sqrt(gamma2 * (1 - eta) / g)
    return v


def lambda_channel(p: LambdaParams) -> KrausChannel:
    """Channel from the ground-state qubit of a Lambda atom to the emitted field.

    Both rates positive: an instantaneous pulse rotates the bright state
    ``(sqrt(g1)|1> + sqrt(g2)|2>)/sqrt(g1+g2)`` toward ``|e>`` by ``theta``
    (population ``sin^2(theta/2)``), the dark state is untouched, then ``|e>``
    decays for time ``t`` into ``|1>|ph1>`` or ``|2>|ph2>``. The atom is traced out.

    One rate zero: the atom is a two-level radiator, see :func:`two_level_channel`.
    The literal Lambda model would keep which-path information in the
    non-radiating ground level and never transmit coherent information.
    """
    g1, g2 = float(p.gamma1), float(p.gamma2)
    if g1 == 0.0 or g2 == 0.0:
        return two_level_channel(p.theta, p.survival, radiating=_PH1 if g1 > 0 else _PH2)
    g = g1 + g2
    bright = np.array([np.sqrt(g1), np.sqrt(g2), 0.0]) / np.sqrt(g)
    dark = np.array([np.sqrt(g2), -np.sqrt(g1), 0.0]) / np.sqrt(g)
    excited = np.array([0.0, 0.0, 1.0])
    c, s = np.cos(p.theta / 2), np.sin(p.theta / 2)
    pulse = (
        np.outer(c * bright + s * excited, bright)
        + np.outer(-s * bright + c * excited, excited)
        + np.outer(dark, dark)
    )
    w = _decay_isometry(g1, g2, p.survival) @ pulse[:, :2]
    return _kraus_from_isometry(w)


def two_level_channel(theta: float, eta: float, radiating: int = _PH1) -> KrausChannel:
    """Qubit ``{|g>, |e>}`` of a two-level radiator to the field ``{vac, ph1, ph2}``.

    The input qubit is rotated by ``theta`` within the radiating transition,
    then ``|e> -> sqrt(eta)|e>|vac> + sqrt(1-eta)|g>|ph>``. The photon occupies
    mode ``radiating`` (1 or 2). For input ``I/2`` the coherent information is
    ``H2((1-eta)/2) - H2(eta/2)`` for every theta.
    """
    if not 0.0 <= eta <= 1.0:
        raise ParameterRangeError(f"eta must lie in [0, 1], got {eta!r}")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    # input |1> -> ground of the radiator, |2> -> excited
    rot = np.zeros((3, 2), dtype=complex)
    rot[_G1, 0], rot[_E, 0] = c, s
    rot[_G1, 1], rot[_E, 1] = -s, c
    v = np.zeros((9, 3), dtype=complex)
    v[_atom_field(_G1, _VAC), _G1] = 1.0
    v[_atom_field(_G2, _VAC), _G2] = 1.0
    v[_atom_field(_E, _VAC), _E] = np.sqrt(eta)
    v[_atom_field(_G1, radiating), _E] = np.sqrt(1 - eta)
    return _kraus_from_isometry(v @ rot)


def binary_entropy(p: float) -> float:
    p = float(p)
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))
