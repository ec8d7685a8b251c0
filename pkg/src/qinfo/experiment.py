"""Information efficiency of an extraction -> channel -> readout experiment.

Information extraction and readout are positive superoperator measures
(PSMs): labelled families of completely positive maps ``A_a`` with a-priori
weights ``mu(a)`` whose weighted sum is trace preserving. The Shannon
information of ``P(a, b) = mu(a) nu(b) Tr B_b N A_a rho_in`` rates a scheme and
serves as the objective when tuning its control parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .channels import KrausChannel, LambdaParams, coherent_information, lambda_channel
from .errors import DimensionMismatchError, ParameterRangeError, TracePreservationError
from .linalg import dagger, qubit_rotation
from .measurement import JointDistribution, shannon_mutual
from .validation import as_matrix, validate_density_matrix

PSM_TOL = 1e-10
INV_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class PsmOutcome:
    label: object
    weight: float
    branch: tuple


@dataclass(frozen=True, eq=False)
class Psm:
    """Positive superoperator measure ``A(da) = A_a mu(da)`` in Kraus form.

    Each outcome's map is ``rho -> sum_i A_{a,i} rho A_{a,i}^dagger``; the
    weighted sum over outcomes must preserve the trace.
    """

    outcomes: tuple
    flavor: str = "general"

    def __post_init__(self):
        if not self.outcomes:
            raise TracePreservationError("a PSM needs at least one outcome")
        fixed = []
        for o in self.outcomes:
            if not isinstance(o, PsmOutcome):
                o = PsmOutcome(*o)
            ops = tuple(as_matrix(k) for k in o.branch)
            if not ops:
                raise TracePreservationError(f"outcome {o.label!r} has an empty branch")
            if float(o.weight) < 0:
                raise TracePreservationError(f"outcome {o.label!r} has negative weight")
            fixed.append(PsmOutcome(o.label, float(o.weight), ops))
        shapes = {k.shape for o in fixed for k in o.branch}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"PSM operators have inconsistent shapes {sorted(shapes)}")
        object.__setattr__(self, "outcomes", tuple(fixed))
        dev = float(np.max(np.abs(self.adjoint_identity() - np.eye(self.dim_in))))
        if dev > PSM_TOL:
            raise TracePreservationError(
                f"PSM is not normalized: sum mu A^dagger A deviates from I by {dev:.3e}"
            )

    @property
    def dim_in(self) -> int:
        return self.outcomes[0].branch[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.outcomes[0].branch[0].shape[0]

    @property
    def labels(self) -> tuple:
        return tuple(o.label for o in self.outcomes)

    @property
    def weights(self) -> np.ndarray:
        return np.array([o.weight for o in self.outcomes])

    def __len__(self) -> int:
        return len(self.outcomes)

    def apply_outcome(self, index: int, rho) -> np.ndarray:
        """Unweighted branch map of outcome ``index``."""
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ dagger(k) for k in self.outcomes[index].branch)

    def adjoint_identity(self) -> np.ndarray:
        """``sum_a mu(a) A_a^*(I)``; the identity for a normalized PSM."""
        return sum(o.weight * sum(dagger(k) @ k for k in o.branch) for o in self.outcomes)

    def effects(self) -> np.ndarray:
        """Unweighted effect operators ``A_a^*(I)``, shape ``(n, dim_in, dim_in)``."""
        return np.array([sum(dagger(k) @ k for k in o.branch) for o in self.outcomes])

    def as_channel(self) -> KrausChannel:
        """The summed, outcome-forgetting map as a Kraus channel."""
        return KrausChannel(tuple(np.sqrt(o.weight) * k for o in self.outcomes for k in o.branch))

    @classmethod
    def unitary_family(cls, unitaries: Sequence, weights: Sequence[float] | None = None,
                       noise: KrausChannel | None = None, labels: Sequence | None = None) -> "Psm":
        """Dynamic-parameter extraction ``A_a = <U(a) . U(a)^{-1}>_E``.

        ``noise`` (optional) is applied after each unitary and stands for the
        environment average. Weights default to uniform.
        """
        us = [as_matrix(u) for u in unitaries]
        weights = _default_weights(weights, len(us))
        labels = list(labels) if labels is not None else list(range(len(us)))
        env = noise.kraus if noise is not None else (np.eye(us[0].shape[0]),)
        outs = [PsmOutcome(lbl, w, tuple(e @ u for e in env)) for lbl, w, u in zip(labels, weights, us)]
        return cls(tuple(outs), "unitary")

    @classmethod
    def projective_family(cls, vectors: Sequence, weights: Sequence[float] | None = None,
                          labels: Sequence | None = None) -> "Psm":
        """Storable-state extraction ``A_a = |a><a| . |a><a|`` with ``sum mu(a)|a><a| = I``."""
        vecs = [np.asarray(v, dtype=complex) for v in vectors]
        weights = list(weights) if weights is not None else [1.0] * len(vecs)
        labels = list(labels) if labels is not None else list(range(len(vecs)))
        outs = [PsmOutcome(lbl, w, (np.outer(v, v.conj()),)) for lbl, w, v in zip(labels, weights, vecs)]
        return cls(tuple(outs), "projective")

    @classmethod
    def qubit_basis(cls, vartheta: float = 0.0) -> "Psm":
        """Projective family on the basis ``U^{-1}|l>``, ``U = exp(i sigma_y vartheta/2)``."""
        cols = dagger(qubit_rotation(vartheta))
        return cls.projective_family([cols[:, 0], cols[:, 1]])


def _default_weights(weights, n: int) -> list:
    if weights is None:
        return [1.0 / n] * n
    weights = [float(w) for w in weights]
    if len(weights) != n:
        raise DimensionMismatchError(f"{len(weights)} weights for {n} outcomes")
    return weights


@dataclass(frozen=True, eq=False)
class ExperimentScheme:
    """``rho_out = B N A rho_in`` with optional named control parameters.

    ``controls`` maps names to ``(low, high)`` ranges; ``builder(params)``
    returns the scheme realized at those control values, and ``params``
    records the values a scheme was built at.
    """

    rho_in: np.ndarray
    extraction: Psm
    channel: KrausChannel
    readout: Psm
    controls: Mapping[str, tuple] = field(default_factory=dict)
    builder: Callable[[dict], "ExperimentScheme"] | None = None
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        rho = validate_density_matrix(self.rho_in)
        object.__setattr__(self, "rho_in", rho)
        chain = [
            ("rho_in", rho.shape[0], "extraction input", self.extraction.dim_in),
            ("extraction output", self.extraction.dim_out, "channel input", self.channel.dim_in),
            ("channel output", self.channel.dim_out, "readout input", self.readout.dim_in),
        ]
        for a, da, b, db in chain:
            if da != db:
                raise DimensionMismatchError(f"{a} has dimension {da} but {b} expects {db}")
        for name, rng in self.controls.items():
            lo, hi = (float(x) for x in rng)
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ParameterRangeError(f"control {name!r} has invalid range {rng!r}")

    def at(self, params: Mapping[str, float]) -> "ExperimentScheme":
        params = {k: float(v) for k, v in params.items()}
        unknown = set(params) - set(self.controls)
        if unknown:
            raise ParameterRangeError(f"unknown controls {sorted(unknown)}")
        built = self if self.builder is None else self.builder(params)
        return replace(built, params={**built.params, **params})


def experiment_distribution(s: ExperimentScheme) -> JointDistribution:
    """``P(a, b) = Tr B_b N A_a rho_in`` with cell weights ``mu(a)``, ``nu(b)``."""
    readout_effects = s.readout.effects()
    dens = np.empty((len(s.extraction), len(s.readout)))
    for i in range(len(s.extraction)):
        sigma = s.extraction.apply_outcome(i, s.rho_in)
        tau = sum(k @ sigma @ dagger(k) for k in s.channel.kraus)
        dens[i] = np.einsum("bij,ji->b", readout_effects, tau).real
    return JointDistribution(dens, s.extraction.weights, s.readout.weights,
                             s.extraction.labels, s.readout.labels)


def experiment_information(s: ExperimentScheme) -> float:
    """Shannon information between extracted and read-out labels, in bits."""
    return shannon_mutual(experiment_distribution(s))


@dataclass
class RateResult:
    """Best value found, where, and every evaluation made on the way."""

    best_value: float
    best_params: dict
    trace: list
    extras: dict = field(default_factory=dict)

    def to_dict(self, include_trace: bool = True) -> dict:
        out = {"best_value": self.best_value, "best_params": dict(self.best_params)}
        out.update(self.extras)
        if include_trace:
            out["trace"] = [{"params": dict(p), "value": v} for p, v in self.trace]
        return out


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float, list]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x), evaluations)``."""
    evals = []

    def g(x):
        v = f(x)
        evals.append((x, v))
        return v

    a, b = float(lo), float(hi)
    if b - a <= tol:
        x = 0.5 * (a + b)
        return x, g(x), evals
    x1 = b - INV_GOLDEN * (b - a)
    x2 = a + INV_GOLDEN * (b - a)
    f1, f2 = g(x1), g(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_GOLDEN * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_GOLDEN * (b - a)
            f2 = g(x2)
    x, v = max(evals, key=lambda e: e[1])
    return x, v, evals


def grid_then_golden(objective: Callable[[dict], float], axes: Mapping[str, np.ndarray],
                     bounds: Mapping[str, tuple], sweeps: int = 3, tol: float = 1e-10) -> RateResult:
    """Exhaustive scan over the product grid, then coordinate-wise golden-section refinement.

    Each refinement interval spans one grid step either side of the incumbent,
    clipped to ``bounds``. Axes with a single grid value are held fixed.
    """
    names = list(axes)
    trace = []

    def evaluate(params):
        v = float(objective(params))
        trace.append((dict(params), v))
        return v

    for combo in np.array(np.meshgrid(*[np.asarray(axes[n], float) for n in names],
                                      indexing="ij")).reshape(len(names), -1).T:
        evaluate(dict(zip(names, (float(c) for c in combo))))
    best_params, best_val = max(trace, key=lambda e: e[1])
    best_params = dict(best_params)
    grid_best = best_val

    for _ in range(sweeps):
        for n in names:
            vals = np.asarray(axes[n], float)
            if vals.size < 2:
                continue
            step = float(np.max(np.diff(np.sort(vals))))
            lo = max(bounds[n][0], best_params[n] - step)
            hi = min(bounds[n][1], best_params[n] + step)

            def along(x, n=n):
                p = dict(best_params)
                p[n] = x
                return evaluate(p)

            x, v, _ = golden_section_max(along, lo, hi, tol=tol * max(1.0, hi - lo))
            if v > best_val:
                best_val = v
                best_params[n] = x

    best_params, best_val = max(trace, key=lambda e: e[1])
    if best_val < grid_best:
        raise AssertionError("refinement lost the best grid sample")
    return RateResult(best_val, dict(best_params), trace)


def optimize_controls(s: ExperimentScheme, budget: int = 64,
                      objective: Callable[[ExperimentScheme], float] | None = None) -> RateResult:
    """Maximize the scheme's information over its control parameters.

    ``ceil(sqrt(budget))`` grid points per control (at most two controls),
    then golden-section refinement around the best grid point. ``objective``
    replaces :func:`experiment_information`; it receives the scheme built at
    each trial point, whose ``params`` hold the control values.
    """
    if not s.controls:
        raise ParameterRangeError("scheme has no control parameters to optimize")
    if len(s.controls) > 2:
        raise ParameterRangeError(f"at most two controls are supported, got {len(s.controls)}")
    if budget < 9:
        raise ParameterRangeError(f"budget must be at least 9, got {budget}")
    objective = objective or experiment_information
    per_axis = math.ceil(math.sqrt(budget))
    bounds = {n: (float(r[0]), float(r[1])) for n, r in s.controls.items()}
    axes = {n: np.linspace(lo, hi, per_axis) if hi > lo else np.array([lo])
            for n, (lo, hi) in bounds.items()}
    return grid_then_golden(lambda p: objective(s.at(p)), axes, bounds)


def lambda_rate(gamma1: float, gamma2: float, theta: float, t: float, rho_a=None) -> float:
    """``max(I_c, 0) / t`` for the Lambda-atom channel; zero at ``t = 0``."""
    if t <= 0:
        return 0.0
    rho_a = np.eye(2) / 2 if rho_a is None else rho_a
    ic = coherent_information(lambda_channel(LambdaParams(gamma1, gamma2, theta, t)), rho_a)
    return max(ic, 0.0) / t


def bloch_ball_state(r: float, polar: float = 0.0, azimuth: float = 0.0) -> np.ndarray:
    """Qubit density matrix with Bloch vector of length ``r`` along (polar, azimuth)."""
    n = r * np.array([np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)])
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return 0.5 * (np.eye(2) + n[0] * sx + n[1] * sy + n[2] * sz)


def lambda_rate_optimum(gamma1: float, gamma2: float, n_t: int = 64, n_theta: int = 64,
                        t_values: Sequence[float] | None = None,
                        theta_values: Sequence[float] | None = None,
                        theta_max: float = 2 * np.pi, optimize_input: bool = True) -> RateResult:
    """Best coherent-information rate ``max(I_c, 0)/t`` of the Lambda-atom channel.

    The input is ``I/2``; ``t`` runs over ``(0, 10/Gamma]`` and ``theta`` over
    ``[0, theta_max]`` with ``Gamma = gamma1 + gamma2``. ``best_value`` is in
    the same units as the rates; ``extras`` carries the rate per ``Gamma``
    and per ``max(gamma1, gamma2)``, and optionally the rate when the input
    state is optimized as well.
    """
    LambdaParams(gamma1, gamma2, 0.0, 0.0)  # validates the rates
    total = gamma1 + gamma2
    t_hi = 10.0 / total
    if t_values is None:
        t_values = t_hi * np.arange(1, n_t + 1) / n_t
    if theta_values is None:
        theta_values = np.linspace(0.0, theta_max, n_theta)
    t_values = np.asarray(t_values, float)
    theta_values = np.asarray(theta_values, float)
    if np.any(t_values <= 0):
        raise ParameterRangeError("decay times must be positive")
    bounds = {"t": (1e-9, float(max(t_hi, t_values.max()))),
              "theta": (0.0, float(max(theta_max, theta_values.max())))}
    result = grid_then_golden(
        lambda p: lambda_rate(gamma1, gamma2, p["theta"], p["t"]),
        {"t": t_values, "theta": theta_values}, bounds,
    )
    rate = result.best_value
    result.extras.update({
        "gamma1": float(gamma1),
        "gamma2": float(gamma2),
        "rate_per_total_decay": rate / total,
        "rate_per_max_gamma": rate / max(gamma1, gamma2),
        "total_decay_time": result.best_params["t"] * total,
    })
    if optimize_input and t_values.size > 1:
        result.extras["input_optimized"] = _input_optimized_rate(gamma1, gamma2, result, bounds)
    return result


def _input_optimized_rate(gamma1, gamma2, fixed: RateResult, bounds) -> dict:
    # Cartesian Bloch coordinates avoid the polar-angle degeneracy at the
    # centre; points outside the ball are projected onto its surface
    total = gamma1 + gamma2

    def objective(p):
        v = np.array([p["x"], p["y"], p["z"]])
        r = float(np.linalg.norm(v))
        if r > 1.0:
            v, r = v / r, 1.0
        polar = float(np.arccos(np.clip(v[2] / r, -1, 1))) if r > 0 else 0.0
        rho = bloch_ball_state(r, polar, float(np.arctan2(v[1], v[0])))
        return lambda_rate(gamma1, gamma2, p["theta"], p["t"], rho)

    t0, th0 = fixed.best_params["t"], fixed.best_params["theta"]
    cube = np.linspace(-1.0, 1.0, 5)
    axes = {"t": np.array([t0]), "theta": np.array([th0]), "x": cube, "y": cube, "z": cube}
    full_bounds = dict(bounds, x=(-1.0, 1.0), y=(-1.0, 1.0), z=(-1.0, 1.0))
    coarse = grid_then_golden(objective, axes, full_bounds, sweeps=0)
    steps = {"t": 0.25 * t0, "theta": 0.25, "x": 0.5, "y": 0.5, "z": 0.5}
    best_params, best_val = dict(coarse.best_params), coarse.best_value
    evaluations = len(coarse.trace)
    for _ in range(4):
        for n, step in steps.items():
            lo = max(full_bounds[n][0], best_params[n] - step)
            hi = min(full_bounds[n][1], best_params[n] + step)

            def along(x, n=n):
                p = dict(best_params)
                p[n] = x
                return objective(p)

            x, v, ev = golden_section_max(along, lo, hi, tol=1e-9)
            evaluations += len(ev)
            if v > best_val:
                best_val, best_params[n] = v, x
        steps = {n: s / 2 for n, s in steps.items()}
    return {
        "rate": best_val,
        "rate_per_total_decay": best_val / total,
        "rate_per_max_gamma": best_val / max(gamma1, gamma2),
        "params": best_params,
        "evaluations": evaluations,
    }
