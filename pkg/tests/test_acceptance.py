"""Acceptance gate: one test and one PASS/FAIL line per criterion."""

import time

import numpy as np

from helpers import diagonal_joint, random_channel, random_density, random_psm, random_unitary
from qinfo.bloch import BlochGrid, bloch_state
from qinfo.channels import (
    LambdaParams,
    apply_with_reference,
    coherent_information,
    identity_channel,
    joint_from_channel,
    lambda_channel,
    one_time_coherent,
    swap_subsystems,
    unitary_channel,
)
from qinfo.experiment import (
    ExperimentScheme,
    Psm,
    experiment_distribution,
    experiment_information,
    lambda_rate_optimum,
    optimize_controls,
)
from qinfo.linalg import dagger, tensor, von_neumann_entropy
from qinfo.measurement import (
    Povm,
    nonselected_information,
    orientation_kernel,
    selected_information,
)
from qinfo.states import (
    epsilon_by_quadrature,
    epsilon_operator,
    mixed_family,
    overlap_information,
    pure_family,
)


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def test_criterion_01_distinguishability(criterion):
    i2, t2 = timed(overlap_information, 2)
    ibig, tbig = timed(overlap_information, 10**6)
    ok = abs(i2 - 0.27865) <= 1e-4 and abs(ibig - 0.60995) <= 5e-3 and t2 < 1 and tbig < 1
    criterion(1, "distinguishability constants", ok,
              f"I(2)={i2:.6f} in {t2:.3f}s, I(1e6)={ibig:.6f} in {tbig:.3f}s")


def test_criterion_02_epsilon(criterion):
    start = time.perf_counter()
    lam = np.linalg.eigvalsh(epsilon_operator())
    spec_dev = float(np.max(np.abs(lam - [1 / 3, 1 / 3, 1 / 3, 1])))
    quad_dev = float(np.max(np.abs(epsilon_by_quadrature(BlochGrid(32, 64)) - epsilon_operator())))
    elapsed = time.perf_counter() - start
    ok = spec_dev <= 1e-10 and quad_dev <= 1e-6 and elapsed < 5
    criterion(2, "incompatibility operator spectrum", ok,
              f"eigenvalue dev {spec_dev:.1e}, quadrature dev {quad_dev:.1e}, {elapsed:.2f}s")


def test_criterion_03_nonselected_bell(criterion):
    val, elapsed = timed(nonselected_information, pure_family(1), BlochGrid(32, 64))
    ref = overlap_information(2)
    ok = abs(val - 0.27865) <= 1e-3 and abs(val - ref) < 2e-3 and elapsed < 60
    criterion(3, "nonselected information at full entanglement", ok,
              f"I_u={val:.7f}, I(2)={ref:.7f}, {elapsed:.2f}s")


def test_criterion_04_selected_endpoints(criterion):
    g = BlochGrid(32, 64)
    rho = mixed_family(0)
    aligned = selected_information(rho, 1.0, 0.0, g)
    crossed = selected_information(rho, 1.0, np.pi / 2, g)
    zero_dev = max(
        abs(selected_information(r, 0.0, vt, g) - nonselected_information(r, g))
        for r in (mixed_family(0), pure_family(1), mixed_family(0.5))
        for vt in (0.0, 1.0)
    )
    ok = abs(aligned - 1) <= 1e-6 and crossed <= 1e-6 and zero_dev <= 1e-9
    criterion(4, "selected-information endpoints", ok,
              f"aligned={aligned:.9f}, crossed={crossed:.1e}, chi=0 dev {zero_dev:.1e}")


def test_criterion_05_two_level_rate(criterion):
    res, elapsed = timed(lambda_rate_optimum, 1.0, 0.0)
    fixed = res.best_value
    optimized = res.extras["input_optimized"]["rate"]
    ok = 0.311 <= fixed <= 0.321 and 0.311 <= optimized <= 0.321 and elapsed < 120
    criterion(5, "two-level rate optimum", ok,
              f"R={fixed:.5f} gamma (input I/2), {optimized:.5f} gamma (optimized input), "
              f"gamma t={res.best_params['t']:.4f}, {elapsed:.1f}s")


def test_criterion_06_symmetric_rate(criterion):
    res = lambda_rate_optimum(1.0, 1.0)
    t, theta = res.best_params["t"], res.best_params["theta"]
    per_total = res.extras["rate_per_total_decay"]
    per_gamma = res.extras["rate_per_max_gamma"]
    interior = 0 < t < 10.0 / 2 and 0 < theta < 2 * np.pi
    in_range = [n for n, v in (("per Gamma", per_total), ("per gamma", per_gamma)) if 0.14 <= v <= 0.21]
    ok = np.isfinite(res.best_value) and interior and bool(in_range)
    criterion(6, "symmetric Lambda rate", ok,
              f"R={per_total:.5f} Gamma = {per_gamma:.5f} gamma at t={t:.4f}, theta={theta:.6f}; "
              f"in range {in_range}; target 0.178 gamma")


def test_criterion_07_coherent_identities(criterion):
    rng = np.random.default_rng(7)
    unitary_dev = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 5))
        rho = random_density(d, rng)
        ic = coherent_information(unitary_channel(random_unitary(d, rng)), rho)
        unitary_dev = max(unitary_dev, abs(ic - von_neumann_entropy(rho)))
    classical_max = max(
        one_time_coherent(diagonal_joint(rng.dirichlet(np.ones(4))), (2, 2)) for _ in range(100))
    construct_dev = 0.0
    for _ in range(100):
        ch = random_channel(2, 3, int(rng.integers(1, 4)), rng)
        rho = random_density(2, rng)
        ic = coherent_information(ch, rho)
        rb = swap_subsystems(apply_with_reference(ch, rho), (3, 2))
        construct_dev = max(construct_dev, abs(one_time_coherent(rb, (2, 3)) - ic),
                            abs(one_time_coherent(joint_from_channel(ch, rho), (2, 3)) - ic))
    ok = unitary_dev <= 1e-9 and classical_max <= 0 and construct_dev <= 1e-9
    criterion(7, "coherent-information identities", ok,
              f"unitary dev {unitary_dev:.1e}, classical max {classical_max:.3f}, "
              f"construction dev {construct_dev:.1e}")


def test_criterion_08_kernel_identity(criterion):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        rho = random_density(4, rng)
        a = (rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        b = (rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        v = tensor(bloch_state(a), bloch_state(b))
        worst = max(worst, abs(orientation_kernel(rho, a, b)[0, 0] - np.vdot(v, rho @ v).real))
    criterion(8, "orientation kernel identity", worst <= 1e-12, f"max dev {worst:.1e}")


def test_criterion_09_schemes(criterion):
    worst_neg, worst_norm = 0.0, 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 5))
        extraction = (Psm.unitary_family([random_unitary(2, rng) for _ in range(n)],
                                         weights=rng.dirichlet(np.ones(n)))
                      if seed % 2 else random_psm(2, n, rng))
        s = ExperimentScheme(random_density(2, rng), extraction, random_channel(2, 3, 2, rng),
                             random_psm(3, 3, rng))
        d = experiment_distribution(s)
        worst_neg = min(worst_neg, float(d.mass.min()))
        worst_norm = max(worst_norm, abs(d.total - 1))
    matched = experiment_information(
        ExperimentScheme(np.eye(2) / 2, Psm.qubit_basis(), identity_channel(), Psm.qubit_basis()))

    def build(p):
        return ExperimentScheme(np.eye(2) / 2, Psm.qubit_basis(), identity_channel(),
                                Psm.qubit_basis(p["vartheta"]), controls=controls, builder=build)

    controls = {"vartheta": (0.0, np.pi / 2)}
    opt = optimize_controls(build({"vartheta": 1.0}), budget=64)
    ok = (worst_neg >= -1e-8 and worst_norm <= 1e-8 and abs(matched - 1) <= 1e-9
          and abs(opt.best_params["vartheta"]) <= 1e-3)
    criterion(9, "experiment schemes", ok,
              f"min mass {worst_neg:.1e}, norm dev {worst_norm:.1e}, matched {matched:.12f}, "
              f"optimum vartheta {opt.best_params['vartheta']:.1e}")


def test_criterion_10_infrastructure(criterion):
    rng = np.random.default_rng(10)
    complete = 0.0
    for g in (BlochGrid(8, 16), BlochGrid(32, 64), BlochGrid(64, 128)):
        complete = max(complete, float(np.max(np.abs(g.completeness() - np.eye(2)))))
        for chi in (0.0, 0.5, 1.0):
            complete = max(complete, float(np.max(np.abs(Povm.mixed(chi, g, 0.3).total() - np.eye(2)))))
    tp = 0.0
    for _ in range(50):
        ch = random_channel(int(rng.integers(2, 4)), 3, int(rng.integers(1, 5)), rng)
        tp = max(tp, float(np.max(np.abs(ch.completeness() - np.eye(ch.dim_in)))))
    for th in np.linspace(0, 2 * np.pi, 7):
        for t in (0.0, 0.5, 3.0):
            ch = lambda_channel(LambdaParams(1.0, 0.5, th, t))
            tp = max(tp, float(np.max(np.abs(ch.completeness() - np.eye(2)))))
    ent = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 6))
        rho, u = random_density(d, rng), random_unitary(d, rng)
        ent = max(ent, abs(von_neumann_entropy(u @ rho @ dagger(u)) - von_neumann_entropy(rho)))
    g = BlochGrid(32, 64)
    conv = 0.0
    for rho in (pure_family(1), pure_family(0.5), mixed_family(0), mixed_family(0.7)):
        conv = max(conv, abs(nonselected_information(rho, g.refined()) - nonselected_information(rho, g)))
        conv = max(conv, abs(selected_information(rho, 0.5, 0.4, g.refined())
                             - selected_information(rho, 0.5, 0.4, g)))
    ok = complete <= 1e-10 and tp <= 1e-10 and ent <= 1e-9 and conv < 1e-4
    criterion(10, "infrastructure invariants", ok,
              f"completeness {complete:.1e}, trace preservation {tp:.1e}, "
              f"entropy invariance {ent:.1e}, refinement change {conv:.1e}")
