"""Command-line front end: ``qinfo <command> [options]``.

Tables go out as CSV (9 significant digits, header row, trailing ``#``
metadata line); structured results as JSON. Exit codes: 0 success, 2 usage
error, 3 validation error, 4 tolerance failure in ``--verify`` modes.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .bloch import BlochGrid
from .channels import LambdaParams, coherent_information, lambda_channel
from .errors import QInfoError
from .experiment import experiment_distribution, lambda_rate_optimum, optimize_controls
from .io import load_scheme
from .measurement import nonselected_information, selected_information, shannon_mutual
from .states import (
    BELL_STATES,
    distinguishable_count,
    epsilon_by_quadrature,
    epsilon_operator,
    mixed_family,
    overlap_information,
    overlap_information_mc,
    pure_family,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_TOLERANCE = 0, 2, 3, 4
THREADS_ENV = "QINFO_THREADS"
BELL_NAMES = ("singlet", "phi+", "phi-", "psi+")
QUADRATURE_TOL = 1e-6


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def write_csv(out, header: Sequence[str], rows: Iterable[Sequence], meta: dict) -> None:
    out.write(",".join(header) + "\n")
    for r in rows:
        out.write(",".join(v if isinstance(v, str) else fmt(v) for v in r) + "\n")
    out.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + f" version={__version__}\n")


def write_json(out, doc: dict) -> None:
    out.write(json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n")


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise QInfoError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def ordered_map(fn: Callable, items: Sequence) -> list:
    """``map`` over a thread pool of ``QINFO_THREADS`` workers; results keep input order."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def float_list(text: str) -> list[float]:
    """``"a,b,c"`` or ``"start:stop:num"`` (inclusive linspace)."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c or start:stop:num, got {text!r}") from None


def dimension(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer, got {text!r}") from None
    if d < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2, got {d}")
    return d


def at_least(lo: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return parse


def nonneg_float(text: str) -> float:
    v = float(text)
    if not np.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"must be a finite non-negative number, got {text!r}")
    return v


def cmd_distinguish(args, out) -> int:
    info = overlap_information(args.dim)
    row = [args.dim, info, distinguishable_count(args.dim)]
    header = ["dim", "I_bits", "N"]
    meta = {"command": "distinguish"}
    if args.mc_samples:
        mean, se = overlap_information_mc(args.dim, args.mc_samples, args.seed)
        row += [mean, se]
        header += ["I_mc", "I_mc_stderr"]
        meta.update(mc_samples=args.mc_samples, seed=args.seed)
    if args.format == "json":
        write_json(out, dict(zip(header, row)) | {"version": __version__})
    else:
        write_csv(out, header, [row], meta)
    return EXIT_OK


def cmd_epsilon(args, out) -> int:
    eps = epsilon_operator()
    rows = []
    for name, b in zip(BELL_NAMES, BELL_STATES):
        rows.append([name, float(np.real(b.conj() @ eps @ b))])
    rows.sort(key=lambda r: r[1])
    status = EXIT_OK
    meta = {"command": "epsilon", "min_eigenvalue": fmt(np.linalg.eigvalsh(eps).min())}
    if args.verify_quadrature:
        grid = BlochGrid(args.n_theta, args.n_phi)
        dev = float(np.max(np.abs(epsilon_by_quadrature(grid) - eps)))
        meta.update(n_theta=args.n_theta, n_phi=args.n_phi, quadrature_max_dev=fmt(dev))
        if dev > QUADRATURE_TOL:
            status = EXIT_TOLERANCE
        meta["quadrature"] = "pass" if status == EXIT_OK else "fail"
    write_csv(out, ["eigenvector", "eigenvalue"], rows, meta)
    return status


def cmd_lambda_scan(args, out) -> int:
    total = args.gamma1 + args.gamma2
    gts = np.linspace(0.0, args.gt_max, args.n_t)
    thetas = np.linspace(0.0, args.theta_max, args.n_theta)
    rho = np.eye(2) / 2
    LambdaParams(args.gamma1, args.gamma2, 0.0, 0.0)

    def row(gt):
        t = gt / total
        res = []
        for th in thetas:
            ic = coherent_information(lambda_channel(LambdaParams(args.gamma1, args.gamma2, th, t)), rho)
            res.append([gt, th, ic, max(ic, 0.0)])
        return res

    rows = [r for block in ordered_map(row, list(gts)) for r in block]
    meta = {"command": "lambda-scan", "gamma1": fmt(args.gamma1), "gamma2": fmt(args.gamma2),
            "n_t": args.n_t, "n_theta": args.n_theta}
    write_csv(out, ["gamma_t", "theta", "I_c", "I_c_clamped"], rows, meta)
    return EXIT_OK


def cmd_rate(args, out) -> int:
    kw = {"n_t": args.n_t, "n_theta": args.n_theta, "optimize_input": not args.fixed_input}
    if args.t is not None:
        kw["t_values"] = [args.t]
    if args.theta is not None:
        kw["theta_values"] = [args.theta]
    res = lambda_rate_optimum(args.gamma1, args.gamma2, **kw)
    doc = res.to_dict(include_trace=args.trace)
    doc["evaluations"] = len(res.trace)
    doc["version"] = __version__
    write_json(out, doc)
    return EXIT_OK


def cmd_compatible(args, out) -> int:
    family = pure_family if args.family == "pure" else mixed_family
    grid = BlochGrid(args.n_theta, args.n_phi)
    jobs = [(q, chi, vt) for q in args.q for chi in args.chi for vt in args.vartheta]

    def run(job):
        q, chi, vt = job
        rho = family(q)
        if chi == 0.0:
            return nonselected_information(rho, grid)
        return selected_information(rho, chi, vt, grid)

    values = ordered_map(run, jobs)
    rows = [[q, chi, vt, v, args.n_theta, args.n_phi] for (q, chi, vt), v in zip(jobs, values)]
    meta = {"command": "compatible", "family": args.family}
    write_csv(out, ["q", "chi", "vartheta", "I_bits", "n_theta", "n_phi"], rows, meta)
    return EXIT_OK


def cmd_experiment(args, out) -> int:
    scheme, doc = load_scheme(args.scheme)
    dist = experiment_distribution(scheme)
    result = {
        "information_bits": shannon_mutual(dist),
        "labels_a": [str(x) for x in dist.labels_a],
        "labels_b": [str(x) for x in dist.labels_b],
        "mass": dist.mass.tolist(),
        "total_mass": dist.total,
        "version": __version__,
    }
    budget = args.budget or doc.get("optimize", {}).get("budget")
    if args.optimize or budget:
        opt = optimize_controls(scheme, budget or 64)
        result["optimization"] = opt.to_dict(include_trace=args.trace)
        result["optimization"]["evaluations"] = len(opt.trace)
    write_json(out, result)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qinfo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("distinguish", help="overlap information I(D) and N = 2^I")
    s.add_argument("--dim", type=dimension, required=True)
    s.add_argument("--mc-samples", type=at_least(1), default=0, help="add a Monte Carlo estimate")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("epsilon", help="spectrum of the incompatibility operator")
    s.add_argument("--verify-quadrature", action="store_true")
    s.add_argument("--n-theta", type=at_least(8), default=32)
    s.add_argument("--n-phi", type=at_least(16), default=64)
    s.set_defaults(func=cmd_epsilon)

    s = sub.add_parser("lambda-scan", help="coherent information surface of the Lambda channel")
    s.add_argument("--gamma1", type=nonneg_float, default=1.0)
    s.add_argument("--gamma2", type=nonneg_float, default=1.0)
    s.add_argument("--n-t", type=at_least(1), default=41)
    s.add_argument("--n-theta", type=at_least(1), default=33)
    s.add_argument("--gt-max", type=nonneg_float, default=10.0, help="largest (gamma1+gamma2) t")
    s.add_argument("--theta-max", type=nonneg_float, default=float(np.pi))
    s.set_defaults(func=cmd_lambda_scan)

    s = sub.add_parser("rate", help="optimal coherent information rate of the Lambda channel")
    s.add_argument("--gamma1", type=nonneg_float, default=1.0)
    s.add_argument("--gamma2", type=nonneg_float, default=0.0)
    s.add_argument("--n-t", type=at_least(1), default=64)
    s.add_argument("--n-theta", type=at_least(1), default=64)
    s.add_argument("--t", type=nonneg_float, help="evaluate at this single time only")
    s.add_argument("--theta", type=nonneg_float, help="evaluate at this single pulse area only")
    s.add_argument("--fixed-input", action="store_true", help="skip the input-optimized variant")
    s.add_argument("--trace", action="store_true", help="include every evaluation")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("compatible", help="nonselected/selected information sweeps")
    s.add_argument("--family", choices=("pure", "mixed"), default="pure")
    s.add_argument("--q", type=float_list, default=[1.0])
    s.add_argument("--chi", type=float_list, default=[0.0])
    s.add_argument("--vartheta", type=float_list, default=[0.0])
    s.add_argument("--n-theta", type=at_least(8), default=32)
    s.add_argument("--n-phi", type=at_least(16), default=64)
    s.set_defaults(func=cmd_compatible)

    s = sub.add_parser("experiment", help="information of an extraction-channel-readout scheme")
    s.add_argument("scheme", help="scheme JSON file")
    s.add_argument("--optimize", action="store_true", help="optimize the declared controls")
    s.add_argument("--budget", type=at_least(9))
    s.add_argument("--trace", action="store_true", help="include every optimizer evaluation")
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    buf = io.StringIO()
    try:
        status = args.func(args, buf)
    except (QInfoError, ValueError, OSError) as e:
        print(f"qinfo: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.output:
        with open(args.output, "w", newline="") as f:
            f.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return status


if __name__ == "__main__":
    sys.exit(main())
