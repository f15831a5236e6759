"""Command-line interface.

Exit codes: 0 success, 1 a check failed or methods disagree, 2 usage or
malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import duality as du
from . import operators as op
from . import tfa
from .groups import GroupSpec, phase_space
from .signals import Signal, lp_norm, random_signal, signal_from_json, signal_to_json
from .verify import SUITES, run_suite


class UsageError(Exception):
    """Bad flags or malformed input; mapped to exit code 2."""


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _read_signal(path: str) -> Signal:
    try:
        return signal_from_json(_read_json(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write_json(path: str, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _group_json(G: GroupSpec) -> dict:
    return {"factors": list(G.factors), "weight": str(G.weight)}


def _group_from_json(d: dict) -> GroupSpec:
    return GroupSpec(tuple(d["factors"]), Fraction(str(d.get("weight", "1"))))


def _matrix_json(M: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


# commands ---------------------------------------------------------------
def cmd_norm(args: argparse.Namespace) -> int:
    f, g = _read_signal(args.signal), _read_signal(args.window)
    if f.group != g.group:
        raise UsageError("signal and window live on different groups")
    if g.is_zero():
        raise UsageError("the window must be non-zero")
    methods = tfa.METHODS if args.method == "all" else (args.method,)
    values = {}
    for m in methods:
        rep = tfa.s0_norm(f, g, m)
        values[rep.method] = rep.value
        print(f"{rep.method}: {rep.value:.15g}")
    if len(values) > 1:
        vs = list(values.values())
        scale = max(max(abs(v) for v in vs), 1e-300)
        disc = max(abs(a - b) for a in vs for b in vs) / scale
        print(f"max relative discrepancy: {disc:.3e}")
        if disc > args.tol:
            print("methods disagree beyond tolerance", file=sys.stderr)
            return 1
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        G = GroupSpec.parse(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    report = run_suite(args.suite, G, args.trials, args.seed, args.tol)
    width = max((len(c.name) for c in report.checks), default=0)
    for c in report.checks:
        print(f"{c.status.upper():4}  {c.name:<{width}}  err={c.max_abs_err:.3e} tol={c.tolerance:.3e}")
    n_fail = sum(c.status == "fail" for c in report.checks)
    n_skip = sum(c.status == "skip" for c in report.checks)
    print(f"{len(report.checks)} checks, {n_fail} failed, {n_skip} skipped, {report.wall_time:.2f} s")
    if args.json:
        _write_json(args.json, report.as_dict())
    return 0 if report.passed else 1


def cmd_stft(args: argparse.Namespace) -> int:
    f, g = _read_signal(args.signal), _read_signal(args.window)
    if f.group != g.group:
        raise UsageError("signal and window live on different groups")
    V = tfa.stft(f, g)
    _write_json(args.out, signal_to_json(V))
    print(f"wrote {V.group.order}-point plane to {args.out}")
    return 0


def cmd_gabor(args: argparse.Namespace) -> int:
    g = _read_signal(args.window)
    if g.is_zero():
        raise UsageError("the window must be non-zero")
    G = g.group
    try:
        lat = op.parse_lattice(G, args.lattice)
        P = phase_space(G)
        weight = Fraction(args.lattice_weight) if args.lattice_weight else P.weight * Fraction(P.order, lat.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    system = op.GaborSystem(g, lat, weight)
    A, B = op.frame_bounds(system)
    out: dict = {
        "lattice": args.lattice,
        "lattice_order": lat.order,
        "lattice_weight": str(weight),
        "frame_bounds": [A, B],
    }
    print(f"frame bounds: A = {A:.15g}, B = {B:.15g}")
    try:
        dual = op.dual_window(system)
    except op.FrameError as exc:
        out.update(is_frame=False, dual_window=None, reconstruction_error=None)
        print(str(exc), file=sys.stderr)
        if args.out:
            _write_json(args.out, out)
        return 1
    f = random_signal(G, np.random.default_rng(args.seed))
    err = float(np.abs(op.gabor_reconstruct(system, f, dual).values - f.values).max() / max(lp_norm(f, 2), 1e-300))
    out.update(is_frame=True, dual_window=signal_to_json(dual), reconstruction_error=err)
    print(f"reconstruction error: {err:.3e}")
    if args.out:
        _write_json(args.out, out)
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    data = _read_json(args.input)
    try:
        if "matrix" in data:
            dom, cod = _group_from_json(data["domain"]), _group_from_json(data["codomain"])
            M = np.array([[complex(re, im) for re, im in row] for row in data["matrix"]])
            T = op.Operator(dom, cod, M)
            K = du.operator_to_kernel(T)
            back = du.kernel_to_operator(K).matrix
            err = float(np.abs(back - T.matrix).max(initial=0.0))
            result = du.functional_to_json(K.functional)
            result["split"] = dom.rank
            result["weights"] = [str(dom.weight), str(cod.weight)]
        else:
            split = data.get("split", args.split)
            if split is None:
                raise UsageError("kernel input needs a split (field 'split' or --split)")
            sigma = du.functional_from_json(data)
            Pg = sigma.group
            if not 0 < split < Pg.rank:
                raise UsageError(f"split must lie strictly between 0 and {Pg.rank}")
            G1, G2 = _split_group(Pg, int(split), data)
            K = du.KernelFunctional(G1, G2, sigma)
            T = du.kernel_to_operator(K)
            err = float(np.abs(du.operator_to_kernel(T).matrix - K.matrix).max(initial=0.0))
            result = {"domain": _group_json(T.domain), "codomain": _group_json(T.codomain), "matrix": _matrix_json(T.matrix)}
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed kernel/operator input: {exc}") from exc
    result["round_trip_error"] = err
    print(f"round-trip error: {err:.3e}")
    if args.out:
        _write_json(args.out, result)
    return 0


def _split_group(P: GroupSpec, split: int, data: dict) -> tuple[GroupSpec, GroupSpec]:
    """Factor groups of a kernel; ``weights`` may give ``[w1, w2]``, else ``w1 = 1``."""
    f1, f2 = P.factors[:split], P.factors[split:]
    if "weights" in data:
        w1, w2 = (Fraction(str(w)) for w in data["weights"])
        if w1 * w2 != P.weight:
            raise UsageError("weights do not multiply to the product weight")
    else:
        w1, w2 = Fraction(1), P.weight
    return GroupSpec(f1, w1), GroupSpec(f2, w2)


# parser -----------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feichtinger", description="S0 calculus on finite abelian groups")
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("norm", help="S0 norm of a signal")
    n.add_argument("signal")
    n.add_argument("window")
    n.add_argument("--method", choices=["stft", "conv", "fourier-algebra", "all"], default="stft")
    n.add_argument("--tol", type=float, default=1e-9)
    n.set_defaults(func=cmd_norm)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    v.add_argument("--group", required=True)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stft", help="write the STFT plane")
    s.add_argument("signal")
    s.add_argument("window")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_stft)

    g = sub.add_parser("gabor", help="frame bounds and dual window")
    g.add_argument("window")
    g.add_argument("--lattice", default="2,2", help="'a,b' steps or 'full'")
    g.add_argument("--lattice-weight", help="rational weight of the lattice measure")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gabor)

    k = sub.add_parser("kernel", help="convert kernel <-> operator")
    k.add_argument("input")
    k.add_argument("--split", type=int, help="number of factors belonging to G1")
    k.add_argument("--out")
    k.set_defaults(func=cmd_kernel)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
