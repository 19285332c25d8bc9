"""Command-line entry point: ``mmes <subcommand> ...``.

Results go to stdout as JSON (JSON lines for the census). A run manifest
with the full parameter set, seed, version and wall time goes to stderr.
Exit status: 0 on success, 2 for a bad command line or invalid parameters,
3 when a size guard or the census limit is hit.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .codes import CodeConditionError, mmes_from_code, reed_solomon, singleton_mds_check
from .core import Bipartition, DimensionError, qudit_string, read_state, write_state
from .entanglement import GuardExceeded, delta, potential_me, purity
from .graphs import CensusLimitError, census
from .moments import exact_moment_fraction, moment_split, square_bracket
from .optimizer import OptimizerConfig, anneal, minimize_pime, purity_histogram, sigma7_state
from .statmech import EnsembleConfig, estimate_average_energy, estimate_moment


class UsageError(Exception):
    """Raised instead of argparse's own exit so errors stay machine readable."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positions(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated positions, got {text!r}") from None


def _digits(text: str) -> str:
    if not text or not all(c.isdigit() or c == "," for c in text):
        raise argparse.ArgumentTypeError(f"expected a digit string such as 0101, got {text!r}")
    return text


# ------------------------------------------------------------------ output

def _finite(obj):
    """Reject NaN/inf anywhere in the payload; numbers stay as they are."""
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError("non-finite value in output")
    if isinstance(obj, dict):
        for v in obj.values():
            _finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _finite(v)
    return obj


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(_finite(obj)) + "\n")


def _write_svg(path: str, hist) -> None:
    """Bare-bones bar chart of the purity histogram."""
    width, height, pad = 480, 240, 30
    counts = hist.counts
    top = max(int(counts.max()), 1)
    bar = (width - 2 * pad) / len(counts)
    rects = []
    for i, c in enumerate(counts):
        h = (height - 2 * pad) * c / top
        rects.append(f'<rect x="{pad + i * bar:.1f}" y="{height - pad - h:.1f}" '
                     f'width="{bar * 0.9:.1f}" height="{h:.1f}" fill="steelblue"/>')
    lo, hi = hist.edges[0], hist.edges[-1]
    labels = (f'<text x="{pad}" y="{height - 8}" font-size="11">{lo:.4f}</text>'
              f'<text x="{width - pad}" y="{height - 8}" font-size="11" text-anchor="end">{hi:.4f}</text>')
    Path(path).write_text(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
                          + "".join(rects) + labels + "</svg>\n")


def _histogram_outputs(state, args) -> dict:
    hist = purity_histogram(state)
    if args.histogram:
        hist.write_csv(args.histogram)
    if args.svg:
        _write_svg(args.svg, hist)
    return {"bimodal": hist.bimodal(), "min_purity": float(min(p for _, p in hist.entries)),
            "max_purity": float(max(p for _, p in hist.entries))}


# ------------------------------------------------------------ subcommands

def cmd_purity(args) -> dict:
    state = read_state(args.state)
    b = Bipartition(args.partition, state.n, state.d)
    return {"partition": b.label(), "purity": purity(state, b)}


def cmd_pime(args) -> dict:
    state = read_state(args.state)
    out = {"pime": potential_me(state)}
    if args.histogram or args.svg:
        out.update(_histogram_outputs(state, args))
    return out


def cmd_delta(args) -> dict:
    strings = [qudit_string(s, args.d) for s in (args.k, args.kp, args.l, args.lp)]
    if any(s.n != args.n for s in strings):
        raise DimensionError(f"all strings must have length n={args.n}")
    return {"delta": delta(*strings, n_a=args.nA)}


def cmd_sample(args) -> dict:
    cfg = EnsembleConfig(args.n, args.d, args.beta, args.samples, args.seed, args.threads)
    if args.moment is not None:
        if args.beta != 0.0:
            raise ValueError("--moment estimates the beta = 0 moments; drop --beta")
        est = estimate_moment(cfg, args.moment)
    else:
        est = estimate_average_energy(cfg)
    return est.as_dict()


def cmd_moments(args) -> dict:
    if args.mode == "mc":
        if args.seed is None:
            raise UsageError("moments --mode mc requires --seed")
        est = estimate_moment(EnsembleConfig(args.n, args.d, 0.0, args.samples, args.seed, args.threads), args.m)
        return {"m": args.m, "value": est.estimate, "stderr": est.stderr, "cactus": None,
                "noncactus": None, "ratio": None, "samples": est.samples, "seed": est.seed}
    split = moment_split(args.n, args.d, args.m)
    value = float(exact_moment_fraction(args.n, args.d, args.m)) if args.mode == "exact" else split.total
    return {"m": args.m, "value": value, "cactus": split.cactus, "noncactus": split.noncactus,
            "ratio": split.ratio}


def cmd_graphs(args) -> list[dict]:
    if args.eval and (args.n is None or args.d is None):
        raise UsageError("graphs census --eval needs --n and --d")
    rows = []
    for cls in census(args.m, workers=args.threads).classes:
        row = {"canonical": cls.canonical, "degeneracy": cls.degeneracy, "cactus": cls.cactus,
               "connected": cls.connected, "representative": cls.representative.bracket()}
        if args.eval:
            row["bracket"] = square_bracket(cls.representative, args.n, args.d)
        rows.append(row)
    return rows


def cmd_code(args) -> dict:
    code = reed_solomon(args.n, args.d, args.k)
    report = singleton_mds_check(code)
    out = {"n": code.n, "d": code.d, "k": args.k, "size": code.size, "distance": report.distance,
           "singleton_bound": report.bound, "mds": report.is_mds}
    if args.emit_state:
        state = mmes_from_code(code)
        write_state(state, args.emit_state)
        out["pime"] = potential_me(state)
        out["state_file"] = args.emit_state
    return out


def cmd_optimize(args) -> dict:
    cfg = OptimizerConfig(n=args.n, d=args.d, restarts=args.restarts, seed=args.seed,
                          max_iter=args.max_iter, workers=args.threads, beta_max=args.beta_max)
    result = anneal(cfg) if args.anneal else minimize_pime(cfg)
    return result.to_json()


def cmd_sigma7(args) -> dict:
    state = sigma7_state()
    out = {"pime": potential_me(state), "norm_deviation": state.norm_deviation}
    out.update(_histogram_outputs(state, args))
    return out


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker count (results do not depend on it)")

    p = _Parser(prog="mmes", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"mmes {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("purity", parents=[common], help="purity of one bipartition")
    s.add_argument("--state", required=True, help="state JSON file")
    s.add_argument("--partition", required=True, type=_positions, help="1-based positions of A, e.g. 1,3")
    s.set_defaults(func=cmd_purity)

    s = sub.add_parser("pime", parents=[common], help="potential of multipartite entanglement")
    s.add_argument("--state", required=True, help="state JSON file")
    s.add_argument("--histogram", help="write per-bipartition purities as CSV")
    s.add_argument("--svg", help="write the purity histogram as SVG")
    s.set_defaults(func=cmd_pime)

    s = sub.add_parser("delta", parents=[common], help="coupling function value")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--nA", type=int, default=None, help="size of A (default n//2)")
    for name in ("k", "kp", "l", "lp"):
        s.add_argument(f"--{name}", type=_digits, required=True, help="digit string")
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo over Haar states")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--moment", type=int, default=None, help="estimate <H^M> at beta = 0 instead of <H>_beta")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("moments", parents=[common], help="Haar moments <H^m>")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--mode", choices=("exact", "mc", "split"), default="exact")
    s.add_argument("--samples", type=int, default=100_000, help="mc mode only")
    s.add_argument("--seed", type=int, default=None, help="required for mc mode")
    s.set_defaults(func=cmd_moments)

    g = sub.add_parser("graphs", help="Feynman graph tools")
    gsub = g.add_subparsers(dest="graphs_command", metavar="ACTION", parser_class=_Parser, required=True)
    s = gsub.add_parser("census", parents=[common], help="isomorphism classes of slot permutations")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--eval", action="store_true", help="also evaluate each class bracket")
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.set_defaults(func=cmd_graphs)

    c = sub.add_parser("code", help="code-based states")
    csub = c.add_subparsers(dest="code_command", metavar="ACTION", parser_class=_Parser, required=True)
    s = csub.add_parser("rs", parents=[common], help="Reed-Solomon code over a prime field")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--emit-state", dest="emit_state", help="write the codeword superposition as a state file")
    s.set_defaults(func=cmd_code)

    s = sub.add_parser("optimize", parents=[common], help="minimize pi_ME from random restarts")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-iter", dest="max_iter", type=int, default=4000)
    s.add_argument("--anneal", action="store_true", help="Metropolis annealing before the descent")
    s.add_argument("--beta-max", dest="beta_max", type=float, default=400.0)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("sigma7", parents=[common], help="the tabulated seven-qubit state")
    s.add_argument("--histogram", help="write per-bipartition purities as CSV")
    s.add_argument("--svg", help="write the purity histogram as SVG")
    s.set_defaults(func=cmd_sigma7)
    return p


def _command_name(args) -> str:
    parts = [args.command]
    for extra in ("graphs_command", "code_command"):
        if getattr(args, extra, None):
            parts.append(getattr(args, extra))
    return " ".join(parts)


def _fail(kind: str, exc: BaseException, status: int) -> int:
    _emit({"error": kind, "message": str(exc), "status": status})
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    if args.command is None:
        return _fail("usage", UsageError("missing subcommand"), 2)
    if getattr(args, "threads", 1) < 1:
        return _fail("usage", UsageError("--threads must be >= 1"), 2)

    start = time.perf_counter()
    try:
        result = args.func(args)
    except (GuardExceeded, CensusLimitError) as exc:
        return _fail("guard", exc, 3)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except (ValueError, DimensionError, CodeConditionError, OSError, KeyError, json.JSONDecodeError) as exc:
        return _fail("invalid", exc, 2)
    if isinstance(result, list):
        for row in result:
            _emit(row)
    else:
        _emit(result)

    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    manifest = {
        "subcommand": _command_name(args),
        "params": params,
        "seed": params.get("seed"),
        "version": __version__,
        "duration_s": time.perf_counter() - start,
    }
    sys.stderr.write(json.dumps({"manifest": manifest}, default=str) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
