"""``svpattern`` command line.

Results go to stdout, diagnostics to stderr. Exit codes: the classify verdict
(0, 10, 11, 12), 1 when ``witness`` finds nothing, 2 for usage errors and 3
for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from collections import Counter
from typing import Any, Optional

import numpy as np

from . import __version__
from .classifier import Verdict, classify, enumerate_patterns, sample_verify, witness_dict
from .errors import CapExceeded, MatrixParseError, NonFiniteInput, PatternParseError, SvPatternError
from .linalg import DEFAULT_TOL, Tolerances, parse_matrix, singular_values
from .pattern import Pattern, parse_pattern
from .ssvp import ssvp_check
from .structure import bigraph_of, recognize_fiedler
from .termrank import max_matching, min_line_cover, term_rank

EXIT_OK = 0
EXIT_NO_WITNESS = 1
EXIT_USAGE = 2
EXIT_INPUT = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


# output ---------------------------------------------------------------------


def _clean(x: Any) -> Any:
    """Make values JSON-safe and stable: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isfinite(x):
            return 0.0 if x == 0 else x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _fmt_scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _render_text(d: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    for key, v in d.items():
        if isinstance(v, dict):
            out.append(f"{pad}{key}:")
            out.extend(_render_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], list):
            out.append(f"{pad}{key}:")
            for row in v:
                out.append(pad + "  " + " ".join(_fmt_scalar(x) for x in row))
        elif isinstance(v, list) and key == "notes":
            out.append(f"{pad}{key}:")
            out.extend(f"{pad}  - {x}" for x in v)
        elif isinstance(v, list):
            out.append((f"{pad}{key}: " + " ".join(_fmt_scalar(x) for x in v)).rstrip())
        else:
            out.append(f"{pad}{key}: {_fmt_scalar(v)}")
    return out


def emit(payload: dict, fmt: str) -> None:
    payload = _clean(payload)
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_render_text(payload)) + "\n")


# input ----------------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not UTF-8 text") from exc


def load_pattern(path: str) -> Pattern:
    try:
        return parse_pattern(_read(path))
    except PatternParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_matrix(path: str) -> np.ndarray:
    try:
        return parse_matrix(_read(path))
    except (MatrixParseError, NonFiniteInput) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _env_seed() -> int:
    raw = os.environ.get("SVPATTERN_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SVPATTERN_SEED must be an integer, got {raw!r}") from None


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(
            sv_cluster_tol=args.tol_sv if args.tol_sv is not None else DEFAULT_TOL.sv_cluster_tol,
            rank_tol=args.tol_rank if args.tol_rank is not None else DEFAULT_TOL.rank_tol,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# commands -------------------------------------------------------------------


def cmd_classify(args, tol: Tolerances) -> int:
    P = load_pattern(args.pattern)
    c = classify(P, tol, args.seed, args.max_iter)
    emit(c.to_dict(tol), args.format)
    return c.exit_code


def cmd_termrank(args, tol: Tolerances) -> int:
    P = load_pattern(args.pattern)
    M = max_matching(P)
    C = min_line_cover(P)
    emit(
        {
            "term_rank": term_rank(P),
            "matching": [f"{i + 1}-{j + 1}'" for i, j in sorted(M.edges)],
            "cover_rows": [i + 1 for i in sorted(C.rows)],
            "cover_cols": [j + 1 for j in sorted(C.cols)],
        },
        args.format,
    )
    return EXIT_OK


def cmd_fiedler(args, tol: Tolerances) -> int:
    P = load_pattern(args.pattern)
    transposed = P.m > P.n
    cert = recognize_fiedler(bigraph_of(P.T if transposed else P))
    emit(
        {
            "fiedler": cert is not None,
            "transposed": transposed,
            "certificate": None if cert is None else cert.to_dict(),
        },
        args.format,
    )
    return EXIT_OK


def cmd_ssvp(args, tol: Tolerances) -> int:
    A = load_matrix(args.matrix)
    emit(ssvp_check(A, tol).to_dict(), args.format)
    return EXIT_OK


def _clusters(s: np.ndarray, tol: Tolerances) -> list[tuple[float, int]]:
    scale = s[0] if s.size and s[0] > 0 else 1.0
    out: list[tuple[float, int]] = []
    for v in s:
        if out and abs(out[-1][0] - v) / scale <= tol.sv_cluster_tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((float(v), 1))
    return out


def cmd_svd(args, tol: Tolerances) -> int:
    A = load_matrix(args.matrix)
    s = singular_values(A)
    groups = _clusters(s, tol)
    # gaps inside a cluster are rounding noise and reported as 0
    if any(k > 1 for _, k in groups):
        gap = 0.0
    elif len(groups) > 1:
        gap = float(np.min(s[:-1] - s[1:]))
    else:
        gap = float("inf")
    emit(
        {
            "singular_values": [float(f"{v:.12g}") for v in s],
            "min_gap": gap,
            "multiplicities": [f"m({v:.12g})={k}" for v, k in groups],
        },
        args.format,
    )
    return EXIT_OK


def cmd_witness(args, tol: Tolerances) -> int:
    P = load_pattern(args.pattern)
    c = classify(P, tol, args.seed, args.max_iter)
    if c.witness is None:
        emit({"verdict": str(c.verdict), "witness": None, "notes": c.notes}, args.format)
        print("no witness found", file=sys.stderr)
        return EXIT_NO_WITNESS
    emit({"verdict": str(c.verdict), "witness": witness_dict(c.witness, P, tol), "notes": c.notes}, args.format)
    return EXIT_OK


def cmd_verify(args, tol: Tolerances) -> int:
    P = load_pattern(args.pattern)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    emit(sample_verify(P, args.trials, tol, args.seed).to_dict(), args.format)
    return EXIT_OK


def cmd_enumerate(args, tol: Tolerances) -> int:
    if args.rows < 1 or args.cols < 1:
        raise UsageError("--rows and --cols must be positive")
    pred = (lambda P: term_rank(P) == min(P.shape)) if args.full_term_rank else None
    try:
        patterns = enumerate_patterns(args.rows, args.cols, pred)
        counts: Counter = Counter()
        total = 0
        for P in patterns:
            counts[classify(P, tol, args.seed, args.max_iter).verdict] += 1
            total += 1
    except CapExceeded as exc:
        raise UsageError(str(exc)) from exc
    emit(
        {
            "rows": args.rows,
            "cols": args.cols,
            "full_term_rank_only": bool(args.full_term_rank),
            "total": total,
            "counts": {str(v): counts.get(v, 0) for v in Verdict},
        },
        args.format,
    )
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $SVPATTERN_SEED or 0)")
    common.add_argument("--tol-sv", type=float, default=None, help="relative singular value cluster tolerance")
    common.add_argument("--tol-rank", type=float, default=None, help="relative rank tolerance")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-iter", type=int, default=50, help="Newton iteration cap for witness lifting")

    parser = argparse.ArgumentParser(prog="svpattern", description="Singular value multiplicity for sign-free patterns.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_, arg=None):
        p = sub.add_parser(name, parents=[common], help=help_)
        if arg:
            p.add_argument(arg, help=f"{arg} file ('-' for stdin)")
        p.set_defaults(func=func)
        return p

    add("classify", cmd_classify, "decide whether a pattern forces distinct singular values", "pattern")
    add("termrank", cmd_termrank, "term-rank, a maximum matching and a minimum line cover", "pattern")
    add("fiedler", cmd_fiedler, "Fiedler graph certificate for the bigraph", "pattern")
    add("ssvp", cmd_ssvp, "test the strong singular value property", "matrix")
    add("svd", cmd_svd, "singular values, minimum gap and multiplicities", "matrix")
    add("witness", cmd_witness, "construct a matrix with a multiple singular value", "pattern")
    v = add("verify", cmd_verify, "random sampling check for multiple singular values", "pattern")
    v.add_argument("--trials", type=int, default=1000)
    e = add("enumerate", cmd_enumerate, "verdict census over all m x n patterns")
    e.add_argument("--rows", type=int, required=True)
    e.add_argument("--cols", type=int, required=True)
    e.add_argument("--full-term-rank", action="store_true")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = _env_seed()
        if args.max_iter < 1:
            raise UsageError("--max-iter must be at least 1")
        tol = _tolerances(args)
        return args.func(args, tol)
    except UsageError as exc:
        print(f"svpattern: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"svpattern: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SvPatternError as exc:
        print(f"svpattern: {exc}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == "__main__":
    sys.exit(main())
