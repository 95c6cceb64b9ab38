"""Command line front end.

    cyclodet verify sun1 --n 5 --method brute
    cyclodet verify sun2 --n-range 3..21:2 --method spectrum --json
    cyclodet verify theorem3 --symbol abc:1,1,2 --n 7
    cyclodet spectrum --symbol sun2 --n 7

Exit status: 0 when every report verified, 1 on any mismatch, 2 on usage or
precondition errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .circulant import dft_eigenvalues, parse_symbol
from .errors import PreconditionError
from .identities import (
    DEFAULT_BRUTE_LIMIT,
    verify_c_s_eigenvalue,
    verify_eei_report,
    verify_lemma1,
    verify_scaling,
    verify_sun1,
    verify_sun2,
    verify_theorem3,
)

IDENTITIES = ("sun1", "sun2", "theorem3", "lemma1", "scaling", "eei", "spectrum")
METHOD_NAMES = {"brute": "brute", "det": "det", "spectrum": "spectrum", "minor": "minor_thm"}

_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)(?::(\d+))?$")


class UsageError(Exception):
    pass


def parse_n_range(text: str) -> list[int]:
    """``A..B`` or ``A..B:STEP``, both ends inclusive."""
    m = _RANGE.match(text.strip())
    if m is None:
        raise UsageError(f"malformed n range {text!r}; expected A..B or A..B:STEP")
    a, b = int(m.group(1)), int(m.group(2))
    step = int(m.group(3)) if m.group(3) else 1
    if step < 1 or b < a:
        raise UsageError(f"empty n range {text!r}")
    return list(range(a, b + 1, step))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclodet", description="Exact checks of derangement determinant identities over Q(zeta_n).")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("identity", choices=IDENTITIES)
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int)
    group.add_argument("--n-range", dest="n_range")
    v.add_argument("--method", choices=sorted(METHOD_NAMES))
    v.add_argument("--symbol")
    v.add_argument("--i", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--json", action="store_true")
    v.add_argument("--brute-limit", type=int, default=DEFAULT_BRUTE_LIMIT)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--golden", type=Path, help="compare JSON output byte-wise with this file")
    v.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0")

    s = sub.add_parser("spectrum", help="print the exact DFT eigenvalues of a symbol")
    s.add_argument("--symbol", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--json", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# task planning; every task is a picklable tuple run by _run_task
# ---------------------------------------------------------------------------

def _require_odd(n: int) -> None:
    if n <= 1 or n % 2 == 0:
        raise PreconditionError("n must be odd and > 1")


def _plan(args) -> list[tuple]:
    ident = args.identity
    ns = [args.n] if args.n is not None else parse_n_range(args.n_range)
    if args.method is not None and ident not in ("sun1", "sun2"):
        raise UsageError(f"--method does not apply to verify {ident}")
    if args.symbol is not None and ident not in ("theorem3", "eei"):
        raise UsageError(f"--symbol does not apply to verify {ident}")
    if (args.i is not None or args.j is not None) and ident != "eei":
        raise UsageError("--i/--j only apply to verify eei")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    tasks = []
    for n in ns:
        if ident in ("sun1", "sun2"):
            _require_odd(n)
            method = METHOD_NAMES[args.method or "det"]
            if method == "brute" and n > args.brute_limit:
                raise PreconditionError(f"n = {n} exceeds the brute limit {args.brute_limit}; pass --brute-limit to override")
            tasks.append((ident, n, method, args.brute_limit))
        elif ident in ("scaling", "spectrum"):
            _require_odd(n)
            tasks.append((ident, n))
        elif ident == "lemma1":
            if n < 2:
                raise PreconditionError("n must be >= 2")
            tasks.append((ident, n))
        else:
            if args.symbol is None:
                raise UsageError(f"verify {ident} needs --symbol")
            sym = parse_symbol(args.symbol, n)
            if ident == "theorem3":
                tasks.append((ident, sym))
            else:
                i_values = [args.i] if args.i is not None else range(n)
                j_values = [args.j] if args.j is not None else range(1, n + 1)
                for i in i_values:
                    if not 0 <= i < n:
                        raise PreconditionError(f"--i must lie in 0..{n - 1}")
                for j in j_values:
                    if not 1 <= j <= n:
                        raise PreconditionError(f"--j must lie in 1..{n}")
                tasks.extend(("eei", sym, i, j) for i in i_values for j in j_values)
    return tasks


def _run_task(task, workers: int = 1):
    kind = task[0]
    if kind == "sun1":
        return [verify_sun1(task[1], task[2], brute_limit=task[3], workers=workers)]
    if kind == "sun2":
        return [verify_sun2(task[1], task[2], brute_limit=task[3], workers=workers)]
    if kind == "scaling":
        return [verify_scaling(task[1])]
    if kind == "spectrum":
        return [verify_c_s_eigenvalue(task[1])]
    if kind == "lemma1":
        return [verify_lemma1(task[1])]
    if kind == "theorem3":
        return verify_theorem3(task[1])
    return [verify_eei_report(task[1], task[2], task[3])]


def _execute(tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_run_task, tasks))
    else:
        # a single task may still use the workers itself (brute force)
        batches = [_run_task(t, workers) for t in tasks]
    reports = [r for batch in batches for r in batch]
    reports.sort(key=lambda r: r.sort_key())
    return reports


def _format_line(r, timing: bool) -> str:
    status = "verified" if r.verified else "MISMATCH"
    line = f"{r.identity} n={r.n} method={r.method}: lhs = {r.lhs}, rhs = {r.rhs}, {status}"
    if r.details:
        line += f" [{r.details}]"
    if timing:
        line += f" ({r.elapsed * 1000:.0f} ms)"
    return line


def _cmd_verify(args, out) -> int:
    reports = _execute(_plan(args), args.workers)
    timing = not (args.no_timing or args.golden)
    if args.json or args.golden:
        text = json.dumps([r.to_json(timing) for r in reports], indent=2) + "\n"
        out.write(text)
        if args.golden is not None:
            if args.golden.read_bytes() != text.encode():
                print(f"output differs from golden file {args.golden}", file=sys.stderr)
                return 1
    else:
        for r in reports:
            out.write(_format_line(r, timing) + "\n")
    return 0 if all(r.verified for r in reports) else 1


def _cmd_spectrum(args, out) -> int:
    sym = parse_symbol(args.symbol, args.n)
    res = dft_eigenvalues(sym)
    if args.json:
        out.write(json.dumps({
            "symbol": args.symbol,
            "n": args.n,
            "lambdas": [str(x) for x in res.lambdas],
            "zero_indices": list(res.zero_indices),
        }, indent=2) + "\n")
    else:
        for i, lam in enumerate(res.lambdas):
            out.write(f"lambda_{i} = {lam}\n")
        out.write(f"zero_indices = {list(res.zero_indices)}\n")
    return 0


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "spectrum":
            return _cmd_spectrum(args, out)
        return _cmd_verify(args, out)
    except (UsageError, PreconditionError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
