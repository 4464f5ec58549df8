"""Command-line entry point ``svw``.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error.
Everything written to stdout is deterministic; timings go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import symbols as sy
from . import suites, wgen
from .brst import Complex
from .exprio import IndexRangeError, ParseError, lambda_to_text, parse, to_text, wset_to_json
from .liesuper import FORM_MODES

DEFAULT_FORM = "supertrace"


class UsageError(Exception):
    pass


def _positive_n(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid n: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("n must be a positive integer")
    return n


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive_n, default=1, help="rank: the algebra is gl(n+1|n)")
    common.add_argument("--form-mode", choices=FORM_MODES, default=DEFAULT_FORM,
                        help="invariant form: plain supertrace or the (e|f)=1 rescaling")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_nonneg, default=50)
    common.add_argument("--workers", type=_nonneg, default=1,
                        help="processes for chain evaluation (0 = one per CPU, capped at 8)")

    p = argparse.ArgumentParser(prog="svw", description="Supersymmetric W-algebra toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True)
    g = sub.add_parser("gens", parents=[common], help="print W_0 ... W_{2n+1}")
    g.add_argument("--check", action="store_true", help="also verify closedness and structure")
    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", default="all", help="axioms, brst, walgebra or all")
    b = sub.add_parser("bracket", parents=[common], help="Lambda-bracket of two expressions")
    b.add_argument("--left", required=True)
    b.add_argument("--right", required=True)
    q = sub.add_parser("q", parents=[common], help="apply the differential Q")
    q.add_argument("--expr", required=True)
    sub.add_parser("miura", parents=[common], help="compare the Miura image with the factorized product")
    return p


def _workers(args) -> int:
    return wgen.default_workers() if args.workers == 0 else args.workers


def _parse_in(C: Complex, text: str):
    """Parse into the minus sector when J appears, into the full complex otherwise."""
    X = parse(text, n=C.n)
    fams = {sy.family(g) for (w, _) in X.terms for g in w}
    if sy.J in fams:
        if fams & {sy.CUR, sy.PHID}:
            raise UsageError("J cannot be mixed with Cur or PhiD in one expression")
        M = C.minus
        return parse(text, n=C.n, engine=M.engine), M
    return parse(text, n=C.n, engine=C.engine), C


def cmd_gens(args, out) -> int:
    C = Complex(args.n, args.form_mode)
    M = C.minus
    W = wgen.extract_W(M, _workers(args))
    if args.format == "json":
        out.write(wset_to_json(args.n, W, M.jgens) + "\n")
    else:
        for p, X in enumerate(W):
            out.write(f"W_{p} = {to_text(X)}\n")
    if not args.check:
        return 0
    log = sys.stderr if args.format == "json" else out
    ok = True
    for rep in (wgen.check_closed(M, W), wgen.leading_terms(args.n, W), wgen.check_weights(args.n, W)):
        for line in rep.lines:
            log.write(line + "\n")
        ok = ok and rep.ok
    return 0 if ok else 1


def cmd_verify(args, out) -> int:
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    C = Complex(args.n, args.form_mode)
    items = suites.run(C, args.suite, args.seed, args.trials, _workers(args))
    width = max(len(it.name) for it in items)
    for it in items:
        line = f"{it.name:<{width}}  {'PASS' if it.ok else 'FAIL'}"
        if not it.ok and it.detail:
            line += f"  {it.detail}"
        out.write(line + "\n")
        sys.stderr.write(f"{it.name:<{width}}  {it.seconds:.3f}s\n")
    failed = sum(1 for it in items if not it.ok)
    out.write(f"{len(items) - failed}/{len(items)} passed\n")
    return 1 if failed else 0


def cmd_bracket(args, out) -> int:
    C = Complex(args.n, args.form_mode)
    L, home = _parse_in(C, args.left)
    R, home2 = _parse_in(C, args.right)
    if home is not home2:
        if home is C:
            L = home2.pull_back(L) if L else L
        else:
            R = home.pull_back(R) if R else R
        home = home if home is not C else home2
    out.write(lambda_to_text(home.engine.bracket(L, R)) + "\n")
    return 0


def cmd_q(args, out) -> int:
    C = Complex(args.n, args.form_mode)
    X, home = _parse_in(C, args.expr)
    out.write(to_text(home.Q(X)) + "\n")
    return 0


def cmd_miura(args, out) -> int:
    C = Complex(args.n, args.form_mode)
    M = C.minus
    W = wgen.extract_W(M, _workers(args))
    rep = wgen.miura_check(M, W)
    for line in rep.lines:
        out.write(line.replace("PASS", "MATCH").replace("FAIL", "MISMATCH") + "\n")
    top = 2 * args.n + 1
    out.write(f"p=0..{top}: {'MATCH' if rep.ok else 'MISMATCH'}\n")
    return 0 if rep.ok else 1


COMMANDS = {"gens": cmd_gens, "verify": cmd_verify, "bracket": cmd_bracket, "q": cmd_q,
            "miura": cmd_miura}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return COMMANDS[args.cmd](args, out)
    except (ParseError, IndexRangeError, UsageError) as e:
        sys.stderr.write(f"svw: error: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"svw: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
