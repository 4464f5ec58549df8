"""Invariant suites shared by the CLI and the test-suite.

Each check returns a :class:`Item`; a suite is a list of them. Suites are
deterministic given the seed.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List

from . import symbols as sy
from . import wgen
from .brst import Complex, identity_suite
from .engine import Engine
from .expression import Expression
from .lca import LambdaPoly

SUITES = ("axioms", "brst", "walgebra", "all")


@dataclass
class Item:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def _timed(name: str, fn: Callable[[], tuple]) -> Item:
    t = time.perf_counter()
    ok, detail = fn()
    return Item(name, bool(ok), time.perf_counter() - t, detail)


# -- random data ------------------------------------------------------------------

def random_word(rng: random.Random, gens: List[int], max_len: int = 3, max_d: int = 2) -> tuple:
    L = rng.randint(1, max_len)
    return tuple(sy.derive(rng.choice(gens), rng.randint(0, max_d)) for _ in range(L))


def random_monomial(eng: Engine, rng: random.Random, gens: List[int], max_len: int = 3,
                    max_d: int = 2) -> Expression:
    """Canonical form of a random product of generators (may be zero)."""
    return eng.canonicalize(("NO",) + random_word(rng, gens, max_len, max_d) + (Expression.vacuum(),))


def random_tree(rng: random.Random, gens: List[int], depth: int = 0):
    r = rng.random()
    if depth > 1 or r < 0.4:
        return sy.derive(rng.choice(gens), rng.randint(0, 1))
    if r < 0.5:
        return ("S", random_tree(rng, gens, depth + 1))
    if r < 0.85:
        return ("NO",) + tuple(random_tree(rng, gens, depth + 1) for _ in range(rng.randint(2, 3)))
    return ("+", random_tree(rng, gens, depth + 1),
            ("*", rng.choice([-2, 1, 3]), random_tree(rng, gens, depth + 1)))


# -- axioms -----------------------------------------------------------------------

def check_skew_involution(eng: Engine) -> tuple:
    for (g, h), P in eng.table.items():
        lp = LambdaPoly(P)
        back = eng.skew(eng.skew(lp, sy.parity(g), sy.parity(h)), sy.parity(h), sy.parity(g))
        if back != lp:
            return False, f"{sy.name(g)}, {sy.name(h)}"
    return True, ""


def check_table_grading(eng: Engine) -> tuple:
    """Parity and weight of every (j0|j1) coefficient in the table."""
    for (g, h), P in eng.table.items():
        for (j0, j1), t in P.items():
            X = Expression(t)
            par = (sy.parity(g) + sy.parity(h) + 1 + j1) & 1
            w = sy.weight(g) + sy.weight(h) - j0 - Fraction(j1, 2) - Fraction(1, 2)
            if X.parity != par or X.weight() != w:
                return False, f"{sy.name(g)}, {sy.name(h)} at ({j0}|{j1})"
    return True, ""


def check_jacobi_generators(eng: Engine, gens: List[int]) -> tuple:
    for a, b, c in itertools.product(gens, repeat=3):
        if eng.jacobi_defect((a,), (b,), (c,)):
            return False, f"{sy.name(a)}, {sy.name(b)}, {sy.name(c)}"
    return True, f"{len(gens) ** 3} triples"


def check_jacobi_words(eng: Engine, gens: List[int], rng: random.Random, trials: int) -> tuple:
    for _ in range(trials):
        ws = [random_monomial(eng, rng, gens, 2, 1) for _ in range(3)]
        if any(not w for w in ws):
            continue
        words = [max(w.words()) for w in ws]
        if eng.jacobi_defect(*words):
            return False, str([[sy.name(g) for g in w] for w in words])
    return True, ""


def wick_rhs(eng: Engine, a: Expression, b: Expression, c: Expression) -> LambdaPoly:
    """sum_k lambda^k/k! [a_L b]_(k-1|1) c + (-1)^{(p(a)+1)p(b)} :b [a_L c]:, term by term."""
    out = LambdaPoly()
    for key, coef in eng.bracket(a, b).coeffs.items():
        X = Expression(coef)
        out = out + LambdaPoly({key: eng.nomul(X, c).terms})
        for (m0, m1) in eng.bracket(X, c).coeffs:
            if m1:
                kk = m0 + 1
                prod = eng.nth_product(X, m0, 1, c) * Fraction(1, factorial(kk))
                out = out + LambdaPoly({(key[0] + kk, key[1]): prod.terms})
    s = -1 if ((a.parity + 1) * b.parity) & 1 else 1
    for (j0, j1), coef in eng.bracket(a, c).coeffs.items():
        sign = s * (-1 if (b.parity * j1) & 1 else 1)
        out = out + LambdaPoly({(j0, j1): eng.nomul(b, Expression(coef)).terms}) * sign
    return out


def check_wick(eng: Engine, gens: List[int], rng: random.Random, trials: int) -> tuple:
    for _ in range(trials):
        a, b, c = (Expression.gen(sy.derive(rng.choice(gens), rng.randint(0, 1))) for _ in range(3))
        lhs = eng.bracket(a, eng.nomul(b, c))
        if lhs != wick_rhs(eng, a, b, c):
            return False, f"{a!r}, {b!r}, {c!r}"
    return True, ""


def check_quasi_commutativity(eng: Engine, gens: List[int]) -> tuple:
    for a, b in itertools.product(gens, repeat=2):
        A, B = Expression.gen(a), Expression.gen(b)
        p = -1 if (sy.parity(a) * sy.parity(b)) & 1 else 1
        lhs = eng.canonicalize(("NO", a, b)) - eng.canonicalize(("NO", b, a)) * p
        rhs = Expression()
        for (j0, j1) in eng.bracket(B, A).coeffs:
            if j1:
                jj = j0 + 1
                t = eng.nth_product(B, j0, 1, A)
                for _ in range(jj):
                    t = eng.t_derive(t)
                rhs = rhs + t * Fraction(p * (-1) ** jj, factorial(jj))
        if lhs != rhs:
            return False, f"{sy.name(a)}, {sy.name(b)}"
    return True, f"{len(gens) ** 2} pairs"


def check_confluence(eng: Engine, gens: List[int], seed: int, trials: int) -> tuple:
    for s in range(trials):
        tree = random_tree(random.Random(f"{seed}/{s}"), gens)
        ref = eng.canonicalize(tree)
        for sched in (1, 2):
            got = eng.canonicalize(tree, random.Random(f"{seed}/{s}/{sched}"))
            if got != ref:
                return False, f"tree #{s}"
    return True, f"{trials} trees"


def axioms_suite(C: Complex, seed: int, trials: int) -> List[Item]:
    eng, gens = C.engine, C.generators()
    rng = random.Random(seed)
    items = [
        _timed("skew-symmetry involution on the table", lambda: check_skew_involution(eng)),
        _timed("table parity and weight bookkeeping", lambda: check_table_grading(eng)),
        _timed("quasi-commutativity on generator pairs", lambda: check_quasi_commutativity(eng, gens)),
        _timed("Wick formula on random triples", lambda: check_wick(eng, gens, rng, trials)),
        _timed("confluence of random rewrite schedules", lambda: check_confluence(eng, gens, seed, 200)),
        _timed("Jacobi identity on random word triples", lambda: check_jacobi_words(eng, gens, rng, trials)),
    ]
    if C.n == 1:
        items.append(_timed("Jacobi identity on all generator triples",
                            lambda: check_jacobi_generators(eng, gens)))
    return items


# -- brst -------------------------------------------------------------------------

def check_q_squared_generators(C: Complex) -> tuple:
    for g in C.generators():
        if C.Q(C.Q(Expression.gen(g))):
            return False, sy.name(g)
    return True, f"{len(C.generators())} generators"


def check_q_random(C: Complex, seed: int, trials: int) -> tuple:
    """Q^2 = 0, SQ = -QS, weight preservation and agreement with d_(0|0) on random monomials."""
    rng = random.Random(seed)
    gens = C.generators()
    eng = C.engine
    for _ in range(trials):
        X = random_monomial(eng, rng, gens, 3, 1)
        if not X:
            continue
        QX = C.Q(X)
        if C.Q(QX):
            return False, f"Q^2 {X!r}"
        if eng.s_derive(QX) != -C.Q(eng.s_derive(X)):
            return False, f"SQ {X!r}"
        if QX and QX.weight() != X.weight():
            return False, f"weight {X!r}"
        if len(X.words()[-1]) <= 2 and QX != C.Q_direct(X):
            return False, f"derivation rule {X!r}"
    return True, f"{trials} monomials"


def brst_suite(C: Complex, seed: int, trials: int) -> List[Item]:
    lines: List[str] = []

    def ident():
        ok = identity_suite(C, lambda label, good: None if good else lines.append(label))
        return ok, "; ".join(lines[:3])

    return [
        _timed("Q^2 = 0 on generators", lambda: check_q_squared_generators(C)),
        _timed("Q on random monomials", lambda: check_q_random(C, seed, trials)),
        _timed("closed-form bracket identities", ident),
    ]


# -- walgebra ---------------------------------------------------------------------

def walgebra_suite(C: Complex, workers: int = 1) -> List[Item]:
    M = C.minus
    box = {}

    def extract():
        box["W"] = wgen.extract_W(M, workers)
        X = wgen.cdet_apply_dummy(M)
        return wgen.attach_dummy(box["W"]) == X, ""

    def report(rep):
        return rep.ok, "; ".join(line for line in rep.lines if "FAIL" in line)[:400]

    items = [_timed("extraction of W_p", extract)]
    W = box["W"]
    items += [
        _timed("Q(W_p) = 0", lambda: report(wgen.check_closed(M, W))),
        _timed("weights of W_p", lambda: report(wgen.check_weights(C.n, W))),
        _timed("leading terms and filtration", lambda: report(wgen.leading_terms(C.n, W))),
        _timed("Miura factorization", lambda: report(wgen.miura_check(M, W))),
    ]
    if C.n == 1:
        G = wgen.golden_n1(M)
        items.append(_timed("gl(2|1) worked example", lambda: (all(W[p] == G[p] for p in range(4)), "")))
    return items


def run(C: Complex, suite: str, seed: int = 0, trials: int = 50, workers: int = 1) -> List[Item]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    items: List[Item] = []
    if suite in ("axioms", "all"):
        items += axioms_suite(C, seed, trials)
    if suite in ("brst", "all"):
        items += brst_suite(C, seed, trials)
    if suite in ("walgebra", "all"):
        items += walgebra_suite(C, workers)
    return items
