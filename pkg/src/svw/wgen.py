"""W-algebra generators from the column determinant of the operator matrix.

Each entry ``A_{i,j}`` acts by ``X -> delta_ij k S(X) + (-1)^{i+1} :J_{i,j} X:``.
A chain of entries is applied right to left to a central even dummy ``x``;
since ``x`` brackets trivially with everything, the result is exactly
``sum_p :W_p (S^p x):`` in canonical form and the ``W_p`` are read off by
stripping the trailing dummy factor.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import symbols as sy
from .brst import Complex, MinusSector, jgen
from .expression import Expression, Terms, add_into, add_term

Entry = Tuple[int, int]
Chain = Tuple[Entry, ...]


def cdet_chains(n: int) -> List[Chain]:
    """Entry sequences A_{i1,i0+1} A_{i2,i1+1} ... A_{i_{N+1},i_N+1}, one per interior subset."""
    m = 2 * n + 1
    chains = []
    for r in range(0, m):
        for interior in itertools.combinations(range(1, m), r):
            pts = (0,) + interior + (m,)
            chains.append(tuple((pts[t + 1], pts[t] + 1) for t in range(len(pts) - 1)))
    return chains


def apply_entry(M: MinusSector, entry: Entry, X: Expression) -> Expression:
    i, j = entry
    out = M.engine.nomul(M.J(i, j), X) * (1 if i % 2 else -1)
    if i == j:
        out = out + M.engine.s_derive(X).kmul(1)
    return out


def apply_chain(M: MinusSector, chain: Sequence[Entry], X: Expression) -> Expression:
    for entry in reversed(chain):
        X = apply_entry(M, entry, X)
    return X


def split_dummy(X: Expression) -> Dict[int, Expression]:
    """Split sum_p :W_p (S^p x): into {p: W_p}."""
    parts: Dict[int, Terms] = {}
    for (w, kp), c in X.terms.items():
        if not w or sy.family(w[-1]) != sy.DUMMY or any(sy.family(g) == sy.DUMMY for g in w[:-1]):
            raise ValueError("expected exactly one trailing dummy factor per monomial")
        add_term(parts.setdefault(sy.order(w[-1]), {}), w[:-1], kp, c)
    return {p: Expression(t) for p, t in parts.items()}


def attach_dummy(W: Sequence[Expression]) -> Expression:
    """Inverse of :func:`split_dummy`: sum_p :W_p (S^p x):."""
    out: Terms = {}
    for p, X in enumerate(W):
        for (w, kp), c in X.terms.items():
            add_term(out, w + (sy.derive(sy.DUMMY_X, p),), kp, c)
    return Expression(out)


# -- parallel evaluation -----------------------------------------------------------

_WORKER: Dict[Tuple[int, str], MinusSector] = {}


def _worker_chain(args):
    n, mode, chain = args
    key = (n, mode)
    if key not in _WORKER:
        _WORKER[key] = Complex(n, mode).minus
    return apply_chain(_WORKER[key], chain, Expression.gen(sy.DUMMY_X)).terms


def cdet_apply_dummy(M: MinusSector, workers: int = 1) -> Expression:
    """cdet applied to the dummy, chains summed in a fixed order."""
    n, mode = M.C.n, M.C.pd.form_mode
    chains = cdet_chains(n)
    x = Expression.gen(sy.DUMMY_X)
    if workers <= 1:
        results = [apply_chain(M, ch, x).terms for ch in chains]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_worker_chain, [(n, mode, ch) for ch in chains]))
    total: Terms = {}
    for t in results:
        add_into(total, t)
    return Expression(total)


def extract_W(M: MinusSector, workers: int = 1) -> List[Expression]:
    """[W_0, ..., W_{2n+1}]."""
    parts = split_dummy(cdet_apply_dummy(M, workers))
    top = 2 * M.C.n + 1
    return [parts.get(p, Expression()) for p in range(top + 1)]


# -- checks ------------------------------------------------------------------------

@dataclass
class Report:
    ok: bool = True
    lines: List[str] = field(default_factory=list)

    def add(self, label: str, good: bool, detail: str = ""):
        self.ok = self.ok and good
        self.lines.append(f"{label}: {'PASS' if good else 'FAIL'}" + (f"  {detail}" if detail and not good else ""))


def check_closed(M: MinusSector, W: Sequence[Expression]) -> Report:
    rep = Report()
    for p, X in enumerate(W):
        q = M.Q(X)
        rep.add(f"Q(W_{p}) = 0", q.is_zero(), repr(q))
    return rep


def expected_linear(n: int, kk: int) -> Expression:
    """k^{2n-kk} sum_l (-1)^{kk l} J_{kk+l,l}."""
    out: Terms = {}
    for l in range(1, 2 * n + 2 - kk):
        add_term(out, (jgen(kk + l, l),), 2 * n - kk, Fraction(-1 if (kk * l) % 2 else 1))
    return Expression(out)


def linear_part(X: Expression) -> Expression:
    return X.filter(lambda w: len(w) == 1 and sy.family(w[0]) == sy.J and sy.order(w[0]) == 0)


def leading_terms(n: int, W: Sequence[Expression]) -> Report:
    rep = Report()
    for kk in range(0, 2 * n + 1):
        X = W[2 * n - kk]
        lin = linear_part(X)
        want = expected_linear(n, kk)
        rep.add(f"linear part of W_{2 * n - kk}", lin == want, f"got {lin!r}, want {want!r}")
        rest = X - lin
        offending = [w for w in rest.words()
                     if any(sy.family(g) != sy.J or not (0 <= sy.indices(g)[0] - sy.indices(g)[1] <= kk)
                            for g in w)]
        rep.add(f"depth of remainder of W_{2 * n - kk} <= {kk}", not offending,
                f"offending monomials: {offending[:5]}")
        if rest and lin:
            good = rest.filtration_degree() > lin.filtration_degree()
            rep.add(f"filtration of W_{2 * n - kk}", good)
    return rep


def check_weights(n: int, W: Sequence[Expression]) -> Report:
    rep = Report()
    for p, X in enumerate(W):
        want = Fraction(2 * n + 1 - p, 2)
        try:
            got = X.weight()
        except ValueError:
            got = None
        rep.add(f"weight(W_{p}) = {want}", got == want, f"got {got}")
    top = W[2 * n + 1]
    rep.add(f"W_{2 * n + 1} = k^{2 * n + 1}", top == Expression.vacuum(1, 2 * n + 1))
    return rep


def miura(X: Expression) -> Expression:
    """Drop monomials containing a strictly lower-triangular J or any non-J generator."""
    def keep(w):
        return all(sy.family(g) == sy.J and sy.indices(g)[0] == sy.indices(g)[1] for g in w)
    return X.filter(keep)


def miura_product(M: MinusSector) -> List[Expression]:
    """S^p coefficients of (kS + J_11)(kS - J_22)...(kS + J_{2n+1,2n+1})."""
    m = M.C.size
    X = apply_chain(M, tuple((i, i) for i in range(1, m + 1)), Expression.gen(sy.DUMMY_X))
    parts = split_dummy(X)
    return [parts.get(p, Expression()) for p in range(m + 1)]


def miura_check(M: MinusSector, W: Sequence[Expression]) -> Report:
    rep = Report()
    prod = miura_product(M)
    for p, X in enumerate(W):
        got = miura(X)
        rep.add(f"p={p}", got == prod[p], f"miura(W_p)={got!r} vs product={prod[p]!r}")
    return rep


# -- the gl(2|1) worked example ----------------------------------------------------

GOLDEN_N1 = {
    2: "1*k^2*J[1,1] + 1*k^2*J[2,2] + 1*k^2*J[3,3]",
    1: ("-1*k^1*NO(J[1,1],J[2,2]) - 1*k^1*NO(J[1,1],J[3,3]) - 1*k^1*NO(J[2,2],J[3,3])"
        " - 1*k^1*J[2,1] + 1*k^1*J[3,2] - 1*k^2*S^1(J[2,2])"),
    0: ("-1*NO(J[1,1],J[2,2],J[3,3]) - 1*NO(J[2,1],J[3,3]) + 1*NO(J[1,1],J[3,2]) + 1*J[3,1]"
        " + 1*k^1*S^1(J[3,2]) + 1*k^1*NO(J[1,1],S^1(J[3,3])) - 1*k^1*NO(S^1(J[2,2]),J[3,3])"
        " + 1*k^1*NO(J[2,2],S^1(J[3,3])) + 1*k^2*S^2(J[3,3])"),
    3: "1*k^3*1",
}


def golden_n1(M: MinusSector) -> List[Expression]:
    from .exprio import parse
    return [parse(GOLDEN_N1[p], n=1, engine=M.engine) for p in range(4)]


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))
