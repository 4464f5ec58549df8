"""The BRST complex for gl(n+1|n) with its odd principal nilpotent.

:class:`Complex` holds the bracket table of the current and charged
generators, the element ``d`` and the differential ``Q = d_(0|0)``, and the
composite fields ``J_a``. It also builds the *minus sector*: the subalgebra
generated by ``J_{i,j}`` (i >= j) and ``phi^{j,i}``. That subalgebra is
closed under brackets with a linear table, so it gets its own engine whose
words are much shorter than their images in the full complex. Conversion
between the two is exact (embedding forward, triangular elimination back).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from . import symbols as sy
from .engine import Engine
from .expression import Expression, Terms, add_into, scaled, single
from .lca import (LambdaPoly, Poly, complex_table, cur, phi_down, phi_up, poly_add)
from .liesuper import (E, LieElem, PrincipalData, elem_parity, pi_leq0, pi_minus,
                       pi_plus, principal_data, superbracket)


def _sign(x: int) -> int:
    return -1 if x & 1 else 1


def jgen(i: int, j: int, d: int = 0) -> int:
    """Code of S^d J_{i,j} in the minus sector."""
    return sy.gen(sy.J, i, j, d)


class Complex:
    """C(g-bar, f_prin, k) for gl(n+1|n), with Q and the J fields."""

    def __init__(self, n: int, form_mode: str = "supertrace"):
        self.n = n
        self.pd: PrincipalData = principal_data(n, form_mode)
        self.table = complex_table(self.pd)
        self.engine = Engine(self.table, name="C")
        self._Qgen: Dict[int, Terms] = {}
        self._Qword: Dict[sy.Word, Terms] = {}
        self._d: Optional[Expression] = None
        self._minus: Optional[MinusSector] = None

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    # -- fields attached to Lie superalgebra elements ------------------------
    def bar(self, a: LieElem) -> Expression:
        """The current a-bar."""
        return Expression({((cur(i, j),), 0): c for (i, j), c in a.items()})

    def phi_up_of(self, a: LieElem) -> Expression:
        """phi^{a-bar} for a in n_- (components above the diagonal are dropped)."""
        out: Terms = {}
        for (i, j), c in pi_minus(a).items():
            add_into(out, single((phi_up(j, i),), c * _sign(i + 1)))
        return Expression(out)

    def phi_down_of(self, b: LieElem) -> Expression:
        """phi_b for b in n (components outside n are dropped)."""
        return Expression({((phi_down(i, j),), 0): c for (i, j), c in pi_plus(b).items()})

    def phi_alpha(self, ub) -> Expression:
        """phi^alpha = phi^{u^alpha-bar} for the basis element u_alpha = E_ub."""
        return self.phi_up_of(self.pd.dual[ub])

    # -- d and Q ----------------------------------------------------------------
    @property
    def d(self) -> Expression:
        if self._d is None:
            self._d = self._build_d()
        return self._d

    def _build_d(self) -> Expression:
        eng, pd = self.engine, self.pd
        acc = Expression()
        for ua in pd.plus_basis:
            coeff = self.bar(E(*ua)) - Expression.vacuum(pd.form(pd.f_prin, E(*ua)))
            acc = acc + eng.nomul(coeff, self.phi_alpha(ua))
        half = Fraction(1, 2)
        for ua in pd.plus_basis:
            paa = (sum(ua) + 1) & 1
            for ub in pd.plus_basis:
                pb = sum(ub) & 1
                br = superbracket(E(*ua), E(*ub))
                if not br:
                    continue
                t = eng.nomul_many(self.phi_down_of(br), self.phi_alpha(ub), self.phi_alpha(ua))
                acc = acc + t * (half * _sign(paa * pb))
        return acc

    def _q_gen(self, g: int) -> Terms:
        b = sy.base(g)
        hit = self._Qgen.get(b)
        if hit is None:
            P = self.engine._bracket_terms(self.d.terms, single((b,)))
            hit = P.get((0, 0), {})
            self._Qgen[b] = hit
        m = sy.order(g)
        if not m:
            return hit
        t = hit
        for _ in range(m):
            t = self.engine._s_terms(t)
        return scaled(t, _sign(m))

    def _q_word(self, w: sy.Word) -> Terms:
        if not w:
            return {}
        hit = self._Qword.get(w)
        if hit is not None:
            return hit
        eng = self.engine
        a, R = w[0], w[1:]
        res = eng._mul_terms_word(self._q_gen(a), R)
        if R:
            add_into(res, eng._mul_gen_terms(a, self._q_word(R)), _sign(sy.parity(a)))
        self._Qword[w] = res
        return res

    def Q(self, X: Expression) -> Expression:
        """Q via the derivation rule on canonical words, with Q on generators from d."""
        out: Terms = {}
        for (w, kp), c in X.terms.items():
            add_into(out, self._q_word(w), c, kp)
        return Expression(out)

    def Q_direct(self, X: Expression) -> Expression:
        """Q(X) = d_(0|0) X evaluated straight from the bracket (slower oracle)."""
        return self.engine.bracket(self.d, X).product(0, 0)

    # -- J fields -----------------------------------------------------------------
    def J(self, a: LieElem) -> Expression:
        if pi_plus(a):
            raise ValueError("J is only defined here for elements of non-positive grade")
        if not a:
            return Expression()
        pabar = (elem_parity(a) + 1) & 1
        acc = self.bar(a)
        for ub in self.pd.plus_basis:
            br = superbracket(E(*ub), a)
            if not pi_plus(br):
                continue
            pbbar = (sum(ub) + 1) & 1
            t = self.engine.nomul(self.phi_alpha(ub), self.phi_down_of(br))
            acc = acc + t * _sign(pabar * pbbar)
        return acc

    @lru_cache(maxsize=None)
    def Jij(self, i: int, j: int) -> Expression:
        if not (1 <= j <= i <= self.size):
            return Expression()
        return self.J(E(i, j))

    def phi_ji(self, j: int, i: int) -> Expression:
        """phi^{j,i}; zero outside 1 <= j < i <= 2n+1."""
        if not (1 <= j < i <= self.size):
            return Expression()
        return Expression.gen(phi_up(j, i))

    # -- minus sector -------------------------------------------------------------
    @property
    def minus(self) -> "MinusSector":
        if self._minus is None:
            self._minus = MinusSector(self)
        return self._minus

    def generators(self) -> List[int]:
        from .lca import complex_generators
        return complex_generators(self.pd)


class MinusSector:
    """Subalgebra generated by J_{i,j} (i >= j) and phi^{j,i} (j < i)."""

    def __init__(self, C: Complex):
        self.C = C
        m = C.size
        self.jgens = [jgen(i, j) for i in range(1, m + 1) for j in range(1, i + 1)]
        self.phigens = [phi_up(j, i) for i in range(1, m + 1) for j in range(1, i)]
        self.gens = sorted(self.jgens + self.phigens)
        self._embed_word: Dict[sy.Word, Terms] = {}
        self.table = self._derive_table()
        self.engine = Engine(self.table, name="V(R-)")
        self._Qgen: Dict[int, Terms] = {}
        self._Qword: Dict[sy.Word, Terms] = {}

    # -- conversion -------------------------------------------------------------
    def _embed_gen(self, g: int) -> Terms:
        C = self.C
        b, m = sy.base(g), sy.order(g)
        if sy.family(b) == sy.J:
            t = C.Jij(*sy.indices(b)).terms
        elif sy.family(b) == sy.DUMMY:
            t = single((b,))
        else:
            t = single((b,))
        for _ in range(m):
            t = C.engine._s_terms(t)
        return t

    def _embed_w(self, w: sy.Word) -> Terms:
        if not w:
            return single(())
        hit = self._embed_word.get(w)
        if hit is None:
            hit = self.C.engine._mul_terms(self._embed_gen(w[0]), self._embed_w(w[1:]))
            self._embed_word[w] = hit
        return hit

    def embed(self, X: Expression) -> Expression:
        """Image in the full complex."""
        out: Terms = {}
        for (w, kp), c in X.terms.items():
            add_into(out, self._embed_w(w), c, kp)
        return Expression(out)

    def pull_back(self, Y: Expression) -> Expression:
        """Inverse of :meth:`embed` on its image; raises if Y is not in the image."""
        rest: Terms = dict(Y.terms)
        out: Terms = {}
        while rest:
            def ncur(key):
                return sum(1 for g in key[0] if sy.family(g) == sy.CUR)
            top = max(ncur(k) for k in rest)
            cands = sorted(k for k in rest if ncur(k) == top)
            (w, kp) = cands[0]
            c = rest[(w, kp)]
            mw = []
            for g in w:
                fam = sy.family(g)
                i, j = sy.indices(g)
                if fam == sy.CUR and i >= j:
                    mw.append(jgen(i, j, sy.order(g)))
                elif fam in (sy.PHIU, sy.DUMMY):
                    mw.append(g)
                else:
                    raise ValueError(f"{sy.name(g)} does not lie in the minus sector")
            mw = tuple(mw)
            if mw != tuple(sorted(mw)):
                raise ValueError("unexpected word order during pull-back")
            add_into(out, single(mw, c, kp))
            add_into(rest, self._embed_w(mw), -c, kp)
        return Expression(out)

    def _derive_table(self) -> Dict[Tuple[int, int], Poly]:
        eng = self.C.engine
        table = {}
        for g in self.gens:
            for h in self.gens:
                if sy.family(g) == sy.PHIU and sy.family(h) == sy.PHIU:
                    continue
                P = eng._bracket_terms(self._embed_gen(g), self._embed_gen(h))
                out: Poly = {}
                for key, t in P.items():
                    poly_add(out, key, self.pull_back(Expression(t)).terms)
                if out:
                    table[(g, h)] = out
        return table

    # -- Q on the minus sector ----------------------------------------------------
    def _q_gen(self, g: int) -> Terms:
        b = sy.base(g)
        hit = self._Qgen.get(b)
        if hit is None:
            hit = self.pull_back(self.C.Q(Expression(self._embed_gen(b)))).terms
            self._Qgen[b] = hit
        m = sy.order(g)
        t = hit
        for _ in range(m):
            t = self.engine._s_terms(t)
        return scaled(t, _sign(m))

    def _q_word(self, w: sy.Word) -> Terms:
        if not w:
            return {}
        if sy.family(w[0]) == sy.DUMMY:
            raise ValueError("Q is not defined on the dummy generator")
        hit = self._Qword.get(w)
        if hit is not None:
            return hit
        eng = self.engine
        a, R = w[0], w[1:]
        res = eng._mul_terms_word(self._q_gen(a), R)
        if R:
            add_into(res, eng._mul_gen_terms(a, self._q_word(R)), _sign(sy.parity(a)))
        self._Qword[w] = res
        return res

    def Q(self, X: Expression) -> Expression:
        out: Terms = {}
        for (w, kp), c in X.terms.items():
            add_into(out, self._q_word(w), c, kp)
        return Expression(out)

    def J(self, i: int, j: int, d: int = 0) -> Expression:
        if not (1 <= j <= i <= self.C.size):
            return Expression()
        return Expression.gen(jgen(i, j, d))

    def phi(self, j: int, i: int) -> Expression:
        if not (1 <= j < i <= self.C.size):
            return Expression()
        return Expression.gen(phi_up(j, i))


# -- the identity suite ---------------------------------------------------------

def expected_d_bar(C: Complex, a: LieElem) -> LambdaPoly:
    """Closed form of [d_L a-bar]."""
    pd, eng = C.pd, C.engine
    pabar = (elem_parity(a) + 1) & 1
    out: Poly = {}
    for ua in pd.plus_basis:
        phia = C.phi_alpha(ua)
        pa = sum(ua) & 1
        br = superbracket(E(*ua), a)
        if br:
            poly_add(out, (0, 0), eng.nomul(phia, C.bar(br)).terms, _sign(pabar * pa))
        c = pd.form(E(*ua), a)
        if c:
            s = c * _sign((pa + 1) & 1)
            poly_add(out, (0, 1), phia.terms, s, 1)
            poly_add(out, (0, 0), eng.s_derive(phia).terms, s, 1)
    return LambdaPoly(out)


def expected_d_phi_up(C: Complex, ua) -> LambdaPoly:
    """Closed form of [d_L phi^alpha]."""
    pd, eng = C.pd, C.engine
    paa = (sum(ua) + 1) & 1
    out: Poly = {}
    for ub in pd.plus_basis:
        pb = sum(ub) & 1
        br = superbracket(E(*ub), pd.dual[ua])
        t = eng.nomul(C.phi_alpha(ub), C.phi_up_of(br))
        poly_add(out, (0, 0), t.terms, Fraction(1, 2) * _sign(paa * pb))
    return LambdaPoly(out)


def expected_d_phi_down(C: Complex, ua) -> LambdaPoly:
    """Closed form of [d_L phi_alpha]."""
    pd, eng = C.pd, C.engine
    paa = (sum(ua) + 1) & 1
    out: Poly = {}
    poly_add(out, (0, 0), C.bar(E(*ua)).terms, _sign(paa))
    poly_add(out, (0, 0), single((), -pd.form(pd.f_prin, E(*ua))))
    for ub in pd.plus_basis:
        pb = sum(ub) & 1
        br = superbracket(E(*ub), E(*ua))
        if br:
            t = eng.nomul(C.phi_alpha(ub), C.phi_down_of(br))
            poly_add(out, (0, 0), t.terms, _sign(paa * pb))
    return LambdaPoly(out)


def expected_d_J(C: Complex, a: LieElem) -> LambdaPoly:
    """Closed form of [d_L J_a] for a of non-positive grade."""
    pd, eng = C.pd, C.engine
    pabar = (elem_parity(a) + 1) & 1
    out: Poly = {}
    for ub in pd.plus_basis:
        pb = sum(ub) & 1
        phib = C.phi_alpha(ub)
        br = superbracket(E(*ub), a)
        inner = C.J(pi_leq0(br)) + Expression.vacuum(pd.form(pd.f_prin, br))
        poly_add(out, (0, 0), eng.nomul(phib, inner).terms, _sign(pabar * pb))
        c = pd.form(E(*ub), a)
        if c:
            s = c * _sign((pb + 1) & 1)
            poly_add(out, (0, 1), phib.terms, s, 1)
            poly_add(out, (0, 0), eng.s_derive(phib).terms, s, 1)
    return LambdaPoly(out)


def expected_JJ(C: Complex, a: LieElem, b: LieElem) -> LambdaPoly:
    """(-1)^{p(a)p(b-bar)} J_[a,b] + k(S + chi)(a|b)."""
    s = _sign(elem_parity(a) * ((elem_parity(b) + 1) & 1))
    out: Poly = {}
    poly_add(out, (0, 0), C.J(superbracket(a, b)).terms, s)
    c = C.pd.form(a, b)
    if c:
        poly_add(out, (0, 1), single((), c), 1, 1)
    return LambdaPoly(out)


def expected_QJ(C: Complex, m: int, l: int) -> Expression:
    """Closed form of Q(J_{m,l}) for m >= l, out-of-range symbols read as zero."""
    eng = C.engine
    phi, Jf = C.phi_ji, C.Jij
    acc = eng.s_derive(phi(l, m)).kmul(1) * _sign(m)
    for j in range(l + 1, m + 1):
        acc = acc + eng.nomul(phi(l, j), Jf(m, j)) * _sign(l + j + 1)
    for i in range(l, m):
        acc = acc + eng.nomul(phi(i, m), Jf(i, l)) * _sign((i + m) * (m + l + 1))
    acc = acc + phi(l, m + 1) * _sign(l) + phi(l - 1, m) * _sign(m)
    return acc


def identity_suite(C: Complex, report: Optional[Callable[[str, bool], None]] = None) -> bool:
    """Compare engine-computed brackets with the closed forms; True iff all match."""
    eng, pd = C.engine, C.pd
    ok = True

    def record(label: str, got, want):
        nonlocal ok
        good = got == want
        ok = ok and good
        if report:
            report(label, good)
        if not good and report:
            report(f"  engine:   {got!r}", False)
            report(f"  expected: {want!r}", False)

    d = C.d
    for b in pd.basis():
        a = E(*b)
        record(f"[d,bar{b}]", eng.bracket(d, C.bar(a)), expected_d_bar(C, a))
    for ua in pd.plus_basis:
        record(f"[d,phi^{ua}]", eng.bracket(d, C.phi_alpha(ua)), expected_d_phi_up(C, ua))
        record(f"[d,phi_{ua}]", eng.bracket(d, C.phi_down_of(E(*ua))), expected_d_phi_down(C, ua))
    low = [b for b in pd.basis() if b[0] >= b[1]]
    for b in low:
        a = E(*b)
        record(f"[d,J{b}]", eng.bracket(d, C.J(a)), expected_d_J(C, a))
    for b1 in low:
        for b2 in low:
            record(f"[J{b1},J{b2}]", eng.bracket(C.J(E(*b1)), C.J(E(*b2))),
                   expected_JJ(C, E(*b1), E(*b2)))
    for (m, l) in low:
        record(f"Q(J{m},{l})", C.Q(C.Jij(m, l)), expected_QJ(C, m, l))
    return ok
