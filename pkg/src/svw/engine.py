"""Rewriting core: normally ordered products, S-derivation and Lambda-brackets.

Everything is driven by a bracket table between derivative-free generators.
Canonical words are right-nested products sorted by generator code with no
repeated odd factor. The recursions used are

* quasi-commutativity, as the swap rule
  ``:a:bR:: = p :b:aR:: + p :(sum_{j>=1} (-T)^j/j! b_(j-1|1) a) R:``
* quasi-associativity for products whose left factor is itself a product,
* the non-commutative Wick formula when the right argument is a product,
* skew-symmetry when only the left argument is a product,
* sesquilinearity for S-derivatives of generators.

All intermediate results are memoized on (word, word) keys; words are plain
tuples of ints, so the memo tables double as hash-consing of subterms.
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from . import symbols as sy
from .expression import Expression, Terms, add_into, scaled, single
from .lca import LambdaPoly, Poly, lambda_mul, poly_add, poly_left_mul, poly_S_plus_chi

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Table = Dict[Tuple[int, int], Poly]


def _sign(x: int) -> int:
    return -1 if x & 1 else 1


class Engine:
    """Canonical arithmetic in the universal enveloping algebra of a bracket table."""

    def __init__(self, table: Table, name: str = ""):
        self.table = table
        self.name = name
        self._mulg: Dict[Tuple[int, sy.Word], Terms] = {}
        self._mul: Dict[Tuple[sy.Word, sy.Word], Terms] = {}
        self._br: Dict[Tuple[sy.Word, sy.Word], Poly] = {}
        self._S: Dict[sy.Word, Terms] = {}
        self._qc: Dict[Tuple[int, int], Terms] = {}

    # -- normally ordered product ----------------------------------------
    def _mul_gen_word(self, g: int, w: sy.Word) -> Terms:
        if not w:
            return {((g,), 0): Fraction(1)}
        h = w[0]
        if g < h or (g == h and not sy.parity(g)):
            return {((g,) + w, 0): Fraction(1)}
        key = (g, w)
        hit = self._mulg.get(key)
        if hit is not None:
            return hit
        rest = w[1:]
        corr = self._qc_corr(h, g)
        if g == h:
            res = scaled(self._mul_terms_word(corr, rest), Fraction(-1, 2))
        else:
            p = _sign(sy.parity(g) & sy.parity(h))
            res = self._mul_gen_terms(h, self._mul_gen_word(g, rest))
            add_into(res, self._mul_terms_word(corr, rest))
            if p < 0:
                res = scaled(res, -1)
        self._mulg[key] = res
        return res

    def _qc_corr(self, h: int, g: int) -> Terms:
        """sum_{j>=1} (-T)^j/j! h_(j-1|1) g."""
        key = (h, g)
        hit = self._qc.get(key)
        if hit is not None:
            return hit
        out: Terms = {}
        for (m, m1), t in self._bracket((h,), (g,)).items():
            if m1:
                tt = t
                for _ in range(m + 1):
                    tt = self._t_terms(tt)
                add_into(out, tt, Fraction(_sign(m + 1), m + 1))
        self._qc[key] = out
        return out

    def _mul_gen_terms(self, g: int, terms: Terms) -> Terms:
        out: Terms = {}
        for (w, kp), c in terms.items():
            add_into(out, self._mul_gen_word(g, w), c, kp)
        return out

    def _mul_terms_word(self, terms: Terms, w: sy.Word) -> Terms:
        out: Terms = {}
        for (a, kp), c in terms.items():
            add_into(out, self._mul_word(a, w), c, kp)
        return out

    def _mul_terms(self, x: Terms, y: Terms) -> Terms:
        out: Terms = {}
        for (b, kb), cb in y.items():
            for (a, ka), ca in x.items():
                add_into(out, self._mul_word(a, b), ca * cb, ka + kb)
        return out

    def _mul_word(self, A: sy.Word, B: sy.Word) -> Terms:
        if not A:
            return {(B, 0): Fraction(1)}
        if not B:
            return {(A, 0): Fraction(1)}
        if len(A) == 1:
            return self._mul_gen_word(A[0], B)
        key = (A, B)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        a1, A2 = A[0], A[1:]
        res = self._mul_gen_terms(a1, self._mul_word(A2, B))
        # ::a A2:B: - :a:A2 B:: = sum_j :(T^{j+1}a/(j+1)!)(A2_(j|1)B): + p sum_j :(T^{j+1}A2/(j+1)!)(a_(j|1)B):
        for (m, m1), t in self._bracket(A2, B).items():
            if m1:
                add_into(res, self._mul_gen_terms(sy.derive(a1, 2 * m + 2), t), Fraction(1, m + 1))
        p = _sign(sy.parity(a1) & sy.word_parity(A2))
        P2 = self._bracket((a1,), B)
        if P2:
            tA2 = single(A2)
            for (m, m1), t in sorted(P2.items()):
                if m1:
                    tt = tA2
                    for _ in range(m + 1):
                        tt = self._t_terms(tt)
                    add_into(res, self._mul_terms(tt, t), Fraction(p, m + 1))
        self._mul[key] = res
        return res

    # -- S derivation -----------------------------------------------------
    def _s_word(self, w: sy.Word) -> Terms:
        if not w:
            return {}
        hit = self._S.get(w)
        if hit is not None:
            return hit
        a, R = w[0], w[1:]
        res = dict(self._mul_gen_word(sy.derive(a), R))
        if R:
            add_into(res, self._mul_gen_terms(a, self._s_word(R)), _sign(sy.parity(a)))
        self._S[w] = res
        return res

    def _s_terms(self, terms: Terms) -> Terms:
        out: Terms = {}
        for (w, kp), c in terms.items():
            add_into(out, self._s_word(w), c, kp)
        return out

    def _t_terms(self, terms: Terms) -> Terms:
        return self._s_terms(self._s_terms(terms))

    # -- Lambda-bracket ---------------------------------------------------
    def _deriv_table(self, x: int, y: int) -> Poly:
        g, d = sy.base(x), sy.order(x)
        h, e = sy.base(y), sy.order(y)
        P = self.table.get((g, h))
        if not P:
            return {}
        s = -_sign(sy.parity(g))
        for _ in range(e):
            P = poly_S_plus_chi(P, self._s_terms)
            P = {k: scaled(v, s) for k, v in P.items()}
        for _ in range(d):
            P = poly_left_mul((0, 1), P)
        return P

    def _bracket(self, X: sy.Word, Y: sy.Word) -> Poly:
        if not X or not Y:
            return {}
        key = (X, Y)
        hit = self._br.get(key)
        if hit is not None:
            return hit
        if len(X) == 1 and len(Y) == 1:
            res = self._deriv_table(X[0], Y[0])
        elif len(Y) >= 2:
            res = self._wick(X, Y)
        else:
            res = self._skew(X, Y[0])
        self._br[key] = res
        return res

    def _bracket_terms_word(self, terms: Terms, Y: sy.Word) -> Poly:
        out: Poly = {}
        for (w, kp), c in terms.items():
            for key, t in self._bracket(w, Y).items():
                poly_add(out, key, t, c, kp)
        return out

    def _bracket_terms(self, x: Terms, y: Terms) -> Poly:
        out: Poly = {}
        for (b, kb), cb in y.items():
            for (a, ka), ca in x.items():
                for key, t in self._bracket(a, b).items():
                    poly_add(out, key, t, ca * cb, ka + kb)
        return out

    def _wick(self, X: sy.Word, Y: sy.Word) -> Poly:
        """[X_L :h R:] = :[X_L h] R: + sum_k lambda^k/k! [X_L h]_(k-1|1) R + s :h [X_L R]:."""
        h, R = Y[0], Y[1:]
        out: Poly = {}
        for key, c in self._bracket(X, (h,)).items():
            poly_add(out, key, self._mul_terms_word(c, R))
            for (j, j1), v in self._bracket_terms_word(c, R).items():
                if j1:
                    poly_add(out, (key[0] + j + 1, key[1]), v, Fraction(1, j + 1))
        ph = sy.parity(h)
        base_sign = _sign((sy.word_parity(X) + 1) * ph)
        for (m0, m1), c in self._bracket(X, R).items():
            poly_add(out, (m0, m1), self._mul_gen_terms(h, c), base_sign * _sign(ph * m1))
        return out

    def _skew(self, X: sy.Word, h: int) -> Poly:
        """[X_L h] = (-1)^{p(X)p(h)} sum (-lambda-T)^j0 (-chi-S)^j1 (plain coeff of [h_L X])."""
        sgn = _sign(sy.word_parity(X) & sy.parity(h))
        out: Poly = {}
        for (j0, j1), c in self._bracket((h,), X).items():
            if j1:
                pieces = [((0, 1), scaled(c, -1)), ((0, 0), scaled(self._s_terms(c), -1))]
            else:
                pieces = [((0, 0), c)]
            for (a, b), t in pieces:
                tt = t
                derivs = [tt]
                for _ in range(j0):
                    tt = self._t_terms(tt)
                    derivs.append(tt)
                for i in range(j0 + 1):
                    poly_add(out, (a + i, b), derivs[j0 - i], sgn * _sign(j0) * comb(j0, i))
        return out

    # -- public API -------------------------------------------------------
    def nomul(self, A: Expression, B: Expression) -> Expression:
        return Expression(self._mul_terms(A.terms, B.terms))

    def nomul_many(self, *factors: Expression) -> Expression:
        """Right-nested product :f1 :f2 ... fm::."""
        if not factors:
            return Expression.vacuum()
        acc = factors[-1].terms
        for f in reversed(factors[:-1]):
            acc = self._mul_terms(f.terms, acc)
        return Expression(acc)

    def s_derive(self, X: Expression) -> Expression:
        return Expression(self._s_terms(X.terms))

    def t_derive(self, X: Expression) -> Expression:
        return Expression(self._t_terms(X.terms))

    def bracket(self, X: Expression, Y: Expression) -> LambdaPoly:
        return LambdaPoly(self._bracket_terms(X.terms, Y.terms))

    def nth_product(self, X: Expression, j0: int, j1: int, Y: Expression) -> Expression:
        if j1 not in (0, 1):
            raise ValueError("j1 must be 0 or 1")
        if j0 >= 0:
            return self.bracket(X, Y).product(j0, j1)
        m = -1 - j0
        t = X.terms if j1 else self._s_terms(X.terms)
        for _ in range(m):
            t = self._t_terms(t)
        return Expression(scaled(self._mul_terms(t, Y.terms), Fraction(1, factorial(m))))

    def apply_S_plus_chi(self, P: LambdaPoly) -> LambdaPoly:
        return LambdaPoly(poly_S_plus_chi(P.coeffs, self._s_terms))

    def skew(self, P: LambdaPoly, pa: int, pb: int) -> LambdaPoly:
        """Given P = [a_L b] for parities pa, pb, return [b_L a] via skew-symmetry."""
        sgn = _sign(pa & pb)
        out: Poly = {}
        for (j0, j1), c in P.coeffs.items():
            if j1:
                pieces = [((0, 1), scaled(c, -1)), ((0, 0), scaled(self._s_terms(c), -1))]
            else:
                pieces = [((0, 0), c)]
            for (a, b), t in pieces:
                derivs = [t]
                for _ in range(j0):
                    derivs.append(self._t_terms(derivs[-1]))
                for i in range(j0 + 1):
                    poly_add(out, (a + i, b), derivs[j0 - i], sgn * _sign(j0) * comb(j0, i))
        return LambdaPoly(out)

    def quasi_commutator(self, a: int, b: int) -> Expression:
        """Right side of quasi-commutativity: p sum_{j>=1} (-T)^j/j! b_(j-1|1) a."""
        p = _sign(sy.parity(a) & sy.parity(b))
        return Expression(scaled(self._qc_corr(b, a), p))

    # -- canonicalization of raw term trees --------------------------------
    def canonicalize(self, tree, rng: Optional[random.Random] = None) -> Expression:
        """Canonical form of a raw term tree.

        Trees are built from ints (generator codes), Expressions, and tuples
        ``("S", t)``, ``("NO", t1, t2, ...)`` (right-nested), ``("+", t1, ...)``
        and ``("*", scalar, t)``. With ``rng`` the tree is first flattened to
        unsorted right-nested words, which are then sorted by applying the
        swap/odd-square rewrites at randomly chosen positions.
        """
        if rng is None:
            return Expression(self._eval_tree(tree))
        raw = self._raw_tree(tree)
        return Expression(self._reduce_random(raw, rng))

    def _eval_tree(self, tree) -> Terms:
        if isinstance(tree, int):
            return single((tree,))
        if isinstance(tree, Expression):
            return dict(tree.terms)
        op = tree[0]
        if op == "S":
            return self._s_terms(self._eval_tree(tree[1]))
        if op == "NO":
            acc = self._eval_tree(tree[-1])
            for t in reversed(tree[1:-1]):
                acc = self._mul_terms(self._eval_tree(t), acc)
            return acc
        if op == "+":
            out: Terms = {}
            for t in tree[1:]:
                add_into(out, self._eval_tree(t))
            return out
        if op == "*":
            return scaled(self._eval_tree(tree[2]), Fraction(tree[1]))
        raise ValueError(f"unknown tree node {op!r}")

    def _raw_tree(self, tree) -> Terms:
        """Flatten to right-nested, possibly unsorted words (no sorting applied)."""
        if isinstance(tree, int):
            return single((tree,))
        if isinstance(tree, Expression):
            return dict(tree.terms)
        op = tree[0]
        if op == "S":
            out: Terms = {}
            for (w, kp), c in self._raw_tree(tree[1]).items():
                sign = 1
                for i, g in enumerate(w):
                    add_into(out, single(w[:i] + (sy.derive(g),) + w[i + 1:]), c * sign, kp)
                    sign *= _sign(sy.parity(g))
            return out
        if op == "NO":
            acc = self._raw_tree(tree[-1])
            for t in reversed(tree[1:-1]):
                acc = self._raw_mul(self._raw_tree(t), acc)
            return acc
        if op == "+":
            out = {}
            for t in tree[1:]:
                add_into(out, self._raw_tree(t))
            return out
        if op == "*":
            return scaled(self._raw_tree(tree[2]), Fraction(tree[1]))
        raise ValueError(f"unknown tree node {op!r}")

    def _raw_mul(self, x: Terms, y: Terms) -> Terms:
        out: Terms = {}
        for (a, ka), ca in x.items():
            for (b, kb), cb in y.items():
                add_into(out, self._raw_mul_word(a, b), ca * cb, ka + kb)
        return out

    def _canon_word(self, w: sy.Word) -> Terms:
        acc = single(())
        for g in reversed(w):
            acc = self._mul_gen_terms(g, acc)
        return acc

    def _raw_mul_word(self, A: sy.Word, B: sy.Word) -> Terms:
        """Right-nest ::a A2: B: by quasi-associativity without sorting the main term."""
        if not A:
            return single(B)
        if len(A) == 1:
            return single(A + B)
        a1, A2 = A[0], A[1:]
        res: Terms = {}
        for (w, kp), c in self._raw_mul_word(A2, B).items():
            add_into(res, single((a1,) + w, c, kp))
        cA2 = self._canon_word(A2)
        cB = self._canon_word(B)
        for (m, m1), t in self._bracket_terms(cA2, cB).items():
            if m1:
                for (w, kp), c in t.items():
                    add_into(res, single((sy.derive(a1, 2 * m + 2),) + w, c * Fraction(1, m + 1), kp))
        p = _sign(sy.parity(a1) & sy.word_parity(A2))
        for (m, m1), t in self._bracket_terms(single((a1,)), cB).items():
            if m1:
                tt = cA2
                for _ in range(m + 1):
                    tt = self._t_terms(tt)
                add_into(res, self._raw_mul(tt, t), Fraction(p, m + 1))
        return res

    @staticmethod
    def _redexes(w: sy.Word) -> List[int]:
        return [i for i in range(len(w) - 1)
                if w[i] > w[i + 1] or (w[i] == w[i + 1] and sy.parity(w[i]))]

    def _reduce_random(self, terms: Terms, rng: random.Random) -> Terms:
        cur: Terms = dict(terms)
        while True:
            dirty = sorted(k for k in cur if self._redexes(k[0]))
            if not dirty:
                return cur
            key = dirty[rng.randrange(len(dirty))]
            c = cur.pop(key)
            w, kp = key
            pos = self._redexes(w)
            i = pos[rng.randrange(len(pos))]
            a, b = w[i], w[i + 1]
            pre, post = w[:i], w[i + 2:]
            corr = self._qc_corr(b, a)
            for (cw, ck), cc in corr.items():
                if len(cw) > 1:
                    raise NotImplementedError("random schedules need linear brackets")
            if a == b:
                for (cw, ck), cc in corr.items():
                    add_into(cur, single(pre + cw + post, cc * Fraction(-1, 2) * c, kp + ck))
            else:
                p = _sign(sy.parity(a) & sy.parity(b))
                add_into(cur, single(pre + (b, a) + post, p * c, kp))
                for (cw, ck), cc in corr.items():
                    add_into(cur, single(pre + cw + post, p * cc * c, kp + ck))

    def stats(self) -> Dict[str, int]:
        return {"mul_gen": len(self._mulg), "mul": len(self._mul),
                "bracket": len(self._br), "S": len(self._S)}

    # -- Jacobi identity in two Lambda-variables -----------------------------
    def jacobi_defect(self, X: sy.Word, Y: sy.Word, Z: sy.Word) -> Dict[Tuple[int, int, int, int], Terms]:
        """LHS minus RHS of the Jacobi identity for three canonical words.

        Keys are ``(l0, l1, g0, g1)`` for the monomial ``lambda^l0 chi^l1
        gamma^g0 eta^g1`` with Lambda-variables to the left. Because the
        bracket is an odd map, a monomial leaving the right slot of ``[a_L .]``
        picks up ``(-1)^{(p(a)+1) j1}``, and one leaving the left slot picks up
        ``(-1)^{j1}``. An empty result means the identity holds.
        """
        pa, pb = sy.word_parity(X), sy.word_parity(Y)
        out: Dict[Tuple[int, int, int, int], Terms] = {}

        def put(key, terms, scale):
            cur = out.setdefault(key, {})
            add_into(cur, terms, scale)
            if not cur:
                del out[key]

        # [X_L [Y_G Z]]
        for (g0, g1), inner in self._bracket(Y, Z).items():
            for (w, kp), c in inner.items():
                for (l0, l1), t in self._bracket(X, w).items():
                    put((l0, l1, g0, g1), scaled(t, c, kp), _sign((pa + 1) * g1 + g1 * l1))
        # -(-1)^{p(X)} [[X_L Y]_{L+G} Z], subtracted
        for (m0, m1), inner in self._bracket(X, Y).items():
            for (w, kp), c in inner.items():
                for (j0, j1), t in self._bracket(w, Z).items():
                    tt = scaled(t, c, kp)
                    for i in range(j0 + 1):
                        splits = ([((i, 1), (j0 - i, 0)), ((i, 0), (j0 - i, 1))] if j1
                                  else [((i, 0), (j0 - i, 0))])
                        for lm, gm in splits:
                            s1, lk = lambda_mul((m0, m1), lm)
                            put((lk[0], lk[1], gm[0], gm[1]), tt,
                                s1 * comb(j0, i) * _sign(m1) * _sign(pa))
        # (-1)^{(p(X)+1)(p(Y)+1)} [Y_G [X_L Z]]
        for (l0, l1), inner in self._bracket(X, Z).items():
            for (w, kp), c in inner.items():
                for (g0, g1), t in self._bracket(Y, w).items():
                    put((l0, l1, g0, g1), scaled(t, c, kp),
                        -_sign((pa + 1) * (pb + 1) + (pb + 1) * l1))
        return out
