"""Finite-dimensional data of the Lie superalgebra gl(n+1|n).

Elements are sparse dicts ``{(i, j): Fraction}`` over the matrix units
``E_{i,j}``, indices running over ``1..2n+1``. Index ``i`` is bosonic when
``i`` is odd, so ``p(E_{i,j}) = (i + j) mod 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import sympy

BasisElem = Tuple[int, int]
LieElem = Dict[BasisElem, Fraction]

FORM_MODES = ("rescaled", "supertrace")


def E(i: int, j: int, c=1) -> LieElem:
    return {(i, j): Fraction(c)} if c else {}


def parity(b: BasisElem) -> int:
    return (b[0] + b[1]) & 1


def index_parity(i: int) -> int:
    return (i + 1) & 1


def grade(b: BasisElem) -> Fraction:
    """Principal half-integer grade of ``E_{i,j}``, i.e. ``(j - i)/2``."""
    return Fraction(b[1] - b[0], 2)


def lie_add(*elems: LieElem, scales=None) -> LieElem:
    out: LieElem = {}
    for k, a in enumerate(elems):
        s = 1 if scales is None else scales[k]
        for b, c in a.items():
            v = out.get(b, 0) + s * c
            if v:
                out[b] = Fraction(v)
            else:
                out.pop(b, None)
    return out


def lie_scale(a: LieElem, s) -> LieElem:
    if not s:
        return {}
    return {b: Fraction(c * s) for b, c in a.items()}


def elem_parity(a: LieElem) -> int:
    """Parity of a homogeneous element; raises on mixed input."""
    ps = {parity(b) for b in a}
    if len(ps) > 1:
        raise ValueError("element is not parity-homogeneous")
    return ps.pop() if ps else 0


def superbracket(a: LieElem, b: LieElem) -> LieElem:
    """[E_ij, E_kl] = d_jk E_il - (-1)^{(i+j)(k+l)} d_il E_kj, extended bilinearly."""
    out: LieElem = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            c = x * y
            if j == k:
                out[(i, l)] = out.get((i, l), 0) + c
            if i == l:
                s = -1 if ((i + j) * (k + l)) & 1 == 0 else 1
                out[(k, j)] = out.get((k, j), 0) + s * c
    return {key: Fraction(v) for key, v in out.items() if v}


def supertrace_pairing(a: LieElem, b: LieElem) -> Fraction:
    """str(ab) for matrix-unit expansions."""
    total = Fraction(0)
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if j == k and i == l:
                total += x * y * (1 if index_parity(i) == 0 else -1)
    return total


def form_scale(n: int, mode: str = "rescaled") -> Fraction:
    if mode == "rescaled":
        return Fraction(2, n * (n + 1))
    if mode == "supertrace":
        return Fraction(1)
    raise ValueError(f"unknown form mode {mode!r}")


def pi_leq0(a: LieElem) -> LieElem:
    """Projection onto the non-positively graded part (entries with i >= j)."""
    return {b: c for b, c in a.items() if b[0] >= b[1]}


def pi_plus(a: LieElem) -> LieElem:
    """Projection onto n, the strictly upper triangular part."""
    return {b: c for b, c in a.items() if b[0] < b[1]}


def pi_minus(a: LieElem) -> LieElem:
    """Projection onto n_-, the strictly lower triangular part."""
    return {b: c for b, c in a.items() if b[0] > b[1]}


@dataclass(frozen=True)
class PrincipalData:
    n: int
    form_mode: str
    scale: Fraction
    f_prin: LieElem
    h: LieElem
    e: LieElem
    f: LieElem
    plus_basis: List[BasisElem]
    dual: Dict[BasisElem, LieElem] = field(repr=False)

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    @property
    def f_odd(self) -> LieElem:
        return self.f_prin

    def basis(self) -> List[BasisElem]:
        m = self.size
        return [(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]

    def form(self, a: LieElem, b: LieElem) -> Fraction:
        return self.scale * supertrace_pairing(a, b)

    def grade(self, b: BasisElem) -> Fraction:
        return grade(b)


def principal_data(n: int, form_mode: str = "rescaled") -> PrincipalData:
    if n < 1:
        raise ValueError("n must be >= 1")
    m = 2 * n + 1
    scale = form_scale(n, form_mode)
    f_prin = {(p + 1, p): Fraction(1) for p in range(1, m)}
    h = {(i, i): Fraction(n + 1 - i) for i in range(1, m + 1) if i != n + 1}
    # e = sum c_p E_{p,p+2} with [e, f] = h
    e = {}
    for p in range(1, m - 1):
        q, r = divmod(p, 2)
        c = (q + 1) * (n - q) if r else q * (n - q)
        e[(p, p + 2)] = Fraction(c)
    f = lie_scale(superbracket(f_prin, f_prin), Fraction(1, 2))

    plus = [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
    minus = [(j, i) for (i, j) in plus]
    # Gram matrix G[a][b] = (minus_a | plus_b); dual basis u^b = sum_a (G^{-1})[b][a] minus_a
    G = sympy.Matrix(len(plus), len(plus), lambda r, s: sympy.Rational(
        *_frac_parts(scale * supertrace_pairing(E(*minus[r]), E(*plus[s])))))
    Ginv = G.inv()
    dual = {}
    for s, ub in enumerate(plus):
        elem = {}
        for r, mb in enumerate(minus):
            c = Ginv[s, r]
            if c != 0:
                elem[mb] = Fraction(int(c.p), int(c.q))
        dual[ub] = elem
    return PrincipalData(n=n, form_mode=form_mode, scale=scale, f_prin=f_prin, h=h,
                         e=e, f=f, plus_basis=plus, dual=dual)


def _frac_parts(x: Fraction):
    return int(x.numerator), int(x.denominator)
