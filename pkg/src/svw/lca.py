"""Lambda-polynomials and the defining bracket table of the BRST complex.

A :class:`LambdaPoly` stores the *plain* coefficient of each monomial
``lambda^j0 chi^j1`` (monomials always to the left of coefficients), so
``[a_L b] = sum lambda^j0 chi^j1 / j0! * a_(j0|j1) b`` has plain coefficient
``a_(j0|j1) b / j0!``. Relations: lambda central, chi^2 = -lambda, and
S chi = -chi S + 2 lambda when S is moved onto coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Tuple

from . import symbols as sy
from .expression import Expression, Terms, add_into, scaled, single
from .liesuper import PrincipalData, superbracket

LKey = Tuple[int, int]
Poly = Dict[LKey, Terms]


def lambda_mul(mono: LKey, key: LKey) -> Tuple[int, LKey]:
    """Product of two Lambda-monomials as (sign, monomial)."""
    a0, a1 = mono
    b0, b1 = key
    if a1 and b1:
        return -1, (a0 + b0 + 1, 0)
    return 1, (a0 + b0, a1 | b1)


def poly_add(acc: Poly, key: LKey, terms: Terms, scale=1, kshift: int = 0) -> None:
    if not terms or not scale:
        return
    cur = acc.get(key)
    if cur is None:
        cur = acc[key] = {}
    add_into(cur, terms, scale, kshift)
    if not cur:
        del acc[key]


def poly_add_poly(acc: Poly, other: Poly, scale=1, kshift: int = 0) -> Poly:
    for key, t in other.items():
        poly_add(acc, key, t, scale, kshift)
    return acc


def poly_left_mul(mono: LKey, P: Poly) -> Poly:
    out: Poly = {}
    for key, t in P.items():
        s, nk = lambda_mul(mono, key)
        poly_add(out, nk, t, s)
    return out


def poly_S_plus_chi(P: Poly, s_terms: Callable[[Terms], Terms]) -> Poly:
    """Left multiplication by (S + chi); S acts on coefficients."""
    out: Poly = {}
    for (a, b), t in P.items():
        st = s_terms(t)
        if b == 0:
            poly_add(out, (a, 0), st)
            poly_add(out, (a, 1), t)
        else:
            poly_add(out, (a, 1), st, -1)
            poly_add(out, (a + 1, 0), t, 2)
            poly_add(out, (a + 1, 0), t, -1)
    return out


class LambdaPoly:
    """Value of a Lambda-bracket: ``{(j0, j1): coefficient}`` with plain coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Poly | None = None):
        self.coeffs: Poly = {k: dict(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def from_products(cls, products: Dict[LKey, Expression]) -> "LambdaPoly":
        out: Poly = {}
        for (j0, j1), e in products.items():
            poly_add(out, (j0, j1), e.terms, Fraction(1, factorial(j0)))
        return cls(out)

    def coeff(self, j0: int, j1: int) -> Expression:
        return Expression(self.coeffs.get((j0, j1), {}))

    def product(self, j0: int, j1: int) -> Expression:
        """The (j0|j1)-product, i.e. j0! times the plain coefficient."""
        return Expression(scaled(self.coeffs.get((j0, j1), {}), factorial(j0)))

    def products(self) -> Dict[LKey, Expression]:
        return {k: self.product(*k) for k in sorted(self.coeffs)}

    def keys(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        return LambdaPoly(poly_add_poly({k: dict(v) for k, v in self.coeffs.items()}, other.coeffs))

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return LambdaPoly(poly_add_poly({k: dict(v) for k, v in self.coeffs.items()}, other.coeffs, -1))

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly({k: scaled(v, -1) for k, v in self.coeffs.items()})

    def __mul__(self, s) -> "LambdaPoly":
        return LambdaPoly({k: scaled(v, Fraction(s)) for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def left_mul(self, mono: LKey) -> "LambdaPoly":
        return LambdaPoly(poly_left_mul(mono, self.coeffs))

    def __repr__(self) -> str:
        from .exprio import lambda_to_text
        return f"LambdaPoly({lambda_to_text(self)!r})"


# -- the defining table of C(g, f_prin, k) ---------------------------------

def cur(i: int, j: int) -> int:
    return sy.gen(sy.CUR, i, j)


def phi_up(j: int, i: int) -> int:
    """phi^{j,i}, j < i."""
    return sy.gen(sy.PHIU, j, i)


def phi_down(i: int, j: int) -> int:
    """phi_{E_ij}, i < j."""
    return sy.gen(sy.PHID, i, j)


def complex_generators(pd: PrincipalData):
    m = pd.size
    gens = [cur(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]
    gens += [phi_up(j, i) for i in range(1, m + 1) for j in range(1, i)]
    gens += [phi_down(i, j) for (i, j) in pd.plus_basis]
    return sorted(gens)


def lie_to_cur_terms(a) -> Terms:
    out: Terms = {}
    for (i, j), c in a.items():
        add_into(out, single((cur(i, j),), c))
    return out


def base_bracket(pd: PrincipalData, g: int, h: int) -> LambdaPoly:
    """Defining bracket of two derivative-free generators of C."""
    fg, fh = sy.family(g), sy.family(h)
    i, j = sy.indices(g)
    k, l = sy.indices(h)
    out: Poly = {}
    if fg == sy.CUR and fh == sy.CUR:
        s = -1 if ((i + j) * (k + l + 1)) & 1 else 1
        br = superbracket({(i, j): Fraction(1)}, {(k, l): Fraction(1)})
        poly_add(out, (0, 0), lie_to_cur_terms(br), s)
        c = pd.form({(i, j): 1}, {(k, l): 1})
        poly_add(out, (0, 1), single((), c), 1, 1)
    elif {fg, fh} == {sy.PHIU, sy.PHID}:
        up, down = (g, h) if fg == sy.PHIU else (h, g)
        a, b = sy.indices(up)            # phi^{a,b} = (-1)^{b+1} phi^{E_{b,a}-bar}
        sign = 1 if (b + 1) % 2 == 0 else -1
        c = sign * pd.form({(b, a): 1}, {sy.indices(down): 1})
        poly_add(out, (0, 0), single((), c))
    return LambdaPoly(out)


def complex_table(pd: PrincipalData) -> Dict[Tuple[int, int], Poly]:
    gens = complex_generators(pd)
    table = {}
    for g in gens:
        for h in gens:
            P = base_bracket(pd, g, h)
            if not P.is_zero():
                table[(g, h)] = P.coeffs
    return table
