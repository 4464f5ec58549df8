"""Text and JSON serialization of expressions.

Text grammar::

    expr   := term { ("+"|"-") term }
    term   := coeff [ "*" mono ] | mono
    mono   := "1" | factor | "NO(" factor { "," factor } ")"
    factor := [ "S^" nat "(" ] gen [ ")" ]
    gen    := "J[" nat "," nat "]" | "Cur[...]" | "Phi[...]" | "PhiD[...]" | "X"
    coeff  := rational [ "*k^" nat ]
    rational := [ "-" ] nat [ "/" nat ]

``NO(a, b, c)`` is the right-nested product ``:a:bc::``. Whitespace between
tokens is ignored by the parser; the printer emits none except around the
binary ``+``/``-`` separators.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import symbols as sy
from .expression import Expression, Terms, add_term


class ParseError(ValueError):
    """Malformed expression text; carries 1-based line and column."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class IndexRangeError(ValueError):
    pass


# -- printing -----------------------------------------------------------------

def factor_text(c: int) -> str:
    fam = sy.family(c)
    core = "X" if fam == sy.DUMMY else f"{sy.FAMILY_NAMES[fam]}[{sy.indices(c)[0]},{sy.indices(c)[1]}]"
    d = sy.order(c)
    return f"S^{d}({core})" if d else core


def mono_text(w: sy.Word) -> str:
    if not w:
        return "1"
    if len(w) == 1:
        return factor_text(w[0])
    return "NO(" + ",".join(factor_text(c) for c in w) + ")"


def _coeff_text(c: Fraction, kp: int) -> str:
    s = str(abs(c))
    if kp:
        s += f"*k^{kp}"
    return s


def to_text(X: Expression) -> str:
    """Deterministic text form; the zero expression prints as ``0``."""
    parts: List[str] = []
    for w, kp, c in X:
        body = _coeff_text(c, kp) + "*" + mono_text(w)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def lambda_to_text(P) -> str:
    """One ``(j0,j1): expr`` line per nonzero (j0|j1)-product, in key order."""
    lines = [f"({j0},{j1}): {to_text(e)}" for (j0, j1), e in P.products().items()]
    return "\n".join(lines) if lines else "0"


# -- parsing --------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, n: Optional[int], engine=None):
        self.s = text
        self.pos = 0
        self.n = n
        self.engine = engine

    def where(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.s.count("\n", 0, pos) + 1
        col = pos - (self.s.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, msg: str, pos: Optional[int] = None):
        raise ParseError(msg, *self.where(pos))

    def ws(self):
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.s.startswith(lit, self.pos)

    def eat(self, lit: str):
        if not self.peek(lit):
            got = self.s[self.pos:self.pos + 8] or "end of input"
            self.fail(f"expected {lit!r}, got {got!r}")
        self.pos += len(lit)

    def nat(self) -> int:
        self.ws()
        start = self.pos
        while self.pos < len(self.s) and self.s[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a natural number")
        return int(self.s[start:self.pos])

    def parse(self) -> Expression:
        self.ws()
        if self.s.strip() == "0":
            return Expression()
        acc: Terms = {}
        sign = 1
        if self.peek("-"):
            self.pos += 1
            sign = -1
        self.term(acc, sign)
        while True:
            self.ws()
            if self.pos >= len(self.s):
                break
            if self.peek("+"):
                self.pos += 1
                sign = 1
            elif self.peek("-"):
                self.pos += 1
                sign = -1
            else:
                self.fail("expected '+', '-' or end of input")
            self.term(acc, sign)
        return Expression(acc)

    def term(self, acc: Terms, sign: int):
        self.ws()
        kp = 0
        c = Fraction(sign)
        if self.pos < len(self.s) and self.s[self.pos].isdigit():
            save = self.pos
            num = self.nat()
            # a bare "1" is either the coefficient 1 or the vacuum monomial
            den = 1
            if self.peek("/"):
                self.pos += 1
                den = self.nat()
                if den == 0:
                    self.fail("zero denominator", save)
            c *= Fraction(num, den)
            w = ()
            if self.peek("*"):
                self.pos += 1
                if self.peek("k"):
                    self.pos += 1
                    self.eat("^")
                    kp = self.nat()
                    if self.peek("*"):
                        self.pos += 1
                        w = self.mono()
                else:
                    w = self.mono()
        else:
            w = self.mono()
        if self.engine is None or len(w) < 2:
            add_term(acc, w, kp, c)
            return
        X = Expression.vacuum()
        for g in reversed(w):
            X = self.engine.nomul(Expression.gen(g), X)
        for (cw, ckp), cc in X.terms.items():
            add_term(acc, cw, kp + ckp, c * cc)

    def mono(self) -> sy.Word:
        self.ws()
        if self.peek("NO("):
            self.pos += 3
            factors = [self.factor()]
            while self.peek(","):
                self.pos += 1
                factors.append(self.factor())
            self.eat(")")
            return tuple(factors)
        if self.peek("1"):
            self.pos += 1
            return ()
        return (self.factor(),)

    def factor(self) -> int:
        self.ws()
        if self.peek("S"):
            self.pos += 1
            self.eat("^")
            d = self.nat()
            self.eat("(")
            g = self.gen()
            self.eat(")")
            try:
                return sy.derive(g, d)
            except OverflowError:
                self.fail("derivative order too large")
        return self.gen()

    def gen(self) -> int:
        self.ws()
        start = self.pos
        for name in ("PhiD", "Phi", "Cur", "J", "X"):
            if self.s.startswith(name, self.pos):
                self.pos += len(name)
                fam = sy.FAMILY_BY_NAME[name]
                if fam == sy.DUMMY:
                    return sy.DUMMY_X
                self.eat("[")
                i = self.nat()
                self.eat(",")
                j = self.nat()
                self.eat("]")
                self.check_indices(fam, i, j, start)
                return sy.gen(fam, i, j)
        self.fail("expected a generator (J, Cur, Phi, PhiD or X)")

    def check_indices(self, fam: int, i: int, j: int, pos: int):
        m = 2 * self.n + 1 if self.n is not None else 255
        line, col = self.where(pos)
        bad = not (1 <= i <= m and 1 <= j <= m)
        if fam == sy.J:
            bad = bad or i < j
        elif fam in (sy.PHIU, sy.PHID):
            bad = bad or i >= j
        if bad:
            where = f"n={self.n}" if self.n is not None else "any n"
            raise IndexRangeError(
                f"line {line}, column {col}: index ({i},{j}) out of range for "
                f"{sy.FAMILY_NAMES[fam]} with {where}")


def parse(text: str, n: Optional[int] = None, engine=None) -> Expression:
    """Parse expression text.

    With ``n`` given, indices are range-checked. With an ``engine``, each
    ``NO(...)`` monomial is multiplied out in canonical form; without one the
    words are taken verbatim (correct for printer output).
    """
    return _Parser(text, n, engine).parse()


# -- JSON -----------------------------------------------------------------------

def _factor_json(c: int) -> Dict:
    i, j = sy.indices(c)
    return {"gen": sy.FAMILY_NAMES[sy.family(c)], "i": i, "j": j, "d": sy.order(c)}


def terms_json(X: Expression) -> List[Dict]:
    return [{"coeff": {"num": str(c.numerator), "den": str(c.denominator), "kpow": kp},
             "word": [_factor_json(g) for g in w]} for w, kp, c in X]


def terms_from_json(items: List[Dict]) -> Expression:
    acc: Terms = {}
    for t in items:
        co = t["coeff"]
        w = tuple(sy.gen(sy.FAMILY_BY_NAME[f["gen"]], f["i"], f["j"], f["d"]) for f in t["word"])
        add_term(acc, w, int(co["kpow"]), Fraction(int(co["num"]), int(co["den"])))
    return Expression(acc)


def wset_to_json(n: int, W: List[Expression], generators: List[int]) -> str:
    doc = {
        "n": n,
        "generators": [_factor_json(g) for g in generators],
        "W": [{"p": p, "terms": terms_json(X)} for p, X in enumerate(W)],
    }
    return json.dumps(doc, indent=2)


def wset_from_json(text: str) -> Tuple[int, List[Expression]]:
    doc = json.loads(text)
    W = [None] * len(doc["W"])
    for item in doc["W"]:
        W[item["p"]] = terms_from_json(item["terms"])
    return doc["n"], W
