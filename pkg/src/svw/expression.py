"""Exact linear combinations of normally ordered words over Q[k].

Internally a term map is a plain dict ``{(word, kpow): Fraction}``; the
:class:`Expression` class wraps one and treats it as immutable. Words are
tuples of generator codes (see :mod:`svw.symbols`) denoting right-nested
normally ordered products; the empty word is the vacuum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple

from . import symbols as sy

Terms = Dict[Tuple[sy.Word, int], Fraction]

VACUUM: sy.Word = ()


def add_into(acc: Terms, terms: Terms, scale=1, kshift: int = 0) -> Terms:
    if not scale:
        return acc
    for (w, kp), c in terms.items():
        key = (w, kp + kshift)
        v = acc.get(key, 0) + c * scale
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)
    return acc


def add_term(acc: Terms, w: sy.Word, kp: int, c) -> None:
    key = (w, kp)
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def scaled(terms: Terms, scale=1, kshift: int = 0) -> Terms:
    if not scale:
        return {}
    if scale == 1 and kshift == 0:
        return dict(terms)
    return {(w, kp + kshift): c * scale for (w, kp), c in terms.items()}


def single(w: sy.Word, c=1, kp: int = 0) -> Terms:
    return {(w, kp): Fraction(c)} if c else {}


def terms_parity(terms: Terms) -> Optional[int]:
    ps = {sy.word_parity(w) for (w, _) in terms}
    if len(ps) > 1:
        raise ValueError("expression is not parity-homogeneous")
    return ps.pop() if ps else None


class Expression:
    """Immutable canonical element of the vertex algebra."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Terms] = None):
        self.terms: Terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = Fraction(c)
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls) -> "Expression":
        return cls()

    @classmethod
    def vacuum(cls, c=1, kpow: int = 0) -> "Expression":
        return cls(single(VACUUM, c, kpow))

    @classmethod
    def word(cls, w: Iterable[int], c=1, kpow: int = 0) -> "Expression":
        return cls(single(tuple(w), c, kpow))

    @classmethod
    def gen(cls, code: int, c=1, kpow: int = 0) -> "Expression":
        return cls(single((code,), c, kpow))

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "Expression") -> "Expression":
        if not isinstance(other, Expression):
            return NotImplemented
        return Expression(add_into(dict(self.terms), other.terms))

    def __sub__(self, other: "Expression") -> "Expression":
        if not isinstance(other, Expression):
            return NotImplemented
        return Expression(add_into(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "Expression":
        return Expression(scaled(self.terms, -1))

    def __mul__(self, s) -> "Expression":
        if isinstance(s, Expression):
            return NotImplemented
        return Expression(scaled(self.terms, Fraction(s)))

    __rmul__ = __mul__

    def kmul(self, power: int = 1) -> "Expression":
        """Multiply by k**power."""
        return Expression(scaled(self.terms, 1, power))

    # -- inspection -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Expression):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[sy.Word, int, Fraction]]:
        for (w, kp), c in self.sorted_items():
            yield w, kp, c

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0][0], t[0][1]))

    def words(self):
        return sorted({w for (w, _) in self.terms}, key=lambda w: (len(w), w))

    def coefficient(self, w: sy.Word) -> Dict[int, Fraction]:
        """Level polynomial multiplying ``w``, as ``{kpow: coefficient}``."""
        return {kp: c for (ww, kp), c in self.terms.items() if ww == tuple(w)}

    @property
    def parity(self) -> Optional[int]:
        return terms_parity(self.terms)

    def weight(self) -> Fraction:
        ws = {sy.word_weight(w) for (w, _) in self.terms}
        if len(ws) != 1:
            raise ValueError("expression is zero or not weight-homogeneous")
        return ws.pop()

    def filtration_degree(self) -> Fraction:
        """Minimum over monomials of the summed first bigrade component."""
        if not self.terms:
            raise ValueError("zero expression has no filtration degree")
        return min(sy.word_filtration(w) for (w, _) in self.terms)

    def map_words(self, fn) -> "Expression":
        out: Terms = {}
        for (w, kp), c in self.terms.items():
            nw = fn(w)
            if nw is not None:
                add_term(out, nw, kp, c)
        return Expression(out)

    def filter(self, keep) -> "Expression":
        return Expression({key: c for key, c in self.terms.items() if keep(key[0])})

    def __repr__(self) -> str:
        from .exprio import to_text
        return f"Expression({to_text(self)!r})"
