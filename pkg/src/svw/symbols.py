"""Generator symbols and their S-derivatives, packed into sortable integers.

A derivative generator ``S^d g`` is encoded as::

    family << 24 | i << 16 | j << 8 | d

so integer order is the global total order (family rank, i, j, d) used for
canonical words. Families:

* ``J``     -- J_{i,j}, i >= j (free generators of the W-sector)
* ``CUR``   -- the current (E_{i,j})-bar
* ``PHIU``  -- phi^{j,i} = (-1)^{i+1} phi^{(E_{i,j})-bar}, stored as (j, i) with j < i
* ``PHID``  -- phi_{E_{i,j}}, i < j
* ``DUMMY`` -- a central even symbol used to read off operator coefficients
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

J, CUR, PHIU, PHID, DUMMY = 0, 1, 2, 3, 7

FAMILY_NAMES = {J: "J", CUR: "Cur", PHIU: "Phi", PHID: "PhiD", DUMMY: "X"}
FAMILY_BY_NAME = {v: k for k, v in FAMILY_NAMES.items()}

MAX_D = 255

Word = Tuple[int, ...]


def gen(family: int, i: int = 0, j: int = 0, d: int = 0) -> int:
    if not (0 <= i < 256 and 0 <= j < 256 and 0 <= d <= MAX_D):
        raise ValueError("generator index out of range")
    return (family << 24) | (i << 16) | (j << 8) | d


def family(c: int) -> int:
    return c >> 24


def indices(c: int) -> Tuple[int, int]:
    return (c >> 16) & 255, (c >> 8) & 255


def order(c: int) -> int:
    """Number of S-derivatives."""
    return c & 255


def base(c: int) -> int:
    return c & ~255


def derive(c: int, k: int = 1) -> int:
    if (c & 255) + k > MAX_D:
        raise OverflowError("derivative order too large")
    return c + k


DUMMY_X = gen(DUMMY)


@lru_cache(maxsize=None)
def parity(c: int) -> int:
    fam = c >> 24
    i, j = indices(c)
    if fam in (J, CUR, PHIU):
        p = (i + j + 1) & 1
    elif fam == PHID:
        p = (i + j) & 1
    else:
        p = 0
    return (p + (c & 255)) & 1


@lru_cache(maxsize=None)
def weight(c: int) -> Fraction:
    fam = c >> 24
    i, j = indices(c)
    if fam in (J, CUR):
        w = Fraction(i - j + 1, 2)
    elif fam == PHIU:
        w = Fraction(j - i, 2)
    elif fam == PHID:
        w = Fraction(1 + i - j, 2)
    else:
        w = Fraction(0)
    return w + Fraction(c & 255, 2)


@lru_cache(maxsize=None)
def bigrade(c: int) -> Tuple[Fraction, Fraction]:
    """(p, q) bigrade; S-derivatives carry (0, 0)."""
    fam = c >> 24
    i, j = indices(c)
    if fam in (J, CUR):
        ja = Fraction(j - i, 2)
        return ja, -ja
    if fam == PHIU:
        jm = Fraction(i - j, 2)   # phi^{i,j} <-> E_{j,i} in g((i-j)/2)
        return jm + Fraction(1, 2), -jm + Fraction(1, 2)
    if fam == PHID:
        jn = Fraction(j - i, 2)
        return jn - 1, -jn
    return Fraction(0), Fraction(0)


def word_parity(w: Word) -> int:
    p = 0
    for c in w:
        p ^= parity(c)
    return p


def word_weight(w: Word) -> Fraction:
    return sum((weight(c) for c in w), Fraction(0))


def word_filtration(w: Word) -> Fraction:
    return sum((bigrade(c)[0] for c in w), Fraction(0))


def name(c: int) -> str:
    fam = c >> 24
    i, j = indices(c)
    core = "X" if fam == DUMMY else f"{FAMILY_NAMES[fam]}[{i},{j}]"
    d = c & 255
    return f"S^{d}({core})" if d else core


@dataclass(frozen=True)
class Generator:
    family: str
    i: int
    j: int
    parity: int
    weight: Fraction
    bigrade: Tuple[Fraction, Fraction]

    @classmethod
    def of(cls, c: int) -> "Generator":
        b = base(c)
        i, j = indices(b)
        return cls(FAMILY_NAMES[family(b)], i, j, parity(b), weight(b), bigrade(b))
