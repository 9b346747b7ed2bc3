"""Multi-indices, slot exponents and the generator symbols d(I; J1, ..., Jr).

Multi-indices are plain tuples of non-negative ints.  Positions passed in by
callers (``unit``, ``s_index``) are 1-based, matching the usual mathematical
numbering of coordinates and tensor slots.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Iterator, NamedTuple, Optional, Sequence, Tuple

from .combinat import Params

MultiIndex = Tuple[int, ...]


def norm(I: Sequence[int]) -> int:
    return sum(I)


def hat(I: Sequence[int]) -> MultiIndex:
    """Drop the last component."""
    if len(I) < 1:
        raise ValueError("hat of an empty multi-index")
    return tuple(I[:-1])


def embed_hat(I: Sequence[int]) -> MultiIndex:
    """Re-embed a hatted index by appending a zero last component."""
    return tuple(I) + (0,)


def unit(i: int, n: int) -> MultiIndex:
    if not 1 <= i <= n:
        raise ValueError(f"unit position {i} out of range 1..{n}")
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def zero(n: int) -> MultiIndex:
    return (0,) * n


def add(I: Sequence[int], J: Sequence[int]) -> MultiIndex:
    return tuple(a + b for a, b in zip(I, J))


def sub(I: Sequence[int], J: Sequence[int]) -> MultiIndex:
    out = tuple(a - b for a, b in zip(I, J))
    if any(x < 0 for x in out):
        raise ValueError(f"{tuple(J)} is not <= {tuple(I)}")
    return out


def leq(J: Sequence[int], I: Sequence[int]) -> bool:
    return all(j <= i for j, i in zip(J, I))


def in_slot_set(params: Params, J: Sequence[int]) -> bool:
    """Whether 0 < |J| <= p^m."""
    return 0 < sum(J) <= params.pm


def s_index(slots: Sequence[Sequence[int]]) -> int:
    """1-based position of the first slot with non-zero last component, else r."""
    if not slots:
        raise ValueError("s_index needs at least one slot")
    for pos, J in enumerate(slots, start=1):
        if J[-1] != 0:
            return pos
    return len(slots)


def slot_set(params: Params) -> list[MultiIndex]:
    """All J with 0 < |J| <= p^m, in lexicographic order."""
    return _slot_set(params.n, params.pm)


@lru_cache(maxsize=None)
def _slot_set(n: int, pm: int) -> list[MultiIndex]:
    return [J for J in product(range(pm + 1), repeat=n) if 0 < sum(J) <= pm]


def indices_of_weight_at_most(n: int, w: int) -> list[MultiIndex]:
    return [I for I in product(range(w + 1), repeat=n) if sum(I) <= w]


def indices_of_weight(n: int, w: int) -> list[MultiIndex]:
    return [I for I in product(range(w + 1), repeat=n) if sum(I) == w]


@lru_cache(maxsize=None)
def _triples(i: int) -> tuple:
    return tuple((a, b, i - a - b) for a in range(i + 1) for b in range(i - a + 1))


@lru_cache(maxsize=None)
def decompositions(
    I: MultiIndex, forbid_B_eq_I: bool = False, forbid_C_eq_I: bool = False
) -> tuple:
    """All (A, B, C) with A + B + C = I, in lexicographic order.

    The flags drop the triple with B = I (i.e. (0, I, 0)) and/or the one with
    C = I (i.e. (0, 0, I)).
    """
    I = tuple(I)
    out = []
    for combo in product(*(_triples(i) for i in I)):
        A = tuple(t[0] for t in combo)
        B = tuple(t[1] for t in combo)
        C = tuple(t[2] for t in combo)
        if forbid_B_eq_I and B == I:
            continue
        if forbid_C_eq_I and C == I:
            continue
        out.append((A, B, C))
    out.sort()
    return tuple(out)


class DeltaSymbol(NamedTuple):
    """The generator eta^{I} (dlog t)^{J1} (x) ... (x) (dlog t)^{Jr}."""

    eta: MultiIndex
    slots: Tuple[MultiIndex, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.slots)

    def __str__(self) -> str:
        return render_symbol(self)


def delta(eta: Sequence[int], *slots: Sequence[int]) -> DeltaSymbol:
    return DeltaSymbol(tuple(eta), tuple(tuple(J) for J in slots))


def symbol_key(sym: DeltaSymbol):
    """Total order: degree, then eta, then slots lexicographically."""
    return (len(sym.slots), sym.eta, sym.slots)


def canonicalize(params: Params, sym: DeltaSymbol) -> Optional[DeltaSymbol]:
    """Return ``sym`` if every slot lies in the slot set, else ``None`` (zero)."""
    n = params.n
    if len(sym.eta) != n or any(len(J) != n for J in sym.slots):
        raise ValueError(f"symbol {sym!r} has the wrong number of coordinates for n={n}")
    if any(x < 0 for x in sym.eta):
        raise ValueError(f"negative exponent in {sym!r}")
    pm = params.pm
    for J in sym.slots:
        if any(x < 0 for x in J):
            raise ValueError(f"negative exponent in {sym!r}")
        w = sum(J)
        if w == 0 or w > pm:
            return None
    return sym


def canonical_symbols(params: Params, degree: int, max_weight: int) -> Iterator[DeltaSymbol]:
    """Every canonical symbol of the given degree with |I| <= max_weight, in order."""
    etas = sorted(indices_of_weight_at_most(params.n, max_weight))
    slots_list = list(product(slot_set(params), repeat=degree))
    for I in etas:
        for slots in slots_list:
            yield DeltaSymbol(I, slots)


def _render_index(I: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in I) + ")"


def render_symbol(sym: DeltaSymbol) -> str:
    return "d(" + _render_index(sym.eta) + ";" + ",".join(_render_index(J) for J in sym.slots) + ")"


_SYMBOL_RE = re.compile(r"^\s*d\((\([0-9,\s]*\))\s*;(.*)\)\s*$")
_GROUP_RE = re.compile(r"\(([0-9,\s]*)\)")


def _parse_index(text: str) -> MultiIndex:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def parse_symbol(text: str) -> DeltaSymbol:
    """Inverse of ``render_symbol``: ``"d((2,0);(1,0),(0,1))"``."""
    m = _SYMBOL_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse symbol {text!r}")
    eta = _parse_index(m.group(1)[1:-1])
    rest = m.group(2).strip()
    slots = tuple(_parse_index(g) for g in _GROUP_RE.findall(rest))
    leftover = _GROUP_RE.sub("", rest).replace(",", "").strip()
    if leftover:
        raise ValueError(f"cannot parse slots in {text!r}")
    return DeltaSymbol(eta, slots)
