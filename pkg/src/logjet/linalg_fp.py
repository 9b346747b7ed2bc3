"""Sparse F_p-linear combinations of generator symbols and exact elimination."""
from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .combinat import InconsistencyError
from .indexing import DeltaSymbol, render_symbol, symbol_key


class Chain:
    """A finitely supported F_p-combination of symbols of one degree.

    Chains are treated as immutable values: every operation returns a new
    chain and zero coefficients are never stored.
    """

    __slots__ = ("p", "degree", "terms")

    def __init__(self, p: int, degree: int, terms: Optional[Mapping[DeltaSymbol, int]] = None):
        self.p = p
        self.degree = degree
        clean: Dict[DeltaSymbol, int] = {}
        if terms:
            for sym, c in terms.items():
                c %= p
                if c:
                    if len(sym.slots) != degree:
                        raise ValueError(f"symbol {sym} does not have degree {degree}")
                    clean[sym] = c
        self.terms = clean

    @classmethod
    def zero(cls, p: int, degree: int) -> "Chain":
        return cls(p, degree)

    @classmethod
    def from_symbol(cls, p: int, sym: DeltaSymbol, coeff: int = 1) -> "Chain":
        return cls(p, len(sym.slots), {sym: coeff})

    @classmethod
    def _trusted(cls, p: int, degree: int, terms: Dict[DeltaSymbol, int]) -> "Chain":
        out = cls.__new__(cls)
        out.p, out.degree, out.terms = p, degree, terms
        return out

    def _check(self, other: "Chain") -> None:
        if self.p != other.p:
            raise ValueError("chains over different primes")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        terms = dict(self.terms)
        p = self.p
        for sym, c in other.terms.items():
            v = (terms.get(sym, 0) + c) % p
            if v:
                terms[sym] = v
            else:
                terms.pop(sym, None)
        return Chain._trusted(p, self.degree, terms)

    def __neg__(self) -> "Chain":
        p = self.p
        return Chain._trusted(p, self.degree, {s: (-c) % p for s, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, c: int) -> "Chain":
        return scale(c, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.p == other.p and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.degree, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[DeltaSymbol]:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def coeff(self, sym: DeltaSymbol) -> int:
        return self.terms.get(sym, 0)

    def support(self) -> set:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: symbol_key(kv[0]))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for sym, c in self.sorted_items():
            parts.append(render_symbol(sym) if c == 1 else f"{c}*{render_symbol(sym)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Chain(p={self.p}, degree={self.degree}: {self.render()})"


def add(a: Chain, b: Chain) -> Chain:
    return a + b


def scale(c: int, a: Chain) -> Chain:
    p = a.p
    c %= p
    if c == 0:
        return Chain.zero(p, a.degree)
    return Chain._trusted(p, a.degree, {s: (c * v) % p for s, v in a.terms.items()})


def accumulate(p: int, target: Dict, key, coeff: int) -> None:
    """In-place ``target[key] += coeff`` mod p, dropping zeros."""
    v = (target.get(key, 0) + coeff) % p
    if v:
        target[key] = v
    else:
        target.pop(key, None)


class Echelon:
    """Fully reduced row echelon form over F_p for sparse rows.

    Rows are dicts ``key -> coeff``.  The pivot of a row is its least key
    under ``order``; every stored row has pivot coefficient 1 and contains no
    other pivot, so reducing a vector takes a single pass over its support.
    """

    def __init__(self, p: int, order: Callable[[Hashable], object] = lambda k: k):
        self.p = p
        self.order = order
        self.rows: Dict[Hashable, Dict[Hashable, int]] = {}
        # key -> set of pivots whose row has a non-zero entry at key
        self._col: Dict[Hashable, set] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[Hashable, int]) -> Dict[Hashable, int]:
        p = self.p
        out = {k: c % p for k, c in vec.items() if c % p}
        for k in [k for k in out if k in self.rows]:
            c = out.get(k, 0)
            if not c:
                continue
            for key, v in self.rows[k].items():
                accumulate(p, out, key, -c * v)
        return out

    def used_rows(self, vec: Mapping[Hashable, int]) -> int:
        return sum(1 for k in vec if k in self.rows)

    def add(self, vec: Mapping[Hashable, int]) -> bool:
        """Insert a row; returns False if it was already in the span."""
        p = self.p
        row = self.reduce(vec)
        if not row:
            return False
        piv = min(row, key=self.order)
        inv = pow(row[piv], p - 2, p)
        row = {k: (c * inv) % p for k, c in row.items()}
        # clear the new pivot from existing rows
        for other in list(self._col.get(piv, ())):
            orow = self.rows[other]
            c = orow[piv]
            for key, v in row.items():
                old = orow.get(key, 0)
                new = (old - c * v) % p
                if new:
                    orow[key] = new
                    if not old:
                        self._col.setdefault(key, set()).add(other)
                else:
                    del orow[key]
                    self._col[key].discard(other)
        self.rows[piv] = row
        for key in row:
            self._col.setdefault(key, set()).add(piv)
        return True

    def contains(self, vec: Mapping[Hashable, int]) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: Mapping[Hashable, int], basis: Iterable[Hashable]) -> Optional[Dict[Hashable, int]]:
        """Coordinates of ``vec`` on ``basis`` modulo the row span, or None.

        The echelon must have been built with an order placing every non-basis
        key before every basis key.  A row whose pivot is a basis key means
        the basis is dependent modulo the span; that is reported as an
        ``InconsistencyError``.
        """
        basis = list(basis)
        bset = set(basis)
        for piv in self.rows:
            if piv in bset:
                raise InconsistencyError(
                    f"coordinates are not unique: a relation involves only basis elements (pivot {piv})"
                )
        residual = self.reduce(vec)
        if any(k not in bset for k in residual):
            return None
        return {b: residual.get(b, 0) for b in basis}


def _chain_rows(chains: Sequence[Chain]):
    degrees = {c.degree for c in chains}
    if len(degrees) > 1:
        raise ValueError("generators of mixed degree")
    return degrees


def span_contains(v: Chain, generators: Sequence[Chain]) -> bool:
    """Whether ``v`` lies in the F_p-span of ``generators``."""
    degrees = _chain_rows(generators)
    if degrees and v.degree not in degrees:
        raise ValueError("degree mismatch between v and generators")
    ech = Echelon(v.p, symbol_key)
    for g in generators:
        ech.add(g.terms)
    return ech.contains(v.terms)


def solve_coordinates(
    v: Chain, basis: Sequence[DeltaSymbol], generators: Sequence[Chain]
) -> Optional[Dict[DeltaSymbol, int]]:
    """Find c with v - sum c[b] b in span(generators).

    Returns None when no such c exists and raises ``InconsistencyError`` when
    it would not be unique.
    """
    degrees = _chain_rows(generators)
    if degrees and v.degree not in degrees:
        raise ValueError("degree mismatch between v and generators")
    if any(len(b.slots) != v.degree for b in basis):
        raise ValueError("basis symbols of the wrong degree")
    bset = set(basis)
    ech = Echelon(v.p, lambda s: (s in bset, symbol_key(s)))
    for g in generators:
        ech.add(g.terms)
    return ech.coordinates(v.terms, basis)
