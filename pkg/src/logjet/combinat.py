"""Exact combinatorics for divided powers of level m.

Everything here is computed with Python integers and reduced mod p only at
the very end.  The three binomials are

    binom(k, k')  = k! / (k'! k''!)
    mbinom(k, k') = q! / (q'! q''!)        q = floor(k / p^m), etc.
    qbinom(k, k') = binom(k, k') / mbinom(k, k')

with k'' = k - k'.  The last one is not always an integer (for p = 2, m = 1,
qbinom(6, 3) = 20/6), but it is always p-integral: its denominator is prime
to p.  It is therefore kept as an exact ``Fraction`` and reduced mod p with
``mod_p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence


class InconsistencyError(RuntimeError):
    """Raised when an internal self-check fails (e.g. an inexact division)."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Params:
    """Ambient configuration: prime ``p``, level ``m`` and coordinate count ``n``."""

    p: int
    m: int
    n: int = 1
    pm: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m < 0:
            raise ValueError(f"level m={self.m} must be non-negative")
        if self.n < 1:
            raise ValueError(f"coordinate count n={self.n} must be >= 1")
        object.__setattr__(self, "pm", self.p ** self.m)


def digit_sum(t: int, p: int) -> int:
    """Sum of the base-``p`` digits of ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    s = 0
    while t:
        t, r = divmod(t, p)
        s += r
    return s


def _int_valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def valuation(x, p: int) -> int:
    """p-adic valuation of a non-zero integer or ``Fraction``."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    x = Fraction(x)
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def mod_p(x, p: int) -> int:
    """Residue of a p-integral rational in [0, p)."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise InconsistencyError(f"{x} is not p-integral for p={p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def _check_le(k: int, kp: int) -> None:
    if kp < 0 or k < 0 or kp > k:
        raise ValueError(f"need 0 <= k' <= k, got k={k}, k'={kp}")


def binom(k: int, kp: int) -> int:
    _check_le(k, kp)
    return comb(k, kp)


def mbinom(params: Params, k: int, kp: int) -> int:
    """The level-m binomial <k choose k'>.

    Here q' + q'' is q or q - 1, and in both cases q!/(q'! q''!) is an
    integer, so the division below is exact.
    """
    _check_le(k, kp)
    pm = params.pm
    q, q1, q2 = k // pm, kp // pm, (k - kp) // pm
    return factorial(q) // (factorial(q1) * factorial(q2))


def qbinom(params: Params, k: int, kp: int) -> Fraction:
    """The level-m binomial {k choose k'} = binom / mbinom, exact.

    Raises ``InconsistencyError`` if the result is not p-integral.
    """
    val = Fraction(binom(k, kp), mbinom(params, k, kp))
    if val.denominator % params.p == 0:
        raise InconsistencyError(
            f"qbinom({k}, {kp}) = {val} is not p-integral for p={params.p}, m={params.m}"
        )
    return val


def qbinom_is_integer(params: Params, k: int, kp: int) -> bool:
    """Whether mbinom(k, k') divides binom(k, k') in the integers."""
    return binom(k, kp) % mbinom(params, k, kp) == 0


def _multi(fn, params, I: Sequence[int], J: Sequence[int]):
    if len(I) != len(J):
        raise ValueError("multi-indices of different lengths")
    if any(j > i for i, j in zip(I, J)):
        raise ValueError(f"{tuple(J)} is not <= {tuple(I)}")
    out = 1
    for i, j in zip(I, J):
        out *= fn(params, i, j) if params is not None else fn(i, j)
    return out


def multi_binom(I: Sequence[int], J: Sequence[int]) -> int:
    return _multi(binom, None, I, J)


def multi_mbinom(params: Params, I: Sequence[int], J: Sequence[int]) -> int:
    return _multi(mbinom, params, I, J)


def multi_qbinom(params: Params, I: Sequence[int], J: Sequence[int]) -> Fraction:
    return _multi(qbinom, params, I, J)


def gamma_exact(params: Params, A, B, C) -> Fraction:
    """Exact (p-integral) value of the structure constant before reduction mod p."""
    if not len(A) == len(B) == len(C):
        raise ValueError("A, B, C must have the same length")
    ABC = tuple(a + b + c for a, b, c in zip(A, B, C))
    BC = tuple(b + c for b, c in zip(B, C))
    AB = tuple(a + b for a, b in zip(A, B))
    AC = tuple(a + c for a, c in zip(A, C))
    return (
        multi_qbinom(params, ABC, A)
        * multi_qbinom(params, BC, B)
        * multi_mbinom(params, AB, A)
        * multi_mbinom(params, AC, A)
    )


@lru_cache(maxsize=None)
def _gamma_cached(params: Params, A: tuple, B: tuple, C: tuple) -> int:
    return mod_p(gamma_exact(params, A, B, C), params.p)


def gamma(params: Params, A, B, C) -> int:
    """Residue mod p of {A+B+C, A} {B+C, B} <A+B, A> <A+C, A>."""
    return _gamma_cached(params, tuple(A), tuple(B), tuple(C))


def sigma(params: Params, q: int) -> int:
    """Least multiple of p strictly greater than ``q`` (so sigma(0) = p)."""
    if q < 0:
        raise ValueError("q must be non-negative")
    p = params.p
    return p * (q // p + 1)


def falling_ratio(u: int, q: int) -> int:
    """u!/q! for u >= q, as the product (q+1)(q+2)...u."""
    if u < q:
        raise ValueError("need u >= q")
    out = 1
    for x in range(q + 1, u + 1):
        out *= x
    return out
