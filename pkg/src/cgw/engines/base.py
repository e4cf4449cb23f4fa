"""The group-engine contract.

Elements are plain hashable payloads in canonical form (engine specific).
Payloads of one engine are mutually comparable with ``<``; that order is
the tie-break used by every canonical choice downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any, Iterable, Sequence

from ..wordlang import Letter, Word, GroupExpr, print_word, free_reduce

Element = Any


class EngineError(ValueError):
    pass


class EngineMismatch(EngineError):
    pass


class CapabilityError(EngineError):
    pass


class UnknownGenerator(EngineError):
    pass


@dataclass(frozen=True)
class RootSet:
    """Exponents n >= 2 for which an n-th root exists.

    Either a finite set (``finite``) or periodic: n admits a root iff
    ``n % modulus in residues``.
    """

    finite: frozenset[int] | None = None
    modulus: int = 0
    residues: frozenset[int] = frozenset()

    def __contains__(self, n: int) -> bool:
        if self.finite is not None:
            return n in self.finite
        return n % self.modulus in self.residues

    def is_empty(self) -> bool:
        if self.finite is not None:
            return not self.finite
        return not any((n % self.modulus) in self.residues for n in range(2, 2 + self.modulus))

    @staticmethod
    def divisors_of(m: int) -> "RootSet":
        m = abs(m)
        return RootSet(frozenset(n for n in range(2, m + 1) if m % n == 0))


def intersect_roots(sets: Sequence[RootSet]) -> bool:
    """True iff some n >= 2 lies in every set."""
    finite = [s for s in sets if s.finite is not None]
    if finite:
        cands = set.intersection(*(set(s.finite) for s in finite))
        return any(all(n in s for s in sets) for n in cands)
    m = 1
    for s in sets:
        m = m * s.modulus // gcd(m, s.modulus)
    return any(all(n in s for s in sets) for n in range(2, 2 + m))


class GroupEngine:
    """Base class; concrete engines fill in the element operations."""

    capability = "canonical"
    tag = "engine"

    def __init__(self, expr: GroupExpr, generators: Sequence[str], gen_elements: Sequence[Element]):
        self.expr = expr
        self.generators = tuple(generators)
        self.gen_elements = tuple(gen_elements)
        self._gen_map = dict(zip(self.generators, self.gen_elements))

    # -- required ---------------------------------------------------------
    identity: Element = None

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def word_of(self, g) -> Word:
        """A word over ``generators`` evaluating to ``g``."""
        raise NotImplementedError

    def order(self, g) -> int | None:
        """Order of g, or None when infinite."""
        raise NotImplementedError

    def norm(self, g) -> int:
        """A cheap size used to bound searches (not the word metric)."""
        raise NotImplementedError

    def coset_rep(self, g, a) -> tuple[Element, int]:
        """Canonical representative of the left coset g<a>: (r, k) with g = r a^k."""
        raise NotImplementedError

    def conj_normal(self, g) -> tuple[Element, Element]:
        """(key, w) with w^-1 g w == key, key canonical for the conjugacy class."""
        raise CapabilityError(f"{self.describe()} has no canonical conjugacy keys")

    def root_exponents(self, g) -> RootSet:
        raise CapabilityError(f"{self.describe()} has no primitivity test")

    def conj_power_candidates(self, g, a) -> Iterable[int] | None:
        """Exponents k for which g ~ a^k is possible, or None meaning 'all k
        modulo the (finite) order of a'."""
        raise CapabilityError(f"{self.describe()} cannot test conjugacy into cyclic subgroups")

    # -- optional ---------------------------------------------------------
    def geodesic_length(self, g) -> int | None:
        """Exact word length for the standard generators when a closed form
        is known; None otherwise."""
        return None

    def factors(self) -> tuple["GroupEngine", ...]:
        return ()

    # -- derived ----------------------------------------------------------
    def describe(self) -> str:
        return self.expr.to_dsl()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"

    def is_identity(self, g) -> bool:
        return g == self.identity

    def equal(self, g, h) -> bool:
        return g == h

    def check(self, *elements):
        for g in elements:
            if not self.contains(g):
                raise EngineMismatch(f"{g!r} is not an element of {self.describe()}")

    def pow(self, g, k: int):
        if k < 0:
            g, k = self.inv(g), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, g)
            k >>= 1
            if k:
                g = self.mul(g, g)
        return result

    def conj(self, g, t):
        """g^t = t^-1 g t."""
        return self.mul(self.mul(self.inv(t), g), t)

    def gen(self, name: str, sign: int = 1):
        try:
            g = self._gen_map[name]
        except KeyError:
            raise UnknownGenerator(f"{name!r} is not a generator of {self.describe()}") from None
        return g if sign == 1 else self.inv(g)

    def evaluate(self, w: Word):
        g = self.identity
        for l in w.letters:
            g = self.mul(g, self.gen(l.gen, l.sign))
        return g

    def symmetric_generators(self) -> list[tuple[Letter, Element]]:
        """X u X^-1 as (letter, element), identity and duplicates dropped."""
        out, seen = [], set()
        for name, g in zip(self.generators, self.gen_elements):
            for sign, h in ((1, g), (-1, self.inv(g))):
                if h == self.identity or h in seen:
                    continue
                seen.add(h)
                out.append((Letter(name, sign), h))
        return out

    def format(self, g) -> str:
        return print_word(self.word_of(g))

    def class_key(self, g):
        return self.conj_normal(g)[0]

    def in_cyclic(self, g, a) -> int | None:
        """k with g = a^k, or None when g is not in <a>."""
        r, k = self.coset_rep(g, a)
        return k if r == self.identity else None

    def conj_into_cyclic(self, g, a) -> int | None:
        """Some k with g conjugate to a^k, or None."""
        key = self.class_key(g)
        cands = self.conj_power_candidates(g, a)
        if cands is None:
            cands = range(self.order(a))
        for k in cands:
            if self.class_key(self.pow(a, k)) == key:
                return k
        return None


def windowed_coset_rep(engine: GroupEngine, g, a, core_norm: int, slack: int = 2):
    """Coset rep for infinite-order ``a`` whose powers grow by ``core_norm``
    per step: minimise (norm, payload) over g a^k in a window that provably
    holds every element not larger than g itself."""
    K = (2 * engine.norm(g) + 4 * engine.norm(a) + slack) // max(core_norm, 1) + 2
    best = None
    h = engine.mul(g, engine.pow(a, -K))
    for k in range(-K, K + 1):
        cand = (engine.norm(h), h, -k)
        if best is None or cand[:2] < best[:2]:
            best = cand
        h = engine.mul(h, a)
    _, r, negk = best
    return r, negk


def word_from_letters(pairs: Iterable[tuple[str, int]]) -> Word:
    """Run-length pairs (gen, exponent) -> reduced word."""
    letters = []
    for gen, e in pairs:
        letters.extend([Letter(gen, 1 if e > 0 else -1)] * abs(e))
    return free_reduce(Word(tuple(letters)))
