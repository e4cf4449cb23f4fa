"""Free and direct products of two engines.

Generator names of factor ``i`` are prefixed ``"<i>."``.
"""

from __future__ import annotations

from math import gcd

from ..wordlang import Letter, Word, GroupExpr, min_rotation_index, rotation_period
from .base import GroupEngine, RootSet, windowed_coset_rep


def _prefixed(i: int, w: Word) -> Word:
    return Word(tuple(Letter(f"{i}.{l.gen}", l.sign) for l in w.letters))


class FreeProductEngine(GroupEngine):
    """Payload: tuple of syllables ``(factor, factor_payload)``, alternating
    factors, every syllable nontrivial."""

    tag = "product"

    def __init__(self, expr: GroupExpr, factors):
        self.F = tuple(factors)
        names, elems = [], []
        for i, f in enumerate(self.F):
            for n, g in zip(f.generators, f.gen_elements):
                names.append(f"{i}.{n}")
                elems.append(((i, g),) if g != f.identity else ())
        super().__init__(expr, names, elems)
        self.identity = ()

    def factors(self):
        return self.F

    def inject(self, i: int, p):
        return () if p == self.F[i].identity else ((i, p),)

    def mul(self, g, h):
        if not g:
            return h
        if not h:
            return g
        out = list(g)
        j = 0
        while out and j < len(h):
            (i, p), (i2, q) = out[-1], h[j]
            if i != i2:
                break
            f = self.F[i]
            r = f.mul(p, q)
            out.pop()
            j += 1
            if r != f.identity:
                out.append((i, r))
                break
        return tuple(out) + h[j:]

    def inv(self, g):
        return tuple((i, self.F[i].inv(p)) for i, p in reversed(g))

    def contains(self, g) -> bool:
        if not isinstance(g, tuple):
            return False
        prev = None
        for syl in g:
            if not (isinstance(syl, tuple) and len(syl) == 2):
                return False
            i, p = syl
            if i not in range(len(self.F)) or i == prev:
                return False
            f = self.F[i]
            if not f.contains(p) or p == f.identity:
                return False
            prev = i
        return True

    def word_of(self, g) -> Word:
        w = Word()
        for i, p in g:
            w = w + _prefixed(i, self.F[i].word_of(p))
        return w

    def norm(self, g) -> int:
        return len(g)

    def geodesic_length(self, g):
        total = 0
        for i, p in g:
            l = self.F[i].geodesic_length(p)
            if l is None:
                return None
            total += l
        return total

    def split_core(self, g):
        """(core, conj) with g = conj core conj^-1 and core cyclically reduced."""
        u, c = (), g
        while len(c) >= 2 and c[0][0] == c[-1][0]:
            s = (c[0],)
            c = self.conj(c, s)
            u = self.mul(u, s)
        return c, u

    def order(self, g):
        if not g:
            return 1
        core, _ = self.split_core(g)
        if len(core) == 1:
            i, p = core[0]
            return self.F[i].order(p)
        return None

    def coset_rep(self, g, a):
        if not a:
            return g, 0
        core, ua = self.split_core(a)
        if len(core) >= 2:
            return windowed_coset_rep(self, g, a, len(core))
        i, s = core[0]
        h = self.mul(g, ua)
        k = 0
        if h and h[-1][0] == i:
            r_last, k = self.F[i].coset_rep(h[-1][1], s)
            h = h[:-1] + self.inject(i, r_last)
        return self.mul(h, self.inv(ua)), k

    def conj_normal(self, g):
        core, u = self.split_core(g)
        if not core:
            return (), ()
        if len(core) == 1:
            i, p = core[0]
            kp, wp = self.F[i].conj_normal(p)
            return self.inject(i, kp), self.mul(u, self.inject(i, wp))
        r = min_rotation_index(core)
        return core[r:] + core[:r], self.mul(u, core[:r])

    def root_exponents(self, g) -> RootSet:
        core, _ = self.split_core(g)
        if len(core) == 0:
            return RootSet(modulus=1, residues=frozenset([0]))
        if len(core) == 1:
            i, p = core[0]
            return self.F[i].root_exponents(p)
        return RootSet.divisors_of(len(core) // rotation_period(core))

    def conj_power_candidates(self, g, a):
        ca, _ = self.split_core(a)
        cg, _ = self.split_core(g)
        if not ca:
            return [0]
        if len(ca) >= 2:
            if len(cg) % len(ca):
                return []
            q = len(cg) // len(ca)
            return [q, -q] if q else [0]
        if not cg:
            return [0]
        if len(cg) == 1 and cg[0][0] == ca[0][0]:
            i = ca[0][0]
            return self.F[i].conj_power_candidates(cg[0][1], ca[0][1])
        return []

    def is_loxodromic(self, g) -> bool:
        return len(self.split_core(g)[0]) >= 2

    def in_factor(self, g, i: int) -> bool:
        return not g or (len(g) == 1 and g[0][0] == i)


class DirectProductEngine(GroupEngine):
    """Payload: pair of factor payloads."""

    tag = "direct"

    def __init__(self, expr: GroupExpr, factors):
        self.F = tuple(factors)
        names, elems = [], []
        for i, f in enumerate(self.F):
            for n, g in zip(f.generators, f.gen_elements):
                names.append(f"{i}.{n}")
                elems.append(self.inject(i, g))
        super().__init__(expr, names, elems)
        self.identity = tuple(f.identity for f in self.F)

    def factors(self):
        return self.F

    def inject(self, i: int, p):
        return tuple(p if j == i else f.identity for j, f in enumerate(self.F))

    def mul(self, g, h):
        return tuple(f.mul(x, y) for f, x, y in zip(self.F, g, h))

    def inv(self, g):
        return tuple(f.inv(x) for f, x in zip(self.F, g))

    def contains(self, g) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == len(self.F)
            and all(f.contains(x) for f, x in zip(self.F, g))
        )

    def word_of(self, g) -> Word:
        w = Word()
        for i, (f, x) in enumerate(zip(self.F, g)):
            w = w + _prefixed(i, f.word_of(x))
        return w

    def norm(self, g) -> int:
        return sum(f.norm(x) for f, x in zip(self.F, g))

    def geodesic_length(self, g):
        parts = [f.geodesic_length(x) for f, x in zip(self.F, g)]
        return None if None in parts else sum(parts)

    def order(self, g):
        m = 1
        for f, x in zip(self.F, g):
            o = f.order(x)
            if o is None:
                return None
            m = m * o // gcd(m, o)
        return m

    def coset_rep(self, g, a):
        n = self.order(a)
        if n is not None:
            best, r = None, g
            ainv = self.inv(a)
            for k in range(n):
                cand = (self.norm(r), r, k)
                if best is None or cand < best:
                    best = cand
                r = self.mul(r, ainv)
            return best[1], best[2]
        for f, x, y in zip(self.F, g, a):
            if f.order(y) is None:
                _, k = f.coset_rep(x, y)
                return self.mul(g, self.pow(a, -k)), k
        raise AssertionError("unreachable")

    def conj_normal(self, g):
        pairs = [f.conj_normal(x) for f, x in zip(self.F, g)]
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)

    def root_exponents(self, g) -> RootSet:
        sets = [f.root_exponents(x) for f, x in zip(self.F, g)]
        finite = [s for s in sets if s.finite is not None]
        if finite:
            cands = set.intersection(*(set(s.finite) for s in finite))
            return RootSet(frozenset(n for n in cands if all(n in s for s in sets)))
        m = 1
        for s in sets:
            m = m * s.modulus // gcd(m, s.modulus)
        return RootSet(modulus=m, residues=frozenset(r for r in range(m) if all(r in s for s in sets)))

    def conj_power_candidates(self, g, a):
        if self.order(a) is not None:
            return None
        for f, x, y in zip(self.F, g, a):
            if f.order(y) is None:
                cands = f.conj_power_candidates(x, y)
                return list(cands)
        raise AssertionError("unreachable")
