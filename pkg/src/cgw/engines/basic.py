"""Leaf engines: free, cyclic, free abelian, Heisenberg UT3(Z), finite tables."""

from __future__ import annotations

from collections import deque
from math import gcd

from ..wordlang import Letter, Word, GroupExpr, min_rotation_index, rotation_period
from .base import (
    GroupEngine,
    RootSet,
    windowed_coset_rep,
    word_from_letters,
)

ALL_ROOTS = RootSet(modulus=1, residues=frozenset([0]))


def default_names(rank: int) -> list[str]:
    if rank <= 4:
        return list("xyzw"[:rank])
    return [f"x{i + 1}" for i in range(rank)]


class FreeEngine(GroupEngine):
    """Free group; payload is a reduced tuple of letter codes, where code
    2i is generator i and 2i+1 its inverse (so inverse is ``code ^ 1``)."""

    tag = "free"

    def __init__(self, expr: GroupExpr, rank: int):
        self.rank = rank
        names = default_names(rank)
        super().__init__(expr, names, [(2 * i,) for i in range(rank)])
        self.identity = ()

    def mul(self, g, h):
        n, m = len(g), len(h)
        i = 0
        while i < n and i < m and g[n - 1 - i] == h[i] ^ 1:
            i += 1
        if i == 0:
            return g + h
        return g[: n - i] + h[i:]

    def inv(self, g):
        return tuple(c ^ 1 for c in reversed(g))

    def contains(self, g) -> bool:
        if not isinstance(g, tuple):
            return False
        for k, c in enumerate(g):
            if not isinstance(c, int) or not 0 <= c < 2 * self.rank:
                return False
            if k and g[k - 1] == c ^ 1:
                return False
        return True

    def word_of(self, g) -> Word:
        return Word(tuple(Letter(self.generators[c >> 1], -1 if c & 1 else 1) for c in g), True)

    def order(self, g):
        return 1 if not g else None

    def norm(self, g) -> int:
        return len(g)

    def geodesic_length(self, g) -> int:
        return len(g)

    @staticmethod
    def split_core(g):
        """(core, conj) with g = conj core conj^-1, core cyclically reduced."""
        i, j = 0, len(g) - 1
        while i < j and g[i] == g[j] ^ 1:
            i += 1
            j -= 1
        return g[i:j + 1], g[:i]

    def coset_rep(self, g, a):
        if not a:
            return g, 0
        if self.rank == 1:
            # Z: closed form, same (norm, payload) minimum as the window
            n = len(g) * (-1 if g and g[0] else 1)
            m = len(a) * (-1 if a[0] else 1)
            r = n % abs(m)
            if abs(m) - r < r:
                r -= abs(m)
            rep = (0,) * r if r >= 0 else (1,) * -r
            return rep, (n - r) // m
        core, _ = self.split_core(a)
        return windowed_coset_rep(self, g, a, len(core))

    def conj_normal(self, g):
        core, u = self.split_core(g)
        r = min_rotation_index(core)
        return core[r:] + core[:r], u + core[:r]

    def root_exponents(self, g) -> RootSet:
        if not g:
            return ALL_ROOTS
        core, _ = self.split_core(g)
        return RootSet.divisors_of(len(core) // rotation_period(core))

    def conj_power_candidates(self, g, a):
        if not a:
            return [0]
        lg = len(self.split_core(g)[0])
        la = len(self.split_core(a)[0])
        if lg % la:
            return []
        q = lg // la
        return [q, -q] if q else [0]


class CyclicEngine(GroupEngine):
    """Z/n with generator u; payload is the residue in [0, n)."""

    tag = "cyclic"

    def __init__(self, expr: GroupExpr, order: int):
        self.n = order
        super().__init__(expr, ["u"], [1 % order])
        self.identity = 0

    def mul(self, g, h):
        return (g + h) % self.n

    def inv(self, g):
        return (-g) % self.n

    def contains(self, g) -> bool:
        return isinstance(g, int) and 0 <= g < self.n

    def word_of(self, g) -> Word:
        return word_from_letters([("u", g)])

    def order(self, g):
        return self.n // gcd(g, self.n)

    def norm(self, g) -> int:
        return min(g, self.n - g)

    def geodesic_length(self, g) -> int:
        return min(g, self.n - g)

    def coset_rep(self, g, a):
        d = gcd(a, self.n)
        r = g % d
        nn = self.n // d
        if nn == 1:
            return r, 0
        k = ((g - r) // d) * pow(a // d, -1, nn) % nn
        return r, k

    def conj_normal(self, g):
        return g, 0

    def root_exponents(self, g) -> RootSet:
        n = self.n
        return RootSet(modulus=n, residues=frozenset(r for r in range(n) if g % gcd(r, n) == 0))

    def conj_power_candidates(self, g, a):
        return None


class AbelianEngine(GroupEngine):
    """Z^r; payload is the exponent vector."""

    tag = "abelian"

    def __init__(self, expr: GroupExpr, rank: int):
        self.rank = rank
        units = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        super().__init__(expr, default_names(rank), units)
        self.identity = (0,) * rank

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def contains(self, g) -> bool:
        return isinstance(g, tuple) and len(g) == self.rank and all(isinstance(x, int) for x in g)

    def word_of(self, g) -> Word:
        return word_from_letters(zip(self.generators, g))

    def order(self, g):
        return 1 if not any(g) else None

    def norm(self, g) -> int:
        return sum(abs(x) for x in g)

    def geodesic_length(self, g) -> int:
        return self.norm(g)

    def coset_rep(self, g, a):
        for i, ai in enumerate(a):
            if ai:
                r_i = g[i] % abs(ai)
                k = (g[i] - r_i) // ai
                return tuple(x - k * y for x, y in zip(g, a)), k
        return g, 0

    def conj_normal(self, g):
        return g, self.identity

    def root_exponents(self, g) -> RootSet:
        d = 0
        for x in g:
            d = gcd(d, x)
        return ALL_ROOTS if d == 0 else RootSet.divisors_of(d)

    def conj_power_candidates(self, g, a):
        for gi, ai in zip(g, a):
            if ai:
                return [gi // ai] if gi % ai == 0 else []
        return [0]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(d, s, t) with a*s + b*t = d = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class HeisenbergEngine(GroupEngine):
    """UT3(Z) as triples with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""

    tag = "heisenberg"

    def __init__(self, expr: GroupExpr):
        super().__init__(expr, ["a", "b", "c"], [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        self.identity = (0, 0, 0)

    def mul(self, g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inv(self, g):
        return (-g[0], -g[1], -g[2] + g[0] * g[1])

    def pow(self, g, k):
        a, b, c = g
        return (k * a, k * b, k * c + (k * (k - 1) // 2) * a * b)

    def contains(self, g) -> bool:
        return isinstance(g, tuple) and len(g) == 3 and all(isinstance(x, int) for x in g)

    def word_of(self, g) -> Word:
        i, j, k = g
        return word_from_letters([("a", i), ("b", j), ("c", k - i * j)])

    def order(self, g):
        return 1 if g == (0, 0, 0) else None

    def norm(self, g) -> int:
        return abs(g[0]) + abs(g[1]) + abs(g[2])

    def coset_rep(self, g, s):
        p, q, r = s
        if p:
            k = (g[0] - g[0] % abs(p)) // p
        elif q:
            k = (g[1] - g[1] % abs(q)) // q
        elif r:
            k = (g[2] - g[2] % abs(r)) // r
        else:
            return g, 0
        return self.mul(g, self.pow(s, -k)), k

    def conj_normal(self, g):
        a, b, c = g
        d, s, t = _ext_gcd(a, b)
        if d == 0:
            return g, self.identity
        m = (c % d - c) // d
        # conjugating by (x, y, *) shifts c by a*y - b*x
        return (a, b, c % d), (-m * t, m * s, 0)

    def root_exponents(self, g) -> RootSet:
        a, b, c = g
        d = gcd(a, b)
        if d == 0:
            return ALL_ROOTS if c == 0 else RootSet.divisors_of(c)
        ok = set()
        for n in range(2, d + 1):
            if d % n == 0 and (c - (n * (n - 1) // 2) * (a // n) * (b // n)) % n == 0:
                ok.add(n)
        return RootSet(frozenset(ok))

    def conj_power_candidates(self, g, s):
        p, q, r = s
        if p or q:
            k = g[0] // p if p else g[1] // q
            if (p and g[0] % p) or (not p and g[1] % q):
                return []
            return [k] if (k * p, k * q) == (g[0], g[1]) else []
        if r:
            if g[0] or g[1] or g[2] % r:
                return []
            return [g[2] // r]
        return [0]


class FiniteEngine(GroupEngine):
    """Finite group by multiplication table; payload is an index, 0 = identity."""

    tag = "table"

    def __init__(self, expr: GroupExpr, names, objects, op, ident):
        elems = [ident]
        index = {ident: 0}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in objects:
                y = op(x, g)
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        n = len(elems)
        self.size = n
        self.table = [[index[op(x, y)] for y in elems] for x in elems]
        self.inverses = [row.index(0) for row in self.table]
        super().__init__(expr, names, [index[g] for g in objects])
        self.identity = 0
        self._bfs_words()
        self._orders = []
        for i in range(n):
            k, x = 1, i
            while x != 0:
                x = self.table[x][i]
                k += 1
            self._orders.append(k)
        self._classes()

    def _bfs_words(self):
        self._dist = {0: 0}
        self._words = {0: ()}
        queue = deque([0])
        steps = self.symmetric_generators()
        while queue:
            x = queue.popleft()
            for letter, g in steps:
                y = self.table[x][g]
                if y not in self._dist:
                    self._dist[y] = self._dist[x] + 1
                    self._words[y] = self._words[x] + (letter,)
                    queue.append(y)

    def _classes(self):
        n = self.size
        self._key = [None] * n
        self._witness = [None] * n
        for i in range(n):
            if self._key[i] is not None:
                continue
            orbit = {}
            for w in range(n):
                j = self.table[self.table[self.inverses[w]][i]][w]
                orbit.setdefault(j, w)
            rep = min(orbit)
            # witness for j: w_j^-1 i w_j = j; we want v with v^-1 j v = rep
            w_rep = orbit[rep]
            for j, w_j in orbit.items():
                self._key[j] = rep
                self._witness[j] = self.table[self.inverses[w_j]][w_rep]

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self.inverses[g]

    def contains(self, g) -> bool:
        return isinstance(g, int) and 0 <= g < self.size

    def word_of(self, g) -> Word:
        return Word(self._words[g])

    def order(self, g):
        return self._orders[g]

    def norm(self, g) -> int:
        return self._dist[g]

    def geodesic_length(self, g) -> int:
        return self._dist[g]

    def coset_rep(self, g, a):
        best = None
        ainv = self.inverses[a]
        r = g
        for k in range(self._orders[a]):
            cand = (self._dist[r], r, k)
            if best is None or cand < best:
                best = cand
            r = self.table[r][ainv]
        return best[1], best[2]

    def conj_normal(self, g):
        return self._key[g], self._witness[g]

    def root_exponents(self, g) -> RootSet:
        e = 1
        for o in self._orders:
            e = e * o // gcd(e, o)
        res = set()
        for r in range(e):
            if any(self.pow(h, r) == g for h in range(self.size)):
                res.add(r)
        return RootSet(modulus=e, residues=frozenset(res))

    def conj_power_candidates(self, g, a):
        return None
