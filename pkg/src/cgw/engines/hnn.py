"""HNN extension ``<G, t | t^-1 a t = b>`` of a base engine along cyclic
edge subgroups <a> and <b>.

Payload is the normal form ``(g0, e1, g1, ..., ek, gk)``: base payloads at
even positions, stable-letter signs at odd positions, no pinches, and every
g_{i-1} the canonical coset representative of g<a> (before ``t``) or g<b>
(before ``t^-1``).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..wordlang import Letter, Word, GroupExpr
from .base import GroupEngine, EngineError, CapabilityError


@dataclass(frozen=True)
class HNNWord:
    """Alternating syllables g0, t^e1, g1, ..., t^ek, gk (not necessarily
    canonical, but pinch-free when produced by ``britton_reduce``)."""

    syllables: tuple

    @property
    def t_length(self) -> int:
        return len(self.syllables) // 2

    @property
    def base_elements(self) -> tuple:
        return self.syllables[0::2]

    @property
    def signs(self) -> tuple:
        return self.syllables[1::2]


class HNNEngine(GroupEngine):
    capability = "bounded-search"
    tag = "hnn"

    def __init__(self, expr: GroupExpr, base: GroupEngine, a, b, stable: str = "t"):
        if base.is_identity(a) or base.is_identity(b):
            raise EngineError("hnn edge word is trivial in the base")
        if base.order(a) != base.order(b):
            raise EngineError("hnn edge subgroups <a> and <b> are not isomorphic (orders differ)")
        self.base = base
        self.A = a
        self.B = b
        self.stable = stable
        ident = (base.identity,)
        names = list(base.generators) + [stable]
        elems = [(g,) for g in base.gen_elements] + [(base.identity, 1, base.identity)]
        super().__init__(expr, names, elems)
        self.identity = ident

    def factors(self):
        return (self.base,)

    # -- reduction -------------------------------------------------------
    def _pinch(self, sign_before: int, h):
        """Replacement base element if t^{sign_before} h t^{-sign_before} is a pinch."""
        base = self.base
        if sign_before == -1:
            k = base.in_cyclic(h, self.A)
            return None if k is None else base.pow(self.B, k)
        k = base.in_cyclic(h, self.B)
        return None if k is None else base.pow(self.A, k)

    def britton(self, seq) -> tuple:
        """Remove all pinches (single left-to-right stack pass)."""
        base = self.base
        stack = [seq[0]]
        for idx in range(1, len(seq), 2):
            e, g = seq[idx], seq[idx + 1]
            if len(stack) >= 3 and stack[-2] == -e:
                repl = self._pinch(stack[-2], stack[-1])
                if repl is not None:
                    stack.pop()
                    stack.pop()
                    stack[-1] = base.mul(base.mul(stack[-1], repl), g)
                    continue
            stack.append(e)
            stack.append(g)
        return tuple(stack)

    def _push(self, seq) -> tuple:
        base = self.base
        out = list(seq)
        for i in range(0, len(out) - 1, 2):
            if out[i + 1] == 1:
                r, k = base.coset_rep(out[i], self.A)
                carry = base.pow(self.B, k)
            else:
                r, k = base.coset_rep(out[i], self.B)
                carry = base.pow(self.A, k)
            out[i] = r
            out[i + 2] = base.mul(carry, out[i + 2])
        return tuple(out)

    def normalize(self, seq) -> tuple:
        return self._push(self.britton(tuple(seq)))

    # -- group operations ------------------------------------------------
    def mul(self, g, h):
        if len(g) == 1 and len(h) == 1:
            return (self.base.mul(g[0], h[0]),)
        return self.normalize(g[:-1] + (self.base.mul(g[-1], h[0]),) + h[1:])

    def inv(self, g):
        base = self.base
        out = []
        for i in range(len(g) - 1, -1, -1):
            out.append(base.inv(g[i]) if i % 2 == 0 else -g[i])
        return self.normalize(out)

    def contains(self, g) -> bool:
        if not isinstance(g, tuple) or len(g) % 2 == 0:
            return False
        for i, x in enumerate(g):
            if i % 2:
                if x not in (1, -1):
                    return False
            elif not self.base.contains(x):
                return False
        return self.normalize(g) == g

    def word_of(self, g) -> Word:
        w = Word()
        for i, x in enumerate(g):
            w = w + (Word((Letter(self.stable, x),)) if i % 2 else self.base.word_of(x))
        return w

    def t_length(self, g) -> int:
        return len(g) // 2

    def norm(self, g) -> int:
        return len(g) // 2 + sum(self.base.norm(x) for x in g[0::2])

    # -- cyclic reduction ------------------------------------------------
    def cyclic_core(self, g) -> tuple[tuple, tuple]:
        """(core_raw, u) with g = u core u^-1; core_raw is pinch-free and no
        cyclic shift of it contains a pinch."""
        base = self.base
        u = self.identity
        w = self.britton(tuple(g))
        while len(w) > 1:
            g0 = w[0]
            w = (base.identity,) + w[1:-1] + (base.mul(w[-1], g0),)
            u = self.mul(u, (g0,))
            e1, ek, h = w[1], w[-2], w[-1]
            if ek != -e1:
                break
            repl = self._pinch(ek, h)
            if repl is None:
                break
            # conjugate by t^{e1}: drop the leading t and fold the wrap pinch
            inner = w[2:-2]
            w = self.britton(inner[:-1] + (base.mul(inner[-1], repl),))
            u = self.mul(u, (base.identity, e1, base.identity))
        return w, u

    def order(self, g):
        core, _ = self.cyclic_core(g)
        if len(core) == 1:
            return self.base.order(core[0])
        return None

    def coset_rep(self, g, a):
        if a == self.identity:
            return g, 0
        core, ua = self.cyclic_core(a)
        if len(core) == 1:
            c = core[0]
            h = self.mul(g, ua)
            r_last, k = self.base.coset_rep(h[-1], c)
            rep = self.mul(h[:-1] + (r_last,), self.inv(ua))
            return rep, k
        tl = lambda x: len(x) // 2
        K = (2 * tl(g) + 4 * tl(a) + 2) // (len(core) // 2) + 2
        best = None
        h = self.mul(g, self.pow(a, -K))
        for k in range(-K, K + 1):
            if k > -K:
                h = self.mul(h, a)
            cand = (tl(h), self.norm(h), h, -k)
            if best is None or cand[:3] < best[:3]:
                best = cand
        return best[2], best[3]

    def conj_normal(self, g):
        raise CapabilityError("hnn engines only support bounded conjugacy search")

    def in_base(self, g) -> bool:
        return len(g) == 1
