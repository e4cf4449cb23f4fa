"""Conjugacy class keys, conjugacy tests, primitivity and commensurability."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .engines import GroupEngine, HNNEngine, CapabilityError, EngineError


@dataclass(frozen=True)
class ClassKey:
    tag: str
    payload: Any

    def render(self, e: GroupEngine) -> str:
        return "~" + e.format(self.payload)


@dataclass(frozen=True)
class ConjugacyVerdict:
    """``witness`` t satisfies t^-1 g t = h when status is "yes"."""

    status: str  # yes | no | unknown
    witness: Any = None
    method: str = ""
    radius: Optional[int] = None

    def __bool__(self) -> bool:
        return self.status == "yes"


@dataclass(frozen=True)
class CommensurabilityVerdict:
    status: str  # yes | no | no-within-K
    k: Optional[int] = None
    l: Optional[int] = None
    witness: Any = None
    exact: bool = False
    bound: int = 0
    notes: tuple = field(default_factory=tuple)


def capability(e: GroupEngine) -> str:
    return e.capability


def class_key(e: GroupEngine, g) -> ClassKey:
    if e.capability != "canonical":
        raise CapabilityError(f"{e.describe()} has capability {e.capability!r}; no class keys")
    e.check(g)
    return ClassKey(e.tag, e.class_key(g))


def conjugating_element(e: GroupEngine, g, h):
    """t with t^-1 g t = h, or None (canonical engines)."""
    kg, wg = e.conj_normal(g)
    kh, wh = e.conj_normal(h)
    if kg != kh:
        return None
    return e.mul(wg, e.inv(wh))


# -- HNN helpers -----------------------------------------------------------

def hnn_invariants(e: HNNEngine, g) -> tuple:
    """Conjugacy invariants: (cyclic t-length, t-exponent sum, base key or None).

    The base key is only present when the cyclic core lies in the base and is
    not base-conjugate into <a> or <b>; then the base class is itself an
    invariant by the transfer rule."""
    core, _ = e.cyclic_core(g)
    tsum = sum(core[1::2])
    base_key = None
    if len(core) == 1 and _transfer_applies(e, core[0]):
        base_key = e.base.class_key(core[0])
    return (len(core) // 2, tsum, base_key)


def _transfer_applies(e: HNNEngine, x) -> bool:
    base = e.base
    if base.capability != "canonical":
        return False
    if base.is_identity(x):
        return False
    return base.conj_into_cyclic(x, e.A) is None and base.conj_into_cyclic(x, e.B) is None


def _conjugator_ball(e: GroupEngine, radius: int) -> list:
    cache = e.__dict__.setdefault("_conj_ball_cache", {})
    if radius not in cache:
        from .growth import enumerate_ball

        ball = enumerate_ball(e, radius)
        cache[radius] = sorted(ball.members, key=lambda x: (ball.members[x], repr(x)))
    return cache[radius]


def bounded_conjugacy_search(e: GroupEngine, g, h, radius: int):
    for t in _conjugator_ball(e, radius):
        if e.conj(g, t) == h:
            return t
    return None


def are_conjugate(e: GroupEngine, g, h, radius: int = 4, delegate: bool = True) -> ConjugacyVerdict:
    e.check(g, h)
    if e.capability == "canonical":
        t = conjugating_element(e, g, h)
        return ConjugacyVerdict("yes", t, "class-key") if t is not None else ConjugacyVerdict("no", None, "class-key")
    if isinstance(e, HNNEngine):
        if delegate and e.in_base(g) and e.in_base(h):
            x, y = g[0], h[0]
            if _transfer_applies(e, x) and _transfer_applies(e, y):
                t = conjugating_element(e.base, x, y)
                if t is None:
                    return ConjugacyVerdict("no", None, "transfer")
                return ConjugacyVerdict("yes", (t,), "transfer")
        ig, ih = hnn_invariants(e, g), hnn_invariants(e, h)
        if ig[:2] != ih[:2] or (ig[2] is not None and ih[2] is not None and ig[2] != ih[2]):
            return ConjugacyVerdict("no", None, "invariant")
        t = bounded_conjugacy_search(e, g, h, radius)
        if t is not None:
            return ConjugacyVerdict("yes", t, "search", radius)
        return ConjugacyVerdict("unknown", None, "search", radius)
    t = bounded_conjugacy_search(e, g, h, radius)
    return ConjugacyVerdict("yes", t, "search", radius) if t is not None else ConjugacyVerdict("unknown", None, "search", radius)


# -- primitivity -------------------------------------------------------------

def is_primitive(e: GroupEngine, g) -> bool:
    """True iff g is not a proper power.

    Torsion elements are never primitive under this definition: g = g^(m+1)
    for m the order of g."""
    e.check(g)
    if e.is_identity(g):
        raise EngineError("primitivity is not defined for the identity")
    if isinstance(e, HNNEngine):
        raise CapabilityError("hnn engines have no primitivity test")
    return e.root_exponents(g).is_empty()


# -- commensurability --------------------------------------------------------

def _exact_mode(e: GroupEngine, f, g) -> bool:
    from .engines import FreeEngine, FreeProductEngine

    if e.is_identity(f) or e.is_identity(g):
        return False
    if isinstance(e, FreeEngine):
        return is_primitive(e, f) and is_primitive(e, g)
    if isinstance(e, FreeProductEngine):
        return (
            e.is_loxodromic(f) and e.is_loxodromic(g)
            and is_primitive(e, f) and is_primitive(e, g)
        )
    return False


def are_commensurable_bounded(e: GroupEngine, f, g, K: int) -> CommensurabilityVerdict:
    if K < 1:
        raise EngineError("commensurability bound K must be >= 1")
    if e.capability != "canonical":
        raise CapabilityError(f"{e.describe()} has no class keys")
    e.check(f, g)
    pairs = [(k, l) for k in range(-K, K + 1) for l in range(-K, K + 1) if k and l]
    pairs.sort(key=lambda p: (abs(p[0]) + abs(p[1]), -p[0], -p[1]))
    exact = _exact_mode(e, f, g)
    for k, l in pairs:
        if exact and (abs(l) != 1 or abs(k) != 1):
            continue
        t = conjugating_element(e, e.pow(f, k), e.pow(g, l))
        if t is not None:
            return CommensurabilityVerdict("yes", k, l, t, True, K)
    if exact:
        return CommensurabilityVerdict("no", exact=True, bound=K, notes=("both primitive: commensurable iff f^(+-1) ~ g",))
    return CommensurabilityVerdict("no-within-K", bound=K)
