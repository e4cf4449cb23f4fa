"""Group engines and the ``build_engine`` factory."""

from __future__ import annotations

from ..wordlang import GroupExpr, Word, parse_group_expr, parse_word, DSLSyntaxError
from .base import (
    GroupEngine,
    Element,
    EngineError,
    EngineMismatch,
    CapabilityError,
    UnknownGenerator,
    RootSet,
)
from .basic import FreeEngine, CyclicEngine, AbelianEngine, HeisenbergEngine, FiniteEngine
from .products import FreeProductEngine, DirectProductEngine
from .hnn import HNNEngine, HNNWord
from .tables import FINITE_GROUPS

MAX_DEPTH = 8
MAX_HNN_NESTING = 2

__all__ = [
    "GroupEngine", "Element", "EngineError", "EngineMismatch", "CapabilityError",
    "UnknownGenerator", "RootSet", "FreeEngine", "CyclicEngine", "AbelianEngine",
    "HeisenbergEngine", "FiniteEngine", "FreeProductEngine", "DirectProductEngine",
    "HNNEngine", "HNNWord", "build_engine", "engine", "multiply", "britton_reduce",
    "hnn_cyclic_reduce", "word_to_element", "capability_report",
]


def build_engine(expr: GroupExpr | str) -> GroupEngine:
    if isinstance(expr, str):
        expr = parse_group_expr(expr)
    if expr.depth() > MAX_DEPTH:
        raise EngineError(f"expression nesting depth {expr.depth()} exceeds the cap of {MAX_DEPTH}")
    return _build(expr, 0)


def engine(text: str) -> GroupEngine:
    """Shorthand: ``engine("free(2)")``."""
    return build_engine(text)


def _build(expr: GroupExpr, hnn_depth: int) -> GroupEngine:
    k = expr.kind
    if k == "free":
        return FreeEngine(expr, expr.params[0])
    if k == "cyclic":
        return CyclicEngine(expr, expr.params[0])
    if k == "abelian":
        return AbelianEngine(expr, expr.params[0])
    if k == "heisenberg":
        return HeisenbergEngine(expr)
    if k == "table":
        name = expr.params[0]
        if name not in FINITE_GROUPS:
            raise EngineError(f"unknown finite group {name!r}; known: {', '.join(sorted(FINITE_GROUPS))}")
        names, objs, op, ident = FINITE_GROUPS[name]
        return FiniteEngine(expr, names, objs, op, ident)
    if k == "product":
        return FreeProductEngine(expr, [_build(c, hnn_depth) for c in expr.children])
    if k == "direct":
        return DirectProductEngine(expr, [_build(c, hnn_depth) for c in expr.children])
    if k == "hnn":
        if hnn_depth + 1 > MAX_HNN_NESTING:
            raise EngineError(
                f"hnn nested more than {MAX_HNN_NESTING} deep is not supported: "
                "edge-subgroup membership in deeper towers has no implemented decision procedure"
            )
        base = _build(expr.children[0], hnn_depth + 1)
        a_text, b_text = expr.edge
        try:
            a = base.evaluate(parse_word(a_text, base.generators))
            b = base.evaluate(parse_word(b_text, base.generators))
        except DSLSyntaxError as exc:
            raise EngineError(f"bad hnn edge word: {exc}") from exc
        stable = "t"
        while stable in base.generators:
            stable += "'"
        return HNNEngine(expr, base, a, b, stable)
    raise EngineError(f"unsupported constructor {k!r}")


def capability_report(e: GroupEngine) -> dict:
    return {
        "descriptor": e.describe(),
        "generators": list(e.generators),
        "conjugacy": e.capability,
        "geodesic_formula": e.geodesic_length(e.identity) is not None,
        "factors": [f.describe() for f in e.factors()],
    }


def multiply(e: GroupEngine, g, h):
    e.check(g, h)
    return e.mul(g, h)


def word_to_element(e: GroupEngine, w: Word | str):
    if isinstance(w, str):
        w = parse_word(w, e.generators)
    return e.evaluate(w)


def britton_reduce(e: HNNEngine, raw) -> HNNWord:
    """Pinch-free form of an alternating sequence g0, t^e0, g1, ... of base
    payloads and signs."""
    if not isinstance(e, HNNEngine):
        raise CapabilityError("britton_reduce needs an hnn engine")
    return HNNWord(e.britton(tuple(raw)))


def hnn_cyclic_reduce(e: HNNEngine, w) -> tuple[HNNWord, HNNWord]:
    """(core, conjugator) with w = conjugator * core * conjugator^-1."""
    if not isinstance(e, HNNEngine):
        raise CapabilityError("hnn_cyclic_reduce needs an hnn engine")
    syl = w.syllables if isinstance(w, HNNWord) else tuple(w)
    core, u = e.cyclic_core(syl)
    return HNNWord(core), HNNWord(u)
