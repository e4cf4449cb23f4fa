"""Ball enumeration and the growth tables gamma / xi / pi, the hat metric on a
designated factor, and translation-number estimates.

All word lengths here come from breadth-first search over the symmetric
generating set; no engine closed forms are used.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .engines import (
    GroupEngine,
    HNNEngine,
    DirectProductEngine,
    FreeProductEngine,
    EngineError,
    CapabilityError,
)
from .conjugacy import hnn_invariants, _transfer_applies

DEFAULT_ELEMENT_BUDGET = 10**7
DEFAULT_PAIR_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, radius: int):
        super().__init__(message)
        self.radius = radius


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CGW_THREADS", "1")))
    except ValueError:
        return 1


class UnionFind:
    def __init__(self):
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True

    def blocks(self) -> int:
        return sum(1 for x in self.parent if self.parent[x] == x)


# -- balls -----------------------------------------------------------------

@dataclass
class Ball:
    descriptor: str
    radius: int
    members: dict  # payload -> word length
    layers: list  # layers[r] = payloads at distance exactly r, in BFS order

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return g in self.members

    def counts(self) -> list[int]:
        out, total = [], 0
        for layer in self.layers:
            total += len(layer)
            out.append(total)
        return out


def _expand(e: GroupEngine, chunk, steps):
    out = []
    for g in chunk:
        for s in steps:
            out.append(e.mul(g, s))
    return out


def bfs_layers(e: GroupEngine, n: int, steps, budget: int = DEFAULT_ELEMENT_BUDGET,
               threads: Optional[int] = None, allowed=None):
    """Layered BFS from the identity. ``allowed(g, s)`` may veto an edge.

    Frontiers are split into contiguous slices for the worker pool and the
    results concatenated in slice order, so layer contents and order do not
    depend on the thread count."""
    threads = threads or default_threads()
    members = {e.identity: 0}
    layers = [[e.identity]]
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for r in range(1, n + 1):
            frontier = layers[-1]
            if allowed is None:
                if pool is not None and len(frontier) >= 2 * threads:
                    size = -(-len(frontier) // threads)
                    chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                    results = list(pool.map(lambda c: _expand(e, c, steps), chunks))
                else:
                    results = [_expand(e, frontier, steps)]
            else:
                results = [[e.mul(g, s) for g in frontier for s in steps if allowed(g, s)]]
            layer = []
            for part in results:
                for h in part:
                    if h not in members:
                        members[h] = r
                        layer.append(h)
            if len(members) > budget:
                raise BudgetExceeded(
                    f"ball of radius {r} exceeds the element budget {budget}", r - 1
                )
            layers.append(layer)
            if not layer:
                # finite group exhausted; remaining layers are empty
                layers.extend([] for _ in range(n - r))
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return members, layers


def enumerate_ball(e: GroupEngine, n: int, budget: int = DEFAULT_ELEMENT_BUDGET,
                   threads: Optional[int] = None) -> Ball:
    if n < 0:
        raise EngineError("radius must be >= 0")
    cache = e.__dict__.setdefault("_ball_cache", {})
    hit = cache.get("ball")
    if hit is not None and hit.radius >= n:
        return _truncate(hit, n)
    steps = [s for _, s in e.symmetric_generators()]
    members, layers = bfs_layers(e, n, steps, budget, threads)
    ball = Ball(e.describe(), n, members, layers)
    cache["ball"] = ball
    return ball


def _truncate(ball: Ball, n: int) -> Ball:
    if ball.radius == n:
        return ball
    layers = ball.layers[: n + 1]
    members = {g: r for g, r in ball.members.items() if r <= n}
    return Ball(ball.descriptor, n, members, layers)


# -- tables ----------------------------------------------------------------

@dataclass
class GrowthTable:
    kind: str  # gamma | xi | pi
    descriptor: str
    generators: list
    values: list  # exact values, or None where bracketed
    lower: Optional[list] = None
    upper: Optional[list] = None
    budgets: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.lower is None

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def rows(self):
        for n in range(len(self.values)):
            if self.exact:
                yield (n, self.values[n])
            else:
                yield (n, self.values[n], self.lower[n], self.upper[n])

    def to_csv(self, provenance: Optional[dict] = None) -> str:
        buf = io.StringIO()
        meta = {"kind": self.kind, "group": self.descriptor, "generators": " ".join(self.generators),
                "exactness": "exact" if self.exact else "bracketed"}
        meta.update(provenance or {})
        for k, v in meta.items():
            buf.write(f"# {k}: {v}\n")
        for note in self.notes:
            buf.write(f"# note: {note}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"] if self.exact else ["n", "value", "lower", "upper"])
        for row in self.rows():
            w.writerow(["" if x is None else x for x in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.descriptor,
            "generators": list(self.generators),
            "exactness": "exact" if self.exact else "bracketed",
            "values": self.values,
            "lower": self.lower,
            "upper": self.upper,
            "budgets": self.budgets,
            "notes": self.notes,
        }

    def to_json(self, provenance: Optional[dict] = None) -> str:
        d = self.to_dict()
        if provenance:
            d["provenance"] = provenance
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "GrowthTable":
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition(":")
                meta.setdefault(k.strip(), v.strip())
            elif line.strip():
                body.append(line)
        rows = list(csv.reader(body))
        if not rows or rows[0][:2] != ["n", "value"]:
            raise ValueError("table CSV must start with a 'n,value' header")
        bracketed = len(rows[0]) == 4
        values, lower, upper = [], [], []
        for i, row in enumerate(rows[1:]):
            if int(row[0]) != i:
                raise ValueError(f"table rows must be n = 0, 1, 2, ... (got {row[0]} at row {i})")
            values.append(int(row[1]) if row[1] else None)
            if bracketed:
                lower.append(int(row[2]))
                upper.append(int(row[3]))
        gens = meta.get("generators", "").split()
        return cls(meta.get("kind", "gamma"), meta.get("group", ""), gens, values,
                   lower if bracketed else None, upper if bracketed else None)


def _first_radius(ball: Ball, label) -> dict:
    """label(g) -> smallest radius at which some member with that label appears.
    Members with label None are skipped."""
    first = {}
    for r, layer in enumerate(ball.layers):
        for g in layer:
            k = label(g)
            if k is not None and k not in first:
                first[k] = r
    return first


def _cumulative(first: dict, N: int) -> list[int]:
    hist = [0] * (N + 1)
    for r in first.values():
        hist[r] += 1
    out, total = [], 0
    for h in hist:
        total += h
        out.append(total)
    return out


def _budgets(budget, pair_budget=None) -> dict:
    d = {"elements": budget}
    if pair_budget is not None:
        d["pairs"] = pair_budget
    return d


def growth_table(e: GroupEngine, N: int, budget: int = DEFAULT_ELEMENT_BUDGET,
                 threads: Optional[int] = None) -> GrowthTable:
    ball = enumerate_ball(e, N, budget, threads)
    return GrowthTable("gamma", e.describe(), list(e.generators), ball.counts(), budgets=_budgets(budget))


def conjugacy_growth_table(e: GroupEngine, N: int, budget: int = DEFAULT_ELEMENT_BUDGET,
                           threads: Optional[int] = None, pair_budget: int = DEFAULT_PAIR_BUDGET,
                           conj_radius: int = 1) -> GrowthTable:
    ball = enumerate_ball(e, N, budget, threads)
    if e.capability == "canonical":
        first = _first_radius(ball, e.class_key)
        return GrowthTable("xi", e.describe(), list(e.generators), _cumulative(first, N),
                           budgets=_budgets(budget))
    if isinstance(e, HNNEngine):
        lower, upper = _bracketed_xi(e, ball, N, pair_budget, conj_radius)
        values = [l if l == u else None for l, u in zip(lower, upper)]
        return GrowthTable("xi", e.describe(), list(e.generators), values, lower, upper,
                           budgets=_budgets(budget, pair_budget),
                           notes=["bracketed: lower = distinct conjugacy invariants, "
                                  "upper = classes after merging by explicit witnesses",
                                  f"witness search uses conjugators of length <= {conj_radius}"])
    raise CapabilityError(f"{e.describe()} has no conjugacy capability")


def _bracketed_xi(e: HNNEngine, ball: Ball, N: int, pair_budget: int, conj_radius: int):
    # lower: invariants separate classes, so distinct invariants are distinct classes
    inv = {g: hnn_invariants(e, g) for g in ball.members}
    lower = _cumulative(_first_radius(ball, inv.get), N)

    # upper: union-find over members, merged only by explicit conjugators
    uf = UnionFind()
    order = [g for layer in ball.layers for g in layer]
    for g in order:
        uf.add(g)
    base = e.base
    transfer = {}
    for g in order:
        if e.in_base(g) and _transfer_applies(e, g[0]):
            k = ("base", base.class_key(g[0]))
            if k in transfer:
                uf.union(transfer[k], g)
            else:
                transfer[k] = g
    core_label = {}
    for g in order:
        core, _ = e.cyclic_core(g)
        c = e.normalize(core)
        if c in core_label:
            uf.union(core_label[c], g)
        else:
            core_label[c] = g
    conjugators = [t for t in _conj_list(e, conj_radius) if t != e.identity]
    if len(order) * len(conjugators) > pair_budget:
        raise BudgetExceeded(
            f"{len(order) * len(conjugators)} conjugation tests exceed the pair budget {pair_budget}", N
        )
    for g in order:
        for t in conjugators:
            h = e.conj(g, t)
            if h in ball.members:
                uf.union(g, h)
    # blocks refine the conjugacy partition, so blocks meeting B(n) bound
    # the classes meeting B(n) from above
    upper = []
    for n in range(N + 1):
        roots = {uf.find(g) for g in order if ball.members[g] <= n}
        upper.append(len(roots))
    return lower, upper


def _conj_list(e: GroupEngine, r: int) -> list:
    steps = [s for _, s in e.symmetric_generators()]
    members, layers = bfs_layers(e, r, steps)
    return [g for layer in layers for g in layer]


def primitive_growth_table(e: GroupEngine, N: int, budget: int = DEFAULT_ELEMENT_BUDGET,
                           threads: Optional[int] = None) -> GrowthTable:
    from .conjugacy import is_primitive

    if e.capability != "canonical" or isinstance(e, HNNEngine):
        raise CapabilityError(f"{e.describe()} has no primitivity test")
    ball = enumerate_ball(e, N, budget, threads)

    def label(g):
        if e.is_identity(g) or not is_primitive(e, g):
            return None
        return e.class_key(g)

    first = _first_radius(ball, label)
    return GrowthTable("pi", e.describe(), list(e.generators), _cumulative(first, N),
                       budgets=_budgets(budget),
                       notes=["torsion elements are proper powers of themselves and never count"])


# -- word metric -------------------------------------------------------------

class WordMetric:
    """|g|_X from a BFS ball of radius R, extended to 2R by meeting in the
    middle: |g| = min over v in B(R) with v^-1 g in B(R) of |v| + |v^-1 g|.

    ``steps`` overrides the engine's symmetric generators (it must be closed
    under inversion)."""

    def __init__(self, e: GroupEngine, R: int, budget: int = DEFAULT_ELEMENT_BUDGET,
                 threads: Optional[int] = None, steps=None):
        self.e = e
        self.R = R
        if steps is None:
            self.ball = enumerate_ball(e, R, budget, threads)
        else:
            members, layers = bfs_layers(e, R, list(steps), budget, threads)
            self.ball = Ball(e.describe(), R, members, layers)
        self._order = [(v, r) for r, layer in enumerate(self.ball.layers) for v in layer]

    def length(self, g) -> Optional[int]:
        """Exact word length if <= 2R, else None."""
        d = self.ball.members.get(g)
        if d is not None:
            return d
        e, best = self.e, None
        members = self.ball.members
        for v, r in self._order:
            if best is not None and r >= best:
                break
            w = members.get(e.mul(e.inv(v), g))
            if w is not None and (best is None or r + w < best):
                best = r + w
        return best

    def distance(self, g, h) -> Optional[int]:
        return self.length(self.e.mul(self.e.inv(g), h))


# -- hat metric --------------------------------------------------------------

@dataclass(frozen=True)
class HatMetricResult:
    pair: tuple
    value: Optional[int]  # None = not found within radius
    radius: int
    letter_bound: int

    @property
    def found(self) -> bool:
        return self.value is not None

    def describe(self) -> str:
        return str(self.value) if self.found else f"not-found-within({self.radius})"


class HatMetric:
    """Distances in Gamma(G, X u H) between elements of the designated factor
    H, never using an H-labelled edge between two vertices of H.

    X is the generating set of the other factor(s): the relative generating
    set, so that H is reached only through H-letters. H-letters are the
    nontrivial elements of H of factor norm <= ``letter_bound``. The graph is
    invariant under left translation by H, so one ball around the identity
    serves every pair; pairs are resolved by meeting in the middle."""

    def __init__(self, e: GroupEngine, R: int, factor: int = 0, letter_bound: Optional[int] = None,
                 budget: int = DEFAULT_ELEMENT_BUDGET):
        if not isinstance(e, (DirectProductEngine, FreeProductEngine)):
            raise CapabilityError("hat metric needs a direct or free product with a designated factor")
        self.e, self.R, self.factor = e, R, factor
        self.letter_bound = R if letter_bound is None else letter_bound
        H = e.F[factor]
        hball = enumerate_ball(H, self.letter_bound, budget)
        self.h_letters = [e.inject(factor, h) for layer in hball.layers[1:] for h in layer]
        self.x_letters = []
        for i, f in enumerate(e.F):
            if i == factor:
                continue
            for _, s in f.symmetric_generators():
                self.x_letters.append(e.inject(i, s))
        steps = self.x_letters + self.h_letters
        hset = set(self.h_letters)
        self._hset = hset

        def allowed(g, s):
            return s not in hset or not self.in_H(g)

        self.half = (R + 1) // 2
        members, layers = bfs_layers(e, self.half, steps, budget, threads=1, allowed=allowed)
        self.members = members
        self._order = [(v, r) for r, layer in enumerate(layers) for v in layer]

    def in_H(self, g) -> bool:
        e = self.e
        if isinstance(e, FreeProductEngine):
            return e.in_factor(g, self.factor)
        return all(x == f.identity for i, (f, x) in enumerate(zip(e.F, g)) if i != self.factor)

    def distance(self, h1, h2) -> HatMetricResult:
        e = self.e
        if not (e.contains(h1) and e.contains(h2) and self.in_H(h1) and self.in_H(h2)):
            raise EngineError("hat metric arguments must lie in the designated subgroup")
        h = e.mul(e.inv(h1), h2)
        best = None
        if h == e.identity:
            best = 0
        else:
            rest = self.R - self.half
            hinv = e.inv(h)
            for v, r in self._order:
                if best is not None and r >= best:
                    break
                w = self.members.get(e.mul(hinv, v))
                if w is not None and w <= rest and (best is None or r + w < best):
                    best = r + w
        return HatMetricResult((h1, h2), best, self.R, self.letter_bound)

    def local_ball(self, r: int) -> list:
        """H-elements within hat distance r of the identity, r <= R."""
        if r > self.R:
            raise EngineError(f"local ball radius {r} exceeds the search radius {self.R}")
        e = self.e
        found = set()
        inner = [(w, d) for w, d in self._order if d <= r - min(r, self.half)]
        for v, d in self._order:
            if d > min(r, self.half):
                break
            for w, d2 in inner:
                if d + d2 > r:
                    break
                x = e.mul(v, e.inv(w))
                if self.in_H(x):
                    found.add(x)
        return sorted(found, key=repr)


def hat_distance(e: GroupEngine, h1, h2, R: int, factor: int = 0,
                 letter_bound: Optional[int] = None) -> HatMetricResult:
    return HatMetric(e, R, factor, letter_bound).distance(h1, h2)


# -- translation numbers -----------------------------------------------------

@dataclass
class TranslationEstimate:
    element: Any
    lengths: list  # |g^n| for n = 1..N
    samples: list  # Fractions |g^n| / n
    inf_so_far: list
    distorted: bool

    @property
    def inf(self) -> Fraction:
        return self.inf_so_far[-1]


def translation_number_estimate(e: GroupEngine, g, N: int, metric: Optional[WordMetric] = None,
                                budget: int = DEFAULT_ELEMENT_BUDGET) -> TranslationEstimate:
    """Samples |g^n|/n for n = 1..N. Flags ``distorted`` when the running
    infimum still drops over the second half of the range, i.e.
    inf_{n<=N} < inf_{n<=ceil(N/2)}."""
    e.check(g)
    if e.is_identity(g):
        raise EngineError("translation number of the identity is not estimated")
    if N < 1:
        raise EngineError("N must be >= 1")
    lengths, samples, infs = [], [], []
    x = e.identity
    for n in range(1, N + 1):
        x = e.mul(x, g)
        L = metric.length(x) if metric is not None else None
        if L is None:
            metric = _grow_metric(e, x, metric, budget, n)
            L = metric.length(x)
        lengths.append(L)
        s = Fraction(L, n)
        samples.append(s)
        infs.append(min(s, infs[-1]) if infs else s)
    half = -(-N // 2)
    distorted = N >= 2 and infs[-1] < infs[half - 1]
    return TranslationEstimate(g, lengths, samples, infs, distorted)


def _grow_metric(e, x, metric, budget, n):
    R = metric.R if metric is not None else 2
    while True:
        R += 2
        try:
            m = WordMetric(e, R, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"|g^{n}| exceeds the metric radius reachable within budget", exc.radius)
        if m.length(x) is not None:
            return m
