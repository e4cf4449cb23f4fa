"""Symmetrized word sets, quasi-geodesic checks, pieces, and the C / C1
small-cancellation conditions over a group engine.

Words here are over an ``Alphabet``: the engine generators plus, for free
and direct products, parabolic letters ``{<factor element>}`` standing for a
single nontrivial element of one factor (e.g. ``{0.u^5}``).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .engines import (
    GroupEngine,
    FreeProductEngine,
    DirectProductEngine,
    EngineError,
)
from .growth import WordMetric, BudgetExceeded, enumerate_ball, bfs_layers, DEFAULT_ELEMENT_BUDGET
from .wordlang import Letter, Word, parse_word, print_word

DEFAULT_PIECE_BUDGET = 10**7


# -- alphabets ---------------------------------------------------------------

class Alphabet:
    """Letters of an engine: its generators, plus parabolic letters of factor
    norm <= ``letter_bound`` for product engines (the finite truncation of
    the parabolic alphabet)."""

    def __init__(self, e: GroupEngine, letter_bound: int = 0):
        self.e = e
        self.letter_bound = letter_bound
        self.letters: dict[str, object] = dict(zip(e.generators, e.gen_elements))
        self.parabolic: list[str] = []
        self.full_parabolic = False
        if letter_bound > 0 and isinstance(e, (FreeProductEngine, DirectProductEngine)):
            complete = True
            for i, f in enumerate(e.F):
                ball = enumerate_ball(f, letter_bound)
                for layer in ball.layers[1:]:
                    for h in layer:
                        name = self.parabolic_name(i, h)
                        if name not in self.letters:
                            self.letters[name] = e.inject(i, h)
                            self.parabolic.append(name)
                elems = finite_elements(f)
                complete = complete and elems is not None and len(elems) == len(ball)
            self.full_parabolic = complete and isinstance(e, FreeProductEngine)

    def parabolic_name(self, i: int, h) -> str:
        f = self.e.F[i]
        return "{" + print_word(Word(tuple(Letter(f"{i}.{l.gen}", l.sign) for l in f.word_of(h).letters))) + "}"

    def element(self, letter: Letter):
        g = self.letters.get(letter.gen)
        if g is None:
            if not (letter.gen.startswith("{") and letter.gen.endswith("}")):
                raise EngineError(f"unknown letter {letter.gen!r}")
            g = self.e.evaluate(parse_word(letter.gen[1:-1], self.e.generators))
            self.letters[letter.gen] = g
        return g if letter.sign == 1 else self.e.inv(g)

    def evaluate(self, w: Word):
        e = self.e
        g = e.identity
        for l in w.letters:
            g = e.mul(g, self.element(l))
        return g

    def symmetric_letters(self) -> list[tuple[Letter, object]]:
        """Letters and inverses, one per distinct nontrivial element."""
        out, seen = [], set()
        for name in list(self.letters):
            g = self.letters[name]
            for sign in (1, -1):
                h = g if sign == 1 else self.e.inv(g)
                if h == self.e.identity or h in seen:
                    continue
                seen.add(h)
                out.append((Letter(name, sign), h))
        return out

    def words_upto(self, k: int) -> list[tuple[Word, object]]:
        """All freely reduced words of length <= k (shortlex order) with their values."""
        letters = self.symmetric_letters()
        out = [(Word(), self.e.identity)]
        layer = [(Word(), self.e.identity)]
        for _ in range(k):
            nxt = []
            for w, g in layer:
                for l, h in letters:
                    if w.letters and w.letters[-1] == l.inverse():
                        continue
                    nxt.append((Word(w.letters + (l,)), self.e.mul(g, h)))
            out.extend(nxt)
            layer = nxt
        return out

    def parse(self, text: str) -> Word:
        return parse_word(text)


def finite_elements(f: GroupEngine, budget: int = 10**5) -> Optional[list]:
    """All elements of f when it is finite (and small), else None."""
    if any(f.order(g) is None for g in f.gen_elements):
        return None
    r = 1
    try:
        while True:
            ball = enumerate_ball(f, r, budget)
            if not ball.layers[-1]:
                return list(ball.members)
            r *= 2
    except BudgetExceeded:
        return None


# -- symmetrized sets ----------------------------------------------------------

def _letters_reduced(w: Word) -> bool:
    return all(not (a.gen == b.gen and a.sign == -b.sign) for a, b in zip(w.letters, w.letters[1:]))


def _cyclically_reduced(w: Word) -> bool:
    if not _letters_reduced(w):
        return False
    if len(w) >= 2:
        a, b = w.letters[-1], w.letters[0]
        if a.gen == b.gen and a.sign == -b.sign:
            return False
    return True


@dataclass(frozen=True)
class SymmetrizedSet:
    base: tuple  # base words
    members: tuple  # all cyclic shifts of base words and inverses, deduplicated

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, w) -> bool:
        return w in self.members


def symmetrize(words: Sequence[Word]) -> SymmetrizedSet:
    members, seen = [], set()
    for w in words:
        if len(w) == 0:
            raise EngineError("the empty word cannot be symmetrized")
        if not _cyclically_reduced(w):
            raise EngineError(f"{w} is not cyclically reduced")
        for v in (w, w.inverse()):
            for i in range(len(v)):
                r = Word(v.letters[i:] + v.letters[:i], True)
                if r not in seen:
                    seen.add(r)
                    members.append(r)
    return SymmetrizedSet(tuple(words), tuple(members))


# -- params and reports ----------------------------------------------------------

def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"{text!r}: give rationals exactly as p/q")
    return Fraction(text)


@dataclass(frozen=True)
class SCParams:
    eps: int
    mu: Fraction
    lam: Fraction
    c: int
    rho: int

    def __post_init__(self):
        object.__setattr__(self, "mu", parse_rational(self.mu))
        object.__setattr__(self, "lam", parse_rational(self.lam))
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        if not 0 < self.mu < 1:
            raise ValueError("mu must lie in (0, 1)")
        if not 0 < self.lam <= 1:
            raise ValueError("lambda must lie in (0, 1]")
        if self.c < 0 or self.rho < 0:
            raise ValueError("c and rho must be >= 0")

    def to_dict(self) -> dict:
        return {"eps": self.eps, "mu": str(self.mu), "lambda": str(self.lam), "c": self.c, "rho": self.rho}


@dataclass(frozen=True)
class PieceReport:
    """U = R[0:u_len] (a prefix, since the set is closed under shifts) and
    U' = R'[u2_start:u2_start + u2_len], with U' = Y U^sign Z in G."""

    kind: str  # "eps" | "eps'"
    r_index: int
    u_len: int
    r2_index: int
    u2_start: int
    u2_len: int
    sign: int
    Y: Word
    Z: Word
    ratio: Fraction

    @property
    def ident(self) -> tuple:
        return (self.kind, self.r_index, self.u_len, self.r2_index, self.u2_start, self.u2_len)

    def to_dict(self, S: SymmetrizedSet) -> dict:
        R, R2 = S.members[self.r_index], S.members[self.r2_index]
        return {
            "kind": self.kind,
            "R": str(R), "U": str(R[: self.u_len]), "U_span": [0, self.u_len],
            "R2": str(R2), "U2": str(R2[self.u2_start: self.u2_start + self.u2_len]),
            "U2_span": [self.u2_start, self.u2_start + self.u2_len],
            "sign": self.sign, "Y": str(self.Y), "Z": str(self.Z), "ratio": str(self.ratio),
        }


def _prefix_elements(A: Alphabet, w: Word) -> list:
    e = A.e
    out, g = [e.identity], e.identity
    for l in w.letters:
        g = e.mul(g, A.element(l))
        out.append(g)
    return out


def find_pieces(e: GroupEngine, S: SymmetrizedSet, eps: int, letter_bound: int = 0,
                kinds: Sequence[str] = ("eps", "eps'"), alphabet: Optional[Alphabet] = None,
                budget: int = DEFAULT_PIECE_BUDGET) -> list[PieceReport]:
    """All eps-pieces and eps'-pieces (U, U' nonempty). A piece is reported
    when some witness (Y, Z) satisfies every clause; the reported witness is
    the first in shortlex order of (Y, Z)."""
    A = alphabet or Alphabet(e, letter_bound)
    yz = A.words_upto(eps)
    R = S.members
    pre = [_prefix_elements(A, r) for r in R]
    full = [p[-1] for p in pre]
    cost = sum(len(r) for r in R) * len(yz)
    if cost > budget:
        raise BudgetExceeded(f"piece enumeration needs {cost} products, over the budget {budget}", 0)
    inv = e.inv
    mul = e.mul
    found: dict[tuple, tuple] = {}

    if "eps" in kinds:
        # U' = Y U Z  <=>  Y^-1 U' = U Z
        index = defaultdict(list)
        for i, r in enumerate(R):
            for k in range(1, len(r) + 1):
                for zi, (_, z) in enumerate(yz):
                    index[mul(pre[i][k], z)].append((i, k, zi))
        clause3 = {}
        for j, r2 in enumerate(R):
            for k2 in range(1, len(r2) + 1):
                for yi, (_, y) in enumerate(yz):
                    for i, k, zi in index.get(mul(inv(y), pre[j][k2]), ()):
                        key3 = (yi, i, j)
                        if key3 not in clause3:
                            clause3[key3] = mul(mul(y, full[i]), inv(y)) != full[j]
                        if not clause3[key3]:
                            continue
                        ident = ("eps", i, k, j, 0, k2)
                        cand = (yi, zi, 1)
                        if ident not in found or cand < found[ident]:
                            found[ident] = cand

    if "eps'" in kinds:
        # R = U V U' V' with U' = Y U^(+-1) Z, i.e. Y^-1 U' = U^(+-1) Z.
        # Members that are rotations of one cyclic word share their arcs, so
        # the search runs once per cyclic word over pairs of disjoint arcs.
        member_index = {r: i for i, r in enumerate(R)}
        done = set()
        for r in R:
            n = len(r)
            if n < 2 or r in done:
                continue
            rots = [Word(r.letters[b:] + r.letters[:b], True) for b in range(n)]
            done.update(rots)
            vals = [A.element(l) for l in r.letters]
            arc = {}
            for b in range(n):
                g = e.identity
                for l in range(1, n):
                    g = mul(g, vals[(b + l - 1) % n])
                    arc[b, l] = g
            index = defaultdict(list)
            for (b, k), u in arc.items():
                for sign, uu in ((1, u), (-1, inv(u))):
                    for zi, (_, z) in enumerate(yz):
                        index[mul(uu, z)].append((b, k, sign, zi))
            yinv = [inv(y) for _, y in yz]
            for (a_, l), sub in arc.items():
                for yi, yv in enumerate(yinv):
                    for b, k, sign, zi in index.get(mul(yv, sub), ()):
                        s_ = (a_ - b) % n
                        if s_ < k or s_ + l > n:
                            continue
                        i = member_index[rots[b]]
                        ident = ("eps'", i, k, i, s_, l)
                        cand = (yi, zi, -sign)
                        if ident not in found or cand < found[ident]:
                            found[ident] = cand

    reports = []
    for ident in sorted(found):
        kind, i, k, j, s, l = ident
        yi, zi, sg = found[ident]
        sign = 1 if kind == "eps" else -sg
        ratio = Fraction(max(k, l), len(R[i]))
        reports.append(PieceReport(kind, i, k, j, s, l, sign, yz[yi][0], yz[zi][0], ratio))
    return reports


# -- quasi-geodesics -------------------------------------------------------------

@dataclass(frozen=True)
class QGVerdict:
    status: str  # pass | fail | inconclusive
    worst: Optional[tuple] = None  # (word, start, length, distance or lower bound, deficit)
    metric: str = ""
    checked: int = 0

    def to_dict(self) -> dict:
        d = {"status": self.status, "metric": self.metric, "subwords_checked": self.checked}
        if self.worst is not None:
            w, s, l, dist, deficit = self.worst
            d["worst"] = {"word": w, "start": s, "length": l, "distance": dist, "deficit": str(deficit)}
        return d


class SubwordMetric:
    """Distances for quasi-geodesic checks, in the Cayley graph of the
    alphabet. For a free product whose alphabet holds every nontrivial
    factor element the distance is the syllable length; for the plain
    generating set of an engine with a length formula it is that formula;
    otherwise a BFS ball met in the middle."""

    def __init__(self, A: Alphabet, radius: int = 8, budget: int = DEFAULT_ELEMENT_BUDGET):
        self.A = A
        self._formula = None
        if A.full_parabolic:
            self.kind = "syllable-length"
            self._metric = None
        elif not A.parabolic and A.e.geodesic_length(A.e.identity) is not None:
            self.kind = "geodesic-formula"
            self._metric = None
            self._formula = A.e.geodesic_length
        else:
            steps = [g for _, g in A.symmetric_letters()]
            self._metric = WordMetric(A.e, radius, budget, threads=1, steps=steps)
            self.kind = f"bfs(radius {radius}, exact to {2 * radius})"

    @property
    def reach(self) -> Optional[int]:
        return None if self._metric is None else 2 * self._metric.R

    def length(self, g) -> Optional[int]:
        if self._formula is not None:
            return self._formula(g)
        if self._metric is None:
            return len(g)
        return self._metric.length(g)


def quasigeodesic_check(e: GroupEngine, R: Word, lam, c, letter_bound: int = 0,
                        alphabet: Optional[Alphabet] = None, metric: Optional[SubwordMetric] = None,
                        radius: int = 8) -> QGVerdict:
    """Every subword q of every cyclic shift of R must satisfy
    dist(1, q) >= lam * |q| - c. Distances beyond the metric reach only give
    the lower bound reach + 1, which settles q when it already suffices."""
    lam = parse_rational(lam)
    A = alphabet or Alphabet(e, letter_bound)
    metric = metric or SubwordMetric(A, radius)
    n = len(R)
    vals = [A.element(l) for l in R.letters]
    worst, status, checked = None, "pass", 0
    seen = set()
    for s in range(n):
        g = e.identity
        for l in range(1, n + 1):
            g = e.mul(g, vals[(s + l - 1) % n])
            key = (g, l)
            if key in seen:
                continue
            seen.add(key)
            checked += 1
            need = lam * l - c
            d = metric.length(g)
            exact = d is not None
            if not exact:
                d = metric.reach + 1
            deficit = need - d
            if deficit > 0:
                if exact:
                    status = "fail"
                elif status == "pass":
                    status = "inconclusive"
            if worst is None or deficit > worst[4]:
                rot = Word(R.letters[s:] + R.letters[:s])
                worst = (str(rot[:l]), s, l, d if exact else f">{metric.reach}", deficit)
    return QGVerdict(status, worst, metric.kind, checked)


# -- conditions ------------------------------------------------------------------

@dataclass
class SCReport:
    params: SCParams
    letter_bound: int
    cond1: bool
    cond1_violations: list
    cond2: str
    cond2_details: list
    cond3_eps: bool
    cond3_eps_prime: bool
    violations: list  # PieceReports with ratio >= mu
    pieces_checked: int
    set_size: int
    notes: list = field(default_factory=list)

    @staticmethod
    def _combine(*parts) -> str:
        if any(p == "fail" or p is False for p in parts):
            return "fail"
        if any(p == "inconclusive" for p in parts):
            return "inconclusive"
        return "pass"

    @property
    def C(self) -> str:
        return self._combine(self.cond1, self.cond2, self.cond3_eps)

    @property
    def C1(self) -> str:
        return self._combine(self.cond1, self.cond2, self.cond3_eps, self.cond3_eps_prime)

    def to_dict(self, S: SymmetrizedSet) -> dict:
        return {
            "params": self.params.to_dict(),
            "letter_bound": self.letter_bound,
            "relative_to": f"parabolic letters of factor norm <= {self.letter_bound}",
            "set_size": self.set_size,
            "condition_1": {"pass": self.cond1, "violations": self.cond1_violations},
            "condition_2": {"status": self.cond2, "details": self.cond2_details},
            "condition_3": {
                "eps_pieces_pass": self.cond3_eps,
                "eps_prime_pieces_pass": self.cond3_eps_prime,
                "pieces_found": self.pieces_checked,
                "violations": [p.to_dict(S) for p in self.violations],
            },
            "C": self.C,
            "C1": self.C1,
            "notes": self.notes,
        }

    def to_json(self, S: SymmetrizedSet) -> str:
        return json.dumps(self.to_dict(S), indent=2, sort_keys=True) + "\n"


def violates(p: PieceReport, mu: Fraction, R_len: int) -> bool:
    """max(|U|, |U'|) >= mu |R|, compared exactly."""
    m = max(p.u_len, p.u2_len)
    return m * mu.denominator >= mu.numerator * R_len


def check_condition(e: GroupEngine, S: SymmetrizedSet, p: SCParams, letter_bound: int = 0,
                    radius: int = 8, budget: int = DEFAULT_PIECE_BUDGET) -> SCReport:
    A = Alphabet(e, letter_bound)
    c1_bad = [str(w) for w in S.base if len(w) < p.rho]
    metric = SubwordMetric(A, radius)
    qg = [quasigeodesic_check(e, w, p.lam, p.c, alphabet=A, metric=metric) for w in S.base]
    statuses = [v.status for v in qg]
    cond2 = "fail" if "fail" in statuses else ("inconclusive" if "inconclusive" in statuses else "pass")
    pieces = find_pieces(e, S, p.eps, alphabet=A, budget=budget)
    bad = [q for q in pieces if violates(q, p.mu, len(S.members[q.r_index]))]
    return SCReport(
        p, letter_bound, not c1_bad, c1_bad, cond2,
        [dict(word=str(w), **v.to_dict()) for w, v in zip(S.base, qg)],
        not any(q.kind == "eps" for q in bad),
        not any(q.kind == "eps'" for q in bad),
        bad, len(pieces), len(S),
        notes=[f"verdict relative to letter bound {letter_bound}",
               "a piece counts when any witness (Y, Z) satisfies every clause"],
    )


# -- W-words -------------------------------------------------------------------

@dataclass
class WWord:
    word: Word
    x: Word
    a: list
    b: list
    certificate: dict

    @property
    def n(self) -> int:
        return len(self.a)


def _involution_free_pairs(f: GroupEngine) -> Optional[int]:
    """Number of inverse pairs {g, g^-1} with g != g^-1, or None if infinite."""
    elems = finite_elements(f)
    if elems is None:
        return None
    return sum(1 for g in elems if g != f.identity and f.inv(g) != g) // 2


def generate_W_word(e: GroupEngine, x: Word | str | None, n: int, plan: Optional[list] = None,
                    alpha: int = 0, beta: int = 1) -> WWord:
    """W = x a1 b1 ... an bn with a_i in factor alpha, b_i in factor beta,
    each a_i, b_i a single parabolic letter. ``plan`` lists exponent pairs
    (p_i, q_i) of the factors' first generators; default p_i = q_i = i."""
    if not isinstance(e, FreeProductEngine):
        raise EngineError("W-words need a free product engine")
    if n < 1:
        raise EngineError("n must be >= 1")
    Fa, Fb = e.F[alpha], e.F[beta]
    for name, f in (("H_alpha", Fa), ("H_beta", Fb)):
        pairs = _involution_free_pairs(f)
        if pairs is not None and pairs < n:
            raise EngineError(
                f"{name} = {f.describe()} has only {pairs} non-involution inverse pairs; "
                f"cannot supply {n} elements with a_i != a_j^(+-1) and a_i != a_i^-1"
            )
    if plan is None:
        plan = [(i, i) for i in range(1, n + 1)]
    if len(plan) != n:
        raise EngineError(f"exponent plan has {len(plan)} pairs, expected {n}")
    ga, gb = Fa.gen_elements[0], Fb.gen_elements[0]
    a = [Fa.pow(ga, p) for p, _ in plan]
    b = [Fb.pow(gb, q) for _, q in plan]
    A = Alphabet(e)
    if x is None or x == "":
        xw = Word()
    elif isinstance(x, str):
        xw = parse_word(x, e.generators)
    else:
        xw = x
    letters = list(xw.letters)
    for ai, bi in zip(a, b):
        letters.append(Letter(A.parabolic_name(alpha, ai), 1))
        letters.append(Letter(A.parabolic_name(beta, bi), 1))
    W = Word(tuple(letters))

    def distinct(elems, f):
        bad = []
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                if elems[i] == elems[j] or elems[i] == f.inv(elems[j]):
                    bad.append([i + 1, j + 1])
        return bad

    a_bad, b_bad = distinct(a, Fa), distinct(b, Fb)
    a_inv = [i + 1 for i, g in enumerate(a) if g == Fa.inv(g)]
    b_inv = [i + 1 for i, g in enumerate(b) if g == Fb.inv(g)]
    cert = {
        "W1": len(xw) <= 1 and n >= 1,
        "W2": len(xw) == 0 or (len(xw) == 1 and xw.letters[0].gen in e.generators),
        "W3": all(g != Fa.identity for g in a) and all(g != Fb.identity for g in b),
        "H_alpha_cap_H_beta_trivial": alpha != beta,
        "a_distinct_up_to_inverse": not a_bad,
        "b_distinct_up_to_inverse": not b_bad,
        "a_no_involutions": not a_inv,
        "b_no_involutions": not b_inv,
        "omega_L_avoidance": "not checkable",
        "failures": {k: v for k, v in (("a_pairs", a_bad), ("b_pairs", b_bad),
                                        ("a_involutions", a_inv), ("b_involutions", b_inv)) if v},
    }
    return WWord(W, xw, a, b, cert)


def w_word_certified(cert: dict) -> bool:
    return all(v is True for k, v in cert.items() if k not in ("omega_L_avoidance", "failures"))


# -- element families ------------------------------------------------------------

def u_family(e: GroupEngine, i: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> list:
    """U_i = {a b : a in A - 1, b in B - 1, |ab|_X = i} in G = A * <h> with
    B = h^-1 A h and X = X' u h^-1 X' h u {h}. ``e`` must be product(A, free(1))."""
    if not (isinstance(e, FreeProductEngine) and e.F[1].tag == "free" and getattr(e.F[1], "rank", 0) == 1):
        raise EngineError("u_family needs product(A, free(1))")
    h = e.inject(1, e.F[1].gen_elements[0])
    hinv = e.inv(h)
    xs = [e.inject(0, g) for g in e.F[0].gen_elements]
    X = xs + [e.mul(e.mul(hinv, g), h) for g in xs] + [h]
    steps, seen = [], set()
    for g in X:
        for s in (g, e.inv(g)):
            if s not in seen:
                seen.add(s)
                steps.append(s)
    members, layers = bfs_layers(e, i, steps, budget, threads=1)
    out = []
    for g in layers[i] if len(layers) > i else []:
        if (len(g) == 4 and g[0][0] == 0 and g[2][0] == 0
                and g[1] == hinv[0] and g[3] == h[0]):
            out.append(g)
    return out


# -- periodic paths ------------------------------------------------------------------

def periodic_path_table(e: GroupEngine, W: Word, max_len: int, d: Fraction,
                        metric: Optional[WordMetric] = None) -> list[dict]:
    """Empirical profile of subpaths labelled by W-periodic words:
    rows (start, length, distance, bound) with bound = (d/C) len - 2(C + d), C = |W|."""
    A = Alphabet(e)
    C = len(W)
    if metric is not None:
        dist_of = metric.length
    elif e.geodesic_length(e.identity) is not None:
        dist_of = e.geodesic_length
    else:
        dist_of = WordMetric(e, (max_len + 1) // 2).length
    vals = [A.element(l) for l in W.letters]
    rows = []
    for s in range(C):
        g = e.identity
        for l in range(1, max_len + 1):
            g = e.mul(g, vals[(s + l - 1) % C])
            dist = dist_of(g)
            bound = Fraction(d) / C * l - 2 * (C + Fraction(d))
            rows.append({"start": s, "length": l, "distance": dist, "bound": bound,
                         "ok": dist is not None and dist >= bound})
    return rows
