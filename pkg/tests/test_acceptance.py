"""Acceptance gate: ten criteria at their stated tolerances.

Each test records a one-line verdict in RESULTS; conftest prints them at the
end of the session, and ``python3 tests/test_acceptance.py`` prints them
directly.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from cgw.conjugacy import are_conjugate, class_key
from cgw.engines import britton_reduce, engine, word_to_element
from cgw.equivgrowth import SampledFunction, equiv_verdict, preceq_witness, reference_function
from cgw.growth import HatMetric, conjugacy_growth_table, growth_table, primitive_growth_table
from cgw.smallcancel import SCParams, check_condition, find_pieces, symmetrize

from oracles import (
    brute_classes, brute_pieces, cyclically_reduced, hnn_all_orders, hnn_xy_image,
    necklace_xi, reduced_words, string_word, symmetrized_strings, to_string,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)


def report_lines() -> list[str]:
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
            for n, (ok, detail) in sorted(RESULTS.items())]


# tables shared by criteria 1-4, 9 and 10

def _tables(threads: int) -> dict:
    f2 = engine("free(2)")
    z33 = engine("product(cyclic(3),cyclic(3))")
    heis = engine("heisenberg()")
    return {
        "gamma F2": growth_table(f2, 8, threads=threads),
        "xi F2": conjugacy_growth_table(f2, 8, threads=threads),
        "pi F2": primitive_growth_table(f2, 8, threads=threads),
        "gamma Z3*Z3": growth_table(z33, 8, threads=threads),
        "xi Z3*Z3": conjugacy_growth_table(z33, 8, threads=threads),
        "pi Z3*Z3": primitive_growth_table(z33, 8, threads=threads),
        "xi H": conjugacy_growth_table(heis, 12, threads=threads),
    }


_CACHE: dict[int, dict] = {}


def tables(threads: int = 1) -> dict:
    if threads not in _CACHE:
        _CACHE[threads] = _tables(threads)
    return _CACHE[threads]


def test_criterion_01_free_growth():
    t0 = time.perf_counter()
    g = growth_table(engine("free(2)"), 8, threads=1).values
    dt = time.perf_counter() - t0
    expected = [2 * 3**n - 1 for n in range(9)]
    ok = g == expected and dt < 10
    record(1, ok, f"gamma_F2(0..8) = {g} vs 2*3^n-1; {dt:.2f}s (< 10s)")
    assert g == expected
    assert dt < 10


def test_criterion_02_free_conjugacy_growth():
    t0 = time.perf_counter()
    xi = conjugacy_growth_table(engine("free(2)"), 7, threads=1).values
    uf = brute_classes(engine("free(2)"), 5, conj_radius=10)
    neck = necklace_xi("xy", 7)
    dt = time.perf_counter() - t0
    ok = xi[:6] == uf and xi == neck and dt < 60
    record(2, ok, f"keys {xi}; union-find(n<=5) {uf}; necklaces(n<=7) {neck}; {dt:.1f}s (< 60s)")
    assert xi[:6] == uf
    assert xi == neck
    assert dt < 60


def _ratio_failures(values, lo=3, hi=8):
    return [n for n in range(lo, hi + 1) if values[n] < 2 * values[n - 1]]


def test_criterion_03_exponential_conjugacy_growth():
    T = tables()
    problems = []
    for grp in ("F2", "Z3*Z3"):
        for kind in ("xi", "pi"):
            bad = _ratio_failures(T[f"{kind} {grp}"].values)
            if bad:
                problems.append(f"{kind} {grp} ratio < 2 at n={bad}")
        xi = SampledFunction.from_table(T[f"xi {grp}"])
        v = equiv_verdict(xi, reference_function("exp(2)", 8), Cmax=3)
        if v.relation != "equiv":
            problems.append(f"xi {grp} not equiv exp(2) within Cmax=3")
    ok = not problems
    record(3, ok, "; ".join(problems) if problems else "ratios >= 2 on [3,8] and xi ~ exp(2) for both groups")
    assert not problems, problems


def test_criterion_04_heisenberg():
    t0 = time.perf_counter()
    xi = tables()["xi H"].values
    brute = brute_classes(engine("heisenberg()"), 4, conj_radius=8)
    f = SampledFunction.from_table(tables()["xi H"])
    lower = preceq_witness(reference_function("poly(2)", 12), f, Cmax=4)
    upper = preceq_witness(f, reference_function("nsq_log", 12), Cmax=6)
    dt = time.perf_counter() - t0
    ok = xi[:5] == brute and lower.holds and upper.holds and dt < 300
    record(4, ok, f"keys(n<=4) {xi[:5]} vs brute {brute}; n^2 <= xi (C={lower.C}); "
                  f"xi <= n^2 log n (C={upper.C}); {dt:.1f}s (< 5min)")
    assert xi[:5] == brute
    assert lower.relation == "preceq"
    assert upper.relation == "preceq"


def test_criterion_05_britton():
    t0 = time.perf_counter()
    e = engine("hnn(free(2), a='x', b='y')")
    base = [w for k in range(3) for w in reduced_words("xy", k)]
    pay = {w: e.base.evaluate(string_word(w)) for w in base}
    checked = disagreements = identity_pinch_free = pinch_free = 0
    for L in range(4):
        for signs in product((1, -1), repeat=L):
            for gs in product(base, repeat=L + 1):
                syl = [gs[0]]
                for s, g in zip(signs, gs[1:]):
                    syl += [s, g]
                raw = [pay[x] if i % 2 == 0 else x for i, x in enumerate(syl)]
                red = britton_reduce(e, raw)
                checked += 1
                terminal, free_of_pinches = hnn_all_orders(syl)
                if terminal != {red.signs}:
                    disagreements += 1
                if L >= 1 and free_of_pinches:
                    pinch_free += 1
                    # the x, t model is faithful, so an empty image means the identity
                    if hnn_xy_image(syl) == "" or red.t_length != L:
                        identity_pinch_free += 1
    dt = time.perf_counter() - t0
    ok = disagreements == 0 and identity_pinch_free == 0 and dt < 120
    record(5, ok, f"{checked} words, {pinch_free} pinch-free with t-length >= 1: "
                  f"{identity_pinch_free} trivial, {disagreements} reduction disagreements; {dt:.1f}s (< 2min)")
    assert disagreements == 0
    assert identity_pinch_free == 0
    assert dt < 120


def test_criterion_06_transfer():
    t0 = time.perf_counter()
    f2 = engine("free(2)")
    hnn = engine("hnn(free(2), a='x', b='y')")
    x, y = f2.gen("x"), f2.gen("y")
    pool = []
    for k in range(1, 5):
        for w in reduced_words("xy", k):
            g = f2.evaluate(string_word(w))
            if f2.conj_into_cyclic(g, x) is None and f2.conj_into_cyclic(g, y) is None:
                pool.append(w)
    rng = random.Random(20240611)
    pairs = []
    while len(pairs) < 200:
        a = rng.choice(pool)
        if len(pairs) % 2:
            # a conjugate of a inside the ball: rotate its cyclic core
            core = a
            while len(core) >= 2 and core[0] == core[-1].swapcase():
                core = core[1:-1]
            i = rng.randrange(len(core))
            b = core[i:] + core[:i]
        else:
            b = rng.choice(pool)
        pairs.append((a, b))
    lift = lambda w: word_to_element(hnn, string_word(w))
    contradictions = yes = 0
    for a, b in pairs:
        same = class_key(f2, f2.evaluate(string_word(a))) == class_key(f2, f2.evaluate(string_word(b)))
        delegated = are_conjugate(hnn, lift(a), lift(b), radius=4)
        searched = are_conjugate(hnn, lift(a), lift(b), radius=4, delegate=False)
        yes += same
        if (delegated.status == "yes") != same:
            contradictions += 1
        if searched.status == "yes" and not same or searched.status == "no" and same:
            contradictions += 1
    dt = time.perf_counter() - t0
    ok = contradictions == 0 and dt < 120
    record(6, ok, f"200 pairs ({yes} conjugate in F2), {contradictions} contradictions; {dt:.1f}s (< 2min)")
    assert contradictions == 0
    assert dt < 120


def test_criterion_07_hat_metric():
    t0 = time.perf_counter()
    direct = engine("direct(free(1),free(1))")
    free = engine("product(free(1),free(1))")
    hd = HatMetric(direct, 10)
    hf = HatMetric(free, 10)
    hs_d = [word_to_element(direct, f"0.x^{i}") for i in range(-5, 6)]
    hs_f = [word_to_element(free, f"0.x^{i}") for i in range(-5, 6)]
    worst = max(hd.distance(a, b).value for a in hs_d for b in hs_d)
    found = [hf.distance(a, b).describe() for a in hs_f for b in hs_f if a != b]
    dt = time.perf_counter() - t0
    all_nf = all(d == "not-found-within(10)" for d in found)
    ok = worst <= 3 and all_nf and dt < 60
    record(7, ok, f"H x Z max d^ = {worst}; H * Z {len(found)} distinct pairs, "
                  f"all not-found-within(10): {all_nf}; {dt:.1f}s (< 1min)")
    assert worst <= 3
    assert all_nf


def _random_cr(rng, lo, hi):
    while True:
        w = "".join(rng.choice("xyXY") for _ in range(rng.randint(lo, hi)))
        if cyclically_reduced(w):
            return w


def test_criterion_08_small_cancellation():
    t0 = time.perf_counter()
    e = engine("free(2)")
    rng = random.Random(8)
    mismatches = inconsistent = 0
    for t in range(50):
        words = [_random_cr(rng, 8, 16) for _ in range(rng.choice([1, 2]))]
        eps = t % 2
        S = symmetrize([string_word(w) for w in words])
        members = [to_string(m) for m in S.members]
        if members != symmetrized_strings(words):
            mismatches += 1
            continue
        got = {p.ident for p in find_pieces(e, S, eps)}
        if got != brute_pieces(members, eps):
            mismatches += 1
        mu = Fraction(rng.randint(1, 6), 8)
        rep = check_condition(e, S, SCParams(eps, mu, Fraction(1), 0, 1))
        pieces = find_pieces(e, S, eps)
        for kind, verdict in (("eps", rep.cond3_eps), ("eps'", rep.cond3_eps_prime)):
            any_bad = any(max(p.u_len, p.u2_len) >= mu * len(S.members[p.r_index])
                          for p in pieces if p.kind == kind)
            if verdict == any_bad or (not verdict and not rep.violations):
                inconsistent += 1
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and inconsistent == 0 and dt < 300
    record(8, ok, f"50 sets: {mismatches} piece-list mismatches, {inconsistent} condition-(3) "
                  f"inconsistencies; {dt:.1f}s (< 5min)")
    assert mismatches == 0
    assert inconsistent == 0


def test_criterion_09_monotone_and_bounded():
    bad = []
    for name, t in tables().items():
        v = t.values
        X = len(t.generators)
        if any(v[i] > v[i + 1] for i in range(len(v) - 1)):
            bad.append(f"{name} not monotone")
        if any(v[n] > (2 * X + 1) ** n for n in range(len(v))):
            bad.append(f"{name} exceeds (2|X|+1)^n")
    record(9, not bad, "; ".join(bad) or f"{len(tables())} tables monotone and under (2|X|+1)^n")
    assert not bad


def test_criterion_10_determinism():
    outputs = {}
    for threads in (1, 2, 8):
        outputs[threads] = {k: t.to_csv() for k, t in _tables(threads).items()}
        outputs[threads]["brute F2"] = repr(brute_classes(engine("free(2)"), 4, 8))
    same = outputs[1] == outputs[2] == outputs[8]
    record(10, same, f"{len(outputs[1])} outputs byte-identical at 1, 2, 8 threads: {same}")
    assert same


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
