from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cgw.equivgrowth import SampledFunction, equiv_verdict, preceq_witness, reference_function
from cgw.growth import GrowthTable


def sampled(name, fn, N, lo=1):
    return SampledFunction(name, {n: fn(n) for n in range(lo, N + 1)})


def test_reference_values():
    assert list(reference_function("poly(2)", 4).values.values()) == [1, 4, 9, 16]
    assert list(reference_function("exp(2)", 3).values.values()) == [2, 4, 8]
    assert list(reference_function("nsq_log", 3).values.values()) == [1, 8, 18]
    # the formula extends past the sampled range
    assert reference_function("poly(3)", 2)(10) == 1000
    assert reference_function("exp(3/2)", 2)(2) == Fraction(9, 4)


def test_reference_errors():
    for bad in ("exp(1)", "poly(x)", "log"):
        with pytest.raises(ValueError):
            reference_function(bad, 3)
    with pytest.raises(ValueError):
        reference_function("poly(1)", 0)


def test_nsq_log_ceiling_matches_float_log():
    import math

    f = reference_function("nsq_log", 200)
    for n in range(1, 201):
        assert f(n) == n * n * math.ceil(math.log2(n + 1))


def test_square_below_nsq_log():
    f = sampled("sq", lambda n: n * n, 100)
    g = reference_function("nsq_log", 100)
    v = preceq_witness(f, g, 4)
    assert v.relation == "preceq" and v.C == 1


def test_exponential_not_below_square():
    f = sampled("exp2", lambda n: 2**n, 20)
    g = reference_function("poly(2)", 20)
    v = preceq_witness(f, g, 4)
    assert v.relation == "refuted-within"
    assert v.counterexamples[4] == (20, 1048576, 6400)
    for C, (n, fv, gv) in v.counterexamples.items():
        assert fv == 2**n and gv == (C * n) ** 2 and fv > gv


def test_equal_functions_equiv():
    f = sampled("f", lambda n: 3 * n + 1, 30)
    v = equiv_verdict(f, sampled("g", lambda n: 3 * n + 1, 30), 1)
    assert v.relation == "equiv" and v.C == 1


def test_linear_vs_cubic_refuted():
    f = reference_function("poly(1)", 60)
    g = reference_function("poly(3)", 60)
    assert equiv_verdict(f, g, 3).relation == "refuted-within"
    assert preceq_witness(f, g, 3).holds
    assert not preceq_witness(g, f, 3).holds


def test_checkable_range_of_tables():
    # a table without a formula only supports n with Cn <= N
    f = sampled("f", lambda n: n, 10)
    g = sampled("g", lambda n: n, 10)
    v = preceq_witness(f, g, 3)
    assert v.C == 1 and v.checked[1] == (1, 10)
    v = preceq_witness(sampled("h", lambda n: 2 * n, 10), g, 3)
    assert v.C == 2 and v.checked[2] == (1, 5)


def test_empty_checkable_range_raises():
    f = sampled("f", lambda n: n, 10, lo=5)
    g = sampled("g", lambda n: n, 8)
    with pytest.raises(ValueError):
        preceq_witness(f, g, 2)


def test_sampled_function_validation():
    with pytest.raises(ValueError):
        SampledFunction("e", {})
    with pytest.raises(ValueError):
        SampledFunction("gap", {1: 1, 3: 2})
    with pytest.raises(ValueError):
        SampledFunction("zero", {1: 0})
    with pytest.raises(ValueError):
        preceq_witness(sampled("f", lambda n: n, 3), sampled("f", lambda n: n, 3), 0)


def test_from_table_columns():
    exact = GrowthTable("xi", "free(2)", ["x", "y"], [1, 5, 13], None, None)
    assert SampledFunction.from_table(exact).values == {1: 5, 2: 13}
    br = GrowthTable("xi", "hnn", ["x"], [1, None, None], [1, 3, 6], [1, 4, 9])
    with pytest.raises(ValueError):
        SampledFunction.from_table(br)
    assert SampledFunction.from_table(br, column="upper").values == {1: 4, 2: 9}


def test_verdict_json_mentions_scope():
    v = preceq_witness(reference_function("poly(1)", 5), reference_function("poly(2)", 5), 2)
    d = v.to_dict()
    assert d["relation"] == "preceq" and "finite-scale" in d["scope"]


monotone = st.lists(st.integers(1, 40), min_size=1, max_size=25).map(
    lambda xs: [sum(xs[: i + 1]) for i in range(len(xs))])


@settings(max_examples=60)
@given(monotone)
def test_reflexive(vals):
    f = SampledFunction("f", {n + 1: v for n, v in enumerate(vals)})
    v = preceq_witness(f, f, 1)
    assert v.relation == "preceq" and v.C == 1
    assert equiv_verdict(f, f, 1).relation == "equiv"


@settings(max_examples=60)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 3), st.integers(0, 3))
def test_transitive_on_polynomials(a, b, c, d):
    # n^a <= n^b <= n^c with constants C1, C2 gives n^a <= n^c with C1*C2
    N = 12
    f, g, h = (reference_function(f"poly({k})", N) for k in (a, a + c, a + c + d))
    v1, v2 = preceq_witness(f, g, 3), preceq_witness(g, h, 3)
    assert v1.holds and v2.holds
    v3 = preceq_witness(f, h, v1.C * v2.C)
    assert v3.holds and v3.C <= v1.C * v2.C


@settings(max_examples=40)
@given(monotone, st.integers(1, 4))
def test_verdict_matches_direct_check(vals, Cmax):
    f = SampledFunction("f", {n + 1: v for n, v in enumerate(vals)})
    g = reference_function("poly(1)", len(vals))
    v = preceq_witness(f, g, Cmax)
    ok = [C for C in range(1, Cmax + 1) if all(f(n) <= C * n for n in range(1, len(vals) + 1))]
    assert v.C == (ok[0] if ok else None)
