import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permsum.errors import DomainError, ResourceError
from permsum.poly import (
    Clause,
    Polynomial,
    canonicalize,
    evaluate,
    exp_sum,
    read_polynomial,
    substitute,
    wrap_angle,
    write_polynomial,
)

PI = math.pi


def test_wrap_angle():
    assert wrap_angle(2 * PI) == 0.0
    assert wrap_angle(-PI / 2) == pytest.approx(3 * PI / 2)
    assert wrap_angle(2 * PI - 1e-14) == 0.0


def test_canonicalize_merges_and_drops():
    p = canonicalize([(PI, [1, 0]), (PI, [0, 1]), (0.5, [2]), (0.25, [])], 3)
    assert p.clauses == (Clause(0.5, (2,)),)
    assert p.constant_phase == 0.25


def test_polynomial_rejects_bad_clauses():
    with pytest.raises(DomainError):
        Polynomial(2, (Clause(1.0, (1, 0)),))
    with pytest.raises(DomainError):
        Polynomial(2, (Clause(1.0, (0, 5)),))
    with pytest.raises(DomainError):
        canonicalize([(1.0, [3])], 2)


def test_evaluate():
    p = canonicalize([(0.5, [0, 1]), (0.25, [2])], 3)
    assert evaluate(p, [1, 1, 0]) == 0.5
    assert evaluate(p, [1, 1, 1]) == pytest.approx(0.75)


# oracle values, worked by hand
def test_exp_sum_small_oracles():
    assert exp_sum(Polynomial(0)) == 1
    assert exp_sum(Polynomial(3)) == 8
    # sum over x0 of exp(i pi x0) = 1 - 1
    assert abs(exp_sum(canonicalize([(PI, [0])], 1))) < 1e-15
    # pi x0 x1: 1 + 1 + 1 - 1 = 2
    assert exp_sum(canonicalize([(PI, [0, 1])], 2)) == pytest.approx(2)
    # pi/2 x0: 1 + i
    assert exp_sum(canonicalize([(PI / 2, [0])], 1)) == pytest.approx(1 + 1j)


def test_exp_sum_example_reduced_polynomial():
    p = canonicalize([(PI / 8, [0, 1, 2]), (PI / 4, [0, 1]), (PI / 2, [2])], 3)
    assert exp_sum(p) / 8 == pytest.approx(0.3479034060844076 + 0.5112237766939547j, abs=1e-14)


def test_exp_sum_cap(monkeypatch):
    with pytest.raises(ResourceError):
        exp_sum(Polynomial(25))
    with pytest.raises(ResourceError):
        exp_sum(Polynomial(3), max_vars=2)
    monkeypatch.setenv("PERMSUM_MAX_N", "2")
    with pytest.raises(ResourceError):
        exp_sum(Polynomial(3))


def test_exp_sum_threads_identical():
    p = canonicalize([(0.3 * i, [i % 17, (3 * i) % 17]) for i in range(1, 30)], 17)
    assert exp_sum(p, threads=1) == exp_sum(p, threads=4)


def test_substitute():
    p = canonicalize([(0.5, [0, 1]), (0.25, [1, 2]), (0.125, [0])], 3)
    r, keep = substitute(p, {1: 1}, return_map=True)
    assert keep == (0, 2)
    assert r.as_dict() == {(0,): 0.625, (1,): 0.25}
    r0 = substitute(p, {1: 0})
    assert r0.as_dict() == {(0,): 0.125}


def test_text_round_trip():
    text = "poly n=3\n0.39269908169872414 0 1 2\n0.7853981633974483 0 1\n1.5707963267948966 2\n"
    p = read_polynomial(text)
    assert write_polynomial(p) == text
    with pytest.raises(DomainError):
        read_polynomial("nonsense")


clause_st = st.tuples(
    st.floats(0.01, 6.2), st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True)
)


@settings(max_examples=60, deadline=None)
@given(st.lists(clause_st, max_size=6))
def test_exp_sum_matches_definition(raw):
    p = canonicalize(raw, 6)
    direct = sum(
        complex(math.cos(evaluate(p, x)), math.sin(evaluate(p, x)))
        for x in ([(k >> i) & 1 for i in range(6)] for k in range(64))
    )
    assert abs(exp_sum(p) - direct) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(clause_st, max_size=6), st.integers(0, 5), st.integers(0, 1))
def test_substitute_splits_sum(raw, var, bit):
    p = canonicalize(raw, 6)
    total = exp_sum(substitute(p, {var: 0})) + exp_sum(substitute(p, {var: 1}))
    assert abs(total - exp_sum(p)) < 1e-10
