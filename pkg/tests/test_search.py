from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from kakeyalab.galois import field_of_order
from kakeyalab.geometry import PointSet, plane
from kakeyalab.kakeya import KakeyaError, construct_oval_kakeya, kakeya_set, random_config
from kakeyalab.search import (
    bound_ladder,
    closed_form_minimum,
    contains_blocking_set,
    dual_blocking_check,
    is_blocking_set,
    min_kakeya,
    minimal_blocking_sets,
    minimal_dual_blocking_enumeration,
    two_line_complements,
)


def brute_min(q):
    """Minimum |K| and optimal assignments over every choice on the line x0 = 0."""
    P = plane(q)
    base = P.line_index_of((1, 0, 0))
    on_base = set(P.points_on_line(base))
    choices = [[L for L in P.lines_through_point(x) if L != base] for x in P.points_on_line(base)]
    off = {L: set(P.points_on_line(L)) - on_base for L in range(P.num_lines)}
    best, wits = None, []
    for a in product(*choices):
        size = len(set().union(*(off[L] for L in a)))
        if best is None or size < best:
            best, wits = size, [a]
        elif size == best:
            wits.append(a)
    return best, sorted(wits)


@pytest.mark.parametrize("q,k,count", [(3, 7, 72), (4, 10, 48)])
def test_unpruned_matches_brute_force(q, k, count):
    bk, bw = brute_min(q)
    res = min_kakeya(field_of_order(q), prune=False)
    assert res.exact and res.k == bk == k
    assert sorted(tuple(c.assignment) for c in res.witnesses) == bw
    assert res.witness_count == len(bw) == count


@pytest.mark.parametrize("q", [3, 4, 5])
def test_pruned_equals_unpruned(q):
    F = field_of_order(q)
    a, b = min_kakeya(F, prune=False), min_kakeya(F, prune=True)
    assert a.k == b.k == closed_form_minimum(q)
    assert a.witness_count == b.witness_count
    assert b.nodes_visited <= a.nodes_visited


@pytest.mark.parametrize("q", [3, 4, 5])
def test_symmetry_reduction_count(q):
    F = field_of_order(q)
    full, red = min_kakeya(F), min_kakeya(F, symmetry=True)
    assert red.k == full.k
    assert red.total_witness_count == full.witness_count
    assert red.witness_count * q * q == full.witness_count


@pytest.mark.parametrize("q", [7, 8])
def test_search_larger_q(q):
    res = min_kakeya(field_of_order(q), symmetry=True)
    assert res.exact and res.k == closed_form_minimum(q)
    for w in res.witnesses[:20]:
        assert len(kakeya_set(w)) == res.k


def test_workers_deterministic():
    F = field_of_order(5)
    a = min_kakeya(F, symmetry=True, workers=1)
    b = min_kakeya(F, symmetry=True, workers=2)
    assert a.to_dict() == b.to_dict()


def test_node_budget_marks_inexact():
    res = min_kakeya(field_of_order(7), prune=False, node_budget=100)
    assert not res.exact


def test_closed_form():
    assert [closed_form_minimum(q) for q in (2, 3, 4, 5, 7, 8, 9)] == [3, 7, 10, 17, 31, 36, 49]


def test_bound_ladder_q7():
    rep = bound_ladder(7, 31)
    by = {r["name"]: r for r in rep["ladder"]}
    assert Fraction(by["faber"]["value"]) == Fraction(28) + Fraction(7, 3)
    assert by["blokhuis_mazzocca"]["ceil"] == 31
    assert by["blokhuis_bruen"]["ceil"] == 31
    assert rep["holds"]


@pytest.mark.parametrize("q", [3, 5, 9, 11, 13, 101])
def test_bound_ladder_order(q):
    rep = bound_ladder(q, closed_form_minimum(q))
    assert rep["holds"]
    by = {r["name"]: Fraction(r["value"]) for r in rep["ladder"]}
    assert by["faber"] <= by["cooper"] <= by["blokhuis_mazzocca"]


def test_bound_ladder_even_rejected():
    with pytest.raises(KakeyaError):
        bound_ladder(4)


def brute_blocking(P, S):
    S = set(S)
    return all(S & set(P.points_on_line(L)) and not set(P.points_on_line(L)) <= S
               for L in range(P.num_lines))


def test_is_blocking_set_examples():
    P = plane(3)
    line = P.points_on_line(0)
    assert not is_blocking_set(PointSet.from_indices(P.key, line))
    rng = np.random.default_rng(0)
    for _ in range(300):
        idx = [int(x) for x in rng.choice(13, size=int(rng.integers(1, 13)), replace=False)]
        assert is_blocking_set(PointSet.from_indices(P.key, idx)) == brute_blocking(P, idx)


def test_minimal_blocking_sets_q3():
    P = plane(3)
    mbs = minimal_blocking_sets(P)
    assert len(mbs) == 234
    assert min(b.bit_count() for b in mbs) == 6


def test_contains_blocking_set_oracle_q3():
    """Backtracking answer agrees with the subset sweep on random masks."""
    P = plane(3)
    mbs = minimal_blocking_sets(P)
    rng = np.random.default_rng(1)
    for _ in range(400):
        allowed = int(rng.integers(1 << 13))
        expected = any(b & ~allowed == 0 for b in mbs)
        found = contains_blocking_set(P, allowed)
        assert (found is not None) == expected
        if found is not None:
            assert found & ~allowed == 0 and is_blocking_set(PointSet(P.key, found))


def test_dual_blocking_examples():
    P = plane(3)
    comp = next(iter(two_line_complements(P)))
    rep = dual_blocking_check(PointSet(P.key, comp))
    assert rep.is_dual_blocking and rep.is_minimal and rep.classification == "two-line-complement"
    K = kakeya_set(construct_oval_kakeya(field_of_order(3)))
    rep = dual_blocking_check(K)
    assert rep.is_dual_blocking and rep.is_minimal is False
    line = PointSet.from_indices(P.key, P.points_on_line(0))
    assert not dual_blocking_check(line).is_dual_blocking


def test_dual_blocking_certificate_path():
    P = plane(5)
    K = kakeya_set(random_config(P, np.random.default_rng(2)))
    rep = dual_blocking_check(K)
    assert rep.method == "certificate" and rep.classification == "contains-kakeya"
    comp = next(iter(two_line_complements(P)))
    assert dual_blocking_check(PointSet(P.key, comp)).classification == "contains-two-line-complement"
    few = PointSet.from_indices(P.key, [0, 1, 2])
    assert not dual_blocking_check(few).is_dual_blocking


def test_minimal_dual_blocking_enumeration_q3():
    rep = minimal_dual_blocking_enumeration(field_of_order(3))
    assert rep["minimal_blocking_sets"] == 234
    assert rep["dual_blocking_sets"] == 676
    assert rep["minimal_dual_blocking_sets"] == 78
    assert rep["types_at_minimum"] == ["two-line-complement"]
    assert rep["min_dual_blocking_size"] == 6
    assert rep["other_count"] == 0
    assert rep["kakeya_sets"] == rep["kakeya_sets_dual_blocking"] == 481
    assert rep["kakeya_min_size"] == rep["odd_q_bound"] == 7


def test_enumeration_limited_to_q3():
    with pytest.raises(KakeyaError):
        minimal_dual_blocking_enumeration(field_of_order(5))
