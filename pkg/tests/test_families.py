from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diff_forge.algebra import CyclicGroup, FieldAdditiveGroup, Subgroup, field_of_order
from diff_forge.families import (Design, RelativeDifferenceFamily, StrongDifferenceFamily, affine_plane,
                                 compose_design, coset_transversal, develop_df, difference_multiset,
                                 double, pair_counts, sdf_necessary_conditions, trivial_design,
                                 verify_design, verify_df, verify_sdf)

from conftest import brute_pairs


def brute_diffs(blocks, n):
    c = Counter()
    for b in blocks:
        for i, x in enumerate(b):
            for j, y in enumerate(b):
                if i != j:
                    c[(x - y) % n] += 1
    return c


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 30).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=6),
                                             min_size=1, max_size=5))))
def test_difference_multiset_matches_brute_force(case):
    n, blocks = case
    got = difference_multiset(blocks, CyclicGroup(n))
    assert got == brute_diffs(blocks, n)
    assert sum(got.values()) == sum(len(b) * (len(b) - 1) for b in blocks)


def test_difference_multiset_empty_rejected():
    with pytest.raises(ValueError):
        difference_multiset([], CyclicGroup(3))


def test_repeated_entries_give_zero_difference():
    assert difference_multiset([[2, 2]], CyclicGroup(5)) == Counter({0: 2})


def test_planar_difference_set():
    # {0,1,3} in Z_7 is the Fano plane's difference set, so it is a (Z_7,{0},3,1)-DF.
    df = RelativeDifferenceFamily(CyclicGroup(7), Subgroup(CyclicGroup(7)), [(0, 1, 3)], 3, 1)
    v = verify_df(df)
    assert v.ok and v.conditions["block_count_ok"]
    fano = Design(7, 3, 1, develop_df(df))
    assert verify_design(fano).ok


def test_df_failure_reports_first_violation():
    G = CyclicGroup(7)
    v = verify_df(RelativeDifferenceFamily(G, Subgroup(G), [(0, 1, 2)], 3, 1))
    assert not v.ok
    assert v.first_violation == {"element": 1, "observed": 2, "expected": 1}


def test_df_rejects_repeated_element():
    G = CyclicGroup(9)
    with pytest.raises(ValueError):
        RelativeDifferenceFamily(G, Subgroup(G), [(0, 1, 1)], 3, 1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.integers(0, 12), min_size=3, max_size=3), min_size=1, max_size=3))
def test_verify_df_agrees_with_count(blocks):
    G = CyclicGroup(13)
    blocks = [tuple(sorted(b)) for b in blocks]
    diffs = brute_diffs(blocks, 13)
    lam = diffs.get(1, 0) or 1
    expected = all(diffs.get(g, 0) == lam for g in range(1, 13)) and diffs.get(0, 0) == 0
    assert verify_df(RelativeDifferenceFamily(G, Subgroup(G), blocks, 3, lam)).ok == expected


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_sdf_conditions_hold_for_verified_paley(p):
    F = field_of_order(p)
    sq = sorted({F.mul(x, x) for x in range(1, p)})
    block = [0] + [s for s in sq for _ in range(2)]
    sdf = StrongDifferenceFamily(FieldAdditiveGroup(F), [block], p, p - 1)
    v = verify_sdf(sdf)
    assert v.ok and v.observed == p - 1
    # asserted independently of the verifier's own report
    assert (p - 1) % 2 == 0 and ((p - 1) * p) % (p * (p - 1)) == 0
    assert v.conditions == {"mu_even": True, "mu_g_divisible": True}


def test_sdf_necessary_conditions_flag_odd_mu():
    assert sdf_necessary_conditions(7, 3, 3) == {"mu_even": False, "mu_g_divisible": False}


def test_sdf_failure():
    v = verify_sdf(StrongDifferenceFamily(CyclicGroup(5), [(0, 1, 1)], 3, 2))
    assert not v.ok and v.first_violation["element"] in range(5)


def test_sdf_block_length_checked():
    with pytest.raises(ValueError):
        StrongDifferenceFamily(CyclicGroup(5), [(0, 1)], 3, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11])
def test_affine_planes(q):
    A = affine_plane(field_of_order(q))
    assert A.params == (q * q, q, 1)
    assert len(A.blocks) == q * q + q == A.expected_blocks
    assert verify_design(A).ok
    cover = brute_pairs(A.v, A.blocks)
    assert len(cover) == A.v * (A.v - 1) // 2 and set(cover.values()) == {1}


def test_pair_counts_against_brute_force():
    rng = np.random.default_rng(3)
    blocks = np.array([rng.choice(15, 4, replace=False) for _ in range(20)])
    pc = pair_counts(15, blocks)
    for (a, b), c in brute_pairs(15, blocks).items():
        assert pc[a * 15 + b] == c
    assert pc.sum() == 20 * 6


def test_design_violations():
    A = affine_plane(field_of_order(3))
    missing = Design(9, 3, 1, A.blocks[1:])
    v = verify_design(missing)
    assert not v.ok and v.first_violation["observed"] == 0
    assert v.first_violation["pair"] == sorted(A.blocks[0][:2].tolist())
    bad = A.blocks.copy()
    bad[0, 0] = 99
    assert verify_design(Design(9, 3, 1, bad)).first_violation["reason"] == "point out of range"
    bad = A.blocks.copy()
    bad[0, 1] = bad[0, 0]
    assert verify_design(Design(9, 3, 1, bad)).first_violation["reason"] == "repeated point in block"


def test_coset_transversal_partitions_group():
    G = CyclicGroup(12)
    N = Subgroup(G, "elements", [0, 4, 8])
    reps = coset_transversal(N)
    assert reps.tolist() == [0, 1, 2, 3]
    cosets = np.concatenate([G.vadd(N.element_indices(), t) for t in reps])
    assert sorted(cosets.tolist()) == list(range(12))


def test_compose_variant_one():
    # (F_5 x F_5, F_5 x {0}, 5, 1)-DF from the Paley lift with y1 = 1, filled with 2-(5,5,1).
    from diff_forge.search import lift_input_for, make_problem
    from diff_forge.lifting import lift
    pr = make_problem(5, "quarter", 5, lam=1)
    df = lift(lift_input_for(pr, {1: 1}))
    assert verify_df(df).ok and df.params == (25, 5, 5, 1)
    D = compose_design(df, trivial_design(5), 1)
    assert D.params == (25, 5, 1) and len(D.blocks) == 30
    assert verify_design(D).ok


def test_compose_variant_two():
    # {0,1,3} in Z_8 relative to {0,4}; adding a point at infinity gives AG(2,3).
    G = CyclicGroup(8)
    df = RelativeDifferenceFamily(G, Subgroup(G, "elements", [0, 4]), [(0, 1, 3)], 3, 1)
    assert verify_df(df).ok
    D = compose_design(df, trivial_design(3), 2)
    assert D.params == (9, 3, 1) and len(D.blocks) == 12
    assert verify_design(D).ok
    assert (D.blocks == 8).any(axis=1).sum() == 4


def test_compose_mismatch():
    G = CyclicGroup(8)
    df = RelativeDifferenceFamily(G, Subgroup(G, "elements", [0, 4]), [(0, 1, 3)], 3, 1)
    with pytest.raises(ValueError):
        compose_design(df, trivial_design(3), 1)
    with pytest.raises(ValueError):
        compose_design(df, trivial_design(2), 2)
    with pytest.raises(ValueError):
        compose_design(df, trivial_design(3, 2), 2)


def test_double():
    G = CyclicGroup(7)
    df = double(RelativeDifferenceFamily(G, Subgroup(G), [(0, 1, 3)], 3, 1))
    assert df.lam == 2 and len(df.blocks) == 2 and verify_df(df).ok
