"""Rough-set algebra: examples, exhaustive checks, and random-instance laws.

The independent oracles here use plain frozensets of labels so they share no
code path with the bitmask implementation.
"""

import json

import pytest
from hypothesis import given, settings, strategies as st

from vaguesig import roughset as r


def space_of(*payoffs):
    return r.StateSpace.from_payoffs(payoffs)


def crisp(space, *indices):
    return r.CrispSet.from_indices(space, indices)


# ---------------------------------------------------------------------------
# construction and validation

def test_state_space_validation():
    with pytest.raises(ValueError):
        r.StateSpace((), ())
    with pytest.raises(ValueError):
        r.StateSpace(("a", "a"), (1.0, 2.0))
    with pytest.raises(ValueError):
        r.StateSpace(("a", "b"), (1.0,))
    with pytest.raises(ValueError):
        r.StateSpace(("a",), (float("nan"),))


def test_partition_validation():
    sp = space_of(1, 2, 3)
    with pytest.raises(ValueError):
        r.Partition.from_blocks(sp, [["s0", "s1"]])  # does not cover
    with pytest.raises(ValueError):
        r.Partition.from_blocks(sp, [["s0", "s1"], ["s1", "s2"]])  # overlap
    with pytest.raises(ValueError):
        r.Partition(sp, (r.CrispSet(sp, 0), r.CrispSet(sp, 7)))  # empty block


def test_rough_set_requires_containment():
    sp = space_of(1, 2)
    with pytest.raises(ValueError):
        r.RoughSet(crisp(sp, 0, 1), crisp(sp, 0))
    other = space_of(1, 2, 3)
    with pytest.raises(r.SpaceMismatchError):
        r.RoughSet(crisp(sp, 0), crisp(other, 0, 1))


def test_crisp_embedding_is_flagged():
    sp = space_of(1, 2)
    rs = r.RoughSet.crisp(crisp(sp, 0))
    assert rs.is_crisp and not rs.is_proper
    assert r.boundary(rs).is_empty


# ---------------------------------------------------------------------------
# approximate

def test_approximate_two_blocks():
    sp = space_of(1, 2, 3, 4)
    part = r.Partition.from_blocks(sp, [["s0", "s1"], ["s2", "s3"]])
    target = crisp(sp, 0, 1, 2)
    rs = r.approximate(part, target)
    assert rs.lower.members == ("s0", "s1")
    assert rs.upper.members == ("s0", "s1", "s2", "s3")


def test_approximate_singleton_blocks_make_everything_crisp():
    sp = space_of(1, 2)
    part = r.Partition.singletons(sp)
    rs = r.approximate(part, crisp(sp, 0))
    assert rs.is_crisp and rs.lower.members == ("s0",)


def test_approximate_three_blocks_hand_enumerated():
    # blocks {s0,s1},{s2,s3},{s4,s5}; target {s1,s2,s3}: first block meets the
    # target but is not inside it, second block is inside, third is disjoint.
    sp = space_of(1, 2, 3, 4, 5, 6)
    part = r.Partition.from_blocks(sp, [["s0", "s1"], ["s2", "s3"], ["s4", "s5"]])
    rs = r.approximate(part, crisp(sp, 1, 2, 3))
    assert rs.lower.members == ("s2", "s3")
    assert rs.upper.members == ("s0", "s1", "s2", "s3")


def test_approximate_rejects_mismatched_spaces():
    sp = space_of(1, 2)
    other = space_of(1, 2)
    part = r.Partition.singletons(sp)
    # equal spaces are fine even when distinct objects
    r.approximate(part, crisp(other, 0))
    third = space_of(1, 2, 3)
    with pytest.raises(r.SpaceMismatchError):
        r.approximate(part, crisp(third, 0))


# ---------------------------------------------------------------------------
# boundary

def test_boundary_set_difference():
    sp = space_of(1, 2, 3, 4)
    rs = r.RoughSet(crisp(sp, 0, 1), crisp(sp, 0, 1, 2, 3))
    assert r.boundary(rs).members == ("s2", "s3")


def test_boundary_tall_height_grid():
    # heights 160..190 in steps of 5; certain above 180, possible from 170 up
    heights = list(range(160, 195, 5))
    sp = r.StateSpace(tuple(str(h) for h in heights), tuple(heights))
    lower = r.CrispSet.from_payoff(sp, lambda h: h > 180)
    upper = r.CrispSet.from_payoff(sp, lambda h: h >= 170)
    rs = r.RoughSet(lower, upper)
    assert r.boundary(rs).members == ("170", "175", "180")


# ---------------------------------------------------------------------------
# definability

def test_definability_four_cases():
    sp = space_of(1, 2, 3)
    full = sp.full_mask
    cases = [
        (crisp(sp, 0), crisp(sp, 0, 1), r.DefinabilityClass.ROUGHLY_DEFINABLE),
        (crisp(sp, 0), r.CrispSet(sp, full), r.DefinabilityClass.EXTERNALLY_UNDEFINABLE),
        (r.CrispSet(sp, 0), crisp(sp, 1), r.DefinabilityClass.INTERNALLY_UNDEFINABLE),
        (r.CrispSet(sp, 0), r.CrispSet(sp, full), r.DefinabilityClass.TOTALLY_UNDEFINABLE),
    ]
    for lower, upper, expected in cases:
        assert r.classify_definability(r.RoughSet(lower, upper)) is expected


def test_definability_total_function_and_exclusive():
    # over every pair on sizes 1..6, exactly one of the four class conditions
    for n in range(1, 7):
        sp = space_of(*range(1, n + 1))
        for rs in r.enumerate_rough_sets(sp):
            lower_empty = rs.lower.is_empty
            upper_full = rs.upper.is_full
            conditions = [
                not lower_empty and not upper_full,
                not lower_empty and upper_full,
                lower_empty and not upper_full,
                lower_empty and upper_full,
            ]
            assert sum(conditions) == 1
            got = r.classify_definability(rs)
            assert conditions[
                [
                    r.DefinabilityClass.ROUGHLY_DEFINABLE,
                    r.DefinabilityClass.EXTERNALLY_UNDEFINABLE,
                    r.DefinabilityClass.INTERNALLY_UNDEFINABLE,
                    r.DefinabilityClass.TOTALLY_UNDEFINABLE,
                ].index(got)
            ]


# ---------------------------------------------------------------------------
# informativeness

def test_informative_empty_lower_positive_upper():
    sp = space_of(-2, -1, 1, 2)
    rs = r.RoughSet(r.CrispSet(sp, 0), r.CrispSet.from_payoff(sp, lambda p: p > 0))
    assert r.is_informative(rs)


def test_uninformative_cases():
    sp = space_of(-1, 0, 1)
    full = r.CrispSet(sp, sp.full_mask)
    assert not r.is_informative(r.RoughSet(r.CrispSet(sp, 0), full))
    assert not r.is_informative(r.RoughSet(full, full))


def test_informative_full_upper_nonempty_lower():
    # content lives only in the lower approximation; still counted informative
    sp = space_of(-1, 1)
    rs = r.RoughSet(crisp(sp, 0), r.CrispSet(sp, sp.full_mask))
    assert r.is_informative(rs)
    report = r.verify_informative_rough_sets(sp)
    assert report.lower_only_informative_count == 2


# ---------------------------------------------------------------------------
# tone classification

def tone_oracle(lower, upper, pos, neg):
    """Straight-line transcription of the sign classification table over
    plain frozensets, rows checked top to bottom."""
    if (lower and lower <= pos) or (not lower and upper <= pos):
        return 1
    if (lower and lower <= neg) or (not lower and upper <= neg):
        return -1
    return 0


def test_tone_examples():
    sp = space_of(-2, -1, 0, 1, 2)
    pos = r.CrispSet.from_payoff(sp, lambda p: p > 0)
    neg = r.CrispSet.from_payoff(sp, lambda p: p < 0)
    empty = r.CrispSet(sp, 0)
    full = r.CrispSet(sp, sp.full_mask)
    assert r.tone_classify(r.RoughSet(empty, pos)) is r.ToneClass.POSITIVE
    assert r.tone_classify(r.RoughSet(crisp(sp, 0), full)) is r.ToneClass.NEGATIVE
    assert r.tone_classify(r.RoughSet(empty, full)) is r.ToneClass.NEUTRAL


def test_tone_zero_payoff_states_belong_to_neither_sign():
    sp = space_of(0, 1)
    # certain state has payoff zero: not a subset of the positive states
    rs = r.RoughSet(crisp(sp, 0), r.CrispSet(sp, sp.full_mask))
    assert r.tone_classify(rs) is r.ToneClass.NEUTRAL


def test_tone_matches_transcription_exhaustively():
    payoff_pool = (-2, -1, 0, 1, 2)
    for n in range(1, 7):
        payoffs = tuple(payoff_pool[i % 5] for i in range(n))
        sp = space_of(*payoffs)
        pos = frozenset(l for l, p in zip(sp.labels, sp.payoffs) if p > 0)
        neg = frozenset(l for l, p in zip(sp.labels, sp.payoffs) if p < 0)
        for rs in r.enumerate_rough_sets(sp):
            expected = tone_oracle(
                frozenset(rs.lower.members), frozenset(rs.upper.members), pos, neg
            )
            assert int(r.tone_classify(rs)) == expected


# ---------------------------------------------------------------------------
# faithfulness

def test_faithful_crisp_tall_example():
    heights = list(range(160, 195, 5))
    sp = r.StateSpace(tuple(str(h) for h in heights), tuple(heights))
    rs = r.RoughSet(
        r.CrispSet.from_payoff(sp, lambda h: h > 180),
        r.CrispSet.from_payoff(sp, lambda h: h >= 170),
    )
    candidate = r.CrispSet.from_labels(sp, ["180"])
    assert not r.faithful_crisp(candidate, rs)


def test_faithful_crisp_crisp_embedding_represents_itself():
    sp = space_of(1, 2, 3)
    members = crisp(sp, 1)
    assert r.faithful_crisp(members, r.RoughSet.crisp(members))


def test_faithful_crisp_brute_force_all_candidates():
    # frozenset oracle over every candidate and every proper rough set, n=4
    sp = space_of(1, 2, 3, 4)
    labels = set(sp.labels)
    for rs in r.enumerate_rough_sets(sp, proper_only=True):
        lower = frozenset(rs.lower.members)
        upper = frozenset(rs.upper.members)
        for candidate in r.enumerate_crisp_sets(sp):
            c = frozenset(candidate.members)
            expected = upper <= c and (labels - lower) <= (labels - c)
            assert r.faithful_crisp(candidate, rs) == expected
            assert expected is False  # no crisp set is faithful to a proper one


def test_faithful_rough_reflexive_and_maximal():
    sp = space_of(1, 2, 3, 4)
    full = r.RoughSet(r.CrispSet(sp, 0), r.CrispSet(sp, sp.full_mask))
    for rs in r.enumerate_rough_sets(sp, proper_only=True):
        assert r.faithful_rough(rs, rs)
        assert r.faithful_rough(full, rs)


def test_faithful_rough_brute_force_pairs():
    sp = space_of(1, 2, 3, 4)
    all_sets = list(r.enumerate_rough_sets(sp))
    for rs in all_sets:
        lower = frozenset(rs.lower.members)
        upper = frozenset(rs.upper.members)
        for cand in all_sets:
            cl = frozenset(cand.lower.members)
            cu = frozenset(cand.upper.members)
            expected = upper <= cu and cl <= lower
            assert r.faithful_rough(cand, rs) == expected
            if cl > lower:
                assert not r.faithful_rough(cand, rs)


# ---------------------------------------------------------------------------
# exhaustive verifications

def test_informative_witness_smallest_space():
    report = r.verify_informative_rough_sets(space_of(1, 2))
    assert report.holds and not report.vacuous
    first = report.witnesses[0]
    assert first.lower.is_empty and first.upper.members == ("s0",)


def test_informative_witnesses_found_size_four():
    report = r.verify_informative_rough_sets(space_of(1, 2, 3, 4))
    assert report.holds
    assert report.informative_proper_count > 0
    assert report.full_lower_informative_count == 0


def test_informative_single_state_vacuous():
    report = r.verify_informative_rough_sets(space_of(1))
    assert report.vacuous and report.holds
    assert report.proper_count == 0
    assert any("vacuous" in note for note in report.notes)


def test_enumeration_cap_refuses():
    sp = space_of(*range(9))
    with pytest.raises(r.EnumerationCapError):
        r.verify_informative_rough_sets(sp)
    with pytest.raises(r.EnumerationCapError):
        r.verify_faithful_representation(sp)
    # explicit override allows it
    assert r.verify_informative_rough_sets(sp, cap=9).holds


def test_faithful_representation_size_three():
    report = r.verify_faithful_representation(space_of(1, 2, 3))
    assert report.holds
    assert report.crisp_faithful_pairs == 0
    assert report.rough_faithful_missing == 0
    # 3**3 - 2**3 proper pairs, each against 2**3 candidates
    assert report.crisp_candidates_checked == 19 * 8


def test_faithful_representation_size_two_hand_count():
    report = r.verify_faithful_representation(space_of(1, 2))
    # proper pairs on two states: <0,{s0}>, <0,{s1}>, <{s0},full>, <{s1},full>,
    # <0,full>; four crisp candidates each; none faithful
    assert report.proper_count == 5
    assert report.crisp_candidates_checked == 5 * 4
    assert report.crisp_faithful_pairs == 0
    assert report.holds


# ---------------------------------------------------------------------------
# random-instance laws

@st.composite
def partition_and_target(draw, max_size=12):
    n = draw(st.integers(min_value=1, max_value=max_size))
    payoffs = draw(
        st.lists(
            st.integers(min_value=-3, max_value=3), min_size=n, max_size=n
        )
    )
    assignment = draw(
        st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n)
    )
    target_mask = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    sp = space_of(*payoffs)
    part = r.Partition.from_assignment(sp, assignment)
    return sp, part, r.CrispSet(sp, target_mask)


@given(partition_and_target())
@settings(max_examples=200, deadline=None)
def test_containment_law(case):
    sp, part, target = case
    rs = r.approximate(part, target)
    assert rs.lower.issubset(target)
    assert target.issubset(rs.upper)


@given(partition_and_target(), st.integers(min_value=0))
@settings(max_examples=200, deadline=None)
def test_monotonicity_law(case, shrink_bits):
    sp, part, target2 = case
    target1 = r.CrispSet(sp, target2.mask & shrink_bits)
    rs1 = r.approximate(part, target1)
    rs2 = r.approximate(part, target2)
    assert rs1.lower.issubset(rs2.lower)
    assert rs1.upper.issubset(rs2.upper)


@given(partition_and_target(), st.data())
@settings(max_examples=200, deadline=None)
def test_refinement_law(case, data):
    sp, part, target = case
    # split each block in two by a drawn submask: a strictly finer partition
    fine_blocks = []
    for block in part.blocks:
        split = data.draw(st.integers(min_value=0, max_value=block.mask)) & block.mask
        if split and split != block.mask:
            fine_blocks.append(r.CrispSet(sp, split))
            fine_blocks.append(r.CrispSet(sp, block.mask & ~split))
        else:
            fine_blocks.append(block)
    fine = r.Partition(sp, tuple(fine_blocks))
    coarse_rs = r.approximate(part, target)
    fine_rs = r.approximate(fine, target)
    assert coarse_rs.lower.issubset(fine_rs.lower)
    assert fine_rs.upper.issubset(coarse_rs.upper)


# ---------------------------------------------------------------------------
# JSON round-trip

def test_space_json_round_trip():
    sp = r.StateSpace(("down", "flat", "up"), (-1.0, 0.0, 2.5))
    again = r.space_from_json(r.space_to_json(sp))
    assert again == sp


def test_rough_set_json_round_trip():
    sp = space_of(-1, 0, 1)
    rs = r.RoughSet(crisp(sp, 2), crisp(sp, 1, 2))
    again = r.rough_set_from_json(r.rough_set_to_json(rs))
    assert again == rs
    payload = json.loads(r.rough_set_to_json(rs))
    assert payload["lower_mask"] == [False, False, True]
    assert payload["upper_mask"] == [False, True, True]
