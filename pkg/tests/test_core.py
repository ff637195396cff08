"""Domain type and integer-arithmetic tests for the core module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmbp.core import (
    Assignment,
    CapacityProfile,
    ProfileError,
    WeightProfile,
    b_constant,
    conjugate,
    d_threshold,
    gap_vector,
    is_k_feasible,
    make_instance,
    normalize,
    weight_gap_profile,
)

EX_WEIGHTS = WeightProfile((5, 5, 3, 1, 1, 0))
EX_CAPS = CapacityProfile((17, 17, 17, 17, 17, 8))
EX_PARTITION = [
    {5: 1, 3: 3, 1: 2},
    {5: 2, 3: 2, 1: 1, 0: 1},
    {5: 3, 1: 2, 0: 1},
    {5: 3, 1: 1, 0: 2},
    {5: 3, 1: 2, 0: 1},
    {3: 1, 1: 4, 0: 1},
]


def profiles(max_n=8, max_w=10, min_distinct=1):
    """Strategy for non-increasing weight profiles."""
    return (
        st.lists(st.integers(0, max_w), min_size=1, max_size=max_n)
        .map(lambda vs: WeightProfile(tuple(sorted(vs, reverse=True))))
        .filter(lambda w: len(set(w.entries)) >= min_distinct)
    )


class TestProfiles:
    def test_rejects_increasing(self):
        with pytest.raises(ProfileError, match="position 2"):
            WeightProfile((1, 3))
        with pytest.raises(ProfileError):
            CapacityProfile((4, 5))

    def test_rejects_negative_weights(self):
        with pytest.raises(ProfileError):
            WeightProfile((3, -1))

    def test_capacities_may_be_negative(self):
        assert CapacityProfile((3, -1)).entries == (3, -1)

    def test_truncate(self):
        assert EX_WEIGHTS.truncate(3).entries == (3, 1, 1, 0)
        assert WeightProfile((3, 1)).truncate(1).entries == (3, 1)
        assert WeightProfile((6, 6, 4, 4, 4, 0)).truncate(4).entries == (4, 4, 0)
        with pytest.raises(ProfileError):
            EX_WEIGHTS.truncate(7)
        with pytest.raises(ProfileError):
            EX_WEIGHTS.truncate(0)

    def test_instance_shape_check(self):
        with pytest.raises(ProfileError):
            make_instance(2, (3, 1), (5, 3, 1))
        with pytest.raises(ProfileError):
            make_instance(0, (3, 1), (5, 3))


class TestConjugate:
    def test_two_rows_of_three(self):
        c = conjugate(WeightProfile((3, 3, 0)), 3)
        assert (c.a0, c.runs, c.k) == (0, ((2, 3),), 1)

    def test_mixed_profile(self):
        c = conjugate(EX_WEIGHTS, 6)
        assert c.a0 == 0
        assert c.runs == ((5, 1), (3, 2), (2, 2))
        assert c.k == 3
        assert c.expand() == (5, 3, 3, 2, 2)

    def test_constant_profile_all_full_columns(self):
        c = conjugate(WeightProfile((4, 4, 4)), 3)
        assert (c.a0, c.runs, c.k) == (4, (), 0)

    def test_rows_too_small(self):
        with pytest.raises(ProfileError):
            conjugate(WeightProfile((3, 3, 0)), 1)

    @given(profiles(max_n=7, max_w=8), st.integers(0, 3))
    @settings(max_examples=200)
    def test_expand_and_reconjugate_identity(self, w, extra):
        nonzero = sum(1 for v in w.entries if v > 0)
        rows = nonzero + extra
        if rows == 0:
            rows = 1
        expanded = conjugate(w, rows).expand()
        rebuilt = tuple(
            sum(1 for h in expanded if h >= i) for i in range(1, rows + 1)
        )
        padded = tuple(v for v in w.entries if v > 0) + (0,) * (rows - nonzero)
        assert rebuilt == padded


class TestBConstant:
    @pytest.mark.parametrize(
        "w, expected",
        [
            ((3, 3, 0), 4),
            ((3, 3), 0),
            ((5, 5, 3, 1, 1, 0), 4),
            ((5, 5, 3, 1, 1), 4),
            ((3, 1), 1),
            ((7,), 0),
            ((0, 0, 0), 0),
        ],
    )
    def test_known_values(self, w, expected):
        assert b_constant(WeightProfile(w)) == expected

    def test_truncation_row(self):
        w = WeightProfile((6, 6, 4, 4, 4, 0))
        row = [b_constant(w.truncate(i)) for i in range(1, 7)]
        assert row == [7, 6, 9, 6, 3, 0]

    @given(profiles(max_n=8, max_w=10, min_distinct=2))
    @settings(max_examples=500)
    def test_gap_sum_identity(self, w):
        gaps = weight_gap_profile(w)
        assert b_constant(w) == sum(g - 1 for g in gaps.gaps)

    @given(st.lists(st.integers(0, 12), min_size=2, max_size=8, unique=True))
    @settings(max_examples=300)
    def test_strictly_decreasing_closed_form(self, vals):
        w = WeightProfile(tuple(sorted(vals, reverse=True)))
        assert b_constant(w) == w[0] - w[w.n - 1] - w.n + 1

    @given(st.integers(2, 8), st.integers(0, 9), st.data())
    @settings(max_examples=200)
    def test_balanced_profiles_vanish(self, n, start, data):
        steps = data.draw(st.lists(st.integers(0, 1), min_size=n - 1, max_size=n - 1))
        entries = [start + sum(steps)]
        for s in reversed(steps):
            entries.append(entries[-1] - s)
        w = WeightProfile(tuple(sorted(entries, reverse=True)))
        for i in range(1, w.n + 1):
            assert b_constant(w.truncate(i)) == 0


class TestWeightGaps:
    def test_mixed_profile(self):
        g = weight_gap_profile(EX_WEIGHTS)
        assert g.gaps == (2, 2, 2, 2, 1)
        assert g.second_largest == 3
        assert g.predecessor_of == {3: 5, 1: 3, 0: 1}
        assert g.successor_of == {5: 3, 3: 1, 1: 0}

    def test_two_values(self):
        g = weight_gap_profile(WeightProfile((3, 1)))
        assert g.gaps == (2,)
        assert g.second_largest == 1
        # cross-check against the correction constant
        assert sum(x - 1 for x in g.gaps) == b_constant(WeightProfile((3, 1)))

    def test_top_block(self):
        g = weight_gap_profile(WeightProfile((5, 5, 5, 1, 0)))
        assert g.gaps == (4, 4, 4, 1)
        assert g.second_largest == 1

    def test_rejects_constant(self):
        with pytest.raises(ProfileError):
            weight_gap_profile(WeightProfile((4, 4, 4)))


class TestAssignment:
    def test_from_bins_and_accessors(self):
        a = Assignment.from_bins(EX_WEIGHTS, 6, EX_PARTITION)
        assert a.class_values == (5, 3, 1, 0)
        assert a.class_supply == (12, 6, 12, 6)
        assert a.bin_weight(0) == 16
        assert a.bin_weight(5) == 7
        assert a.count_of(1, 5) == 4
        assert a.bin_notation(1) == "5^2 3^2 1^1 0^1"

    def test_bad_column_sum_rejected(self):
        with pytest.raises(ProfileError):
            Assignment.from_bins(WeightProfile((2, 1)), 2, [{2: 2}, {1: 1}])

    def test_unknown_value_rejected(self):
        with pytest.raises(ProfileError):
            Assignment.from_bins(WeightProfile((2, 1)), 1, [{2: 1}, {7: 1}])

    def test_apply_balanced_swap(self):
        a = Assignment.diagonal(WeightProfile((3, 1)), 2)
        a.apply([(3, 1, 0, 1), (1, 1, 1, 0)])
        assert a.bin_weight(0) == 4
        assert a.bin_weight(1) == 4
        a.validate()

    def test_apply_rejects_unbalanced(self):
        a = Assignment.diagonal(WeightProfile((3, 1)), 2)
        with pytest.raises(ProfileError, match="unbalanced"):
            a.apply([(3, 1, 0, 1)])

    def test_apply_rejects_missing_balls(self):
        a = Assignment.diagonal(WeightProfile((3, 1)), 2)
        with pytest.raises(ProfileError, match="cannot move"):
            a.apply([(1, 1, 0, 1), (3, 1, 1, 0)])

    def test_cached_weights_match_recomputation(self):
        a = Assignment.from_bins(EX_WEIGHTS, 6, EX_PARTITION)
        a.apply([(5, 1, 1, 0), (1, 1, 0, 1)])
        for j in range(a.n):
            recomputed = sum(
                a.class_values[c] * a.counts[c][j] for c in range(a.m)
            )
            assert a.bin_weight(j) == recomputed
        a.validate()


class TestGapVector:
    def test_worked_partition(self):
        a = Assignment.from_bins(EX_WEIGHTS, 6, EX_PARTITION)
        assert gap_vector(a, EX_CAPS).gaps == (1, 0, 0, 1, 0, 1)

    def test_extremal_companion(self):
        bins = [{5: 6}, {5: 5, 3: 1}, {5: 1, 3: 5}, {1: 6}, {1: 6}, {0: 6}]
        a = Assignment.from_bins(EX_WEIGHTS, 6, bins)
        caps = CapacityProfile((29, 29, 21, 7, 7, 0))
        assert gap_vector(a, caps).gaps == (-1, 1, 1, 1, 1, 0)

    def test_exact_fit_is_zero(self):
        a = Assignment.diagonal(WeightProfile((4, 2)), 3)
        caps = CapacityProfile((12, 6))
        assert gap_vector(a, caps).gaps == (0, 0)

    @given(profiles(max_n=6, max_w=6), st.integers(1, 5), st.data())
    @settings(max_examples=200)
    def test_total_gap_identity(self, w, d, data):
        caps = CapacityProfile(
            tuple(
                sorted(
                    (
                        data.draw(st.integers(-3, d * (w[0] + 2)))
                        for _ in range(w.n)
                    ),
                    reverse=True,
                )
            )
        )
        a = Assignment.diagonal(w, d)
        gv = gap_vector(a, caps)
        assert gv.total() == caps.total - d * w.total


class TestKFeasibility:
    def test_worked_partition_fully_feasible(self):
        a = Assignment.from_bins(EX_WEIGHTS, 6, EX_PARTITION)
        assert is_k_feasible(a, EX_CAPS, 0)

    def test_extremal_companion_levels(self):
        bins = [{5: 6}, {5: 5, 3: 1}, {5: 1, 3: 5}, {1: 6}, {1: 6}, {0: 6}]
        a = Assignment.from_bins(EX_WEIGHTS, 6, bins)
        caps = CapacityProfile((29, 29, 21, 7, 7, 0))
        assert is_k_feasible(a, caps, 1)
        assert not is_k_feasible(a, caps, 0)

    def test_k_equal_n_unconstrained(self):
        a = Assignment.diagonal(WeightProfile((9, 9)), 4)
        caps = CapacityProfile((0, 0))
        assert is_k_feasible(a, caps, 2)
        with pytest.raises(ProfileError):
            is_k_feasible(a, caps, 3)


class TestThresholdAndNormalize:
    @pytest.mark.parametrize(
        "w, expected",
        [
            ((5, 5, 3, 1, 1, 0), 18360),
            ((3, 1), 168),
            ((0, 0), 0),
        ],
    )
    def test_threshold_values(self, w, expected):
        assert d_threshold(WeightProfile(w)) == expected

    def test_normalize_shifts(self):
        inst = normalize(make_instance(2, (3, 1), (5, 3)))
        assert inst.weights.entries == (2, 0)
        assert inst.capacities.entries == (3, 1)

    def test_normalize_identity_when_zero(self):
        inst = make_instance(6, (5, 5, 3, 1, 1, 0), (29, 29, 21, 7, 7, 0))
        assert normalize(inst) is inst
