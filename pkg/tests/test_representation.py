from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nims import (
    InvalidInput,
    InvalidSequence,
    OutOfRange,
    RangeError,
    Sequence,
    evaluate,
    prefix_sums,
    represent,
    represent_range_check,
)

from .conftest import capable_bits

REFERENCE = Sequence((1, 3, 8))

# published sign matrix for targets 0..12 over (1, 3, 8)
SIGN_ROWS = {
    0: (0, 0, 0),
    1: (1, 0, 0),
    2: (-1, 1, 0),
    3: (0, 1, 0),
    4: (1, 1, 0),
    5: (0, -1, 1),
    6: (1, -1, 1),
    7: (-1, 0, 1),
    8: (0, 0, 1),
    9: (1, 0, 1),
    10: (-1, 1, 1),
    11: (0, 1, 1),
    12: (1, 1, 1),
}


class TestSignMatrix:
    @pytest.mark.parametrize("m,signs", sorted(SIGN_ROWS.items()))
    def test_published_rows(self, m, signs):
        rep = represent(m, REFERENCE)
        assert rep.signs == signs
        assert rep.beta == 0

    @pytest.mark.parametrize("m,signs", sorted(SIGN_ROWS.items()))
    def test_negated_rows(self, m, signs):
        rep = represent(-m, REFERENCE)
        assert rep.signs == tuple(-s for s in signs)
        assert rep.beta == 0


class TestOffsetFirstBit:
    def test_worked_example(self):
        rep = represent(3, Sequence((2, 6, 18)))
        assert rep.signs == (1, 0, 0)
        assert rep.beta == 1
        assert rep.expressed_m == 2

    def test_residual_prefers_idle_first_bit(self):
        rep = represent(1, Sequence((2, 6, 18)))
        assert rep.signs == (0, 0, 0)
        assert rep.beta == 1

    def test_even_target_lands_exactly(self):
        rep = represent(10, Sequence((2, 6, 18)))
        assert rep.beta == 0
        assert evaluate(rep, Sequence((2, 6, 18))) == 10


class TestBounds:
    def test_range_limits(self):
        assert represent(12, REFERENCE).signs == (1, 1, 1)
        with pytest.raises(OutOfRange):
            represent(13, REFERENCE)
        with pytest.raises(OutOfRange):
            represent(-13, REFERENCE)

    def test_offset_extends_reach_by_residual(self):
        seq = Sequence((2, 6, 18))
        rep = represent(27, seq)
        assert rep.signs == (1, 1, 1) and rep.beta == 1
        with pytest.raises(OutOfRange):
            represent(28, seq)

    def test_incapable_sequence_rejected(self):
        with pytest.raises(InvalidSequence):
            represent(3, Sequence((1, 2, 7)))


class TestEvaluate:
    def test_round_trip(self):
        rep = represent(7, REFERENCE)
        assert evaluate(rep, REFERENCE) == 7

    def test_length_mismatch(self):
        rep = represent(7, REFERENCE)
        with pytest.raises(InvalidInput):
            evaluate(rep, Sequence((1, 3)))

    def test_bad_digit(self):
        from nims import Representation

        rep = Representation((2, 0, 0), 0, 2, 2)
        with pytest.raises(InvalidInput):
            evaluate(rep, REFERENCE)


class TestAudit:
    def test_remainder_descent_bound(self):
        audit = []
        represent(11, REFERENCE, audit=audit)
        sums = prefix_sums(REFERENCE)
        for n, r in audit:
            if n >= 1:
                assert abs(r) <= sums.totals[n - 1] + REFERENCE.bits[0] - 1

    @given(capable_bits(max_total=2000), st.data())
    @settings(max_examples=120)
    def test_descent_bound_everywhere(self, seq, data):
        bound = seq.total + seq.bits[0] - 1
        m = data.draw(st.integers(-bound, bound))
        audit = []
        represent(m, seq, audit=audit)
        sums = prefix_sums(seq)
        a0 = seq.bits[0]
        for n, r in audit:
            if n >= 1:
                assert abs(r) <= sums.totals[n - 1] + a0 - 1
            else:
                assert abs(r) <= a0 - 1


class TestRoundTripProperty:
    @given(capable_bits(max_total=2000), st.data())
    @settings(max_examples=200)
    def test_round_trip_and_residual(self, seq, data):
        bound = seq.total + seq.bits[0] - 1
        m = data.draw(st.integers(-bound, bound))
        rep = represent(m, seq)
        assert evaluate(rep, seq) == m
        assert abs(rep.beta) < seq.bits[0]

    @given(capable_bits(max_total=2000), st.data())
    @settings(max_examples=80)
    def test_unit_first_bit_is_exact(self, seq, data):
        # a first bit of one leaves no room for a residual
        if seq.bits[0] != 1:
            seq = Sequence((1,) + seq.bits[1:]) if seq.bits[1] <= 3 else Sequence((1, 3) + seq.bits[2:])
        from nims import validate

        if not validate(seq).complete_capable:
            return
        bound = seq.total
        m = data.draw(st.integers(-bound, bound))
        assert represent(m, seq).beta == 0


class TestRangeCheck:
    def test_small_sweep(self):
        chk = represent_range_check(REFERENCE)
        assert chk.checked == 25
        assert chk.passed and chk.failures == ()

    def test_offset_sweep(self):
        chk = represent_range_check(Sequence((2, 6, 18)))
        assert chk.checked == 55
        assert chk.passed

    def test_cap(self):
        with pytest.raises(RangeError):
            represent_range_check(REFERENCE, cap=5)

    def test_rejects_incapable(self):
        with pytest.raises(InvalidSequence):
            represent_range_check(Sequence((1, 2, 7)))

    @given(capable_bits(max_total=400, max_len=6))
    @settings(max_examples=60)
    def test_every_capable_sequence_sweeps_clean(self, seq):
        assert represent_range_check(seq).passed
