from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nims import (
    DefectMap,
    InvalidInput,
    Sequence,
    apply_defects,
    is_complete,
    oracle_gaps,
    tolerance_report,
    validate,
    within_tolerance,
    worst_case_scan,
)
from nims.sequence import UPPER

from .conftest import capable_bits

NIMS1_TOLERANCES = (0, 0, 1, 1, 1, 2, 4, 6, 303, 5333, 5333, 5333, 5333, None)
NIMS2_TOLERANCES = (0, 0, 2, 4, 6, 6, 12, 378, 5866, 5866, 5866, 5866, 5866, None)
MEASURED_TOLERANCES = (
    0, 0, 0, 0, 2, 2, 242, 1654,
    3839, 3840, 3840, 3840, 3840, 3840, 3839,
    3840, 3840, 3840, 3840, 3840, 3840, 3850, None,
)


class TestToleranceReport:
    def test_first_column(self, nims1):
        assert tuple(e.tolerance for e in tolerance_report(nims1).entries) == NIMS1_TOLERANCES

    def test_second_column(self, nims2):
        assert tuple(e.tolerance for e in tolerance_report(nims2).entries) == NIMS2_TOLERANCES

    def test_second_column_published_value_unreproduced(self, nims2):
        # the published fault-tolerance column lists 20 for the eighth bit;
        # the removable-junction count that keeps the chain is 3312 - 2934
        t7 = tolerance_report(nims2).entries[7].tolerance
        assert t7 == 378
        assert t7 != 20

    def test_device_column(self, measured):
        assert tuple(e.tolerance for e in tolerance_report(measured).entries) == MEASURED_TOLERANCES

    def test_proportions_exact(self, nims1):
        entries = tolerance_report(nims1).entries
        assert entries[2].proportion == Fraction(2, 9)
        assert entries[0].proportion == Fraction(1, 3)
        assert entries[-1].proportion is None

    def test_proportion_clamped_at_zero(self):
        entries = tolerance_report(Sequence((1, 3, 9))).entries
        assert entries[0].proportion == 0
        assert entries[1].proportion == 0

    def test_last_bit_reduces_range_only(self):
        entries = tolerance_report(Sequence((1, 3, 8))).entries
        assert entries[-1].last_bit
        assert entries[-1].tolerance is None

    def test_csv_shape(self):
        text = tolerance_report(Sequence((1, 3, 8))).to_csv()
        assert text.splitlines() == [
            "bit,nominal,tolerance,proportion",
            "0,1,0,0",
            "1,3,0,1/9",
            "2,8,,",
        ]

    def test_doc_serializes(self, measured):
        json.dumps(tolerance_report(measured).to_doc())

    @given(capable_bits())
    @settings(max_examples=100)
    def test_tolerance_never_exceeds_bit(self, seq):
        for e in tolerance_report(seq).entries:
            if e.tolerance is not None:
                assert 0 <= e.tolerance < seq.bits[e.index]


class TestDefectMap:
    def test_doc_round_trip(self):
        d = DefectMap({2: 1, 5: 3})
        assert DefectMap.from_doc(d.to_doc()).missing == d.missing

    def test_from_file(self, tmp_path):
        p = tmp_path / "defects.json"
        p.write_text(json.dumps({"defects": {"2": 1}}))
        assert DefectMap.from_file(p).missing == {2: 1}

    def test_rejects_negative_count(self):
        with pytest.raises(InvalidInput):
            DefectMap({2: -1})

    def test_rejects_negative_index(self):
        with pytest.raises(InvalidInput):
            DefectMap({-1: 1})


class TestApplyDefects:
    def test_subtracts(self, nims1):
        defective, report = apply_defects(nims1, DefectMap({2: 1}))
        assert defective.bits[2] == 5
        assert report.complete_capable
        assert within_tolerance(nims1, DefectMap({2: 1}))

    def test_chain_certificate_can_void_while_oracle_stays_complete(self, nims1):
        # one junction past the third bit's tolerance voids the chain
        # certificate, yet every target is still coverable: the chain is
        # sufficient, not necessary
        defective, report = apply_defects(nims1, DefectMap({2: 2}))
        assert defective.bits[2] == 4
        assert not report.complete_capable
        assert not within_tolerance(nims1, DefectMap({2: 2}))
        truncated = Sequence(defective.bits[:9])
        assert is_complete(truncated)

    def test_index_out_of_range(self, nims1):
        with pytest.raises(InvalidInput):
            apply_defects(nims1, DefectMap({14: 1}))

    def test_count_exceeds_bit(self):
        with pytest.raises(InvalidInput):
            apply_defects(Sequence((1, 3, 8)), DefectMap({1: 4}))

    def test_bit_may_be_wiped_to_zero(self):
        defective, report = apply_defects(Sequence((1, 3, 8)), DefectMap({1: 3}))
        assert defective.bits == (1, 0, 8)
        assert not report.complete_capable

    @given(capable_bits(max_total=3000), st.data())
    @settings(max_examples=120)
    def test_within_tolerance_defects_keep_capability(self, seq, data):
        entries = tolerance_report(seq).entries
        missing = {}
        for e in entries[:-1]:
            if e.tolerance:
                missing[e.index] = data.draw(st.integers(0, e.tolerance))
        missing = {k: v for k, v in missing.items() if v}
        defects = DefectMap(missing)
        assert within_tolerance(seq, defects)
        _, report = apply_defects(seq, defects)
        assert report.complete_capable

    @given(capable_bits(max_total=800, max_len=6), st.data())
    @settings(max_examples=80)
    def test_within_tolerance_defects_keep_oracle_completeness(self, seq, data):
        entries = tolerance_report(seq).entries
        missing = {}
        for e in entries[:-1]:
            if e.tolerance:
                missing[e.index] = data.draw(st.integers(0, e.tolerance))
        missing = {k: v for k, v in missing.items() if v}
        defective, _ = apply_defects(seq, DefectMap(missing))
        assert is_complete(defective)

    @given(capable_bits(max_total=3000))
    @settings(max_examples=120)
    def test_one_past_tolerance_breaks_the_chain(self, seq):
        entries = tolerance_report(seq).entries
        for e in entries[:-1]:
            if e.tolerance is None or e.tolerance + 1 > seq.bits[e.index]:
                continue
            defective, report = apply_defects(seq, DefectMap({e.index: e.tolerance + 1}))
            assert not report.complete_capable
            if defective.bits[e.index] > 0:
                assert any(
                    v.constraint == UPPER and v.index == e.index + 1
                    for v in validate(defective).violations
                )


class TestWorstCaseScan:
    def test_first_two_bits_not_tolerant(self, nims1):
        scan = worst_case_scan(nims1, 1)
        statuses = [e.status for e in scan.entries]
        assert statuses[:2] == ["UNSAFE", "UNSAFE"]
        assert statuses[2:] == ["SAFE"] * 12

    def test_pure_ternary_has_no_slack(self):
        scan = worst_case_scan(Sequence((1, 3, 9, 27, 81)), 1)
        assert [e.status for e in scan.entries] == ["UNSAFE"] * 4 + ["SAFE"]

    def test_device_tolerates_hundred_from_seventh_bit(self, measured):
        scan = worst_case_scan(measured, 100)
        safe = [e.index for e in scan.entries if e.status == "SAFE"]
        assert safe == list(range(6, 23))

    def test_budget_zero_everything_safe(self, nims1):
        scan = worst_case_scan(nims1, 0)
        assert all(e.status == "SAFE" for e in scan.entries)

    def test_rejects_negative_budget(self, nims1):
        with pytest.raises(InvalidInput):
            worst_case_scan(nims1, -1)

    def test_csv_header(self, nims1):
        lines = worst_case_scan(nims1, 1).to_csv().splitlines()
        assert lines[0] == "bit,nominal,tolerance,safe_up_to,status"
        assert len(lines) == 15


class TestOracleGaps:
    def test_gap_positions(self):
        _, gaps = oracle_gaps(Sequence((1, 2, 8)))
        assert gaps == ((-4, -4), (4, 4))

    def test_complete_sequence_has_none(self):
        _, gaps = oracle_gaps(Sequence((1, 2, 6)))
        assert gaps == ()
