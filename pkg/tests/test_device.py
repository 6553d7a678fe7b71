from __future__ import annotations

import hashlib
import json

import pytest

from nims import (
    InvalidInput,
    ParseError,
    Sequence,
    build_report,
    infer_defects,
    load_device,
    margin_report,
    plausibility_lints,
    serialize_device,
)
from nims.device import DeviceBit, DeviceMetadata, DeviceRecord

from .conftest import DEVICE_CSV

FIXTURE_SHA256 = "8b34d259e3176eeab542d872fd7d5989ec5c122845ebb47232e1e29e7193132a"

MINIMAL_PREAMBLE = """\
frequency_hz=1.8e10
temperature_k=4.2
critical_current_ma=8.0
normal_resistance_mohm=4.2
junction_um=11.0x4.0
current_density_ka_cm2=18.0
"""


def minimal_text(rows: str, header: str = "bit,junctions,step_pos_mA,step_zero_mA,step_neg_mA") -> str:
    return MINIMAL_PREAMBLE + header + "\n" + rows


class TestFixture:
    def test_checksum_pins_transcription(self):
        digest = hashlib.sha256(DEVICE_CSV.read_bytes()).hexdigest()
        assert digest == FIXTURE_SHA256

    def test_totals(self, device_record):
        assert device_record.total_junctions == 92098
        assert sum(device_record.sequence().bits[:9]) == 11489

    def test_bit_count(self, device_record):
        assert len(device_record.bits) == 23

    def test_round_trip_is_byte_identical(self, device_record):
        text = DEVICE_CSV.read_text()
        assert serialize_device(device_record) == text

    def test_metadata(self, device_record):
        md = device_record.metadata
        assert md.frequency_hz == 18.01e9
        assert md.temperature_k == 4.2
        assert md.critical_current_ma == 8.0
        assert md.normal_resistance_mohm == 4.2
        assert md.junction_length_um == 11.0
        assert md.junction_width_um == 4.0
        assert md.current_density_ka_cm2 == 18.0
        assert md.extra("nameplate_max_v") == "3.2"
        assert md.extra("nameplate_min_v") == "0.0025"

    def test_tolerance_notes_preserved(self, device_record):
        notes = [b.tolerance_note for b in device_record.bits]
        assert notes[:7] == ["0", "0", "0", "0", "2", "2", "242"]
        assert notes[7:] == [">100"] * 16


class TestLoader:
    def test_accepts_path_or_text(self, device_record):
        text = DEVICE_CSV.read_text()
        rec = load_device(text)
        assert rec.total_junctions == device_record.total_junctions

    def test_five_column_form(self):
        rec = load_device(minimal_text("0,2,1.0,1.0,1.0\n1,6,1.0,1.0,1.0\n"))
        assert rec.sequence().bits == (2, 6)
        assert rec.bits[0].tolerance_note == ""

    def test_canonicalization_is_idempotent(self):
        rec = load_device(minimal_text("0,2,1.0,1.0,1.0\n1,6,1.0,1.0,1.0\n"))
        once = serialize_device(rec)
        again = serialize_device(load_device(once))
        assert once == again

    def test_missing_metadata_key(self):
        text = minimal_text("0,2,1.0,1.0,1.0\n").replace("temperature_k=4.2\n", "")
        with pytest.raises(ParseError, match="temperature_k"):
            load_device(text)

    def test_empty_bit_list(self):
        with pytest.raises(ParseError):
            load_device(minimal_text(""))

    def test_short_row_names_row_and_field(self):
        # preamble is six lines, header the seventh; second data row is row 9
        with pytest.raises(ParseError, match=r"row 9.*step_neg_mA"):
            load_device(minimal_text("0,2,1.0,1.0,1.0\n1,6,1.0,1.0\n"))

    def test_bad_number_names_field(self):
        with pytest.raises(ParseError, match="junctions"):
            load_device(minimal_text("0,x,1.0,1.0,1.0\n"))

    def test_nonconsecutive_bits_rejected(self):
        with pytest.raises(ParseError, match="expected 1"):
            load_device(minimal_text("0,2,1.0,1.0,1.0\n2,6,1.0,1.0,1.0\n"))

    def test_negative_junctions_rejected(self):
        with pytest.raises(ParseError):
            load_device(minimal_text("0,-2,1.0,1.0,1.0\n"))

    def test_unknown_header_rejected(self):
        with pytest.raises(ParseError, match="header"):
            load_device(minimal_text("0,2,1.0,1.0,1.0\n", header="bit,junctions,width"))


class TestMargins:
    def test_one_milliamp_passes(self, device_record):
        report = margin_report(device_record, 1.0)
        assert report.passed
        assert report.violations == ()
        assert report.min_positive_ma == 1.21
        assert report.min_negative_ma == 1.26

    def test_min_positive_sits_at_two_bits(self, device_record):
        widths = [b.step_pos_ma for b in device_record.bits]
        holders = [i for i, w in enumerate(widths) if w == 1.21]
        assert holders == [6, 22]

    def test_two_milliamps_flags_seventh_bit(self, device_record):
        report = margin_report(device_record, 2.0)
        assert not report.passed
        assert any(v.bit == 6 and v.width_ma == 1.21 for v in report.violations)

    def test_zero_threshold_always_passes(self, device_record):
        assert margin_report(device_record, 0.0).passed

    def test_doc(self, device_record):
        doc = margin_report(device_record, 1.0).to_doc()
        json.dumps(doc)
        assert doc["threshold_ma"] == 1.0
        assert doc["violations"] == []


class TestInferDefects:
    def test_against_full_bank_nominal(self, device_record):
        nominal = Sequence(device_record.sequence().bits[:8] + (5760,) * 15)
        defects = infer_defects(device_record, nominal)
        assert defects.missing == {8: 1, 14: 1, 22: 30}

    def test_identical_is_empty(self, device_record):
        defects = infer_defects(device_record, device_record.sequence())
        assert defects.missing == {}

    def test_measured_above_nominal_rejected(self, device_record):
        small = Sequence((1,) * 23)
        with pytest.raises(InvalidInput):
            infer_defects(device_record, small)

    def test_length_mismatch_rejected(self, device_record):
        with pytest.raises(InvalidInput):
            infer_defects(device_record, Sequence((2, 6, 18)))


class TestLints:
    def test_fixture_flags_wide_negative_step(self, device_record):
        lints = plausibility_lints(device_record)
        assert len(lints) == 1
        assert "bit 15" in lints[0]

    def test_zero_step_flagged(self):
        rec = load_device(minimal_text("0,2,1.0,1.0,0.0\n1,6,1.0,1.0,1.0\n"))
        assert any("bit 0" in lint for lint in plausibility_lints(rec))


class TestBuildReport:
    def test_summary_values(self, device_record):
        doc = build_report(device_record)
        assert doc["total_junctions"] == 92098
        assert doc["bit_count"] == 23
        assert doc["complete_capable"] is True
        assert doc["strict_valid"] is False
        assert doc["max_voltage_v"] == pytest.approx(3.4299, abs=1e-4)
        assert doc["resolution_v"] == pytest.approx(7.4483e-5, rel=1e-4)
        assert doc["retuned_resolution_v"] == pytest.approx(3.7242e-5, rel=1e-4)

    def test_unreconciled_nameplate_notes(self, device_record):
        doc = build_report(device_record)
        notes = " | ".join(doc["notes"])
        assert "unreconciled" in notes
        assert "3.2" in notes and "3.4299" in notes
        assert "0.0025" in notes

    def test_margins_embedded(self, device_record):
        doc = build_report(device_record, 2.0)
        assert doc["margins"]["threshold_ma"] == 2.0
        assert any(v["bit"] == 6 for v in doc["margins"]["violations"])

    def test_serializes(self, device_record):
        json.dumps(build_report(device_record))


class TestSerializer:
    def test_canonical_shape(self):
        rec = DeviceRecord(
            bits=(
                DeviceBit(0, 2, 1.21, 2.0, 1.26, "0"),
                DeviceBit(1, 6, 1.5, 2.0, 1.5, ""),
            ),
            metadata=DeviceMetadata(
                frequency_hz=1.8e10,
                temperature_k=4.2,
                critical_current_ma=8.0,
                normal_resistance_mohm=4.2,
                junction_length_um=11.0,
                junction_width_um=4.0,
                current_density_ka_cm2=18.0,
                extras=(),
            ),
        )
        text = serialize_device(rec)
        lines = text.splitlines()
        assert lines[0] == "frequency_hz=18000000000.0"
        assert "bit,junctions,step_pos_mA,step_zero_mA,step_neg_mA,tolerance_note" in lines
        assert lines[-2] == "0,2,1.21,2.0,1.26,0"
        assert lines[-1] == "1,6,1.5,2.0,1.5,"
