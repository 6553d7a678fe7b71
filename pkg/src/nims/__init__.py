"""Toolkit for non-integer-multiple junction array logic.

Covers chain validation, exact reachable-sum oracles, signed-digit
representation, fault tolerance, array layout, voltage bias planning,
and measured-device ingestion.
"""

from __future__ import annotations

from .bias import (
    DEFAULT_BAND_HALF_WIDTH,
    JOSEPHSON_HZ_PER_VOLT,
    BiasPlan,
    PhysicalConstants,
    max_voltage,
    plan,
    resolution,
)
from .designer import (
    ComparisonTable,
    DesignResult,
    DesignSpec,
    ToleranceRule,
    compare_logics,
    design,
    standard_column,
)
from .device import (
    DeviceBit,
    DeviceMetadata,
    DeviceRecord,
    MarginReport,
    build_report,
    infer_defects,
    load_device,
    margin_report,
    plausibility_lints,
    serialize_device,
)
from .errors import (
    DegenerateTarget,
    Infeasible,
    InvalidInput,
    InvalidSequence,
    NimsError,
    OutOfRange,
    ParseError,
    RangeError,
)
from .fault_tolerance import (
    DefectMap,
    ScanReport,
    ToleranceReport,
    apply_defects,
    oracle_gaps,
    tolerance_report,
    within_tolerance,
    worst_case_scan,
)
from .representation import (
    RangeCheckReport,
    Representation,
    evaluate,
    represent,
    represent_range_check,
)
from .sequence import (
    DEFAULT_ORACLE_CAP,
    PrefixSums,
    Sequence,
    SumSet,
    ValidationReport,
    enumerate_nims,
    is_complete,
    make_standard,
    parse_bits,
    prefix_sums,
    reachable_sums,
    segmentation_efficiency,
    sequence_from_file,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BiasPlan",
    "ComparisonTable",
    "DEFAULT_BAND_HALF_WIDTH",
    "DEFAULT_ORACLE_CAP",
    "DefectMap",
    "DegenerateTarget",
    "DesignResult",
    "DesignSpec",
    "DeviceBit",
    "DeviceMetadata",
    "DeviceRecord",
    "Infeasible",
    "InvalidInput",
    "InvalidSequence",
    "JOSEPHSON_HZ_PER_VOLT",
    "MarginReport",
    "NimsError",
    "OutOfRange",
    "ParseError",
    "PhysicalConstants",
    "PrefixSums",
    "RangeCheckReport",
    "RangeError",
    "Representation",
    "ScanReport",
    "Sequence",
    "SumSet",
    "ToleranceReport",
    "ToleranceRule",
    "ValidationReport",
    "apply_defects",
    "build_report",
    "compare_logics",
    "design",
    "enumerate_nims",
    "evaluate",
    "infer_defects",
    "is_complete",
    "load_device",
    "make_standard",
    "margin_report",
    "max_voltage",
    "oracle_gaps",
    "parse_bits",
    "plan",
    "plausibility_lints",
    "prefix_sums",
    "reachable_sums",
    "represent",
    "represent_range_check",
    "resolution",
    "segmentation_efficiency",
    "sequence_from_file",
    "serialize_device",
    "standard_column",
    "tolerance_report",
    "validate",
    "within_tolerance",
    "worst_case_scan",
]
