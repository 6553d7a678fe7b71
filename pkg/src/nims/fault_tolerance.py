"""Per-bit fault tolerance: how many junctions a bit can lose.

Bit n (below the last) tolerates t_n = max(0, a_n - ceil(a_{n+1}/3))
missing junctions before the upper chain at n+1 can break. Losing more
than t_n from a single bit always breaks the chain there; losing up to
t_n from every bit at once still leaves the chain intact. The last bit
has no chain successor, so junctions lost there only shrink the range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .errors import InvalidInput, RangeError
from .sequence import (
    DEFAULT_ORACLE_CAP,
    Sequence,
    SumSet,
    ValidationReport,
    is_complete,
    reachable_sums,
    validate,
)


@dataclass(frozen=True)
class BitTolerance:
    index: int
    nominal: int
    tolerance: int | None
    proportion: Fraction | None
    last_bit: bool


@dataclass(frozen=True)
class ToleranceReport:
    entries: tuple[BitTolerance, ...]

    def tolerance(self, index: int) -> int | None:
        return self.entries[index].tolerance

    def to_csv(self) -> str:
        lines = ["bit,nominal,tolerance,proportion"]
        for e in self.entries:
            tol = "" if e.tolerance is None else str(e.tolerance)
            prop = "" if e.proportion is None else str(e.proportion)
            lines.append(f"{e.index},{e.nominal},{tol},{prop}")
        return "\n".join(lines) + "\n"

    def to_doc(self) -> dict:
        return {
            "entries": [
                {
                    "bit": e.index,
                    "nominal": e.nominal,
                    "tolerance": e.tolerance,
                    "proportion": None if e.proportion is None else str(e.proportion),
                    "last_bit": e.last_bit,
                }
                for e in self.entries
            ]
        }


def _ceil_third(x: int) -> int:
    return (x + 2) // 3


def tolerance_report(seq: Sequence) -> ToleranceReport:
    """Tolerance and fault proportion for every bit.

    The proportion is the exact fraction of bit n that may fail,
    1 - a_{n+1}/(3*a_n), clamped into [0, 1). The last bit is reported
    with no tolerance bound: removing its junctions only reduces range,
    never completeness of what remains.
    """
    bits = seq.bits
    entries: list[BitTolerance] = []
    for n, a in enumerate(bits):
        if n == seq.last_index:
            entries.append(BitTolerance(n, a, None, None, True))
            continue
        t = max(0, a - _ceil_third(bits[n + 1]))
        prop = max(Fraction(0), Fraction(1) - Fraction(bits[n + 1], 3 * a)) if a > 0 else Fraction(0)
        entries.append(BitTolerance(n, a, t, prop, False))
    return ToleranceReport(tuple(entries))


@dataclass(frozen=True)
class DefectMap:
    """Missing-junction counts keyed by bit index."""

    missing: Mapping[int, int]

    def __post_init__(self) -> None:
        clean = {}
        for k, v in self.missing.items():
            idx, cnt = int(k), int(v)
            if idx < 0:
                raise InvalidInput(f"defect bit index {idx} is negative")
            if cnt < 0:
                raise InvalidInput(f"defect count for bit {idx} is negative")
            if cnt:
                clean[idx] = cnt
        object.__setattr__(self, "missing", dict(sorted(clean.items())))

    @classmethod
    def from_doc(cls, doc: dict) -> "DefectMap":
        if not isinstance(doc, dict) or "defects" not in doc or not isinstance(doc["defects"], dict):
            raise InvalidInput("defect document must be an object with a 'defects' mapping")
        return cls({int(k): int(v) for k, v in doc["defects"].items()})

    @classmethod
    def from_file(cls, path: str | Path) -> "DefectMap":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not valid JSON: {exc}") from exc
        return cls.from_doc(doc)

    def to_doc(self) -> dict:
        return {"defects": {str(k): v for k, v in self.missing.items()}}


def apply_defects(seq: Sequence, defects: DefectMap) -> tuple[Sequence, ValidationReport]:
    """Subtract missing junctions and revalidate what is left."""
    bits = list(seq.bits)
    for idx, cnt in defects.missing.items():
        if idx > seq.last_index:
            raise InvalidInput(f"defect bit index {idx} beyond last bit {seq.last_index}")
        if cnt > bits[idx]:
            raise InvalidInput(f"bit {idx} holds {bits[idx]} junctions, cannot lose {cnt}")
        bits[idx] -= cnt
    defective = Sequence(tuple(bits))
    return defective, validate(defective)


def within_tolerance(seq: Sequence, defects: DefectMap) -> bool:
    """True when every non-last bit loses at most its tolerance."""
    report = tolerance_report(seq)
    for idx, cnt in defects.missing.items():
        entry = report.entries[idx]
        if entry.last_bit:
            continue
        if entry.tolerance is not None and cnt > entry.tolerance:
            return False
    return True


@dataclass(frozen=True)
class ScanEntry:
    index: int
    nominal: int
    tolerance: int | None
    safe_up_to: int
    status: str


@dataclass(frozen=True)
class ScanReport:
    budget: int
    entries: tuple[ScanEntry, ...]
    oracle_checked: int

    def to_csv(self) -> str:
        lines = ["bit,nominal,tolerance,safe_up_to,status"]
        for e in self.entries:
            tol = "" if e.tolerance is None else str(e.tolerance)
            lines.append(f"{e.index},{e.nominal},{tol},{e.safe_up_to},{e.status}")
        return "\n".join(lines) + "\n"

    def to_doc(self) -> dict:
        return {
            "budget": self.budget,
            "oracle_checked": self.oracle_checked,
            "entries": [
                {
                    "bit": e.index,
                    "nominal": e.nominal,
                    "tolerance": e.tolerance,
                    "safe_up_to": e.safe_up_to,
                    "status": e.status,
                }
                for e in self.entries
            ],
        }


def worst_case_scan(
    seq: Sequence,
    budget: int,
    *,
    cap: int = DEFAULT_ORACLE_CAP,
    oracle_samples: int = 8,
) -> ScanReport:
    """Classify single-bit defect placements up to `budget` as SAFE or UNSAFE.

    SAFE means every placement of 1..budget missing junctions on that bit
    keeps the sequence completeness capable; the guarantee is checked by
    construction against the chain and cross-checked on a sample of
    scenarios with the reachability oracle. UNSAFE means the chain
    certificate is void beyond the bit's tolerance, not that every larger
    defect is provably incomplete.
    """
    if budget < 0:
        raise InvalidInput("budget must be non-negative")
    total = sum(seq.bits)
    if total > cap:
        raise RangeError(f"sequence total {total} exceeds oracle cap {cap}")
    report = tolerance_report(seq)

    entries: list[ScanEntry] = []
    for e in report.entries:
        max_d = min(budget, e.nominal)
        if e.last_bit:
            # Full removal of the last bit zeroes it, which fails positivity.
            safe = min(max_d, e.nominal - 1)
        else:
            safe = min(max_d, e.tolerance or 0)
        status = "SAFE" if safe == max_d else "UNSAFE"
        entries.append(ScanEntry(e.index, e.nominal, e.tolerance, safe, status))

    checked = 0
    for e in entries:
        if checked >= oracle_samples:
            break
        if e.safe_up_to < 1:
            continue
        defective, _ = apply_defects(seq, DefectMap({e.index: e.safe_up_to}))
        if not is_complete(defective, cap=cap):
            raise AssertionError(
                f"scan certified bit {e.index} safe at {e.safe_up_to} but the oracle found a gap"
            )
        checked += 1

    # Sharpness: one junction past the tolerance must break the chain.
    for e in entries:
        if e.tolerance is None:
            continue
        d = e.tolerance + 1
        if d <= min(budget, e.nominal):
            _, vr = apply_defects(seq, DefectMap({e.index: d}))
            if vr.complete_capable:
                raise AssertionError(
                    f"bit {e.index} survived {d} missing junctions, above its tolerance"
                )

    return ScanReport(budget, tuple(entries), checked)


def oracle_gaps(seq: Sequence, *, cap: int = DEFAULT_ORACLE_CAP) -> tuple[SumSet, tuple[tuple[int, int], ...]]:
    """Reachable sums plus the uncovered intervals inside [-A_N, A_N]."""
    sums = reachable_sums(seq, a0_offset=seq.bits[0] >= 2, cap=cap)
    return sums, sums.gaps(-sums.span, sums.span)
