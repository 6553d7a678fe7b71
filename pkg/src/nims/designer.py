"""Array design: grow an LSB chain, then fill with equal MSB banks.

The chain grows as fast as the fault-tolerance reserve allows,
a_{n+1} = 3 * (a_n - reserve), optionally capped by a ratio limit.
Once three times the reserved headroom reaches the bank size, the rest
of the junction budget is laid out as equal banks, with one trimmed bank
absorbing the remainder so the total comes out exact. The trimmed bank
leads the bank section when it is large enough to sustain the chain into
a full bank, and trails otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import Infeasible, InvalidInput
from .fault_tolerance import tolerance_report
from .sequence import Sequence, segmentation_efficiency, validate

BRANCH_COUNT = 16


@dataclass(frozen=True)
class ToleranceRule:
    """Bits holding at_least junctions must tolerate `tolerance` losses."""

    at_least: int
    tolerance: int

    def __post_init__(self) -> None:
        if self.at_least < 1 or self.tolerance < 0:
            raise InvalidInput("tolerance rule needs at_least >= 1 and tolerance >= 0")


@dataclass(frozen=True)
class DesignSpec:
    a0: int
    msb_size: int
    target_total: int
    min_tolerance: tuple[ToleranceRule, ...] = ()
    max_ratio: Fraction = Fraction(3)

    def __post_init__(self) -> None:
        if not 1 <= self.a0 <= 3:
            raise InvalidInput(f"a0 must be 1..3, got {self.a0}")
        if self.msb_size < 3 * self.a0:
            raise InvalidInput(f"msb_size must be at least 3*a0 = {3 * self.a0}")
        if self.target_total < self.msb_size:
            raise InvalidInput("target_total must be at least msb_size")
        ratio = Fraction(self.max_ratio)
        if not 1 < ratio <= 3:
            raise InvalidInput("max_ratio must lie in (1, 3]")
        object.__setattr__(self, "max_ratio", ratio)
        object.__setattr__(self, "min_tolerance", tuple(self.min_tolerance))

    @classmethod
    def from_doc(cls, doc: dict) -> "DesignSpec":
        try:
            rules = tuple(
                ToleranceRule(int(r["at_least"]), int(r["tolerance"]))
                for r in doc.get("min_tolerance", [])
            )
            ratio = doc.get("max_ratio", "3")
            if isinstance(ratio, str):
                ratio = Fraction(ratio)
            return cls(
                a0=int(doc["a0"]),
                msb_size=int(doc["msb_size"]),
                target_total=int(doc["target_total"]),
                min_tolerance=rules,
                max_ratio=Fraction(ratio),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad design spec document: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "DesignSpec":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not valid JSON: {exc}") from exc
        return cls.from_doc(doc)

    def required_tolerance(self, size: int) -> int:
        return max((r.tolerance for r in self.min_tolerance if size >= r.at_least), default=0)


@dataclass(frozen=True)
class DesignResult:
    sequence: Sequence
    metadata: dict = field(compare=False)

    def to_doc(self) -> dict:
        return {"bits": list(self.sequence.bits), "metadata": dict(self.metadata)}


def design(spec: DesignSpec) -> DesignResult:
    """Deterministic layout meeting the spec exactly, or Infeasible."""
    chain = [spec.a0]
    while True:
        cur = chain[-1]
        reserve = spec.required_tolerance(cur)
        if 3 * (cur - reserve) >= spec.msb_size:
            break
        nxt = min(3 * (cur - reserve), math.floor(cur * spec.max_ratio))
        if nxt <= cur:
            raise Infeasible(
                f"tolerance/ratio constraints stall the chain at bit size {cur}"
            )
        chain.append(nxt)

    remaining = spec.target_total - sum(chain)
    if remaining < 0:
        raise Infeasible(
            f"LSB chain alone needs {sum(chain)} junctions, above the target {spec.target_total}"
        )

    full_banks, trim = divmod(remaining, spec.msb_size)
    banks: list[int] = [spec.msb_size] * full_banks
    if trim:
        lead_tolerance = trim - (spec.msb_size + 2) // 3
        leads = (
            full_banks > 0
            and 3 * trim >= spec.msb_size
            and lead_tolerance >= spec.required_tolerance(trim)
        )
        if leads:
            banks.insert(0, trim)
        else:
            banks.append(trim)

    bits = tuple(chain + banks)
    seq = Sequence(bits)

    # Post-verification: the greedy construction is supposed to guarantee
    # all of this; failing any check means the spec is infeasible for it.
    vr = validate(seq)
    if not vr.complete_capable:
        raise Infeasible("constructed layout is not completeness capable: "
                         + "; ".join(v.message for v in vr.violations))
    if seq.total != spec.target_total:
        raise Infeasible(f"layout total {seq.total} misses target {spec.target_total}")
    tr = tolerance_report(seq)
    for e in tr.entries:
        if e.last_bit:
            continue
        need = spec.required_tolerance(e.nominal)
        if e.tolerance is not None and e.tolerance < need:
            raise Infeasible(
                f"bit {e.index} (size {e.nominal}) tolerates {e.tolerance}, needs {need}"
            )

    metadata = {
        "branches": BRANCH_COUNT,
        "symmetric_halves": True,
        "symmetric_subtraction": True,
        "lsb_chain_bits": len(chain),
        "bank_size": spec.msb_size if banks else None,
        "full_banks": full_banks,
        "trimmed_bank": trim if trim else None,
        "total": spec.target_total,
    }
    return DesignResult(seq, metadata)


@dataclass(frozen=True)
class CandidateColumn:
    name: str
    bits: tuple[int, ...]
    bits_to_msb: int
    min_efficiency: Fraction | None
    mean_efficiency: Fraction | None
    tolerances: tuple[int | None, ...]


@dataclass(frozen=True)
class ComparisonTable:
    lsb_count: int
    msb_size: int
    candidates: tuple[CandidateColumn, ...]

    def to_csv(self) -> str:
        header = ["bit"]
        for c in self.candidates:
            header += [f"{c.name} junctions", f"{c.name} tolerance"]
        lines = [",".join(header)]
        for n in range(self.lsb_count):
            row = [str(n)]
            for c in self.candidates:
                if n < len(c.bits):
                    tol = c.tolerances[n]
                    row += [str(c.bits[n]), "" if tol is None else str(tol)]
                else:
                    row += ["", ""]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def to_doc(self) -> dict:
        return {
            "lsb_count": self.lsb_count,
            "msb_size": self.msb_size,
            "candidates": [
                {
                    "name": c.name,
                    "bits": list(c.bits),
                    "bits_to_msb": c.bits_to_msb,
                    "min_efficiency": None if c.min_efficiency is None else str(c.min_efficiency),
                    "mean_efficiency": None if c.mean_efficiency is None else str(c.mean_efficiency),
                    "tolerances": list(c.tolerances),
                }
                for c in self.candidates
            ],
        }


def compare_logics(
    lsb_count: int,
    msb_size: int,
    candidates: list[tuple[str, Sequence]],
) -> ComparisonTable:
    """Tabulate candidate sequences side by side.

    For each candidate: how many leading bits sit below the bank size,
    the worst and mean consecutive growth ratio within that leading
    stretch, and every bit's tolerance.
    """
    if lsb_count < 1 or msb_size < 1:
        raise InvalidInput("lsb_count and msb_size must be positive")
    if not candidates:
        raise InvalidInput("need at least one candidate")
    columns: list[CandidateColumn] = []
    for name, seq in candidates:
        vr = validate(seq)
        if not vr.complete_capable:
            raise InvalidInput(f"candidate {name!r} is not completeness capable")
        leading = 0
        for a in seq.bits:
            if a >= msb_size:
                break
            leading += 1
        all_ratios = segmentation_efficiency(seq) if len(seq) > 1 else ()
        ratios = all_ratios[: max(0, min(leading - 1, len(all_ratios)))]
        if ratios:
            min_eff = min(ratios)
            mean_eff = sum(ratios, Fraction(0)) / len(ratios)
        else:
            min_eff = mean_eff = None
        tolerances = tuple(e.tolerance for e in tolerance_report(seq).entries)
        columns.append(
            CandidateColumn(name, seq.bits, leading, min_eff, mean_eff, tolerances)
        )
    return ComparisonTable(lsb_count, msb_size, tuple(columns))


def standard_column(kind: str, msb_size: int, length: int) -> Sequence:
    """Reference layout: geometric growth below the bank size, then banks."""
    if kind == "binary":
        ratio = 2
    elif kind == "ternary":
        ratio = 3
    else:
        raise InvalidInput(f"unknown standard kind {kind!r}")
    bits = [1]
    while bits[-1] * ratio < msb_size and len(bits) < length:
        bits.append(bits[-1] * ratio)
    while len(bits) < length:
        bits.append(msb_size)
    return Sequence(tuple(bits))
