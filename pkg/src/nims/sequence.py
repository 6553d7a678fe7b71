"""Core sequence types, chain validation, and the reachability oracle.

A bit sequence a_0..a_N is "complete capable" when every bit obeys the
upper chain a_n <= 3*a_{n-1}; any integer in [-A_N, A_N] is then a signed
digit sum over the bits (with a residual smaller than a_0 when a_0 >= 2).
Strict validity additionally requires the lower chain a_{n+1} > 3*a_{n-1},
which forces the fastest growth that still leaves every target reachable.
All arithmetic here is exact integer or rational; comparisons against
thirds are done by cross multiplication, never division.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import InvalidInput, RangeError

DEFAULT_ORACLE_CAP = 10**7
TOTAL_LIMIT = 2**62

UPPER = "UPPER"
LOWER = "LOWER"
POSITIVITY = "POSITIVITY"


@dataclass(frozen=True)
class Sequence:
    """Ordered junction counts, least significant bit first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise InvalidInput("sequence must contain at least one bit")
        if any(not isinstance(b, int) or isinstance(b, bool) for b in self.bits):
            raise InvalidInput("bits must be integers")
        if any(b < 0 for b in self.bits):
            raise InvalidInput("bits must be nonnegative (zero models a dead bit)")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @property
    def last_index(self) -> int:
        return len(self.bits) - 1

    @property
    def total(self) -> int:
        return sum(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)


@dataclass(frozen=True)
class Violation:
    """One broken constraint: which rule, which bit, and the values seen."""

    constraint: str
    index: int
    message: str
    observed: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    strict_valid: bool
    complete_capable: bool
    violations: tuple[Violation, ...]

    def to_doc(self) -> dict:
        return {
            "strict_valid": self.strict_valid,
            "complete_capable": self.complete_capable,
            "violations": [
                {
                    "constraint": v.constraint,
                    "index": v.index,
                    "message": v.message,
                    "observed": list(v.observed),
                }
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class PrefixSums:
    """Running totals and the digit-selection thresholds derived from them.

    totals[n] is the largest magnitude expressible by bits 0..n.
    thresholds[n] adds the first bit on top: the magnitude at which the
    representation loop must activate bit n+1.
    """

    totals: tuple[int, ...]
    thresholds: tuple[int, ...]


def validate(seq: Sequence) -> ValidationReport:
    """Check positivity plus both chain constraints.

    complete_capable needs positivity and the upper chain only, so a
    defective array that lost junctions can still be certified. The lower
    chain (including growth of the final pair) is what strictness adds.
    """
    bits = seq.bits
    last = seq.last_index
    violations: list[Violation] = []

    for n, a in enumerate(bits):
        if a < 1:
            violations.append(
                Violation(POSITIVITY, n, f"bit {n} must hold at least one junction, got {a}", (a,))
            )

    for n in range(1, last + 1):
        if bits[n] > 3 * bits[n - 1]:
            violations.append(
                Violation(
                    UPPER,
                    n,
                    f"bit {n} is {bits[n]}, above three times bit {n - 1} ({bits[n - 1]})",
                    (bits[n], bits[n - 1]),
                )
            )

    for n in range(1, last):
        if bits[n + 1] <= 3 * bits[n - 1]:
            violations.append(
                Violation(
                    LOWER,
                    n + 1,
                    f"bit {n + 1} is {bits[n + 1]}, not above three times bit {n - 1} ({bits[n - 1]})",
                    (bits[n + 1], bits[n - 1]),
                )
            )
    # Interior lower-chain constraints force a_n < a_{n+1}; only the final
    # pair needs growth checked explicitly.
    if last >= 1 and bits[last] <= bits[last - 1]:
        violations.append(
            Violation(
                LOWER,
                last,
                f"bit {last} is {bits[last]}, not above bit {last - 1} ({bits[last - 1]})",
                (bits[last], bits[last - 1]),
            )
        )

    capable = not any(v.constraint in (UPPER, POSITIVITY) for v in violations)
    return ValidationReport(
        strict_valid=not violations,
        complete_capable=capable,
        violations=tuple(violations),
    )


def prefix_sums(seq: Sequence) -> PrefixSums:
    totals: list[int] = []
    run = 0
    for a in seq.bits:
        run += a
        if run > TOTAL_LIMIT:
            raise RangeError(f"sequence total exceeds {TOTAL_LIMIT}")
        totals.append(run)
    a0 = seq.bits[0]
    return PrefixSums(tuple(totals), tuple(t + a0 for t in totals))


def segmentation_efficiency(seq: Sequence) -> tuple[Fraction, ...]:
    """Exact consecutive-bit ratios a_{n+1}/a_n."""
    if len(seq) < 2:
        raise InvalidInput("efficiency needs at least two bits")
    if any(a < 1 for a in seq.bits):
        raise InvalidInput("efficiency undefined for non-positive bits")
    return tuple(Fraction(seq.bits[n + 1], seq.bits[n]) for n in range(len(seq) - 1))


@dataclass(frozen=True)
class SumSet:
    """Exact reachable-sum set, stored as sorted disjoint closed intervals."""

    intervals: tuple[tuple[int, int], ...]
    span: int
    beta_radius: int

    def __contains__(self, value: int) -> bool:
        i = bisect_right(self.intervals, (value, TOTAL_LIMIT * 4)) - 1
        return i >= 0 and self.intervals[i][0] <= value <= self.intervals[i][1]

    @property
    def count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def covers(self, lo: int, hi: int) -> bool:
        if lo > hi:
            return True
        i = bisect_right(self.intervals, (lo, TOTAL_LIMIT * 4)) - 1
        return i >= 0 and self.intervals[i][0] <= lo and self.intervals[i][1] >= hi

    def gaps(self, lo: int, hi: int) -> tuple[tuple[int, int], ...]:
        """Missing integers inside [lo, hi], as intervals."""
        out: list[tuple[int, int]] = []
        cursor = lo
        for ilo, ihi in self.intervals:
            if ihi < cursor:
                continue
            if ilo > hi:
                break
            if ilo > cursor:
                out.append((cursor, min(ilo - 1, hi)))
            cursor = max(cursor, ihi + 1)
            if cursor > hi:
                break
        if cursor <= hi:
            out.append((cursor, hi))
        return tuple(out)


def _coalesce(pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pairs.sort()
    out: list[tuple[int, int]] = []
    for lo, hi in pairs:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def reachable_sums(seq: Sequence, a0_offset: bool = False, *, cap: int = DEFAULT_ORACLE_CAP) -> SumSet:
    """Dynamic-programming oracle over the digit set {-1, 0, +1}.

    Grows the exact set of expressible sums one bit at a time, keeping it
    interval-compressed instead of enumerating all 3^(N+1) digit vectors.
    With a0_offset the set is widened by the residual radius a_0 - 1,
    modelling the fine adjustment available below the first bit.

    Raises RangeError when the sequence total exceeds the cap.
    """
    total = sum(seq.bits)
    if total > cap:
        raise RangeError(f"sequence total {total} exceeds oracle cap {cap}")

    intervals: list[tuple[int, int]] = [(0, 0)]
    for a in seq.bits:
        if a == 0:
            continue
        merged = (
            [(lo - a, hi - a) for lo, hi in intervals]
            + intervals
            + [(lo + a, hi + a) for lo, hi in intervals]
        )
        intervals = _coalesce(merged)

    radius = max(seq.bits[0] - 1, 0) if a0_offset else 0
    if radius:
        intervals = _coalesce([(lo - radius, hi + radius) for lo, hi in intervals])
    return SumSet(tuple(intervals), total, radius)


def is_complete(seq: Sequence, *, cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """Oracle verdict: does the sequence cover every target in [-A_N, A_N]?

    Coverage is exact for a_0 = 1 and up to a residual below a_0 otherwise.
    Computed from reachable_sums alone, independent of the chain predicate.
    """
    sums = reachable_sums(seq, a0_offset=seq.bits[0] >= 2, cap=cap)
    return sums.covers(-sums.span, sums.span)


def enumerate_nims(
    a0: int,
    depth: int,
    max_bit: int,
    *,
    max_results: int = 1_000_000,
) -> list[Sequence]:
    """All strictly valid sequences of the given depth, lexicographically.

    Bits are bounded by max_bit. Raises RangeError when the enumeration
    would exceed max_results sequences.
    """
    if a0 < 1 or depth < 1 or max_bit < 1:
        raise InvalidInput("a0, depth, and max_bit must all be positive")
    out: list[Sequence] = []
    if a0 > max_bit:
        return out

    prefix = [a0]

    def grow() -> None:
        if len(prefix) == depth:
            if len(out) >= max_results:
                raise RangeError(f"enumeration exceeds {max_results} sequences")
            out.append(Sequence(tuple(prefix)))
            return
        k = len(prefix)
        # Lower bound: above 3*a_{k-2} for interior bits, simple growth for
        # the second bit. Upper bound: the upper chain and max_bit.
        low = 3 * prefix[k - 2] + 1 if k >= 2 else prefix[-1] + 1
        high = min(3 * prefix[-1], max_bit)
        for nxt in range(low, high + 1):
            prefix.append(nxt)
            grow()
            prefix.pop()

    grow()
    return out


def make_standard(kind: str, lsb_count: int) -> Sequence:
    """Plain doubling or tripling reference sequence with lsb_count bits."""
    if lsb_count < 1:
        raise InvalidInput("lsb_count must be positive")
    if kind == "binary":
        ratio = 2
    elif kind == "ternary":
        ratio = 3
    else:
        raise InvalidInput(f"unknown standard kind {kind!r}")
    return Sequence(tuple(ratio**n for n in range(lsb_count)))


def parse_bits(text: str) -> Sequence:
    """Parse a comma-separated bit list like '1,3,8'."""
    try:
        bits = tuple(int(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise InvalidInput(f"bad bit list {text!r}: {exc}") from exc
    if not bits:
        raise InvalidInput("empty bit list")
    return Sequence(bits)


def sequence_from_file(path: str | Path) -> Sequence:
    """Load a sequence document: {"bits": [integers]}."""
    raw = Path(path).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "bits" not in doc:
        raise InvalidInput(f"{path}: expected an object with a 'bits' list")
    bits = doc["bits"]
    if not isinstance(bits, list) or not all(isinstance(b, int) and not isinstance(b, bool) for b in bits):
        raise InvalidInput(f"{path}: 'bits' must be a list of integers")
    return Sequence(tuple(bits))
