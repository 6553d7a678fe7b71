from __future__ import annotations

from itertools import product
from pathlib import Path

import pytest
from hypothesis import strategies as st

from nims import Sequence, load_device

DATA = Path(__file__).resolve().parent.parent / "data"
DEVICE_CSV = DATA / "nims23_device.csv"

# Layouts used across the suite: two published example columns plus the
# standard binary and ternary columns they are compared against.
NIMS1_BITS = (1, 2, 6, 14, 39, 114, 336, 996, 2970, 8000, 8000, 8000, 8000, 8000)
NIMS2_BITS = (2, 6, 18, 48, 132, 378, 1116, 3312, 8800, 8800, 8800, 8800, 8800, 8800)
BINARY14_BITS = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8000)
TERNARY14_BITS = (1, 3, 9, 27, 81, 243, 729, 2187, 6561, 8000, 8000, 8000, 8000, 8000)


@pytest.fixture(scope="session")
def device_record():
    return load_device(DEVICE_CSV)


@pytest.fixture(scope="session")
def measured(device_record):
    return device_record.sequence()


@pytest.fixture(scope="session")
def nims1():
    return Sequence(NIMS1_BITS)


@pytest.fixture(scope="session")
def nims2():
    return Sequence(NIMS2_BITS)


def brute_sums(bits) -> set[int]:
    # exhaustive 3^N enumeration; keep N small
    return {sum(s * a for s, a in zip(signs, bits)) for signs in product((-1, 0, 1), repeat=len(bits))}


@st.composite
def capable_bits(draw, max_total: int = 10_000, max_len: int = 9):
    """Completeness-capable sequences: every bit within triple the previous."""
    a0 = draw(st.integers(1, 3))
    bits = [a0]
    n = draw(st.integers(2, max_len))
    while len(bits) < n:
        nxt = draw(st.integers(1, 3 * bits[-1]))
        if sum(bits) + nxt > max_total:
            break
        bits.append(nxt)
    if len(bits) == 1:
        bits.append(draw(st.integers(1, 3 * a0)))
    return Sequence(tuple(bits))


@st.composite
def strict_bits(draw, max_len: int = 8):
    """Strictly valid sequences: triple-bounded above, forced growth below."""
    a0 = draw(st.integers(1, 3))
    a1 = draw(st.integers(a0 + 1, 3 * a0))
    bits = [a0, a1]
    n = draw(st.integers(2, max_len))
    while len(bits) < n:
        lo = 3 * bits[-2] + 1
        hi = 3 * bits[-1]
        if lo > hi:
            break
        bits.append(draw(st.integers(lo, hi)))
    return Sequence(tuple(bits))
