"""Small helpers: verdict objects and bitmask utilities."""
from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class Check:
    """Verdict of a property check; truthy iff the property holds."""

    holds: bool
    witness: Optional[Any] = None

    def __bool__(self):
        return self.holds


OK = Check(True)


def bits(mask):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask):
    """All submasks of ``mask`` (including 0 and mask itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def masks_by_size(n):
    """All masks over n bits ordered by popcount, then value."""
    return sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
