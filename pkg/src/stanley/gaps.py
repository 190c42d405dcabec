"""Sequences with large gaps, and gap measurement.

``A_m`` is the set of subset sums of the triples ``2, 6, 11`` scaled by
``2^i * 29^(m-i)`` for ``0 <= i <= m``.  It is a
modular set modulo ``29^(m+1)`` and ``S(A_m)`` has consecutive differences
that are eventually at least ``2^(m+1)``, with equality infinitely often.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Sequence
from .errors import TheoremContradiction
from .modular import ModularSet

BASE = (2, 6, 11)
VERIFY_MAX = 2
M_MAX = 6


@dataclass(frozen=True)
class GapProfile:
    min_gap_tail: int
    recurring: bool
    horizon: int

    def to_dict(self) -> dict:
        return {"min_gap_tail": self.min_gap_tail, "recurring": self.recurring,
                "horizon": self.horizon}


def gap_family(m: int) -> ModularSet:
    """The set ``A_m`` modulo ``29^(m+1)``.

    Sets with ``m <= 2`` are fully verified; larger ones are built from
    the construction alone and flagged ``verified=False``.  ``m`` is capped
    at :data:`M_MAX` because ``|A_m| = 8^(m+1)``.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > M_MAX:
        raise ValueError(f"m={m} exceeds {M_MAX}: A_m has 8^(m+1) elements")
    modulus = 29 ** (m + 1)
    sums = {0}
    for i in range(m + 1):
        scale = 2**i * 29 ** (m - i)
        for g in BASE:
            sums |= {s + g * scale for s in sums}
    if len(sums) != 8 ** (m + 1) or max(sums) >= modulus:
        raise TheoremContradiction(f"A_{m} has {len(sums)} sums with max {max(sums)}")
    return ModularSet(tuple(sorted(sums)), modulus, 3, verified=m <= VERIFY_MAX)


def gap_profile(seq: Sequence, burn_in: int) -> GapProfile:
    """Smallest consecutive difference after ``burn_in``.

    ``recurring`` says whether that gap shows up in both of the last two
    doubling windows ``[n/4, n/2)`` and ``[n/2, n)`` of the index range.
    """
    terms = seq.terms
    n = len(terms)
    if n <= 2 * burn_in or n < 4:
        raise ValueError(f"need more than {max(2 * burn_in, 3)} terms, got {n}")
    gaps = [b - a for a, b in zip(terms, terms[1:])]
    tail = gaps[burn_in:]
    low = min(tail)

    def seen(lo, hi):
        return low in gaps[max(lo, burn_in):hi]

    recurring = seen(n // 4, n // 2) and seen(n // 2, n - 1)
    return GapProfile(low, recurring, n)
