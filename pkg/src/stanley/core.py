"""Greedy p-Stanley sequences and the progression predicates they rest on.

A set is *p-free* when it contains no p-term arithmetic progression.  The
p-Stanley sequence ``S_p(A)`` starts from a p-free set ``A`` and repeatedly
appends the smallest integer above the current maximum that keeps the set
p-free.  Since a new candidate is always the largest element, it breaks
freeness exactly when it is the top of a progression whose other ``p - 1``
terms are already present, i.e. when it is *covered*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import APFoundError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is an odd prime, else raise ``ValueError``."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise TypeError(f"p must be an integer, got {type(p).__name__}")
    p = int(p)
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    return p


def _as_int_set(values: Iterable[int], what: str = "set") -> list[int]:
    out = sorted({int(v) for v in values})
    if out and out[0] < 0:
        raise ValueError(f"{what} must contain nonnegative integers, got {out[0]}")
    return out


@dataclass(frozen=True)
class APWitness:
    """A concrete progression, in progression order.

    For integer progressions ``difference > 0`` and consecutive elements
    differ by exactly ``difference``.  When ``modulus`` is set the elements
    are residues and the differences only need to agree modulo it; repeated
    residues are allowed there (they arise from wraparound).
    """

    elements: tuple[int, ...]
    difference: int
    modulus: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(e) for e in self.elements))
        els, d, n = self.elements, self.difference, self.modulus
        if len(els) < 2:
            raise ValueError("a progression needs at least two elements")
        if n is None:
            if d <= 0:
                raise ValueError(f"integer progression needs d > 0, got {d}")
            if any(b - a != d for a, b in zip(els, els[1:])):
                raise ValueError(f"{els} is not a progression with difference {d}")
        else:
            if d % n == 0:
                raise ValueError("modular progression needs d != 0 (mod N)")
            if any((b - a - d) % n for a, b in zip(els, els[1:])):
                raise ValueError(f"{els} is not a progression with difference {d} mod {n}")

    @property
    def top(self) -> int:
        return self.elements[-1]

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "difference": self.difference,
                "modulus": self.modulus}

    @classmethod
    def from_dict(cls, data: dict) -> "APWitness":
        return cls(tuple(data["elements"]), int(data["difference"]), data.get("modulus"))


@dataclass(frozen=True)
class Sequence:
    """The first ``len(terms)`` terms of ``S_p(generators)``."""

    terms: tuple[int, ...]
    generators: tuple[int, ...]
    p: int = 3

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[int]:
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def prefix(self, n: int) -> "Sequence":
        if n < len(self.generators):
            raise ValueError("prefix would drop generators")
        return Sequence(self.terms[:n], self.generators, self.p)

    def to_dict(self) -> dict:
        return {"p": self.p, "generators": list(self.generators), "terms": list(self.terms)}


class CoverageSieve:
    """Incremental table of integers covered by the accepted terms.

    Terms must be accepted in increasing order.  When ``a`` is accepted it
    is the largest of the ``p - 1`` lower elements of every new progression,
    so all new tops are marked at that moment:

    * ``p == 3``: tops ``2a - a'`` for every earlier ``a'``;
    * ``p >= 5``: tops ``a + d`` for every ``d`` with ``a - d, ...,
      a - (p-2)d`` all accepted.

    ``covered[x]`` is exact for every ``x``; tops never exceed ``frontier``.
    """

    def __init__(self, p: int = 3, capacity: int = 64):
        self.p = check_prime(p)
        capacity = max(8, int(capacity))
        self.covered = np.zeros(capacity, dtype=bool)
        self.members = np.zeros(capacity, dtype=bool)
        self._terms = np.zeros(16, dtype=np.int64)
        self.count = 0
        self.frontier = -1

    def _reserve(self, hi: int) -> None:
        size = len(self.covered)
        if hi < size * 7 // 8:
            return
        while hi >= size * 7 // 8:
            size *= 2
        for name in ("covered", "members"):
            old = getattr(self, name)
            new = np.zeros(size, dtype=bool)
            new[: len(old)] = old
            setattr(self, name, new)

    @property
    def terms(self) -> list[int]:
        return self._terms[: self.count].tolist()

    @property
    def last(self) -> int:
        return int(self._terms[self.count - 1]) if self.count else -1

    def add(self, a: int) -> None:
        a = int(a)
        if a <= self.last:
            raise ValueError(f"terms must be added in increasing order ({a} <= {self.last})")
        p = self.p
        top = 2 * a if p == 3 else a + a // (p - 2)
        self._reserve(top)
        if p == 3:
            if self.count:
                self.covered[2 * a - self._terms[: self.count]] = True
        else:
            d = np.arange(1, a // (p - 2) + 1)
            if len(d):
                ok = np.ones(len(d), dtype=bool)
                for j in range(1, p - 1):
                    ok &= self.members[a - j * d]
                self.covered[a + d[ok]] = True
        self.members[a] = True
        if self.count == len(self._terms):
            self._terms = np.concatenate([self._terms, np.zeros_like(self._terms)])
        self._terms[self.count] = a
        self.count += 1
        self.frontier = max(self.frontier, top)

    def is_covered(self, x: int) -> bool:
        return 0 <= x < len(self.covered) and bool(self.covered[x])

    def next_free(self, start: int) -> int:
        """Smallest ``x >= start`` that is not covered."""
        start = max(int(start), 0)
        if start > self.frontier:
            return start
        window = self.covered[start : self.frontier + 1]
        i = int(np.argmin(window))
        return start + i if not window[i] else self.frontier + 1


def find_p_ap(values: Iterable[int], p: int = 3) -> Optional[APWitness]:
    """Find a p-term progression inside ``values``.

    Among all progressions the one with the smallest top element is
    returned, ties broken by the smallest difference.
    """
    p = check_prime(p)
    s = sorted({int(v) for v in values})
    members = set(s)
    for t, x in enumerate(s):
        # descending first element <=> ascending difference
        for x1 in reversed(s[:t]):
            span = x - x1
            if span % (p - 1):
                continue
            d = span // (p - 1)
            if all(x1 + j * d in members for j in range(1, p - 1)):
                return APWitness(tuple(x1 + j * d for j in range(p)), d)
    return None


def is_covered(x: int, values: Iterable[int], p: int = 3) -> Optional[APWitness]:
    """Witness that ``x`` tops a p-AP whose other terms lie in ``values``.

    The returned progression has the smallest possible difference.
    """
    p = check_prime(p)
    x = int(x)
    s = sorted({int(v) for v in values})
    members = set(s)
    for y in reversed(s):
        if y >= x:
            continue
        d = x - y
        low = y - (p - 2) * d
        if low < 0:
            # d only grows from here, so does the deficit
            break
        if all(y - j * d in members for j in range(1, p - 1)):
            return APWitness(tuple(low + j * d for j in range(p)), d)
    return None


def _check_residues(values: Iterable[int], modulus: int) -> list[int]:
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    s = sorted({int(v) for v in values})
    if s and (s[0] < 0 or s[-1] >= modulus):
        raise ValueError(f"residues must lie in [0, {modulus}), got {s}")
    return s


def is_covered_mod(x: int, values: Iterable[int], modulus: int,
                   p: int = 3) -> Optional[APWitness]:
    """Witness that ``x`` is p-covered by ``values`` modulo ``modulus``.

    The ``p - 1`` lower residues must be increasing; since they all lie in
    ``[0, N)`` they then form an ordinary progression with some ``d`` in
    ``(0, N)``, and ``x`` must be congruent to the next term.  For ``p == 3``
    this is the pair condition ``z < y`` with ``2y - z = x (mod N)``.
    """
    p = check_prime(p)
    s = _check_residues(values, modulus)
    x = int(x)
    if not 0 <= x < modulus:
        raise ValueError(f"x must lie in [0, {modulus})")
    members = set(s)
    for y in reversed(s):
        d = (x - y) % modulus
        if d == 0:
            continue
        low = y - (p - 2) * d
        if low < 0:
            continue
        if all(y - j * d in members for j in range(1, p - 1)):
            return APWitness(tuple(low + j * d for j in range(p - 1)) + (x,), d, modulus)
    return None


def p_free_mod(values: Iterable[int], modulus: int, p: int = 3) -> Optional[APWitness]:
    """Return a progression modulo ``modulus`` inside ``values``, or None.

    Any tuple ``x_1, ..., x_p`` from the set with ``x_{i+1} = x_i + d``
    (mod N) and ``d != 0`` counts, including tuples whose residues repeat
    because of wraparound (e.g. ``d = N/2`` for even N).
    """
    p = check_prime(p)
    s = _check_residues(values, modulus)
    members = set(s)
    for x1 in s:
        for x2 in s:
            if x2 == x1:
                continue
            d = (x2 - x1) % modulus
            rest = [(x1 + j * d) % modulus for j in range(2, p)]
            if all(r in members for r in rest):
                return APWitness((x1, x2, *rest), d, modulus)
    return None


def stanley_zero(count: int, p: int = 3) -> list[int]:
    """First ``count`` terms of ``S_p(0)``.

    These are the integers whose base-p digits all lie in ``{0, ..., p-2}``:
    the n-th term is n written in base ``p - 1`` and read back in base p.
    """
    p = check_prime(p)
    out = []
    for n in range(count):
        value, scale = 0, 1
        while n:
            n, digit = divmod(n, p - 1)
            value += digit * scale
            scale *= p
        out.append(value)
    return out


def greedy_stanley(generators: Iterable[int], p: int = 3, count: int = 16) -> Sequence:
    """First ``count`` terms of the p-Stanley sequence ``S_p(generators)``.

    Raises :class:`APFoundError` if the generators are not p-free.
    """
    p = check_prime(p)
    gens = _as_int_set(generators, "generators")
    if not gens:
        raise ValueError("need at least one generator")
    if count < len(gens):
        raise ValueError(f"count {count} is smaller than the generator set ({len(gens)})")
    witness = find_p_ap(gens, p)
    if witness is not None:
        raise APFoundError(f"generators contain the {p}-AP {witness.elements}", witness)

    sieve = CoverageSieve(p, capacity=2 * gens[-1] + 64)
    for g in gens:
        sieve.add(g)
    candidate = gens[-1] + 1
    while sieve.count < count:
        candidate = sieve.next_free(candidate)
        sieve.add(candidate)
        candidate += 1
    return Sequence(tuple(sieve.terms), tuple(gens), p)
