"""Basic sequences: digit-restricted subset sums of a basis.

A basis ``b_0, b_1, ...`` generates the set of sums ``sum(delta_k * b_k)``
with digits ``delta_k`` in ``{0, ..., p-2}``.  The powers of p give
``S_p(0)``.  A basis is stored as a finite head followed by a geometric
tail ``t, t*p, t*p^2, ...``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .core import APWitness, Sequence, check_prime
from .errors import SumCollisionError, TheoremContradiction, NotModularError
from .modular import ModularSet, scaled_candidates
from .structure import greedy_generators


def nu(x: int, p: int = 3) -> int:
    """Exponent of the largest power of ``p`` dividing ``x`` (x > 0)."""
    if x <= 0:
        raise ValueError(f"valuation needs a positive integer, got {x}")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@dataclass(frozen=True)
class Basis:
    head: tuple[int, ...]
    tail_start: int
    p: int = 3

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(b) for b in self.head))
        object.__setattr__(self, "p", check_prime(self.p))

    @classmethod
    def powers(cls, p: int = 3) -> "Basis":
        return cls((), 1, p)

    def element(self, k: int) -> int:
        k0 = len(self.head)
        if k < k0:
            return self.head[k]
        return self.tail_start * self.p ** (k - k0)

    def elements(self, count: int) -> list[int]:
        return [self.element(k) for k in range(count)]

    def theorem_index(self) -> int:
        """Smallest ``m >= len(head)`` with ``(p-2) * sum(b_0..b_{m-1}) < b_m``.

        For a theorem-valid basis the first m elements generate a modular
        set modulo ``b_m = p^m``.
        """
        m = len(self.head)
        total = sum(self.head)
        while (self.p - 2) * total >= self.element(m):
            total += self.element(m)
            m += 1
        return m

    def to_dict(self) -> dict:
        return {"p": self.p, "head": list(self.head), "tail_start": self.tail_start}

    @classmethod
    def from_dict(cls, data: dict) -> "Basis":
        return cls(tuple(data.get("head", ())), int(data["tail_start"]), int(data.get("p", 3)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class BasisCheck(NamedTuple):
    valid: bool
    index: Optional[int]
    reason: str

    def __bool__(self) -> bool:
        return self.valid


def validate_basis(basis: Basis) -> BasisCheck:
    """Check the sufficient conditions for a valid basis.

    Every element must be positive with ``nu_p(b_k) == k``, and the tail
    must be exactly ``p^k``.  Failing this does not prove the basis
    invalid; ``(1, 7, 10, 30, ...)`` generates a Stanley sequence anyway.
    """
    p, k0 = basis.p, len(basis.head)
    for k, b in enumerate(basis.head):
        if b <= 0:
            return BasisCheck(False, k, f"b_{k} = {b} is not positive")
        if nu(b, p) != k:
            return BasisCheck(False, k, f"nu_{p}(b_{k}) = {nu(b, p)}, expected {k}")
    if basis.tail_start != p**k0:
        return BasisCheck(False, k0, f"tail starts at {basis.tail_start}, expected {p}^{k0} = {p**k0}")
    return BasisCheck(True, None, "ok")


def digit_sums(elements: list[int], p: int, cap: Optional[int] = None) -> dict[int, tuple[int, ...]]:
    """Map each sum ``sum(delta_k * elements[k]) < cap`` to its digit vector.

    Raises :class:`SumCollisionError` when two vectors share a value.
    """
    sums: dict[int, tuple[int, ...]] = {0: ()}
    for b in elements:
        nxt: dict[int, tuple[int, ...]] = {}
        for value, digits in sums.items():
            for delta in range(p - 1):
                v = value + delta * b
                if cap is not None and v >= cap:
                    break
                vec = digits + (delta,)
                if v in nxt:
                    raise SumCollisionError(f"digit vectors {nxt[v]} and {vec} both sum to {v}",
                                            nxt[v], vec)
                nxt[v] = vec
        sums = nxt
    return sums


def basis_sequence(basis: Basis, count: int) -> Sequence:
    """The ``count`` smallest digit sums over ``basis``, ascending."""
    p = basis.p
    if any(b <= 0 for b in basis.head) or basis.tail_start <= 0:
        raise ValueError("basis elements must be positive")
    cap = 2 * max((*basis.head, basis.tail_start))
    while True:
        k, elements = 0, []
        # head entries may be large; tail entries grow so stop at the cap
        while k < len(basis.head) or basis.element(k) < cap:
            if basis.element(k) < cap:
                elements.append(basis.element(k))
            k += 1
        sums = digit_sums(elements, p, cap)
        if len(sums) >= count:
            break
        cap *= 2
    terms = sorted(sums)[:count]
    gen = (p - 1) ** basis.theorem_index() if validate_basis(basis) else len(terms)
    return Sequence(tuple(terms), tuple(terms[: min(gen, count)]), p)


def theorem_set(basis: Basis) -> ModularSet:
    """Digit sums of ``b_0 .. b_{m-1}`` as a modular set modulo ``p^m``."""
    check = validate_basis(basis)
    if not check:
        raise ValueError(f"basis does not meet the theorem hypotheses: {check.reason}")
    m = basis.theorem_index()
    sums = digit_sums(basis.elements(m), basis.p)
    try:
        return ModularSet(tuple(sorted(sums)), basis.p**m, basis.p)
    except NotModularError as exc:
        raise TheoremContradiction(f"digit sums of {basis.elements(m)} are not modular") from exc


def cover_witness_digits(x: int, basis: Basis, m: Optional[int] = None) -> APWitness:
    """Cover ``x`` modulo ``N = p^m`` by fixing base-p digits one at a time.

    Each lower term of the progression uses digit ``e_k + i*f_k`` on
    ``b_k``; the top then carries ``c_k = e_k + (p-1)*f_k``, which ranges
    over ``{-1, ..., p-1}``.  Because ``p^k`` exactly divides ``b_k``,
    choosing ``c_k`` fixes digit k of the top without disturbing lower
    digits.  Digit ``p-1`` can be reached as ``p-1`` or ``-1``; all choices
    are tried and a progression with positive difference is preferred.
    """
    check = validate_basis(basis)
    if not check:
        raise ValueError(f"basis does not meet the theorem hypotheses: {check.reason}")
    p = basis.p
    k0 = len(basis.head)
    m = basis.theorem_index() if m is None else m
    if m < k0:
        raise ValueError(f"m must be at least {k0} so that b_m = {p}^m")
    n = p**m
    if not 0 <= x < n:
        raise ValueError(f"x must lie in [0, {n})")
    elements = basis.elements(m)
    sums = digit_sums(elements, p)
    if any((s - x) % n == 0 for s in sums):
        raise ValueError(f"{x} is congruent to a digit sum modulo {n}; nothing to cover")

    units = [pow(b // p**k, -1, p) for k, b in enumerate(elements)]
    solutions = []

    def search(k, total, coeffs):
        if k == m:
            solutions.append(tuple(coeffs))
            return
        digit = ((x - total) // p**k) % p
        r = digit * units[k] % p
        for c in ((p - 1, -1) if r == p - 1 else (r,)):
            search(k + 1, total + c * elements[k], coeffs + [c])

    search(0, 0, [])
    best = None
    for coeffs in solutions:
        f = [1 if c == p - 1 else -1 if c == -1 else 0 for c in coeffs]
        e = [0 if c == p - 1 else p - 2 if c == -1 else c for c in coeffs]
        d = sum(fk * b for fk, b in zip(f, elements))
        if d == 0:
            continue
        lower = tuple(sum((ek + i * fk) * b for ek, fk, b in zip(e, f, elements))
                      for i in range(p - 1))
        cand = APWitness(lower + (x,), d % n, n)
        if d > 0:
            best = cand
            break
        best = best or cand
    if best is None:
        raise TheoremContradiction(f"digit fixing found no progression covering {x} mod {n}")
    if (best.elements[-2] + best.difference - x) % n or not all(v in sums for v in best.elements[:-1]):
        raise TheoremContradiction(f"constructed witness {best} does not cover {x}")
    return best


def complete(values: Iterable[int]) -> tuple[Basis, tuple[int, ...]]:
    """Extend ``{0, a_1, ..., a_n}`` to a set whose Stanley sequence is basic.

    Needs distinct 3-adic valuations among the ``a_i`` and
    ``a_1 + a_2 > a_n``.  Returns the basis and the shortest prefix of its
    sequence that generates it (which starts ``0, a_1, ..., a_n``).
    """
    s = sorted(set(int(v) for v in values))
    if not s or s[0] != 0:
        raise ValueError("the set must contain 0")
    a = s[1:]
    if not a:
        return Basis.powers(3), (0,)
    vals = [nu(v) for v in a]
    if len(set(vals)) != len(vals):
        raise ValueError(f"3-adic valuations {vals} are not distinct")
    if len(a) >= 2 and a[0] + a[1] <= a[-1]:
        raise ValueError(f"need a_1 + a_2 > a_n, got {a[0]} + {a[1]} <= {a[-1]}")
    top = a[-1]
    c = top + 1
    while c % 3 == 0:
        c += 1
    by_index = dict(zip(vals, a))
    k0 = 0
    while 3**k0 <= top:
        k0 += 1
    head = tuple(by_index.get(j, c * 3**j) for j in range(k0))
    basis = Basis(head, 3**k0, 3)

    prefix = basis_sequence(basis, len(s))
    if list(prefix.terms) != s:
        raise TheoremContradiction(f"basis {head} starts {prefix.terms}, not {tuple(s)}")
    size = max(len(theorem_set(basis)), len(s))
    terms = list(basis_sequence(basis, size).terms)
    gens = greedy_generators(terms)
    if gens is None:
        raise TheoremContradiction("basic sequence prefix is not 3-free")
    gens = tuple(terms[: max(len(gens), len(s))])
    return basis, gens


def scale_basic(mset: ModularSet, alpha: int, basis: Basis, max_level: int = 16) -> ModularSet:
    """Modular set for ``alpha*A + N*S_B`` with a theorem-valid basis B.

    Levels start at ``len(basis.head)`` so that ``S_B`` splits as the
    digit sums of ``b_0 .. b_{l-1}`` plus ``p^l * S_p(0)``.
    """
    check = validate_basis(basis)
    if not check:
        raise ValueError(f"basis does not meet the theorem hypotheses: {check.reason}")
    if basis.p != mset.p:
        raise ValueError("basis and modular set use different p")
    for _, residues, mod in scaled_candidates(
            mset, alpha, lambda lv: sorted(digit_sums(basis.elements(lv), basis.p)),
            max_level, min_level=len(basis.head)):
        try:
            return ModularSet(tuple(residues), mod, mset.p)
        except NotModularError:
            continue
    raise TheoremContradiction(f"no level up to {max_level} made {alpha}*A + N*S_B modular")
