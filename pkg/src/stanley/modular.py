"""Modular sets and the constructions built on them.

A modular set modulo N is a set ``A`` of residues containing 0 that is
p-free modulo N and p-covers every other residue modulo N.  Its Stanley
sequence is then ``A + N * S_p(0)``, which is what :func:`expand` returns.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional

import numpy as np

from .core import (APWitness, Sequence, check_prime, find_p_ap, greedy_stanley,
                   is_covered, p_free_mod, stanley_zero, _check_residues)
from .errors import (APFoundError, NotIndependentError, NotModularError, TheoremContradiction,
                     ZeroNotInSetError)

__all__ = [
    "ModularSet", "VerificationReport", "verify_modular_set", "expand", "scale",
    "product", "omega", "independent_to_modular", "load_table1", "scaled_candidates",
]


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    freeness_witness: Optional[APWitness]
    uncovered: tuple[int, ...]
    elapsed: float

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "freeness_witness": self.freeness_witness.to_dict() if self.freeness_witness else None,
            "uncovered": list(self.uncovered),
            "elapsed": self.elapsed,
        }


def _pair_tables(a: np.ndarray, modulus: int, p: int):
    """Cover tops and freeness hits for residue array ``a``.

    Returns ``(covered, violation)``: a boolean table of covered residues
    and whether some mod-N progression lies inside the set.
    """
    member = np.zeros(modulus, dtype=bool)
    member[a] = True
    covered = np.zeros(modulus, dtype=bool)
    lo, hi = np.meshgrid(a, a, indexing="ij")  # lo = x1, hi = x2
    distinct = lo != hi
    if p == 3:
        tops = (2 * hi - lo) % modulus
        covered[tops[lo < hi]] = True
        violation = bool(member[tops[distinct]].any())
        return covered, violation

    ordered = lo < hi
    d = hi - lo
    chain = ordered.copy()
    for j in range(2, p - 1):
        nxt = lo + j * d
        inside = (nxt >= 0) & (nxt < modulus)
        chain &= inside
        chain[inside] &= member[nxt[inside]]
    covered[((lo + (p - 1) * d) % modulus)[chain]] = True

    dm = d % modulus
    hit = distinct.copy()
    for j in range(2, p):
        hit &= member[(lo + j * dm) % modulus]
    return covered, bool(hit.any())


def verify_modular_set(residues: Iterable[int], modulus: int, p: int = 3) -> VerificationReport:
    """Check whether ``residues`` is a modular p-free set modulo ``modulus``.

    The cover table is built once from all ordered pairs (or ordered
    ``p - 1``-term chains), so the cost is about ``|A|^2 + N``.
    """
    start = time.perf_counter()
    p = check_prime(p)
    s = _check_residues(residues, modulus)
    if not s or s[0] != 0:
        raise ZeroNotInSetError("a modular set must contain the residue 0")
    a = np.asarray(s, dtype=np.int64)
    covered, violation = _pair_tables(a, modulus, p)
    witness = p_free_mod(s, modulus, p) if violation else None
    covered[a] = True
    uncovered = tuple(int(x) for x in np.flatnonzero(~covered))
    valid = witness is None and not uncovered
    return VerificationReport(valid, witness, uncovered, time.perf_counter() - start)


@dataclass(frozen=True)
class ModularSet:
    """Residues ``A`` modulo ``modulus`` for the prime ``p``.

    Construction verifies the modular property and raises
    :class:`NotModularError` when it fails.  Pass ``verified=False`` to skip
    verification for sets too large to check; such sets are flagged and
    :func:`expand` refuses them unless told otherwise.
    """

    residues: tuple[int, ...]
    modulus: int
    p: int = 3
    verified: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", check_prime(self.p))
        object.__setattr__(self, "modulus", int(self.modulus))
        res = tuple(_check_residues(self.residues, self.modulus))
        object.__setattr__(self, "residues", res)
        if not res or res[0] != 0:
            raise ZeroNotInSetError("a modular set must contain the residue 0")
        if self.verified:
            report = verify_modular_set(res, self.modulus, self.p)
            if not report.valid:
                raise NotModularError(
                    f"not a modular set mod {self.modulus}: {_describe(report)}", report)

    def __len__(self) -> int:
        return len(self.residues)

    def __contains__(self, x) -> bool:
        return x in set(self.residues)

    def to_dict(self) -> dict:
        return {"p": self.p, "modulus": self.modulus, "residues": list(self.residues)}

    @classmethod
    def from_dict(cls, data: dict, verified: bool = True) -> "ModularSet":
        return cls(tuple(data["residues"]), int(data["modulus"]), int(data.get("p", 3)),
                   verified=verified)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ModularSet":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        return f"mod {self.modulus}: " + ",".join(map(str, self.residues))

    @classmethod
    def from_text(cls, text: str, p: int = 3) -> "ModularSet":
        head, _, body = text.partition(":")
        word, _, n = head.strip().partition(" ")
        if word != "mod" or not body.strip():
            raise ValueError(f"expected 'mod N: a,b,...', got {text!r}")
        return cls(tuple(int(v) for v in body.split(",")), int(n), p)


def _describe(report: VerificationReport) -> str:
    parts = []
    if report.freeness_witness is not None:
        parts.append(f"progression {report.freeness_witness.elements}")
    if report.uncovered:
        shown = ", ".join(map(str, report.uncovered[:10]))
        more = "..." if len(report.uncovered) > 10 else ""
        parts.append(f"uncovered residues {shown}{more}")
    return "; ".join(parts)


def expand(mset: ModularSet, count: int, allow_unverified: bool = False) -> Sequence:
    """First ``count`` terms of ``A + N * S_p(0)``, in increasing order.

    For a modular set this is exactly ``S_p(A)``.
    """
    if not mset.verified and not allow_unverified:
        raise NotModularError("refusing to expand an unverified set", None)
    blocks = -(-count // len(mset))
    base = stanley_zero(blocks, mset.p)
    terms = [a + mset.modulus * s for s in base for a in mset.residues][:count]
    return Sequence(tuple(terms), mset.residues, mset.p)


def scaled_candidates(mset: ModularSet, alpha: int, level_sums, max_level: int = 16,
                      min_level: int = 0):
    """Yield ``(level, residues, modulus)`` for ``alpha*A + N*S_level``.

    ``level_sums(level)`` must return the finite block ``S_level`` that is
    paired with modulus ``p**level * N``.  Only candidates whose maximum
    stays below the modulus are produced.
    """
    n, p = mset.modulus, mset.p
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if math.gcd(alpha, n) != 1:
        raise ValueError(f"alpha={alpha} is not coprime to N={n}")
    scaled = [alpha * a for a in mset.residues]
    for level in range(min_level, max_level + 1):
        block = level_sums(level)
        mod = p**level * n
        if max(scaled) + n * max(block) >= mod:
            continue
        yield level, sorted(x + n * s for s in block for x in scaled), mod


def scale(mset: ModularSet, alpha: int, max_level: int = 16) -> ModularSet:
    """Modular set for ``alpha*A + N*S_p(0)``.

    Tries ``level = 0, 1, ...`` with modulus ``p**level * N`` and block
    ``S_level`` (the first ``(p-1)**level`` terms of ``S_p(0)``), returning
    the first candidate that fits below its modulus and verifies.
    """
    p = mset.p
    for _, residues, mod in scaled_candidates(
            mset, alpha, lambda lv: stanley_zero((p - 1) ** lv, p), max_level):
        try:
            return ModularSet(tuple(residues), mod, p)
        except NotModularError:
            continue
    raise TheoremContradiction(
        f"no level up to {max_level} makes {alpha}*A + {mset.modulus}*S(0) modular")


def product(first: ModularSet, second: ModularSet) -> ModularSet:
    """The product ``A + M*B`` of sets modulo M and N; modulus ``M*N``."""
    if first.p != second.p:
        raise ValueError(f"cannot combine p={first.p} with p={second.p}")
    m = first.modulus
    residues = sorted(a + m * b for b in second.residues for a in first.residues)
    try:
        return ModularSet(tuple(residues), m * second.modulus, first.p)
    except NotModularError as exc:
        raise TheoremContradiction(f"product failed to verify: {exc}") from exc


def omega(generators: Iterable[int], p: int = 3) -> int:
    """Largest integer neither in ``S_p(A)`` nor covered by it; -1 if none.

    Whether ``x`` is covered only depends on the terms below ``x``.  Every
    non-term above ``max(A)`` was skipped by the greedy rule because it was
    covered, so the scan can stop at ``max(A)``.
    """
    p = check_prime(p)
    gens = sorted({int(g) for g in generators})
    witness = find_p_ap(gens, p)
    if witness is not None:
        raise APFoundError(f"generators contain the {p}-AP {witness.elements}", witness)
    members = set(gens)
    for x in range(gens[-1], -1, -1):
        if x not in members and is_covered(x, gens, p) is None:
            return x
    return -1


def independent_to_modular(seq: Sequence, rho_index: Optional[int] = None,
                           max_level: int = 12) -> ModularSet:
    """Modular set of an independent sequence, modulo ``p**l * rho``.

    ``rho`` is the repeat factor found by
    :func:`stanley.structure.detect_independent`; ``rho_index`` (kappa) may
    be given to insist on a particular one.  The smallest level whose
    truncation ``S(A) & [0, N)`` verifies is returned; the bound
    ``N - max > omega`` is only used to decide when to give up.
    """
    from .structure import detect_independent

    report = detect_independent(seq)
    if report is None:
        raise NotIndependentError(f"S{seq.generators} is not independent at this horizon")
    if rho_index is not None and rho_index != report.kappa:
        raise ValueError(f"detected kappa={report.kappa}, not {rho_index}")
    p, rho = seq.p, report.repeat_factor
    om = omega(seq.generators, p)
    terms = list(seq.terms)
    for level in range(max_level + 1):
        n = p**level * rho
        if n <= max(seq.generators):
            continue
        count = len(terms)
        while terms[-1] < n:
            count *= 2
            terms = list(greedy_stanley(seq.generators, p, count).terms)
        head = [t for t in terms if t < n]
        if head[-1] <= om:
            continue
        try:
            return ModularSet(tuple(head), n, p)
        except NotModularError:
            if n - head[-1] > om:
                raise TheoremContradiction(
                    f"S{seq.generators} & [0, {n}) fails to be modular although "
                    f"N - max = {n - head[-1]} exceeds omega = {om}") from None
    raise TheoremContradiction(f"no level up to {max_level} gave a modular set")


def load_table1() -> list[ModularSet]:
    """The six bundled modular sets that are not independent."""
    text = resources.files("stanley.data").joinpath("table1.json").read_text()
    return [ModularSet.from_dict(row) for row in json.loads(text)["sets"]]
