"""Detect doubling structure in finite prefixes of Stanley sequences.

All detectors look at a finite horizon only.  A negative answer means
"nothing found within these terms" (``none-at-horizon``), never a proof
that the sequence is unstructured.

For ``p = 3`` the recurrences are checked literally: at every anchor
``m * 2**k - sigma`` the block starting there is a translate of the core and
``a[anchor] = 2 * a[anchor - 1] - lam + 1`` with one constant ``lam`` (the
character).  For larger p the analogous self-similarity has ratio ``p - 1``
and is checked as ``a = A + N * S_p(0)`` block by block.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .core import CoverageSieve, Sequence, find_p_ap, greedy_stanley
from .errors import APFoundError, HorizonError, NotModularError, TheoremContradiction
from .modular import ModularSet, expand

KINDS = ("independent", "modular", "regular", "pseudomodular", "none-at-horizon")
MIN_LEVELS = 2


@dataclass(frozen=True)
class StructureReport:
    kind: str
    character: Optional[int] = None
    m: Optional[int] = None
    repeat_factor: Optional[int] = None
    sigma: int = 0
    kappa: int = 0
    core: Optional[tuple[int, ...]] = None
    horizon: int = 0
    levels: int = 0
    certified: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def found(self) -> bool:
        return self.kind != "none-at-horizon"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("character")
        out["core"] = list(self.core) if self.core is not None else None
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StructureReport":
        data = dict(data)
        data["character"] = data.pop("lambda", None)
        if data.get("core") is not None:
            data["core"] = tuple(data["core"])
        return cls(**data)


@dataclass(frozen=True)
class GrowthVerdict:
    classification: str
    band: tuple[float, float]
    fit_quality: float
    coefficient: float
    structure: StructureReport
    horizon: int
    threshold: float

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "band": list(self.band),
            "fit_quality": self.fit_quality,
            "coefficient": self.coefficient,
            "structure": self.structure.to_dict(),
            "horizon": self.horizon,
            "threshold": self.threshold,
            "note": "desk-scale heuristic; asymptotic growth is not decided by a finite prefix",
        }


def _match_levels(terms, m, sigma, kappa, core):
    """Check the shifted doubling recurrences from level ``kappa`` upward.

    Returns ``(lam, levels)`` where ``levels`` counts the anchors inside
    the horizon, or None on the first violation.
    """
    n = len(terms)
    lam = None
    levels = 0
    k = kappa
    while True:
        anchor = m * 2**k - sigma
        if anchor >= n:
            break
        if anchor < 1:
            return None
        value = 2 * terms[anchor - 1] + 1 - terms[anchor]
        if lam is None:
            lam = value
        elif value != lam:
            return None
        base = terms[anchor]
        span = min(m * 2**k, n - anchor)
        if span > len(core):
            return None
        for i in range(span):
            if terms[anchor + i] != base + core[i]:
                return None
        levels += 1
        k += 1
    return lam, levels


def _match_blocks_p(terms, m, p):
    """Check ``terms == A + a_m * S_p(0)`` block by block; count levels."""
    n = len(terms)
    unit = terms[m]
    levels = 0
    k = 0
    while m * (p - 1) ** k < n:
        width = m * (p - 1) ** k
        for j in range(1, p - 1):
            anchor = j * width
            if anchor >= n:
                break
            if terms[anchor] != j * p**k * unit:
                return None
            for i in range(min(width, n - anchor)):
                if terms[anchor + i] != terms[anchor] + terms[i]:
                    return None
        levels += 1
        k += 1
    return levels


def _require_horizon(seq: Sequence, minimum: int = 4) -> list[int]:
    if len(seq) < minimum:
        raise HorizonError(f"need at least {minimum} terms, got {len(seq)}")
    return list(seq.terms)


def detect_independent(seq: Sequence, min_levels: int = MIN_LEVELS) -> Optional[StructureReport]:
    """Smallest kappa with ``a[2^k + i] = a[2^k] + a[i]`` and a constant
    character for all ``k >= kappa`` inside the horizon."""
    if seq.p != 3:
        raise ValueError("independence is defined for p = 3")
    terms = _require_horizon(seq)
    n = len(terms)
    kappa = 0
    while 2 ** (kappa + min_levels - 1) < n:
        hit = _match_levels(terms, 1, 0, kappa, terms)
        if hit is not None and hit[1] >= min_levels and hit[0] >= 0:
            return StructureReport("independent", hit[0], 2**kappa, terms[2**kappa], 0, kappa,
                                   seq.generators, n, hit[1])
        kappa += 1
    return None


def _certify(terms: list[int], m: int, seq: Sequence) -> bool:
    if max(seq.generators) >= terms[m]:
        return False
    try:
        ModularSet(tuple(terms[:m]), terms[m], seq.p)
    except (NotModularError, ValueError):
        return False
    return True


def detect_modular_params(seq: Sequence, min_levels: int = MIN_LEVELS) -> Optional[StructureReport]:
    """Smallest block length m for which the modular recurrences hold from
    level 0 across the whole horizon.

    A hit is ``certified`` when the first m terms also verify as a modular
    set modulo ``a[m]`` and contain the generators; then the structure holds
    for the entire infinite sequence, not just the horizon.
    """
    terms = _require_horizon(seq)
    n, p = len(terms), seq.p
    for m in range(1, n // 4 + 1):
        if p == 3:
            hit = _match_levels(terms, m, 0, 0, terms)
            if hit is None or hit[1] < min_levels or hit[0] < 0:
                continue
            lam, levels = hit
        else:
            levels = _match_blocks_p(terms, m, p)
            if levels is None or levels < min_levels:
                continue
            lam = None
        return StructureReport("modular", lam, m, terms[m], 0, 0, seq.generators, n, levels,
                               _certify(terms, m, seq))
    return None


def greedy_generators(values: list[int], p: int = 3) -> Optional[tuple[int, ...]]:
    """Shortest prefix of ``values`` from which the greedy rule rebuilds
    all of ``values``; None if ``values`` is not p-free."""
    if find_p_ap(values, p) is not None:
        return None
    sieve = CoverageSieve(p, capacity=2 * values[-1] + 64)
    last_forced = 0
    for t, v in enumerate(values):
        if t and sieve.next_free(values[t - 1] + 1) != v:
            last_forced = t
        sieve.add(v)
    return tuple(values[: last_forced + 1])


def _core_report(core_gens, lam, horizon, p=3):
    try:
        core_seq = greedy_stanley(core_gens, p, max(horizon, 4 * len(core_gens), 64))
    except APFoundError:
        return None, None
    report = detect_modular_params(core_seq)
    if report is None or report.character != lam:
        return None, None
    return core_seq, report


def detect_pseudomodular(seq: Sequence, core_candidates: Optional[Iterable[Iterable[int]]] = None,
                         sigma_max: int = 8, min_levels: int = MIN_LEVELS) -> Optional[StructureReport]:
    """Find shift index sigma, block length m, character and core.

    The translated blocks are compared against the core terms ``a'_i``.
    Without ``core_candidates`` the core is read off the blocks themselves,
    reduced to its shortest greedy generating prefix, regenerated, and must
    itself be modular with the same character.  The result is labelled
    ``regular`` when m is a power of two and the core is independent.
    """
    if seq.p != 3:
        raise ValueError("pseudomodular structure is defined for p = 3")
    terms = _require_horizon(seq)
    n = len(terms)
    cores = None
    if core_candidates is not None:
        cores = []
        for gens in core_candidates:
            gens = sorted(gens)
            try:
                cores.append((tuple(gens), list(greedy_stanley(gens, 3, max(2 * n, len(gens))).terms)))
            except APFoundError:
                continue

    for sigma in range(sigma_max + 1):
        for m in range(1, n // 2 + 1):
            kappa = 0
            while True:
                first = m * 2**kappa - sigma
                second = m * 2 ** (kappa + min_levels - 1) - sigma
                if second >= n:
                    break
                if first < 1:
                    kappa += 1
                    continue
                found = _try_pseudo(terms, m, sigma, kappa, cores, min_levels)
                if found is not None:
                    lam, levels, gens, core_report = found
                    kind = "pseudomodular"
                    if m & (m - 1) == 0 and core_report.m & (core_report.m - 1) == 0:
                        kind = "regular"
                    return StructureReport(kind, lam, m, terms[first], sigma, kappa, gens, n, levels)
                kappa += 1
    return None


def _try_pseudo(terms, m, sigma, kappa, cores, min_levels):
    n = len(terms)
    if cores is None:
        # the longest block inside the horizon fixes the most core terms
        best, k = (0, 0), kappa
        while m * 2**k - sigma < n:
            anchor = m * 2**k - sigma
            best = max(best, (min(m * 2**k, n - anchor), anchor))
            k += 1
        span, top = best
        derived = [t - terms[top] for t in terms[top:top + span]]
        hit = _match_levels(terms, m, sigma, kappa, derived)
        if hit is None or hit[1] < min_levels:
            return None
        gens = greedy_generators(derived)
        if gens is None:
            return None
        core_seq, report = _core_report(gens, hit[0], n)
        if core_seq is None or list(core_seq.terms[: len(derived)]) != derived:
            return None
        return hit[0], hit[1], gens, report
    for gens, core in cores:
        hit = _match_levels(terms, m, sigma, kappa, core)
        if hit is None or hit[1] < min_levels:
            continue
        core_seq, report = _core_report(gens, hit[0], n)
        if core_seq is not None:
            return hit[0], hit[1], gens, report
    return None


def detect_structure(seq: Sequence) -> StructureReport:
    """Run the detectors in order and return the first hit, or a
    ``none-at-horizon`` report."""
    if seq.p == 3:
        for detector in (detect_independent, detect_modular_params, detect_pseudomodular):
            report = detector(seq)
            if report is not None:
                return report
    else:
        report = detect_modular_params(seq)
        if report is not None:
            return report
    return StructureReport("none-at-horizon", horizon=len(seq), core=seq.generators)


def build_pseudomodular(mset: ModularSet, k: int, c: int, sigma: int = 0,
                        horizon: Optional[int] = None) -> tuple[int, ...]:
    """Generators obtained by translating one block of a modular sequence.

    With ``(a_n) = S(A)``, character lam and block length m, returns the
    first ``m*2^k - sigma`` terms together with the next ``m*2^k`` terms
    shifted by ``c``.  The result is checked 3-free and its Stanley sequence
    is checked to be pseudomodular with core ``S(A)`` up to ``horizon``
    terms; either failure raises :class:`TheoremContradiction`.
    """
    if mset.p != 3:
        raise ValueError("the translation construction is stated for p = 3")
    if k < 1:
        raise ValueError("k must be positive")
    need = len(mset) * 2 ** (k + 3)
    seq = expand(mset, need)
    report = detect_modular_params(seq)
    if report is None:
        raise TheoremContradiction(f"expansion of {mset.to_text()} shows no modular structure")
    lam, m = report.character, report.m
    seq = expand(mset, max(need, m * 2 ** (k + 1)))
    a = seq.terms
    lo, hi = lam, a[m * (2**k - 1)] - lam
    if not lo <= c <= hi:
        raise ValueError(f"c={c} outside the admissible range [{lo}, {hi}]")
    cut, end = m * 2**k - sigma, m * 2 ** (k + 1) - sigma
    if cut < 1:
        raise ValueError("sigma too large for this k")
    gens = tuple(sorted(set(a[:cut]) | {c + a[i] for i in range(cut, end)}))
    witness = find_p_ap(gens, 3)
    if witness is not None:
        raise TheoremContradiction(f"A_k^c contains the 3-AP {witness.elements}")
    horizon = horizon or max(m * 2 ** (k + 4), 64)
    built = greedy_stanley(gens, 3, horizon)
    check = detect_pseudomodular(built, core_candidates=[mset.residues], sigma_max=max(8, sigma))
    if check is None:
        raise TheoremContradiction(
            f"S{gens[:8]}... is not pseudomodular with core S{mset.residues} within {horizon} terms")
    return gens


def growth_band(terms: list[int], start: int) -> tuple[float, float]:
    """Min and max of ``a_n / n^log2(3)`` over ``n >= start``."""
    ratios = [terms[n] / 3.0 ** math.log2(n) for n in range(max(start, 1), len(terms))]
    return min(ratios), max(ratios)


def classify_growth(seq: Sequence, threshold: float = 0.99) -> GrowthVerdict:
    """Heuristic growth classification of a finite prefix.

    ``type1-evidence`` needs a detected structure.  Otherwise the top half
    of the terms is fitted to ``c * n^2 / log n`` through the origin and
    ``type2-fit`` is reported when the coefficient of determination reaches
    ``threshold``; anything else is ``unknown``.
    """
    n = len(seq)
    if n < 64:
        raise HorizonError(f"need at least 64 terms to classify growth, got {n}")
    terms = list(seq.terms)
    structure = detect_structure(seq)
    idx = np.arange(n // 2, n, dtype=float)
    x = idx**2 / np.log(idx)
    y = np.asarray(terms[n // 2:], dtype=float)
    coef = float(x @ y / (x @ x))
    resid = y - coef * x
    r2 = float(1.0 - (resid @ resid) / (((y - y.mean()) ** 2).sum()))
    if structure.found:
        label = "type1-evidence"
    elif r2 >= threshold:
        label = "type2-fit"
    else:
        label = "unknown"
    return GrowthVerdict(label, growth_band(terms, n // 2), r2, coef, structure, n, threshold)
