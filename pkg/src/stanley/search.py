"""Exhaustive search for modular sets, and a scan over two-element generators.

The search walks candidate sets in increasing lexicographic order of their
sorted residues.  A node ``(A, r)`` fixes every residue below ``r``; the
next element, if any, is at least ``r``.  Alongside ``A`` it keeps bitmasks
of the residues that would break freeness (``forbidden``) and of the
residues already covered by an ordered pair ``z < y`` of ``A``.  A subtree
is cut as soon as some skipped residue can no longer be covered.
"""

from __future__ import annotations

import csv
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional

from .core import check_prime, greedy_stanley
from .modular import ModularSet
from .structure import StructureReport, detect_modular_params


@dataclass(frozen=True)
class SearchTask:
    N: int
    p: int = 3
    size_min: int = 1
    size_max: Optional[int] = None
    symmetry_reduction: bool = False
    limit: Optional[int] = None

    def __post_init__(self):
        check_prime(self.p)
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        hi = self.N if self.size_max is None else self.size_max
        if not 1 <= self.size_min <= hi <= self.N:
            raise ValueError(f"size bounds [{self.size_min}, {hi}] must lie within [1, {self.N}]")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be positive")

    @property
    def upper(self) -> int:
        return self.N if self.size_max is None else self.size_max

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SearchResult:
    """Sets found so far; ``complete`` is False when a budget or limit cut
    the search short, in which case ``frontier`` lists the unexplored nodes
    as ``(A, r)`` pairs."""

    task: SearchTask
    sets: list[ModularSet]
    complete: bool = True
    frontier: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    nodes: int = 0
    elapsed: float = 0.0

    def __iter__(self) -> Iterator[ModularSet]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i):
        return self.sets[i]

    def to_dict(self) -> dict:
        return {
            "task": self.task.to_dict(),
            "complete": self.complete,
            "frontier": [[list(a), r] for a, r in self.frontier],
            "results": [s.to_dict() for s in self.sets],
            "nodes": self.nodes,
            "elapsed": self.elapsed,
        }


class _Space:
    """Bitmask bookkeeping for one modulus and prime."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self.full = (1 << n) - 1
        self.inv2 = pow(2, -1, n) if n % 2 else None

    def halves(self, s: int):
        n = self.n
        if self.inv2 is not None:
            return ((s * self.inv2) % n,)
        s %= n
        if s % 2:
            return ()
        return (s // 2, s // 2 + n // 2)

    def add(self, a_list, amask, forbidden, covered, a):
        """Masks after appending ``a`` (larger than every element of A)."""
        n = self.n
        if self.p == 3:
            for b in a_list:
                forbidden |= 1 << ((2 * a - b) % n) | 1 << ((2 * b - a) % n)
                for h in self.halves(a + b):
                    forbidden |= 1 << h
                covered |= 1 << ((2 * a - b) % n)
            forbidden |= 1 << a
            if n % 2 == 0:
                forbidden |= 1 << ((a + n // 2) % n)
        else:
            forbidden, covered = self._add_general(a_list, amask, forbidden, covered, a)
        return amask | 1 << a, forbidden, covered

    def _add_general(self, a_list, amask, forbidden, covered, a):
        n, p = self.n, self.p
        members = amask | 1 << a
        for d in range(1, n):
            for i in range(p):
                residues = {(a + (k - i) * d) % n for k in range(p)}
                missing = [x for x in residues if not members >> x & 1]
                if len(missing) == 1:
                    forbidden |= 1 << missing[0]
            low = a - (p - 2) * d
            if low >= 0 and all(members >> (a - j * d) & 1 for j in range(1, p - 1)):
                covered |= 1 << ((a + d) % n)
        return forbidden | 1 << a, covered

    def root(self):
        return self.add([], 0, 0, 0, 0)

    def state(self, a_list):
        amask = forbidden = covered = 0
        for i, a in enumerate(a_list):
            amask, forbidden, covered = self.add(a_list[:i], amask, forbidden, covered, a)
        return amask, forbidden, covered

    def coverable(self, x: int, zmask: int, avail: int) -> bool:
        """Could some pair ``z < y`` with ``y`` still available cover ``x``?"""
        n, p = self.n, self.p
        y_bits = avail
        while y_bits:
            low = y_bits & -y_bits
            y = low.bit_length() - 1
            y_bits ^= low
            d = (x - y) % n
            if d == 0:
                continue
            if p == 3:
                z = y - d
                if z >= 0 and zmask >> z & 1:
                    return True
            elif y - (p - 2) * d >= 0 and all(zmask >> (y - j * d) & 1 for j in range(1, p - 1)):
                return True
        return False


def _explore(task: SearchTask, stack, node_budget, deadline):
    """Depth-first search over an explicit stack of ``(A, r)`` nodes."""
    space = _Space(task.N, task.p)
    found, nodes = [], 0
    work = []
    for a_list, r in reversed(stack):
        work.append((tuple(a_list), r, *space.state(list(a_list))))
    while work:
        if (node_budget is not None and nodes >= node_budget) or \
                (deadline is not None and time.monotonic() > deadline):
            break
        if task.limit is not None and len(found) >= task.limit:
            break
        a_list, r, amask, forbidden, covered = work.pop()
        nodes += 1
        avail = space.full & ~((1 << r) - 1) & ~forbidden
        size = len(a_list)
        if size + bin(avail).count("1") < task.size_min:
            continue
        missing = ~(amask | covered) & ((1 << r) - 1)
        zmask = amask | avail
        dead = False
        while missing:
            low = missing & -missing
            missing ^= low
            if not space.coverable(low.bit_length() - 1, zmask, avail):
                dead = True
                break
        if dead:
            continue
        if task.size_min <= size and (amask | covered) & space.full == space.full:
            found.append(a_list)
        if size >= task.upper:
            continue
        children = []
        bits = avail
        while bits:
            low = bits & -bits
            bits ^= low
            a = low.bit_length() - 1
            children.append((a_list + (a,), a + 1,
                             *space.add(a_list, amask, forbidden, covered, a)))
        work.extend(reversed(children))
    frontier = [(a_list, r) for a_list, r, *_ in reversed(work)]
    return found, frontier, nodes


def _worker(args):
    task, stack, node_budget, deadline = args
    return _explore(task, stack, node_budget, deadline)


def _roots(task: SearchTask):
    """Initial nodes split by the second element (the first is always 0)."""
    space = _Space(task.N, task.p)
    _, forbidden, _ = space.root()
    return [[((0, a), a + 1)] for a in range(1, task.N) if not forbidden >> a & 1]


def search_modular_sets(task: SearchTask, threads: int = 1, node_budget: Optional[int] = None,
                        time_budget: Optional[float] = None,
                        frontier: Optional[list] = None,
                        previous: Optional[list[ModularSet]] = None) -> SearchResult:
    """Every modular set modulo ``task.N`` within the size bounds.

    With ``threads > 1`` the subtrees rooted at ``{0, a}`` go to separate
    processes; the merged output is sorted and does not depend on
    scheduling.  ``frontier``/``previous`` resume a checkpointed search.
    """
    start = time.monotonic()
    deadline = None if time_budget is None else start + time_budget
    found: list[tuple[int, ...]] = []
    if frontier is None:
        space = _Space(task.N, task.p)
        amask, _, covered = space.root()
        if task.size_min <= 1 and (amask | covered) == space.full:
            found.append((0,))
        parts = _roots(task) if task.N > 1 else []
    else:
        parts = [[(tuple(a), r)] for a, r in frontier]
    per_part = None if node_budget is None else max(1, node_budget // max(len(parts), 1))

    jobs = [(task, part, per_part, deadline) for part in parts]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_worker, jobs))
    else:
        outcomes = [_worker(job) for job in jobs]

    rest, nodes = [], 0
    for got, left, count in outcomes:
        found.extend(got)
        rest.extend(left)
        nodes += count
    if previous:
        found.extend(s.residues for s in previous)

    sets = sorted({tuple(a) for a in found})
    complete = not rest
    if task.limit is not None and len(sets) > task.limit:
        sets, complete = sets[: task.limit], False
    result = [ModularSet(a, task.N, task.p) for a in sets]
    if task.symmetry_reduction:
        result = orbit_representatives(result)
    return SearchResult(task, result, complete, rest, nodes, time.monotonic() - start)


def orbit_key(residues, n: int) -> tuple[int, ...]:
    """Smallest image of the set under ``x -> alpha*(x - t)`` with ``t`` in
    the set and ``alpha`` a unit modulo ``n``."""
    units = [u for u in range(1, n) if math.gcd(u, n) == 1] or [1]
    return min(tuple(sorted((u * (x - t)) % n for x in residues))
               for t in residues for u in units)


def orbit_representatives(sets: list[ModularSet]) -> list[ModularSet]:
    """One set per affine orbit: the lexicographically smallest found member.

    The reduction only groups sets that were actually found, so it is
    sound whether or not the maps preserve the modular property.
    """
    best: dict[tuple, ModularSet] = {}
    for s in sets:
        key = (s.modulus, orbit_key(s.residues, s.modulus))
        if key not in best or s.residues < best[key].residues:
            best[key] = s
    return sorted(best.values(), key=lambda s: s.residues)


def save_checkpoint(result: SearchResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.to_dict(), fh)


def resume_search(path, threads: int = 1, node_budget: Optional[int] = None,
                  time_budget: Optional[float] = None) -> SearchResult:
    with open(path) as fh:
        data = json.load(fh)
    task = SearchTask(**data["task"])
    previous = [ModularSet.from_dict(row) for row in data["results"]]
    if data["complete"]:
        return SearchResult(task, previous, True, [], 0, 0.0)
    return search_modular_sets(task, threads, node_budget, time_budget,
                               frontier=data["frontier"], previous=previous)


def census(sets: list[ModularSet]) -> list[tuple[int, int, tuple[int, ...]]]:
    """Rows ``(cardinality, count, smallest example)`` in cardinality order."""
    counts = Counter(len(s) for s in sets)
    example: dict[int, tuple[int, ...]] = {}
    for s in sets:
        if len(s) not in example or s.residues < example[len(s)]:
            example[len(s)] = s.residues
    return [(k, counts[k], example[k]) for k in sorted(counts)]


def write_census_csv(sets: list[ModularSet], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["cardinality", "count", "example"])
    for size, count, ex in census(sets):
        writer.writerow([size, count, " ".join(map(str, ex))])


@dataclass(frozen=True)
class ScanEntry:
    m: int
    report: Optional[StructureReport]
    error: Optional[str] = None

    @property
    def modular(self) -> bool:
        return self.report is not None

    def to_dict(self) -> dict:
        return {"m": self.m, "modular": self.modular,
                "report": self.report.to_dict() if self.report else None, "error": self.error}


def _scan_one(args):
    p, m, horizon = args
    try:
        seq = greedy_stanley((0, m), p, horizon)
        return ScanEntry(m, detect_modular_params(seq))
    except Exception as exc:  # recorded per m, never fatal
        return ScanEntry(m, None, f"{type(exc).__name__}: {exc}")


def scan_generators(p: int, m_max: int, horizon: int = 4096, threads: int = 1) -> list[ScanEntry]:
    """Run modular detection on ``S_p(0, m)`` for ``m = 1 .. m_max``."""
    p = check_prime(p)
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    jobs = [(p, m, horizon) for m in range(1, m_max + 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_scan_one, jobs))
    return [_scan_one(job) for job in jobs]


def to_base(m: int, base: int) -> str:
    digits = ""
    while True:
        m, r = divmod(m, base)
        digits = str(r) + digits
        if not m:
            return digits
