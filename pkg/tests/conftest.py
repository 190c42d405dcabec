"""Brute-force oracles shared by the test modules.

These are deliberately naive and share no code with the package.
"""

import itertools
import json
from importlib import resources

import pytest


def brute_has_ap(values, p):
    s = sorted(set(values))
    members = set(s)
    for x1, x2 in itertools.combinations(s, 2):
        d = x2 - x1
        if all(x1 + j * d in members for j in range(p)):
            return True
    return False


def brute_aps(values, p):
    """Every p-AP inside ``values`` as a tuple."""
    s = sorted(set(values))
    members = set(s)
    out = []
    for x1, x2 in itertools.combinations(s, 2):
        d = x2 - x1
        if all(x1 + j * d in members for j in range(p)):
            out.append(tuple(x1 + j * d for j in range(p)))
    return out


def brute_covered(x, values, p):
    below = sorted(v for v in set(values) if v < x)
    for combo in itertools.combinations(below, p - 1):
        seq = combo + (x,)
        diffs = {b - a for a, b in zip(seq, seq[1:])}
        if len(diffs) == 1:
            return True
    return False


def brute_greedy(gens, p, count):
    terms = sorted(set(gens))
    c = terms[-1] + 1
    while len(terms) < count:
        if not brute_has_ap(terms + [c], p):
            terms.append(c)
        c += 1
    return terms


def brute_covered_mod(x, values, n, p):
    for combo in itertools.combinations(sorted(set(values)), p - 1):
        d = None
        seq = combo + (x,)
        ok = True
        for a, b in zip(seq, seq[1:]):
            diff = (b - a) % n
            if d is None:
                d = diff
            elif diff != d:
                ok = False
                break
        if ok and d % n:
            return True
    return False


def brute_free_mod(values, n, p):
    s = sorted(set(values))
    for tup in itertools.product(s, repeat=p):
        d = (tup[1] - tup[0]) % n
        if d and all((b - a) % n == d for a, b in zip(tup, tup[1:])):
            return False
    return True


def brute_modular(values, n, p=3):
    s = set(values)
    if 0 not in s:
        return False
    return brute_free_mod(s, n, p) and all(
        brute_covered_mod(x, s, n, p) for x in range(n) if x not in s)


def digits_ok(x, p):
    while x:
        x, r = divmod(x, p)
        if r == p - 1:
            return False
    return True


@pytest.fixture(scope="session")
def golden():
    text = resources.files("stanley.data").joinpath("golden_sequences.json").read_text()
    return {row["name"]: row for row in json.loads(text)["sequences"]}


@pytest.fixture(scope="session")
def table1_raw():
    text = resources.files("stanley.data").joinpath("table1.json").read_text()
    return json.loads(text)["sets"]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
