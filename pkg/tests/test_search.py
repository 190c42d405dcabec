import io
import itertools
import math

import pytest

from stanley import verify_modular_set
from stanley.search import (SearchTask, census, orbit_key, orbit_representatives, resume_search,
                            save_checkpoint, scan_generators, search_modular_sets, to_base,
                            write_census_csv)

from conftest import brute_modular


def brute_all(n):
    return [(0,) + c for r in range(n) for c in itertools.combinations(range(1, n), r)
            if brute_modular((0,) + c, n)]


@pytest.mark.parametrize("n", range(1, 13))
def test_complete_against_brute_force(n):
    got = [s.residues for s in search_modular_sets(SearchTask(n))]
    assert got == brute_all(n)


def test_examples():
    assert [s.residues for s in search_modular_sets(SearchTask(1))] == [(0,)]
    assert (0, 1, 7, 8) in [s.residues for s in search_modular_sets(SearchTask(10, size_min=4, size_max=4))]
    a0 = (0, 2, 6, 8, 11, 13, 17, 19)
    assert a0 in [s.residues for s in search_modular_sets(SearchTask(29, size_min=8, size_max=8))]


def test_soundness_and_size_bounds():
    for n in (27, 29, 30):
        everything = search_modular_sets(SearchTask(n))
        for s in everything:
            assert verify_modular_set(s.residues, n).valid
        sized = search_modular_sets(SearchTask(n, size_min=8, size_max=8))
        assert [s.residues for s in sized] == [s.residues for s in everything if len(s) == 8]


def test_p5_search_matches_brute():
    for n in range(1, 11):
        got = [s.residues for s in search_modular_sets(SearchTask(n, 5))]
        brute = [(0,) + c for r in range(n) for c in itertools.combinations(range(1, n), r)
                 if brute_modular((0,) + c, n, 5)]
        assert got == brute


def test_parallel_is_deterministic():
    task = SearchTask(27)
    serial = [s.residues for s in search_modular_sets(task)]
    assert [s.residues for s in search_modular_sets(task, threads=2)] == serial


def test_task_validation():
    with pytest.raises(ValueError):
        SearchTask(0)
    with pytest.raises(ValueError):
        SearchTask(10, size_min=5, size_max=4)
    with pytest.raises(ValueError):
        SearchTask(10, p=4)


def test_budget_and_resume(tmp_path):
    task = SearchTask(27)
    full = [s.residues for s in search_modular_sets(task)]
    partial = search_modular_sets(task, node_budget=200)
    assert not partial.complete and partial.frontier
    path = tmp_path / "ck.json"
    save_checkpoint(partial, path)
    rounds = 0
    result = partial
    while not result.complete:
        result = resume_search(path, node_budget=500)
        save_checkpoint(result, path)
        rounds += 1
        assert rounds < 100
    assert [s.residues for s in result] == full


def test_limit_keeps_smallest():
    full = [s.residues for s in search_modular_sets(SearchTask(27))]
    limited = search_modular_sets(SearchTask(27, limit=5))
    assert [s.residues for s in limited] == full[:5] and not limited.complete


def test_unit_multiples_are_not_always_modular():
    # the ordered covering rule is not invariant under x -> alpha*x
    image = sorted(7 * x % 9 for x in (0, 1, 3, 4))
    assert verify_modular_set((0, 1, 3, 4), 9).valid
    assert image == [0, 1, 3, 7] and not verify_modular_set(image, 9).valid


def test_symmetry_reduction_output_only():
    full = list(search_modular_sets(SearchTask(27)))
    reduced = search_modular_sets(SearchTask(27, symmetry_reduction=True))
    keys = {orbit_key(s.residues, 27) for s in full}
    assert len(reduced) == len(keys)
    assert {orbit_key(s.residues, 27) for s in reduced} == keys
    for s in reduced:
        assert verify_modular_set(s.residues, 27).valid
        assert s.residues == min(t.residues for t in full
                                 if orbit_key(t.residues, 27) == orbit_key(s.residues, 27))
    assert orbit_representatives(full) == list(reduced)


def test_orbit_key_is_invariant():
    s = (0, 1, 7, 8)
    for u in range(1, 10):
        if math.gcd(u, 10) == 1:
            for t in s:
                image = sorted((u * (x - t)) % 10 for x in s)
                assert orbit_key(image, 10) == orbit_key(s, 10)


def test_census():
    sets = list(search_modular_sets(SearchTask(27))) + list(search_modular_sets(SearchTask(30)))
    rows = census(sets)
    assert sum(count for _, count, _ in rows) == len(sets)
    buf = io.StringIO()
    write_census_csv(sets, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "cardinality,count,example" and len(lines) == len(rows) + 1


def test_scan_small():
    entries = scan_generators(3, 12, 512)
    modular = [e.m for e in entries if e.modular]
    assert 1 in modular
    assert set(modular) <= {1, 2, 3, 6, 9}
    assert all(e.error is None for e in entries)


def test_scan_p3_conjectured_values():
    allowed = {3**n for n in range(6)} | {2 * 3**n for n in range(6)}
    modular = {e.m for e in scan_generators(3, 100, 1024) if e.modular}
    assert modular <= allowed


def test_to_base():
    assert [to_base(m, 5) for m in (0, 1, 5, 37, 99)] == ["0", "1", "10", "122", "344"]
