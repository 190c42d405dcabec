"""
Finding modular sets by search
==============================

"""

import time

from stanley.search import SearchTask, census, scan_generators, search_modular_sets, to_base

found = search_modular_sets(SearchTask(10))
print([s.residues for s in found])

t = time.perf_counter()
everything = [s for n in range(1, 41) for s in search_modular_sets(SearchTask(n), threads=2)]
print(len(everything), "modular sets with N <= 40 in %.1fs" % (time.perf_counter() - t))
for size, count, example in census(everything):
    print(f"  |A| = {size:2d}: {count:3d}  e.g. {example}")

# one set per affine orbit
print(len(search_modular_sets(SearchTask(27, symmetry_reduction=True))), "orbits mod 27")

# which S(0, m) are modular?  p = 3 first, then p = 5 in base 5
print([e.m for e in scan_generators(3, 60, 1024) if e.modular])
print([to_base(e.m, 5) for e in scan_generators(5, 30, 2048) if e.modular])
