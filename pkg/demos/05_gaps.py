"""
Sequences with large gaps
=========================

"""

from stanley import expand, gap_family, gap_profile, greedy_stanley

for m in range(3):
    a = gap_family(m)
    prof = gap_profile(expand(a, 1024), 128)
    print(f"A_{m}: {len(a)} residues mod {a.modulus}, min gap {prof.min_gap_tail}, recurring {prof.recurring}")

print("S(0):", gap_profile(greedy_stanley([0], 3, 1024), 128).min_gap_tail)
