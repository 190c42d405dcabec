"""
Greedy progression-free sequences
=================================

"""

from stanley import find_p_ap, greedy_stanley, omega

# S(0): integers whose base-3 digits avoid 2
s0 = greedy_stanley([0], 3, 16)
print("S(0)      ", s0.terms)

# start from another 3-free set
print("S(0,1,7)  ", greedy_stanley([0, 1, 7], 3, 17).terms)
print("S(0,1,4)  ", greedy_stanley([0, 1, 4], 3, 17).terms)

# 5-term progressions instead of 3-term ones
print("S_5(0,3)  ", greedy_stanley([0, 3], 5, 20).terms)

# a set that already contains a progression is refused
print("AP in {0,2,4,5}:", find_p_ap([0, 2, 4, 5], 3))

# the largest integer neither in S(A) nor covered by it
for gens in ([0], [0, 2], [0, 1, 7]):
    print("omega", gens, "=", omega(gens))
