"""
Modular sets and their expansions
=================================

A set A mod N containing 0, free and covering mod N, repeats itself:
S(A) = A + N*S(0).
"""

from stanley import ModularSet, expand, greedy_stanley, load_table1, product, scale, verify_modular_set

ten = ModularSet((0, 1, 7, 8), 10)
print(expand(ten, 16).terms)
print("same as greedy:", expand(ten, 256).terms == greedy_stanley(ten.residues, 3, 256).terms)

# a failed check says what is missing
report = verify_modular_set((0, 1), 10)
print("{0,1} mod 10 valid:", report.valid, "uncovered:", report.uncovered)

# new modular sets from old ones
nine = scale(ten, 9)
print("scale by 9:", nine.residues, "mod", nine.modulus)
print(expand(nine, 15).terms)

three = ModularSet((0, 2), 3)
prod = product(ten, three)
print("product:", prod.residues, "mod", prod.modulus)

# the sets of Table 1 have cardinalities that are not powers of two
for m in load_table1():
    print(f"mod {m.modulus:4d}: {len(m):3d} residues")
