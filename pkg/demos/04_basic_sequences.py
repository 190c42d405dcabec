"""
Basic sequences
===============

Digit-restricted subset sums of a basis, a generalised base 3.
"""

from stanley import Basis, basis_sequence, complete, cover_witness_digits, greedy_stanley, theorem_set, validate_basis

b = Basis((11, 12, 9), 27)
print(validate_basis(b))
print(basis_sequence(b, 10).terms)

# the modular set that generates it, and the greedy check
ts = theorem_set(b)
print(len(ts), "residues mod", ts.modulus)
print(basis_sequence(b, 200).terms == greedy_stanley(ts.residues, 3, 200).terms)

# 5 is not a digit sum mod 81; here is the progression that covers it
print(cover_witness_digits(5, b))

# p = 5
print(basis_sequence(Basis((7, 5), 25, 5), 13).terms)

# complete a small free set to a basic sequence
basis, gens = complete({0, 4})
print(basis, gens)
