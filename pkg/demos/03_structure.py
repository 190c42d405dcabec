"""
Reading structure off a sequence
================================

"""

from stanley import build_pseudomodular, classify_growth, detect_structure, greedy_stanley, ModularSet

for gens in ([0, 1, 7], [0, 1, 4], [0, 1, 4, 5, 12, 14, 15, 31], [0, 4]):
    r = detect_structure(greedy_stanley(gens, 3, 256))
    print(gens, r.kind, "lambda", r.character, "m", r.m, "sigma", r.sigma, "core", r.core)

# translate the second block of S(0) by c and regrow
print(build_pseudomodular(ModularSet((0,), 1), 2, 2))

# growth: S(0) has clear n^log2(3) structure, S(0,4) is undecided at this size
for gens in ([0], [0, 4]):
    v = classify_growth(greedy_stanley(gens, 3, 2048))
    print(gens, v.classification, "band", v.band, "n^2/log n fit R^2 %.3f" % v.fit_quality)
