"""
How much of a tail do balls around a sequence cover?
====================================================

For a non-decreasing sequence a_n, the balls of radius 1/j around the terms
cover (i, inf) exactly when the tail gaps are below 2/j and the first term
above i is close enough.  The largest such j is computed in closed form and
compared with a brute-force uncovered-point search.
"""

from fractions import Fraction

from divergent import ArithmeticSequence, WaveSequence, coverage_functional, interval, linear, periodic_set, theorem2_sequence
from divergent.category import wave_family_probe
from divergent.oracles import CoverageOracle

s = theorem2_sequence(linear(1))
oracle = CoverageOracle(s, 10)
for i in range(6):
    print(i, coverage_functional(s, i), oracle.functional(i, 40))

print("step 1/3:", coverage_functional(ArithmeticSequence(Fraction(1, 3)), 4))

# n + h(n x) with a triangle wave: look for an x whose terms keep landing in U
U = periodic_set([interval("1/3", "2/3")], 1)
res = wave_family_probe(U, max_denominator=8, hits=10, horizon=100)
print("x =", res.x, "hits:", res.hits)
print("frac variant:", wave_family_probe(U, None, 8, 10, 100).x)
