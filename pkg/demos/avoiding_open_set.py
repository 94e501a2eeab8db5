"""
An open set no family member visits
===================================

For a finite family of sequences tending to infinity we pick a base point
in every unit cell, shrink a ball around it until it misses every member,
and take the union.  Each member ends up with zero terms inside.
"""

from fractions import Fraction

from divergent import ArithmeticSequence, TranslatedSequence, constant, linear, theorem2_sequence
from divergent.adversary import adversarial_open_set, separation_profile, verify_certificates

family = [
    ArithmeticSequence(Fraction(1, 2)),
    theorem2_sequence(linear(1)),  # gaps shrink like 1/(m+1)
    TranslatedSequence(theorem2_sequence(constant(2)), Fraction(1, 7)),
]
profile = separation_profile(family)
U, certs = adversarial_open_set(profile, 16)

for n in range(6):
    print(n, profile.base.term(n), "radius 1/%d" % profile.h_combined(n))

print("components:", len(U.components))
print("hits per member:", [c.count for c in certs])

# independent rescan of every member up to ten times its modulus
verify_certificates(profile, U, certs)
print("certificates re-checked")
