"""
A bump function that vanishes along a family
============================================

Tents over the avoiding open set are zero at every member term, yet they
keep reaching height 1 further and further out.
"""

from fractions import Fraction

from divergent import ArithmeticSequence, TranslatedSequence, constant, theorem2_sequence
from divergent.category import bump_transfer_demo

family = [
    ArithmeticSequence(Fraction(2, 3), Fraction(1, 5)),
    theorem2_sequence(constant(3)),
    TranslatedSequence(theorem2_sequence(constant(1)), Fraction(1, 7)),
]
demo = bump_transfer_demo(family, 64)
print("zero along family:", demo.vanishes_along_family)
print("first peaks:", [str(p) for p in demo.peaks[:5]])
print("peaks escape:", demo.peaks_escape)
