"""
Witnesses from nested intervals
===============================

Dense open sets are given as oracles that shrink any query interval into
themselves.  Threading them one after another pins down a single rational
that lies in all of them, with every membership checked exactly.
"""

from fractions import Fraction

from divergent import geometric_set, interval, linear, periodic_set, theorem2_sequence
from divergent.category import log_form_check, remark_witness, theorem3_witness

# U = union of (1/2, 3/4) * 2^-m clusters at 0
U = geometric_set([interval("1/2", "3/4")], "1/2")
w = theorem3_witness(U, 12, interval(1, 2))
print("x =", w.point)
for k, p in w.hits[:5]:
    print(f"  k={k}: x/k = {p} in U")

# the same point transported to x + log(n+1); only enclosures are available here
print("log form all inside:", log_form_check(w, U)["all_inside"])

# translations: r + s(n) in V for many n, with s having gaps tending to 0
V = periodic_set([interval(0, "1/10")], 3)
s = theorem2_sequence(linear(1))
r = remark_witness(V, s, interval(0, "1/2"), 8)
print("r =", r.point)
print("indices:", [n for n, _ in r.hits])
