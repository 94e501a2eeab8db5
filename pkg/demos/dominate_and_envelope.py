"""
Eventual domination of a countable family
=========================================

A diagonal dominator beats every member from that member's own index on.
"""

from divergent import diagonal_dominator, le_star_verdict, linear, monotone_envelope, poly, prefix_function

# three growth rates, one of them wiggly
family = [linear(3), poly(0, 0, 1), prefix_function([40, 2, 30, 1])]
g = diagonal_dominator(family)
print("dominator:", g.prefix(12))

# violations are indices where a member still beats g; they stop at the member index
for j, f in enumerate(family):
    print(f"member {j}:", le_star_verdict(f, g, 200).violations)

# the running maximum is the least non-decreasing majorant
wiggly = family[2]
print("wiggly:  ", wiggly.prefix(8))
print("envelope:", monotone_envelope(wiggly).prefix(8))
