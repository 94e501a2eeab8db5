from fractions import Fraction

from hypothesis import settings, strategies as st

from divergent.exact import Interval

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def intervals(draw, lo=-20, hi=20):
    a = draw(st.fractions(min_value=lo, max_value=hi, max_denominator=12))
    w = draw(st.fractions(min_value=Fraction(1, 12), max_value=6, max_denominator=12))
    return Interval(a, a + w)


interval_lists = st.lists(intervals(), max_size=12)
