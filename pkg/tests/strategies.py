import os
from fractions import Fraction
from math import factorial

from hypothesis import settings
from hypothesis import strategies as st

from core.profile import Profile


@st.composite
def rankings(draw, m):
    return tuple(draw(st.permutations(range(1, m + 1))))


@st.composite
def profiles(draw, m=None, min_m=2, max_m=4, max_voters=20):
    """Integer profiles given as a list of individual rankings"""
    m = m if m is not None else draw(st.integers(min_m, max_m))
    votes = draw(st.lists(rankings(m), min_size=1, max_size=max_voters))
    return Profile.from_rankings(votes)


@st.composite
def alternative_permutations(draw, m):
    image = draw(st.permutations(range(1, m + 1)))
    return dict(zip(range(1, m + 1), image))


@st.composite
def distributions(draw, m=3, denominator=48):
    """Strictly positive rational distributions with a common denominator"""
    size = factorial(m)
    cuts = sorted(draw(st.lists(st.integers(1, denominator - 1), min_size=size - 1,
                                max_size=size - 1, unique=True)))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return Profile.from_vector(m, [Fraction(p, denominator) for p in parts])


THOROUGH = os.getenv('HYPOTHESIS_PROFILE') == 'thorough'


def examples(quick: int, thorough: int = 10000) -> settings:
    """Per-test example count; HYPOTHESIS_PROFILE=thorough switches to the long run"""
    return settings(max_examples=thorough if THOROUGH else quick, deadline=None)
