from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lipscomb import Alphabet, InfiniteWord, SparsePoint

ZAB = Alphabet(("z", "a", "b"), "z")
ZABC = Alphabet(("z", "a", "b", "c"), "z")
FIVE = Alphabet(("z", "a", "b", "c", "d"), "z")


def words(alphabet=FIVE, max_prefix=8, max_period=4):
    letters = st.sampled_from(alphabet.letters)
    return st.builds(
        lambda pre, tail: InfiniteWord(alphabet, tuple(pre), tuple(tail)),
        st.lists(letters, max_size=max_prefix),
        st.lists(letters, min_size=1, max_size=max_period),
    )


def points(alphabet=FIVE, max_den=16):
    coord = st.fractions(min_value=-2, max_value=2, max_denominator=max_den)
    return st.dictionaries(st.sampled_from(alphabet.primed), coord).map(
        lambda d: SparsePoint(alphabet, d)
    )


def simplex_points(alphabet=ZAB, den=32):
    dim = len(alphabet.primed)
    return st.lists(st.integers(0, den), min_size=dim, max_size=dim).map(
        lambda cuts: _from_cuts(alphabet, sorted(cuts), den)
    )


def _from_cuts(alphabet, cuts, den):
    parts = [b - a for a, b in zip([0] + cuts, cuts)]
    return SparsePoint(alphabet, {x: Fraction(v, den) for x, v in zip(alphabet.primed, parts)})


@pytest.fixture
def zabc():
    return ZABC
