import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lipscomb import (
    AlphabetError,
    IfsFamily,
    PointSet,
    ResourceCapError,
    SparsePoint,
    apply_map,
    apply_word,
    embed,
    hausdorff,
    iterate_hutchinson,
    iterate_with_telemetry,
    project,
)
from lipscomb.ifs import random_simplex_points, simplex_corners

from conftest import FIVE, ZAB, ZABC, simplex_points, words

W = ZABC.parse
O = SparsePoint.origin(ZABC)


def pt(**coords):
    return SparsePoint(ZABC, {k: Fraction(v) for k, v in coords.items()})


def enumerate_iterate(letters, seed, n):
    """Every word of length n applied to every seed point."""
    return {apply_word(w, x) for w in itertools.product(letters, repeat=n) for x in seed}


class TestMaps:
    def test_apply_map(self):
        assert apply_map("z", O) == O
        ua = SparsePoint.unit(ZABC, "a")
        assert apply_map("a", ua) == ua
        assert apply_map("a", SparsePoint.unit(ZABC, "b")) == pt(a="1/2", b="1/2")
        with pytest.raises(AlphabetError):
            apply_map("q", O)

    def test_apply_word(self):
        x = pt(a="1/3", c="1/5")
        assert apply_word((), x) == x
        assert apply_word(("a", "b"), O) == pt(a="1/2", b="1/4") == embed(W("ab(z)"))
        ua = SparsePoint.unit(ZABC, "a")
        assert apply_word(("a", "a"), ua) == ua
        with pytest.raises(AlphabetError):
            apply_word(("a", "q"), O)

    def test_order_is_outermost_first(self):
        assert apply_word(("a", "b"), O) == apply_map("a", apply_map("b", O))

    @given(simplex_points(ZAB), simplex_points(ZAB), st.sampled_from(ZAB.letters))
    def test_maps_halve_distances(self, x, y, a):
        from lipscomb import dist_p

        for p in (1, 2, 3):
            assert float(dist_p(apply_map(a, x), apply_map(a, y), p)) == pytest.approx(
                float(dist_p(x, y, p)) / 2, rel=1e-12, abs=1e-300
            )

    @given(simplex_points(ZAB), st.sampled_from(ZAB.letters))
    def test_simplex_is_invariant(self, x, a):
        y = apply_map(a, x)
        assert all(v >= 0 for v in y.coords.values()) and y.total() <= 1

    def test_family(self):
        fam = IfsFamily(ZABC)
        assert fam.lipschitz_factor == Fraction(1, 2) < 1
        assert fam.project(W("(a)")) == SparsePoint.unit(ZABC, "a")


class TestProject:
    def test_examples(self):
        assert project(W("(a)")) == SparsePoint.unit(ZABC, "a")
        assert project(W("(ab)")) == pt(a="2/3", b="1/3")
        assert project(W("ca(b)")) == apply_word(("c", "a"), SparsePoint.unit(ZABC, "b")) == pt(
            c="1/2", a="1/4", b="1/4"
        )

    @given(words())
    def test_equals_embed(self, alpha):
        assert project(alpha) == embed(alpha)

    @given(words(max_prefix=4, max_period=3), simplex_points(FIVE))
    def test_limit_of_compositions(self, alpha, start):
        # f_[w]_m(x) is within 2^-m (1-norm, on the simplex) of the limit point
        target = project(alpha)
        m = 24
        word = tuple(itertools.islice(alpha, m))
        from lipscomb import dist_p

        assert dist_p(apply_word(word, start), target, 1) <= Fraction(2, 2**m)


class TestHutchinson:
    def test_zero_steps(self):
        seed = PointSet.from_points([pt(a="1/3")])
        assert iterate_hutchinson("zab", seed, 0) == seed

    def test_one_step(self):
        seed = PointSet.from_points([O])
        got = iterate_hutchinson("zab", seed, 1)
        assert set(got) == {O, pt(a="1/2"), pt(b="1/2")}

    def test_two_steps(self):
        seed = PointSet.from_points([O])
        got = iterate_hutchinson("zab", seed, 2)
        assert len(got) == 9
        assert pt(a="1/4") in got and pt(a="1/2", b="1/4") in got
        assert set(got) == enumerate_iterate("zab", [O], 2)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(simplex_points(ZABC, 8), min_size=1, max_size=3), st.integers(0, 4))
    def test_matches_enumeration(self, seed, n):
        got = iterate_hutchinson("zabc", PointSet.from_points(seed), n)
        assert set(got) == enumerate_iterate("zabc", seed, n)
        assert len(got) <= 4**n * len(seed)

    def test_cap(self):
        seed = PointSet.from_points([O])
        with pytest.raises(ResourceCapError):
            iterate_hutchinson("zab", seed, 6, max_points=100)

    def test_letters_checked(self):
        with pytest.raises(AlphabetError):
            iterate_hutchinson("zq", PointSet.from_points([O]), 1)
        with pytest.raises(ValueError):
            iterate_hutchinson("", PointSet.from_points([O]), 1)

    def test_telemetry_contracts(self):
        seed = PointSet.from_points([O])
        recs = [rec for _, rec in iterate_with_telemetry("zab", seed, 5, 2)]
        assert [r.n for r in recs] == list(range(6))
        assert [r.points for r in recs] == [3**n for n in range(6)]
        assert recs[0].step_distance is None
        for a, b in zip(recs[1:], recs[2:]):
            assert b.step_distance <= a.step_distance / 2

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2**32))
    def test_contraction(self, seed):
        rng = random.Random(seed)
        S = random_simplex_points(ZAB, 3, rng)
        T = random_simplex_points(ZAB, 4, rng)
        prev = hausdorff(S, T, 2)
        for n in range(1, 5):
            S, T = iterate_hutchinson("zab", S, 1), iterate_hutchinson("zab", T, 1)
            cur = hausdorff(S, T, 2)
            assert float(cur) <= float(prev) / 2 * (1 + 1e-12)
            prev = cur

    def test_cell_refinement(self):
        corners = simplex_corners(ZAB)
        alpha = ZAB.parse("(ab)")
        prev_cell = None
        base = max(float(hausdorff(PointSet.from_points([x]), PointSet.from_points([y]), 2)) for x in corners for y in corners)
        for m in range(1, 10):
            word = tuple(itertools.islice(alpha, m))
            cell = PointSet.from_points([apply_word(word, x) for x in corners])
            diam = max(
                float(hausdorff(PointSet.from_points([x]), PointSet.from_points([y]), 2)) for x in cell for y in cell
            )
            assert diam == pytest.approx(base / 2**m, rel=1e-12)
            # nested containment: pulling the cell back through the parent's affine map
            # lands every corner inside the unit simplex
            if prev_cell is not None:
                base_point = apply_word(word[:-1], SparsePoint.origin(ZAB))
                for y in cell:
                    x = (y - base_point).scale(2 ** (m - 1))
                    assert all(v >= 0 for v in x.coords.values()) and x.total() <= 1
            prev_cell = cell
        assert project(alpha) == embed(alpha)

    def test_iterates_do_not_depend_on_p(self):
        seed = PointSet.from_points([O])
        runs = [
            [it for it, _ in iterate_with_telemetry("zabc", seed, 3, p)] for p in (1, Fraction(3, 2), 2, 3)
        ]
        for run in runs[1:]:
            assert run == runs[0]
