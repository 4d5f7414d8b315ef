"""The affine family ``f_a(x) = (x + u_a) / 2`` and its Hutchinson iteration."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .lp_geometry import PointSet, SparsePoint, hausdorff, _INT64_SAFE
from .symbolic import Alphabet, AlphabetError, InfiniteWord

DEFAULT_MAX_POINTS = 10**6


class ResourceCapError(RuntimeError):
    """An operation would exceed a configured size limit."""


def max_points_default() -> int:
    return int(os.environ.get("LIPSCOMB_MAX_POINTS", DEFAULT_MAX_POINTS))


@dataclass(frozen=True)
class IfsFamily:
    """The maps ``f_a`` for every letter of an alphabet.

    Each map halves distances, so the family's Lipschitz bound is 1/2; each
    also sends the unit simplex (non-negative coordinates summing to at most
    one) into itself, which keeps images of bounded sets bounded.
    """

    alphabet: Alphabet
    lipschitz_factor: Fraction = Fraction(1, 2)

    def apply(self, letter: str, x: SparsePoint) -> SparsePoint:
        return apply_map(letter, x)

    def apply_word(self, word, x: SparsePoint) -> SparsePoint:
        return apply_word(word, x)

    def project(self, word: InfiniteWord) -> SparsePoint:
        return project(word)

    def iterate(self, seed: PointSet, n: int, letters=None, max_points: int | None = None) -> PointSet:
        return iterate_hutchinson(letters or self.alphabet.letters, seed, n, max_points)


def apply_map(letter: str, x: SparsePoint) -> SparsePoint:
    """``f_letter(x) = (x + u_letter) / 2``; for ``z`` this just halves."""
    alphabet = x.alphabet
    if letter not in alphabet:
        raise AlphabetError(f"letter {letter!r} is not in the alphabet")
    coords = {c: v / 2 for c, v in x.coords.items()}
    if letter != alphabet.z:
        coords[letter] = coords.get(letter, 0) + Fraction(1, 2)
    return SparsePoint(alphabet, coords)


def apply_word(word, x: SparsePoint) -> SparsePoint:
    """``f_w1 ∘ f_w2 ∘ ... ∘ f_wm`` applied to ``x``; the empty word is the identity."""
    word = x.alphabet.check_word(word)
    for letter in reversed(word):
        x = apply_map(letter, x)
    return x


def project(word: InfiniteWord) -> SparsePoint:
    """Limit of ``f_[word]_m (x)`` as ``m`` grows, in closed form.

    With ``g = f_tail`` we have ``g(x) = 2^-L x + g(0)``, whose fixed point is
    ``g(0) / (1 - 2^-L)``; the prefix maps are then applied to it.
    """
    alphabet = word.alphabet
    origin = SparsePoint.origin(alphabet)
    shift = apply_word(word.tail, origin)
    fixed = shift.scale(1 / (1 - Fraction(1, 2 ** len(word.tail))))
    return apply_word(word.prefix, fixed)


def simplex_corners(alphabet: Alphabet, letters: Iterable[str] | None = None) -> PointSet:
    """The points ``u_a`` for the given letters (origin for ``z``)."""
    letters = alphabet.letters if letters is None else tuple(letters)
    return PointSet.from_points([SparsePoint.unit(alphabet, a) for a in letters], alphabet)


def random_simplex_points(alphabet: Alphabet, count: int, rng, resolution: int = 64) -> PointSet:
    """``count`` random points with non-negative coordinates summing to at most one.

    Coordinates are multiples of ``1/resolution``, which keeps later
    iterates cheap to store exactly.
    """
    dim = len(alphabet.primed)
    points = []
    for _ in range(count):
        cuts = sorted(rng.randint(0, resolution) for _ in range(dim))
        parts = [b - a for a, b in zip([0] + cuts, cuts)]
        points.append(SparsePoint(alphabet, {x: Fraction(v, resolution) for x, v in zip(alphabet.primed, parts)}))
    return PointSet.from_points(points, alphabet)


def hutchinson_step(letters: tuple, current: PointSet) -> PointSet:
    """One application of ``B -> union of f_a(B)``, done on integer numerators."""
    alphabet = current.alphabet
    cols = alphabet.primed
    den = current.denominator
    rows = current.numerators
    if rows.dtype != object:
        top = int(np.abs(rows).max()) if rows.size else 0
        if top + den >= _INT64_SAFE or 2 * den >= _INT64_SAFE:
            rows = rows.astype(object)
    blocks = []
    for a in letters:
        if a == alphabet.z:
            blocks.append(rows)
        else:
            shifted = rows.copy()
            shifted[:, cols.index(a)] += den
            blocks.append(shifted)
    # (x + u_a) / 2 over the doubled denominator keeps the numerators as they are
    return PointSet(alphabet, 2 * den, np.vstack(blocks))


def _check_letters(alphabet: Alphabet, letters) -> tuple:
    letters = tuple(dict.fromkeys(letters))
    if not letters:
        raise ValueError("at least one map is needed")
    alphabet.check_word(letters)
    return letters


def hutchinson_orbit(letters, seed: PointSet, max_points: int | None = None) -> Iterator[PointSet]:
    """Yield ``seed, F(seed), F(F(seed)), ...`` without end."""
    letters = _check_letters(seed.alphabet, letters)
    cap = max_points_default() if max_points is None else max_points
    current = seed
    if len(current) > cap:
        raise ResourceCapError(f"seed has {len(current)} points, cap is {cap}")
    while True:
        yield current
        if len(current) * len(letters) > 8 * cap:
            raise ResourceCapError(f"next iterate may hold {len(current) * len(letters)} points, cap is {cap}")
        current = hutchinson_step(letters, current)
        if len(current) > cap:
            raise ResourceCapError(f"iterate holds {len(current)} points, cap is {cap}")


def iterate_hutchinson(letters, seed: PointSet, n: int, max_points: int | None = None) -> PointSet:
    """Apply the Hutchinson operator of the given maps ``n`` times to ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    orbit = hutchinson_orbit(letters, seed, max_points)
    for _ in range(n):
        next(orbit)
    return next(orbit)


@dataclass(frozen=True)
class IterationRecord:
    n: int
    points: int
    step_distance: object  # Hausdorff distance to the previous iterate, None at n = 0


def iterate_with_telemetry(
    letters, seed: PointSet, n: int, p, max_points: int | None = None
) -> Iterator[tuple[PointSet, IterationRecord]]:
    """Like :func:`iterate_hutchinson`, also reporting each step's contraction."""
    prev = None
    for i, current in enumerate(hutchinson_orbit(letters, seed, max_points)):
        step = None if prev is None else hausdorff(prev, current, p)
        yield current, IterationRecord(i, len(current), step)
        if i == n:
            return
        prev = current

