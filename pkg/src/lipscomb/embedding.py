"""Coordinates of words in l^p(A) and the inverse map back to word classes."""

from __future__ import annotations

from fractions import Fraction

from .lp_geometry import SparsePoint
from .symbolic import AlphabetError, InfiniteWord, WordClass, word_class

HALF = Fraction(1, 2)


class NotOnAttractorError(ValueError):
    """The point cannot be the image of any word."""


class DecodeDepthError(RuntimeError):
    """No periodic tail was found within the allowed number of steps."""


def coordinate(alpha: InfiniteWord, b: str) -> Fraction:
    """Sum of ``2^-k`` over the positions ``k`` where ``alpha`` has letter ``b``."""
    alphabet = alpha.alphabet
    if b == alphabet.z:
        raise AlphabetError("there is no coordinate at the distinguished letter")
    if b not in alphabet:
        raise AlphabetError(f"letter {b!r} is not in the alphabet")
    head = sum((Fraction(1, 2**k) for k, x in enumerate(alpha.prefix, 1) if x == b), Fraction(0))
    start = len(alpha.prefix)
    window = sum(
        (Fraction(1, 2 ** (start + j)) for j, x in enumerate(alpha.tail, 1) if x == b),
        Fraction(0),
    )
    return head + window / (1 - Fraction(1, 2 ** len(alpha.tail)))


def embed(alpha: InfiniteWord) -> SparsePoint:
    letters = set(alpha.prefix) | set(alpha.tail)
    letters.discard(alpha.alphabet.z)
    return SparsePoint(alpha.alphabet, {b: coordinate(alpha, b) for b in letters})


def continuity_bound(m: int) -> Fraction:
    """Words sharing their first ``m`` letters embed at distance at most ``2^(1-m)``, for any p."""
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(1, 2 ** (m - 1))


def _check_simplex(x: SparsePoint) -> None:
    for letter, v in x.coords.items():
        if not 0 <= v <= 1:
            raise NotOnAttractorError(f"coordinate {letter}={v} leaves [0, 1]")
    if x.total() > 1:
        raise NotOnAttractorError(f"coordinate sum {x.total()} exceeds 1")


def decode(x: SparsePoint, max_depth: int = 64) -> WordClass:
    """Recover the word class whose image is ``x``.

    Peels one letter at a time: a letter whose coordinate is at least 1/2
    must come first (if two letters sit at exactly 1/2 the smaller one is
    taken; both choices lie in the same class), otherwise the first letter
    is ``z``.  The residual ``2x - u_letter`` is memoised; the first repeat
    closes the periodic tail.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    alphabet = x.alphabet
    seen = {}
    letters = []
    residual = x
    for step in range(max_depth + 1):
        _check_simplex(residual)
        if residual in seen:
            start = seen[residual]
            word = InfiniteWord(alphabet, tuple(letters[:start]), tuple(letters[start:]))
            return word_class(word)
        if step == max_depth:
            break
        seen[residual] = step
        chosen = alphabet.z
        for b in alphabet.primed:
            if residual[b] >= HALF:
                chosen = b
                break
        letters.append(chosen)
        coords = {c: 2 * v for c, v in residual.coords.items()}
        if chosen != alphabet.z:
            coords[chosen] -= 1
        residual = SparsePoint(alphabet, coords)
    raise DecodeDepthError(f"no periodic tail within {max_depth} steps")
