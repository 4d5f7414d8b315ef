"""Alphabets, eventually periodic words and the Lipscomb identification.

An infinite word is stored as ``prefix`` followed by a repeating ``tail``.
Words are always kept in canonical form (primitive tail, shortest prefix)
so that two words denote the same sequence exactly when they compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .rational import geometric_tail

FiniteWord = tuple  # tuple[str, ...]; the empty tuple is the empty word


class AlphabetError(ValueError):
    """A letter is not in the alphabet, or two objects use different alphabets."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite alphabet with a distinguished letter ``z``.

    The letters other than ``z`` index the coordinates of the ambient
    sequence space; the order of ``letters`` is used for every tie-break.
    """

    letters: tuple
    z: str
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not all(isinstance(x, str) and x for x in letters):
            raise AlphabetError("letters must be non-empty strings")
        if len(set(letters)) != len(letters):
            raise AlphabetError("letters must be distinct")
        if self.z not in letters:
            raise AlphabetError(f"distinguished letter {self.z!r} is not in the alphabet")
        if len(letters) < 2:
            raise AlphabetError("the alphabet needs at least one letter besides z")
        object.__setattr__(self, "_rank", {x: i for i, x in enumerate(letters)})

    @classmethod
    def from_letters(cls, letters: Iterable[str], z: str = "z") -> "Alphabet":
        return cls(tuple(letters), z)

    @classmethod
    def from_json(cls, obj: dict) -> "Alphabet":
        if not isinstance(obj, dict) or set(obj) != {"letters", "z"}:
            raise AlphabetError('alphabet JSON must be {"letters": [...], "z": ...}')
        if not isinstance(obj["letters"], list):
            raise AlphabetError("alphabet letters must be a list")
        return cls(tuple(obj["letters"]), obj["z"])

    def to_json(self) -> dict:
        return {"letters": list(self.letters), "z": self.z}

    @property
    def primed(self) -> tuple:
        """The coordinate letters, i.e. every letter except ``z`` in alphabet order."""
        return tuple(x for x in self.letters if x != self.z)

    def __contains__(self, letter) -> bool:
        return letter in self._rank

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def rank(self, letter: str) -> int:
        try:
            return self._rank[letter]
        except KeyError:
            raise AlphabetError(f"letter {letter!r} is not in the alphabet") from None

    def check_word(self, letters: Iterable[str]) -> FiniteWord:
        word = tuple(letters)
        for x in word:
            if x not in self._rank:
                raise AlphabetError(f"letter {x!r} is not in the alphabet")
        return word

    def word(self, prefix: Iterable[str] = (), tail: Iterable[str] = None) -> "InfiniteWord":
        """Build ``prefix · tail^∞``; the tail defaults to ``z``."""
        if tail is None:
            tail = (self.z,)
        return InfiniteWord(self, tuple(prefix), tuple(tail))

    def parse(self, text: str) -> "InfiniteWord":
        """Parse the shorthand ``"ca(b)"`` for ``c·a·b^∞``.

        Only usable when every letter is a single character.
        """
        if text.count("(") != 1 or not text.endswith(")"):
            raise ValueError(f"expected 'prefix(tail)', got {text!r}")
        prefix, tail = text[:-1].split("(")
        return self.word(tuple(prefix), tuple(tail))


def _primitive_root(block: tuple) -> tuple:
    n = len(block)
    for d in range(1, n + 1):
        if n % d == 0 and block[:d] * (n // d) == block:
            return block[:d]
    return block


@dataclass(frozen=True)
class InfiniteWord:
    """The eventually periodic sequence ``prefix · tail · tail · ...``."""

    alphabet: Alphabet
    prefix: tuple
    tail: tuple

    def __post_init__(self):
        prefix = self.alphabet.check_word(self.prefix)
        tail = self.alphabet.check_word(self.tail)
        if not tail:
            raise ValueError("the repeating tail must be non-empty")
        tail = _primitive_root(tail)
        # absorb trailing prefix letters into a rotation of the tail
        while prefix and prefix[-1] == tail[-1]:
            prefix = prefix[:-1]
            tail = tail[-1:] + tail[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    @property
    def period(self) -> int:
        return len(self.tail)

    def letter(self, k: int) -> str:
        """The k-th letter, 1-indexed."""
        if k < 1:
            raise IndexError("positions start at 1")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.tail[(k - len(self.prefix) - 1) % len(self.tail)]

    def __iter__(self) -> Iterator[str]:
        yield from self.prefix
        while True:
            yield from self.tail

    def prepend(self, letters: Sequence[str] | str) -> "InfiniteWord":
        if isinstance(letters, str):
            letters = (letters,)
        return InfiniteWord(self.alphabet, tuple(letters) + self.prefix, self.tail)

    def is_eventually_constant(self) -> bool:
        return len(self.tail) == 1

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "tail": list(self.tail)}

    @classmethod
    def from_json(cls, alphabet: Alphabet, obj: dict) -> "InfiniteWord":
        if not isinstance(obj, dict) or set(obj) != {"prefix", "tail"}:
            raise ValueError('word JSON must be {"prefix": [...], "tail": [...]}')
        if not isinstance(obj["prefix"], list) or not isinstance(obj["tail"], list):
            raise ValueError("prefix and tail must be lists of letters")
        return cls(alphabet, tuple(obj["prefix"]), tuple(obj["tail"]))

    def __str__(self) -> str:
        sep = "" if all(len(x) == 1 for x in self.alphabet.letters) else " "
        return sep.join(self.prefix) + "(" + sep.join(self.tail) + ")"

    def __repr__(self) -> str:
        return f"InfiniteWord({str(self)!r})"


def _check_same(alpha: InfiniteWord, beta: InfiniteWord) -> None:
    if alpha.alphabet != beta.alphabet:
        raise AlphabetError("words are over different alphabets")


def _window(alpha: InfiniteWord, beta: InfiniteWord) -> tuple[int, int]:
    """Pre-periodic length and joint period of a pair of words."""
    pre = max(len(alpha.prefix), len(beta.prefix))
    period = math.lcm(len(alpha.tail), len(beta.tail))
    return pre, period


def prefix_of(alpha: InfiniteWord, m: int) -> FiniteWord:
    """The first ``m`` letters of ``alpha``."""
    if m < 1:
        raise ValueError("m must be positive")
    return tuple(alpha.letter(k) for k in range(1, m + 1))


def first_difference(alpha: InfiniteWord, beta: InfiniteWord) -> int | None:
    """Index of the first differing letter, or None for equal sequences."""
    _check_same(alpha, beta)
    if alpha == beta:
        return None
    pre, period = _window(alpha, beta)
    for k in range(1, pre + period + 1):
        if alpha.letter(k) != beta.letter(k):
            return k
    # canonical forms differ, so the sequences must differ inside the window
    raise AssertionError("unreachable: distinct canonical words agree on a full window")


def baire_dist(alpha: InfiniteWord, beta: InfiniteWord) -> Fraction:
    """First-difference metric: ``1/k`` for the first differing index ``k``."""
    k = first_difference(alpha, beta)
    return Fraction(0) if k is None else Fraction(1, k)


def lambda_dist(alpha: InfiniteWord, beta: InfiniteWord) -> Fraction:
    """``sum over k of [alpha_k != beta_k] / 3^k``, summed exactly.

    The pre-periodic part is a finite sum; beyond it both words repeat with
    the joint period ``L``, so the rest is one window scaled by ``1/(1 - 3^-L)``.
    """
    _check_same(alpha, beta)
    if alpha == beta:
        return Fraction(0)
    pre, period = _window(alpha, beta)
    head = sum(
        (Fraction(1, 3**k) for k in range(1, pre + 1) if alpha.letter(k) != beta.letter(k)),
        Fraction(0),
    )
    window = sum(
        (
            Fraction(1, 3**k)
            for k in range(pre + 1, pre + period + 1)
            if alpha.letter(k) != beta.letter(k)
        ),
        Fraction(0),
    )
    return head + window / (1 - Fraction(1, 3**period))


def lambda_dist_truncated(alpha: InfiniteWord, beta: InfiniteWord, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum over the first ``terms`` positions and its error bound ``3^-terms / 2``.

    Meant for display; :func:`lambda_dist` is exact.
    """
    _check_same(alpha, beta)
    total = sum(
        (Fraction(1, 3**k) for k in range(1, terms + 1) if alpha.letter(k) != beta.letter(k)),
        Fraction(0),
    )
    return total, geometric_tail(3, terms + 1)


@dataclass(frozen=True)
class WordClass:
    """A point of Lipscomb's space: one word, or an identified pair of words."""

    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) not in (1, 2):
            raise ValueError("a word class has one or two members")

    @property
    def representative(self) -> InfiniteWord:
        return self.members[0]

    def __contains__(self, word) -> bool:
        return word in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json(self) -> dict:
        return {"members": [w.to_json() for w in self.members]}


def identified_partner(alpha: InfiniteWord) -> InfiniteWord | None:
    """For ``u·a·b^∞`` with ``a != b`` return ``u·b·a^∞``; otherwise None."""
    if len(alpha.tail) != 1 or not alpha.prefix:
        return None
    # canonical form guarantees prefix[-1] != tail[0]
    u, a, b = alpha.prefix[:-1], alpha.prefix[-1], alpha.tail[0]
    return InfiniteWord(alpha.alphabet, u + (b,), (a,))


def word_class(alpha: InfiniteWord) -> WordClass:
    partner = identified_partner(alpha)
    if partner is None:
        return WordClass((alpha,))
    k = len(alpha.prefix)
    if alpha.alphabet.rank(alpha.letter(k)) < alpha.alphabet.rank(partner.letter(k)):
        return WordClass((alpha, partner))
    return WordClass((partner, alpha))


def equivalent(alpha: InfiniteWord, beta: InfiniteWord) -> bool:
    """True when both words name the same point of Lipscomb's space."""
    _check_same(alpha, beta)
    return alpha == beta or identified_partner(alpha) == beta
