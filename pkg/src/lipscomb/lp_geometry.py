"""Finitely supported points of l^p(A), p-distances and Hausdorff distance.

Coordinates are exact rationals.  Distances are exact whenever ``p`` is an
integer and the p-th root happens to be rational; otherwise they are floats
with relative error below 1e-12.  Set membership and equality never look
at floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np
from scipy.spatial import cKDTree

from .rational import format_rational, parse_rational, rational_root, root_to_float, to_rational
from .symbolic import Alphabet, AlphabetError

Distance = Union[Fraction, float]

_INT64_SAFE = 1 << 62
# relative slack applied to float distances before exact re-verification
_REL_SLACK = 1e-9


def parse_p(p) -> Union[Fraction, float]:
    """Validate an exponent ``p >= 1``; returns a Fraction when ``p`` is given exactly."""
    if isinstance(p, bool):
        raise TypeError("p must be a number")
    if isinstance(p, str):
        p = parse_rational(p)
    if isinstance(p, (int, Rational)):
        p = Fraction(p)
    elif isinstance(p, float):
        if not math.isfinite(p):
            raise ValueError("p must be finite")
    else:
        raise TypeError(f"unsupported exponent {p!r}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return p


def _integer_exponent(p) -> int | None:
    if isinstance(p, Fraction):
        return int(p) if p.denominator == 1 else None
    return int(p) if float(p).is_integer() else None


def _finish(power_sum: Fraction, p) -> Distance:
    """Take the p-th root of an exact power sum, exactly if possible."""
    k = _integer_exponent(p)
    if k is not None:
        exact = rational_root(power_sum, k)
        if exact is not None:
            return exact
        return root_to_float(power_sum, k)
    return root_to_float(power_sum, float(p))


class SparsePoint:
    """A point of l^p(A) with finitely many nonzero coordinates.

    Coordinates are indexed by the letters of the alphabet other than ``z``;
    missing coordinates are zero and zeros are never stored.
    """

    __slots__ = ("alphabet", "_coords", "_hash")

    def __init__(self, alphabet: Alphabet, coords: Mapping[str, object] | None = None):
        self.alphabet = alphabet
        clean = {}
        for letter, value in (coords or {}).items():
            if letter == alphabet.z:
                raise AlphabetError("points have no coordinate at the distinguished letter")
            if letter not in alphabet:
                raise AlphabetError(f"letter {letter!r} is not in the alphabet")
            value = to_rational(value)
            if value:
                clean[letter] = value
        self._coords = {x: clean[x] for x in alphabet.primed if x in clean}
        self._hash = None

    @classmethod
    def origin(cls, alphabet: Alphabet) -> "SparsePoint":
        return cls(alphabet)

    @classmethod
    def unit(cls, alphabet: Alphabet, letter: str) -> "SparsePoint":
        """``u_letter``; the unit vector, or the origin for ``z``."""
        if letter == alphabet.z:
            return cls(alphabet)
        return cls(alphabet, {letter: 1})

    @property
    def coords(self) -> Mapping[str, Fraction]:
        return MappingProxyType(self._coords)

    @property
    def support(self) -> tuple:
        return tuple(self._coords)

    def __getitem__(self, letter: str) -> Fraction:
        if letter not in self.alphabet or letter == self.alphabet.z:
            raise AlphabetError(f"no coordinate {letter!r}")
        return self._coords.get(letter, Fraction(0))

    def total(self) -> Fraction:
        return sum(self._coords.values(), Fraction(0))

    def dense(self) -> tuple:
        """All coordinates in alphabet order; also the canonical sort key."""
        return tuple(self._coords.get(x, Fraction(0)) for x in self.alphabet.primed)

    def _check(self, other: "SparsePoint") -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetError("points are over different alphabets")

    def __add__(self, other: "SparsePoint") -> "SparsePoint":
        self._check(other)
        out = dict(self._coords)
        for x, v in other._coords.items():
            out[x] = out.get(x, 0) + v
        return SparsePoint(self.alphabet, out)

    def __sub__(self, other: "SparsePoint") -> "SparsePoint":
        self._check(other)
        out = dict(self._coords)
        for x, v in other._coords.items():
            out[x] = out.get(x, 0) - v
        return SparsePoint(self.alphabet, out)

    def scale(self, factor) -> "SparsePoint":
        factor = to_rational(factor)
        return SparsePoint(self.alphabet, {x: v * factor for x, v in self._coords.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoint):
            return NotImplemented
        return self.alphabet == other.alphabet and self._coords == other._coords

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, tuple(self._coords.items())))
        return self._hash

    def __lt__(self, other: "SparsePoint") -> bool:
        self._check(other)
        return self.dense() < other.dense()

    def __repr__(self) -> str:
        inner = ", ".join(f"{x}: {v}" for x, v in self._coords.items())
        return f"SparsePoint({{{inner}}})"

    def to_json(self) -> dict:
        return {"coords": {x: format_rational(v) for x, v in self._coords.items()}}

    @classmethod
    def from_json(cls, alphabet: Alphabet, obj: dict) -> "SparsePoint":
        if not isinstance(obj, dict) or set(obj) != {"coords"} or not isinstance(obj["coords"], dict):
            raise ValueError('point JSON must be {"coords": {letter: "num/den", ...}}')
        coords = {}
        for letter, text in obj["coords"].items():
            coords[letter] = parse_rational(text) if isinstance(text, str) else to_rational(text)
        return cls(alphabet, coords)


def norm_p(x: SparsePoint, p) -> Distance:
    """``(sum |x_a|^p)^(1/p)``."""
    p = parse_p(p)
    if len(x.coords) <= 1:
        # a single coordinate has the same norm for every p
        return sum((abs(v) for v in x.coords.values()), Fraction(0))
    k = _integer_exponent(p)
    if k is not None:
        return _finish(sum((abs(v) ** k for v in x.coords.values()), Fraction(0)), k)
    pf = float(p)
    vals = [abs(v) for v in x.coords.values()]
    if not vals:
        return 0.0
    # rescale by the largest entry so tiny coordinates do not underflow
    top = max(vals)
    s = math.fsum(float(v / top) ** pf for v in vals)
    return float(top) * s ** (1.0 / pf)


def dist_p(x: SparsePoint, y: SparsePoint, p) -> Distance:
    return norm_p(x - y, p)


class PointSet:
    """A finite set of points over one alphabet, stored densely and exactly.

    Every point is a row of integer numerators over one shared positive
    denominator; columns follow the alphabet's coordinate letters.  Rows are
    unique and sorted, which makes the set canonical: two PointSets are equal
    exactly when they hold the same points.
    """

    __slots__ = ("alphabet", "denominator", "numerators", "_points")

    def __init__(self, alphabet: Alphabet, denominator: int, numerators):
        self.alphabet = alphabet
        dim = len(alphabet.primed)
        rows = _as_rows(numerators, dim)
        if rows.shape[0] == 0:
            raise ValueError("a point set must be non-empty")
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        self.denominator, self.numerators = _canonical(int(denominator), rows)
        self._points = None

    @classmethod
    def from_points(cls, points: Iterable[SparsePoint], alphabet: Alphabet | None = None) -> "PointSet":
        points = list(points)
        if not points:
            raise ValueError("a point set must be non-empty")
        alphabet = alphabet or points[0].alphabet
        for x in points:
            if x.alphabet != alphabet:
                raise AlphabetError("points are over different alphabets")
        den = 1
        for x in points:
            for v in x.coords.values():
                den = math.lcm(den, v.denominator)
        rows = [[int(v * den) for v in x.dense()] for x in points]
        return cls(alphabet, den, rows)

    @property
    def dim(self) -> int:
        return self.numerators.shape[1]

    @property
    def points(self) -> tuple:
        if self._points is None:
            letters = self.alphabet.primed
            d = self.denominator
            self._points = tuple(
                SparsePoint(self.alphabet, {x: Fraction(int(n), d) for x, n in zip(letters, row) if n})
                for row in self.numerators
            )
        return self._points

    def __len__(self) -> int:
        return self.numerators.shape[0]

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x: SparsePoint) -> bool:
        return x in set(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.denominator == other.denominator
            and self.numerators.shape == other.numerators.shape
            and bool(np.all(self.numerators == other.numerators))
        )

    def __hash__(self):
        return hash((self.alphabet, self.denominator, len(self)))

    def __repr__(self) -> str:
        return f"PointSet({len(self)} points over {''.join(self.alphabet.primed)!r})"

    def as_float(self) -> np.ndarray:
        return _rows_to_float(self.numerators, self.denominator)

    def union(self, other: "PointSet") -> "PointSet":
        if self.alphabet != other.alphabet:
            raise AlphabetError("point sets are over different alphabets")
        den = math.lcm(self.denominator, other.denominator)
        a = _rescale(self.numerators, den // self.denominator)
        b = _rescale(other.numerators, den // other.denominator)
        return PointSet(self.alphabet, den, _vstack(a, b))

    def to_csv_rows(self, letters: Iterable[str] | None = None) -> list[list[str]]:
        """Header plus one row per point with ``num/den`` cells."""
        letters = tuple(letters) if letters is not None else self.alphabet.primed
        unknown = [x for x in letters if x not in self.alphabet.primed]
        if unknown:
            raise AlphabetError(f"CSV columns not in the alphabet: {unknown}")
        rows = [list(letters)]
        for x in self.points:
            extra = [c for c in x.support if c not in letters]
            if extra:
                raise AlphabetError(f"point has nonzero coordinates outside the CSV columns: {extra}")
            rows.append([format_rational(x[c]) for c in letters])
        return rows


def _as_rows(numerators, dim: int) -> np.ndarray:
    if isinstance(numerators, np.ndarray):
        rows = numerators
    else:
        rows = list(numerators)
        big = any(abs(int(v)) >= _INT64_SAFE for r in rows for v in r)
        rows = np.array([[int(v) for v in r] for r in rows], dtype=object if big else np.int64)
    if rows.ndim != 2 or rows.shape[1] != dim:
        rows = rows.reshape(-1, dim)
    return rows


def _canonical(den: int, rows: np.ndarray) -> tuple[int, np.ndarray]:
    g = den
    if rows.dtype == object:
        for v in rows.flat:
            g = math.gcd(g, int(v))
    else:
        g = math.gcd(g, int(np.gcd.reduce(rows, axis=None))) if rows.size else g
    if g > 1:
        den //= g
        rows = rows // g
    if rows.dtype == object:
        uniq = sorted(set(tuple(int(v) for v in r) for r in rows))
        if all(abs(v) < _INT64_SAFE for r in uniq for v in r):
            rows = np.array(uniq, dtype=np.int64).reshape(-1, rows.shape[1])
        else:
            rows = np.array(uniq, dtype=object).reshape(-1, rows.shape[1])
    else:
        rows = np.unique(rows, axis=0)
    return den, rows


def _rescale(rows: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return rows
    if rows.dtype != object:
        top = int(np.abs(rows).max()) if rows.size else 0
        if factor < _INT64_SAFE and top * factor < _INT64_SAFE:
            return rows * factor
        rows = rows.astype(object)
    return rows * factor


def _vstack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.vstack([a.astype(object), b.astype(object)])
    return np.vstack([a, b])


def _rows_to_float(rows: np.ndarray, den: int) -> np.ndarray:
    if rows.dtype != object and den < (1 << 53):
        return rows.astype(np.float64) / float(den)
    return np.array([[float(Fraction(int(v), den)) for v in r] for r in rows], dtype=np.float64).reshape(rows.shape)


def _power_sums(a_row: np.ndarray, b_rows: np.ndarray, k: int) -> np.ndarray:
    """Exact ``sum |a - b|^k`` for one row against many, as integers."""
    diff = b_rows - a_row
    if diff.dtype != object:
        top = int(np.abs(diff).max()) if diff.size else 0
        if diff.shape[1] * top**k < _INT64_SAFE:
            return np.sum(np.abs(diff) ** k, axis=1)
        diff = diff.astype(object)
    return np.array([sum(abs(int(v)) ** k for v in r) for r in diff], dtype=object)


def _directed_exact(a_rows, b_rows, k: int, a_float, b_float, tree) -> int:
    """``max over a of min over b`` of the exact integer power sums."""
    approx, _ = tree.query(a_float, p=k)
    approx = np.atleast_1d(approx)
    scale = max(float(np.abs(a_float).max()), float(np.abs(b_float).max()), 1.0)
    abs_err = 64 * a_float.shape[1] * np.finfo(float).eps * scale
    top = float(approx.max())
    cutoff = top - 2 * (_REL_SLACK * top + abs_err)
    best = 0
    for i in np.nonzero(approx >= cutoff)[0]:
        radius = approx[i] * (1 + _REL_SLACK) + 2 * abs_err
        near = tree.query_ball_point(a_float[i], radius, p=k)
        cand = b_rows[near] if near else b_rows
        val = int(_power_sums(a_rows[i], cand, k).min())
        if val > best:
            best = val
    return best


def _directed_brute(a_rows, b_rows, k: int) -> int:
    best = 0
    for row in a_rows:
        val = int(_power_sums(row, b_rows, k).min())
        if val > best:
            best = val
    return best


def hausdorff(S: PointSet, T: PointSet, p, method: str = "auto") -> Distance:
    """Hausdorff-Pompeiu distance between two finite point sets under ``d_p``.

    ``method`` is ``"brute"`` (all pairs), ``"kdtree"`` (nearest-neighbour
    pruning, then exact re-verification of the candidates) or ``"auto"``.
    Both give the same value for integer ``p``.
    """
    p = parse_p(p)
    if S.alphabet != T.alphabet:
        raise AlphabetError("point sets are over different alphabets")
    if len(S) == 0 or len(T) == 0:
        raise ValueError("Hausdorff distance needs non-empty sets")
    if S == T:
        return Fraction(0)
    if method not in ("auto", "brute", "kdtree"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "brute" if len(S) * len(T) <= 50_000 else "kdtree"

    den = math.lcm(S.denominator, T.denominator)
    a = _rescale(S.numerators, den // S.denominator)
    b = _rescale(T.numerators, den // T.denominator)
    k = _integer_exponent(p)

    if k is None:
        af, bf = _rows_to_float(a, den), _rows_to_float(b, den)
        pf = float(p)
        if method == "brute":
            d1 = max(float(np.min(np.sum(np.abs(bf - r) ** pf, axis=1))) for r in af)
            d2 = max(float(np.min(np.sum(np.abs(af - r) ** pf, axis=1))) for r in bf)
            return max(d1, d2) ** (1.0 / pf)
        d1 = float(np.max(cKDTree(bf).query(af, p=pf)[0]))
        d2 = float(np.max(cKDTree(af).query(bf, p=pf)[0]))
        return max(d1, d2)

    if method == "brute":
        top = max(_directed_brute(a, b, k), _directed_brute(b, a, k))
    else:
        af, bf = _rows_to_float(a, den), _rows_to_float(b, den)
        top = max(
            _directed_exact(a, b, k, af, bf, cKDTree(bf)),
            _directed_exact(b, a, k, bf, af, cKDTree(af)),
        )
    return _finish(Fraction(top, den**k), k)
