"""Finite-horizon diagnostics relating l^p convergence to convergence of words.

For a limit word that is not eventually constant, a sequence converges in
l^p exactly when its words converge letter by letter.  For a limit
``u·a·b^∞`` (with ``|u| >= 1``) l^p convergence only forces the words to
eventually look like ``u·a·b…b`` or ``u·b·a…a`` on every finite window.
Everything here inspects a finite list, so every verdict is evidence about
the supplied indices, never a claim about a limit.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .embedding import embed
from .lp_geometry import Distance, dist_p, parse_p
from .rational import format_rational
from .symbolic import AlphabetError, InfiniteWord, baire_dist

DEFAULT_MAX_SEQUENCE = 10**4
DEFAULT_M_MAX_CAP = 64


class CapExceededError(ValueError):
    pass


class CaseKind(str, enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class LimitCase:
    kind: CaseKind
    n0: Optional[int] = None
    a: Optional[str] = None
    b: Optional[str] = None
    reason: Optional[str] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is CaseKind.CASE_II:
            out.update(n0=self.n0, a=self.a, b=self.b)
        if self.kind is CaseKind.DEGENERATE:
            out["reason"] = self.reason
        return out


def classify(alpha: InfiniteWord) -> LimitCase:
    if not alpha.is_eventually_constant():
        return LimitCase(CaseKind.CASE_I)
    if not alpha.prefix:
        return LimitCase(CaseKind.DEGENERATE, reason="constant word")
    # canonical storage puts the last letter before the constant run at the end of the prefix
    n0 = len(alpha.prefix)
    if n0 == 1:
        return LimitCase(CaseKind.DEGENERATE, reason="head-identified word")
    return LimitCase(CaseKind.CASE_II, n0=n0, a=alpha.prefix[-1], b=alpha.tail[0])


def _agrees(word: InfiniteWord, alpha: InfiniteWord, m: int) -> bool:
    return all(word.letter(k) == alpha.letter(k) for k in range(1, m + 1))


MIN_SUPPORT = 2


def _least_tail_index(flags: Sequence[bool], min_support: int = MIN_SUPPORT) -> Optional[int]:
    """Least 1-based index from which every flag is true, or None.

    The final run of true flags must hold at least ``min_support`` members;
    a lone last member is not taken as evidence of stabilisation.
    """
    if not flags or not flags[-1]:
        return None
    i = len(flags)
    while i > 1 and flags[i - 2]:
        i -= 1
    if len(flags) - i + 1 < min(min_support, len(flags)):
        return None
    return i


def stabilization_rank(
    seq: Sequence[InfiniteWord], alpha: InfiniteWord, m: int, min_support: int = MIN_SUPPORT
) -> Optional[int]:
    """Least index after which every member agrees with ``alpha`` on its first ``m`` letters.

    None when no such index exists, or when the agreeing run at the end of the
    list is shorter than ``min_support`` members.
    """
    if m < 1:
        raise ValueError("m must be positive")
    return _least_tail_index([_agrees(w, alpha, m) for w in seq], min_support)


def match_window(word: InfiniteWord, alpha: InfiniteWord, case: LimitCase, m: int) -> Optional[str]:
    """Which of the two window shapes ``word`` has on positions ``1..m``.

    ``"alpha"``: ``u, a, b, ..., b``; ``"beta"``: ``u, b, a, ..., a``; None if neither.
    """
    n0, a, b = case.n0, case.a, case.b
    if not _agrees(word, alpha, n0 - 1):
        return None
    head = word.letter(n0)
    rest = {word.letter(k) for k in range(n0 + 1, m + 1)}
    if head == a and rest <= {b}:
        return "alpha"
    if head == b and rest <= {a}:
        return "beta"
    return None


def holder_conjugate(p) -> float:
    p = float(p)
    return math.inf if p == 1 else p / (p - 1)


@dataclass
class WindowCheck:
    m: int
    l_m: Optional[int]
    patterns: list
    mismatches: int  # members matching neither shape after the first one that matched
    holder_threshold: float  # 2^(-1/q) / 2^(m+1)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "l_m": self.l_m,
            "patterns": self.patterns,
            "mismatches": self.mismatches,
            "holder_threshold": self.holder_threshold,
        }


@dataclass
class ConvergenceReport:
    p: object
    holder_q: float
    case: LimitCase
    lp_distances: list
    baire_distances: list
    lp_ranks: dict  # m -> least index after which every distance is < 2^-m
    stabilization_ranks: dict  # m -> n_m
    window_checks: list = field(default_factory=list)
    lp_converges: bool = False
    na_converges: bool = False
    windows_hold: Optional[bool] = None
    consistent: Optional[bool] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "horizon": len(self.lp_distances),
            "finite_horizon_evidence": True,
            "p": str(self.p),
            "holder_q": "inf" if math.isinf(self.holder_q) else self.holder_q,
            "case": self.case.to_json(),
            "lp_converges": {
                "verdict": self.lp_converges,
                "distances": [_render(d) for d in self.lp_distances],
                "ranks": {str(m): r for m, r in self.lp_ranks.items()},
            },
            "na_converges": {
                "verdict": self.na_converges,
                "distances": [format_rational(d) for d in self.baire_distances],
            },
            "stabilization_ranks": {str(m): r for m, r in self.stabilization_ranks.items()},
            "window_checks": [w.to_json() for w in self.window_checks],
            "windows_hold": self.windows_hold,
            "consistent": self.consistent,
            "notes": self.notes,
        }


def _render(d: Distance):
    return format_rational(d) if isinstance(d, Fraction) else repr(float(d))


def _below(d: Distance, m: int) -> bool:
    threshold = Fraction(1, 2**m)
    return d < threshold if isinstance(d, Fraction) else d < float(threshold)


def _caps() -> tuple[int, int]:
    return (
        int(os.environ.get("LIPSCOMB_MAX_SEQUENCE", DEFAULT_MAX_SEQUENCE)),
        int(os.environ.get("LIPSCOMB_M_MAX", DEFAULT_M_MAX_CAP)),
    )


def check_sequence(seq: Sequence[InfiniteWord], alpha: InfiniteWord, p, m_max: int) -> ConvergenceReport:
    """Compare l^p and word convergence of ``seq`` towards ``alpha`` over the supplied indices.

    ``lp_converges`` holds when, for every ``m <= m_max``, some index exists
    after which all l^p distances are below ``2^-m``; ``na_converges`` is the
    same with agreement on the first ``m`` letters.  For a case-ii limit the
    window shapes are checked for every ``m`` in ``n0+2 .. m_max``.
    """
    seq = list(seq)
    max_len, m_cap = _caps()
    if not seq:
        raise ValueError("the sequence is empty")
    if len(seq) > max_len:
        raise CapExceededError(f"sequence has {len(seq)} members, cap is {max_len}")
    if not 1 <= m_max <= m_cap:
        raise CapExceededError(f"m_max must be in 1..{m_cap}, got {m_max}")
    for w in seq:
        if w.alphabet != alpha.alphabet:
            raise AlphabetError("sequence and limit use different alphabets")
    p = parse_p(p)

    x = embed(alpha)
    lp = [dist_p(embed(w), x, p) for w in seq]
    na = [baire_dist(w, alpha) for w in seq]
    case = classify(alpha)

    lp_ranks = {m: _least_tail_index([_below(d, m) for d in lp]) for m in range(1, m_max + 1)}
    ranks = {m: stabilization_rank(seq, alpha, m) for m in range(1, m_max + 1)}
    report = ConvergenceReport(
        p=p,
        holder_q=holder_conjugate(p),
        case=case,
        lp_distances=lp,
        baire_distances=na,
        lp_ranks=lp_ranks,
        stabilization_ranks=ranks,
        lp_converges=all(r is not None for r in lp_ranks.values()),
        na_converges=all(r is not None for r in ranks.values()),
    )

    if case.kind is CaseKind.CASE_I:
        report.consistent = report.lp_converges == report.na_converges
    elif case.kind is CaseKind.CASE_II:
        q = report.holder_q
        scale = 1.0 if math.isinf(q) else 2 ** (-1 / q)
        for m in range(case.n0 + 2, m_max + 1):
            patterns = [match_window(w, alpha, case, m) for w in seq]
            l_m = _least_tail_index([pat is not None for pat in patterns])
            first = next((i for i, pat in enumerate(patterns) if pat is not None), len(patterns))
            mismatches = sum(pat is None for pat in patterns[first:])
            report.window_checks.append(
                WindowCheck(m, l_m, patterns, mismatches, scale / 2 ** (m + 1))
            )
        if not report.window_checks:
            report.notes.append(f"m_max={m_max} leaves no window beyond n0+1={case.n0 + 1}")
        report.windows_hold = all(w.l_m is not None for w in report.window_checks)
        report.consistent = report.lp_converges == report.windows_hold
    else:
        report.notes.append(f"degenerate limit ({case.reason}); case analysis skipped")
    return report
