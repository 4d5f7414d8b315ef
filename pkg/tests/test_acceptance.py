"""Exit criteria, one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from lipscomb import (
    Alphabet,
    CaseKind,
    InfiniteWord,
    PointSet,
    SparsePoint,
    apply_map,
    baire_dist,
    check_sequence,
    classify,
    continuity_bound,
    decode,
    dist_p,
    embed,
    hausdorff,
    iterate_with_telemetry,
    iterate_hutchinson,
    lambda_dist,
    norm_p,
    prefix_of,
    stabilization_rank,
)
from lipscomb.ifs import random_simplex_points

FIVE = Alphabet(("z", "a", "b", "c", "d"), "z")
ZAB = Alphabet(("z", "a", "b"), "z")
ZABC = Alphabet(("z", "a", "b", "c"), "z")


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, elapsed, limit, detail=""):
        verdict = "PASS" if ok and elapsed < limit else "FAIL"
        with capsys.disabled():
            print(f"\n[{verdict}] criterion {number}: {title} ({elapsed:.2f}s / limit {limit}s) {detail}")
        assert ok, f"criterion {number} failed: {detail}"
        assert elapsed < limit, f"criterion {number} too slow: {elapsed:.2f}s"

    return emit


def random_word(rng, alphabet, max_prefix, max_period):
    pre = tuple(rng.choice(alphabet.letters) for _ in range(rng.randint(0, max_prefix)))
    tail = tuple(rng.choice(alphabet.letters) for _ in range(rng.randint(1, max_period)))
    return InfiniteWord(alphabet, pre, tail)


def test_01_shift_identity(report):
    rng = random.Random(1)
    words = [random_word(rng, FIVE, 12, 6) for _ in range(1000)]
    t = time.perf_counter()
    failures = 0
    for w in words:
        x = embed(w)
        for a in FIVE.letters:
            if embed(w.prepend(a)) != apply_map(a, x):
                failures += 1
    elapsed = time.perf_counter() - t
    report(1, "shift identity, 1000 words x 5 letters", failures == 0, elapsed, 2, f"failures={failures}")


def test_02_quotient_soundness(report):
    rng = random.Random(2)
    pairs = []
    for _ in range(500):
        u = tuple(rng.choice(FIVE.letters) for _ in range(rng.randint(0, 20)))
        a, b = rng.sample(FIVE.letters, 2)
        pairs.append((InfiniteWord(FIVE, u + (a,), (b,)), InfiniteWord(FIVE, u + (b,), (a,))))
    t = time.perf_counter()
    failures = sum(embed(x) != embed(y) for x, y in pairs)
    elapsed = time.perf_counter() - t
    report(2, "identified pairs embed identically, 500 pairs", failures == 0, elapsed, 1, f"failures={failures}")


def test_03_constructive_injectivity(report):
    rng = random.Random(3)
    words = [random_word(rng, FIVE, 16, 6) for _ in range(500)]
    t = time.perf_counter()
    failures = sum(w not in decode(embed(w), 64) for w in words)
    elapsed = time.perf_counter() - t
    report(3, "decode(embed(w), 64) contains w, 500 words", failures == 0, elapsed, 5, f"failures={failures}")


def test_04_attractor_approximation(report):
    seed = PointSet.from_points([SparsePoint.origin(ZAB)])
    t = time.perf_counter()
    reference = iterate_hutchinson("zab", seed, 12)
    h = {}
    for n in range(1, 9):
        h[n] = hausdorff(iterate_hutchinson("zab", seed, n), reference, 2)
    elapsed = time.perf_counter() - t
    bound_ok = all(h[n] <= Fraction(1, 2**n) + Fraction(1, 2**12) for n in h)
    ratios = [float(h[n + 1]) / float(h[n]) for n in range(1, 8)]
    ratio_ok = all(0.45 <= r <= 0.55 for r in ratios)
    detail = f"points={len(reference)} h8={h[8]} ratios={[round(r, 4) for r in ratios]}"
    report(4, "Hutchinson iterates approach the depth-12 reference", bound_ok and ratio_ok and len(reference) <= 531441, elapsed, 30, detail)


def test_05_seed_independence(report):
    rng = random.Random(5)
    S = random_simplex_points(ZAB, 4, rng)
    T = random_simplex_points(ZAB, 4, rng)
    t = time.perf_counter()
    h0 = hausdorff(S, T, 2)
    worst = 0.0
    ok = True
    for n in range(1, 11):
        hn = hausdorff(iterate_hutchinson("zab", S, n), iterate_hutchinson("zab", T, n), 2)
        limit = float(h0) / 2**n * (1 + 1e-9)
        ok &= float(hn) <= limit
        worst = max(worst, float(hn) * 2**n / float(h0))
    elapsed = time.perf_counter() - t
    report(5, "two random seeds contract together", ok, elapsed, 10, f"h0={float(h0):.6g} worst 2^n h_n/h0={worst:.6f}")


def test_06_p_independence(report):
    rng = random.Random(6)
    seed = PointSet.from_points([SparsePoint.origin(ZABC)])
    words = [random_word(rng, FIVE, 10, 5) for _ in range(200)]
    ps = [1, Fraction(3, 2), 2, 3]
    t = time.perf_counter()
    csvs, embeds, norms = [], [], []
    probe = SparsePoint(ZABC, {"a": Fraction(1, 2), "b": Fraction(1, 4)})
    for p in ps:
        final = None
        for final, _ in iterate_with_telemetry("zabc", seed, 5, p):
            pass
        csvs.append("\n".join(",".join(r) for r in final.to_csv_rows()).encode())
        embeds.append(json.dumps([embed(w).to_json() for w in words]).encode())
        norms.append(float(norm_p(probe, p)))
    elapsed = time.perf_counter() - t
    same = all(c == csvs[0] for c in csvs) and all(e == embeds[0] for e in embeds)
    differ = len(set(norms)) == len(norms)
    report(6, "point data identical for p in {1, 1.5, 2, 3}", same and differ, elapsed, 5, f"norms={[round(v, 6) for v in norms]}")


def case_two_sequence(count):
    seq = []
    for n in range(1, count + 1):
        body = ("c", "a") + ("b",) * n if n % 2 == 0 else ("c", "b") + ("a",) * n
        seq.append(ZABC.word(body, ("z",)))
    return seq


def test_07_case_two(report):
    alpha = ZABC.word(("c", "a"), ("b",))
    seq = case_two_sequence(40)
    t = time.perf_counter()
    problems = []
    x = embed(alpha)
    for p in (1, 2, 3):
        for n, w in enumerate(seq, 1):
            if dist_p(embed(w), x, p) != Fraction(1, 2 ** (n + 2)):
                problems.append(f"dist p={p} n={n}")
    for n, w in enumerate(seq, 1):
        if n % 2 and baire_dist(w, alpha) != Fraction(1, 2):
            problems.append(f"baire n={n}")
    case = classify(alpha)
    if case.kind is not CaseKind.CASE_II or case.n0 != 2:
        problems.append(f"classify={case}")
    rep = check_sequence(seq, alpha, 2, 12)
    for check in rep.window_checks:
        if check.l_m is None or check.mismatches:
            problems.append(f"window m={check.m}")
            continue
        for n in range(check.l_m, len(seq) + 1):
            want = "alpha" if n % 2 == 0 else "beta"
            if check.patterns[n - 1] != want:
                problems.append(f"pattern m={check.m} n={n}")
    if not (rep.lp_converges and not rep.na_converges and rep.consistent):
        problems.append("verdicts")
    elapsed = time.perf_counter() - t
    report(7, "case ii sequence converges in l^p but not letterwise", not problems, elapsed, 2,
           f"windows m=4..12, problems={problems[:3]}")


def test_08_case_one(report):
    alpha = ZABC.word((), ("a", "b"))
    seq = [ZABC.word(prefix_of(alpha, n), ("z",)) for n in range(1, 31)]
    t = time.perf_counter()
    x = embed(alpha)
    problems = []
    for n, w in enumerate(seq, 1):
        for p in (1, 2, 3):
            d = dist_p(embed(w), x, p)
            if not float(d) <= continuity_bound(n):
                problems.append(f"dist p={p} n={n}")
        if baire_dist(w, alpha) != Fraction(1, n + 1):
            problems.append(f"baire n={n}")
    for m in range(1, 17):
        if stabilization_rank(seq, alpha, m) is None:
            problems.append(f"rank m={m}")
    elapsed = time.perf_counter() - t
    report(8, "case i sequence: both metrics vanish", not problems, elapsed, 1, f"problems={problems[:3]}")


def test_09_metric_window(report):
    rng = random.Random(9)
    pairs = []
    for _ in range(300):
        k = rng.randint(1, 25)
        common = tuple(rng.choice(FIVE.letters) for _ in range(k - 1))
        a, b = rng.sample(FIVE.letters, 2)
        ta = random_word(rng, FIVE, 6, 4)
        tb = random_word(rng, FIVE, 6, 4)
        pairs.append((k, ta.prepend(common + (a,)), tb.prepend(common + (b,))))
    t = time.perf_counter()
    failures = 0
    for k, x, y in pairs:
        d = lambda_dist(x, y)
        ok = Fraction(1, 3**k) <= d <= Fraction(1, 2 * 3 ** (k - 1)) and baire_dist(x, y) == Fraction(1, k)
        failures += not ok
    elapsed = time.perf_counter() - t
    report(9, "lambda metric inside the Baire window, 300 pairs", failures == 0, elapsed, 1, f"failures={failures}")
