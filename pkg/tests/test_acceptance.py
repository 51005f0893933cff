"""Acceptance gate: one test per criterion, each reported as a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py`` (the summary lines are
printed at the end of the session) or ``python3 tests/test_acceptance.py``.
"""

import json
import random
import subprocess
import sys
import time
from collections import Counter

import pytest

from permclass.checks import leading_one_patterns, naive_partition, subsets_of_s3
from permclass.classes import enumerate_classes
from permclass.erdos import es_pattern_set, normalize_prefix_chain, verify_es_theorem, verify_lexmin_bound
from permclass.harness import SUITES, FormulaId, formula_value, run_experiment
from permclass.perm import Permutation, all_permutations, identity, parity, pattern_of
from permclass.patterns import ReplacementSet, apply_move, occurrences, rotation_set
from permclass.pseudo import (PseudoPermutation, _all_words, enumerate_pseudo_classes,
                              pseudo_parity, pseudo_rotation_neighbors, rotational_profile)


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile (or load from the on-disk cache) before any timed section
    enumerate_classes(4, ReplacementSet.of("123", "321"))


def test_01_rotational_counterexample(criterion):
    with criterion("1 rotations of 1324: f(6)=2, f(7)=1, < 10 s") as c:
        t0 = time.perf_counter()
        pi = rotation_set(Permutation.parse("1324"))
        f6 = enumerate_classes(6, pi).class_count_nontrivial
        f7 = enumerate_classes(7, pi).class_count_nontrivial
        elapsed = time.perf_counter() - t0
        c.detail = f"f(6)={f6} f(7)={f7}"
        assert (f6, f7) == (2, 1)
        assert elapsed < 10


def test_02_cutoff_bound_all_of_s4(criterion):
    with criterion("2 f(7)=1 for every m in S_4, < 5 min") as c:
        t0 = time.perf_counter()
        bad = [str(m) for m in all_permutations(4) if rotational_profile(m, 7).f[7] != 1]
        elapsed = time.perf_counter() - t0
        c.detail = f"24 patterns, {len(bad)} failures"
        assert not bad, bad
        assert elapsed < 300


def test_03_two_pseudo_classes(criterion):
    with criterion("3 two pure pseudo-classes, m in 1xxx, n=5..9, < 1 min") as c:
        t0 = time.perf_counter()
        bad = []
        for m in leading_one_patterns(4):
            for n in range(5, 10):
                part = enumerate_pseudo_classes(n, m)
                if part.class_count != 2 or not part.parity_pure:
                    bad.append((str(m), n, part.class_count))
        elapsed = time.perf_counter() - t0
        c.detail = f"30 cases, {len(bad)} failures"
        assert not bad, bad
        assert elapsed < 60


def test_04_pseudo_parity_invariance(criterion):
    with criterion("4 pseudo-parity invariant, c=4, n<=7, exhaustive") as c:
        moves = violations = 0
        for m in leading_one_patterns(4):
            for n in range(5, 8):
                for w in _all_words(n, 4):
                    t = PseudoPermutation(w, n, m)
                    par = pseudo_parity(t)
                    for nb in pseudo_rotation_neighbors(t):
                        moves += 1
                        violations += pseudo_parity(nb) != par
        c.detail = f"{violations} violations over {moves} moves"
        assert moves > 0 and violations == 0


def test_05_linear_family(criterion):
    with criterion("5 {1234,3421}: n+28 at n=7,8,9") as c:
        rep = run_experiment(*SUITES["linear"][:1], range(7, 10), FormulaId.LINEAR_PLUS_28)
        c.detail = f"computed {rep.computed}"
        assert rep.computed == {n: n + 28 for n in (7, 8, 9)}


@pytest.mark.slow
def test_05b_linear_family_n10(criterion):
    with criterion("5b {1234,3421}: n+28 at n=10 (optional)") as c:
        part = enumerate_classes(10, SUITES["linear"][0])
        c.detail = f"computed {part.class_count_nontrivial}"
        assert part.class_count_nontrivial == 38


def test_06_exponential_family(criterion):
    with criterion("6 {1243,3421}: 54, 110, 222") as c:
        pi = SUITES["exponential"][0]
        got = [enumerate_classes(n, pi).class_count_nontrivial for n in (7, 8, 9)]
        c.detail = f"computed {got}"
        assert got == [54, 110, 222]
        assert got == [formula_value(FormulaId.SEVEN_TIMES_POW2, n) for n in (7, 8, 9)]


def test_07_cubic_family(criterion):
    with criterion("7 {1234,3412}: 51 at n=7, cubic at n=8,9") as c:
        pi = SUITES["cubic"][0]
        got = {n: enumerate_classes(n, pi).class_count_nontrivial for n in (7, 8, 9)}
        c.detail = f"computed {got}"
        assert got[7] == 51
        assert all(got[n] == formula_value(FormulaId.CUBIC_CONJECTURE, n) for n in (8, 9))


def test_08_erdos_szekeres_small_cases(criterion):
    with criterion("8 ES cases: k=3 n=5..9, k=4 n=6..8, k=4 n=10") as c:
        rep = verify_es_theorem(3, 5)
        assert (rep.classes_total, rep.singletons) == (3, 0)
        for n in range(6, 10):
            assert verify_es_theorem(3, n).classes_total == 1
        for n in (6, 7, 8):
            part = enumerate_classes(n, es_pattern_set(4))
            assert all(cls.parity_pure for cls in part.classes)
        rep = verify_es_theorem(4, 10)
        c.detail = (f"k=4 n=10: {rep.classes_total} classes, regime {rep.regime!r}, "
                    f"proven threshold n>={rep.thresholds['proven']} not reachable")
        assert rep.classes_total == 2 and rep.parity_pure and rep.passed
        assert rep.thresholds["proven_threshold_reachable"] is False


def test_09_prefix_chain(criterion):
    with criterion("9 prefix chain on 1000 seeded perms of S_9") as c:
        rng = random.Random(20240601)
        k, n = 3, 9
        ident = identity(n)
        swapped = Permutation((2, 1) + tuple(range(3, n + 1)))
        pats = {tuple(range(1, k + 1)), tuple(range(k, 0, -1))}
        failures = 0
        total_moves = 0
        for _ in range(1000):
            rest = list(range(5, n + 1))
            rng.shuffle(rest)
            a = Permutation((1, 2, 3, 4, *rest))
            result, chain = normalize_prefix_chain(a, k)
            ok = result in (ident, swapped) and len(chain) % 2 == 0
            cur = a
            for mv in chain:
                pos = mv.occurrence.positions
                std = pattern_of([cur[i] for i in pos])
                found = [o.positions for o in occurrences(cur, std, False)]
                if std.letters not in pats or mv.target.letters not in pats or pos not in found:
                    ok = False
                    break
                cur = apply_move(cur, mv)
            ok = ok and cur == result and parity(result) == parity(a)
            failures += not ok
            total_moves += len(chain)
        c.detail = f"{failures} failures, {total_moves} moves replayed"
        assert failures == 0


def test_10_oracle_equivalence(criterion):
    with criterion("10 engine vs naive oracle, Pi in S_3 of size 2-3, n=4..6") as c:
        cases = mismatches = 0
        for combo in subsets_of_s3((2, 3)):
            for adjacency in (False, True):
                pi = ReplacementSet(combo, adjacency)
                for n in (4, 5, 6):
                    cases += 1
                    part = enumerate_classes(n, pi)
                    want = naive_partition(n, [p.letters for p in combo], adjacency)
                    same_sizes = Counter(cl.size for cl in part.classes) == Counter(w[0] for w in want)
                    same_reps = [cl.representative.letters for cl in part.classes] == [w[1] for w in want]
                    mismatches += not (same_sizes and same_reps)
        c.detail = f"{cases} cases, {mismatches} mismatches"
        assert mismatches == 0


def test_11_lexmin_bound(criterion):
    with criterion("11 lex-min bound |a_i - i| <= 4, k=3, n=6,7") as c:
        violations = 0
        for n in (6, 7):
            part = enumerate_classes(n, es_pattern_set(3))
            assert verify_lexmin_bound(part, 3)
            violations += sum(1 for cl in part.classes
                              for i, a in enumerate(cl.representative.letters, 1) if abs(a - i) > 4)
        c.detail = f"{violations} violations"
        assert violations == 0


def test_12_thread_count_determinism(criterion):
    with criterion("12 criterion-5 JSON identical with --threads 1 and 8") as c:
        outs = []
        for threads in ("1", "8"):
            proc = subprocess.run(
                [sys.executable, "-m", "permclass", "oeis", "--suite", "linear", "--n-min", "7",
                 "--n-max", "9", "--format", "json", "--no-timing", "--threads", threads],
                capture_output=True, timeout=600)
            assert proc.returncode == 0, proc.stderr.decode()
            outs.append(proc.stdout)
        doc = json.loads(outs[0])
        c.detail = f"{len(outs[0])} bytes each"
        assert [r["computed"] for r in doc["experiments"][0]["rows"]] == [35, 36, 37]
        assert outs[0] == outs[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))
