"""
Invariant suites, runnable from the command line with a fixed seed.

Each suite returns a list of CheckResult; a suite passes when every result
does. The naive relaxation oracle here shares no code with the compiled
engine: it builds the move graph with itertools and merges labels until
nothing changes.
"""

from __future__ import annotations

import collections
import itertools
import random
from dataclasses import dataclass
from typing import Callable

from .classes import are_equivalent, enumerate_classes
from .erdos import es_pattern_set, normalize_prefix_chain
from .perm import FACTORIALS, Permutation, all_permutations, inversions, parity, rank, unrank
from .patterns import ReplacementSet, apply_move, neighbors, occurrences, rotation_set
from .pseudo import (PseudoPermutation, _all_words, enumerate_pseudo_classes,
                     pseudo_parity, pseudo_rotation_neighbors, representative)

__all__ = ["CheckResult", "SUITES", "run_suite", "naive_partition", "leading_one_patterns"]


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def leading_one_patterns(c: int = 4) -> list[Permutation]:
    return [p for p in all_permutations(c) if p[0] == 1]


def subsets_of_s3(sizes=(2, 3)) -> list[tuple[Permutation, ...]]:
    s3 = list(all_permutations(3))
    return [combo for r in sizes for combo in itertools.combinations(s3, r)]


def naive_partition(n: int, patterns, adjacency: bool) -> list[tuple[int, tuple[int, ...], int, int]]:
    """(size, lex-min member, even count, odd count) of every class with >= 2 members."""
    perms = list(itertools.permutations(range(1, n + 1)))
    index = {p: i for i, p in enumerate(perms)}
    pats = {tuple(p) for p in patterns}
    c = len(next(iter(pats)))
    if adjacency:
        places = [tuple(range(s, s + c)) for s in range(n - c + 1)]
    else:
        places = list(itertools.combinations(range(n), c))
    edges = []
    for i, p in enumerate(perms):
        for pos in places:
            sub = [p[j] for j in pos]
            srt = sorted(sub)
            std = tuple(srt.index(x) + 1 for x in sub)
            if std not in pats:
                continue
            for t in pats:
                if t == std:
                    continue
                q = list(p)
                for j, tt in zip(pos, t):
                    q[j] = srt[tt - 1]
                edges.append((i, index[tuple(q)]))
    label = list(range(len(perms)))
    changed = True
    while changed:
        changed = False
        for i, j in edges:
            if label[j] < label[i]:
                label[i] = label[j]
                changed = True
            elif label[i] < label[j]:
                label[j] = label[i]
                changed = True
    groups = collections.defaultdict(list)
    for i, lab in enumerate(label):
        groups[lab].append(perms[i])
    out = []
    for lab in sorted(groups):
        members = groups[lab]
        if len(members) < 2:
            continue
        odd = sum(1 for p in members
                  if sum(1 for a, b in itertools.combinations(p, 2) if a > b) % 2)
        out.append((len(members), perms[lab], len(members) - odd, odd))
    return out


def _roundtrip(rng) -> list[CheckResult]:
    out = []
    for n in range(1, 9):
        bad = [r for r in range(FACTORIALS[n]) if rank(unrank(r, n)) != r]
        out.append(CheckResult("roundtrip", f"n={n}", not bad, f"{len(bad)} failures"))
    return out


def _parity(rng) -> list[CheckResult]:
    bad = sum(1 for p in all_permutations(6) if parity(p) != inversions(p) % 2)
    return [CheckResult("parity", "S_6", bad == 0, f"{bad} failures")]


def _symmetry(rng) -> list[CheckResult]:
    out = []
    perms = list(all_permutations(5))
    for combo in subsets_of_s3((2,)):
        pi = ReplacementSet(combo)
        nb = {p: neighbors(p, pi) for p in perms}
        bad = sum(1 for p in perms for q in nb[p] if p not in nb[q])
        out.append(CheckResult("symmetry", pi.canonical(), bad == 0, f"{bad} asymmetric edges"))
    return out


def _pseudo_parity(rng) -> list[CheckResult]:
    out = []
    for m in leading_one_patterns(4):
        for n in range(5, 8):
            bad = 0
            total = 0
            for w in _all_words(n, 4):
                tau = PseudoPermutation(w, n, m)
                par = pseudo_parity(tau)
                for nb in pseudo_rotation_neighbors(tau):
                    total += 1
                    if pseudo_parity(nb) != par:
                        bad += 1
            out.append(CheckResult("pseudo-parity", f"m={m} n={n}", bad == 0,
                                   f"{bad} violations over {total} moves"))
    return out


def _shadowing(rng) -> list[CheckResult]:
    out = []
    for m in leading_one_patterns(4):
        pi = rotation_set(m)
        for n in (5, 6):
            bad = 0
            for w in _all_words(n, 4):
                tau = PseudoPermutation(w, n, m)
                s1 = representative(tau)
                for nb in pseudo_rotation_neighbors(tau):
                    if not are_equivalent(s1, representative(nb), pi)[0]:
                        bad += 1
            out.append(CheckResult("shadowing", f"m={m} n={n}", bad == 0, f"{bad} failures"))
    return out


def _pseudo_classes(rng) -> list[CheckResult]:
    out = []
    for m in leading_one_patterns(4):
        for n in range(5, 10):
            part = enumerate_pseudo_classes(n, m)
            ok = part.class_count == 2 and part.parity_pure
            out.append(CheckResult("pseudo-classes", f"m={m} n={n}", ok,
                                   f"{part.class_count} classes"))
    return out


def _oracle(rng) -> list[CheckResult]:
    out = []
    for combo in subsets_of_s3((2, 3)):
        for adjacency in (False, True):
            pi = ReplacementSet(combo, adjacency)
            for n in (4, 5, 6):
                part = enumerate_classes(n, pi)
                got = [(c.size, c.representative.letters, c.even_count, c.odd_count)
                       for c in part.classes]
                want = naive_partition(n, [p.letters for p in combo], adjacency)
                out.append(CheckResult("oracle", f"{pi.canonical()} n={n}", got == want,
                                       f"{len(got)} vs {len(want)} classes"))
    return out


def _prefix_chain(rng, samples: int = 1000, n: int = 9, k: int = 3) -> list[CheckResult]:
    failures = 0
    pi = es_pattern_set(k)
    prefix = list(range(1, 2 * k - 1))
    ident = tuple(range(1, n + 1))
    swapped = (2, 1) + ident[2:]
    for _ in range(samples):
        rest = list(range(2 * k - 1, n + 1))
        rng.shuffle(rest)
        a = Permutation(tuple(prefix + rest))
        result, chain = normalize_prefix_chain(a, k)
        cur = a
        ok = len(chain) % 2 == 0 and result.letters in (ident, swapped)
        for mv in chain:
            occ = mv.occurrence
            if occ not in occurrences(cur, occ.matched, False) or mv.target not in pi.patterns:
                ok = False
                break
            cur = apply_move(cur, mv)
        ok = ok and cur == result and parity(result) == parity(a)
        failures += not ok
    return [CheckResult("prefix-chain", f"{samples} samples in S_{n}, k={k}", failures == 0,
                        f"{failures} failures")]


def _certificates(rng, pairs: int = 50) -> list[CheckResult]:
    pi = ReplacementSet.of("123", "321")
    bad = 0
    for _ in range(pairs):
        a = unrank(rng.randrange(720), 6)
        b = unrank(rng.randrange(720), 6)
        same, cert = are_equivalent(a, b, pi, certificate=True)
        if not same:
            continue
        cur = a
        for mv in cert:
            cur = apply_move(cur, mv)
        bad += cur != b
    return [CheckResult("certificates", f"{pairs} random pairs in S_6", bad == 0, f"{bad} failures")]


SUITES: dict[str, Callable] = {
    "roundtrip": _roundtrip,
    "parity": _parity,
    "symmetry": _symmetry,
    "pseudo-parity": _pseudo_parity,
    "pseudo-classes": _pseudo_classes,
    "shadowing": _shadowing,
    "oracle": _oracle,
    "prefix-chain": _prefix_chain,
    "certificates": _certificates,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for nm in names:
        out.extend(SUITES[nm](random.Random(seed)))
    return out
