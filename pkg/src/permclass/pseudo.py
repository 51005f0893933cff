"""
Pseudo-permutations and rotational equivalence.

A pseudo-permutation abstracts one occurrence of the pattern m inside a
permutation of length n into a single formal letter ``p``; the letters of 1..n
missing from the word are the ones "inside the pattern". Pseudo-rotations
trade the letter next to ``p`` for its nearest pattern letter above or below,
and pseudo-parity is invariant under them.

>>> tau = PseudoPermutation.parse("2p468", n=8, m="1324")
>>> str(representative(tau))
'21537468'
>>> pseudo_parity(PseudoPermutation.parse("16p28", n=8, m="1324"))
<Parity.EVEN: 0>
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .classes import EngineOptions, enumerate_classes
from .errors import InvalidWordError, ResourceError
from .perm import MAX_N, Parity, Permutation, as_perm, format_word, parse_word
from .patterns import rotate_to_leading_one, rotation_set

__all__ = [
    "P", "PseudoPermutation", "PseudoClass", "PseudoPartition", "RotationalProfile",
    "representative", "bracket", "pseudo_rotation_neighbors", "pseudo_parity",
    "enumerate_pseudo_classes", "rotational_profile", "is_alternating", "pseudo_index",
]

# the formal pattern letter; real letters are 1..n so 0 is free
P = 0


def _format(word) -> str:
    return format_word("p" if a == P else a for a in word)


@dataclass(frozen=True)
class PseudoPermutation:
    """A word of length n - c + 1 holding ``p`` once and n - c distinct letters of 1..n.

    ``m`` is normalized to its rotation beginning with 1 on construction.
    """

    word: tuple[int, ...]
    n: int
    m: Permutation

    def __post_init__(self):
        m = rotate_to_leading_one(as_perm(self.m))
        object.__setattr__(self, "m", m)
        word = tuple(int(a) for a in self.word)
        object.__setattr__(self, "word", word)
        c, n = m.n, int(self.n)
        if n > MAX_N:
            raise InvalidWordError(f"n={n} exceeds the cap of {MAX_N}")
        if len(word) != n - c + 1:
            raise InvalidWordError(f"{_format(word)} should have {n - c + 1} letters for n={n}, c={c}")
        if word.count(P) != 1:
            raise InvalidWordError(f"{_format(word)} must contain p exactly once")
        letters = [a for a in word if a != P]
        if len(set(letters)) != len(letters) or any(not 1 <= a <= n for a in letters):
            raise InvalidWordError(f"{_format(word)} needs distinct letters from 1..{n}")

    @classmethod
    def parse(cls, text: str, n: int, m) -> "PseudoPermutation":
        word = []
        for tok in parse_word(text):
            if tok.lower() == "p":
                word.append(P)
            elif tok.isdigit():
                word.append(int(tok))
            else:
                raise InvalidWordError(f"bad letter {tok!r} in {text!r}")
        return cls(tuple(word), n, as_perm(m))

    @property
    def c(self) -> int:
        return self.m.n

    @property
    def pattern_letters(self) -> tuple[int, ...]:
        present = set(self.word)
        return tuple(a for a in range(1, self.n + 1) if a not in present)

    def __str__(self) -> str:
        return _format(self.word)


def representative(tau: PseudoPermutation) -> Permutation:
    """Expand p into the unique word order-isomorphic to m on the missing letters."""
    missing = tau.pattern_letters
    alpha = tuple(missing[a - 1] for a in tau.m.letters)
    i = tau.word.index(P)
    return Permutation(tau.word[:i] + alpha + tau.word[i + 1:])


def _bracket(missing, a: int) -> tuple[Optional[int], Optional[int]]:
    below = [x for x in missing if x < a]
    above = [x for x in missing if x > a]
    return (max(below) if below else None), (min(above) if above else None)


def bracket(tau: PseudoPermutation, a: int) -> tuple[Optional[int], Optional[int]]:
    """(a_minus, a_plus): nearest pattern letters below and above a, or None."""
    if not 1 <= a <= tau.n:
        raise InvalidWordError(f"letter {a} outside 1..{tau.n}")
    return _bracket(tau.pattern_letters, a)


def _neighbor_words(word: tuple[int, ...], n: int) -> Iterator[tuple[int, ...]]:
    present = set(word)
    missing = [x for x in range(1, n + 1) if x not in present]
    i = word.index(P)
    w = list(word)
    if i + 1 < len(word):
        # p a  ->  b p
        for b in _bracket(missing, word[i + 1]):
            if b is not None:
                w2 = w.copy()
                w2[i], w2[i + 1] = b, P
                yield tuple(w2)
    if i > 0:
        # a p  ->  p b
        for b in _bracket(missing, word[i - 1]):
            if b is not None:
                w2 = w.copy()
                w2[i - 1], w2[i] = P, b
                yield tuple(w2)


def pseudo_rotation_neighbors(tau: PseudoPermutation) -> set[PseudoPermutation]:
    return {PseudoPermutation(w, tau.n, tau.m) for w in _neighbor_words(tau.word, tau.n)}


def _pseudo_parity(word: tuple[int, ...]) -> int:
    i = word.index(P)
    letters = word[:i] + word[i + 1:]
    inv = sum(1 for x, y in itertools.combinations(letters, 2) if x > y)
    odd_before = sum(1 for a in word[:i] if a % 2 == 1)
    even_after = sum(1 for a in word[i + 1:] if a % 2 == 0)
    return (inv + odd_before + even_after) % 2


def pseudo_parity(tau: PseudoPermutation) -> Parity:
    return Parity(_pseudo_parity(tau.word))


def _index(word: tuple[int, ...], n: int, fact: list[int]) -> int:
    """Dense index: (missing-letter set, arrangement of the word with p as its least letter)."""
    present = set(word)
    comb = 0
    j = 0
    for x in range(1, n + 1):
        if x not in present:
            j += 1
            comb += math.comb(x - 1, j)
    L = len(word)
    arr = 0
    for i in range(L - 1):
        a = word[i]
        d = 0
        for b in word[i + 1:]:
            if b < a:
                d += 1
        arr += d * fact[L - 1 - i]
    return comb * fact[L] + arr


def pseudo_index(tau: PseudoPermutation) -> int:
    fact = [math.factorial(i) for i in range(len(tau.word) + 1)]
    return _index(tau.word, tau.n, fact)


def pseudo_state_count(n: int, c: int) -> int:
    return math.comb(n, c) * math.factorial(n - c + 1)


def _all_words(n: int, c: int) -> Iterator[tuple[int, ...]]:
    for missing in itertools.combinations(range(1, n + 1), c):
        miss = set(missing)
        present = [a for a in range(1, n + 1) if a not in miss]
        yield from itertools.permutations([P] + present)


@dataclass(frozen=True)
class PseudoClass:
    size: int
    seed: str
    even_count: int
    odd_count: int

    @property
    def parity_pure(self) -> bool:
        return self.even_count == 0 or self.odd_count == 0

    def to_dict(self) -> dict:
        return {"size": self.size, "seed": self.seed,
                "even_count": self.even_count, "odd_count": self.odd_count}


@dataclass
class PseudoPartition:
    n: int
    m: Permutation
    state_count: int
    classes: list[PseudoClass]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def parity_pure(self) -> bool:
        return all(c.parity_pure for c in self.classes)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": str(self.m),
            "states": self.state_count,
            "class_count": self.class_count,
            "parity_pure": self.parity_pure,
            "classes": [c.to_dict() for c in self.classes],
        }


def enumerate_pseudo_classes(n: int, m, memory_budget: Optional[int] = None) -> PseudoPartition:
    """Components of the pseudo-rotation graph on all pseudo-permutations of length n."""
    m = rotate_to_leading_one(as_perm(m))
    c = m.n
    if n < c + 1:
        raise InvalidWordError(f"need n >= c + 1 = {c + 1}, got {n}")
    if n > MAX_N:
        raise InvalidWordError(f"n={n} exceeds the cap of {MAX_N}")
    states = pseudo_state_count(n, c)
    if memory_budget is not None and states > memory_budget:
        raise ResourceError(f"{states} pseudo-permutation states", memory_budget)
    fact = [math.factorial(i) for i in range(n - c + 2)]
    seen = bytearray(states)
    classes = []
    for start in _all_words(n, c):
        idx = _index(start, n, fact)
        if seen[idx]:
            continue
        seen[idx] = 1
        stack = [start]
        size = even = 0
        while stack:
            w = stack.pop()
            size += 1
            if _pseudo_parity(w) == 0:
                even += 1
            for w2 in _neighbor_words(w, n):
                j = _index(w2, n, fact)
                if not seen[j]:
                    seen[j] = 1
                    stack.append(w2)
        classes.append(PseudoClass(size, _format(start), even, size - even))
    return PseudoPartition(n, m, states, classes)


def is_alternating(m) -> bool:
    """Consecutive differences strictly alternate in sign."""
    m = as_perm(m)
    if m.n < 2:
        raise InvalidWordError("alternation needs length at least 2")
    signs = [b > a for a, b in zip(m.letters, m.letters[1:])]
    return all(x != y for x, y in zip(signs, signs[1:]))


@dataclass
class RotationalProfile:
    m: Permutation
    f: dict[int, int] = field(default_factory=dict)
    t: Optional[int] = None

    @property
    def c(self) -> int:
        return self.m.n

    @property
    def odd_length(self) -> bool:
        return self.c % 2 == 1

    @property
    def alternating(self) -> bool:
        return is_alternating(self.m)

    @property
    def monotone(self) -> bool:
        """f never increases with n."""
        values = [self.f[n] for n in sorted(self.f)]
        return all(a >= b for a, b in zip(values, values[1:]))

    def to_dict(self) -> dict:
        d = {
            "m": str(self.m),
            "f": {str(n): v for n, v in sorted(self.f.items())},
            "t": self.t,
            "alternating": self.alternating,
        }
        if self.odd_length:
            d["note"] = "odd length: parity-split expected"
        return d


def rotational_profile(m, n_max: int, options: Optional[EngineOptions] = None) -> RotationalProfile:
    """Nontrivial class counts f(n) under m-rotational equivalence for n = c+1..n_max."""
    m = as_perm(m)
    if n_max > MAX_N:
        raise InvalidWordError(f"n_max={n_max} exceeds the cap of {MAX_N}")
    pi = rotation_set(m)
    prof = RotationalProfile(m)
    for n in range(m.n + 1, n_max + 1):
        part = enumerate_classes(n, pi, options)
        prof.f[n] = part.class_count_nontrivial
        if prof.t is None and part.class_count_nontrivial == 1:
            prof.t = n
    return prof
