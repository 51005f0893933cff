"""
Permutation values and the primitives everything else is built on.

Letters are 1-based, as in one-line notation. Ranks are lexicographic, so the
identity has rank 0 and the reversal has rank n! - 1.

>>> p = Permutation.parse("21354")
>>> rank(p), unrank(rank(p), 5) == p
(25, True)
>>> inversions(Permutation.parse("4321")), parity(Permutation.parse("2134"))
(6, <Parity.ODD: 1>)
>>> pattern_of((9, 1, 7, 3))
Permutation(letters=(4, 1, 3, 2))
"""

from __future__ import annotations

import bisect
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapError, InvalidWordError, OutOfRangeError

__all__ = [
    "MAX_N", "Parity", "Permutation",
    "rank", "unrank", "parity", "inversions", "longest_monotone", "pattern_of",
    "parse_word", "format_word", "all_permutations", "identity", "as_perm", "lehmer_code",
]

# ranks of S_12 fit comfortably in 64 bits; larger n is out of desk range anyway
MAX_N = 12

FACTORIALS = tuple(math.factorial(i) for i in range(MAX_N + 1))


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __str__(self) -> str:
        return self.name.lower()


def parse_word(text: str) -> list[str]:
    """Split a textual word into tokens.

    Comma-separated input is split on commas; otherwise every character is a
    token, which covers the concatenated-digit form used for n <= 9.
    """
    text = text.strip()
    if not text:
        raise InvalidWordError("empty word")
    if "," in text:
        tokens = [t.strip() for t in text.split(",")]
    else:
        tokens = [ch for ch in text if not ch.isspace()]
    if any(t == "" for t in tokens):
        raise InvalidWordError(f"empty token in {text!r}")
    return tokens


def format_word(letters: Iterable[object]) -> str:
    letters = [str(a) for a in letters]
    if all(len(a) == 1 for a in letters):
        return "".join(letters)
    return ",".join(letters)


@dataclass(frozen=True, order=False)
class Permutation:
    """A permutation of 1..n in one-line notation."""

    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(a) for a in self.letters)
        object.__setattr__(self, "letters", letters)
        n = len(letters)
        if n == 0:
            raise InvalidWordError("a permutation needs at least one letter")
        if n > MAX_N:
            raise CapError(f"length {n} exceeds the cap of {MAX_N}")
        if sorted(letters) != list(range(1, n + 1)):
            raise InvalidWordError(f"{letters} is not a permutation of 1..{n}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        tokens = parse_word(text)
        try:
            return cls(tuple(int(t) for t in tokens))
        except ValueError as exc:
            if isinstance(exc, InvalidWordError):
                raise
            raise InvalidWordError(f"non-numeric letter in {text!r}") from None

    @property
    def n(self) -> int:
        return len(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __str__(self) -> str:
        return format_word(self.letters)

    def __lt__(self, other: "Permutation") -> bool:
        return (self.n, self.letters) < (other.n, other.letters)


def as_perm(p) -> Permutation:
    """Coerce a Permutation, a string, or a sequence of letters."""
    if isinstance(p, Permutation):
        return p
    if isinstance(p, str):
        return Permutation.parse(p)
    return Permutation(tuple(p))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic (= rank) order."""
    for letters in itertools.permutations(range(1, n + 1)):
        yield Permutation(letters)


def lehmer_code(letters: Sequence[int]) -> list[int]:
    n = len(letters)
    return [sum(1 for j in range(i + 1, n) if letters[j] < letters[i]) for i in range(n)]


def rank(p: Permutation) -> int:
    """Lexicographic rank of p in S_n, via the factorial number system."""
    n = p.n
    code = lehmer_code(p.letters)
    return sum(d * FACTORIALS[n - 1 - i] for i, d in enumerate(code))


def unrank(r: int, n: int) -> Permutation:
    if not 1 <= n <= MAX_N:
        raise CapError(f"length {n} outside 1..{MAX_N}")
    if not 0 <= r < FACTORIALS[n]:
        raise OutOfRangeError(f"rank {r} outside 0..{FACTORIALS[n] - 1} for n={n}")
    pool = list(range(1, n + 1))
    letters = []
    for i in range(n - 1, -1, -1):
        d, r = divmod(r, FACTORIALS[i])
        letters.append(pool.pop(d))
    return Permutation(tuple(letters))


def inversions(p) -> int:
    """Inversion count of a permutation or of any word of distinct letters."""
    letters = p.letters if isinstance(p, Permutation) else tuple(p)
    return sum(lehmer_code(letters))


def parity(p: Permutation) -> Parity:
    return Parity(inversions(p) % 2)


def _lis_length(seq: Sequence[int]) -> int:
    # patience sorting: tails[i] is the smallest tail of an increasing run of length i+1
    tails: list[int] = []
    for a in seq:
        i = bisect.bisect_left(tails, a)
        if i == len(tails):
            tails.append(a)
        else:
            tails[i] = a
    return len(tails)


def longest_monotone(p: Permutation) -> tuple[int, int]:
    """Lengths of the longest increasing and longest decreasing subsequences."""
    return _lis_length(p.letters), _lis_length([-a for a in p.letters])


def pattern_of(word: Sequence[int]) -> Permutation:
    """Standardize a word of distinct values to a permutation of 1..len."""
    word = tuple(word)
    if not word:
        raise InvalidWordError("cannot standardize an empty word")
    if len(set(word)) != len(word):
        raise InvalidWordError(f"repeated letters in {word}")
    order = {a: i + 1 for i, a in enumerate(sorted(word))}
    return Permutation(tuple(order[a] for a in word))
