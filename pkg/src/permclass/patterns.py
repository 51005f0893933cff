"""
Pattern occurrences and replacement moves.

A move picks an occurrence of some pattern of a replacement set inside a host
permutation and rearranges exactly those letters so they spell another pattern
of the set. Positions are 0-based Python indices; letters stay 1-based.

>>> host = Permutation.parse("13524")
>>> occ = Occurrence((0, 3, 4), Permutation.parse("123"))   # letters 1, 2, 4
>>> str(apply_move(host, Move(occ, Permutation.parse("231"))))
'23541'
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InvalidWordError, StaleOccurrenceError
from .perm import Permutation, as_perm, pattern_of, rank

__all__ = [
    "ReplacementSet", "Occurrence", "Move",
    "occurrences", "iter_occurrences", "contains", "apply_move", "moves", "neighbors",
    "rotations", "rotate_to_leading_one", "rotation_set",
]


@dataclass(frozen=True)
class ReplacementSet:
    """A set of equal-length patterns, optionally restricted to adjacent letters.

    Patterns are stored deduplicated and sorted by rank, so two sets with the
    same members compare (and serialize) equal.
    """

    patterns: tuple[Permutation, ...]
    adjacency: bool = False

    def __post_init__(self):
        pats = tuple(sorted({as_perm(p) for p in self.patterns}, key=rank))
        if not pats:
            raise InvalidWordError("a replacement set needs at least one pattern")
        lengths = {p.n for p in pats}
        if len(lengths) != 1:
            raise InvalidWordError(f"patterns of mixed lengths {sorted(lengths)}")
        if pats[0].n < 2:
            raise InvalidWordError("patterns must have length at least 2")
        object.__setattr__(self, "patterns", pats)
        object.__setattr__(self, "adjacency", bool(self.adjacency))

    @classmethod
    def of(cls, *patterns, adjacency: bool = False) -> "ReplacementSet":
        return cls(tuple(as_perm(p) for p in patterns), adjacency)

    @classmethod
    def parse(cls, spec: str) -> "ReplacementSet":
        """Parse ``"1234,3421"`` or ``"adj:1324,3241,2413,4132"``."""
        text = spec.strip()
        adjacency = False
        if text.lower().startswith("adj:"):
            adjacency = True
            text = text[4:]
        tokens = [t.strip() for t in text.split(",")]
        if not text or any(not t for t in tokens):
            raise InvalidWordError(f"empty pattern in {spec!r}")
        pats = []
        for tok in tokens:
            if not tok.isdigit():
                raise InvalidWordError(f"malformed pattern token {tok!r}")
            try:
                pats.append(Permutation.parse(tok))
            except InvalidWordError:
                raise InvalidWordError(f"malformed pattern token {tok!r}") from None
        return cls(tuple(pats), adjacency)

    @property
    def c(self) -> int:
        return self.patterns[0].n

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.patterns)

    def __contains__(self, p) -> bool:
        return as_perm(p) in self.patterns

    def canonical(self) -> str:
        body = ",".join(str(p) for p in self.patterns)
        return ("adj:" + body) if self.adjacency else body

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class Occurrence:
    positions: tuple[int, ...]
    matched: Permutation


@dataclass(frozen=True)
class Move:
    occurrence: Occurrence
    target: Permutation

    @property
    def is_identity(self) -> bool:
        return self.target == self.occurrence.matched

    def to_dict(self) -> dict:
        return {
            "positions": list(self.occurrence.positions),
            "matched": str(self.occurrence.matched),
            "target": str(self.target),
        }


def iter_occurrences(host: Permutation, pattern: Permutation, adjacency: bool = False) -> Iterator[Occurrence]:
    """Yield occurrences of pattern in host in lexicographic order of positions."""
    letters = host.letters
    n, c = len(letters), pattern.n
    pat = pattern.letters
    if c > n:
        return
    if adjacency:
        for start in range(n - c + 1):
            window = letters[start:start + c]
            if pattern_of(window) == pattern:
                yield Occurrence(tuple(range(start, start + c)), pattern)
        return

    chosen: list[int] = []

    def consistent(pos: int) -> bool:
        # the new letter must sit in the same relative order as the pattern dictates
        j = len(chosen)
        a = letters[pos]
        for i, q in enumerate(chosen):
            if (letters[q] < a) != (pat[i] < pat[j]):
                return False
        return True

    def extend(start: int) -> Iterator[Occurrence]:
        j = len(chosen)
        if j == c:
            yield Occurrence(tuple(chosen), pattern)
            return
        # leave room for the remaining c - j - 1 letters
        for pos in range(start, n - (c - j) + 1):
            if consistent(pos):
                chosen.append(pos)
                yield from extend(pos + 1)
                chosen.pop()

    yield from extend(0)


def occurrences(host, pattern, adjacency: bool = False) -> list[Occurrence]:
    return list(iter_occurrences(as_perm(host), as_perm(pattern), adjacency))


def contains(host, pattern) -> bool:
    for _ in iter_occurrences(as_perm(host), as_perm(pattern), False):
        return True
    return False


def _check_occurrence(host: Permutation, occ: Occurrence) -> None:
    pos = occ.positions
    if len(pos) != occ.matched.n or any(not 0 <= i < host.n for i in pos):
        raise StaleOccurrenceError(f"positions {pos} do not fit host {host}")
    if any(a >= b for a, b in zip(pos, pos[1:])):
        raise StaleOccurrenceError(f"positions {pos} are not strictly increasing")
    if pattern_of([host[i] for i in pos]) != occ.matched:
        raise StaleOccurrenceError(
            f"letters at {pos} in {host} do not form {occ.matched}"
        )


def apply_move(host, move: Move) -> Permutation:
    """Rearrange the letters of move.occurrence so they spell move.target."""
    host = as_perm(host)
    occ = move.occurrence
    _check_occurrence(host, occ)
    if move.target.n != occ.matched.n:
        raise InvalidWordError(f"target {move.target} has the wrong length")
    ordered = sorted(host[i] for i in occ.positions)
    letters = list(host.letters)
    for pos, t in zip(occ.positions, move.target.letters):
        letters[pos] = ordered[t - 1]
    return Permutation(tuple(letters))


def moves(host, pi: ReplacementSet) -> Iterator[tuple[Move, Permutation]]:
    """Every non-identity move available in host, with its result."""
    host = as_perm(host)
    for matched in pi.patterns:
        for occ in iter_occurrences(host, matched, pi.adjacency):
            for target in pi.patterns:
                if target == matched:
                    continue
                move = Move(occ, target)
                yield move, apply_move(host, move)


def neighbors(host, pi: ReplacementSet) -> set[Permutation]:
    host = as_perm(host)
    out = {q for _, q in moves(host, pi)}
    out.discard(host)
    return out


def rotations(m) -> set[Permutation]:
    """The cyclic word rotations of m (leftmost letter moves to the end)."""
    m = as_perm(m)
    if m.n < 2:
        raise InvalidWordError("rotations need a pattern of length at least 2")
    w = m.letters
    return {Permutation(w[i:] + w[:i]) for i in range(m.n)}


def rotate_to_leading_one(m) -> Permutation:
    m = as_perm(m)
    i = m.letters.index(1)
    return Permutation(m.letters[i:] + m.letters[:i])


def rotation_set(m) -> ReplacementSet:
    """Rotations of m as an adjacency-constrained replacement set."""
    return ReplacementSet(tuple(rotations(m)), adjacency=True)


def format_moves(seq: Iterable[Move]) -> list[dict]:
    return [mv.to_dict() for mv in seq]

