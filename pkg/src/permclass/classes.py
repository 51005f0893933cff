"""
Exhaustive enumeration of the equivalence classes of S_n under a replacement set.

The engine walks ranks 0..n!-1 with a visited bitset and explores one
component at a time; only class sizes, lex-min representatives and parity
counts are kept. Singleton classes are counted, never listed.

>>> part = enumerate_classes(5, ReplacementSet.of("123", "321"))
>>> part.class_count_total, part.singleton_count
(3, 0)
"""

from __future__ import annotations

import collections
import csv
import io
import itertools
import logging
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CapError, InvalidWordError, ResourceError
from .perm import FACTORIALS, MAX_N, Permutation, as_perm, rank, unrank
from .patterns import Move, ReplacementSet, moves

__all__ = [
    "ClassSummary", "ClassPartition", "EngineOptions",
    "enumerate_classes", "nontrivial_count", "are_equivalent", "class_of",
    "representatives_with_prefix_property", "not_leading_max", "not_boundary_max",
    "DEFAULT_MEMORY_BUDGET",
]

log = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 4 * 1024 ** 3
DEFAULT_BATCH = 256
_LOOKUP_MAX_C = 8


@dataclass(frozen=True)
class ClassSummary:
    size: int
    representative: Permutation
    even_count: int
    odd_count: int

    @property
    def parity_profile(self) -> tuple[int, int]:
        return self.even_count, self.odd_count

    @property
    def parity_pure(self) -> bool:
        return self.even_count == 0 or self.odd_count == 0

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "representative": str(self.representative),
            "even_count": self.even_count,
            "odd_count": self.odd_count,
        }


@dataclass
class ClassPartition:
    n: int
    pi: ReplacementSet
    class_count_total: int
    class_count_nontrivial: int
    classes: list[ClassSummary]
    singleton_count: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "patterns": [str(p) for p in self.pi.patterns],
            "adjacency": self.pi.adjacency,
            "total_classes": self.class_count_total,
            "nontrivial_classes": self.class_count_nontrivial,
            "singleton_count": self.singleton_count,
            "classes": [c.to_dict() for c in self.classes],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "patterns", "adjacency", "total_classes", "nontrivial_classes",
                    "singleton_count", "class_index", "size", "representative",
                    "even_count", "odd_count"])
        head = [self.n, " ".join(str(p) for p in self.pi.patterns), int(self.pi.adjacency),
                self.class_count_total, self.class_count_nontrivial, self.singleton_count]
        if not self.classes:
            w.writerow(head + ["", "", "", "", ""])
        for i, c in enumerate(self.classes):
            w.writerow(head + [i, c.size, str(c.representative), c.even_count, c.odd_count])
        return buf.getvalue()


@dataclass
class EngineOptions:
    """Knobs for the enumeration engine; none of them changes the result."""

    memory_budget: int = DEFAULT_MEMORY_BUDGET
    workers: int = 1
    batch: int = DEFAULT_BATCH
    # hard upper bound on the in-memory frontier, mostly for exercising spills
    queue_capacity: Optional[int] = None
    spill_dir: Optional[str] = None


def nontrivial_count(partition: ClassPartition) -> int:
    return partition.class_count_nontrivial


def _kernels():
    # imported lazily so the CLI can size numba's thread pool first
    from . import _kernels as k
    return k


def set_workers(workers: int) -> int:
    """Set the number of numba worker threads; returns the count actually used."""
    import numba

    workers = max(1, int(workers))
    avail = numba.config.NUMBA_NUM_THREADS
    used = min(workers, avail)
    if used < workers:
        log.info("requested %d workers, numba thread pool has %d", workers, avail)
    numba.set_num_threads(used)
    return used


@dataclass
class _Compiled:
    n: int
    total: int
    combos: np.ndarray
    c: int
    lookup: np.ndarray
    pat_codes: np.ndarray
    pats: np.ndarray
    fact: np.ndarray
    maxdeg: int


def _compile(n: int, pi: ReplacementSet) -> _Compiled:
    if n > MAX_N:
        raise CapError(f"n={n} exceeds the cap of {MAX_N}")
    c = pi.c
    if c > n:
        raise InvalidWordError(f"pattern length {c} exceeds n={n}")
    if pi.adjacency:
        combos = [tuple(range(s, s + c)) for s in range(n - c + 1)]
    else:
        combos = list(itertools.combinations(range(n), c))
    combos = np.array(combos, dtype=np.int64).reshape(-1, c)
    pats = np.array([[a - 1 for a in p.letters] for p in pi.patterns], dtype=np.int64)
    pat_codes = np.array([rank(p) for p in pi.patterns], dtype=np.int64)
    if c <= _LOOKUP_MAX_C:
        lookup = np.full(FACTORIALS[c], -1, dtype=np.int64)
        lookup[pat_codes] = np.arange(len(pat_codes))
    else:
        lookup = np.empty(0, dtype=np.int64)
    fact = np.array(FACTORIALS, dtype=np.int64)
    maxdeg = max(1, combos.shape[0] * (len(pi) - 1))
    return _Compiled(n, FACTORIALS[n], combos, c, lookup, pat_codes, pats, fact, maxdeg)


class _Scan:
    """Owns the buffers of one engine run and drives the resumable kernel."""

    def __init__(self, comp: _Compiled, opts: EngineOptions):
        k = _kernels()
        self.k = k
        self.comp = comp
        self.opts = opts
        total = comp.total
        words = (total + 63) // 64
        batch = max(1, int(opts.batch))
        fixed = words * 8 + batch * comp.maxdeg * 8 + batch * 8 * 3 + 4 * 1024 * 8
        min_queue = 2 * comp.maxdeg
        budget = int(opts.memory_budget)
        if fixed + min_queue * 8 > budget:
            raise ResourceError(
                f"S_{comp.n} needs at least {fixed + min_queue * 8} bytes for its visited "
                f"set and frontier", budget)
        cap = min((budget - fixed) // 8, total + comp.maxdeg)
        if opts.queue_capacity is not None:
            cap = min(cap, max(int(opts.queue_capacity), min_queue))
        self.visited = np.zeros(words, dtype=np.int64)
        self.queue = np.empty(cap, dtype=np.int64)
        self.state = np.zeros(k.NSTATE, dtype=np.int64)
        self.state[k.SEED] = -1
        self.items = np.empty(batch, dtype=np.int64)
        self.buf = np.empty(batch * comp.maxdeg, dtype=np.int64)
        self.counts = np.empty(batch, dtype=np.int64)
        self.pars = np.empty(batch, dtype=np.int64)
        self.out = [np.empty(1024, dtype=np.int64) for _ in range(4)]
        self.parallel = int(opts.workers) > 1
        self.runs: list[str] = []
        self._tmp: Optional[tempfile.TemporaryDirectory] = None
        self.spill_count = 0

    def seed(self, r: int) -> None:
        k, st = self.k, self.state
        st[k.SEED] = r
        self.visited[r >> 6] |= np.int64(1) << np.int64(r & 63)
        self.queue[0] = r
        st[k.HEAD], st[k.TAIL], st[k.QLEN] = 0, 1 % len(self.queue), 1
        st[k.IN_COMP] = 1
        st[k.SIZE] = 0
        st[k.MINR] = r
        st[k.EVEN] = st[k.ODD] = 0

    def is_visited(self, r: int) -> bool:
        return bool((int(self.visited[r >> 6]) >> (r & 63)) & 1)

    def _spill(self) -> None:
        k, st, q = self.k, self.state, self.queue
        cap = len(q)
        qlen = int(st[k.QLEN])
        m = qlen // 2
        tail = int(st[k.TAIL])
        idx = (np.arange(tail - m, tail) % cap)
        run = np.sort(q[idx])
        if self._tmp is None:
            self._tmp = tempfile.TemporaryDirectory(prefix="permclass-spill-", dir=self.opts.spill_dir)
        path = os.path.join(self._tmp.name, f"run{len(self.runs):06d}.npy")
        np.save(path, run)
        self.runs.append(path)
        st[k.TAIL] = (tail - m) % cap
        st[k.QLEN] = qlen - m
        st[k.PENDING] += 1
        self.spill_count += 1
        log.debug("spilled %d frontier entries to %s", m, path)

    def _refill(self) -> None:
        k, st = self.k, self.state
        path = self.runs.pop()
        run = np.load(path)
        os.remove(path)
        self.queue[: len(run)] = run
        st[k.HEAD] = 0
        st[k.TAIL] = len(run) % len(self.queue)
        st[k.QLEN] = len(run)
        st[k.PENDING] -= 1

    def _grow(self) -> None:
        self.out = [np.concatenate([a, np.empty(len(a), dtype=np.int64)]) for a in self.out]

    def run(self) -> None:
        k, c = self.k, self.comp
        if self.parallel:
            set_workers(self.opts.workers)
        try:
            while True:
                code = k.run_scan(c.n, c.total, c.combos, c.c, c.lookup, c.pat_codes, c.pats,
                                  c.fact, self.visited, self.queue, self.state,
                                  self.out[0], self.out[1], self.out[2], self.out[3],
                                  self.items, self.buf, self.counts, self.pars,
                                  c.maxdeg, self.parallel)
                if code == k.DONE:
                    return
                if code == k.SPILL:
                    self._spill()
                elif code == k.REFILL:
                    self._refill()
                elif code == k.OUTFULL:
                    self._grow()
                else:  # pragma: no cover
                    raise RuntimeError(f"unexpected kernel status {code}")
        finally:
            if self._tmp is not None:
                self._tmp.cleanup()
                self._tmp = None


def enumerate_classes(n: int, pi: ReplacementSet, options: Optional[EngineOptions] = None) -> ClassPartition:
    """Partition S_n into the connected components of the move graph of pi."""
    opts = options or EngineOptions()
    scan = _Scan(_compile(n, pi), opts)
    scan.run()
    k, st = scan.k, scan.state
    nout = int(st[k.NOUT])
    sizes, mins, evens, odds = (a[:nout] for a in scan.out)
    order = np.argsort(mins, kind="stable")
    classes = [
        ClassSummary(int(sizes[i]), unrank(int(mins[i]), n), int(evens[i]), int(odds[i]))
        for i in order
    ]
    singletons = int(st[k.SINGLETONS])
    return ClassPartition(
        n=n,
        pi=pi,
        class_count_total=nout + singletons,
        class_count_nontrivial=nout,
        classes=classes,
        singleton_count=singletons,
    )


def _component_scan(p: Permutation, pi: ReplacementSet, options: Optional[EngineOptions]) -> _Scan:
    scan = _Scan(_compile(p.n, pi), options or EngineOptions())
    scan.seed(rank(p))
    scan.run()
    return scan


def class_of(p, pi: ReplacementSet, options: Optional[EngineOptions] = None) -> ClassSummary:
    """Summary of the class of p alone, found by a frontier search from p."""
    p = as_perm(p)
    scan = _component_scan(p, pi, options)
    k, st = scan.k, scan.state
    return ClassSummary(int(st[k.SIZE]), unrank(int(st[k.MINR]), p.n),
                        int(st[k.EVEN]), int(st[k.ODD]))


def _certificate(a: Permutation, b: Permutation, pi: ReplacementSet) -> Optional[list[Move]]:
    parent: dict[Permutation, tuple[Optional[Permutation], Optional[Move]]] = {a: (None, None)}
    frontier = collections.deque([a])
    while frontier:
        x = frontier.popleft()
        if x == b:
            break
        for mv, y in moves(x, pi):
            if y not in parent:
                parent[y] = (x, mv)
                frontier.append(y)
    if b not in parent:
        return None
    path: list[Move] = []
    x = b
    while x != a:
        prev, mv = parent[x]
        path.append(mv)
        x = prev
    path.reverse()
    return path


def are_equivalent(a, b, pi: ReplacementSet, certificate: bool = False,
                   options: Optional[EngineOptions] = None) -> tuple[bool, Optional[list[Move]]]:
    """Whether a and b lie in the same class.

    With ``certificate=True`` a shortest move sequence from a to b is returned
    alongside (built by a plain breadth-first search, so keep n small).
    """
    a, b = as_perm(a), as_perm(b)
    if a.n != b.n:
        raise InvalidWordError(f"length mismatch: {a.n} vs {b.n}")
    if a == b:
        return True, ([] if certificate else None)
    if certificate:
        path = _certificate(a, b, pi)
        return path is not None, path
    scan = _component_scan(a, pi, options)
    return scan.is_visited(rank(b)), None


def representatives_with_prefix_property(
    partition: ClassPartition,
    predicate: Optional[Callable[[ClassSummary], bool]] = None,
) -> list[ClassSummary]:
    """Nontrivial classes whose summary satisfies predicate (all of them if None).

    The predicate sees the summary, so member-level properties are only
    meaningful when they are constant on classes; see ``not_leading_max``.
    """
    if predicate is None:
        return list(partition.classes)
    return [c for c in partition.classes if predicate(c)]


def not_leading_max(cls: ClassSummary) -> bool:
    """Class members do not begin with n.

    A leading n can never take part in an occurrence of a pattern whose first
    letter is not its maximum, so for such replacement sets this property is
    shared by every member and testing the representative suffices.
    """
    rep = cls.representative
    return rep[0] != rep.n


def not_boundary_max(cls: ClassSummary) -> bool:
    """Class members neither begin nor end with n (same caveat as not_leading_max)."""
    rep = cls.representative
    return rep[0] != rep.n and rep[-1] != rep.n

