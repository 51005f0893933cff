"""
Closed forms for nontrivial class counts and the experiment battery that checks them.

Results are cached as JSON lines, one record per (replacement set, n), so an
interrupted sweep over large n keeps what it already computed.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
import logging
import os
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .classes import EngineOptions, enumerate_classes, not_leading_max, representatives_with_prefix_property
from .errors import FormulaError, OutOfRangeError, ResourceError
from .perm import all_permutations
from .patterns import ReplacementSet

__all__ = [
    "ENGINE_VERSION", "FormulaId", "formula_value", "ResultCache", "ExperimentReport",
    "run_experiment", "subconjecture_check", "SUITES", "sweep_pairs", "default_cache_dir",
]

log = logging.getLogger(__name__)

# bump whenever a change to the engine could alter a stored count
ENGINE_VERSION = "permclass-engine-1"

CACHE_ENV = "PERMCLASS_CACHE_DIR"


class FormulaId(enum.Enum):
    LINEAR_PLUS_28 = "n+28"
    SEVEN_TIMES_POW2 = "7*2^(n-4)-2"
    CUBIC_CONJECTURE = "(n^3+6n^2-55n+54)/6"
    QUADRATIC_SUB_CONJECTURE = "(n^2+3n-20)/2"

    @property
    def min_n(self) -> int:
        return 8 if self is FormulaId.QUADRATIC_SUB_CONJECTURE else 7


def formula_value(fid: FormulaId, n: int) -> int:
    if n < fid.min_n:
        raise FormulaError(f"{fid.value} is only claimed for n >= {fid.min_n}, got n={n}")
    if fid is FormulaId.LINEAR_PLUS_28:
        return n + 28
    if fid is FormulaId.SEVEN_TIMES_POW2:
        return 7 * 2 ** (n - 4) - 2
    if fid is FormulaId.CUBIC_CONJECTURE:
        num, den = n ** 3 + 6 * n ** 2 - 55 * n + 54, 6
    else:
        num, den = n ** 2 + 3 * n - 20, 2
    q, r = divmod(num, den)
    if r:
        raise FormulaError(f"{fid.value} does not divide evenly at n={n}")
    return q


def _check_formulas(n_max: int = 12) -> None:
    for fid in FormulaId:
        for n in range(fid.min_n, n_max + 1):
            formula_value(fid, n)


# a mistyped coefficient usually breaks divisibility, so fail at import rather than mid-run
_check_formulas()


def default_cache_dir() -> Optional[str]:
    return os.environ.get(CACHE_ENV) or None


def _pi_key(pi: ReplacementSet) -> str:
    return hashlib.sha256(pi.canonical().encode()).hexdigest()[:16]


class ResultCache:
    """Append-only JSON-lines store of class counts."""

    FILENAME = "classes.jsonl"

    def __init__(self, cache_dir, engine_version: str = ENGINE_VERSION):
        self.dir = Path(cache_dir)
        self.path = self.dir / self.FILENAME
        self.engine_version = engine_version

    def load(self, pi: ReplacementSet, n: int) -> Optional[dict]:
        if not self.path.exists():
            return None
        key = _pi_key(pi)
        found = None
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    match = rec["key"] == key and rec["n"] == n
                except (ValueError, KeyError, TypeError):
                    warnings.warn(f"skipping corrupt cache record {self.path}:{lineno}")
                    continue
                if match and rec.get("engine_version") == self.engine_version:
                    found = rec
        return found

    def store(self, pi: ReplacementSet, n: int, nontrivial: int, total: int,
              singletons: int, wall_ms: int) -> dict:
        rec = {
            "key": _pi_key(pi),
            "patterns": [str(p) for p in pi.patterns],
            "adjacency": pi.adjacency,
            "n": n,
            "nontrivial": nontrivial,
            "total": total,
            "singletons": singletons,
            "engine_version": self.engine_version,
            "wall_ms": wall_ms,
        }
        self.dir.mkdir(parents=True, exist_ok=True)
        line = (json.dumps(rec, sort_keys=True) + "\n").encode()
        # a single O_APPEND write keeps concurrent writers from interleaving records
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, line)
        finally:
            os.close(fd)
        return rec


def cache_store(cache: ResultCache, pi, n, nontrivial, total, singletons, wall_ms=0) -> dict:
    return cache.store(pi, n, nontrivial, total, singletons, wall_ms)


def cache_load(cache: ResultCache, pi, n) -> Optional[dict]:
    return cache.load(pi, n)


MATCH = "match"
MISMATCH = "mismatch"
SKIPPED = "skipped"


@dataclass
class ExperimentRow:
    n: int
    computed: Optional[int]
    predicted: Optional[int]
    verdict: Optional[str]
    wall_ms: int = 0
    cached: bool = False
    reason: Optional[str] = None

    def to_dict(self, timing: bool = True) -> dict:
        d = {"n": self.n, "computed": self.computed, "predicted": self.predicted,
             "verdict": self.verdict}
        if self.reason:
            d["reason"] = self.reason
        if timing:
            d["wall_ms"] = self.wall_ms
            d["cached"] = self.cached
        return d


@dataclass
class ExperimentReport:
    pi: ReplacementSet
    n_range: tuple[int, int]
    formula: Optional[FormulaId]
    rows: list[ExperimentRow] = field(default_factory=list)

    @property
    def computed(self) -> dict[int, Optional[int]]:
        return {r.n: r.computed for r in self.rows}

    @property
    def predicted(self) -> dict[int, Optional[int]]:
        return {r.n: r.predicted for r in self.rows}

    @property
    def verdicts(self) -> dict[int, Optional[str]]:
        return {r.n: r.verdict for r in self.rows}

    @property
    def ok(self) -> bool:
        return all(r.verdict != MISMATCH for r in self.rows)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "patterns": [str(p) for p in self.pi.patterns],
            "adjacency": self.pi.adjacency,
            "formula": self.formula.value if self.formula else None,
            "n_range": list(self.n_range),
            "rows": [r.to_dict(timing) for r in self.rows],
        }


def _count(pi: ReplacementSet, n: int, cache: Optional[ResultCache],
           options: Optional[EngineOptions]) -> tuple[int, int, bool]:
    if cache is not None:
        rec = cache.load(pi, n)
        if rec is not None:
            return rec["nontrivial"], rec["wall_ms"], True
    t0 = time.perf_counter()
    part = enumerate_classes(n, pi, options)
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    if cache is not None:
        cache.store(pi, n, part.class_count_nontrivial, part.class_count_total,
                    part.singleton_count, wall_ms)
    return part.class_count_nontrivial, wall_ms, False


def run_experiment(pi: ReplacementSet, n_range: Iterable[int], formula: Optional[FormulaId] = None,
                   cache: Optional[ResultCache] = None,
                   options: Optional[EngineOptions] = None) -> ExperimentReport:
    """Nontrivial class counts for each n, compared by exact equality against formula."""
    ns = sorted(set(n_range))
    if not ns or ns[0] < 4 or ns[-1] > 12:
        raise OutOfRangeError(f"n range must lie within 4..12, got {ns}")
    report = ExperimentReport(pi, (ns[0], ns[-1]), formula)
    for n in ns:
        predicted = None
        if formula is not None and n >= formula.min_n:
            predicted = formula_value(formula, n)
        try:
            count, wall_ms, cached = _count(pi, n, cache, options)
        except ResourceError as exc:
            log.warning("n=%d skipped: %s", n, exc)
            report.rows.append(ExperimentRow(n, None, predicted, SKIPPED, reason="resource"))
            continue
        verdict = None
        if predicted is not None:
            verdict = MATCH if count == predicted else MISMATCH
        report.rows.append(ExperimentRow(n, count, predicted, verdict, wall_ms, cached))
    return report


SUITES = {
    "linear": (ReplacementSet.of("1234", "3421"), FormulaId.LINEAR_PLUS_28),
    "exponential": (ReplacementSet.of("1243", "3421"), FormulaId.SEVEN_TIMES_POW2),
    "cubic": (ReplacementSet.of("1234", "3412"), FormulaId.CUBIC_CONJECTURE),
}


@dataclass
class SubconjectureResult:
    n: int
    count: int
    predicted: int
    match: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "count": self.count, "predicted": self.predicted, "match": self.match}


def subconjecture_check(n: int, options: Optional[EngineOptions] = None) -> SubconjectureResult:
    """Nontrivial {1234,3412} classes among permutations not beginning with n."""
    if not 8 <= n <= 10:
        raise OutOfRangeError(f"subconjecture check runs for 8 <= n <= 10, got {n}")
    part = enumerate_classes(n, SUITES["cubic"][0], options)
    count = len(representatives_with_prefix_property(part, not_leading_max))
    predicted = formula_value(FormulaId.QUADRATIC_SUB_CONJECTURE, n)
    return SubconjectureResult(n, count, predicted, count == predicted)


def sweep_pairs(n_values: Iterable[int], cache: Optional[ResultCache] = None,
                options: Optional[EngineOptions] = None) -> list[dict]:
    """Nontrivial counts for every unordered pair of length-4 patterns (no adjacency)."""
    ns = sorted(set(n_values))
    rows = []
    for a, b in itertools.combinations(list(all_permutations(4)), 2):
        pi = ReplacementSet((a, b))
        counts = {}
        for n in ns:
            try:
                counts[n], _, _ = _count(pi, n, cache, options)
            except ResourceError:
                counts[n] = None
        rows.append({"patterns": [str(a), str(b)], "counts": {str(n): counts[n] for n in ns}})
    return rows
