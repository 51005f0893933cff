"""
Command line front-end.

Usage:
    permclass classes --n 7 --patterns 1234,3421
    permclass rotational --m 1324 --n-max 7
    permclass pseudo --m 1324 --n 8
    permclass erdos --k 3 --n 5
    permclass oeis --suite all --n-max 9
    permclass verify --suite pseudo-parity --seed 7
    permclass sweep --n-max 7

Settings come from built-in defaults, then a config file (--config), then
flags. The config file holds ``key = value`` lines, optionally under a
``[permclass]`` header; recognised keys are memory_budget, threads, format,
cache_dir, seed and no_timing.

Exit codes: 0 success, 1 usage error, 2 resource error, 3 a check or
prediction failed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .errors import InvalidWordError, PermclassError, ResourceError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_FAILED = 3

MIN_BUDGET = 64 * 1024 ** 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_bytes(text) -> int:
    s = str(text).strip().upper().removesuffix("B").removesuffix("I")
    mult = 1
    for suffix, m in (("K", 1024), ("M", 1024 ** 2), ("G", 1024 ** 3), ("T", 1024 ** 4)):
        if s.endswith(suffix):
            s, mult = s[:-1], m
            break
    try:
        return int(float(s) * mult)
    except ValueError:
        raise UsageError(f"bad byte count {text!r}") from None


@dataclass
class RunConfig:
    memory_budget: int = 4 * 1024 ** 3
    worker_count: int = 1
    output_format: str = "table"
    cache_dir: Optional[str] = None
    seed: int = 0
    no_timing: bool = False
    source: str = "defaults"

    def validate(self) -> "RunConfig":
        if self.worker_count < 1:
            raise UsageError(f"--threads must be at least 1, got {self.worker_count}")
        if self.memory_budget < MIN_BUDGET:
            raise UsageError(f"--memory-budget must be at least {MIN_BUDGET} bytes")
        if self.output_format not in ("table", "json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        return self


_CONFIG_KEYS = {
    "memory_budget": ("memory_budget", parse_bytes),
    "threads": ("worker_count", int),
    "format": ("output_format", str),
    "cache_dir": ("cache_dir", str),
    "seed": ("seed", int),
    "no_timing": ("no_timing", lambda v: str(v).strip().lower() in ("1", "true", "yes", "on")),
}


def load_config(path: Optional[str], args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(cache_dir=os.environ.get("PERMCLASS_CACHE_DIR") or None)
    if path:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if not text.lstrip().startswith("["):
            text = "[permclass]\n" + text
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise UsageError(f"cannot parse config {path}: {exc}") from None
        section = cp["permclass"] if cp.has_section("permclass") else cp[cp.sections()[0]]
        for key, value in section.items():
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r} in {path}")
            attr, conv = _CONFIG_KEYS[key]
            try:
                setattr(cfg, attr, conv(value))
            except ValueError:
                raise UsageError(f"bad value {value!r} for {key} in {path}") from None
        cfg.source = f"config {path}"
    flags = {
        "memory_budget": ("memory_budget", parse_bytes),
        "threads": ("worker_count", int),
        "format": ("output_format", str),
        "cache_dir": ("cache_dir", str),
        "seed": ("seed", int),
    }
    overridden = False
    for name, (attr, conv) in flags.items():
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, attr, conv(value))
            overridden = True
    if getattr(args, "no_timing", False):
        cfg.no_timing = True
        overridden = True
    if overridden:
        cfg.source += " + flags"
    return cfg.validate()


def _prepare_threads(workers: int) -> None:
    # numba sizes its pool on import; make room for the requested workers first
    if "numba" not in sys.modules and workers > 1:
        cur = int(os.environ.get("NUMBA_NUM_THREADS", "0") or 0)
        os.environ["NUMBA_NUM_THREADS"] = str(max(cur, workers, os.cpu_count() or 1))


def _engine_options(cfg: RunConfig):
    from .classes import EngineOptions
    return EngineOptions(memory_budget=cfg.memory_budget, workers=cfg.worker_count)


def _provenance(command: str, cfg: RunConfig, args: dict) -> dict:
    # the worker count is deliberately absent: output must not depend on it
    from .harness import ENGINE_VERSION
    return {
        "tool": f"permclass {__version__}",
        "engine_version": ENGINE_VERSION,
        "command": command,
        "args": args,
        "seed": cfg.seed,
    }


def _header(command: str, cfg: RunConfig, args: dict) -> str:
    from .harness import ENGINE_VERSION
    argtext = " ".join(f"{k}={v}" for k, v in args.items())
    return "\n".join([
        f"# permclass {__version__} ({ENGINE_VERSION})",
        f"# command: {command} {argtext}".rstrip(),
        f"# config ({cfg.source}): memory_budget={cfg.memory_budget} threads={cfg.worker_count} "
        f"cache_dir={cfg.cache_dir} seed={cfg.seed}",
    ])


def _table(rows: list[dict], columns: list[str]) -> str:
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


class Output:
    """Collects one report and renders it in the configured format."""

    def __init__(self, command: str, cfg: RunConfig, args: dict):
        self.command = command
        self.cfg = cfg
        self.args = args

    def render(self, payload: dict, rows: list[dict], columns: list[str],
               summary: list[str] = (), csv_text: Optional[str] = None) -> str:
        fmt = self.cfg.output_format
        if fmt == "json":
            doc = {"provenance": _provenance(self.command, self.cfg, self.args)}
            doc.update(payload)
            return json.dumps(doc, indent=2, sort_keys=False) + "\n"
        if fmt == "csv":
            return csv_text if csv_text is not None else _csv(rows, columns)
        parts = [_header(self.command, self.cfg, self.args)]
        parts += list(summary)
        if rows:
            parts.append(_table(rows, columns))
        return "\n".join(parts) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classes(args, cfg: RunConfig) -> int:
    from .classes import enumerate_classes
    from .patterns import ReplacementSet

    try:
        pi = ReplacementSet.parse(args.patterns)
    except InvalidWordError as exc:
        raise UsageError(str(exc)) from None
    t0 = time.perf_counter()
    part = enumerate_classes(args.n, pi, _engine_options(cfg))
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    payload = part.to_dict()
    if not cfg.no_timing:
        payload["wall_ms"] = wall_ms
    rows = [dict(index=i, **c.to_dict()) for i, c in enumerate(part.classes)]
    out = Output("classes", cfg, {"n": args.n, "patterns": pi.canonical()})
    summary = [
        f"n={part.n} patterns={pi.canonical()} total={part.class_count_total} "
        f"nontrivial={part.class_count_nontrivial} singletons={part.singleton_count}"
        + ("" if cfg.no_timing else f" wall_ms={wall_ms}")
    ]
    _emit(out.render(payload, rows, ["index", "size", "representative", "even_count", "odd_count"],
                     summary, csv_text=part.to_csv()), args.output)
    return EXIT_OK


def cmd_rotational(args, cfg: RunConfig) -> int:
    from .pseudo import rotational_profile

    m = _parse_perm(args.m)
    prof = rotational_profile(m, args.n_max, _engine_options(cfg))
    payload = prof.to_dict()
    rows = [{"n": n, "nontrivial": f} for n, f in sorted(prof.f.items())]
    out = Output("rotational", cfg, {"m": str(m), "n_max": args.n_max})
    summary = [f"m={m} t={prof.t if prof.t is not None else 'not reached'} "
               f"alternating={prof.alternating}"]
    if prof.odd_length:
        summary.append("odd length: parity-split expected")
    _emit(out.render(payload, rows, ["n", "nontrivial"], summary), args.output)
    return EXIT_OK


def _parse_perm(text: str):
    from .perm import Permutation
    try:
        return Permutation.parse(text)
    except InvalidWordError as exc:
        raise UsageError(str(exc)) from None


def cmd_pseudo(args, cfg: RunConfig) -> int:
    from .pseudo import enumerate_pseudo_classes

    m = _parse_perm(args.m)
    if args.n < m.n + 1:
        raise UsageError(f"--n must be at least |m|+1 = {m.n + 1}")
    part = enumerate_pseudo_classes(args.n, m, memory_budget=cfg.memory_budget)
    payload = part.to_dict()
    rows = [dict(index=i, **c.to_dict()) for i, c in enumerate(part.classes)]
    out = Output("pseudo", cfg, {"m": args.m, "n": args.n})
    summary = [f"m={part.m} n={part.n} states={part.state_count} classes={part.class_count} "
               f"parity_pure={part.parity_pure}"]
    _emit(out.render(payload, rows, ["index", "size", "seed", "even_count", "odd_count"], summary),
          args.output)
    return EXIT_OK


def cmd_erdos(args, cfg: RunConfig) -> int:
    from .erdos import verify_es_theorem

    if args.k < 3:
        raise UsageError("--k must be at least 3")
    rep = verify_es_theorem(args.k, args.n, _engine_options(cfg))
    payload = rep.to_dict()
    row = {k: v for k, v in payload.items() if k != "thresholds"}
    out = Output("erdos", cfg, {"k": args.k, "n": args.n})
    th = rep.thresholds
    summary = [
        f"k={rep.k} n={rep.n} classes={rep.classes_total} predicted={rep.predicted} "
        f"regime={rep.regime!r} pass={rep.passed}",
        f"thresholds: proven n>={th['proven']} (not reachable at n<=12), "
        f"conjectured n>={th['conjectured']}",
    ]
    cols = ["k", "n", "classes_total", "classes_nontrivial", "singletons", "predicted", "regime",
            "parity_pure", "pass"]
    _emit(out.render(payload, [row], cols, summary), args.output)
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_oeis(args, cfg: RunConfig) -> int:
    from .harness import SUITES, ResultCache, run_experiment, subconjecture_check

    names = list(SUITES) if args.suite == "all" else [args.suite]
    cache = ResultCache(cfg.cache_dir) if cfg.cache_dir else None
    opts = _engine_options(cfg)
    n_min = args.n_min
    reports = []
    rows = []
    failed = False
    for name in names:
        if name == "subconjecture":
            for n in range(max(8, n_min), min(args.n_max, 10) + 1):
                res = subconjecture_check(n, opts)
                verdict = "match" if res.match else "mismatch"
                failed |= not res.match
                rows.append({"suite": name, "n": n, "computed": res.count,
                             "predicted": res.predicted, "verdict": verdict})
                reports.append({"suite": name, **res.to_dict()})
            continue
        pi, formula = SUITES[name]
        rep = run_experiment(pi, range(n_min, args.n_max + 1), formula, cache, opts)
        failed |= not rep.ok
        reports.append({"suite": name, **rep.to_dict(timing=not cfg.no_timing)})
        for r in rep.rows:
            rows.append({"suite": name, **r.to_dict(timing=not cfg.no_timing)})
    out = Output("oeis", cfg, {"suite": args.suite, "n_min": n_min, "n_max": args.n_max})
    cols = ["suite", "n", "computed", "predicted", "verdict"]
    if not cfg.no_timing:
        cols.append("wall_ms")
    _emit(out.render({"experiments": reports}, rows, cols), args.output)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    from .checks import run_suite

    results = run_suite(args.suite, cfg.seed)
    rows = [r.to_dict() for r in results]
    passed = all(r.passed for r in results)
    out = Output("verify", cfg, {"suite": args.suite})
    summary = [f"suite={args.suite} seed={cfg.seed} checks={len(results)} "
               f"failed={sum(not r.passed for r in results)}"]
    _emit(out.render({"pass": passed, "checks": rows}, rows,
                     ["suite", "name", "passed", "detail"], summary), args.output)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_sweep(args, cfg: RunConfig) -> int:
    from .harness import ResultCache, sweep_pairs

    cache = ResultCache(cfg.cache_dir) if cfg.cache_dir else None
    ns = list(range(args.n_min, args.n_max + 1))
    res = sweep_pairs(ns, cache, _engine_options(cfg))
    rows = [{"patterns": ",".join(r["patterns"]), **r["counts"]} for r in res]
    out = Output("sweep", cfg, {"n_min": args.n_min, "n_max": args.n_max})
    _emit(out.render({"pairs": res}, rows, ["patterns"] + [str(n) for n in ns]), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"])
    common.add_argument("--output", metavar="PATH")
    common.add_argument("--memory-budget", metavar="BYTES")
    common.add_argument("--threads", type=int)
    common.add_argument("--cache-dir", metavar="PATH")
    common.add_argument("--no-timing", action="store_true")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="permclass", description="Pattern-replacement equivalence classes.")
    parser.add_argument("--version", action="version", version=f"permclass {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classes", parents=[common], help="partition S_n under a replacement set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", required=True, help='e.g. "1234,3421" or "adj:1324,3241"')
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("rotational", parents=[common], help="f(n) under m-rotational equivalence")
    p.add_argument("--m", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_rotational)

    p = sub.add_parser("pseudo", parents=[common], help="pseudo-permutation classes")
    p.add_argument("--m", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("erdos", parents=[common], help="{12..k, k..21} class count check")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_erdos)

    p = sub.add_parser("oeis", parents=[common], help="compare class counts with closed forms")
    p.add_argument("--suite", default="all",
                   choices=["all", "linear", "exponential", "cubic", "subconjecture"])
    p.add_argument("--n-min", type=int, default=7)
    p.add_argument("--n-max", type=int, default=9)
    p.set_defaults(func=cmd_oeis)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="all pairs of length-4 patterns")
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=7)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args)
        if args.command == "verify":
            from .checks import SUITES as CHECKS
            if args.suite != "all" and args.suite not in CHECKS:
                raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(CHECKS)}")
        _prepare_threads(cfg.worker_count)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"permclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"permclass: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PermclassError as exc:
        print(f"permclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"permclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
