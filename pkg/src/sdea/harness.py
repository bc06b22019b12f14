"""Deterministic experiment orchestration and CSV persistence.

A configuration enumerates cells (algorithm x problem x n); every run is
seeded as mix64(base_seed, cell_id, run_index), where cell_id hashes the
canonical cell key string.  Results are therefore byte-identical across
re-runs and across worker counts: workers never share state and records
are sorted canonically before anything is written.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitstrings import RandomStream, mix64
from .engines import RunRecord, make_engine
from .fastpath import run_auto
from .problems import Problem, make_problem

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class AlgorithmSpec:
    """Algorithm id plus its parameters, as given (defaults stay implicit).

    ``budget`` optionally caps this algorithm's runs below the experiment
    budget; the canned Table-1 reproduction uses it for the two-rate engine
    on NeedHighMut, whose strength provably ratchets to n/4 there and
    whose runs would otherwise crawl through the full safety-net budget
    with an unchanged outcome (no successes)."""

    algo: str
    r: float | None = None
    beta: float | None = None
    lam: int | None = None
    r_init: float | None = None
    R: float | None = None
    budget: int | None = None

    def make(self):
        return make_engine(
            self.algo,
            r=self.r,
            beta=self.beta,
            lam=self.lam,
            r_init=self.r_init if self.r_init is not None else 2.0,
            R=self.R,
        )

    def key_items(self) -> list[str]:
        items = [f"algo={self.algo}"]
        for name in ("r", "beta", "lam", "r_init", "R"):
            value = getattr(self, name)
            if value is not None:
                items.append(f"{name}={_fmt(value)}")
        return items


@dataclass(frozen=True)
class ProblemSpec:
    problem: str
    m: int | None = None
    xi: float | None = None

    def make(self, n: int) -> Problem:
        return make_problem(self.problem, n, m=self.m, xi=self.xi)

    def key_items(self) -> list[str]:
        items = [f"problem={self.problem}"]
        if self.m is not None:
            items.append(f"m={self.m}")
        if self.xi is not None:
            items.append(f"xi={_fmt(self.xi)}")
        return items


def _fmt(v) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


@dataclass(frozen=True)
class ExperimentConfig:
    """Algorithms x problems x dimensions x repetitions; fully determines
    every record."""

    algorithms: tuple[AlgorithmSpec, ...]
    problems: tuple[ProblemSpec, ...]
    n_values: tuple[int, ...]
    runs: int
    base_seed: int
    budget: int | None = None  # None: 1e4 n^2 for needhighmut, 1e9 otherwise
    jobs: int = 1
    implementation: str = "auto"

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not self.algorithms or not self.problems or not self.n_values:
            raise ValueError("config needs at least one algorithm, problem and n")

    def cells(self):
        for pspec in self.problems:
            for aspec in self.algorithms:
                for n in self.n_values:
                    yield aspec, pspec, n


def resolve_budget(
    config_budget: int | None,
    pspec: ProblemSpec,
    n: int,
    aspec: AlgorithmSpec | None = None,
) -> int:
    if config_budget is not None:
        budget = config_budget
    elif pspec.problem == "needhighmut":
        budget = 10**4 * n * n
    else:
        budget = DEFAULT_BUDGET
    if aspec is not None and aspec.budget is not None:
        budget = min(budget, aspec.budget)
    return budget


def cell_key(aspec: AlgorithmSpec, pspec: ProblemSpec, n: int) -> str:
    return " ".join(pspec.key_items() + [f"n={n}"] + aspec.key_items())


def cell_id(key: str) -> int:
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def run_seed(base_seed: int, cid: int, run_index: int) -> int:
    return mix64(base_seed, cid, run_index)


# worker-side caches; harmless to rebuild, never affect outputs
_problem_cache: dict[tuple, Problem] = {}


def _cached_problem(pspec: ProblemSpec, n: int) -> Problem:
    key = (pspec, n)
    problem = _problem_cache.get(key)
    if problem is None:
        problem = _problem_cache[key] = pspec.make(n)
    return problem


def _execute_run(payload) -> RunRecord:
    aspec, pspec, n, budget, run_index, seed, implementation = payload
    problem = _cached_problem(pspec, n)
    engine = aspec.make()
    return run_auto(
        engine, problem, budget, RandomStream(seed),
        run_index=run_index, implementation=implementation,
    )


def _record_sort_key(rec: RunRecord):
    return (rec.problem, rec.algorithm, rec.params, rec.n, rec.run_index)


def run_experiment(config: ExperimentConfig) -> list[RunRecord]:
    """Execute runs x cells; output is independent of scheduling order."""
    payloads = []
    for aspec, pspec, n in config.cells():
        cid = cell_id(cell_key(aspec, pspec, n))
        budget = resolve_budget(config.budget, pspec, n, aspec)
        for run_index in range(config.runs):
            payloads.append(
                (aspec, pspec, n, budget, run_index,
                 run_seed(config.base_seed, cid, run_index), config.implementation)
            )
    if config.jobs <= 1 or len(payloads) <= 1:
        records = [_execute_run(p) for p in payloads]
    else:
        chunk = max(1, len(payloads) // (config.jobs * 8))
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_execute_run, payloads, chunksize=chunk))
    records.sort(key=_record_sort_key)
    return records


# ---------------------------------------------------------------------------
# aggregation


@dataclass(frozen=True)
class CellSummary:
    problem: str
    algorithm: str
    n: int
    params: str
    count: int
    success_ratio: float
    mean_evals: float | None
    median_evals: float | None
    q1: float | None
    q3: float | None
    min_evals: float | None
    max_evals: float | None


def summarize(records: list[RunRecord]) -> list[CellSummary]:
    """Per-cell aggregation; evaluation statistics cover successful runs
    only (failed runs carry budget-censored counts), the success ratio
    covers all runs.  Quantiles use linear interpolation."""
    if not records:
        raise ValueError("summarize needs a non-empty record list")
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault((rec.problem, rec.algorithm, rec.n, rec.params), []).append(rec)
    out = []
    for (problem, algorithm, n, params), recs in sorted(groups.items()):
        count = len(recs)
        evals = np.array([r.evaluations for r in recs if r.success], dtype=float)
        if evals.size:
            q1, med, q3 = np.percentile(evals, [25.0, 50.0, 75.0], method="linear")
            stats = (float(evals.mean()), float(med), float(q1), float(q3),
                     float(evals.min()), float(evals.max()))
        else:
            stats = (None, None, None, None, None, None)
        out.append(CellSummary(problem, algorithm, n, params, count,
                               sum(r.success for r in recs) / count, *stats))
    return out


@dataclass(frozen=True)
class StoppingPolicy:
    """Which terminal conditions apply: every run stops on the global
    optimum or on budget exhaustion; NeedHighMut runs additionally stop
    (as failures) on the trap state, since escaping it requires about
    prefix_len/10 simultaneous flips."""

    stop_on_trap: bool


def stopping_policy(problem: Problem) -> StoppingPolicy:
    return StoppingPolicy(stop_on_trap=problem.kind == "needhighmut")


# ---------------------------------------------------------------------------
# CSV persistence

RECORD_COLUMNS = "algorithm,problem,n,params,run_index,seed,evaluations,success,terminal,final_fitness,max_strength"
SUMMARY_COLUMNS = "problem,algorithm,n,params,count,success_ratio,mean_evals,median_evals,q1,q3,min,max"


def _csv_num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return str(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)
    return str(v)


def write_records_csv(records: list[RunRecord], path) -> None:
    rows = [RECORD_COLUMNS]
    for r in sorted(records, key=_record_sort_key):
        rows.append(",".join([
            r.algorithm, r.problem, str(r.n), r.params, str(r.run_index),
            str(r.seed), str(r.evaluations), _csv_num(r.success), r.terminal,
            str(r.final_fitness), _csv_num(float(r.max_strength)),
        ]))
    _write_lines(path, rows)


def write_summary_csv(summaries: list[CellSummary], path) -> None:
    rows = [SUMMARY_COLUMNS]
    for s in summaries:
        rows.append(",".join([
            s.problem, s.algorithm, str(s.n), s.params, str(s.count),
            _csv_num(float(s.success_ratio)), _csv_num(s.mean_evals),
            _csv_num(s.median_evals), _csv_num(s.q1), _csv_num(s.q3),
            _csv_num(s.min_evals), _csv_num(s.max_evals),
        ]))
    _write_lines(path, rows)


def _write_lines(path, rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(rows) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# config files: flat key=value text, one option per line


def load_config_file(path) -> dict[str, str]:
    options = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, value = line.split("=", 1)
                options[key.strip()] = value.strip()
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    return options
