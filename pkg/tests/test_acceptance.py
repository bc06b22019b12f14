"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line.  All experiments are seeded (base seed 1, fixed before any
results were looked at) and run through the regular harness, so this module
doubles as an end-to-end exercise of the public surfaces."""

import time

import numpy as np

from sdea.bitstrings import BitString, RandomStream, mix64
from sdea.engines import ThresholdSpec, make_engine, sd_ea_step, EngineState
from sdea.fastpath import fast_run
from sdea.harness import (
    AlgorithmSpec,
    ExperimentConfig,
    ProblemSpec,
    run_experiment,
    summarize,
)
from sdea.problems import gap_bruteforce, make_problem
from sdea.theory import escape_bracket, partial_sum_sweep

BASE_SEED = 1
JOBS = 2


def _report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {name}: {status}" + (f"  [{detail}]" if detail else ""))
    return ok


def _bootstrap_ci(values, n_boot=2000, seed=999, level=0.95):
    gen = np.random.Generator(np.random.PCG64(seed))
    values = np.asarray(values, dtype=float)
    idx = gen.integers(0, values.size, size=(n_boot, values.size))
    means = values[idx].mean(axis=1)
    lo, hi = np.percentile(means, [100 * (1 - level) / 2, 100 * (1 + level) / 2])
    return float(lo), float(hi)


def _evaluations_by_algo(records):
    groups = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.params), []).append(rec.evaluations)
    return groups


# ---------------------------------------------------------------------------


def test_jump_ordering_fig1_desk_scale():
    """Jump_4, n=80, R=n, 1000 runs: mean evaluations must order
    static(m/n) <= SD <= FEA(1.5) <= FEA(2), each confirmed by
    non-overlapping 95% bootstrap confidence intervals."""
    config = ExperimentConfig(
        algorithms=(
            AlgorithmSpec("static", r=4.0),
            AlgorithmSpec("sd", R=80.0),
            AlgorithmSpec("fea", beta=1.5),
            AlgorithmSpec("fea", beta=2.0),
        ),
        problems=(ProblemSpec("jump", m=4),),
        n_values=(80,),
        runs=1000,
        base_seed=BASE_SEED,
        budget=10**9,
        jobs=JOBS,
    )
    records = run_experiment(config)
    assert all(r.success for r in records), "budget must not censor these runs"
    groups = _evaluations_by_algo(records)
    order = [
        ("static", "m=4 r=4"),
        ("sd", "m=4 R=80"),
        ("fea", "m=4 beta=1.5"),
        ("fea", "m=4 beta=2"),
    ]
    means = {key: float(np.mean(groups[key])) for key in order}
    cis = {key: _bootstrap_ci(groups[key]) for key in order}
    detail = "; ".join(
        f"{a}[{p}] mean={means[(a, p)]:.3g} CI=({cis[(a, p)][0]:.3g},{cis[(a, p)][1]:.3g})"
        for a, p in order
    )
    ok = True
    for left, right in zip(order, order[1:]):
        ok &= means[left] <= means[right]
        ok &= cis[left][1] < cis[right][0]  # non-overlapping intervals
    _report("jump ordering (static m/n <= SD <= FEA1.5 <= FEA2)", ok, detail)
    assert ok, detail


def test_sd_near_optimality_on_jump():
    """Jump_2, n=50, 1000 runs: SD mean within [3000, 25000], a factor-3
    band around (en/m)^m = (e*25)^2 plus the unimodal climbing phase."""
    config = ExperimentConfig(
        algorithms=(AlgorithmSpec("sd", R=50.0),),
        problems=(ProblemSpec("jump", m=2),),
        n_values=(50,),
        runs=1000,
        base_seed=BASE_SEED,
        budget=10**8,
        jobs=1,
    )
    records = run_experiment(config)
    mean = float(np.mean([r.evaluations for r in records]))
    ok = all(r.success for r in records) and 3000 <= mean <= 25000
    _report("SD near-optimality on Jump_2 n=50", ok, f"mean={mean:.1f}")
    assert ok


def test_escape_time_bracket():
    """From a Jump plateau point (n=20, m=2, R=20, r=1, u=0) the mean number
    of generations to a strict improvement over 500 runs lies in the
    analytic bracket [575, 5906]."""
    n, m = 20, 2
    problem = make_problem("jump", n, m=m)
    spec = ThresholdSpec(n, 20.0, 1)
    start = BitString(np.r_[np.ones(n - m, np.uint8), np.zeros(m, np.uint8)])
    f0 = problem.evaluate(start)
    waits = []
    for k in range(500):
        rng = RandomStream(mix64(BASE_SEED, 0xE5CA, k))
        state = EngineState(current=start, current_fitness=f0, strength=1.0)
        while state.current_fitness <= f0:
            sd_ea_step(state, problem, spec, rng)
        waits.append(state.evaluations - 1)
    mean = float(np.mean(waits))
    bracket = escape_bracket(n, m, 20.0)
    ok = 575 <= mean <= 5906 and bracket.lower < mean < bracket.upper
    _report("escape-time bracket on the Jump plateau", ok,
            f"mean={mean:.1f}, bracket=({bracket.lower:.1f}, {bracket.upper:.1f})")
    assert ok


def test_unimodal_simulation():
    """OneMax n=100, R=n, 1000 runs: at most 2 runs ever raise the strength;
    seed-paired SD vs static mean runtimes on LeadingOnes n=100 within 5%."""
    config = ExperimentConfig(
        algorithms=(AlgorithmSpec("sd", R=100.0),),
        problems=(ProblemSpec("onemax"),),
        n_values=(100,),
        runs=1000,
        base_seed=BASE_SEED,
        budget=10**8,
        jobs=1,
    )
    records = run_experiment(config)
    raised = sum(r.max_strength >= 2.0 for r in records)
    ok1 = raised <= 2 and all(r.success for r in records)

    problem = make_problem("leadingones", 100)
    sd_engine = make_engine("sd")
    st_engine = make_engine("static", r=1.0)
    sd_evals, st_evals = [], []
    for k in range(1000):
        seed = mix64(BASE_SEED, 0x10, k)
        sd_evals.append(fast_run(sd_engine, problem, 10**8, RandomStream(seed)).evaluations)
        st_evals.append(fast_run(st_engine, problem, 10**8, RandomStream(seed)).evaluations)
    ratio = float(np.mean(sd_evals)) / float(np.mean(st_evals))
    ok2 = abs(ratio - 1.0) <= 0.05
    _report("unimodal simulation (strength never leaves 1)", ok1 and ok2,
            f"runs with r>=2: {raised}/1000; LO seed-paired ratio {ratio:.4f}")
    assert ok1 and ok2


def test_needhighmut_phase_transition():
    """Table-1 reproduction at n=400, xi=3, 1000 runs per cell under the
    trap-stop policy: low rates and SD essentially never succeed, and
    success grows with the rate (8/n > 6/n > 2/n)."""
    config = ExperimentConfig(
        algorithms=(
            AlgorithmSpec("static", r=1.0),
            AlgorithmSpec("static", r=2.0),
            AlgorithmSpec("static", r=6.0),
            AlgorithmSpec("static", r=8.0),
            AlgorithmSpec("sd"),
        ),
        problems=(ProblemSpec("needhighmut", xi=3.0),),
        n_values=(400,),
        runs=1000,
        base_seed=BASE_SEED,
        budget=None,  # the stopping policy's 1e4 n^2 safety net
        jobs=JOBS,
    )
    summaries = summarize(run_experiment(config))
    ratio = {s.params.split()[-1]: s.success_ratio for s in summaries if s.algorithm == "static"}
    sd_ratio = next(s.success_ratio for s in summaries if s.algorithm == "sd")
    detail = (f"1/n={ratio['r=1']:.5f} 2/n={ratio['r=2']:.5f} 6/n={ratio['r=6']:.5f} "
              f"8/n={ratio['r=8']:.5f} sd={sd_ratio:.5f}")
    checks = {
        "success(1/n) <= 0.01": ratio["r=1"] <= 0.01,
        "success(2/n) <= 0.01": ratio["r=2"] <= 0.01,
        "success(8/n) >= 0.75": ratio["r=8"] >= 0.75,
        "success(SD) <= 0.02": sd_ratio <= 0.02,
        "monotone 8/n > 6/n > 2/n": ratio["r=8"] > ratio["r=6"] > ratio["r=2"],
    }
    ok = all(checks.values())
    failed = [name for name, passed in checks.items() if not passed]
    _report("NeedHighMut phase transition (Table 1, n=400)", ok,
            detail + ("; failed: " + ", ".join(failed) if failed else ""))
    # Known deviation: under this spec's layout (B = ceil(2/3 xi sqrt(n)) = 40
    # blocks of ceil(n^(1/4)) = 5 bits, prefix threshold 180), the exact
    # dynamics put success(8/n) near 0.42 at n=400, far from the source
    # table's 0.874; see the decisions ledger for the full analysis.
    assert ok, f"failed sub-checks: {failed} ({detail})"


def test_partial_sum_sweep_full_range():
    """The phase-length partial-sum inequality holds for all
    1 <= m < n <= 200, checked in under a second."""
    start = time.perf_counter()
    violations = partial_sum_sweep(200)
    elapsed = time.perf_counter() - start
    ok = violations == [] and elapsed < 1.0
    _report("partial-sum inequality sweep (n <= 200)", ok, f"{elapsed*1000:.0f} ms")
    assert ok


def test_gap_oracle_equivalence():
    """For n <= 12: every Jump plateau point (m in {2, 3}) has gap exactly m,
    and every non-optimal OneMax point has gap 1, by full enumeration."""
    ok = True
    for n in range(4, 13):
        for m in (2, 3):
            if m >= n:
                continue
            problem = make_problem("jump", n, m=m)
            for ones_positions in _combinations_indices(n, n - m):
                x = np.zeros(n, dtype=np.uint8)
                x[list(ones_positions)] = 1
                ok &= gap_bruteforce(x, problem) == m
    for n in range(2, 13):
        problem = make_problem("onemax", n)
        values = np.arange(1 << n, dtype=np.int64)
        bits = ((values[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)
        for x in bits:
            if int(x.sum()) == n:
                continue  # the optimum has no improving point
            ok &= gap_bruteforce(x, problem) == 1
        if not ok:
            break
    _report("gap oracle (Jump plateau gap = m; OneMax gap = 1)", ok)
    assert ok


def _combinations_indices(n, k):
    import itertools

    return itertools.combinations(range(n), k)


def test_cmd_run_determinism(tmp_path):
    """cmd_run twice with identical flags and --jobs in {1, 8} produces
    byte-identical record CSVs."""
    from sdea.cli import main

    outputs = []
    for tag, jobs in (("a", 1), ("b", 8), ("c", 1)):
        out = tmp_path / f"det_{tag}.csv"
        code = main([
            "run", "--algo", "sd", "--function", "jump", "--m", "2",
            "--n", "16:24:4", "--runs", "8", "--budget", "1e6",
            "--seed", "42", "--out", str(out), "--jobs", str(jobs),
        ])
        assert code == 0
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2]
    _report("record CSV determinism across --jobs 1/8", ok)
    assert ok


def test_trap_smoke():
    """Coarse sanity only (excluded from quantitative acceptance): SD finds
    the Trap optimum at n=14 within 1e8 evaluations in at least half of 20
    runs."""
    config = ExperimentConfig(
        algorithms=(AlgorithmSpec("sd"),),
        problems=(ProblemSpec("trap"),),
        n_values=(14,),
        runs=20,
        base_seed=BASE_SEED,
        budget=10**8,
        jobs=1,
    )
    records = run_experiment(config)
    ratio = float(np.mean([r.success for r in records]))
    ok = ratio >= 0.5
    _report("Trap smoke test (SD n=14)", ok, f"success={ratio:.2f}")
    assert ok
