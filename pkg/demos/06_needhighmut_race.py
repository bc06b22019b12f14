"""The mutation-rate phase transition on NeedHighMut.

Success requires activating all suffix blocks (two-bit flips) before the
prefix (one-bit flips) overshoots its threshold, so rates around 1/n,
which are optimal for one-bit progress, walk straight into the trap, and
only rates a constant factor higher reach the global optimum.  Stagnation
detection does not help: the function is unimodal until the trap, so the
strength stays at 1 until it is too late.

Run: python3 demos/06_needhighmut_race.py       (about two minutes)
"""

from sdea import AlgorithmSpec, ExperimentConfig, ProblemSpec, run_experiment, summarize

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
    runs=100,
    base_seed=1,
    budget=None,  # 1e4 n^2 safety net; runs normally end at the optimum or trap
    jobs=2,
)

records = run_experiment(config)
print(f"{'engine':<16}{'success':>9}{'trapped':>9}{'mean evals':>14}")
for s in summarize(records):
    label = f"{s.algorithm} {s.params.replace('xi=3', '').strip()}".strip()
    trapped = sum(r.terminal == "trap" for r in records
                  if (r.algorithm, r.params) == (s.algorithm, s.params)) / s.count
    mean_all = sum(r.evaluations for r in records
                   if (r.algorithm, r.params) == (s.algorithm, s.params)) / s.count
    print(f"{label:<16}{s.success_ratio:>9.2f}{trapped:>9.2f}{mean_all:>14.0f}")
