"""Desk-scale comparison of the four engines on Jump_4.

Reproduces the qualitative picture of the canonical runtime figure: the
static EA at the (normally unknown) optimal rate m/n is fastest, the
stagnation-detecting EA is close behind without knowing m, and the
heavy-tailed EAs pay their polynomial overhead.

Run: python3 demos/04_jump_comparison.py        (about a minute)
"""

from sdea import AlgorithmSpec, ExperimentConfig, ProblemSpec, run_experiment, summarize

config = ExperimentConfig(
    algorithms=(
        AlgorithmSpec("static", r=4.0),
        AlgorithmSpec("static", r=1.0),
        AlgorithmSpec("sd", R=60.0),
        AlgorithmSpec("sasd"),
        AlgorithmSpec("fea", beta=1.5),
        AlgorithmSpec("fea", beta=2.0),
    ),
    problems=(ProblemSpec("jump", m=4),),
    n_values=(60,),
    runs=200,
    base_seed=1,
    budget=10**9,
    jobs=2,
)

records = run_experiment(config)
print(f"{'engine':<22}{'mean evals':>14}{'median':>14}{'success':>9}")
for s in sorted(summarize(records), key=lambda s: s.mean_evals or 0):
    label = f"{s.algorithm} {s.params}".strip()
    print(f"{label:<22}{s.mean_evals:>14.0f}{s.median_evals:>14.0f}{s.success_ratio:>9.3f}")
