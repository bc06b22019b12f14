"""Watching stagnation detection raise the mutation strength.

On the Jump plateau no single-bit or two-bit flip helps (for m=3), so the
counter of unsuccessful generations crosses threshold after threshold and
the strength climbs until it matches the gap, which makes the escaping
m-bit flip likely.

Run: python3 demos/03_stagnation_detection.py
"""

from sdea import (
    RandomStream,
    ThresholdSpec,
    make_engine,
    make_problem,
    phase_length,
    threshold_value,
)

n, m = 30, 3
problem = make_problem("jump", n, m=m)
spec = ThresholdSpec(n, R=n, lam=1)

print("counter thresholds 2(en/r)^r ln(nR):")
for r in (1, 2, 3, 4):
    print(f"  r={r}: {threshold_value(r, spec):.3e}  "
          f"(strength rises after {phase_length(r, spec)} silent generations)")

engine = make_engine("sd", R=n)
rng = RandomStream(11)
state = engine.initialize(problem, rng)
last_r, last_f = state.strength, state.current_fitness
print(f"\nstart: fitness {state.current_fitness}, strength {state.strength}")
while not problem.is_global_optimum(state.current):
    engine.step(state, problem, rng)
    if state.strength != last_r or state.current_fitness != last_f:
        what = []
        if state.current_fitness != last_f:
            what.append(f"fitness {last_f} -> {state.current_fitness}")
        if state.strength != last_r:
            what.append(f"strength {last_r:g} -> {state.strength:g}")
        print(f"  eval {state.evaluations:>8}: " + ", ".join(what))
        last_r, last_f = state.strength, state.current_fitness
print(f"optimum after {state.evaluations} evaluations; "
      f"max strength used: {state.max_strength_seen:g}")
