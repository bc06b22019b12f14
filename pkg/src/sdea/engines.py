"""Optimizer state machines, advanced one generation at a time.

Four elitist mutation-only optimizers over {0,1}^n:

* ``static``: (1+1) EA with a fixed mutation strength r.
* ``sd``:     (1+1) EA with stagnation detection.  A counter of
  non-improving generations is compared against the threshold
  2 (en/r)^r ln(nR); once exceeded, the strength rises from r to r+1,
  which statistically certifies that no improvement exists at Hamming
  distance r.
* ``sasd``:   (1+lambda) EA with two-rate self-adjustment plus the same
  stagnation-detection module, switching into a dedicated strength-raising
  state on timeout.
* ``fea``:    (1+1) EA drawing a fresh heavy-tailed strength each step.

These implementations are the semantic reference: deliberately plain,
one mutation per line of the underlying pseudocode.  The accelerated
runners in ``fastpath`` are validated against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bitstrings import (
    BitString,
    RandomStream,
    power_law_strength,
    random_bitstring,
    standard_bit_mutation,
)
from .problems import Problem

# Thresholds above 2^62 are treated as +infinity: such phases can only end
# with an improvement, never with a timeout.
LOG_THRESHOLD_CAP = 62.0 * math.log(2.0)


@dataclass(frozen=True)
class ThresholdSpec:
    """Parameters of the stagnation threshold 2 (en/r)^r ln(nR) / lambda."""

    n: int
    R: float
    lam: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("threshold spec needs n >= 2")
        if self.R < 1:
            raise ValueError("R must be >= 1")
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")


def log_threshold(r: float, spec: ThresholdSpec) -> float:
    """Natural log of the counter threshold at strength r.

    ln 2 + r (1 + ln(n/r)) + ln ln(nR) - ln lambda, always finite even when
    the threshold itself overflows doubles.
    """
    if r < 1:
        raise ValueError(f"strength must be >= 1, got {r}")
    n = spec.n
    return (
        math.log(2.0)
        + r * (1.0 + math.log(n / r))
        + math.log(math.log(n * spec.R))
        - math.log(spec.lam)
    )


def threshold_value(r: float, spec: ThresholdSpec) -> float:
    """The threshold itself; +inf once it exceeds the 2^62 cap."""
    lt = log_threshold(r, spec)
    return math.inf if lt > LOG_THRESHOLD_CAP else math.exp(lt)


def counter_exceeds_threshold(u: int, r: float, spec: ThresholdSpec) -> bool:
    """Evaluate the guard ``u > threshold(r)`` without overflow."""
    if u <= 0:
        return False
    lt = log_threshold(r, spec)
    if lt > LOG_THRESHOLD_CAP:
        return False
    return math.log(u) > lt


def phase_length(r: float, spec: ThresholdSpec) -> int | None:
    """Number of consecutive non-improving generations after which the
    strength is raised; None when the phase cannot time out."""
    lt = log_threshold(r, spec)
    if lt > LOG_THRESHOLD_CAP:
        return None
    return math.floor(math.exp(lt)) + 1


@dataclass
class EngineState:
    """Mutable per-run optimizer state."""

    current: BitString
    current_fitness: int
    strength: float
    counter: int = 0
    sd_active: bool = False
    evaluations: int = 1  # the initial point counts as one fitness call
    max_strength_seen: float = 0.0

    def __post_init__(self):
        if self.max_strength_seen < self.strength:
            self.max_strength_seen = self.strength


# ---------------------------------------------------------------------------
# single-generation transition functions


def static_ea_step(state: EngineState, problem: Problem, r: float, rng: RandomStream) -> EngineState:
    """One generation of the (1+1) EA at fixed strength r; y replaces x iff
    f(y) >= f(x)."""
    y = standard_bit_mutation(state.current, r, rng)
    fy = problem.evaluate(y)
    state.evaluations += 1
    if fy >= state.current_fitness:
        state.current = y
        state.current_fitness = fy
    return state


def sd_ea_step(state: EngineState, problem: Problem, spec: ThresholdSpec, rng: RandomStream) -> EngineState:
    """One generation of the stagnation-detection (1+1) EA.

    Order matters: mutate, count, accept (strict improvement resets r and u;
    equal fitness moves are taken only at strength 1), then the timeout check
    with the strength this generation was sampled at.
    """
    r = state.strength
    y = standard_bit_mutation(state.current, r, rng)
    fy = problem.evaluate(y)
    state.evaluations += 1
    state.counter += 1
    if fy > state.current_fitness:
        state.current = y
        state.current_fitness = fy
        state.strength = 1.0
        state.counter = 0
    elif fy == state.current_fitness and r == 1:
        state.current = y
    if counter_exceeds_threshold(state.counter, r, spec):
        state.strength = min(r + 1, spec.n / 2)
        state.counter = 0
    if state.strength > state.max_strength_seen:
        state.max_strength_seen = state.strength
    return state


def fast_ea_step(state: EngineState, problem: Problem, beta: float, rng: RandomStream) -> EngineState:
    """One generation of the heavy-tailed (1+1) EA: draw a strength from the
    power law on {1, ..., floor(n/2)}, then behave like the static EA."""
    upper = max(1, problem.n // 2)
    alpha = power_law_strength(beta, upper, rng)
    if alpha > state.max_strength_seen:
        state.max_strength_seen = float(alpha)
    return static_ea_step(state, problem, float(alpha), rng)


def sasd_ea_step(
    state: EngineState,
    problem: Problem,
    spec: ThresholdSpec,
    r_init: float,
    rng: RandomStream,
) -> EngineState:
    """One generation of the two-rate (1+lambda) EA with stagnation detection.

    In the normal state, half the offspring are created at strength r/2 and
    half at 2r; the best offspring (ties broken uniformly) is accepted iff it
    is at least as fit, and the strength moves toward the winner's rate or
    takes a random halving/doubling step, clamped to [2, n/4].  Once the
    counter exceeds threshold(r)/lambda, the engine enters the SD state: all
    offspring share one strength, only strict improvements are accepted, and
    timeouts raise the strength exactly as in the (1+1) case.
    """
    lam = spec.lam
    n = spec.n
    if lam < 2 or lam % 2 != 0:
        raise ValueError(f"lambda must be even and >= 2, got {lam}")
    r = state.strength
    fx = state.current_fitness
    state.counter += 1

    if state.sd_active:
        best, best_f = _best_offspring(state.current, [r] * lam, problem, rng)[:2]
        state.evaluations += lam
        if r > state.max_strength_seen:
            state.max_strength_seen = r
        if best_f > fx:
            state.current = best
            state.current_fitness = best_f
            state.strength = float(r_init)
            state.sd_active = False
            state.counter = 0
        elif counter_exceeds_threshold(state.counter, r, spec):
            state.strength = min(r + 1, n / 2)
            state.counter = 0
        return state

    strengths = [r / 2.0] * (lam // 2) + [2.0 * r] * (lam // 2)
    best, best_f, winner_strength = _best_offspring(state.current, strengths, problem, rng)
    state.evaluations += lam
    if 2.0 * r > state.max_strength_seen:
        state.max_strength_seen = 2.0 * r
    if best_f >= fx:
        if best_f > fx:
            state.counter = 0
        state.current = best
        state.current_fitness = best_f
    if rng.generator.random() < 0.5:
        new_r = winner_strength
    else:
        new_r = r / 2.0 if rng.generator.random() < 0.5 else 2.0 * r
    state.strength = min(max(2.0, new_r), n / 4.0)
    # the timeout guard uses the strength the offspring were sampled with
    if counter_exceeds_threshold(state.counter, r, spec):
        state.strength = 2.0
        state.sd_active = True
        state.counter = 0
    return state


def _best_offspring(x: BitString, strengths, problem: Problem, rng: RandomStream):
    """Create one offspring per strength; return (best, fitness, strength)
    with uniform tie-breaking among maximizers."""
    offspring = []
    for s in strengths:
        y = standard_bit_mutation(x, s, rng)
        offspring.append((problem.evaluate(y), y, s))
    best_f = max(f for f, _, _ in offspring)
    winners = [entry for entry in offspring if entry[0] == best_f]
    if len(winners) == 1:
        pick = winners[0]
    else:
        pick = winners[int(rng.generator.integers(0, len(winners)))]
    return pick[1], pick[0], pick[2]


# ---------------------------------------------------------------------------
# engines as objects (algorithm id + parameters + init/step)


class Engine:
    algo_id: str = "engine"

    def initialize(self, problem: Problem, rng: RandomStream) -> EngineState:
        x = random_bitstring(problem.n, rng)
        return EngineState(current=x, current_fitness=problem.evaluate(x), strength=self._initial_strength(problem))

    def _initial_strength(self, problem: Problem) -> float:
        raise NotImplementedError

    def step(self, state: EngineState, problem: Problem, rng: RandomStream) -> EngineState:
        raise NotImplementedError

    def param_items(self, problem: Problem) -> list[str]:
        return []

    def param_string(self, problem: Problem) -> str:
        items = problem_param_items(problem) + self.param_items(problem)
        return " ".join(items)


def problem_param_items(problem: Problem) -> list[str]:
    s = problem.param_string()
    return [s] if s else []


class StaticEA(Engine):
    algo_id = "static"

    def __init__(self, r: float):
        if r <= 0:
            raise ValueError(f"strength must be positive, got {r}")
        self.r = float(r)

    def _initial_strength(self, problem):
        if self.r > problem.n:
            raise ValueError(f"strength {self.r} exceeds n={problem.n}")
        return self.r

    def step(self, state, problem, rng):
        return static_ea_step(state, problem, self.r, rng)

    def param_items(self, problem):
        r = self.r
        return [f"r={int(r)}" if r.is_integer() else f"r={r}"]


class SDEA(Engine):
    algo_id = "sd"

    def __init__(self, R: float | None = None):
        self.R = R

    def threshold_spec(self, problem: Problem) -> ThresholdSpec:
        R = self.R if self.R is not None else problem.image_size_hint
        return ThresholdSpec(problem.n, R, 1)

    def _initial_strength(self, problem):
        return 1.0

    def step(self, state, problem, rng):
        return sd_ea_step(state, problem, self.threshold_spec(problem), rng)

    def param_items(self, problem):
        # only explicitly configured parameters; resolved defaults such as
        # R = image_size_hint vary with n and would fragment cell labels
        return [f"R={_fmt_num(self.R)}"] if self.R is not None else []


class FastEA(Engine):
    algo_id = "fea"

    def __init__(self, beta: float):
        if beta <= 1:
            raise ValueError(f"beta must be > 1, got {beta}")
        self.beta = float(beta)

    def _initial_strength(self, problem):
        return 1.0

    def initialize(self, problem, rng):
        state = super().initialize(problem, rng)
        state.max_strength_seen = 0.0
        return state

    def step(self, state, problem, rng):
        return fast_ea_step(state, problem, self.beta, rng)

    def param_items(self, problem):
        return [f"beta={_fmt_num(self.beta)}"]


def default_lambda(n: int) -> int:
    """ceil(ln n), rounded up to the next even integer so the two rate
    groups are equal-sized."""
    lam = max(2, math.ceil(math.log(n)))
    return lam if lam % 2 == 0 else lam + 1


class SASDEA(Engine):
    algo_id = "sasd"

    def __init__(self, lam: int | None = None, r_init: float = 2.0, R: float | None = None):
        if lam is not None and (lam < 2 or lam % 2 != 0):
            raise ValueError(f"lambda must be even and >= 2, got {lam}")
        self.lam = lam
        self.r_init = float(r_init)
        self.R = R

    def resolved_lambda(self, problem: Problem) -> int:
        return self.lam if self.lam is not None else default_lambda(problem.n)

    def threshold_spec(self, problem: Problem) -> ThresholdSpec:
        R = self.R if self.R is not None else problem.image_size_hint
        return ThresholdSpec(problem.n, R, self.resolved_lambda(problem))

    def _initial_strength(self, problem):
        if not 2.0 <= self.r_init <= problem.n / 4.0:
            raise ValueError(f"r_init must lie in [2, n/4], got {self.r_init} for n={problem.n}")
        return self.r_init

    def step(self, state, problem, rng):
        return sasd_ea_step(state, problem, self.threshold_spec(problem), self.r_init, rng)

    def param_items(self, problem):
        items = []
        if self.lam is not None:
            items.append(f"lambda={self.lam}")
        if self.r_init != 2.0:
            items.append(f"r_init={_fmt_num(self.r_init)}")
        if self.R is not None:
            items.append(f"R={_fmt_num(self.R)}")
        return items


def _fmt_num(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else str(v)


def make_engine(
    algo: str,
    *,
    r: float | None = None,
    beta: float | None = None,
    lam: int | None = None,
    r_init: float = 2.0,
    R: float | None = None,
) -> Engine:
    """Algorithm selection by string id: static, sd, sasd, fea."""
    key = algo.strip().lower()
    if key == "static":
        if r is None:
            raise ValueError("static requires the strength parameter r")
        return StaticEA(r)
    if key == "sd":
        return SDEA(R=R)
    if key == "sasd":
        return SASDEA(lam=lam, r_init=r_init, R=R)
    if key == "fea":
        if beta is None:
            raise ValueError("fea requires the parameter beta")
        return FastEA(beta)
    raise ValueError(f"unknown algorithm id: {algo!r}")


# ---------------------------------------------------------------------------
# whole runs


@dataclass
class RunRecord:
    """Outcome of one run; success holds exactly when the terminal condition
    was the global optimum."""

    algorithm: str
    problem: str
    n: int
    params: str
    run_index: int
    seed: int
    evaluations: int
    success: bool
    terminal: str
    final_fitness: int
    max_strength: float


TERMINAL_OPTIMUM = "optimum"
TERMINAL_TRAP = "trap"
TERMINAL_BUDGET = "budget"


def run_to_termination(
    engine: Engine,
    problem: Problem,
    budget: int,
    rng: RandomStream,
    run_index: int = 0,
    state: EngineState | None = None,
) -> RunRecord:
    """Step the engine until the global optimum, a trap state, or budget
    exhaustion.  The initial point counts as one evaluation."""
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if state is None:
        state = engine.initialize(problem, rng)
    while True:
        if problem.is_global_optimum(state.current):
            terminal = TERMINAL_OPTIMUM
            break
        if problem.is_trap_state(state.current):
            terminal = TERMINAL_TRAP
            break
        if state.evaluations >= budget:
            terminal = TERMINAL_BUDGET
            break
        engine.step(state, problem, rng)
    return RunRecord(
        algorithm=engine.algo_id,
        problem=problem.kind,
        n=problem.n,
        params=engine.param_string(problem),
        run_index=run_index,
        seed=rng.seed,
        evaluations=state.evaluations,
        success=terminal == TERMINAL_OPTIMUM,
        terminal=terminal,
        final_fitness=state.current_fitness,
        max_strength=state.max_strength_seen,
    )
