import math

import numpy as np
import pytest

from sdea.bitstrings import BitString, RandomStream
from sdea.engines import (
    EngineState,
    ThresholdSpec,
    counter_exceeds_threshold,
    default_lambda,
    fast_ea_step,
    log_threshold,
    make_engine,
    phase_length,
    run_to_termination,
    sasd_ea_step,
    sd_ea_step,
    static_ea_step,
    threshold_value,
)
from sdea.problems import make_problem


class _FakeGen:
    def __init__(self, owner):
        self.owner = owner

    def random(self, size=None):
        if size is None:
            return self.owner.uniforms.pop(0)
        arr = np.ones(size)
        flips = self.owner.mutations.pop(0)
        if flips:
            arr[list(flips)] = 0.0
        return arr

    def integers(self, low, high=None, **kwargs):
        return self.owner.ints.pop(0)


class ScriptedStream:
    """Stand-in for RandomStream that plays back scripted draws: flip
    position sets for mutations, raw uniforms for coins, ints for ties."""

    def __init__(self, mutations=(), uniforms=(), ints=()):
        self.mutations = [set(m) for m in mutations]
        self.uniforms = list(uniforms)
        self.ints = list(ints)
        self.generator = _FakeGen(self)
        self.seed = 0


def _state(bits: str, problem, strength=1.0, counter=0, sd_active=False):
    x = BitString.from_string(bits)
    return EngineState(current=x, current_fitness=problem.evaluate(x),
                       strength=strength, counter=counter, sd_active=sd_active)


# ---------------------------------------------------------------------------
# thresholds


def test_threshold_examples():
    spec = ThresholdSpec(100, 100, 1)
    assert abs(threshold_value(1, spec) - 5007.26) < 0.1
    assert abs(threshold_value(2, spec) - 3.40e5) < 0.01e5
    assert math.exp(log_threshold(1, spec)) == pytest.approx(threshold_value(1, spec))


def test_threshold_infinite_sentinel_at_half_n():
    spec = ThresholdSpec(200, 200, 1)
    assert threshold_value(100, spec) == math.inf
    assert phase_length(100, spec) is None
    assert not counter_exceeds_threshold(2**62, 100, spec)


def test_threshold_lambda_division():
    one = ThresholdSpec(100, 100, 1)
    four = ThresholdSpec(100, 100, 4)
    assert threshold_value(1, four) == pytest.approx(threshold_value(1, one) / 4)


def test_phase_length_is_first_exceeding_counter():
    spec = ThresholdSpec(100, 100, 1)
    plen = phase_length(1, spec)
    assert plen == 5008
    assert not counter_exceeds_threshold(plen - 1, 1, spec)
    assert counter_exceeds_threshold(plen, 1, spec)


# ---------------------------------------------------------------------------
# static (1+1) EA


def test_static_step_accepts_strictly_fitter():
    problem = make_problem("onemax", 4)
    state = _state("0011", problem)
    static_ea_step(state, problem, 1.0, ScriptedStream(mutations=[{0}]))
    assert state.current == BitString.from_string("1011")
    assert state.current_fitness == 3
    assert state.evaluations == 2


def test_static_step_accepts_equal_fitness():
    problem = make_problem("onemax", 4)
    state = _state("0011", problem)
    static_ea_step(state, problem, 2.0, ScriptedStream(mutations=[{0, 2}]))
    assert state.current == BitString.from_string("1001")


def test_static_step_rejects_worse():
    problem = make_problem("onemax", 4)
    state = _state("0011", problem)
    static_ea_step(state, problem, 1.0, ScriptedStream(mutations=[{2}]))
    assert state.current == BitString.from_string("0011")


# ---------------------------------------------------------------------------
# SD-(1+1) EA


def test_sd_strict_improvement_resets_strength_and_counter():
    problem = make_problem("onemax", 4)
    spec = ThresholdSpec(4, 6, 1)
    state = _state("0011", problem, strength=3.0, counter=7)
    sd_ea_step(state, problem, spec, ScriptedStream(mutations=[{0}]))
    assert state.strength == 1.0
    assert state.counter == 0
    assert state.current_fitness == 3


def test_sd_equal_fitness_only_moves_at_strength_one():
    problem = make_problem("onemax", 4)
    spec = ThresholdSpec(4, 6, 1)
    state = _state("0011", problem, strength=2.0)
    sd_ea_step(state, problem, spec, ScriptedStream(mutations=[{0, 2}]))
    assert state.current == BitString.from_string("0011")  # rejected
    assert state.counter == 1

    state = _state("0011", problem, strength=1.0, counter=4)
    sd_ea_step(state, problem, spec, ScriptedStream(mutations=[{0, 2}]))
    assert state.current == BitString.from_string("1001")  # accepted
    assert state.counter == 5  # equal moves never reset the counter


def test_sd_counter_crossing_raises_strength():
    # first integer counter value exceeding the r=1 threshold 5007.37 is 5008
    problem = make_problem("onemax", 100)
    spec = ThresholdSpec(100, 100, 1)
    state = _state("1" * 99 + "0", problem, strength=1.0, counter=5007)
    sd_ea_step(state, problem, spec, ScriptedStream(mutations=[{0}]))  # 0...-> fitness 98, rejected
    assert state.counter == 0
    assert state.strength == 2.0
    assert state.max_strength_seen == 2.0


def test_sd_strength_capped_at_half_n():
    problem = make_problem("onemax", 10)
    spec = ThresholdSpec(10, 10, 1)
    plen = phase_length(5, spec)
    state = _state("1111111110", problem, strength=5.0, counter=plen - 1)
    sd_ea_step(state, problem, spec, ScriptedStream(mutations=[{0}]))
    assert state.strength == 5.0  # min(r+1, n/2) keeps it at n/2
    assert state.counter == 0


# ---------------------------------------------------------------------------
# heavy-tailed (1+1) EA


def test_fast_ea_singleton_support_at_n2():
    problem = make_problem("onemax", 2)
    rng = RandomStream(3)
    state = _state("00", problem)
    state.max_strength_seen = 0.0
    for _ in range(20):
        fast_ea_step(state, problem, 1.5, rng)
    assert state.max_strength_seen == 1.0  # floor(n/2) = 1: strength is always 1


def test_fast_ea_accepts_equal_fitness():
    problem = make_problem("onemax", 4)
    rng = RandomStream(11)
    moved = False
    for _ in range(200):
        state = _state("0011", problem)
        state.max_strength_seen = 0.0
        before = state.current
        fast_ea_step(state, problem, 2.0, rng)
        if state.current_fitness == 2 and state.current != before:
            moved = True
            break
    assert moved


# ---------------------------------------------------------------------------
# SASD-(1+lambda) EA


def _sasd_spec(n=40, lam=2, R=None):
    return ThresholdSpec(n, R if R is not None else n + 2, lam)


def test_sasd_adopts_winner_rate():
    problem = make_problem("onemax", 40)
    spec = _sasd_spec()
    state = _state("0" * 40, problem, strength=4.0)
    rng = ScriptedStream(mutations=[set(), {0}], uniforms=[0.3])  # winner is the 2r offspring
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.current_fitness == 1
    assert state.strength == 8.0  # adopted 2r, below the n/4 clamp
    assert state.counter == 0


def test_sasd_random_halving_clamps_at_two():
    problem = make_problem("onemax", 40)
    spec = _sasd_spec()
    x = "1" * 4 + "0" * 36
    state = _state(x, problem, strength=2.0)
    # both offspring worse and tied; coin selects the random action, halve
    rng = ScriptedStream(mutations=[{0}, {1}], uniforms=[0.7, 0.3], ints=[0])
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.current_fitness == 4  # rejected
    assert state.strength == 2.0  # r/2 = 1 clamped back to 2
    assert state.counter == 1


def test_sasd_adopt_clamps_at_quarter_n():
    problem = make_problem("onemax", 12)
    spec = _sasd_spec(n=12)
    state = _state("0" * 12, problem, strength=3.0)
    rng = ScriptedStream(mutations=[set(), {0}], uniforms=[0.1])
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.strength == 3.0  # adopted 2r = 6, clamped to n/4 = 3


def test_sasd_sd_state_improvement_returns_to_normal():
    problem = make_problem("onemax", 40)
    spec = _sasd_spec()
    x = "1" * 4 + "0" * 36
    state = _state(x, problem, strength=6.0, counter=9, sd_active=True)
    rng = ScriptedStream(mutations=[{38}, {0}])
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.sd_active is False
    assert state.strength == 2.0
    assert state.counter == 0
    assert state.current_fitness == 5


def test_sasd_sd_state_rejects_equal():
    problem = make_problem("onemax", 40)
    spec = _sasd_spec()
    x = "1" * 4 + "0" * 36
    state = _state(x, problem, strength=6.0, counter=0, sd_active=True)
    rng = ScriptedStream(mutations=[{3, 38}, {0}])  # equal-fitness move, and worse
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.current == BitString.from_string(x)
    assert state.sd_active is True
    assert state.counter == 1


def test_sasd_timeout_enters_sd_state_with_pre_update_rate():
    problem = make_problem("onemax", 40)
    lam = 2
    spec = _sasd_spec(lam=lam)
    plen = phase_length(4.0, spec)
    x = "1" * 4 + "0" * 36
    state = _state(x, problem, strength=4.0, counter=plen - 1)
    # worse offspring, tie; random action doubles the rate to 8, but the
    # timeout tests against the pre-update strength 4 and then forces r=2
    rng = ScriptedStream(mutations=[{0}, {1}], uniforms=[0.9, 0.9], ints=[1])
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.sd_active is True
    assert state.strength == 2.0
    assert state.counter == 0


def test_sasd_counter_resets_only_on_strict_improvement():
    problem = make_problem("onemax", 40)
    spec = _sasd_spec()
    state = _state("0011" + "0" * 36, problem, strength=4.0, counter=5)
    # equal-fitness winner: accepted, counter not reset
    rng = ScriptedStream(mutations=[{0, 2}, {1, 2, 3}], uniforms=[0.3])
    sasd_ea_step(state, problem, spec, 2.0, rng)
    assert state.counter == 6
    assert state.current == BitString.from_string("1001" + "0" * 36)


def test_sasd_rejects_odd_lambda():
    with pytest.raises(ValueError):
        make_engine("sasd", lam=3)
    problem = make_problem("onemax", 40)
    state = _state("0" * 40, problem, strength=2.0)
    with pytest.raises(ValueError):
        sasd_ea_step(state, problem, ThresholdSpec(40, 42, 3), 2.0, ScriptedStream())


def test_default_lambda_values():
    assert default_lambda(400) == 6  # ceil(ln 400) = 6, already even
    assert default_lambda(600) == 8  # ceil(ln 600) = 7, rounded up
    assert default_lambda(100) == 6
    assert default_lambda(3) == 2


# ---------------------------------------------------------------------------
# whole runs


def test_run_budget_one_stops_immediately():
    problem = make_problem("leadingones", 30)
    rec = run_to_termination(make_engine("static", r=1), problem, 1, RandomStream(5))
    assert rec.evaluations == 1
    assert rec.terminal == "budget"
    assert not rec.success


def test_run_sd_solves_onemax():
    problem = make_problem("onemax", 20)
    rec = run_to_termination(make_engine("sd"), problem, 10**6, RandomStream(7))
    assert rec.success and rec.terminal == "optimum"
    assert rec.evaluations <= 10**6
    assert rec.final_fitness == 20


def test_run_needhighmut_hits_trap():
    problem = make_problem("needhighmut", 12, xi=1.0)
    rec = run_to_termination(make_engine("static", r=1), problem, 10**6, RandomStream(3))
    assert rec.terminal == "trap"
    assert not rec.success


def test_evaluation_accounting_exact():
    problem = make_problem("onemax", 25)
    rng = RandomStream(9)
    engine = make_engine("sasd", lam=4)
    state = engine.initialize(problem, rng)
    for g in range(30):
        engine.step(state, problem, rng)
    assert state.evaluations == 1 + 30 * 4

    rng = RandomStream(10)
    engine = make_engine("sd")
    state = engine.initialize(problem, rng)
    for g in range(50):
        engine.step(state, problem, rng)
    assert state.evaluations == 1 + 50


def test_sd_tracks_static_until_threshold():
    # with the counter threshold out of reach, the SD engine is trajectory-
    # identical (same seed) to the static engine at strength 1
    problem = make_problem("onemax", 40)
    spec = ThresholdSpec(40, 42, 1)
    steps = min(1000, (phase_length(1, spec) or 10**9) - 1)
    init_a, init_b = RandomStream(21), RandomStream(21)
    sd_engine = make_engine("sd", R=42)
    st_engine = make_engine("static", r=1)
    sd_state = sd_engine.initialize(problem, init_a)
    st_state = st_engine.initialize(problem, init_b)
    rng_a, rng_b = RandomStream(22), RandomStream(22)
    for _ in range(steps):
        sd_ea_step(sd_state, problem, spec, rng_a)
        static_ea_step(st_state, problem, 1.0, rng_b)
        assert sd_state.current == st_state.current
        assert sd_state.strength == 1.0


def test_sd_invariants_on_jump_run():
    problem = make_problem("jump", 14, m=2)
    engine = make_engine("sd", R=14)
    spec = engine.threshold_spec(problem)
    rng = RandomStream(33)
    state = engine.initialize(problem, rng)
    last_fitness, last_strength = state.current_fitness, state.strength
    for _ in range(200_000):
        if problem.is_global_optimum(state.current):
            break
        engine.step(state, problem, rng)
        assert 1.0 <= state.strength <= 7.0
        plen = phase_length(state.strength, spec)
        if plen is not None:
            assert state.counter < plen
        if state.current_fitness == last_fitness:
            assert state.strength >= last_strength  # monotone within a phase
        last_fitness, last_strength = state.current_fitness, state.strength
    assert problem.is_global_optimum(state.current)
