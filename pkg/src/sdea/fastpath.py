"""Accelerated runners that sample run outcomes from the exact lumped chains.

For fitness functions that depend on the bit string only through a small
sufficient statistic, the reference engines induce a Markov chain on that
statistic, and the waiting time between state changes at a fixed strength
is geometric.  Sampling those waiting times directly gives runs whose
recorded statistics (evaluations, success, terminal condition, final
fitness, max strength) have exactly the distribution of the per-bit
engines, at a cost of O(state changes) instead of O(generations):

* OneMax/Jump/Trap: fitness is a function of the popcount; the offspring
  popcount distribution is a convolution of two binomials.
* LeadingOnes: conditioned on the current fitness i, the bits right of
  position i+1 are uniform, so improvements occur with probability
  (1-p)^i p and jump a geometric number of extra levels.
* NeedHighMut: once the string is structurally valid, everything reduces
  to the (prefix value, suffix value) pair; the walk from the random
  initial string to the first valid one is position-dependent and runs in
  a compiled per-bit kernel.

The two-rate (1+lambda) engine adjusts its strength every generation, so
its normal state runs per bit (compiled); its stagnation-detection state
has frozen strengths and is fast-forwarded here.

Everything is validated against the reference engines in the test suite.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import binom

from .bitstrings import RandomStream, power_law_cdf, power_law_pmf
from .engines import (
    Engine,
    FastEA,
    RunRecord,
    SASDEA,
    SDEA,
    StaticEA,
    TERMINAL_BUDGET,
    TERMINAL_OPTIMUM,
    TERMINAL_TRAP,
    phase_length,
)
from .problems import NeedHighMut, Problem
from . import kernels


def _truncated_geometric(gen, q: float, cap) -> tuple[int, bool]:
    """Generations consumed until the first event, truncated at ``cap``.

    Returns (steps, event_occurred).  One uniform per call, so runners
    consume their streams identically whether or not a cap binds.
    """
    if cap is not None and cap <= 0:
        return 0, False
    if q >= 1.0:
        return 1, True
    u = gen.random()
    if q <= 0.0:
        if cap is None:
            raise RuntimeError("uncapped wait for an impossible event")
        return int(cap), False
    g = int(math.log(1.0 - u) / math.log1p(-q)) + 1
    if cap is not None and g > cap:
        return int(cap), False
    return g, True


def _conditional_choice(gen, cum: np.ndarray) -> int:
    """Index sampled proportionally to the increments of ``cum``."""
    u = gen.random() * cum[-1]
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, cum.size - 1)


# ---------------------------------------------------------------------------
# popcount-symmetric problems


class PopcountChain:
    """Transition law of the popcount under standard bit mutation.

    The offspring popcount is c - X + Y with X ~ Bin(c, p) and
    Y ~ Bin(n-c, p); its distribution is the convolution below.  Fitness
    tables of the supported problems are injective in the popcount, so
    accepted equal-fitness offspring never change the lumped state.
    """

    def __init__(self, problem: Problem):
        phi = problem.popcount_fitness
        if phi is None:
            raise ValueError(f"{problem!r} is not popcount-symmetric")
        self.n = problem.n
        self.phi = phi
        self.opt_pc = int(np.argmax(phi))
        self._trans: dict[tuple[int, float], np.ndarray] = {}
        self._events: dict[tuple[int, float], tuple[float, np.ndarray, np.ndarray]] = {}

    def transition(self, c: int, p: float) -> np.ndarray:
        key = (c, p)
        vec = self._trans.get(key)
        if vec is None:
            n = self.n
            losses = binom.pmf(np.arange(c + 1), c, p)
            gains = binom.pmf(np.arange(n - c + 1), n - c, p)
            vec = np.convolve(losses[::-1], gains)
            vec.flags.writeable = False
            self._trans[key] = vec
        return vec

    def improvement(self, c: int, p: float):
        """(probability of a strictly fitter offspring, cumulative weights,
        target popcounts)."""
        key = (c, p)
        entry = self._events.get(key)
        if entry is None:
            vec = self.transition(c, p)
            targets = np.flatnonzero(self.phi > self.phi[c])
            cum = np.cumsum(vec[targets])
            q = float(cum[-1]) if cum.size else 0.0
            self._events[key] = entry = (q, cum, targets)
        return entry

    def sample_improvement(self, gen, c: int, p: float) -> int:
        _, cum, targets = self.improvement(c, p)
        return int(targets[_conditional_choice(gen, cum)])


_popcount_chains: dict[tuple, PopcountChain] = {}


def popcount_chain(problem: Problem) -> PopcountChain:
    key = (problem.kind, problem.n, problem.param_string())
    chain = _popcount_chains.get(key)
    if chain is None:
        chain = _popcount_chains[key] = PopcountChain(problem)
    return chain


class _FeaMix:
    """Per-step mixture over heavy-tailed strengths for one chain state.

    Caches, per state, the event probability, the strength law conditioned
    on an event, and the strength law conditioned on no event (the latter
    two differ: strengths that improve more often are over-represented at
    event steps).
    """

    def __init__(self, n: int, beta: float):
        self.upper = max(1, n // 2)
        self.beta = float(beta)
        self.weights = power_law_pmf(beta, self.upper)
        self.cdf = power_law_cdf(beta, self.upper)
        self._cache: dict[int, tuple[float, np.ndarray, np.ndarray]] = {}

    def state_tables(self, state, q_of_alpha):
        entry = self._cache.get(state)
        if entry is None:
            qs = np.array([q_of_alpha(alpha) for alpha in range(1, self.upper + 1)])
            event_cum = np.cumsum(self.weights * qs)
            quiet_cum = np.cumsum(self.weights * (1.0 - qs))
            qbar = float(event_cum[-1])
            self._cache[state] = entry = (qbar, event_cum, quiet_cum)
        return entry

    def sample_max_quiet(self, gen, quiet_cum: np.ndarray, count: int) -> int:
        """Largest strength among ``count`` steps without an event."""
        if count <= 0:
            return 0
        total = quiet_cum[-1]
        u = gen.random()
        thresh = total * (u if count == 1 else u ** (1.0 / count))
        idx = int(np.searchsorted(quiet_cum, thresh, side="left"))
        return min(idx, self.upper - 1) + 1

    def sample_event_alpha(self, gen, event_cum: np.ndarray) -> int:
        return _conditional_choice(gen, event_cum) + 1


def _record(engine, problem, run_index, rng, evaluations, terminal, fitness, max_strength) -> RunRecord:
    return RunRecord(
        algorithm=engine.algo_id,
        problem=problem.kind,
        n=problem.n,
        params=engine.param_string(problem),
        run_index=run_index,
        seed=rng.seed,
        evaluations=int(evaluations),
        success=terminal == TERMINAL_OPTIMUM,
        terminal=terminal,
        final_fitness=int(fitness),
        max_strength=float(max_strength),
    )


def _run_11_popcount(engine, problem, budget, rng, run_index) -> RunRecord:
    chain = popcount_chain(problem)
    gen = rng.generator
    n = problem.n
    c = int(gen.binomial(n, 0.5))
    evals = 1

    if isinstance(engine, StaticEA):
        r = engine.r
        if r > n:
            raise ValueError(f"strength {r} exceeds n={n}")
        p = r / n
        max_s = r
        while c != chain.opt_pc and evals < budget:
            q = chain.improvement(c, p)[0]
            steps, hit = _truncated_geometric(gen, q, budget - evals)
            evals += steps
            if hit:
                c = chain.sample_improvement(gen, c, p)
        terminal = TERMINAL_OPTIMUM if c == chain.opt_pc else TERMINAL_BUDGET

    elif isinstance(engine, SDEA):
        spec = engine.threshold_spec(problem)
        r, u, max_s = 1.0, 0, 1.0
        while c != chain.opt_pc and evals < budget:
            plen = phase_length(r, spec)
            cap = budget - evals if plen is None else min(plen - u, budget - evals)
            q = chain.improvement(c, r / n)[0]
            steps, hit = _truncated_geometric(gen, q, cap)
            evals += steps
            u += steps
            if hit:
                c = chain.sample_improvement(gen, c, r / n)
                r, u = 1.0, 0
            elif plen is not None and u >= plen:
                r = min(r + 1.0, n / 2.0)
                u = 0
                if r > max_s:
                    max_s = r
        terminal = TERMINAL_OPTIMUM if c == chain.opt_pc else TERMINAL_BUDGET

    elif isinstance(engine, FastEA):
        mix = _FeaMix(n, engine.beta)
        max_s = 0.0
        while c != chain.opt_pc and evals < budget:
            qbar, event_cum, quiet_cum = mix.state_tables(
                c, lambda alpha: chain.improvement(c, alpha / n)[0]
            )
            steps, hit = _truncated_geometric(gen, qbar, budget - evals)
            evals += steps
            quiet = steps - 1 if hit else steps
            if quiet > 0:
                a = mix.sample_max_quiet(gen, quiet_cum, quiet)
                if a > max_s:
                    max_s = float(a)
            if hit:
                alpha = mix.sample_event_alpha(gen, event_cum)
                if alpha > max_s:
                    max_s = float(alpha)
                c = chain.sample_improvement(gen, c, alpha / n)
        terminal = TERMINAL_OPTIMUM if c == chain.opt_pc else TERMINAL_BUDGET

    else:  # pragma: no cover - dispatch guards this
        raise TypeError(f"unsupported engine {engine!r}")

    return _record(engine, problem, run_index, rng, evals, terminal, chain.phi[c], max_s)


# ---------------------------------------------------------------------------
# LeadingOnes


def _lo_initial(gen, n: int) -> int:
    u = 1.0 - gen.random()
    return min(int(-math.log2(u)), n)


def _lo_jump(gen, i: int, n: int) -> int:
    """New fitness after an improvement: the freshly uniform tail adds a
    geometric number of free leading ones."""
    u = 1.0 - gen.random()
    z = min(int(-math.log2(u)), n - i - 1)
    return i + 1 + z


def _run_11_leadingones(engine, problem, budget, rng, run_index) -> RunRecord:
    gen = rng.generator
    n = problem.n
    i = _lo_initial(gen, n)
    evals = 1

    if isinstance(engine, StaticEA):
        r = engine.r
        if r > n:
            raise ValueError(f"strength {r} exceeds n={n}")
        p = r / n
        max_s = r
        while i < n and evals < budget:
            q = (1.0 - p) ** i * p
            steps, hit = _truncated_geometric(gen, q, budget - evals)
            evals += steps
            if hit:
                i = _lo_jump(gen, i, n)
        terminal = TERMINAL_OPTIMUM if i == n else TERMINAL_BUDGET

    elif isinstance(engine, SDEA):
        spec = engine.threshold_spec(problem)
        r, u, max_s = 1.0, 0, 1.0
        while i < n and evals < budget:
            p = r / n
            plen = phase_length(r, spec)
            cap = budget - evals if plen is None else min(plen - u, budget - evals)
            q = (1.0 - p) ** i * p
            steps, hit = _truncated_geometric(gen, q, cap)
            evals += steps
            u += steps
            if hit:
                i = _lo_jump(gen, i, n)
                r, u = 1.0, 0
            elif plen is not None and u >= plen:
                r = min(r + 1.0, n / 2.0)
                u = 0
                if r > max_s:
                    max_s = r
        terminal = TERMINAL_OPTIMUM if i == n else TERMINAL_BUDGET

    elif isinstance(engine, FastEA):
        mix = _FeaMix(n, engine.beta)
        max_s = 0.0
        while i < n and evals < budget:
            qbar, event_cum, quiet_cum = mix.state_tables(
                i, lambda alpha: (1.0 - alpha / n) ** i * (alpha / n)
            )
            steps, hit = _truncated_geometric(gen, qbar, budget - evals)
            evals += steps
            quiet = steps - 1 if hit else steps
            if quiet > 0:
                a = mix.sample_max_quiet(gen, quiet_cum, quiet)
                if a > max_s:
                    max_s = float(a)
            if hit:
                alpha = mix.sample_event_alpha(gen, event_cum)
                if alpha > max_s:
                    max_s = float(alpha)
                i = _lo_jump(gen, i, n)
        terminal = TERMINAL_OPTIMUM if i == n else TERMINAL_BUDGET

    else:  # pragma: no cover
        raise TypeError(f"unsupported engine {engine!r}")

    return _record(engine, problem, run_index, rng, evals, terminal, i, max_s)


# ---------------------------------------------------------------------------
# NeedHighMut


class NhmChain:
    """Exact transition law between valid NeedHighMut states (i, j).

    Prefix and suffix mutate independently.  The prefix reaches the valid
    shape 1^i' 0^* with probability p^|i-i'| (1-p)^(L-|i-i'|); each suffix
    block keeps/changes its active status with the four probabilities
    below, and a valid suffix needs the actives to form a leading run.
    """

    def __init__(self, problem: NeedHighMut):
        lay = problem.layout
        self.layout = lay
        self.n = problem.n
        L, B = lay.prefix_len, lay.block_count
        ii = np.arange(L + 1)[:, None]
        jj = np.arange(B + 1)[None, :]
        self.fitness = np.where(
            ii <= lay.prefix_threshold,
            np.int64(self.n) ** 2 * jj + ii,
            np.int64(self.n) ** 2 * B + ii + jj - self.n - 1,
        ).astype(np.int64)
        self._block: dict[float, tuple[float, float, float, float]] = {}
        self._probs: dict[tuple, tuple[float, float]] = {}

    def _block_rates(self, p: float):
        entry = self._block.get(p)
        if entry is None:
            ell = self.layout.block_size
            k = np.arange(3)
            a2a = float(np.sum(binom.pmf(k, 2, p) * binom.pmf(k, ell - 2, p)))
            a2i = float(binom.pmf(2, 2, p) * binom.pmf(0, ell - 2, p))
            i2a = float(binom.pmf(2, ell, p))
            i2i = float(binom.pmf(0, ell, p))
            self._block[p] = entry = (a2a, a2i, i2a, i2i)
        return entry

    def _vectors(self, i: int, j: int, p: float) -> tuple[np.ndarray, np.ndarray]:
        L, B = self.layout.prefix_len, self.layout.block_count
        d = np.abs(np.arange(L + 1) - i)
        with np.errstate(under="ignore"):
            pp = p ** d * (1.0 - p) ** (L - d)
            a2a, a2i, i2a, i2i = self._block_rates(p)
            jj = np.arange(B + 1)
            low = a2a ** np.minimum(jj, j) * a2i ** np.clip(j - jj, 0, None) * i2i ** (B - j)
            high = a2a ** j * i2a ** np.clip(jj - j, 0, None) * i2i ** np.clip(B - jj, 0, None)
            ss = np.where(jj <= j, low, high)
        return pp, ss

    def event_probs(self, i: int, j: int, p: float, include_equal: bool) -> float:
        """Probability that one mutation yields an accepted state change."""
        key = (i, j, p)
        entry = self._probs.get(key)
        if entry is None:
            pp, ss = self._vectors(i, j, p)
            m = pp[:, None] * ss[None, :]
            fx = self.fitness[i, j]
            q_imp = float(m[self.fitness > fx].sum())
            eq = self.fitness == fx
            eq[i, j] = False
            q_eq = float(m[eq].sum())
            self._probs[key] = entry = (q_imp, q_eq)
        q_imp, q_eq = entry
        return q_imp + q_eq if include_equal else q_imp

    def sample_event(self, gen, i: int, j: int, p: float, include_equal: bool) -> tuple[int, int]:
        pp, ss = self._vectors(i, j, p)
        m = pp[:, None] * ss[None, :]
        fx = self.fitness[i, j]
        mask = self.fitness > fx
        if include_equal:
            eq = self.fitness == fx
            eq[i, j] = False
            mask = mask | eq
        flat_idx = np.flatnonzero(mask.ravel())
        cum = np.cumsum(m.ravel()[flat_idx])
        pick = int(flat_idx[_conditional_choice(gen, cum)])
        B = self.layout.block_count
        return pick // (B + 1), pick % (B + 1)


_nhm_chains: dict[tuple, NhmChain] = {}


def nhm_chain(problem: NeedHighMut) -> NhmChain:
    key = (problem.n, problem.param_string())
    chain = _nhm_chains.get(key)
    if chain is None:
        chain = _nhm_chains[key] = NhmChain(problem)
    return chain


def _nhm_terminal(chain: NhmChain, i: int, j: int) -> str | None:
    lay = chain.layout
    if j == lay.block_count:
        if i == lay.prefix_threshold:
            return TERMINAL_OPTIMUM
        if i == lay.prefix_len:
            return TERMINAL_TRAP
    return None


def _run_11_nhm(engine, problem: NeedHighMut, budget, rng, run_index) -> RunRecord:
    lay = problem.layout
    chain = nhm_chain(problem)
    gen = rng.generator
    n = problem.n
    bits = gen.integers(0, 2, size=n, dtype=np.uint8)
    evals = 1
    is_sd = isinstance(engine, SDEA)
    if is_sd:
        spec = engine.threshold_spec(problem)
        lnln_nr = math.log(math.log(n * spec.R))
        r, u, max_s = 1.0, 0, 1.0
        rate = 0.0
    else:
        rate = engine.r
        if rate > n:
            raise ValueError(f"strength {rate} exceeds n={n}")
        r, u, max_s = rate, 0, rate
        lnln_nr = 0.0

    from .problems import nhm_prefix_value, nhm_suffix_value

    pre_ok, i = nhm_prefix_value(bits, lay)
    suf_ok, j = nhm_suffix_value(bits, lay) if pre_ok else (False, 0)
    valid = pre_ok and suf_ok

    if not valid:
        if evals < budget:
            seed32 = int(gen.integers(0, 2**31 - 1))
            used, code, r, u, kmax = kernels.nhm_descent(
                bits,
                lay.prefix_len,
                lay.block_count,
                lay.block_size,
                lay.prefix_threshold,
                1 if is_sd else 0,
                rate,
                r,
                u,
                lnln_nr,
                budget - evals,
                seed32,
            )
            evals += used
            if kmax > max_s:
                max_s = kmax
            valid = code == 0
            if valid:
                _, i = nhm_prefix_value(bits, lay)
                _, j = nhm_suffix_value(bits, lay)
        if not valid:
            return _record(
                engine, problem, run_index, rng, evals, TERMINAL_BUDGET,
                problem.evaluate(bits), max_s,
            )

    # lumped phase over valid states
    while True:
        terminal = _nhm_terminal(chain, i, j)
        if terminal is not None:
            break
        if evals >= budget:
            terminal = TERMINAL_BUDGET
            break
        p = (r if is_sd else rate) / n
        include_equal = (not is_sd) or r == 1.0
        q = chain.event_probs(i, j, p, include_equal)
        if is_sd:
            plen = phase_length(r, spec)
            cap = budget - evals if plen is None else min(plen - u, budget - evals)
        else:
            plen = None
            cap = budget - evals
        steps, hit = _truncated_geometric(gen, q, cap)
        evals += steps
        if hit:
            i2, j2 = chain.sample_event(gen, i, j, p, include_equal)
            if is_sd:
                u += steps
                if chain.fitness[i2, j2] > chain.fitness[i, j]:
                    r, u = 1.0, 0
            i, j = i2, j2
        elif is_sd:
            u += steps
            if plen is not None and u >= plen:
                r = min(r + 1.0, n / 2.0)
                u = 0
                if r > max_s:
                    max_s = r

    return _record(engine, problem, run_index, rng, evals, terminal, chain.fitness[i, j], max_s)


# ---------------------------------------------------------------------------
# SASD: compiled normal state + lumped stagnation-detection state


def _sample_best_improving_popcount(gen, chain: PopcountChain, c: int, p: float, lam: int):
    """Popcount of the best of lam offspring, conditioned on at least one
    strict improvement; returns (popcount, per-generation event prob)."""
    vec = chain.transition(c, p)
    order = np.argsort(chain.phi, kind="stable")
    cdf = np.cumsum(vec[order])
    improving = chain.phi[order] > chain.phi[c]
    t0 = int(np.argmax(improving))  # improving levels are a suffix of the order
    below = cdf[t0 - 1] if t0 > 0 else 0.0
    pow_cdf = cdf[t0:] ** lam
    prev = np.concatenate(([below**lam], pow_cdf[:-1]))
    weights = pow_cdf - prev
    q_gen = 1.0 - below**lam
    cum = np.cumsum(weights)
    pick = _conditional_choice(gen, cum)
    return int(order[t0 + pick]), q_gen


def _sd_gen_event_prob(chain: PopcountChain, c: int, p: float, lam: int) -> float:
    q_off = chain.improvement(c, p)[0]
    return -math.expm1(lam * math.log1p(-q_off)) if q_off < 1.0 else 1.0


def _run_sasd_popcount(engine: SASDEA, problem, budget, rng, run_index) -> RunRecord:
    chain = popcount_chain(problem)
    gen = rng.generator
    n = problem.n
    lam = engine.resolved_lambda(problem)
    spec = engine.threshold_spec(problem)
    lnln_nr = math.log(math.log(n * spec.R))
    ln_lam = math.log(lam)
    r = float(engine.r_init)
    if not 2.0 <= r <= n / 4.0:
        raise ValueError(f"r_init must lie in [2, n/4], got {r} for n={n}")
    u, g = 0, False
    max_s = r
    bits = gen.integers(0, 2, size=n, dtype=np.uint8)
    pc = int(bits.sum())
    evals = 1

    while True:
        if pc == chain.opt_pc:
            terminal = TERMINAL_OPTIMUM
            break
        if evals >= budget:
            terminal = TERMINAL_BUDGET
            break
        if not g:
            seed32 = int(gen.integers(0, 2**31 - 1))
            used, code, r, u, g, max_s, _fx = kernels.sasd_run(
                bits, 0, chain.phi, chain.opt_pc,
                0, 0, 1, 0,
                lam, float(engine.r_init), r, u, g, max_s,
                lnln_nr, ln_lam, budget - evals, True, seed32,
            )
            evals += int(used)
            g = bool(g)
            pc = int(bits.sum())
            continue
        # stagnation-detection state: strength frozen until timeout
        if r > max_s:
            max_s = r
        q_gen = _sd_gen_event_prob(chain, pc, r / n, lam)
        plen = phase_length(r, spec)
        gens_avail = (budget - evals + lam - 1) // lam
        cap = gens_avail if plen is None else min(plen - u, gens_avail)
        steps, hit = _truncated_geometric(gen, q_gen, cap)
        evals += steps * lam
        u += steps
        if hit:
            pc, _ = _sample_best_improving_popcount(gen, chain, pc, r / n, lam)
            bits[:] = 0
            bits[gen.choice(n, size=pc, replace=False)] = 1
            r, u, g = float(engine.r_init), 0, False
        elif plen is not None and u >= plen:
            r = min(r + 1.0, n / 2.0)
            u = 0
            if r > max_s:
                max_s = r

    return _record(engine, problem, run_index, rng, evals, terminal, chain.phi[pc], max_s)


def _run_sasd_nhm(engine: SASDEA, problem: NeedHighMut, budget, rng, run_index) -> RunRecord:
    lay = problem.layout
    gen = rng.generator
    n = problem.n
    lam = engine.resolved_lambda(problem)
    spec = engine.threshold_spec(problem)
    r = float(engine.r_init)
    if not 2.0 <= r <= n / 4.0:
        raise ValueError(f"r_init must lie in [2, n/4], got {r} for n={n}")
    bits = gen.integers(0, 2, size=n, dtype=np.uint8)
    evals = 1
    if problem.is_global_optimum(bits):
        return _record(engine, problem, run_index, rng, evals, TERMINAL_OPTIMUM,
                       problem.evaluate(bits), r)
    if evals >= budget:
        return _record(engine, problem, run_index, rng, evals, TERMINAL_BUDGET,
                       problem.evaluate(bits), r)
    seed32 = int(gen.integers(0, 2**31 - 1))
    used, code, r, u, g, max_s, fx = kernels.sasd_run(
        bits, 2, np.zeros(1, dtype=np.int64), -1,
        lay.prefix_len, lay.block_count, lay.block_size, lay.prefix_threshold,
        lam, float(engine.r_init), r, 0, False, r,
        math.log(math.log(n * spec.R)), math.log(lam),
        budget - evals, False, seed32,
    )
    evals += int(used)
    terminal = {0: TERMINAL_OPTIMUM, 1: TERMINAL_TRAP, 2: TERMINAL_BUDGET}[int(code)]
    return _record(engine, problem, run_index, rng, evals, terminal, int(fx), float(max_s))


# ---------------------------------------------------------------------------
# dispatch


def fast_run(engine: Engine, problem: Problem, budget: int, rng: RandomStream,
             run_index: int = 0) -> RunRecord | None:
    """Run with the matching accelerated path, or None when only the
    reference engine applies."""
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if isinstance(engine, (StaticEA, SDEA, FastEA)):
        if problem.popcount_fitness is not None:
            return _run_11_popcount(engine, problem, budget, rng, run_index)
        if problem.kind == "leadingones":
            return _run_11_leadingones(engine, problem, budget, rng, run_index)
        if isinstance(problem, NeedHighMut) and not isinstance(engine, FastEA):
            return _run_11_nhm(engine, problem, budget, rng, run_index)
    if isinstance(engine, SASDEA):
        if problem.popcount_fitness is not None:
            return _run_sasd_popcount(engine, problem, budget, rng, run_index)
        if isinstance(problem, NeedHighMut):
            return _run_sasd_nhm(engine, problem, budget, rng, run_index)
    return None


def run_auto(engine: Engine, problem: Problem, budget: int, rng: RandomStream,
             run_index: int = 0, implementation: str = "auto") -> RunRecord:
    """Accelerated path when available, reference engine otherwise."""
    from .engines import run_to_termination

    if implementation not in ("auto", "fast", "reference"):
        raise ValueError(f"unknown implementation {implementation!r}")
    if implementation != "reference":
        record = fast_run(engine, problem, budget, rng, run_index)
        if record is not None:
            return record
        if implementation == "fast":
            raise ValueError(f"no accelerated path for {engine.algo_id} on {problem.kind}")
    return run_to_termination(engine, problem, budget, rng, run_index=run_index)
