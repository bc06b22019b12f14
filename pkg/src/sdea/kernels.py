"""Compiled per-bit inner loops for the runs that cannot be lumped.

Two consumers: the invalid-prefix descent of NeedHighMut runs (the walk
from a random string to the first structurally valid one) and the full
two-rate (1+lambda) engine, whose per-generation strength random walk
defeats waiting-time lumping.

Mutation uses geometric position skipping, which is distributionally
identical to per-bit Bernoulli sampling.  Each kernel owns a private
MT19937 stream seeded from the run's stream, so results stay reproducible
and independent across runs.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_LOG2 = math.log(2.0)
_LOG_CAP = 62.0 * _LOG2


@njit(cache=True, inline="always")
def _sample_flips(n, p, buf):
    """Positions flipped by one standard bit mutation at rate p, ascending."""
    if p >= 1.0:
        for q in range(n):
            buf[q] = q
        return n
    k = 0
    log1mp = math.log1p(-p)
    pos = -1
    while True:
        u = 1.0 - np.random.random()
        pos += 1 + int(math.log(u) / log1mp)
        if pos >= n:
            break
        buf[k] = pos
        k += 1
    return k


@njit(cache=True, inline="always")
def _phase_cap(r, n, lnln_nr, ln_lam):
    """First counter value that exceeds the stagnation threshold at
    strength r (in generations); inf when the threshold is beyond 2^62."""
    lt = _LOG2 + r * (1.0 + math.log(n / r)) + lnln_nr - ln_lam
    if lt > _LOG_CAP:
        return np.inf
    return math.floor(math.exp(lt)) + 1.0


@njit(cache=True, inline="always")
def _next_strength(r, n):
    half = n / 2.0
    return r + 1.0 if r + 1.0 <= half else half


@njit(cache=True)
def nhm_scan(bits, prefix_len, block_count, block_size):
    """Structural scan: (valid, prefix value, suffix value)."""
    i = 0
    while i < prefix_len and bits[i] == 1:
        i += 1
    for q in range(i, prefix_len):
        if bits[q] == 1:
            return False, 0, 0
    j = 0
    pos = prefix_len
    seen_inactive = False
    for _ in range(block_count):
        cnt = 0
        for t in range(block_size):
            cnt += bits[pos + t]
        if cnt != 0 and cnt != 2:
            return False, 0, 0
        if cnt == 2:
            if seen_inactive:
                return False, 0, 0
            j += 1
        else:
            seen_inactive = True
        pos += block_size
    return True, i, j


@njit(cache=True, inline="always")
def _nhm_fitness_ij(i, j, n, block_count, prefix_threshold):
    if i <= prefix_threshold:
        return np.int64(n) * np.int64(n) * np.int64(j) + np.int64(i)
    return np.int64(n) * np.int64(n) * np.int64(block_count) + np.int64(i + j - n - 1)


@njit(cache=True)
def nhm_descent(
    bits,
    prefix_len,
    block_count,
    block_size,
    prefix_threshold,
    mode,  # 0 = static, 1 = stagnation detection
    rate,  # fixed strength for static mode
    r0,
    u0,
    lnln_nr,  # ln ln(nR) for the SD threshold; unused in static mode
    budget_left,
    seed,
):
    """(1+1)-type walk while the current string is invalid.

    Returns (evals_used, exit_code, r, u, max_r) with exit codes
    0 = current became valid, 1 = budget exhausted.  ``bits`` is advanced
    in place.
    """
    np.random.seed(seed)
    n = bits.size
    flips = np.empty(n, dtype=np.int64)
    pc = 0
    for q in range(n):
        pc += bits[q]
    fx = np.int64(-pc)
    r = r0
    u = u0
    max_r = r0 if mode == 1 else rate
    evals = np.int64(0)

    while True:
        if evals >= budget_left:
            return evals, 1, r, u, max_r
        p = (rate if mode == 0 else r) / n
        k = _sample_flips(n, p, flips)
        delta = 0
        for t in range(k):
            pos = flips[t]
            if bits[pos] == 1:
                bits[pos] = 0
                delta -= 1
            else:
                bits[pos] = 1
                delta += 1
        valid, iy, jy = nhm_scan(bits, prefix_len, block_count, block_size)
        if valid:
            fy = _nhm_fitness_ij(iy, jy, n, block_count, prefix_threshold)
        else:
            fy = np.int64(-(pc + delta))
        evals += 1
        accepted = False
        if mode == 0:
            accepted = fy >= fx
        else:
            u += 1
            if fy > fx:
                accepted = True
                r = 1.0
                u = 0
            elif fy == fx and r == 1.0:
                accepted = True
        if accepted:
            pc += delta
            fx = fy
        else:
            for t in range(k):
                bits[flips[t]] ^= 1
        if mode == 1 and u >= _phase_cap(r, n, lnln_nr, 0.0):
            r = _next_strength(r, n)
            u = 0
            if r > max_r:
                max_r = r
        if accepted and valid:
            return evals, 0, r, u, max_r


# ---------------------------------------------------------------------------
# two-rate (1+lambda) engine with stagnation detection, per bit

SASD_EXIT_OPTIMUM = 0
SASD_EXIT_TRAP = 1
SASD_EXIT_BUDGET = 2
SASD_EXIT_SD_ENTERED = 3


@njit(cache=True, inline="always")
def _nhm_offspring_eval(
    bits,
    flips,
    k,
    prefix_len,
    block_count,
    block_size,
    prefix_threshold,
    parent_valid,
    pi,
    pj,
    pc_y,
    status,  # scratch uint8 array of size block_count
    n,
):
    """Fitness of an offspring whose flips are already applied to ``bits``.

    O(k + block_count) when the parent is valid, full scan otherwise.
    Returns (fy, valid, iy, jy).
    """
    if not parent_valid:
        valid, iy, jy = nhm_scan(bits, prefix_len, block_count, block_size)
        if valid:
            return _nhm_fitness_ij(iy, jy, n, block_count, prefix_threshold), True, iy, jy
        return np.int64(-pc_y), False, 0, 0

    # prefix: parent is 1^pi 0^(L-pi); flipped ones must form a contiguous
    # tail of the run, flipped zeros a contiguous head after it, not both
    f1_min = n
    f1_max = -1
    f1_cnt = 0
    f0_min = n
    f0_max = -1
    f0_cnt = 0
    for t in range(k):
        pos = flips[t]
        if pos >= prefix_len:
            break
        if pos < pi:
            f1_cnt += 1
            if pos < f1_min:
                f1_min = pos
            if pos > f1_max:
                f1_max = pos
        else:
            f0_cnt += 1
            if pos < f0_min:
                f0_min = pos
            if pos > f0_max:
                f0_max = pos
    prefix_ok = True
    iy = pi
    if f1_cnt > 0 and f0_cnt > 0:
        prefix_ok = False
    elif f1_cnt > 0:
        if f1_max == pi - 1 and f1_max - f1_min + 1 == f1_cnt:
            iy = pi - f1_cnt
        else:
            prefix_ok = False
    elif f0_cnt > 0:
        if f0_min == pi and f0_max - f0_min + 1 == f0_cnt:
            iy = pi + f0_cnt
        else:
            prefix_ok = False
    if not prefix_ok:
        return np.int64(-pc_y), False, 0, 0

    # suffix blocks: recompute counts only for touched blocks
    for b in range(block_count):
        status[b] = 1 if b < pj else 0
    t = 0
    while t < k and flips[t] < prefix_len:
        t += 1
    suffix_ok = True
    while t < k:
        b = (flips[t] - prefix_len) // block_size
        base = prefix_len + b * block_size
        cnt = 0
        for q in range(block_size):
            cnt += bits[base + q]
        if cnt != 0 and cnt != 2:
            suffix_ok = False
            break
        status[b] = 1 if cnt == 2 else 0
        while t < k and (flips[t] - prefix_len) // block_size == b:
            t += 1
    if not suffix_ok:
        return np.int64(-pc_y), False, 0, 0
    jy = 0
    total = 0
    for b in range(block_count):
        total += status[b]
    while jy < block_count and status[jy] == 1:
        jy += 1
    if total != jy:
        return np.int64(-pc_y), False, 0, 0
    return _nhm_fitness_ij(iy, jy, n, block_count, prefix_threshold), True, iy, jy


@njit(cache=True)
def sasd_run(
    bits,
    ptype,  # 0 = popcount-table problem, 2 = NeedHighMut
    phi,  # int64[n+1] fitness by popcount (ptype 0); dummy otherwise
    opt_pc,  # optimum popcount for ptype 0
    prefix_len,
    block_count,
    block_size,
    prefix_threshold,
    lam,
    r_init,
    r0,
    u0,
    g0,
    max_r0,
    lnln_nr,
    ln_lam,
    budget_left,
    exit_on_sd,
    seed,
):
    """Advance the two-rate (1+lambda) EA with stagnation detection.

    Runs until optimum/trap/budget, or (with ``exit_on_sd``) until the
    engine switches into the stagnation-detection state, whose frozen
    strength phases the caller can fast-forward analytically.

    Returns (evals_used, exit_code, r, u, g, max_r, fx).
    """
    np.random.seed(seed)
    n = bits.size
    half_lam = lam // 2
    flip_buf = np.empty((lam, n), dtype=np.int64)
    flip_cnt = np.empty(lam, dtype=np.int64)
    fys = np.empty(lam, dtype=np.int64)
    y_valid = np.empty(lam, dtype=np.uint8)
    y_i = np.empty(lam, dtype=np.int64)
    y_j = np.empty(lam, dtype=np.int64)
    y_pc = np.empty(lam, dtype=np.int64)
    status = np.empty(max(block_count, 1), dtype=np.uint8)

    pc = 0
    for q in range(n):
        pc += bits[q]
    if ptype == 0:
        fx = phi[pc]
        parent_valid = False
        pi = 0
        pj = 0
    else:
        parent_valid, pi, pj = nhm_scan(bits, prefix_len, block_count, block_size)
        if parent_valid:
            fx = _nhm_fitness_ij(pi, pj, n, block_count, prefix_threshold)
        else:
            fx = np.int64(-pc)

    r = r0
    u = u0
    g = g0
    max_r = max_r0
    evals = np.int64(0)

    while True:
        # terminal conditions on the current point
        if ptype == 0:
            if pc == opt_pc:
                return evals, SASD_EXIT_OPTIMUM, r, u, g, max_r, fx
        else:
            if parent_valid and pj == block_count:
                if pi == prefix_threshold:
                    return evals, SASD_EXIT_OPTIMUM, r, u, g, max_r, fx
                if pi == prefix_len:
                    return evals, SASD_EXIT_TRAP, r, u, g, max_r, fx
        if evals >= budget_left:
            return evals, SASD_EXIT_BUDGET, r, u, g, max_r, fx
        if g and exit_on_sd:
            return evals, SASD_EXIT_SD_ENTERED, r, u, g, max_r, fx

        u += 1
        # create offspring; in the SD state all share strength r
        for o in range(lam):
            if g:
                strength = r
            else:
                strength = r / 2.0 if o < half_lam else 2.0 * r
            p = strength / n
            k = _sample_flips(n, p, flip_buf[o])
            delta = 0
            for t in range(k):
                pos = flip_buf[o, t]
                if bits[pos] == 1:
                    bits[pos] = 0
                    delta -= 1
                else:
                    bits[pos] = 1
                    delta += 1
            flip_cnt[o] = k
            y_pc[o] = pc + delta
            if ptype == 0:
                fys[o] = phi[pc + delta]
                y_valid[o] = 0
            else:
                fy, vy, iy, jy = _nhm_offspring_eval(
                    bits,
                    flip_buf[o],
                    k,
                    prefix_len,
                    block_count,
                    block_size,
                    prefix_threshold,
                    parent_valid,
                    pi,
                    pj,
                    pc + delta,
                    status,
                    n,
                )
                fys[o] = fy
                y_valid[o] = 1 if vy else 0
                y_i[o] = iy
                y_j[o] = jy
            # restore the parent; the winner is re-applied after selection
            for t in range(k):
                bits[flip_buf[o, t]] ^= 1
        evals += lam
        used = r if g else 2.0 * r
        if used > max_r:
            max_r = used

        # best offspring, ties broken uniformly
        best_f = fys[0]
        for o in range(1, lam):
            if fys[o] > best_f:
                best_f = fys[o]
        ties = 0
        for o in range(lam):
            if fys[o] == best_f:
                ties += 1
        pick_idx = np.random.randint(0, ties) if ties > 1 else 0
        w = -1
        seen = 0
        for o in range(lam):
            if fys[o] == best_f:
                if seen == pick_idx:
                    w = o
                    break
                seen += 1

        if g:
            if best_f > fx:
                for t in range(flip_cnt[w]):
                    bits[flip_buf[w, t]] ^= 1
                pc = y_pc[w]
                fx = best_f
                if ptype != 0:
                    parent_valid = y_valid[w] == 1
                    pi = y_i[w]
                    pj = y_j[w]
                r = r_init
                g = False
                u = 0
            elif u >= _phase_cap(r, n, lnln_nr, ln_lam):
                r = _next_strength(r, n)
                u = 0
                if r > max_r:
                    max_r = r
        else:
            if best_f >= fx:
                if best_f > fx:
                    u = 0
                for t in range(flip_cnt[w]):
                    bits[flip_buf[w, t]] ^= 1
                pc = y_pc[w]
                fx = best_f
                if ptype != 0:
                    parent_valid = y_valid[w] == 1
                    pi = y_i[w]
                    pj = y_j[w]
            r_pre = r
            if np.random.random() < 0.5:
                new_r = r_pre / 2.0 if w < half_lam else 2.0 * r_pre
            else:
                new_r = r_pre / 2.0 if np.random.random() < 0.5 else 2.0 * r_pre
            r = min(max(2.0, new_r), n / 4.0)
            if u >= _phase_cap(r_pre, n, lnln_nr, ln_lam):
                r = 2.0
                g = True
                u = 0
