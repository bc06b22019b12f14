"""Numeric validation of the closed-form quantities behind stagnation detection.

Three directly computable claims are covered: the partial-sum inequality
bounding the total length of all phases up to strength m, the per-phase
failure probability once the strength has reached the gap size, and the
two-sided bracket on the expected escape time from a gap-m point.  All
huge powers are handled in log space; (en/i)^i overflows doubles already
around i = 140 for n = 200.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitstrings import RandomStream
from .engines import LOG_THRESHOLD_CAP, ThresholdSpec, log_threshold


@dataclass(frozen=True)
class PartialSumResult:
    n: int
    m: int
    log_lhs: float
    log_rhs: float
    holds: bool

    @property
    def lhs(self) -> float:
        """sum_{i=1..m} (en/i)^i, +inf if it overflows doubles."""
        return math.exp(self.log_lhs) if self.log_lhs < 709 else math.inf

    @property
    def rhs(self) -> float:
        return math.exp(self.log_rhs) if self.log_rhs < 709 else math.inf


def _log_terms(n: int, upto: int) -> np.ndarray:
    i = np.arange(1, upto + 1, dtype=float)
    return i * (1.0 + math.log(n) - np.log(i))


def partial_sum_check(n: int, m: int) -> PartialSumResult:
    """Check sum_{i=1..m} (en/i)^i < n/(n-m) * (en/m)^m in log space."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    terms = _log_terms(n, m)
    log_lhs = float(np.logaddexp.reduce(terms))
    log_rhs = math.log(n / (n - m)) + m * (1.0 + math.log(n / m))
    return PartialSumResult(n, m, log_lhs, log_rhs, log_lhs < log_rhs)


def partial_sum_sweep(n_max: int = 200) -> list[tuple[int, int]]:
    """All (n, m) pairs with 1 <= m < n <= n_max violating the inequality.

    Empty on a correct implementation; vectorised so the full n_max = 200
    sweep stays well under a second.
    """
    violations: list[tuple[int, int]] = []
    for n in range(2, n_max + 1):
        terms = _log_terms(n, n - 1)
        log_lhs = np.logaddexp.accumulate(terms)
        m = np.arange(1, n, dtype=float)
        log_rhs = np.log(n / (n - m)) + m * (1.0 + math.log(n) - np.log(m))
        bad = np.flatnonzero(~(log_lhs < log_rhs))
        violations.extend((n, int(b) + 1) for b in bad)
    return violations


@dataclass(frozen=True)
class PhaseFailureResult:
    analytic_bound: float
    log_bound: float
    certified_cap: float
    empirical: float | None


def phase_failure_bound(
    r: int,
    m: int,
    n: int,
    R: float,
    trials: int = 0,
    rng: RandomStream | None = None,
) -> PhaseFailureResult:
    """Probability of a full phase at strength r >= m missing an improvement
    that sits at Hamming distance m.

    The per-step success probability is s = (1-r/n)^(n-m) (r/n)^m and the
    phase lasts 2 (en/r)^r ln(nR) steps, so the failure probability is
    (1-s)^T, guaranteed to stay below 1/(nR)^2.  Optionally estimates the
    same quantity by Monte Carlo on a planted-improvement instance.
    """
    if not m <= r < n / 2:
        raise ValueError(f"bound applies for m <= r < n/2, got r={r}, m={m}, n={n}")
    p = r / n
    log_s = (n - m) * math.log1p(-p) + m * math.log(p)
    s = math.exp(log_s)
    lt = log_threshold(r, ThresholdSpec(n, R, 1))
    if lt > LOG_THRESHOLD_CAP or lt > 700:
        log_bound = -math.inf
    else:
        log_bound = math.exp(lt) * math.log1p(-s)
    bound = math.exp(log_bound) if log_bound > -745 else 0.0
    empirical = None
    if trials > 0:
        if rng is None:
            rng = RandomStream(0)
        T = math.exp(lt)
        waits = rng.generator.geometric(s, size=trials)
        empirical = float(np.mean(waits > T))
    return PhaseFailureResult(bound, log_bound, (n * R) ** -2.0, empirical)


@dataclass(frozen=True)
class EscapeBracket:
    lower: float
    upper: float


def escape_bracket(n: int, m: int, R: float) -> EscapeBracket:
    """Two-sided bracket on the expected time of the stagnation-detection
    (1+1) EA to strictly improve from a point of gap m.

    lower = (en/m)^m (1 - m^2/(n-m)), clamped at 0 where vacuous;
    upper = 2 (en/m)^m (1 + (5m/n) ln(nR)).
    """
    if not 1 <= m <= n / 2:
        raise ValueError(f"need 1 <= m <= n/2, got m={m}, n={n}")
    log_base = m * (1.0 + math.log(n / m))
    base = math.exp(log_base) if log_base < 709 else math.inf
    lower_factor = max(0.0, 1.0 - m * m / (n - m))
    lower = base * lower_factor
    upper = 2.0 * base * (1.0 + (5.0 * m / n) * math.log(n * R))
    return EscapeBracket(lower, upper)


def escape_bracket_sweep(n_max: int = 100, R: float | None = None) -> list[tuple[int, int]]:
    """(n, m) pairs in the non-vacuous regime m <= sqrt(n-m) where the
    bracket fails to satisfy lower < upper.  Empty when correct."""
    violations = []
    for n in range(4, n_max + 1):
        for m in range(1, n // 2 + 1):
            if m * m > n - m:
                continue
            b = escape_bracket(n, m, R if R is not None else n)
            if not b.lower < b.upper:
                violations.append((n, m))
    return violations
