"""Benchmark fitness functions with optimum predicates and gap oracles.

All problems are deterministic, total on {0,1}^n and maximised.  Fitness
values are exact integers internally.  Problems whose fitness depends on
the bit string only through its popcount expose a ``popcount_fitness``
table, which the accelerated runners use; everything else evaluates the
bits directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitstrings import BitString


class NoImprovingPoint(Exception):
    """Raised by the gap oracle when no strictly fitter point exists."""


def _as_bits(x) -> np.ndarray:
    return x.bits if isinstance(x, BitString) else np.asarray(x, dtype=np.uint8)


# ---------------------------------------------------------------------------
# plain fitness functions


def one_max(x) -> int:
    """Number of one-bits."""
    return int(_as_bits(x).sum())


def leading_ones(x) -> int:
    """Length of the maximal all-ones prefix."""
    bits = _as_bits(x)
    zeros = np.flatnonzero(bits == 0)
    return int(zeros[0]) if zeros.size else bits.size


def jump(x, m: int) -> int:
    """Jump fitness with gap size m: a OneMax slope, a valley of width m-1
    just below the optimum, and the optimum at the all-ones string."""
    bits = _as_bits(x)
    n = bits.size
    if not 1 <= m <= n:
        raise ValueError(f"gap size must be in [1, n], got m={m} for n={n}")
    ones = int(bits.sum())
    if ones <= n - m or ones == n:
        return m + ones
    return n - ones


def trap(x) -> int:
    """OneMax everywhere except the all-zeros string, which is optimal (n+1)."""
    bits = _as_bits(x)
    ones = int(bits.sum())
    return bits.size + 1 if ones == 0 else ones


# ---------------------------------------------------------------------------
# NeedHighMut: a prefix/suffix race that punishes low mutation rates


@dataclass(frozen=True)
class NeedHighMutLayout:
    """Geometry of the NeedHighMut construction.

    The string splits into a prefix of ``prefix_len`` bits scored by its
    leading-ones run and a suffix of ``block_count`` blocks of
    ``block_size`` bits each, scored by the number of leading "active"
    (exactly-two-ones) blocks.  ``prefix_threshold`` is the prefix value
    of the global optima; driving the prefix beyond it first leads into
    the trap region.
    """

    n: int
    xi: float
    block_count: int
    block_size: int
    suffix_len: int
    prefix_len: int
    prefix_threshold: int

    @classmethod
    def from_xi(cls, n: int, xi: float) -> "NeedHighMutLayout":
        if xi < 1:
            raise ValueError(f"xi must be >= 1, got {xi}")
        block_count = _ceil_exact((2.0 / 3.0) * xi * math.sqrt(n))
        block_size = _ceil_exact(n ** 0.25)
        suffix_len = block_count * block_size
        if suffix_len >= n:
            raise ValueError(
                f"layout not constructible: suffix needs {suffix_len} bits "
                f"but n={n}"
            )
        if suffix_len > 2.0 * xi * n ** 0.75:
            raise ValueError("suffix length exceeds its sanity bound")
        prefix_len = n - suffix_len
        prefix_threshold = (9 * prefix_len) // 10
        return cls(n, xi, block_count, block_size, suffix_len, prefix_len, prefix_threshold)


def _ceil_exact(v: float) -> int:
    # snap values that are integers up to float error before taking ceil
    r = round(v)
    if abs(v - r) < 1e-9:
        return int(r)
    return int(math.ceil(v))


def nhm_prefix_value(x, layout: NeedHighMutLayout) -> tuple[bool, int]:
    """(valid, i) where valid means the prefix has the shape 1^i 0^(L-i)."""
    bits = _as_bits(x)
    prefix = bits[: layout.prefix_len]
    zeros = np.flatnonzero(prefix == 0)
    run = int(zeros[0]) if zeros.size else prefix.size
    valid = int(prefix.sum()) == run
    return valid, run if valid else 0


def nhm_suffix_value(x, layout: NeedHighMutLayout) -> tuple[bool, int]:
    """(valid, j): every block holds 0 or 2 ones, actives form a leading run
    of length j."""
    bits = _as_bits(x)
    blocks = bits[layout.prefix_len :].reshape(layout.block_count, layout.block_size)
    counts = blocks.sum(axis=1)
    if not bool(np.all((counts == 0) | (counts == 2))):
        return False, 0
    active = counts == 2
    if active.size > 1 and bool(np.any(active[1:] > active[:-1])):
        return False, 0
    return True, int(active.sum())


def need_high_mut(x, layout: NeedHighMutLayout) -> int:
    bits = _as_bits(x)
    if bits.size != layout.n:
        raise ValueError(f"bit string length {bits.size} != layout n {layout.n}")
    n = layout.n
    pre_ok, pre = nhm_prefix_value(bits, layout)
    if pre_ok:
        suf_ok, suff = nhm_suffix_value(bits, layout)
        if suf_ok:
            if pre <= layout.prefix_threshold:
                return n * n * suff + pre
            return n * n * layout.block_count + pre + suff - n - 1
    return -int(bits.sum())


def nhm_state_fitness(pre: int, suff: int, layout: NeedHighMutLayout) -> int:
    """Fitness of the valid string with prefix value pre and suffix value suff."""
    n = layout.n
    if pre <= layout.prefix_threshold:
        return n * n * suff + pre
    return n * n * layout.block_count + pre + suff - n - 1


# ---------------------------------------------------------------------------
# problem objects


class Problem:
    """Evaluatable fitness contract used by engines and the harness."""

    kind: str = "problem"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        self.n = int(n)

    # -- contract -----------------------------------------------------
    def evaluate(self, x) -> int:
        raise NotImplementedError

    def evaluate_batch(self, bits_matrix: np.ndarray) -> np.ndarray:
        """Vectorised evaluation of an (N, n) 0/1 matrix."""
        return np.array([self.evaluate(row) for row in np.asarray(bits_matrix, dtype=np.uint8)], dtype=np.int64)

    @property
    def image_size_hint(self) -> int:
        """Upper bound on |Im(f)|, used as the default R of SD engines."""
        raise NotImplementedError

    def is_global_optimum(self, x) -> bool:
        raise NotImplementedError

    def is_trap_state(self, x) -> bool:
        return False

    # -- hooks for accelerated runners ---------------------------------
    @property
    def popcount_fitness(self) -> np.ndarray | None:
        """Fitness-by-popcount table when fitness is popcount-symmetric."""
        return None

    def param_string(self) -> str:
        return ""

    def __repr__(self):
        params = self.param_string()
        inner = f"n={self.n}" + (f", {params}" if params else "")
        return f"{type(self).__name__}({inner})"


class _PopcountProblem(Problem):
    """Base for problems whose fitness depends on the popcount only."""

    def __init__(self, n: int):
        super().__init__(n)
        table = self._build_table()
        table.flags.writeable = False
        self._table = table

    def _build_table(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def popcount_fitness(self) -> np.ndarray:
        return self._table

    def evaluate(self, x) -> int:
        return int(self._table[int(_as_bits(x).sum())])

    def evaluate_batch(self, bits_matrix) -> np.ndarray:
        counts = np.asarray(bits_matrix, dtype=np.uint8).sum(axis=1)
        return self._table[counts]


class OneMax(_PopcountProblem):
    kind = "onemax"

    def _build_table(self):
        return np.arange(self.n + 1, dtype=np.int64)

    @property
    def image_size_hint(self) -> int:
        return self.n + 2

    def is_global_optimum(self, x) -> bool:
        return int(_as_bits(x).sum()) == self.n


class Jump(_PopcountProblem):
    kind = "jump"

    def __init__(self, n: int, m: int):
        if not 1 <= m <= n:
            raise ValueError(f"gap size must be in [1, n], got m={m} for n={n}")
        self.m = int(m)
        super().__init__(n)

    def _build_table(self):
        c = np.arange(self.n + 1, dtype=np.int64)
        table = self.m + c
        valley = (c > self.n - self.m) & (c < self.n)
        table[valley] = self.n - c[valley]
        return table

    @property
    def image_size_hint(self) -> int:
        return self.n + 2

    def is_global_optimum(self, x) -> bool:
        return int(_as_bits(x).sum()) == self.n

    def param_string(self) -> str:
        return f"m={self.m}"


class Trap(_PopcountProblem):
    kind = "trap"

    def _build_table(self):
        table = np.arange(self.n + 1, dtype=np.int64)
        table[0] = self.n + 1
        return table

    @property
    def image_size_hint(self) -> int:
        return self.n + 2

    def is_global_optimum(self, x) -> bool:
        return int(_as_bits(x).sum()) == 0


class LeadingOnes(Problem):
    kind = "leadingones"

    def evaluate(self, x) -> int:
        return leading_ones(x)

    def evaluate_batch(self, bits_matrix) -> np.ndarray:
        bits = np.asarray(bits_matrix, dtype=np.uint8)
        return np.cumprod(bits, axis=1, dtype=np.int64).sum(axis=1)

    @property
    def image_size_hint(self) -> int:
        return self.n + 1

    def is_global_optimum(self, x) -> bool:
        return int(_as_bits(x).sum()) == self.n


class NeedHighMut(Problem):
    kind = "needhighmut"

    def __init__(self, n: int, xi: float):
        super().__init__(n)
        self.xi = float(xi)
        self.layout = NeedHighMutLayout.from_xi(n, xi)

    def evaluate(self, x) -> int:
        return need_high_mut(x, self.layout)

    def evaluate_batch(self, bits_matrix) -> np.ndarray:
        bits = np.asarray(bits_matrix, dtype=np.uint8)
        lay = self.layout
        n = lay.n
        prefix = bits[:, : lay.prefix_len]
        # leading-ones run of the prefix, and whether the rest is all zeros
        runs = np.cumprod(prefix, axis=1, dtype=np.int64).sum(axis=1)
        pre_valid = prefix.sum(axis=1) == runs
        counts = bits[:, lay.prefix_len :].reshape(-1, lay.block_count, lay.block_size).sum(axis=2)
        blocks_ok = np.all((counts == 0) | (counts == 2), axis=1)
        active = counts == 2
        leading = np.cumprod(active, axis=1, dtype=np.int64).sum(axis=1)
        suf_valid = blocks_ok & (active.sum(axis=1) == leading)
        valid = pre_valid & suf_valid
        case1 = valid & (runs <= lay.prefix_threshold)
        case2 = valid & ~case1
        out = -bits.sum(axis=1).astype(np.int64)
        out[case1] = n * n * leading[case1] + runs[case1]
        out[case2] = n * n * lay.block_count + runs[case2] + leading[case2] - n - 1
        return out

    @property
    def image_size_hint(self) -> int:
        return self.n * self.n * self.layout.block_count + self.n

    def _state(self, x) -> tuple[bool, int, int]:
        pre_ok, pre = nhm_prefix_value(x, self.layout)
        if not pre_ok:
            return False, 0, 0
        suf_ok, suff = nhm_suffix_value(x, self.layout)
        return suf_ok, pre, suff

    def is_global_optimum(self, x) -> bool:
        valid, pre, suff = self._state(x)
        return valid and pre == self.layout.prefix_threshold and suff == self.layout.block_count

    def is_trap_state(self, x) -> bool:
        # the local optimum: full prefix, all blocks active; escaping needs
        # about prefix_len/10 simultaneous flips, so the harness gives up here
        valid, pre, suff = self._state(x)
        return valid and pre == self.layout.prefix_len and suff == self.layout.block_count

    def param_string(self) -> str:
        xi = self.xi
        return f"xi={int(xi)}" if float(xi).is_integer() else f"xi={xi}"


def make_problem(name: str, n: int, *, m: int | None = None, xi: float | None = None) -> Problem:
    """Problem selection by string id, as used by the CLI and harness."""
    key = name.strip().lower()
    if key == "onemax":
        return OneMax(n)
    if key == "leadingones":
        return LeadingOnes(n)
    if key == "jump":
        if m is None:
            raise ValueError("jump requires the gap-size parameter m")
        return Jump(n, m)
    if key == "trap":
        return Trap(n)
    if key == "needhighmut":
        if xi is None:
            raise ValueError("needhighmut requires the parameter xi")
        return NeedHighMut(n, xi)
    raise ValueError(f"unknown problem id: {name!r}")


# ---------------------------------------------------------------------------
# gap oracle


def _enumerate_bits(n: int, start: int, stop: int) -> np.ndarray:
    values = np.arange(start, stop, dtype=np.int64)
    return ((values[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)


def gap_bruteforce(x, problem: Problem) -> int:
    """Minimal Hamming distance from x to any strictly fitter point.

    Full enumeration of {0,1}^n; intentionally independent of any engine
    shortcut so it can serve as an oracle.  Limited to n <= 24.
    """
    n = problem.n
    if n > 24:
        raise ValueError(f"gap_bruteforce enumerates 2^n points; n={n} exceeds the n <= 24 budget")
    bits = _as_bits(x)
    if bits.size != n:
        raise ValueError("bit string length does not match problem dimension")
    fx = int(problem.evaluate(bits))
    best = n + 1
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        block = _enumerate_bits(n, start, min(start + chunk, 1 << n))
        fitter = problem.evaluate_batch(block) > fx
        if fitter.any():
            dists = np.count_nonzero(block[fitter] != bits[None, :], axis=1)
            best = min(best, int(dists.min()))
    if best > n:
        raise NoImprovingPoint(f"no strictly fitter point than fitness {fx} exists")
    return best
