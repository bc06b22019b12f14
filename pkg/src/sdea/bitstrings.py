"""Bit-string genotypes, reproducible random streams and mutation operators.

The search space is {0,1}^n.  Mutation flips every bit independently with
probability r/n, where the *strength* r is the expected number of flipped
bits.  A heavy-tailed sampler draws integer strengths from a power law,
which is the mutation scheme of the "fast" EA variants.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def mix64(*parts: int) -> int:
    """Avalanche-mix integers into one 64-bit value (SplitMix64 finalizer).

    Used to derive statistically independent per-run seeds from
    (base_seed, cell_id, run_index) triples.
    """
    h = 0x9E3779B97F4A7C15
    for part in parts:
        h = (h + (int(part) & _MASK64)) & _MASK64
        h ^= h >> 30
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


class RandomStream:
    """A deterministic PRNG stream owned by exactly one run.

    Identical seeds yield bit-identical draw sequences.  Streams for
    different runs are derived with :func:`mix64`, so they are
    statistically independent even for adjacent run indices.
    """

    __slots__ = ("seed", "generator")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    @classmethod
    def for_run(cls, base_seed: int, cell_id: int, run_index: int) -> "RandomStream":
        return cls(mix64(base_seed, cell_id, run_index))

    def spawn(self, key: int) -> "RandomStream":
        """Derive an independent child stream."""
        return RandomStream(mix64(self.seed, key))


class BitString:
    """Fixed-length binary genotype.

    The underlying array is frozen after construction; mutation operators
    return new instances and never touch their input.
    """

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if arr.size == 0:
            raise ValueError("empty bit strings are not allowed (n >= 1)")
        if arr.max(initial=0) > 1:
            raise ValueError("bits must be 0 or 1")
        arr.flags.writeable = False
        self.bits = arr

    @classmethod
    def from_string(cls, s: str) -> "BitString":
        return cls([int(c) for c in s])

    @property
    def n(self) -> int:
        return self.bits.size

    def popcount(self) -> int:
        return int(self.bits.sum())

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.bits.size == other.bits.size and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        body = "".join(map(str, self.bits.tolist()))
        if len(body) > 64:
            body = body[:61] + "..."
        return f"BitString({body})"


def random_bitstring(n: int, rng: RandomStream) -> BitString:
    """Uniform random point of {0,1}^n; every bit is 1 with probability 1/2."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return BitString(rng.generator.integers(0, 2, size=n, dtype=np.uint8))


def standard_bit_mutation(x: BitString, strength: float, rng: RandomStream) -> BitString:
    """Flip each bit of a copy of ``x`` independently with probability strength/n.

    Sampling is literally per-bit Bernoulli (vectorised), so acceptance
    statistics downstream are exact.  Strengths are restricted to
    0 < r <= n; r = n complements the string deterministically.
    """
    n = x.n
    if not 0.0 < strength <= n:
        raise ValueError(f"strength must be in (0, n], got {strength} for n={n}")
    p = strength / n
    flips = (rng.generator.random(n) < p).astype(np.uint8)
    return BitString(np.bitwise_xor(x.bits, flips))


def hamming_distance(x: BitString, y: BitString) -> int:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} != {y.n}")
    return int(np.count_nonzero(x.bits != y.bits))


_power_law_cdfs: dict[tuple[float, int], np.ndarray] = {}


def power_law_cdf(beta: float, upper: int) -> np.ndarray:
    """CDF of the distribution Pr[k] ~ k^(-beta) on {1, ..., upper}."""
    if beta <= 1.0:
        raise ValueError(f"beta must be > 1, got {beta}")
    if upper < 1:
        raise ValueError(f"upper must be >= 1, got {upper}")
    key = (float(beta), int(upper))
    cdf = _power_law_cdfs.get(key)
    if cdf is None:
        weights = np.arange(1, upper + 1, dtype=float) ** (-float(beta))
        cdf = np.cumsum(weights)
        cdf /= cdf[-1]
        cdf[-1] = 1.0
        cdf.flags.writeable = False
        _power_law_cdfs[key] = cdf
    return cdf


def power_law_pmf(beta: float, upper: int) -> np.ndarray:
    cdf = power_law_cdf(beta, upper)
    return np.diff(cdf, prepend=0.0)


def power_law_strength(beta: float, upper: int, rng: RandomStream) -> int:
    """Draw an integer strength from the heavy-tailed law k^(-beta) on [1, upper]."""
    cdf = power_law_cdf(beta, upper)
    return int(np.searchsorted(cdf, rng.generator.random(), side="right")) + 1
