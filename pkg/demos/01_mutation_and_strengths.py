"""Bit strings, standard bit mutation, and heavy-tailed strength sampling.

Run: python3 demos/01_mutation_and_strengths.py
"""

import numpy as np

from sdea import (
    RandomStream,
    hamming_distance,
    power_law_strength,
    random_bitstring,
    standard_bit_mutation,
)

rng = RandomStream(2024)

# a uniform random point of {0,1}^20
x = random_bitstring(20, rng)
print("x          =", x)

# strength r means: every bit flips independently with probability r/n,
# so r is the expected number of flipped bits
for r in (1.0, 2.0, 5.0):
    flips = [hamming_distance(x, standard_bit_mutation(x, r, rng)) for _ in range(2000)]
    print(f"strength {r}: mean flips {np.mean(flips):.3f} (expected {r})")

# r = n complements the string deterministically
y = standard_bit_mutation(x, 20, rng)
print("complement =", y, "| distance:", hamming_distance(x, y))

# the heavy-tailed sampler used by the fast EA draws an integer strength
# from Pr[k] ~ k^(-beta) on {1, ..., n/2}; small strengths dominate but
# large ones keep polynomial mass, which is what lets it cross fitness gaps
for beta in (1.5, 2.0, 4.0):
    draws = np.array([power_law_strength(beta, 10, rng) for _ in range(20000)])
    share = [float(np.mean(draws == k)) for k in (1, 2, 10)]
    print(f"beta={beta}: Pr[1]={share[0]:.3f} Pr[2]={share[1]:.3f} Pr[10]={share[2]:.4f}")

# identical seeds reproduce identical draws, bit for bit
a = standard_bit_mutation(x, 3.0, RandomStream(7))
b = standard_bit_mutation(x, 3.0, RandomStream(7))
print("same seed, same offspring:", a == b)
