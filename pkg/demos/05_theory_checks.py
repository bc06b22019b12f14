"""Numeric checks of the closed forms behind the stagnation thresholds.

Run: python3 demos/05_theory_checks.py
"""

from sdea import RandomStream, escape_bracket, partial_sum_check, phase_failure_bound
from sdea.theory import partial_sum_sweep

# partial-sum inequality: the total length of all phases up to strength m
# is dominated by the last one
res = partial_sum_check(10, 3)
print(f"n=10, m=3: sum (en/i)^i = {res.lhs:.1f} < {res.rhs:.1f} = n/(n-m) (en/m)^m -> {res.holds}")
violations = partial_sum_sweep(200)
print("sweep over all 1 <= m < n <= 200:", "no violations" if not violations else violations[:5])

# per-phase failure probability at the right strength is below 1/(nR)^2
for (r, m, n, R) in ((2, 2, 20, 20.0), (1, 1, 100, 100.0)):
    res = phase_failure_bound(r, m, n, R, trials=100_000, rng=RandomStream(3))
    print(f"r={r}, gap {m}, n={n}, R={R:g}: analytic {res.analytic_bound:.3e} "
          f"<= cap {res.certified_cap:.3e}; empirical {res.empirical:.1e}")

# two-sided bracket on the expected escape time from a gap-m point
for (n, m) in ((20, 2), (100, 4)):
    b = escape_bracket(n, m, R=n)
    print(f"escape time bracket at n={n}, m={m}: ({b.lower:.4g}, {b.upper:.4g})")
