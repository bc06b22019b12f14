"""The benchmark family and the gap oracle.

The gap of a point is the minimal Hamming distance to any strictly fitter
point; it is the quantity stagnation detection implicitly estimates.

Run: python3 demos/02_benchmark_functions.py
"""

import numpy as np

from sdea import BitString, gap_bruteforce, make_problem

# OneMax and LeadingOnes are unimodal: every non-optimal point has gap 1
onemax = make_problem("onemax", 10)
lo = make_problem("leadingones", 10)
x = BitString.from_string("1110010110")
print("OneMax(x) =", onemax.evaluate(x), " LeadingOnes(x) =", lo.evaluate(x))
print("gap on OneMax:", gap_bruteforce(x, onemax))

# Jump_m: a OneMax slope, then a plateau at n-m ones whose only improvement
# is the optimum, m flips away
jump = make_problem("jump", 10, m=3)
plateau = BitString.from_string("1111111000")
print("Jump fitness on the plateau:", jump.evaluate(plateau))
print("gap on the Jump plateau (equals m):", gap_bruteforce(plateau, jump))

# Trap: OneMax everywhere except the all-zeros string, which is optimal;
# from the all-ones local optimum every bit must flip at once
trap = make_problem("trap", 10)
print("Trap gap at the all-ones point:", gap_bruteforce(BitString([1] * 10), trap))

# NeedHighMut: a prefix scored by its leading-ones run races a suffix of
# two-one blocks; finishing the prefix first (the likely outcome at low
# mutation rates) leads into a trap of second-best fitness
nhm = make_problem("needhighmut", 100, xi=1.0)
lay = nhm.layout
print(f"NeedHighMut layout at n=100: {lay.block_count} blocks of {lay.block_size} bits, "
      f"prefix {lay.prefix_len} bits, threshold {lay.prefix_threshold}")

opt = np.zeros(100, dtype=np.uint8)
opt[: lay.prefix_threshold] = 1
for b in range(lay.block_count):
    opt[lay.prefix_len + b * lay.block_size] = 1
    opt[lay.prefix_len + b * lay.block_size + 1] = 1
print("global optimum fitness:", nhm.evaluate(opt), "| is optimum:", nhm.is_global_optimum(opt))

local = opt.copy()
local[: lay.prefix_len] = 1
print("local optimum fitness: ", nhm.evaluate(local), "| is trap state:", nhm.is_trap_state(local))
