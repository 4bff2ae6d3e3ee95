"""Muckenhoupt characteristics of power weights.

|x|^a lies in A_p exactly when -n < a < n(p-1): admissible exponents give
radius-stable characteristics, inadmissible ones blow up as the balls grow.
"""

from lplab import Grid, a1_check, admissible_power_range, ap_characteristic
from lplab.weights import Weight

grid = Grid(1, 4096, 64.0)
small = (0.25, 0.5, 1.0, 2.0)
large = (8.0, 16.0, 32.0, 63.0)

print("A_2 characteristic of |x|^a over small vs large balls:")
for a in (-0.5, 0.5, 2.0):
    lo = ap_characteristic(Weight.power(a), 2.0, small, grid)
    hi = ap_characteristic(Weight.power(a), 2.0, small + large, grid)
    verdict = "stable (in A_2)" if hi < 2 * lo else "diverging (outside A_2)"
    print(f"  a = {a:+.1f}: {lo:10.3f} -> {hi:10.3f}   {verdict}")

print()
print("A_1 measured constants:")
for a in (-0.5, 0.5):
    print(f"  |x|^{a:+.1f}: {a1_check(Weight.power(a), grid):.3f}")

print()
print("admissible power range for (p, N, n) = (2, 2, 1):",
      admissible_power_range(2.0, 2.0, 1))
