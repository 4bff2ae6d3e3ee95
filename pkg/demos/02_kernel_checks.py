"""Kernel catalog and its Fourier-side health checks.

Every kernel is a closed-form symbol; the checks measure cancellation
(symbol vanishes at 0), non-degeneracy (some dilate sees every direction),
symbol-derivative decay classes, and the low-frequency growth exponent.
"""

import math

from lplab import (
    DecaySpec,
    ScaleGrid,
    check_cancellation,
    check_decay_class,
    check_low_frequency_growth,
    check_nondegeneracy,
    make_builtin,
)

scan = ScaleGrid.log_spaced(1e-3, 1e2, 512)

for name in ("poissonQ", "gaussian", "mexican_hat", "annulus_bump"):
    k = make_builtin(name)
    canc = check_cancellation(k)
    nd = check_nondegeneracy(k, scan)
    print(f"{name:14s} cancellation: {'pass' if canc.passed else 'FAIL'} "
          f"(residual {canc.residual:.1e}); nondegeneracy inf = {nd:.6f}")

print()
print("poissonQ nondegeneracy vs closed form e^-1:",
      abs(check_nondegeneracy(make_builtin('poissonQ'), scan) - math.exp(-1)))

q = make_builtin("poissonQ")
decay = check_decay_class(q, DecaySpec(l=2, tau=3.0), [2, 4, 8, 16, 32, 64])
print("poissonQ decay class (l=2, tau=3):", "pass" if decay.passed else "FAIL")
for gamma, slope in decay.slopes.items():
    print(f"  d^{gamma}: fitted slope {slope:.1f}")

for name in ("poissonQ", "mexican_hat", "gaussian"):
    eps = check_low_frequency_growth(make_builtin(name))
    print(f"{name:14s} low-frequency growth exponent ~ {eps:.3f}")
