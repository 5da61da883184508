"""Random restrictions collapse Fourier mass onto level 1.

Keep each coordinate alive with probability 1/d and fix the rest uniformly.
The expected level-1 weight of what survives has a closed form; this script
compares it with brute-force enumeration and with sampling.

Run:  python demos/03_random_restrictions.py
"""

import numpy as np

from hyperioso import FamilySpec, Restriction, generate, restrict
from hyperioso.geometry import sensitivity_counts
from hyperioso.restrictions import (
    expected_level1_enumerated,
    expected_level1_exact,
    expected_level1_mc,
    restricted_gradient_sq,
    sample_restriction,
)

maj = generate(FamilySpec("majority"), 3)

# a single restriction: fix x_3 = 1, leaving an OR of x_1 and x_2
r = Restriction(3, fixed=(3,), assignment=(1,))
print("Maj3 with x_3 = 1:", restrict(maj, r).table, " alive coords", r.alive)

# sampled restrictions are reproducible from (seed, index)
print("three samples:", [sample_restriction(3, 0.5, rng_seed=7, index=k).to_json() for k in range(3)])

print("\n{:<10s} {:>3s} {:>12s} {:>12s} {:>22s}".format("function", "d", "closed form", "enumerated", "Monte Carlo (1e5)"))
for label, f in [("maj3", maj), ("parity2", generate(FamilySpec("parity"), 2)),
                 ("tribes22", generate(FamilySpec("tribes", {"w": 2, "m": 2}), 4))]:
    for d in (2, 3):
        est, se = expected_level1_mc(f, d, 100_000, seed=11)
        print(f"{label:<10s} {d:3d} {expected_level1_exact(f, d):12.6f} "
              f"{expected_level1_enumerated(f, d):12.6f} {est:12.6f} +- {se:.6f}")

# pointwise: the expected squared gradient after restriction is s_f(x) / d
f = generate(FamilySpec("random", {"seed": 3}), 5)
s = sensitivity_counts(f.table)
gaps = [abs(restricted_gradient_sq(f, x, 2) - s[x] / 2) for x in range(32)]
print("\nlargest |E_J ||grad||^2 - s/d| over all 32 points of a random n=5 function:", max(gaps))
