"""A first look at Fourier coefficients, level weights and sensitivity.

Run:  python demos/01_spectrum_tour.py
"""

import numpy as np

from hyperioso import FamilySpec, generate, spectrum, variance
from hyperioso.geometry import influence_vector, sensitivity_profile
from hyperioso.spectral import level_weights

np.set_printoptions(precision=4, suppress=True)

# ---------------------------------------------------------------------------
# Majority on three bits.  Points are bit masks: bit i-1 holds x_i.
# ---------------------------------------------------------------------------
maj = generate(FamilySpec("majority"), 3)
print("Maj3 truth table:", maj.table, "->", maj.serialize())

s = spectrum(maj)
for S in range(8):
    coords = [i + 1 for i in range(3) if S >> i & 1]
    print(f"  f^({set(coords) or '{}'}) = {s.coeffs[S]:+.4f}")

# Parseval: the squared coefficients add up to E[f^2] = E[f]
lw = level_weights(maj)
print("level weights W_0..W_3:", lw.w, " total", lw.total())
print("variance equals the weight above level 0:", variance(maj), lw.above(1))

# ---------------------------------------------------------------------------
# Sensitivity: how many single-bit flips change the value at each point
# ---------------------------------------------------------------------------
prof = sensitivity_profile(maj, ps=(0.5, 1.0))
print("\nsensitivity per point:", prof.counts)
print("histogram of s:", prof.histogram)
print("E[sqrt(s)] =", prof.moment(0.5), " E[s] =", prof.moment(1.0))
print("influences:", influence_vector(maj), " (they sum to E[s])")

# ---------------------------------------------------------------------------
# The same numbers for a few other shapes
# ---------------------------------------------------------------------------
print("\n{:<22s} {:>8s} {:>10s} {:>8s}".format("function", "var", "E[sqrt s]", "W_1"))
for label, spec, n in [
    ("dictator", FamilySpec("dictator", {"i": 1}), 6),
    ("and_6", FamilySpec("and_k", {"k": 6}), 6),
    ("parity", FamilySpec("parity"), 6),
    ("tribes(2,3)", FamilySpec("tribes", {"w": 2, "m": 3}), 6),
    ("random", FamilySpec("random", {"seed": 1}), 6),
]:
    f = generate(spec, n)
    print(f"{label:<22s} {variance(f):8.4f} {sensitivity_profile(f).moment(0.5):10.4f} {level_weights(f).at(1):8.4f}")
