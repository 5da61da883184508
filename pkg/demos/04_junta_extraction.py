"""Find the few coordinates a function really depends on.

The extractor reads A = E[s^p], picks a degree scale d and a threshold delta,
keeps coordinates whose noisy influence clears delta, then rounds the
projection onto them.  nearest_junta is the brute-force yardstick.

Run:  python demos/04_junta_extraction.py
"""

from hyperioso import FamilySpec, JuntaParams, extract_junta, generate, nearest_junta, tribes
from hyperioso.families import embed
from hyperioso.spectral import noisy_influence_vector

params = JuntaParams(eps=0.1, p=1.0)

cases = {
    "and_3 in n=10": embed(generate(FamilySpec("and_k", {"k": 3}), 3), 10),
    "tribes(2,3) in n=10": embed(tribes(2, 3), 10),
    "majority n=7": generate(FamilySpec("majority"), 7),
    "parity n=8": generate(FamilySpec("parity"), 8),
}

for name, f in cases.items():
    res = extract_junta(f, params)
    print(f"{name}")
    print(f"  A = {res.A:.4f}, d = {res.d_used}{' (clamped)' if res.d_clamped else ''}, log2 delta = {res.log2_delta}")
    print(f"  kept {res.coords}; mass outside {res.mass_outside:.4f}; distance {res.distance:.4f}")
    if f.n <= 10 and len(res.coords) <= 6:
        J, best = nearest_junta(f, len(res.coords))
        print(f"  best junta of that size: {J} at distance {best:.4f}")

# what the threshold sees: noisy influences at rho = 1 - 1/2d
f = cases["tribes(2,3) in n=10"]
res = extract_junta(f, params)
print("\nnoisy influences of tribes(2,3) in n=10:", noisy_influence_vector(f, 1 - 0.5 / res.d_used).round(4))

# a lax threshold drops everything, and the report says so
weak = extract_junta(cases["parity n=8"], JuntaParams(eps=0.1, p=1.0, C2=0.01))
print("parity n=8 with C2 = 0.01: kept", weak.coords, "mass outside", weak.mass_outside)
