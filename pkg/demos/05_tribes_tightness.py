"""Tribes and the (ln n)^p scale.

For tribes with block width near log2 n the moment E[s^p] grows like
(ln n)^p; at desk scale we can only tabulate exact values and watch the ratio.

Run:  python demos/05_tribes_tightness.py
"""

import math

from hyperioso.families import tribes_moment, tribes_width_for

p = 0.5
print(f"{'w':>3s} {'m':>3s} {'n':>3s} {'Pr[f=1]':>9s} {'E[s^p]':>10s} {'(ln n)^p':>10s} {'ratio':>8s}")
seen = set()
for n in range(4, 17, 2):
    w, m = tribes_width_for(n)
    if (w, m) in seen:  # neighbouring n can share the best shape
        continue
    seen.add((w, m))
    n_used = w * m
    accept = 1 - (1 - 2.0**-w) ** m
    moment = tribes_moment(w, m, p)
    ref = math.log(n_used) ** p
    print(f"{w:3d} {m:3d} {n_used:3d} {accept:9.4f} {moment:10.6f} {ref:10.6f} {moment / ref:8.4f}")

# The same table is available as plot-ready CSV:
#   hyperioso sweep --family tribes --w 2,3 --n-max 16 --p 0.5
