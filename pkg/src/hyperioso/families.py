"""Generators for the structured functions used as corpus and tightness witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import BooleanFunction, check_dimension, coordinate_mask, points, popcounts
from .errors import ConfigError
from .geometry import sensitivity_moments

KINDS = ("constant", "dictator", "and_k", "or_k", "parity", "majority", "tribes", "random")


@dataclass(frozen=True)
class FamilySpec:
    """A family member: ``kind`` plus its parameters.

    Recognised parameters: ``value`` (constant), ``i`` (dictator coordinate),
    ``k`` (and_k / or_k width), ``S`` (parity coordinates, default all),
    ``w`` and ``m`` (tribe width and count), ``seed`` and ``bias`` (random).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")

    def describe(self) -> str:
        items = [f"family={self.kind}"]
        for key in sorted(self.params):
            val = self.params[key]
            if isinstance(val, (tuple, list)):
                val = "+".join(str(v) for v in val)
            items.append(f"{key}={val}")
        return ",".join(items)

    def implied_n(self) -> Optional[int]:
        if self.kind == "tribes" and "w" in self.params and "m" in self.params:
            return int(self.params["w"]) * int(self.params["m"])
        return None


def _int_param(spec: FamilySpec, key: str, default=None) -> int:
    val = spec.params.get(key, default)
    if val is None:
        raise ConfigError(f"family {spec.kind} needs parameter {key!r}")
    try:
        return int(val)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key}={val!r} is not an integer") from None


def generate(spec: FamilySpec, n: int) -> BooleanFunction:
    n = check_dimension(n)
    x = points(n)
    kind = spec.kind
    if kind == "constant":
        return BooleanFunction.constant(n, _int_param(spec, "value", 0))
    if kind == "dictator":
        i = _int_param(spec, "i", 1)
        if not 1 <= i <= n:
            raise ConfigError(f"dictator coordinate {i} outside [1, {n}]")
        return BooleanFunction(n, ((x >> (i - 1)) & 1).astype(np.uint8))
    if kind in ("and_k", "or_k"):
        k = _int_param(spec, "k", n)
        if not 1 <= k <= n:
            raise ConfigError(f"{kind} width k={k} outside [1, {n}]")
        low = x & ((1 << k) - 1)
        hit = low == (1 << k) - 1 if kind == "and_k" else low != 0
        return BooleanFunction(n, hit.astype(np.uint8))
    if kind == "parity":
        coords = spec.params.get("S")
        mask = (1 << n) - 1 if coords is None else coordinate_mask(_coords(coords), n)
        return BooleanFunction(n, (popcounts(n)[x & mask] & 1).astype(np.uint8))
    if kind == "majority":
        if n % 2 == 0:
            raise ConfigError(f"majority needs odd n, got {n}")
        return BooleanFunction(n, (2 * popcounts(n) > n).astype(np.uint8))
    if kind == "tribes":
        w = _int_param(spec, "w")
        m = _int_param(spec, "m", n // w if w > 0 else None)
        if w < 1 or m < 1 or w * m != n:
            raise ConfigError(f"tribes needs n = w*m, got w={w}, m={m}, n={n}")
        return tribes(w, m)
    if kind == "random":
        seed = _int_param(spec, "seed", 0)
        bias = float(spec.params.get("bias", 0.5))
        if not 0.0 <= bias <= 1.0:
            raise ConfigError(f"bias {bias} outside [0, 1]")
        rng = np.random.default_rng(seed)
        return BooleanFunction(n, (rng.random(1 << n) < bias).astype(np.uint8))
    raise ConfigError(f"unknown family {kind!r}")


def _coords(val) -> tuple:
    if isinstance(val, str):
        return tuple(int(t) for t in val.replace("+", " ").split())
    if isinstance(val, int):
        return (val,)
    return tuple(int(v) for v in val)


def tribes(w: int, m: int) -> BooleanFunction:
    """OR over ``m`` consecutive blocks of width ``w`` of the AND inside each block."""
    n = check_dimension(w * m)
    x = points(n)
    block = (1 << w) - 1
    hit = np.zeros(x.shape, dtype=bool)
    for b in range(m):
        hit |= ((x >> (b * w)) & block) == block
    return BooleanFunction(n, hit.astype(np.uint8))


def embed(f: BooleanFunction, n: int) -> BooleanFunction:
    """``f`` on the first ``f.n`` coordinates of an ``n``-dimensional cube."""
    n = check_dimension(n)
    if n < f.n:
        raise ConfigError(f"cannot embed n={f.n} into n={n}")
    return BooleanFunction(n, f.table[points(n) & ((1 << f.n) - 1)])


def tribes_moment(w: int, m: int, p: float) -> float:
    """Exact ``E[s^p]`` of the tribes function, by enumeration of all points."""
    return float(sensitivity_moments(tribes(w, m).table, p))


def tribes_width_for(n: int) -> tuple[int, int]:
    """``(w, m)`` with ``w * m <= n`` whose acceptance probability is closest to 1/2."""
    best = None
    for w in range(1, n + 1):
        m = n // w
        accept = 1.0 - (1.0 - 2.0**-w) ** m
        key = (abs(accept - 0.5), w)
        if best is None or key < best[0]:
            best = (key, (w, m))
    return best[1]


def family_corpus(n_max: int) -> list[tuple[str, BooleanFunction]]:
    """Every structured family member with ``1 <= n <= n_max``, in a fixed order."""
    out = []
    for n in range(1, n_max + 1):
        specs = [FamilySpec("constant", {"value": 0}), FamilySpec("constant", {"value": 1}),
                 FamilySpec("dictator", {"i": 1})]
        specs += [FamilySpec("and_k", {"k": k}) for k in range(2, n + 1)]
        specs += [FamilySpec("or_k", {"k": k}) for k in range(2, n + 1)]
        if n >= 2:
            specs.append(FamilySpec("parity", {}))
        if n % 2 == 1 and n >= 3:
            specs.append(FamilySpec("majority", {}))
        for w in range(2, n):
            if n % w == 0 and n // w >= 2:
                specs.append(FamilySpec("tribes", {"w": w, "m": n // w}))
        for spec in specs:
            out.append((f"{spec.describe()},n={n}", generate(spec, n)))
    return out


def log_n_power(n: int, p: float) -> float:
    return math.log(n) ** p if n > 1 else float("nan")
