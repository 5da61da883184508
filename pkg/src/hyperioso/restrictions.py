"""Restrictions, random restrictions and the level-1 collapse identity.

Random restrictions are drawn with one numpy substream per sample index:
sample ``i`` under seed ``s`` uses ``SeedSequence(s, spawn_key=(i,))``, which
is the ``i``-th child of ``SeedSequence(s).spawn``.  A sample therefore never
depends on how many samples were drawn before it or on which worker drew it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .core import (
    BooleanFunction,
    check_coordinate,
    check_dimension,
    coordinate_mask,
    mask_coordinates,
    popcounts,
    spectrum,
    wht_array,
)
from .errors import ConfigError, RestrictionError
from .geometry import gradient_array, sensitivity_counts
from .spectral import level_weight_array


@dataclass(frozen=True)
class Restriction:
    """Coordinates ``fixed`` pinned to ``assignment`` (aligned tuples of bits).

    The surviving ("alive") coordinates keep their relative order and are
    renumbered 1..m in the restricted function; ``alive`` holds the original
    coordinate of each.
    """

    n: int
    fixed: tuple
    assignment: tuple

    def __post_init__(self):
        n = check_dimension(self.n)
        fixed = tuple(int(c) for c in self.fixed)
        z = tuple(int(b) for b in self.assignment)
        if len(fixed) != len(z):
            raise RestrictionError(f"{len(fixed)} fixed coordinates but {len(z)} assigned bits")
        if len(set(fixed)) != len(fixed):
            raise RestrictionError("fixed coordinates repeat")
        for c in fixed:
            if not 1 <= c <= n:
                raise RestrictionError(f"fixed coordinate {c} outside [1, {n}]")
        if any(b not in (0, 1) for b in z):
            raise RestrictionError("assignment bits must be 0 or 1")
        order = sorted(range(len(fixed)), key=fixed.__getitem__)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "fixed", tuple(fixed[k] for k in order))
        object.__setattr__(self, "assignment", tuple(z[k] for k in order))

    @classmethod
    def from_masks(cls, n: int, fixed_mask: int, value_mask: int) -> "Restriction":
        fixed = mask_coordinates(fixed_mask)
        return cls(n, fixed, tuple((value_mask >> (c - 1)) & 1 for c in fixed))

    @property
    def fixed_mask(self) -> int:
        return coordinate_mask(self.fixed, self.n)

    @property
    def value_mask(self) -> int:
        return sum(b << (c - 1) for c, b in zip(self.fixed, self.assignment))

    @property
    def alive(self) -> tuple:
        fixed = set(self.fixed)
        return tuple(c for c in range(1, self.n + 1) if c not in fixed)

    @property
    def dimension(self) -> int:
        return self.n - len(self.fixed)

    def merge(self, inner: "Restriction") -> "Restriction":
        """One restriction equal to applying ``self`` and then ``inner`` on what survives."""
        alive = self.alive
        if inner.n != len(alive):
            raise RestrictionError(f"inner restriction on n={inner.n}, {len(alive)} coordinates alive")
        fixed = self.fixed + tuple(alive[c - 1] for c in inner.fixed)
        return Restriction(self.n, fixed, self.assignment + inner.assignment)

    def to_json(self) -> str:
        return json.dumps({"fixed": list(self.fixed), "z": "".join(map(str, self.assignment))})

    @classmethod
    def from_json(cls, n: int, text: str) -> "Restriction":
        obj = json.loads(text)
        z = obj.get("z", "")
        if any(ch not in "01" for ch in z):
            raise RestrictionError(f"assignment {z!r} is not a bitstring")
        return cls(n, tuple(obj.get("fixed", ())), tuple(int(ch) for ch in z))

    def point_indices(self) -> np.ndarray:
        """Original point index of every point of the restricted cube."""
        return subcube_indices(self.n, self.fixed_mask, self.value_mask)


def subcube_indices(n: int, fixed_mask: int, value_mask: int) -> np.ndarray:
    alive = [b for b in range(n) if not (fixed_mask >> b) & 1]
    y = np.arange(1 << len(alive), dtype=np.int64)
    x = np.full(y.shape, value_mask & fixed_mask, dtype=np.int64)
    for j, b in enumerate(alive):
        x |= ((y >> j) & 1) << b
    return x


def restrict(f: BooleanFunction, r: Restriction) -> BooleanFunction:
    if r.n != f.n:
        raise RestrictionError(f"restriction on n={r.n}, function on n={f.n}")
    return BooleanFunction(r.dimension, f.table[r.point_indices()])


# -- random restrictions -------------------------------------------------


def _check_prob(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"probability {p} outside [0, 1]")
    return float(p)


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _draw_masks(n: int, p_alive: float, seed: int, index: int) -> tuple[int, int]:
    rng = _substream(seed, index)
    alive = rng.random(n) < p_alive
    bits = rng.integers(0, 2, size=n)
    weights = 1 << np.arange(n, dtype=np.int64)
    fixed_mask = int(weights[~alive].sum())
    return fixed_mask, int(weights[bits == 1].sum()) & fixed_mask


def sample_restriction(n: int, p_alive: float, rng_seed: int, index: int = 0) -> Restriction:
    """Each coordinate alive independently with probability ``p_alive``, fixed bits uniform."""
    check_dimension(n)
    fixed_mask, value_mask = _draw_masks(n, _check_prob(p_alive), rng_seed, index)
    return Restriction.from_masks(n, fixed_mask, value_mask)


def sample_restriction_masks(n: int, p_alive: float, rng_seed: int, count: int, start: int = 0) -> np.ndarray:
    """(count, 2) array of ``(fixed_mask, value_mask)`` for sample indices start..start+count-1."""
    _check_prob(p_alive)
    out = np.empty((count, 2), dtype=np.int64)
    for k in range(count):
        out[k] = _draw_masks(n, p_alive, rng_seed, start + k)
    return out


# -- the level-1 collapse ------------------------------------------------


def _check_d(d: float) -> float:
    if not d >= 1:
        raise ConfigError(f"restriction parameter d={d} must be >= 1")
    return float(d)


def level1_collapse_weights(n: int, d: float) -> np.ndarray:
    """``Pr_J[|T cap J| = 1]`` for every subset ``T`` when coordinates live w.p. ``1/d``."""
    q = 1.0 / _check_d(d)
    t = popcounts(n).astype(np.float64)
    return t * q * (1.0 - q) ** np.maximum(t - 1.0, 0.0)


def expected_level1_exact(f, d: float) -> float:
    """Closed form of ``E_{J,z}[ W_{=1}[f restricted to J] ]``."""
    s = spectrum(f)
    return float(np.sum(s.coeffs**2 * level1_collapse_weights(s.n, d)))


def expected_level1_array(coeffs: np.ndarray, d: float) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.float64)
    n = int(c.shape[-1]).bit_length() - 1
    return (c * c * level1_collapse_weights(n, d)).sum(-1)


def expected_level1_enumerated(f: BooleanFunction, d: float) -> float:
    """The same expectation by enumerating every alive set ``J`` and assignment ``z``.

    Each restricted function is tabulated and transformed on its own, so this
    route shares nothing with the closed form beyond the transform itself.
    """
    q = 1.0 / _check_d(d)
    n = f.n
    total = 0.0
    for fixed_mask in range(1 << n):
        alive = n - bin(fixed_mask).count("1")
        prob_j = q**alive * (1.0 - q) ** (n - alive)
        if prob_j == 0.0:
            continue
        fixed = mask_coordinates(fixed_mask)
        acc = 0.0
        for zbits in range(1 << len(fixed)):
            value_mask = sum(((zbits >> k) & 1) << (c - 1) for k, c in enumerate(fixed))
            sub = f.table[subcube_indices(n, fixed_mask, value_mask)]
            acc += float(level_weight_array(wht_array(sub))[1]) if alive else 0.0
        total += prob_j * acc / (1 << len(fixed))
    return total


def expected_level1_by_alive_sets(coeffs: np.ndarray, d: float) -> np.ndarray:
    """Exact ``E_J`` over all ``2^n`` alive sets, averaging over ``z`` by Parseval.

    For each alive set ``J`` the level-1 weight after averaging over ``z`` is
    ``sum_{j in J} sum_{S subset of Jbar} f^(S + j)^2``; the inner sums over
    ``S`` are a subset-sum (zeta) transform, so all ``J`` are handled at once.
    Broadcasts over leading axes.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    n = int(c.shape[-1]).bit_length() - 1
    q = 1.0 / _check_d(d)
    lead = c.shape[:-1]
    sq = c * c
    masks = np.arange(1 << n)
    alive_sizes = popcounts(n).astype(np.float64)
    prob = q**alive_sizes * (1.0 - q) ** (n - alive_sizes)
    total = np.zeros(lead, dtype=np.float64)
    full = (1 << n) - 1
    for j in range(n):
        bit = 1 << j
        # g[S] = f^(S + j)^2 for S avoiding j
        g = np.where((masks & bit) == 0, sq[..., masks | bit], 0.0)
        zeta = g.copy()
        for i in range(n):
            v = zeta.reshape(lead + (-1, 2, 1 << i))
            v[..., 1, :] += v[..., 0, :]
        # zeta[M] = sum_{S subset of M} g[S]; need M = complement of J with j in J
        weight = np.where((masks & bit) != 0, zeta[..., full & ~masks], 0.0)
        total += (weight * prob).sum(-1)
    return total


def expected_level1_mc(f: BooleanFunction, d: float, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of the level-1 collapse with its standard error."""
    if samples < 1:
        raise ConfigError("need at least one sample")
    values = level1_samples(f.table[None, :], d, samples, seed)[0]
    est = float(values.mean())
    if samples == 1:
        return est, math.inf
    return est, float(values.std(ddof=1) / math.sqrt(samples))


def level1_samples(tables: np.ndarray, d: float, samples: int, seed: int, chunk: int = 4096) -> np.ndarray:
    """``W_{=1}`` of sampled restrictions for each table, shape (tables, samples).

    All tables see the same restrictions.  The restricted singleton
    coefficient at ``j`` is half the average of ``partial_j f`` over the
    surviving subcube, so no restricted function is materialized.
    """
    t = np.asarray(tables, dtype=np.uint8)
    n = int(t.shape[-1]).bit_length() - 1
    q = 1.0 / _check_d(d)
    grads = gradient_array(t.astype(np.float64))  # (F, n, 2^n)
    flat = grads.reshape(-1, 1 << n).T  # (2^n, F*n)
    pts = np.arange(1 << n, dtype=np.int64)
    out = np.empty((t.shape[0], samples), dtype=np.float64)
    for start in range(0, samples, chunk):
        count = min(chunk, samples - start)
        masks = sample_restriction_masks(n, q, seed, count, start)
        fixed, value = masks[:, 0:1], masks[:, 1:2]
        inside = ((pts[None, :] ^ value) & fixed) == 0  # (count, 2^n)
        sizes = inside.sum(1, dtype=np.int64).astype(np.float64)
        means = (inside.astype(np.float64) @ flat) / sizes[:, None]  # (count, F*n)
        means = means.reshape(count, t.shape[0], n)
        alive = ((~fixed[:, 0:1] >> np.arange(n)) & 1).astype(np.float64)  # (count, n)
        w1 = 0.25 * (means * means * alive[:, None, :]).sum(-1)
        out[:, start:start + count] = w1.T
    return out


def restricted_gradient_sq(f: BooleanFunction, x: int, d: float) -> float:
    """``E_J[ ||grad f_{Jbar -> x}(x_J)||_2^2 ]`` by enumerating alive sets ``J``."""
    q = 1.0 / _check_d(d)
    n = f.n
    total = 0.0
    for fixed_mask in range(1 << n):
        alive = n - bin(fixed_mask).count("1")
        prob = q**alive * (1.0 - q) ** (n - alive)
        r = Restriction.from_masks(n, fixed_mask, x)
        sub = restrict(f, r)
        y = sum(((x >> (c - 1)) & 1) << k for k, c in enumerate(r.alive))
        total += prob * float(sensitivity_counts(sub.table)[y]) if alive else 0.0
    return total
