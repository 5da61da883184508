"""Sensitivity, gradients, influences and boundary measures on the hypercube.

Sensitivities are computed with one shifted XOR pass per direction over the
whole table (and over any leading batch axes), never per point.  Moments
``E[s^p]`` go through the integer histogram of sensitivity values so only
``n + 1`` powers are taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .core import (
    BooleanFunction,
    RealPointFunction,
    bits_to_hex,
    check_coordinate,
    check_dimension,
    dimension_of,
    flip_axis,
    hex_to_bits,
    split_axis,
    values_of,
    variance,
)
from .errors import ConfigError, DimensionError


# -- array level ---------------------------------------------------------


def sensitivity_counts(tables: np.ndarray) -> np.ndarray:
    """``s_f(x)`` for every point of every table along the last axis."""
    t = np.asarray(tables, dtype=np.uint8)
    n = dimension_of(t.shape[-1])
    s = np.zeros(t.shape, dtype=np.int64)
    for i in range(1, n + 1):
        s += t ^ flip_axis(t, i)
    return s


def sensitivity_histogram(counts: np.ndarray, n: int) -> np.ndarray:
    """Histogram of sensitivity values, shape (..., n + 1)."""
    c = np.asarray(counts, dtype=np.int64)
    lead = c.shape[:-1]
    rows = int(np.prod(lead, dtype=np.int64))
    flat = c.reshape(rows, -1) + (n + 1) * np.arange(rows, dtype=np.int64)[:, None]
    hist = np.bincount(flat.ravel(), minlength=rows * (n + 1))
    return hist.reshape(lead + (n + 1,))


def moment_from_histogram(hist: np.ndarray, p: float) -> np.ndarray:
    """``E[s^p]`` from a sensitivity histogram (``0**p = 0``)."""
    h = np.asarray(hist, dtype=np.float64)
    k = np.arange(h.shape[-1], dtype=np.float64)
    w = np.where(k > 0, k**p, 0.0)
    return (h * w).sum(-1) / h.sum(-1)


def sensitivity_moments(tables: np.ndarray, p: float) -> np.ndarray:
    t = np.asarray(tables, dtype=np.uint8)
    n = dimension_of(t.shape[-1])
    return moment_from_histogram(sensitivity_histogram(sensitivity_counts(t), n), p)


def influence_array(tables: np.ndarray) -> np.ndarray:
    """``I_i[f]`` for i = 1..n, shape (..., n)."""
    t = np.asarray(tables, dtype=np.uint8)
    n = dimension_of(t.shape[-1])
    out = np.empty(t.shape[:-1] + (n,), dtype=np.float64)
    for i in range(1, n + 1):
        lo, hi = split_axis(t, i)
        out[..., i - 1] = (lo ^ hi).sum(-1, dtype=np.int64) / float(1 << (n - 1))
    return out


def gradient_array(values: np.ndarray) -> np.ndarray:
    """``partial_i g(x)`` for every coordinate and point, shape (..., n, 2**n).

    ``partial_i g(x) = g(x with x_i = 0) - g(x with x_i = 1)``; the value does
    not depend on ``x_i``.
    """
    v = np.asarray(values, dtype=np.float64)
    lead = v.shape[:-1]
    n = dimension_of(v.shape[-1])
    out = np.empty(lead + (n, v.shape[-1]), dtype=np.float64)
    for i in range(1, n + 1):
        lo = 1 << (i - 1)
        w = v.reshape(lead + (-1, 2, lo))
        diff = w[..., 0:1, :] - w[..., 1:2, :]
        out[..., i - 1, :] = np.broadcast_to(diff, w.shape).reshape(lead + (-1,))
    return out


def gradient_norm_mean(values: np.ndarray, q: float) -> np.ndarray:
    """``E_x[ ||grad g(x)||_q ]`` over the last axis."""
    if not q >= 1:
        raise ConfigError(f"gradient norm needs q >= 1, got {q}")
    g = np.abs(gradient_array(values))
    if q == 2:
        norms = np.sqrt((g * g).sum(-2))
    elif q == 1:
        norms = g.sum(-2)
    else:
        norms = (g**q).sum(-2) ** (1.0 / q)
    return norms.mean(-1)


# -- Boolean-function operations -----------------------------------------


def derivative(f: BooleanFunction, i: int) -> RealPointFunction:
    check_coordinate(f.n, i)
    return RealPointFunction(f.n, gradient_array(f.values())[i - 1])


def sensitivity(f: BooleanFunction, x: int) -> int:
    if not 0 <= x < (1 << f.n):
        raise ConfigError(f"point {x} outside [0, 2**{f.n})")
    v = f.table[x]
    return sum(int(v != f.table[x ^ (1 << i)]) for i in range(f.n))


@dataclass(frozen=True)
class SensitivityProfile:
    n: int
    counts: np.ndarray = field(repr=False)
    histogram: np.ndarray
    moments: dict

    def moment(self, p: float) -> float:
        if p not in self.moments:
            return float(moment_from_histogram(self.histogram, p))
        return self.moments[p]

    @property
    def sensitive_edges(self) -> int:
        return int(self.counts.sum()) // 2


def sensitivity_profile(f: BooleanFunction, ps: Iterable[float] = (0.5, 1.0)) -> SensitivityProfile:
    counts = sensitivity_counts(f.table)
    counts.flags.writeable = False
    hist = sensitivity_histogram(counts, f.n)
    hist.flags.writeable = False
    moments = {float(p): float(moment_from_histogram(hist, p)) for p in ps}
    return SensitivityProfile(f.n, counts, hist, moments)


def sensitivity_moment(f: BooleanFunction, p: float) -> float:
    """``E[s_f(x)^p]`` for any ``p > 0``."""
    if not p > 0:
        raise ConfigError(f"moment exponent must be positive, got {p}")
    return float(sensitivity_moments(f.table, p))


def talagrand_boundary(f: BooleanFunction, p: float = 0.5) -> float:
    if not 0.5 <= p <= 1.0:
        raise ConfigError(f"Talagrand exponent p={p} outside [1/2, 1]")
    return float(sensitivity_moments(f.table, p))


def influence(f: BooleanFunction, i: int) -> float:
    check_coordinate(f.n, i)
    return float(influence_array(f.table)[i - 1])


def influence_vector(f: BooleanFunction) -> np.ndarray:
    return influence_array(f.table)


def total_influence(f: BooleanFunction) -> float:
    return float(influence_array(f.table).sum())


def influence_sq_sum(f: BooleanFunction) -> float:
    """``M[f]``, the sum of squared influences."""
    inf = influence_array(f.table)
    return float((inf * inf).sum())


def edge_boundary_measure(f: BooleanFunction) -> float:
    """``|E_f| / 2^n``."""
    edges = int(sensitivity_counts(f.table).sum()) // 2
    return edges / (1 << f.n)


def vertex_boundary_measure(f: BooleanFunction) -> float:
    return float(np.mean(sensitivity_counts(f.table) > 0))


# -- edge colorings ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    """Red/blue colours on the ``n * 2**(n-1)`` hypercube edges.

    ``colors[i - 1, k]`` is the colour of the edge in direction ``i`` whose
    lower endpoint is the ``k``-th point (ascending) with ``x_i = 0``;
    1 is red, 0 is blue.
    """

    n: int
    colors: np.ndarray

    def __post_init__(self):
        n = check_dimension(self.n)
        c = np.asarray(self.colors, dtype=np.uint8)
        half = (1 << n) >> 1
        if c.size != n * half:
            raise DimensionError(f"{c.size} colour bits for n={n}, need {n * half}")
        if c.size and c.max() > 1:
            raise ConfigError("colour bits must be 0 or 1")
        c = c.reshape(n, half).copy()
        c.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "colors", c)

    @classmethod
    def uniform(cls, n: int, red: bool) -> "EdgeColoring":
        half = (1 << n) >> 1
        return cls(n, np.full(n * half, 1 if red else 0, dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, p_red: float = 0.5) -> "EdgeColoring":
        half = (1 << n) >> 1
        return cls(n, (rng.random(n * half) < p_red).astype(np.uint8))

    @classmethod
    def by_direction(cls, n: int, red_directions: Iterable[int]) -> "EdgeColoring":
        half = (1 << n) >> 1
        c = np.zeros((n, half), dtype=np.uint8)
        for i in red_directions:
            c[check_coordinate(n, i) - 1] = 1
        return cls(n, c)

    def color(self, x: int, i: int) -> int:
        """Colour of edge ``(x, x xor e_i)``; either endpoint may be given."""
        check_coordinate(self.n, i)
        b = i - 1
        x = int(x) & ~(1 << b)
        k = (x & ((1 << b) - 1)) | ((x >> (b + 1)) << b)
        return int(self.colors[b, k])

    def point_colors(self) -> np.ndarray:
        """Colour of edge (x, x xor e_i) for every x, shape (n, 2**n)."""
        return expand_edge_bits(self.colors, self.n)

    def serialize(self) -> str:
        return f"col:{self.n}:{bits_to_hex(self.colors.ravel())}"

    @classmethod
    def parse(cls, text: str) -> "EdgeColoring":
        parts = text.strip().split(":")
        if len(parts) != 3 or parts[0] != "col":
            raise ConfigError(f"expected 'col:<n>:<hex>', got {text!r}")
        n = check_dimension(int(parts[1]))
        return cls(n, hex_to_bits(parts[2], n * ((1 << n) >> 1)))


def expand_edge_bits(colors: np.ndarray, n: int) -> np.ndarray:
    """Lift per-edge bits (..., n, 2**(n-1)) to both endpoints (..., n, 2**n)."""
    c = np.asarray(colors)
    lead = c.shape[:-2]
    out = np.empty(lead + (n, 1 << n), dtype=c.dtype)
    for i in range(1, n + 1):
        lo = 1 << (i - 1)
        row = c[..., i - 1, :].reshape(lead + (-1, 1, lo))
        out[..., i - 1, :] = np.broadcast_to(row, lead + (row.shape[-3], 2, lo)).reshape(lead + (-1,))
    return out


def colored_counts(tables: np.ndarray, colors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Red and blue sensitivities for broadcastable tables (..., 2**n) and colourings (..., n, 2**(n-1))."""
    t = np.asarray(tables, dtype=np.uint8)
    n = dimension_of(t.shape[-1])
    red = expand_edge_bits(colors, n)
    s_red = 0
    s_blue = 0
    for i in range(1, n + 1):
        sens = t ^ flip_axis(t, i)
        r = red[..., i - 1, :]
        s_red = s_red + (sens & r).astype(np.int64)
        s_blue = s_blue + (sens & (1 - r)).astype(np.int64)
    s_red = s_red * t
    s_blue = s_blue * (1 - t)
    return s_red, s_blue


def colored_sensitivities(f: BooleanFunction, col: EdgeColoring, x: int) -> tuple[int, int]:
    if col.n != f.n:
        raise DimensionError(f"colouring on n={col.n}, function on n={f.n}")
    if not 0 <= x < (1 << f.n):
        raise ConfigError(f"point {x} outside [0, 2**{f.n})")
    fx = int(f.table[x])
    red = blue = 0
    for i in range(1, f.n + 1):
        if f.table[x ^ (1 << (i - 1))] != fx:
            if col.color(x, i):
                red += 1
            else:
                blue += 1
    return (red if fx == 1 else 0), (blue if fx == 0 else 0)


def talagrand_colored(f: BooleanFunction, col: EdgeColoring) -> float:
    if col.n != f.n:
        raise DimensionError(f"colouring on n={col.n}, function on n={f.n}")
    s_red, s_blue = colored_counts(f.table, col.colors)
    return float(np.sqrt(s_red).mean() + np.sqrt(s_blue).mean())


def talagrand_colored_array(tables: np.ndarray, colors: np.ndarray) -> np.ndarray:
    s_red, s_blue = colored_counts(tables, colors)
    return np.sqrt(s_red).mean(-1) + np.sqrt(s_blue).mean(-1)


def gradient_norm(g, q: float = 2.0) -> float:
    """``E_x[ ||grad g(x)||_q ]`` for a Boolean or real point function."""
    return float(gradient_norm_mean(values_of(g), q))


def poincare_gap(f: BooleanFunction) -> Optional[float]:
    """``|E_f|/2^n - var(f)``; nonnegative for every Boolean function."""
    return edge_boundary_measure(f) - variance(f)
