"""Truth tables, real point functions and the Walsh-Hadamard transform.

Encoding: point ``x`` and subset ``S`` are both integer masks, bit ``i`` of the
mask standing for coordinate ``i + 1``.  Coordinates are 1-based everywhere in
the public API (``x_1`` is the least significant bit).

Array-level helpers (``butterfly``, ``wht_array``, ``flip_axis``, ...) accept
arrays whose *last* axis has length ``2**n`` and broadcast over any leading
batch axes; the object-level operations are thin wrappers around them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Union

import numpy as np

from .errors import ConfigError, DimensionError

MAX_N = 24

_HEX = np.frombuffer(b"0123456789abcdef", dtype=np.uint8)
_UNHEX = np.full(256, 255, dtype=np.uint8)
_UNHEX[_HEX] = np.arange(16, dtype=np.uint8)


def check_dimension(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ConfigError(f"dimension must be an integer, got {n!r}")
    if not 0 <= n <= MAX_N:
        raise ConfigError(f"dimension n={n} outside [0, {MAX_N}]")
    return int(n)


def dimension_of(length: int) -> int:
    n = int(length).bit_length() - 1
    if length < 1 or (1 << n) != length:
        raise DimensionError(f"length {length} is not a power of two")
    return check_dimension(n)


def check_coordinate(n: int, i: int) -> int:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= n:
        raise ConfigError(f"coordinate {i!r} outside [1, {n}]")
    return int(i)


def coordinate_mask(coords: Iterable[int], n: int) -> int:
    mask = 0
    for c in coords:
        mask |= 1 << (check_coordinate(n, c) - 1)
    return mask


def mask_coordinates(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(int(mask).bit_length()) if (mask >> i) & 1)


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """``|S|`` for every subset mask ``S < 2**n`` (read-only, cached)."""
    out = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        out = np.concatenate((out, out + 1))
    out.flags.writeable = False
    return out


def points(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


# -- array level ---------------------------------------------------------


def flip_axis(arr: np.ndarray, i: int) -> np.ndarray:
    """View of ``arr`` re-indexed by ``x -> x xor e_i`` (``i`` 1-based)."""
    lead = arr.shape[:-1]
    lo = 1 << (i - 1)
    v = arr.reshape(lead + (-1, 2, lo))
    return v[..., ::-1, :].reshape(arr.shape)


def split_axis(arr: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """The halves ``x_i = 0`` and ``x_i = 1`` of the last axis, shape (..., 2**(n-1))."""
    lead = arr.shape[:-1]
    v = arr.reshape(lead + (-1, 2, 1 << (i - 1)))
    return v[..., 0, :].reshape(lead + (-1,)), v[..., 1, :].reshape(lead + (-1,))


def butterfly(arr: np.ndarray) -> np.ndarray:
    """Unnormalized Hadamard butterfly over the last axis: out[S] = sum_x a[x](-1)^|S&x|."""
    a = np.asarray(arr)
    lead = a.shape[:-1]
    n = dimension_of(a.shape[-1])
    for i in range(n):
        v = a.reshape(lead + (-1, 2, 1 << i))
        x, y = v[..., 0, :], v[..., 1, :]
        a = np.stack((x + y, x - y), axis=-2).reshape(lead + (-1,))
    return a


def wht_array(values: np.ndarray) -> np.ndarray:
    """Fourier coefficients of point values along the last axis.

    Integer (and bool) input goes through the integer butterfly and a single
    power-of-two scaling at the end, so every coefficient is an exact dyadic
    rational.
    """
    v = np.asarray(values)
    n = dimension_of(v.shape[-1])
    if v.dtype.kind in "biu":
        return np.ldexp(butterfly(v.astype(np.int64)).astype(np.float64), -n)
    return butterfly(v.astype(np.float64)) / float(1 << n)


def inverse_wht_array(coeffs: np.ndarray) -> np.ndarray:
    return butterfly(np.asarray(coeffs, dtype=np.float64))


# -- value types ---------------------------------------------------------


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Exact truth table of ``f: {0,1}^n -> {0,1}``; ``table[x] = f(x)``."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        n = check_dimension(self.n)
        t = np.asarray(self.table)
        if t.shape != (1 << n,):
            raise DimensionError(f"table of shape {t.shape} for n={n}")
        if t.dtype != np.uint8:
            if t.dtype.kind == "f" and not np.all((t == 0) | (t == 1)):
                raise ConfigError("truth table entries must be 0 or 1")
            t = t.astype(np.uint8)
        if t.size and t.max() > 1:
            raise ConfigError("truth table entries must be 0 or 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", _frozen(t))

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int]) -> "BooleanFunction":
        """Tabulate ``fn`` on every point mask."""
        n = check_dimension(n)
        return cls(n, np.fromiter((1 if fn(x) else 0 for x in range(1 << n)), dtype=np.uint8))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> "BooleanFunction":
        return cls(n, np.full(1 << check_dimension(n), 1 if value else 0, dtype=np.uint8))

    def __call__(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise ConfigError(f"point {x} outside [0, 2**{self.n})")
        return int(self.table[x])

    def __len__(self) -> int:
        return 1 << self.n

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        s = self.serialize()
        return f"BooleanFunction({s if len(s) <= 40 else s[:37] + '...'})"

    def values(self) -> np.ndarray:
        return self.table.astype(np.float64)

    def serialize(self) -> str:
        return f"tt:{self.n}:{bits_to_hex(self.table)}"

    @classmethod
    def parse(cls, text: str) -> "BooleanFunction":
        parts = text.strip().split(":")
        if len(parts) != 3 or parts[0] != "tt":
            raise ConfigError(f"expected 'tt:<n>:<hex>', got {text!r}")
        try:
            n = int(parts[1])
        except ValueError:
            raise ConfigError(f"bad dimension token {parts[1]!r}") from None
        n = check_dimension(n)
        return cls(n, hex_to_bits(parts[2], 1 << n))


@dataclass(frozen=True, eq=False)
class RealPointFunction:
    """``2**n`` reals indexed by point mask."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        n = check_dimension(self.n)
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (1 << n,):
            raise DimensionError(f"values of shape {v.shape} for n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", _frozen(v))

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def __len__(self) -> int:
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Coefficients ``coeffs[S] = <f, chi_S>`` indexed by subset mask."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        n = check_dimension(self.n)
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.shape != (1 << n,):
            raise DimensionError(f"coeffs of shape {c.shape} for n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", _frozen(c))

    def __getitem__(self, subset: Union[int, Iterable[int]]) -> float:
        mask = subset if isinstance(subset, (int, np.integer)) else coordinate_mask(subset, self.n)
        return float(self.coeffs[mask])

    def to_json(self) -> str:
        return json.dumps([float(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "FourierSpectrum":
        coeffs = np.asarray(json.loads(text), dtype=np.float64)
        return cls(dimension_of(coeffs.size), coeffs)


PointFunction = Union[BooleanFunction, RealPointFunction]


def values_of(f) -> np.ndarray:
    """Point values of a function object (or a raw array) as float64."""
    if isinstance(f, BooleanFunction):
        return f.values()
    if isinstance(f, RealPointFunction):
        return f.values
    if isinstance(f, FourierSpectrum):
        raise TypeError("expected a point-space function, got a spectrum")
    arr = np.asarray(f, dtype=np.float64)
    dimension_of(arr.shape[-1])
    return arr


# -- transforms ----------------------------------------------------------


def wht_forward(f: PointFunction) -> FourierSpectrum:
    if isinstance(f, BooleanFunction):
        return FourierSpectrum(f.n, wht_array(f.table))
    if isinstance(f, RealPointFunction):
        return FourierSpectrum(f.n, wht_array(f.values))
    raise TypeError(f"cannot transform {type(f).__name__}")


def wht_inverse(s: FourierSpectrum) -> RealPointFunction:
    return RealPointFunction(s.n, inverse_wht_array(s.coeffs))


def spectrum(f) -> FourierSpectrum:
    """``wht_forward`` that passes spectra through untouched."""
    return f if isinstance(f, FourierSpectrum) else wht_forward(f)


def to_boolean(g: RealPointFunction) -> BooleanFunction:
    """Exact conversion of a 0/1-valued real function back to a truth table."""
    v = g.values
    if not np.all((v == 0.0) | (v == 1.0)):
        raise ConfigError("function is not exactly 0/1-valued")
    return BooleanFunction(g.n, v.astype(np.uint8))


# -- moments -------------------------------------------------------------


def mean(f) -> float:
    if isinstance(f, BooleanFunction):
        return int(f.table.sum(dtype=np.int64)) / (1 << f.n)
    return float(np.mean(values_of(f)))


def variance(f) -> float:
    if isinstance(f, BooleanFunction):
        ones = int(f.table.sum(dtype=np.int64))
        size = 1 << f.n
        return ones * (size - ones) / (size * size)
    v = values_of(f)
    return float(np.mean(v * v) - np.mean(v) ** 2)


def inner_product(f, g) -> float:
    a, b = values_of(f), values_of(g)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.size} vs {b.size} points")
    return float(np.mean(a * b))


def lp_norm(f, p: float) -> float:
    if not p >= 1:
        raise ConfigError(f"L_p norm needs p >= 1, got {p}")
    v = np.abs(values_of(f))
    if math.isinf(p):
        return float(v.max())
    if p == 2:
        return math.sqrt(float(np.mean(v * v)))
    if p == 1:
        return float(np.mean(v))
    return float(np.mean(v**p)) ** (1.0 / p)


# -- hex packing ---------------------------------------------------------


def bits_to_hex(bits: np.ndarray) -> str:
    """Pack 0/1 entries into lowercase hex, four per digit, little-endian."""
    b = np.asarray(bits, dtype=np.uint8).ravel()
    pad = (-b.size) % 4
    if pad:
        b = np.concatenate((b, np.zeros(pad, dtype=np.uint8)))
    digits = b.reshape(-1, 4) @ np.array([1, 2, 4, 8], dtype=np.uint8)
    return _HEX[digits].tobytes().decode("ascii")


def hex_to_bits(text: str, length: int) -> np.ndarray:
    want = -(-length // 4)
    if len(text) != want:
        raise ConfigError(f"hex token {text!r}: expected {want} digits for {length} bits, got {len(text)}")
    raw = np.frombuffer(text.encode("ascii", errors="replace"), dtype=np.uint8)
    digits = _UNHEX[raw]
    if np.any(digits == 255):
        bad = text[int(np.argmax(digits == 255))]
        raise ConfigError(f"hex token {text!r}: invalid digit {bad!r}")
    bits = ((digits[:, None] >> np.arange(4, dtype=np.uint8)) & 1).astype(np.uint8).ravel()
    if np.any(bits[length:]):
        raise ConfigError(f"hex token {text!r}: nonzero padding bits beyond the last point")
    return bits[:length]
