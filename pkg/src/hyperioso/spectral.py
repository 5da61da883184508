"""Level weights, degree truncation, noise operators and hypercontractivity.

All operators here act diagonally in Fourier space: a (per-coordinate) noise
vector ``rho`` multiplies ``f^(S)`` by ``prod_{i in S} rho_i``.

Influence convention for real-valued ``g``: ``I_i[g] = E[(g(x) - g(x^e_i))^2]
= 4 * sum_{S ni i} g^(S)^2``.  For 0/1-valued ``f`` this is exactly
``Pr[f(x) != f(x^e_i)]``, so ``noisy_influence(f, i, 1) == influence(f, i)``;
it is four times the ``sum_{S ni i} g^(S)^2`` convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .core import (
    BooleanFunction,
    FourierSpectrum,
    RealPointFunction,
    check_coordinate,
    coordinate_mask,
    dimension_of,
    inverse_wht_array,
    popcounts,
    spectrum,
    values_of,
    wht_array,
)
from .errors import ConfigError
from .geometry import gradient_array

# -- level weights -------------------------------------------------------


def level_weight_array(coeffs: np.ndarray) -> np.ndarray:
    """``W_{=d}`` for d = 0..n along the last axis, shape (..., n + 1)."""
    c = np.asarray(coeffs, dtype=np.float64)
    n = dimension_of(c.shape[-1])
    order = np.argsort(popcounts(n), kind="stable")
    starts = np.searchsorted(popcounts(n)[order], np.arange(n + 1))
    sq = (c * c)[..., order]
    return np.add.reduceat(sq, starts, axis=-1)


@dataclass(frozen=True)
class LevelWeights:
    w: tuple

    @property
    def n(self) -> int:
        return len(self.w) - 1

    def at(self, d: int) -> float:
        return self.w[d] if 0 <= d <= self.n else 0.0

    def approx(self, d: int) -> float:
        """``W_{~d}``: levels ``d <= j < 2d``."""
        return float(sum(self.w[j] for j in range(max(d, 0), min(2 * d, self.n + 1))))

    def above(self, d: int) -> float:
        return float(sum(self.w[max(d, 0):]))

    def total(self) -> float:
        return float(sum(self.w))


def level_weights(f) -> LevelWeights:
    return LevelWeights(tuple(float(x) for x in level_weight_array(spectrum(f).coeffs)))


def weight_at(f, d: int) -> float:
    return level_weights(f).at(d)


def weight_approx(f, d: int) -> float:
    return level_weights(f).approx(d)


def weight_above(f, d: int) -> float:
    return level_weights(f).above(d)


def truncate(f, d: int) -> RealPointFunction:
    """``f^{<=d}``: the Fourier expansion restricted to levels at most ``d``."""
    s = spectrum(f)
    if not 0 <= d <= s.n:
        raise ConfigError(f"degree {d} outside [0, {s.n}]")
    return RealPointFunction(s.n, inverse_wht_array(truncate_coeffs(s.coeffs, d)))


def truncate_coeffs(coeffs: np.ndarray, d: int) -> np.ndarray:
    n = dimension_of(np.shape(coeffs)[-1])
    return np.where(popcounts(n) <= d, coeffs, 0.0)


# -- noise ---------------------------------------------------------------


@dataclass(frozen=True)
class NoiseVector:
    """Per-coordinate retention parameters; ``rho[i-1]`` belongs to coordinate ``i``."""

    rho: tuple

    def __post_init__(self):
        r = tuple(float(x) for x in self.rho)
        for x in r:
            if not 0.0 <= x <= 1.0:
                raise ConfigError(f"noise parameter {x} outside [0, 1]")
        object.__setattr__(self, "rho", r)

    @property
    def n(self) -> int:
        return len(self.rho)

    @classmethod
    def uniform(cls, n: int, rho: float) -> "NoiseVector":
        return cls((rho,) * n)

    @classmethod
    def split(cls, n: int, inside: Iterable[int], rho_in: float, rho_out: float) -> "NoiseVector":
        """``rho_in`` on the coordinates of ``inside``, ``rho_out`` elsewhere."""
        mask = coordinate_mask(inside, n)
        return cls(tuple(rho_in if (mask >> i) & 1 else rho_out for i in range(n)))

    def compose(self, other: "NoiseVector") -> "NoiseVector":
        """The noise vector of applying ``other`` then ``self`` (they commute)."""
        if other.n != self.n:
            raise ConfigError("noise vectors of different length")
        return NoiseVector(tuple(a * b for a, b in zip(self.rho, other.rho)))

    def multipliers(self) -> np.ndarray:
        return noise_multipliers(self.n, self)


Rho = Union[float, NoiseVector, Sequence[float]]


def _as_noise(n: int, rho: Rho) -> NoiseVector:
    if isinstance(rho, NoiseVector):
        nv = rho
    elif np.ndim(rho) == 0:
        nv = NoiseVector.uniform(n, float(rho))
    else:
        nv = NoiseVector(tuple(rho))
    if nv.n != n:
        raise ConfigError(f"noise vector of length {nv.n} for n={n}")
    return nv


def noise_multipliers(n: int, rho: Rho) -> np.ndarray:
    """``prod_{i in S} rho_i`` for every subset mask ``S``."""
    nv = _as_noise(n, rho)
    mult = np.ones(1 << n, dtype=np.float64)
    for i, r in enumerate(nv.rho):
        v = mult.reshape(-1, 2, 1 << i)
        v[:, 1, :] *= r
    return mult


def noise_operator(f, rho: Rho) -> RealPointFunction:
    s = spectrum(f)
    return RealPointFunction(s.n, inverse_wht_array(s.coeffs * noise_multipliers(s.n, rho)))


def _check_eps(eps: float) -> float:
    if not 0.0 <= eps <= 1.0:
        raise ConfigError(f"noise rate {eps} outside [0, 1]")
    return float(eps)


def noise_stability(f, eps: float) -> float:
    """``Stab_{1-eps}(f) = <f, T_{1-eps} f>``."""
    s = spectrum(f)
    rho = 1.0 - _check_eps(eps)
    return float(np.sum(s.coeffs**2 * rho ** popcounts(s.n).astype(np.float64)))


def mismatch_from_levels(w: np.ndarray, eps) -> np.ndarray:
    """``2 sum_k (1 - (1-eps)^k) W_{=k}`` from level weights (..., n + 1)."""
    w = np.asarray(w, dtype=np.float64)
    k = np.arange(w.shape[-1], dtype=np.float64)
    return 2.0 * (w * (1.0 - (1.0 - np.asarray(eps, dtype=np.float64)[..., None]) ** k)).sum(-1)


def noise_mismatch(f, eps: float) -> float:
    """``Pr[f(x) != f(y)]`` for (1-eps)-correlated ``(x, y)`` (0/1-valued ``f``)."""
    w = level_weight_array(spectrum(f).coeffs)
    return float(mismatch_from_levels(w, _check_eps(eps)))


def sample_mismatch(f: BooleanFunction, eps: float, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo ``Pr[f(x) != f(y)]`` with its standard error."""
    eps = _check_eps(eps)
    rng = np.random.default_rng(seed)
    n = f.n
    x = rng.integers(0, 2, size=(samples, n), dtype=np.int64)
    resample = rng.random((samples, n)) < eps
    y = np.where(resample, rng.integers(0, 2, size=(samples, n), dtype=np.int64), x)
    weights = 1 << np.arange(n, dtype=np.int64)
    hits = f.table[x @ weights] != f.table[y @ weights]
    est = float(hits.mean())
    return est, math.sqrt(max(est * (1 - est), 1e-300) / samples)


def noisy_influence_vector(f, rho: Rho) -> np.ndarray:
    """``I_i[T_rho f] = 4 sum_{S ni i} (prod_{j in S} rho_j)^2 f^(S)^2`` for i = 1..n."""
    s = spectrum(f)
    return influence_from_coeffs(s.coeffs * noise_multipliers(s.n, rho))


def influence_from_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """Spectral influences ``4 sum_{S ni i} c(S)^2``, shape (..., n)."""
    c = np.asarray(coeffs, dtype=np.float64)
    n = dimension_of(c.shape[-1])
    sq = c * c
    out = np.empty(c.shape[:-1] + (n,), dtype=np.float64)
    for i in range(n):
        v = sq.reshape(c.shape[:-1] + (-1, 2, 1 << i))
        out[..., i] = 4.0 * v[..., 1, :].sum((-2, -1))
    return out


def noisy_influence(f, i: int, rho: Rho) -> float:
    s = spectrum(f)
    check_coordinate(s.n, i)
    return float(noisy_influence_vector(s, rho)[i - 1])


def real_influence(g, i: int) -> float:
    """``E[(g(x) - g(x^e_i))^2]`` evaluated in point space."""
    v = values_of(g)
    n = dimension_of(v.size)
    check_coordinate(n, i)
    d = gradient_array(v)[i - 1]
    return float(np.mean(d * d))


def noisy_influence_sum_identity(f, rho: float) -> tuple[float, float]:
    """``(sum_i I_i[T_rho f], 4 sum_S |S| rho^{2|S|} f^(S)^2)``."""
    s = spectrum(f)
    k = popcounts(s.n).astype(np.float64)
    lhs = float(noisy_influence_vector(s, rho).sum())
    rhs = float(4.0 * np.sum(k * rho ** (2 * k) * s.coeffs**2))
    return lhs, rhs


def noisy_influence_sum_bound(f, rho: float) -> float:
    """``4 max_k (k rho^{2k}) E[f]``: a finite bound on the total noisy influence of 0/1 ``f``."""
    s = spectrum(f)
    k = np.arange(1, s.n + 1, dtype=np.float64)
    peak = float(np.max(k * rho ** (2 * k))) if s.n else 0.0
    return 4.0 * peak * float(s.coeffs[0])


# -- hypercontractivity --------------------------------------------------


def lq_norm_array(values: np.ndarray, q: float) -> np.ndarray:
    v = np.abs(np.asarray(values, dtype=np.float64))
    if q == 2:
        return np.sqrt((v * v).mean(-1))
    if q == 4:
        return np.sqrt(np.sqrt((v**4).mean(-1)))
    # fractional q via exp/log, zeros contribute nothing
    with np.errstate(divide="ignore"):
        powered = np.where(v > 0, np.exp(q * np.log(np.where(v > 0, v, 1.0))), 0.0)
    return powered.mean(-1) ** (1.0 / q)


def hypercontractivity_gap(f, d: int) -> tuple[float, float]:
    """``(||f^{<=d}||_4, sqrt(3)^d ||f^{<=d}||_2)``; the first never exceeds the second."""
    g = truncate(f, d).values
    return float(lq_norm_array(g, 4)), float(math.sqrt(3.0) ** d * lq_norm_array(g, 2))


def noise_hypercontractivity(g, rho: float, q: float) -> tuple[float, float]:
    """``(||T_rho g||_q, ||g||_2)``; the first is at most the second when ``rho <= 1/sqrt(q-1)``."""
    v = values_of(g)
    n = dimension_of(v.size)
    smoothed = inverse_wht_array(wht_array(v) * noise_multipliers(n, rho))
    return float(lq_norm_array(smoothed, q)), float(lq_norm_array(v, 2))


# -- proof-internal quantities for the junta argument --------------------


def band_count(top: int) -> int:
    """Number of half-open bands [2^{k-1}, 2^k) needed to cover 1..top."""
    return top.bit_length() if top > 0 else 0


@dataclass(frozen=True)
class ProofWeights:
    """Dyadic bands of Fourier mass by ``|S cap Jbar|``.

    ``low[k-1]`` is ``W_{k,d}`` (``|S| <= d``) and ``high[l-1]`` is
    ``eps_{l,d}`` (``|S| > d``), band ``k`` holding ``2^{k-1} <= |S cap Jbar| < 2^k``.
    """

    low: tuple
    high: tuple

    def total(self) -> float:
        return float(sum(self.low) + sum(self.high))


def band_index(n: int, outside_mask: int) -> np.ndarray:
    """Band number ``floor(log2 |S cap Jbar|) + 1`` per subset (0 when disjoint)."""
    outside = popcounts(n)[np.arange(1 << n) & outside_mask]
    return np.where(outside > 0, np.floor(np.log2(np.maximum(outside, 1))).astype(np.int64) + 1, 0)


def proof_weights(f, J: Iterable[int], d: int) -> ProofWeights:
    s = spectrum(f)
    n = s.n
    if d < 1:
        raise ConfigError(f"degree parameter d={d} must be >= 1")
    outside_mask = ((1 << n) - 1) & ~coordinate_mask(J, n)
    bands = band_index(n, outside_mask)
    sq = s.coeffs**2
    size = popcounts(n)
    k_max = band_count(min(d, n))
    l_max = band_count(n)
    low = tuple(float(sq[(size <= d) & (bands == k)].sum()) for k in range(1, k_max + 1))
    high = tuple(float(sq[(size > d) & (bands == l)].sum()) for l in range(1, l_max + 1))
    return ProofWeights(low, high)


def mass_outside(f, J: Iterable[int]) -> float:
    """``sum_{S not subset of J} f^(S)^2``."""
    s = spectrum(f)
    inside = coordinate_mask(J, s.n)
    sel = (np.arange(1 << s.n) & ~inside) != 0
    return float(np.sum(s.coeffs[sel] ** 2))


def s_k(n: int, J: Iterable[int], k: int, d: float) -> NoiseVector:
    """``T^{J}_{1-1/d} T^{Jbar}_{1-1/2^k}``."""
    return NoiseVector.split(n, J, 1.0 - 1.0 / d, 1.0 - 2.0**-k)


def s_k_prime(n: int, J: Iterable[int], k: int, d: float) -> NoiseVector:
    """``T^{J}_{1-1/2d} T^{Jbar}_{1-1/2^k+1/2d}``; needs ``2^k <= 2d``."""
    if 2**k > 2 * d:
        raise ConfigError(f"S_k' undefined for k={k}, d={d}: need 2^k <= 2d")
    return NoiseVector.split(n, J, 1.0 - 0.5 / d, 1.0 - 2.0**-k + 0.5 / d)


def noisy_derivative_norms(f, rho: Rho) -> np.ndarray:
    """``||S partial_j f||_2^2`` for j = 1..n, evaluated in point space."""
    v = values_of(f)
    n = dimension_of(v.size)
    grads = gradient_array(v)
    smoothed = inverse_wht_array(wht_array(grads) * noise_multipliers(n, rho))
    return (smoothed * smoothed).mean(-1)


def lowdeg_influence_sum(f, J: Iterable[int], k: int, d: float) -> float:
    """``2^{-k} sum_{j in Jbar} ||S_k' partial_j f||_2^2`` in point space."""
    v = values_of(f)
    n = dimension_of(v.size)
    J = tuple(J)
    norms = noisy_derivative_norms(v, s_k_prime(n, J, k, d))
    outside = [j for j in range(1, n + 1) if j not in set(J)]
    return float(sum(norms[j - 1] for j in outside)) * 2.0**-k


def _split_sizes(n: int, J: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    inside = coordinate_mask(J, n)
    masks = np.arange(1 << n)
    return popcounts(n)[masks & ~inside & ((1 << n) - 1)], popcounts(n)[masks & inside]


def _prime_rates(k: int, d: float) -> tuple[float, float]:
    nv = s_k_prime(1, (), k, d)
    return nv.rho[0], 1.0 - 0.5 / d


def lowdeg_influence_spectral(f, J: Iterable[int], k: int, d: float) -> float:
    """Closed spectral form of :func:`lowdeg_influence_sum`.

    ``partial_j f = 2 sum_{S ni j} f^(S) chi_{S - j}`` so the noise on
    ``S - {j}`` enters squared and without coordinate ``j``:
    ``2^{-k} sum_S 4 m a^{2(m-1)} b^{2|S cap J|} f^(S)^2`` with
    ``m = |S cap Jbar|``, ``a = 1 - 2^{-k} + 1/2d`` and ``b = 1 - 1/2d``.
    """
    s = spectrum(f)
    m, inside = _split_sizes(s.n, J)
    a, b = _prime_rates(k, d)
    m = m.astype(np.float64)
    terms = 4.0 * m * a ** (2.0 * np.maximum(m - 1.0, 0.0)) * b ** (2.0 * inside) * s.coeffs**2
    return float(terms.sum()) * 2.0**-k


def lowdeg_stated_form(f, J: Iterable[int], k: int, d: float) -> float:
    """``sum_S (m/2^k) a^m b^{|S cap J|} f^(S)^2`` with ``m``, ``a``, ``b`` as above."""
    s = spectrum(f)
    m, inside = _split_sizes(s.n, J)
    a = 1.0 - 2.0**-k + 0.5 / d
    b = 1.0 - 0.5 / d
    m = m.astype(np.float64)
    return float(np.sum(m * 2.0**-k * a**m * b**inside * s.coeffs**2))


def lowdeg_band_bound(f, J: Iterable[int], k: int, d: int) -> float:
    """``sum_l 2^{-|l-k|} (W_{l,d} + eps_{l,d})``, the band-decay majorant."""
    pw = proof_weights(f, J, d)
    total = 0.0
    for l in range(1, max(len(pw.low), len(pw.high)) + 1):
        w = (pw.low[l - 1] if l <= len(pw.low) else 0.0) + (pw.high[l - 1] if l <= len(pw.high) else 0.0)
        total += 2.0 ** -abs(l - k) * w
    return total
