"""Junta extraction from a bounded sensitivity moment, plus exact junta oracles.

The extractor follows the constructive argument: with ``A = E[s_f^p]`` it sets
``d = C1 (A/eps)^{1/p}`` (rounded up, clamped to ``[1, n]``) and
``delta = 2^{-C2 d / (2p - 1)}``, keeps every coordinate whose noisy influence
``I_i[T_{1-1/2d} f]`` is at least ``delta``, and rounds the projection of
``f`` onto those coordinates at 1/2.

The constants in the underlying theorem are existential; ``C1 = 1`` and
``C2 = 10`` are calibrated defaults (see ``scripts/calibrate.py``).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .core import (
    BooleanFunction,
    coordinate_mask,
    inverse_wht_array,
    points,
    popcounts,
    spectrum,
    variance,
)
from .errors import BudgetError, ConfigError
from .geometry import influence_vector, sensitivity_moment
from .spectral import (
    band_index,
    level_weights,
    mass_outside,
    noise_multipliers,
    noisy_derivative_norms,
    noisy_influence_vector,
    proof_weights,
    s_k,
    s_k_prime,
)

DEFAULT_C1 = 1.0
DEFAULT_C2 = 10.0
NEAREST_JUNTA_BUDGET = 10**9


@dataclass(frozen=True)
class JuntaParams:
    eps: float
    p: float
    C1: float = DEFAULT_C1
    C2: float = DEFAULT_C2
    A: Optional[float] = None  # overrides E[s^p] when set

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ConfigError(f"eps={self.eps} outside (0, 1)")
        if not 0.5 < self.p <= 1.0:
            raise ConfigError(f"p={self.p} outside (1/2, 1]")
        if not (self.C1 > 0 and self.C2 > 0):
            raise ConfigError("C1 and C2 must be positive")
        if self.A is not None and self.A < 0:
            raise ConfigError("A must be nonnegative")


@dataclass(frozen=True)
class JuntaResult:
    coords: tuple
    approximator: BooleanFunction
    mass_outside: float
    distance: float
    d_used: int
    delta_used: float
    log2_delta: float
    A: float
    d_clamped: bool
    log2_size_bound: float

    def to_dict(self) -> dict:
        return {
            "coords": list(self.coords),
            "distance": self.distance,
            "mass_outside": self.mass_outside,
            "d_used": self.d_used,
            "delta_used": self.delta_used,
            "log2_delta": self.log2_delta,
            "A": self.A,
            "d_clamped": self.d_clamped,
            "junta_size": len(self.coords),
            "log2_size_bound": self.log2_size_bound,
            "approximator": self.approximator.serialize(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def junta_parameters(n: int, A: float, params: JuntaParams) -> tuple[int, float, bool]:
    """``(d, log2 delta, clamped)`` for a function on ``n`` coordinates."""
    raw = params.C1 * (A / params.eps) ** (1.0 / params.p) if A > 0 else 0.0
    d = max(1, math.ceil(raw - 1e-12))
    clamped = d > n
    d = max(1, min(d, n))
    return d, -params.C2 * d / (2.0 * params.p - 1.0), clamped


def candidate_coordinates(f, d: int, log2_delta: float) -> tuple:
    """Coordinates with ``I_i[T_{1-1/2d} f] >= delta`` (compared in log space)."""
    infl = noisy_influence_vector(f, 1.0 - 0.5 / d)
    with np.errstate(divide="ignore"):
        logs = np.log2(infl)
    return tuple(int(i) + 1 for i in np.nonzero(logs >= log2_delta)[0])


def extract_junta(f: BooleanFunction, params: JuntaParams) -> JuntaResult:
    A = params.A if params.A is not None else sensitivity_moment(f, params.p)
    s = spectrum(f)
    d, log2_delta, clamped = junta_parameters(f.n, A, params)
    coords = candidate_coordinates(s, d, log2_delta) if f.n else ()
    h = round_to_junta(f, coords)
    return JuntaResult(
        coords=coords,
        approximator=h,
        mass_outside=mass_outside(s, coords),
        distance=disagreement(f, h),
        d_used=d,
        delta_used=2.0**log2_delta,
        log2_delta=log2_delta,
        A=float(A),
        d_clamped=clamped,
        log2_size_bound=math.log2(d) - log2_delta,
    )


def projection(f, J: Iterable[int]) -> np.ndarray:
    """Point values of ``sum_{S subset of J} f^(S) chi_S`` (the fibre averages of ``f``)."""
    s = spectrum(f)
    inside = coordinate_mask(J, s.n)
    keep = (np.arange(1 << s.n) & ~inside) == 0
    return inverse_wht_array(np.where(keep, s.coeffs, 0.0))


def round_to_junta(f: BooleanFunction, J: Iterable[int]) -> BooleanFunction:
    """Threshold the projection onto ``J`` at 1/2 (ties go to 1)."""
    return BooleanFunction(f.n, (projection(f, J) >= 0.5).astype(np.uint8))


def disagreement(f: BooleanFunction, g: BooleanFunction) -> float:
    return int(np.count_nonzero(f.table != g.table)) / (1 << f.n)


def junta_distance(f: BooleanFunction, J: Iterable[int]) -> float:
    """Distance from ``f`` to the nearest ``J``-junta (fibre minority mass)."""
    key = points(f.n) & coordinate_mask(J, f.n)
    size = 1 << f.n
    ones = np.bincount(key, weights=f.table, minlength=size)
    total = np.bincount(key, minlength=size)
    return float(np.minimum(ones, total - ones).sum()) / size


def nearest_junta(f: BooleanFunction, j: int, budget: int = NEAREST_JUNTA_BUDGET) -> tuple[tuple, float]:
    """Exhaustive best ``J`` with ``|J| <= j``; ties go to the lexicographically smallest ``J``."""
    n = f.n
    if not 0 <= j <= n:
        raise ConfigError(f"junta size {j} outside [0, {n}]")
    candidates = sum(math.comb(n, s) for s in range(j + 1))
    if candidates * (1 << n) > budget:
        raise BudgetError(f"{candidates} subsets x 2^{n} points exceeds budget {budget}")
    best_J, best = (), junta_distance(f, ())
    for size in range(1, j + 1):
        for J in itertools.combinations(range(1, n + 1), size):
            dist = junta_distance(f, J)
            if dist < best or (dist == best and J < best_J):
                best_J, best = J, dist
    return best_J, best


def relevant_coordinates(f: BooleanFunction) -> tuple:
    return tuple(i + 1 for i, v in enumerate(influence_vector(f)) if v > 0)


@dataclass(frozen=True)
class MomentBound:
    """``A = E[s^p]`` next to ``d^p W_{>=d}`` for d = 1, 2, 4, ... <= n."""

    p: float
    A: float
    rows: tuple = field(default=())

    def max_ratio(self) -> float:
        """Largest ``d^p W_{>=d} / A`` (0 when nothing is above level 0)."""
        vals = [lhs / self.A for _, lhs in self.rows if self.A > 0]
        return max(vals, default=0.0)


def moment_bound_check(f: BooleanFunction, p: float) -> MomentBound:
    if not 0.5 <= p <= 1.0:
        raise ConfigError(f"p={p} outside [1/2, 1]")
    A = sensitivity_moment(f, p)
    lw = level_weights(f)
    rows = []
    d = 1
    while d <= f.n:
        rows.append((d, d**p * lw.above(d)))
        d *= 2
    return MomentBound(p, A, tuple(rows))


def kkl_variant_report(f: BooleanFunction, p: float, c: float = 1.0) -> dict:
    """Largest influence against ``2^{-c (A/var)^{1/p}}`` for the shipped ``c``."""
    var = variance(f)
    A = sensitivity_moment(f, p)
    top = float(np.max(influence_vector(f))) if f.n else 0.0
    if var == 0:
        return {"max_influence": top, "bound": None, "ratio": None, "A": A, "var": var, "c": c}
    bound = 2.0 ** (-c * (A / var) ** (1.0 / p))
    return {"max_influence": top, "bound": bound, "ratio": top / bound, "A": A, "var": var, "c": c}


# -- quantities inside the proof -----------------------------------------


def _outside(n: int, J: Iterable[int]) -> list:
    inside = set(J)
    return [j for j in range(1, n + 1) if j not in inside]


def tilde_weight(f, J: Iterable[int], k: int, d: float) -> float:
    """``2^{-k} sum_{j in Jbar} ||S_k partial_j f||_2^2``."""
    s = spectrum(f)
    J = tuple(J)
    norms = noisy_derivative_norms(inverse_wht_array(s.coeffs), s_k(s.n, J, k, d))
    return 2.0**-k * float(sum(norms[j - 1] for j in _outside(s.n, J)))


def band_weight(coeffs: np.ndarray, n: int, J: Iterable[int], k: int, d: int) -> float:
    """``W_{k,d}`` of an arbitrary coefficient vector."""
    outside_mask = ((1 << n) - 1) & ~coordinate_mask(J, n)
    sel = (popcounts(n) <= d) & (band_index(n, outside_mask) == k)
    return float(np.sum(np.asarray(coeffs)[sel] ** 2))


def smoothing_chain(f, J: Iterable[int], k: int, d: int) -> tuple[float, float, float]:
    """``(W_{k,d}[f], W_{k,d}[S_k f], tilde W_{k,d}[f])``.

    The last two always satisfy ``W_{k,d}[S_k f] <= tilde W_{k,d}[f]``; the
    first exceeds the second by at most a constant factor.
    """
    s = spectrum(f)
    J = tuple(J)
    smoothed = s.coeffs * noise_multipliers(s.n, s_k(s.n, J, k, d))
    return (
        band_weight(s.coeffs, s.n, J, k, d),
        band_weight(smoothed, s.n, J, k, d),
        tilde_weight(s, J, k, d),
    )


def main_claim_terms(f: BooleanFunction, J: Iterable[int], k: int, d: int, p: float, tau: float) -> tuple[float, float, float]:
    """``(2^k tilde W_{k,d}, d^{-p} tau^{2p-1} E[s^p], tau^{-1/100d} sum_j ||S_k' partial_j f||^{2+1/100d})``."""
    if not 0.0 < tau < 1.0:
        raise ConfigError(f"tau={tau} outside (0, 1)")
    J = tuple(J)
    lhs = 2.0**k * tilde_weight(f, J, k, d)
    term1 = d**-p * tau ** (2 * p - 1) * sensitivity_moment(f, p)
    sq = noisy_derivative_norms(f.values(), s_k_prime(f.n, J, k, d))
    power = 1.0 + 1.0 / (200.0 * d)
    term2 = tau ** (-1.0 / (100.0 * d)) * float(sum(sq[j - 1] ** power for j in _outside(f.n, J)))
    return lhs, term1, term2


def outside_junta_weight(f: BooleanFunction, params: JuntaParams) -> tuple[float, JuntaResult]:
    """``sum_k W_{k,d}[f]`` for the extracted coordinates, with the extraction result."""
    res = extract_junta(f, params)
    pw = proof_weights(f, res.coords, res.d_used)
    return float(sum(pw.low)), res
