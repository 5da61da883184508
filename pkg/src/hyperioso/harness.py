"""Registry of numeric checks, corpora, and the deterministic check runner.

Every check compares two per-function quantities so that the statement reads
``lhs >= c * rhs`` (or ``lhs == rhs`` for identities):

* ``hard`` checks carry an explicit constant and must hold within tolerance;
* ``ratio`` checks have an existential constant; only ``lhs / rhs`` is
  recorded and its minimum over a corpus is the best empirical constant.

Upper-bound statements of the form ``X <= C * Y`` are therefore registered
with ``lhs = Y`` and ``rhs = X``.  Logarithms are natural throughout.

Functions are processed in fixed-size chunks that depend only on ``n``;
worker threads change how chunks are scheduled, never what is computed, so
reports are identical for any thread count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .core import BooleanFunction, bits_to_hex, inverse_wht_array, popcounts, wht_array
from .errors import BudgetError, ConfigError, DegenerateCorpusError
from .families import family_corpus
from .geometry import (
    expand_edge_bits,
    gradient_array,
    gradient_norm_mean,
    influence_array,
    moment_from_histogram,
    sensitivity_counts,
    sensitivity_histogram,
    talagrand_colored_array,
)
from .junta import DEFAULT_C1, DEFAULT_C2
from .restrictions import expected_level1_array, expected_level1_by_alive_sets
from .spectral import (
    band_index,
    influence_from_coeffs,
    level_weight_array,
    lq_norm_array,
    mismatch_from_levels,
    noise_multipliers,
    truncate_coeffs,
)

SCHEMA_VERSION = 1
HARNESS_SEED = 20240917
EXHAUSTIVE_MAX_N = 4
FLOOR_RTOL = 1e-9

# -- corpora -------------------------------------------------------------


@dataclass
class CorpusGroup:
    n: int
    tables: np.ndarray
    names: Optional[list] = None

    @cached_property
    def labels(self) -> list:
        return [f"tt:{self.n}:{bits_to_hex(t)}" for t in self.tables]


@dataclass
class Corpus:
    descriptor: str
    groups: list

    def __len__(self):
        return sum(len(g.tables) for g in self.groups)

    def functions(self) -> Iterable[BooleanFunction]:
        for g in self.groups:
            for t in g.tables:
                yield BooleanFunction(g.n, t)


def exhaustive_tables(n: int) -> np.ndarray:
    """All ``2^(2^n)`` truth tables; row ``k`` has ``f(x) = bit x of k``."""
    if not 0 <= n <= EXHAUSTIVE_MAX_N:
        raise BudgetError(f"exhaustive corpus needs n <= {EXHAUSTIVE_MAX_N}, got {n}")
    k = np.arange(1 << (1 << n), dtype=np.int64)
    return ((k[:, None] >> np.arange(1 << n)) & 1).astype(np.uint8)


def random_tables(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(count, 1 << n), dtype=np.uint8)


def parse_corpus(spec: str) -> Corpus:
    """``exhaustive:n``, ``random:n:count:seed`` or ``families:n_max``."""
    parts = spec.strip().split(":")
    try:
        nums = [int(p) for p in parts[1:]]
    except ValueError:
        raise ConfigError(f"bad corpus spec {spec!r}") from None
    kind = parts[0]
    if kind == "exhaustive" and len(nums) == 1:
        return Corpus(spec, [CorpusGroup(nums[0], exhaustive_tables(nums[0]))])
    if kind == "random" and len(nums) == 3:
        n, count, seed = nums
        if not 1 <= n <= 16 or count < 1:
            raise ConfigError(f"random corpus needs 1 <= n <= 16 and count >= 1: {spec!r}")
        return Corpus(spec, [CorpusGroup(n, random_tables(n, count, seed))])
    if kind == "families" and len(nums) == 1:
        if not 1 <= nums[0] <= 16:
            raise ConfigError(f"families corpus needs 1 <= n_max <= 16: {spec!r}")
        by_n: dict = {}
        for name, f in family_corpus(nums[0]):
            by_n.setdefault(f.n, []).append((name, f.table))
        groups = [CorpusGroup(n, np.stack([t for _, t in items]), [nm for nm, _ in items])
                  for n, items in sorted(by_n.items())]
        return Corpus(spec, groups)
    raise ConfigError(f"bad corpus spec {spec!r}")


def corpus_from_functions(descriptor: str, functions: Sequence[BooleanFunction]) -> Corpus:
    by_n: dict = {}
    for f in functions:
        by_n.setdefault(f.n, []).append(f.table)
    return Corpus(descriptor, [CorpusGroup(n, np.stack(ts)) for n, ts in sorted(by_n.items())])


# -- per-chunk cached quantities -----------------------------------------


class Batch:
    """Lazily computed spectra, sensitivities and influences for a chunk of tables."""

    def __init__(self, tables: np.ndarray, n: int):
        self.tables = tables
        self.n = n

    @cached_property
    def coeffs(self) -> np.ndarray:
        return wht_array(self.tables)

    @cached_property
    def levels(self) -> np.ndarray:
        return level_weight_array(self.coeffs)

    @cached_property
    def counts(self) -> np.ndarray:
        return sensitivity_counts(self.tables)

    @cached_property
    def hist(self) -> np.ndarray:
        return sensitivity_histogram(self.counts, self.n)

    def moment(self, p: float) -> np.ndarray:
        return moment_from_histogram(self.hist, p)

    @cached_property
    def influences(self) -> np.ndarray:
        return influence_array(self.tables)

    @cached_property
    def mean(self) -> np.ndarray:
        return self.tables.sum(-1, dtype=np.int64) / float(1 << self.n)

    @cached_property
    def var(self) -> np.ndarray:
        return self.mean * (1.0 - self.mean)

    @cached_property
    def M(self) -> np.ndarray:
        return (self.influences**2).sum(-1)

    @cached_property
    def gradients(self) -> np.ndarray:
        return gradient_array(self.tables.astype(np.float64))

    def weight_above(self, d: int) -> np.ndarray:
        return self.levels[..., d:].sum(-1)

    def weight_approx(self, d: int) -> np.ndarray:
        return self.levels[..., d:min(2 * d, self.n + 1)].sum(-1)


# -- check registry ------------------------------------------------------


@dataclass(frozen=True)
class Check:
    id: str
    kind: str  # "hard" | "ratio"
    statement: str
    evaluate: Callable
    relation: str = ">="
    atol: float = 1e-12
    rtol: float = 0.0
    notes: str = ""


REGISTRY: dict = {}


def register(check: Check) -> Check:
    if check.id in REGISTRY:
        raise ConfigError(f"duplicate check id {check.id}")
    REGISTRY[check.id] = check
    return check


def _shared_rng(n: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(HARNESS_SEED, spawn_key=(n, tag)))


def colorings_for(n: int) -> int:
    return 100 if n <= 6 else 10


def shared_colorings(n: int) -> np.ndarray:
    """The fixed random edge colourings every function of dimension ``n`` is tested against."""
    rng = _shared_rng(n, 1)
    return (rng.random((colorings_for(n), n, (1 << n) >> 1)) < 0.5).astype(np.uint8)


def shared_noise_vectors(n: int, count: int = 3) -> np.ndarray:
    return _shared_rng(n, 2).random((count, n))


def first_half(n: int) -> tuple:
    return tuple(range(1, n // 2 + 1))


def _lvl1(b: Batch):
    return b.moment(0.5), 2.0 * np.sqrt(b.levels[:, 1] if b.n >= 1 else 0 * b.mean), None


LP_EXPONENTS = (0.5, 0.75, 1.0)


def _lemma_lp(b: Batch):
    w1 = b.levels[:, 1]
    lhs = np.stack([b.moment(p) for p in LP_EXPONENTS], axis=1)
    rhs = np.stack([w1**p for p in LP_EXPONENTS], axis=1)
    return lhs, rhs, None


def _robust(b: Batch):
    cols = shared_colorings(b.n)
    lhs = np.stack([talagrand_colored_array(b.tables, c) for c in cols], axis=1)
    rhs = np.repeat((0.5 * np.sqrt(b.levels[:, 1]))[:, None], len(cols), axis=1)
    return lhs, rhs, None


HYPER_DEGREES = (0, 1, 2, 3, 4)


def _hyper(b: Batch):
    lhs, rhs = [], []
    for d in HYPER_DEGREES:
        if d > b.n:
            break
        g = inverse_wht_array(truncate_coeffs(b.coeffs, d))
        lhs.append(math.sqrt(3.0) ** d * lq_norm_array(g, 2))
        rhs.append(lq_norm_array(g, 4))
    return np.stack(lhs, axis=1), np.stack(rhs, axis=1), None


RESTRICTION_DS = (2, 3)


def _fact_restriction(b: Batch):
    lhs = np.stack([expected_level1_array(b.coeffs, d) for d in RESTRICTION_DS], axis=1)
    rhs = np.stack([expected_level1_by_alive_sets(b.coeffs, d) for d in RESTRICTION_DS], axis=1)
    return lhs, rhs, None


def _noise_decreases(b: Batch):
    vecs = shared_noise_vectors(b.n)
    lhs, rhs = [], []
    base = {q: gradient_norm_mean(b.tables.astype(np.float64), q) for q in (1, 2)}
    for rho in vecs:
        smoothed = inverse_wht_array(b.coeffs * noise_multipliers(b.n, tuple(rho)))
        for q in (1, 2):
            lhs.append(base[q])
            rhs.append(gradient_norm_mean(smoothed, q))
    return np.stack(lhs, axis=1), np.stack(rhs, axis=1), None


def _poincare(b: Batch):
    return 0.5 * b.moment(1.0), b.var, None


LOWDEG_GRID = ((1, 2), (2, 2), (1, 4), (2, 4))


def _lowdeg_grid(n: int):
    return [(J, k, d) for J in ((), first_half(n)) for k, d in LOWDEG_GRID]


def _lowdeg_point(b: Batch, J, k, d) -> np.ndarray:
    """``2^{-k} sum_{j in Jbar} ||S_k' partial_j f||^2`` evaluated in point space."""
    n = b.n
    a, c = 1.0 - 2.0**-k + 0.5 / d, 1.0 - 0.5 / d
    rho = tuple(c if j + 1 in J else a for j in range(n))
    smoothed = inverse_wht_array(wht_array(b.gradients) * noise_multipliers(n, rho))
    norms = (smoothed * smoothed).mean(-1)  # (B, n)
    outside = np.array([j + 1 not in J for j in range(n)])
    return norms[:, outside].sum(-1) * 2.0**-k


def _lowdeg_spectral(b: Batch, J, k, d) -> np.ndarray:
    n = b.n
    inside_mask = sum(1 << (j - 1) for j in J)
    masks = np.arange(1 << n)
    m = popcounts(n)[masks & ~inside_mask & ((1 << n) - 1)].astype(np.float64)
    inside = popcounts(n)[masks & inside_mask].astype(np.float64)
    a, c = 1.0 - 2.0**-k + 0.5 / d, 1.0 - 0.5 / d
    w = 4.0 * m * a ** (2.0 * np.maximum(m - 1.0, 0.0)) * c ** (2.0 * inside)
    return (b.coeffs**2 * w).sum(-1) * 2.0**-k


def _claim_lowdeg(b: Batch):
    grid = _lowdeg_grid(b.n)
    lhs = np.stack([_lowdeg_point(b, *g) for g in grid], axis=1)
    rhs = np.stack([_lowdeg_spectral(b, *g) for g in grid], axis=1)
    return lhs, rhs, None


def _tal_iso(b: Batch):
    var = b.var
    safe = np.where(var > 0, var, 1.0)
    rhs = np.where(var > 0, var * np.sqrt(np.log(1.0 / safe)), 0.0)
    return b.moment(0.5), rhs, var == 0


def _eg(b: Batch):
    M = b.M
    safe = np.where(M > 0, M, 1.0)
    rhs = np.where(M > 0, b.var * np.sqrt(np.log1p(1.0 / safe)), 0.0)
    return b.moment(0.5), rhs, (M == 0) | (b.var == 0)


def _lvld_exact(b: Batch):
    lhs = np.repeat(b.moment(0.5)[:, None], b.n, axis=1)
    rhs = np.stack([math.sqrt(d) * b.weight_approx(d) for d in range(1, b.n + 1)], axis=1)
    return lhs, rhs, None


def _lvld_above(b: Batch):
    lhs = np.repeat(b.moment(0.5)[:, None], b.n, axis=1)
    rhs = np.stack([math.sqrt(d) * b.weight_above(d) for d in range(1, b.n + 1)], axis=1)
    return lhs, rhs, None


NOISE_EPS = (0.5, 0.25, 0.125, 0.0625)
NOISE_DELTAS = (0.0, 0.25, 0.5)


def _noise_stable(b: Batch):
    lhs, rhs = [], []
    for delta in NOISE_DELTAS:
        A = b.moment(0.5 + delta)
        for eps in NOISE_EPS:
            lhs.append(A * eps ** (0.5 + delta))
            rhs.append(mismatch_from_levels(b.levels, np.full(len(A), eps)))
    degenerate = np.repeat((b.var == 0)[:, None], len(lhs), axis=1)
    return np.stack(lhs, axis=1), np.stack(rhs, axis=1), degenerate


STAB_C = 0.5


def _cor_stab(b: Batch):
    if b.n < 2:
        z = np.zeros(len(b.tables))
        return z, z, np.ones(len(b.tables), dtype=bool)
    threshold = STAB_C * b.var * math.sqrt(math.log(b.n))
    lhs = (np.sqrt(b.counts) >= threshold[:, None]).mean(-1)
    return lhs, b.var, b.var == 0


MAIN_P = 0.75
MAIN_TAUS = (0.25, 1.0 / 16)
MAIN_GRID = ((1, 2), (1, 4), (2, 4))


def _claim_main(b: Batch):
    n = b.n
    A = b.moment(MAIN_P)
    lhs, rhs = [], []
    for J in ((), first_half(n)):
        outside = np.array([j + 1 not in J for j in range(n)])
        for k, d in MAIN_GRID:
            rho_k = tuple((1.0 - 1.0 / d) if j + 1 in J else (1.0 - 2.0**-k) for j in range(n))
            rho_p = tuple((1.0 - 0.5 / d) if j + 1 in J else (1.0 - 2.0**-k + 0.5 / d) for j in range(n))
            grad_hat = wht_array(b.gradients)
            sk = inverse_wht_array(grad_hat * noise_multipliers(n, rho_k))
            skp = inverse_wht_array(grad_hat * noise_multipliers(n, rho_p))
            sk_norms = (sk * sk).mean(-1)[:, outside].sum(-1)
            skp_sq = (skp * skp).mean(-1)[:, outside]
            power = 1.0 + 1.0 / (200.0 * d)
            for tau in MAIN_TAUS:
                term1 = d**-MAIN_P * tau ** (2 * MAIN_P - 1) * A
                term2 = tau ** (-1.0 / (100.0 * d)) * (skp_sq**power).sum(-1)
                lhs.append(term1 + term2)
                rhs.append(sk_norms)
    return np.stack(lhs, axis=1), np.stack(rhs, axis=1), None


OUTSIDE_EPS = 0.1
OUTSIDE_PS = (0.75, 1.0)


def outside_weights_batch(b: Batch, eps: float, p: float, C1: float = DEFAULT_C1, C2: float = DEFAULT_C2) -> np.ndarray:
    """``sum_k W_{k,d}[f]`` for the coordinates the extractor keeps, per function."""
    n = b.n
    A = b.moment(p)
    raw = np.where(A > 0, C1 * (A / eps) ** (1.0 / p), 0.0)
    d = np.clip(np.maximum(np.ceil(raw - 1e-12), 1), 1, max(n, 1)).astype(np.int64)
    log2_delta = -C2 * d / (2.0 * p - 1.0)
    out = np.zeros(len(A))
    size = popcounts(n)
    full = (1 << n) - 1
    for dv in np.unique(d):
        rows = np.nonzero(d == dv)[0]
        c = b.coeffs[rows]
        infl = influence_from_coeffs(c * noise_multipliers(n, 1.0 - 0.5 / dv))
        with np.errstate(divide="ignore"):
            keep = np.log2(infl) >= log2_delta[rows][:, None]
        jmask = (keep * (1 << np.arange(n))).sum(-1)
        outside = popcounts(n)[np.arange(1 << n)[None, :] & (~jmask[:, None] & full)]
        band_ok = (outside >= 1) & (outside <= dv)
        out[rows] = (np.where((size <= dv) & band_ok, c * c, 0.0)).sum(-1)
    return out


def _claim_outside(b: Batch):
    lhs = np.full((len(b.tables), len(OUTSIDE_PS)), OUTSIDE_EPS / 16.0)
    rhs = np.stack([outside_weights_batch(b, OUTSIDE_EPS, p) for p in OUTSIDE_PS], axis=1)
    return lhs, rhs, None


register(Check("lemma-tal-lvl1", "hard", "E[sqrt(s_f)] >= 2 sqrt(W_1[f])", _lvl1))
register(Check("lemma-lp", "hard",
               "E[s_f^p] >= W_1[f]^p for p in {1/2, 3/4, 1} (gradient L_q norm, q = 1/p)",
               _lemma_lp, notes="W_1^p >= W_1^(1/p) since W_1 <= 1/4, so this also certifies the weaker form"))
register(Check("lemma-robust", "hard",
               "E[sqrt(s_red)] + E[sqrt(s_blue)] >= (1/2) sqrt(W_1[f]) for every colouring", _robust,
               notes="fixed seeded colourings per dimension: 100 for n <= 6, 10 above"))
register(Check("thm-hyper", "hard", "sqrt(3)^d ||f^{<=d}||_2 >= ||f^{<=d}||_4, d = 0..4", _hyper,
               atol=1e-12, rtol=1e-9))
register(Check("fact-restriction", "hard",
               "closed form of E_{J,z} W_1[f_{Jbar->z}] equals exact enumeration over alive sets, d in {2, 3}",
               _fact_restriction, relation="==", atol=1e-12))
register(Check("claim-noise-decreases", "hard",
               "E||grad f||_q >= E||grad S f||_q for product noise S, q in {1, 2}", _noise_decreases,
               atol=1e-12, rtol=1e-12))
register(Check("poincare", "hard", "|E_f|/2^n >= var(f)", _poincare))
register(Check("claim-lowdeg", "hard",
               "2^-k sum_{j in Jbar} ||S_k' d_j f||^2 (point space) equals its spectral closed form",
               _claim_lowdeg, relation="==", atol=1e-10, rtol=1e-10))
register(Check("thm-tal-iso", "ratio", "E[sqrt(s_f)] >= c var(f) sqrt(ln(1/var(f)))", _tal_iso))
register(Check("thm-eg", "ratio", "E[sqrt(s_f)] >= c var(f) sqrt(ln(1 + 1/M[f]))", _eg))
register(Check("lemma-tal-lvld-exact", "ratio", "E[sqrt(s_f)] >= c sqrt(d) W_{~d}[f], d = 1..n", _lvld_exact))
register(Check("lemma-tal-lvld-above", "ratio", "E[sqrt(s_f)] >= c sqrt(d) W_{>=d}[f], d = 1..n", _lvld_above))
register(Check("cor-noise-stable", "ratio",
               "A eps^(1/2+delta) >= c Pr[f(x) != f(y)], A = E[s^(1/2+delta)], (1-eps)-correlated x, y",
               _noise_stable))
register(Check("cor-stab", "ratio",
               "Pr[||grad f|| >= (1/2) var(f) sqrt(ln n)] >= c var(f)", _cor_stab))
register(Check("claim-main", "ratio",
               "d^-p tau^(2p-1) E[s^p] + tau^(-1/100d) sum_j ||S_k' d_j f||^(2+1/100d) >= c sum_j ||S_k d_j f||^2",
               _claim_main, notes="p = 3/4; J in {empty, first half}; (k, d) in {(1,2), (1,4), (2,4)}; tau in {1/4, 1/16}"))
register(Check("claim-outside", "ratio",
               "eps/16 >= c sum_k W_{k,d}[f] for the extracted coordinates (eps = 0.1, default constants)",
               _claim_outside))

HARD_IDS = tuple(c.id for c in REGISTRY.values() if c.kind == "hard")
RATIO_IDS = tuple(c.id for c in REGISTRY.values() if c.kind == "ratio")


def resolve_ids(ids: Optional[Iterable[str]]) -> list:
    """Expand ``hard`` / ``ratio`` / ``all`` and validate ids, keeping registry order for groups."""
    if ids is None:
        return list(REGISTRY)
    out = []
    for token in ids:
        token = token.strip()
        if not token:
            continue
        if token == "all":
            group = list(REGISTRY)
        elif token == "hard":
            group = list(HARD_IDS)
        elif token == "ratio":
            group = list(RATIO_IDS)
        elif token in REGISTRY:
            group = [token]
        else:
            raise ConfigError(f"unknown check id {token!r}")
        out.extend(g for g in group if g not in out)
    if not out:
        raise ConfigError("no checks selected")
    return out


# -- running -------------------------------------------------------------


def chunk_size(n: int) -> int:
    return int(min(4096, max(1, (1 << 22) // ((n + 1) * (1 << n)))))


def _evaluate_chunk(check: Check, tables: np.ndarray, n: int):
    lhs, rhs, degen = check.evaluate(Batch(tables, n))
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    if lhs.ndim == 1:
        lhs, rhs = lhs[:, None], rhs[:, None]
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    if degen is None:
        degen = np.zeros(lhs.shape, dtype=bool)
    degen = np.broadcast_to(np.asarray(degen, dtype=bool).reshape(len(tables), -1), lhs.shape)
    slack = check.atol + check.rtol * np.abs(rhs)
    if check.relation == "==":
        ok = np.abs(lhs - rhs) <= slack
    else:
        ok = lhs >= rhs - slack
    valid = (rhs > 0) & ~degen
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(valid, lhs / np.where(valid, rhs, 1.0), np.inf)
    rows = np.arange(len(tables))
    pick = np.argmin(ratio, axis=1)
    failing = ~ok.all(axis=1)
    pick = np.where(failing, np.argmin(ok, axis=1), pick)
    return (
        lhs[rows, pick],
        rhs[rows, pick],
        np.where(valid[rows, pick], ratio[rows, pick], np.nan),
        ~valid.any(axis=1),
        ~failing,
    )


@dataclass
class CheckReport:
    check_id: str
    kind: str
    relation: str
    statement: str
    corpus: str
    labels: list = field(repr=False)
    witnesses: list = field(repr=False)
    lhs: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    ratio: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    ok: np.ndarray = field(repr=False)
    floor: Optional[float] = None

    @property
    def count(self) -> int:
        return len(self.labels)

    @property
    def nondegenerate(self) -> np.ndarray:
        return np.nonzero(~self.degenerate)[0]

    @property
    def min_ratio(self) -> Optional[float]:
        idx = self.nondegenerate
        return float(np.min(self.ratio[idx])) if len(idx) else None

    @property
    def max_ratio(self) -> Optional[float]:
        idx = self.nondegenerate
        return float(np.max(self.ratio[idx])) if len(idx) else None

    @property
    def argmin(self) -> Optional[int]:
        """Index of the minimum-ratio function; equal ratios go to the smallest serialization."""
        idx = self.nondegenerate
        if not len(idx):
            return None
        low = np.min(self.ratio[idx])
        tied = [int(i) for i in idx if self.ratio[i] == low]
        return min(tied, key=lambda i: self.witnesses[i])

    @property
    def witness(self) -> Optional[str]:
        i = self.argmin
        return None if i is None else self.witnesses[i]

    @property
    def failures(self) -> int:
        return int(np.count_nonzero(~self.ok)) if self.kind == "hard" else 0

    @property
    def failure_witness(self) -> Optional[str]:
        bad = np.nonzero(~self.ok)[0]
        return self.witnesses[int(bad[0])] if self.kind == "hard" and len(bad) else None

    @property
    def passed(self) -> Optional[bool]:
        return self.failures == 0 if self.kind == "hard" else None

    @property
    def positive(self) -> bool:
        m = self.min_ratio
        return m is None or m > 0

    @property
    def floor_ok(self) -> Optional[bool]:
        if self.floor is None or self.min_ratio is None:
            return None
        return self.min_ratio >= self.floor - FLOOR_RTOL * max(1.0, abs(self.floor))

    @property
    def ok_overall(self) -> bool:
        if self.kind == "hard":
            return bool(self.passed)
        return self.positive and self.floor_ok is not False

    def summary(self) -> dict:
        return {
            "id": self.check_id,
            "kind": self.kind,
            "relation": self.relation,
            "statement": self.statement,
            "log": "natural",
            "corpus": self.corpus,
            "functions": self.count,
            "degenerate": int(np.count_nonzero(self.degenerate)),
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "argmin_witness": self.witness,
            "argmin_label": None if self.argmin is None else self.labels[self.argmin],
            "passed": self.passed,
            "failures": self.failures,
            "failure_witness": self.failure_witness,
            "floor": self.floor,
            "floor_ok": self.floor_ok,
            "status": "ok" if self.ok_overall else "fail",
        }

    def csv_rows(self) -> Iterable[list]:
        for i in range(self.count):
            yield [self.check_id, self.labels[i], repr(float(self.lhs[i])), repr(float(self.rhs[i])),
                   repr(float(self.ratio[i])), int(bool(self.degenerate[i]))]


def load_floors() -> dict:
    try:
        text = resources.files("hyperioso").joinpath("data/calibration.json").read_text()
    except FileNotFoundError:
        return {}
    return json.loads(text).get("floors", {})


def run_check(check_id: str, corpus, threads: int = 1, floors: Optional[dict] = None) -> CheckReport:
    if check_id not in REGISTRY:
        raise ConfigError(f"unknown check id {check_id!r}")
    if isinstance(corpus, str):
        corpus = parse_corpus(corpus)
    if len(corpus) == 0:
        raise ConfigError("empty corpus")
    check = REGISTRY[check_id]
    jobs = []
    for g in corpus.groups:
        step = chunk_size(g.n)
        jobs += [(g, s) for s in range(0, len(g.tables), step)]

    def work(job):
        g, s = job
        return _evaluate_chunk(check, g.tables[s:s + chunk_size(g.n)], g.n)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    lhs, rhs, ratio, degen, ok = (np.concatenate([p[k] for p in parts]) for k in range(5))
    witnesses = [lab for g in corpus.groups for lab in g.labels]
    labels = [lab for g in corpus.groups for lab in (g.names or g.labels)]
    if floors is None:
        floors = load_floors()
    floor = floors.get(corpus.descriptor, {}).get(check_id, {}).get("min_ratio")
    report = CheckReport(check.id, check.kind, check.relation, check.statement, corpus.descriptor,
                         labels, witnesses, lhs, rhs, ratio, degen, ok, floor)
    if not len(report.nondegenerate) and report.passed is not False:
        raise DegenerateCorpusError(f"every function in {corpus.descriptor} is degenerate for {check_id}")
    return report


def run_suite(corpus_spec, ids: Optional[Iterable[str]] = None, threads: int = 1) -> list:
    corpus = parse_corpus(corpus_spec) if isinstance(corpus_spec, str) else corpus_spec
    return [run_check(i, corpus, threads) for i in resolve_ids(ids)]


def estimate_constant(check_id: str, corpus, threads: int = 1) -> float:
    """Best empirical constant: the minimum ratio over the nondegenerate functions."""
    return run_check(check_id, corpus, threads).min_ratio


def reports_json(corpus: str, reports: Sequence[CheckReport], skipped: Sequence[dict] = ()) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "corpus": corpus,
        "checks": [r.summary() for r in reports] + list(skipped),
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def reports_csv(reports: Sequence[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check_id", "function", "lhs", "rhs", "ratio", "degenerate"])
    for r in reports:
        writer.writerows(r.csv_rows())
    return buf.getvalue()


def default_threads() -> int:
    env = os.environ.get("HYPERIOSO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"HYPERIOSO_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


# -- reports without a verdict -------------------------------------------


def kk_surface(f: BooleanFunction, c1_grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0)) -> list:
    """Low-degree weight against ``M[f]``: for each ``c1`` the largest ``c2`` with ``W_{<=c1 ln(1/M)} <= M^c2``."""
    inf = influence_array(f.table)
    M = float((inf**2).sum())
    w = level_weight_array(wht_array(f.table))
    out = []
    for c1 in c1_grid:
        if not 0 < M < 1:
            out.append({"c1": c1, "M": M, "level": None, "weight": None, "c2": None})
            continue
        level = int(math.floor(c1 * math.log(1.0 / M)))
        weight = float(w[1:min(level, f.n) + 1].sum()) if level >= 1 else 0.0
        c2 = math.log(weight) / math.log(M) if weight > 0 else math.inf
        out.append({"c1": c1, "M": M, "level": level, "weight": weight, "c2": c2})
    return out
