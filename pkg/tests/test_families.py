import math

import numpy as np
import pytest

from hyperioso import BooleanFunction, ConfigError, FamilySpec, generate, tribes
from hyperioso.core import mean
from hyperioso.families import embed, family_corpus, log_n_power, tribes_moment, tribes_width_for


def tribes_moment_closed_form(w, m, p):
    """E[s^p] from the block structure: an accepted point is sensitive only when exactly one
    block is full (s = w); a rejected point has s = number of blocks one bit short of full."""
    full, short = 2.0**-w, w * 2.0**-w
    accept = m * full * (1 - full) ** (m - 1) * w**p
    reject = sum(math.comb(m, j) * short**j * (1 - full - short) ** (m - j) * j**p for j in range(1, m + 1))
    return accept + reject


class TestGenerators:
    def test_tables(self, maj3):
        assert generate(FamilySpec("and_k", {"k": 2}), 2).table.tolist() == [0, 0, 0, 1]
        assert generate(FamilySpec("or_k", {"k": 2}), 2).table.tolist() == [0, 1, 1, 1]
        assert maj3.table.tolist() == [0, 0, 0, 1, 0, 1, 1, 1]
        assert generate(FamilySpec("parity", {"S": (1, 3)}), 3).table.tolist() == [0, 1, 0, 1, 1, 0, 1, 0]
        assert generate(FamilySpec("dictator", {"i": 2}), 2).table.tolist() == [0, 0, 1, 1]

    def test_tribes_mean(self, tribes22):
        assert mean(tribes22) == 7 / 16
        assert mean(tribes(3, 4)) == pytest.approx(1 - (7 / 8) ** 4, abs=1e-15)

    def test_random_is_seeded(self):
        a = generate(FamilySpec("random", {"seed": 3, "bias": 0.3}), 8)
        assert a == generate(FamilySpec("random", {"seed": 3, "bias": 0.3}), 8)
        assert a != generate(FamilySpec("random", {"seed": 4, "bias": 0.3}), 8)

    @pytest.mark.parametrize("kind,params,n", [("majority", {}, 4), ("tribes", {"w": 2, "m": 3}, 5),
                                               ("dictator", {"i": 4}, 3), ("and_k", {"k": 0}, 3),
                                               ("random", {"bias": 2}, 3)])
    def test_invalid(self, kind, params, n):
        with pytest.raises(ConfigError):
            generate(FamilySpec(kind, params), n)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            FamilySpec("address")

    def test_describe(self):
        spec = FamilySpec("tribes", {"w": 2, "m": 3})
        assert spec.describe() == "family=tribes,m=3,w=2" and spec.implied_n() == 6

    def test_embed(self, and2):
        f = embed(and2, 4)
        assert all(f(x) == and2(x & 3) for x in range(16))


class TestTribesMoment:
    def test_small_cases(self):
        assert tribes_moment(1, 1, 1.0) == 1.0
        assert tribes_moment(2, 2, 1.0) == pytest.approx(tribes_moment_closed_form(2, 2, 1.0), abs=1e-15)

    @pytest.mark.parametrize("w,m", [(2, 1), (2, 4), (3, 4), (4, 2), (2, 7)])
    def test_closed_form(self, w, m):
        for p in (0.5, 0.75, 1.0):
            assert tribes_moment(w, m, p) == pytest.approx(tribes_moment_closed_form(w, m, p), abs=1e-13)

    def test_log_ratio(self):
        assert log_n_power(12, 0.5) == math.sqrt(math.log(12))
        assert math.isnan(log_n_power(1, 0.5))

    def test_width_choice(self):
        w, m = tribes_width_for(16)
        assert w * m <= 16
        assert abs(1 - (1 - 2.0**-w) ** m - 0.5) <= 0.25


class TestCorpus:
    def test_order_and_content(self):
        corpus = family_corpus(4)
        names = [name for name, _ in corpus]
        assert names == sorted(names, key=lambda s: int(s.rsplit("n=", 1)[1])) and len(set(names)) == len(names)
        assert all(isinstance(f, BooleanFunction) for _, f in corpus)
        assert "family=tribes,m=2,w=2,n=4" in names
