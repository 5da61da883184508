import csv
import io
import json
import math
from dataclasses import replace

import numpy as np
import pytest

from hyperioso import BooleanFunction, BudgetError, ConfigError, DegenerateCorpusError, FamilySpec, generate
from hyperioso import harness
from hyperioso.harness import (
    REGISTRY,
    corpus_from_functions,
    estimate_constant,
    kk_surface,
    parse_corpus,
    reports_csv,
    reports_json,
    run_check,
    run_suite,
)

SPEC_IDS = {"lemma-tal-lvl1", "thm-tal-iso", "thm-eg", "lemma-tal-lvld-exact", "lemma-tal-lvld-above",
            "lemma-lp", "cor-noise-stable", "lemma-robust", "cor-stab", "fact-restriction", "thm-hyper",
            "claim-noise-decreases", "claim-main", "claim-lowdeg", "claim-outside", "poincare"}


@pytest.fixture(scope="module")
def exhaustive4():
    return parse_corpus("exhaustive:4")


class TestRegistry:
    def test_ids_and_kinds(self):
        assert set(REGISTRY) == SPEC_IDS
        hard = {"lemma-tal-lvl1", "lemma-lp", "lemma-robust", "thm-hyper", "fact-restriction",
                "claim-noise-decreases", "poincare", "claim-lowdeg"}
        assert {i for i, c in REGISTRY.items() if c.kind == "hard"} == hard
        assert all(c.statement for c in REGISTRY.values())

    def test_resolve(self):
        assert harness.resolve_ids(["hard"]) == list(harness.HARD_IDS)
        assert harness.resolve_ids(["thm-eg", "ratio"])[0] == "thm-eg"
        with pytest.raises(ConfigError):
            harness.resolve_ids(["nope"])
        with pytest.raises(ConfigError):
            run_check("nope", "exhaustive:1")


class TestCorpora:
    def test_exhaustive(self):
        c = parse_corpus("exhaustive:3")
        assert len(c) == 256 and c.groups[0].labels[1] == "tt:3:10"

    def test_random_is_seeded(self):
        a, b = parse_corpus("random:6:5:1"), parse_corpus("random:6:5:1")
        assert np.array_equal(a.groups[0].tables, b.groups[0].tables)

    def test_families(self):
        c = parse_corpus("families:5")
        assert [g.n for g in c.groups] == [1, 2, 3, 4, 5]
        assert "family=majority,n=5" in c.groups[-1].names

    @pytest.mark.parametrize("spec", ["exhaustive", "random:3:0:1", "families:x", "other:3", "random:17:1:1"])
    def test_bad_specs(self, spec):
        with pytest.raises(ConfigError):
            parse_corpus(spec)

    def test_budget(self):
        with pytest.raises(BudgetError):
            parse_corpus("exhaustive:5")


class TestExamples:
    def test_lvl1_on_exhaustive3(self):
        rep = run_check("lemma-tal-lvl1", "exhaustive:3")
        assert rep.passed and rep.count == 256 and rep.min_ratio >= 1

    def test_constant_is_degenerate(self):
        const = corpus_from_functions("const", [BooleanFunction.constant(3, 1)])
        with pytest.raises(DegenerateCorpusError):
            run_check("thm-tal-iso", const)
        mixed = corpus_from_functions("mixed", [BooleanFunction.constant(3, 1), generate(FamilySpec("majority"), 3)])
        rep = run_check("thm-tal-iso", mixed)
        assert rep.degenerate.tolist() == [True, False] and math.isnan(rep.ratio[0])

    def test_eg_dictator(self):
        rep = run_check("thm-eg", corpus_from_functions("dict", [BooleanFunction.parse("tt:1:2")]))
        assert rep.lhs[0] == 1.0
        assert rep.rhs[0] == pytest.approx(0.25 * math.sqrt(math.log(2)), abs=1e-15)
        assert rep.rhs[0] == pytest.approx(0.2082, abs=1e-4) and rep.ratio[0] == pytest.approx(4.8, abs=0.01)

    def test_full_hard_suite_exhaustive4(self, exhaustive4):
        for rep in run_suite(exhaustive4, ["hard"], threads=2):
            assert rep.passed, (rep.check_id, rep.failure_witness)

    def test_tal_iso_constant(self, exhaustive4):
        c4 = estimate_constant("thm-tal-iso", exhaustive4)
        assert c4 > 0
        assert estimate_constant("thm-tal-iso", "families:16") <= c4 + 1e-9

    def test_ratio_checks_positive_on_families(self):
        for cid in harness.RATIO_IDS:
            try:
                rep = run_check(cid, "families:8")
            except DegenerateCorpusError:
                continue
            assert rep.min_ratio > 0, cid


class TestRunner:
    def test_thread_independence(self):
        corpus = parse_corpus("random:7:300:5")
        for cid in ("claim-main", "lemma-robust", "thm-eg"):
            a, b = run_check(cid, corpus, threads=1), run_check(cid, corpus, threads=4)
            assert np.array_equal(a.ratio, b.ratio, equal_nan=True) and a.witness == b.witness

    def test_chunking_does_not_change_rows(self, monkeypatch):
        corpus = parse_corpus("random:5:50:3")
        whole = run_check("claim-lowdeg", corpus)
        monkeypatch.setattr(harness, "chunk_size", lambda n: 7)
        parts = run_check("claim-lowdeg", corpus)
        assert np.array_equal(whole.lhs, parts.lhs) and np.array_equal(whole.rhs, parts.rhs)

    def test_argmin_tie_break(self):
        # the two dictators on n=2 tie exactly; the smaller serialization wins
        fs = [BooleanFunction.parse("tt:2:c"), BooleanFunction.parse("tt:2:a")]
        rep = run_check("lemma-tal-lvl1", corpus_from_functions("dicts", fs))
        assert rep.ratio[0] == rep.ratio[1] and rep.witness == "tt:2:a"

    def test_corrupted_check_fails_with_witness(self, monkeypatch):
        broken = replace(REGISTRY["lemma-tal-lvl1"],
                         evaluate=lambda b: (b.moment(0.5), 3.0 * np.sqrt(b.levels[:, 1]), None))
        monkeypatch.setitem(REGISTRY, "lemma-tal-lvl1", broken)
        rep = run_check("lemma-tal-lvl1", "exhaustive:3")
        assert rep.passed is False and rep.failures > 0
        assert BooleanFunction.parse(rep.failure_witness).n == 3

    def test_floor_comparison(self):
        rep = run_check("thm-eg", "exhaustive:3", floors={"exhaustive:3": {"thm-eg": {"min_ratio": 100.0}}})
        assert rep.floor_ok is False and not rep.ok_overall
        rep = run_check("thm-eg", "exhaustive:3", floors={})
        assert rep.floor_ok is None and rep.ok_overall

    def test_reports(self):
        reps = run_suite("exhaustive:2", ["poincare", "thm-eg"])
        doc = json.loads(reports_json("exhaustive:2", reps))
        assert doc["schema_version"] == harness.SCHEMA_VERSION and doc["version"]
        assert [c["id"] for c in doc["checks"]] == ["poincare", "thm-eg"]
        assert doc["checks"][1]["log"] == "natural"
        rows = list(csv.reader(io.StringIO(reports_csv(reps))))
        assert rows[0] == ["check_id", "function", "lhs", "rhs", "ratio", "degenerate"]
        assert len(rows) == 1 + 2 * 16


class TestSurface:
    def test_kk_surface(self):
        f = generate(FamilySpec("majority"), 9)
        rows = kk_surface(f, (1.0, 4.0))
        M = rows[0]["M"]
        assert 0 < M < 1 and rows[1]["level"] == math.floor(4.0 * math.log(1 / M))
        for r in rows:
            if r["weight"]:
                assert r["weight"] == pytest.approx(M ** r["c2"])
