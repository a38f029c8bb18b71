import numpy as np
import pytest

from conftest import make_candidates, two_cluster_fixture
from keyrank.config import RankConfig
from keyrank.metrics import (DocumentEval, aggregate_evals, cluster_gold,
                             intra_list_distance, light_stem, match_keyphrases,
                             prf_at_n, subtopic_recall)
from keyrank.objective import score_instance
from keyrank.ranker import greedy_rank


class TestLightStem:
    def test_plural(self):
        assert light_stem("models") == "model"

    def test_longest_suffix_wins(self):
        assert light_stem("rankings") == "ranking"  # "s", not "ings"
        assert light_stem("ranking") == "rank"

    def test_short_tokens_untouched(self):
        assert light_stem("is") == "is"
        assert light_stem("as") == "as"

    def test_multi_token(self):
        # "phrases" loses "es" (the longest applicable suffix), not just "s"
        assert light_stem("ranked phrases") == "rank phras"


class TestMatchKeyphrases:
    def test_case_fold_match(self):
        assert match_keyphrases(["Deep Learning"], {"deep learning"},
                                stem=False) == {"deep learning"}

    def test_stemmed_match(self):
        assert match_keyphrases(["models"], {"model"}, stem=True) == {"model"}

    def test_exact_mode_misses_inflection(self):
        assert match_keyphrases(["models"], {"model"}, stem=False) == set()

    def test_gold_matched_at_most_once(self):
        matched = match_keyphrases(["models", "model"], {"model"}, stem=True)
        assert matched == {"model"}

    def test_each_prediction_consumes_one_gold(self):
        matched = match_keyphrases(["model"], {"model", "models"}, stem=True)
        assert len(matched) == 1

    def test_whitespace_collapsed(self):
        assert match_keyphrases(["deep  learning"], {"deep learning"},
                                stem=False) == {"deep learning"}


class TestPrfAtN:
    def test_spec_arithmetic(self):
        p, r, f1 = prf_at_n(["a", "b", "x", "y", "z"], {"a", "b", "c"}, 5,
                            stem=False)
        assert p == pytest.approx(0.4, abs=1e-12)
        assert r == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert f1 == pytest.approx(0.5, abs=1e-12)

    def test_empty_gold(self):
        assert prf_at_n(["a"], set(), 5) == (0.0, 0.0, 0.0)

    def test_no_predictions(self):
        assert prf_at_n([], {"a"}, 5) == (0.0, 0.0, 0.0)

    def test_perfect(self):
        gold = {"a", "b", "c", "d", "e"}
        assert prf_at_n(list(gold), gold, 5) == (1.0, 1.0, 1.0)

    def test_truncation_to_n(self):
        p, r, f1 = prf_at_n(["x", "y", "a"], {"a"}, 2, stem=False)
        assert (p, r, f1) == (0.0, 0.0, 0.0)

    def test_f1_harmonic_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n_gold = int(rng.integers(1, 8))
            gold = {f"g{i}" for i in range(n_gold)}
            hits = list(rng.choice(sorted(gold),
                                   size=int(rng.integers(0, n_gold + 1)),
                                   replace=False))
            noise = [f"x{i}" for i in range(int(rng.integers(0, 5)))]
            predicted = hits + noise
            p, r, f1 = prf_at_n(predicted, gold, 5, stem=False)
            expected = 0.0 if p + r == 0 else 2 * p * r / (p + r)
            assert f1 == pytest.approx(expected, abs=1e-12)

    def test_adding_match_never_hurts(self):
        gold = {"a", "b", "c"}
        base = ["x", "a"]
        p0, r0, f0 = prf_at_n(base, gold, 5, stem=False)
        p1, r1, f1 = prf_at_n(base + ["b"], gold, 5, stem=False)
        assert r1 >= r0 and f1 >= f0


class TestIntraListDistance:
    def test_identical_pair(self):
        v = np.array([1.0, 0.0])
        assert intra_list_distance([v, v.copy()]) == pytest.approx(0.0,
                                                                   abs=1e-12)

    def test_orthogonal_pair(self):
        assert intra_list_distance([np.array([1.0, 0.0]),
                                    np.array([0.0, 1.0])]) == pytest.approx(
            1.0, abs=1e-12)

    def test_singleton_and_empty(self):
        assert intra_list_distance([np.array([1.0, 0.0])]) == 0.0
        assert intra_list_distance([]) == 0.0

    def test_antipodal_reaches_two(self):
        ild = intra_list_distance([np.array([1.0, 0.0]),
                                   np.array([-1.0, 0.0])])
        assert ild == pytest.approx(2.0, abs=1e-12)

    def test_permutation_and_scale_invariant(self):
        rng = np.random.default_rng(2)
        vectors = [rng.standard_normal(6) for _ in range(5)]
        base = intra_list_distance(vectors)
        shuffled = [vectors[i] for i in rng.permutation(5)]
        assert intra_list_distance(shuffled) == pytest.approx(base, abs=1e-9)
        scaled = [7.3 * v for v in vectors]
        assert intra_list_distance(scaled) == pytest.approx(base, abs=1e-9)

    def test_range(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            vectors = [rng.standard_normal(4) for _ in range(4)]
            assert 0.0 <= intra_list_distance(vectors) <= 2.0 + 1e-12

    def test_range_with_nonnegative_cosines(self):
        # all-nonnegative entries force pairwise cosines >= 0, so ILD <= 1
        rng = np.random.default_rng(4)
        for _ in range(50):
            vectors = [np.abs(rng.standard_normal(6)) for _ in range(5)]
            assert 0.0 <= intra_list_distance(vectors) <= 1.0 + 1e-12


class TestSubtopicRecall:
    def fixture(self):
        e = np.eye(3)
        gold_embeddings = {
            "a": e[0], "b": e[0] * 0.9 + e[1] * 0.1, "c": e[2],
        }
        return gold_embeddings

    def test_half_covered(self):
        emb = self.fixture()
        # a and b cluster together (cos ~ 0.99), c is alone
        sr = subtopic_recall(["a"], {"a", "b", "c"}, emb, tau=0.7, stem=False)
        assert sr == 0.5

    def test_all_singletons_reduce_to_plain_recall(self):
        e = np.eye(3)
        emb = {"a": e[0], "b": e[1], "c": e[2]}
        sr = subtopic_recall(["a", "b"], {"a", "b", "c"}, emb, tau=0.7,
                             stem=False)
        assert sr == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_full_coverage(self):
        emb = self.fixture()
        sr = subtopic_recall(["b", "c"], {"a", "b", "c"}, emb, tau=0.7,
                             stem=False)
        assert sr == 1.0

    def test_empty_gold(self):
        assert subtopic_recall(["a"], set(), {}, tau=0.7) == 0.0

    def test_monotone_under_appends(self):
        emb = self.fixture()
        gold = {"a", "b", "c"}
        selections = [[], ["x"], ["x", "a"], ["x", "a", "c"]]
        values = [subtopic_recall(s, gold, emb, tau=0.7, stem=False)
                  for s in selections]
        assert values == sorted(values)

    def test_accepts_candidates(self):
        emb = self.fixture()
        cands = make_candidates(1, names=["a"])
        assert subtopic_recall(cands, {"a", "b", "c"}, emb, tau=0.7) == 0.5

    def test_bad_tau_rejected(self):
        with pytest.raises(ValueError, match="tau"):
            subtopic_recall(["a"], {"a"}, self.fixture(), tau=0.0)

    def test_cluster_gold_structure(self):
        emb = self.fixture()
        clusters = cluster_gold({"a", "b", "c"}, emb, tau=0.7)
        assert sorted(sorted(c) for c in clusters) == [["a", "b"], ["c"]]


class TestDiversityTrendFixture:
    """Higher alpha must not reduce diversity on the two-cluster fixture."""

    def run_alpha(self, alpha):
        candidates, gold, gold_embeddings, doc_vec = two_cluster_fixture()
        cfg = RankConfig(alpha=alpha, top_n=2, dim=4, clamp_similarity=True)
        inst = score_instance(candidates, doc_vec, cfg)
        sel = greedy_rank(inst, candidates, cfg.top_n)
        embeddings = [item.candidate.embedding for item in sel.items]
        ild = intra_list_distance(embeddings)
        sr = subtopic_recall([item.candidate for item in sel.items], gold,
                             gold_embeddings, tau=0.7, stem=False)
        return sel, ild, sr

    def test_low_alpha_stays_in_cluster_one(self):
        sel, ild, sr = self.run_alpha(0.1)
        assert sel.keyphrases() == ["alpha one", "alpha two"]
        assert sr == 0.5

    def test_high_alpha_crosses_clusters(self):
        sel, ild, sr = self.run_alpha(0.9)
        assert sel.keyphrases() == ["alpha one", "beta one"]
        assert sr == 1.0

    def test_trend(self):
        _, ild_low, sr_low = self.run_alpha(0.1)
        _, ild_high, sr_high = self.run_alpha(0.9)
        assert ild_high >= ild_low
        assert sr_high >= sr_low


class TestAggregateEvals:
    def rows(self):
        return [
            DocumentEval("d1", 1.0, 0.5, 2 / 3, 0.2, 1.0, 10.0),
            DocumentEval("d2", 0.0, 0.0, 0.0, 0.8, 0.0, 30.0),
        ]

    def test_macro_means(self):
        agg = aggregate_evals(self.rows())
        assert agg["precision"] == pytest.approx(0.5)
        assert agg["ild"] == pytest.approx(0.5)
        assert agg["elapsed_ms"] == pytest.approx(20.0)

    def test_micro_pools_counts(self):
        agg = aggregate_evals(self.rows(), micro=True,
                              micro_counts=[(1, 1, 2), (0, 3, 1)])
        assert agg["precision"] == pytest.approx(0.25)
        assert agg["recall"] == pytest.approx(1.0 / 3.0)
        # ild stays macro
        assert agg["ild"] == pytest.approx(0.5)

    def test_empty(self):
        agg = aggregate_evals([])
        assert agg["f1"] == 0.0

    def test_micro_requires_counts(self):
        with pytest.raises(ValueError):
            aggregate_evals(self.rows(), micro=True, micro_counts=[(1, 1, 1)])
