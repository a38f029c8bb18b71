import numpy as np
import pytest

from conftest import brute_objective, make_candidates, random_instance
from keyrank.config import RankConfig
from keyrank.objective import (ScoredInstance, cosine, marginal_gain,
                               objective_value, score_instance)


class TestCosine:
    def test_identity(self):
        v = np.array([0.6, 0.8])
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_antipodal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == -1.0

    def test_zero_vector_convention(self):
        assert cosine(np.zeros(3), np.array([1.0, 0.0, 0.0])) == 0.0
        assert cosine(np.zeros(3), np.zeros(3)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            cosine(np.zeros(3), np.zeros(4))

    def test_range(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.standard_normal((2, 16))
            assert -1.0 - 1e-9 <= cosine(a, b) <= 1.0 + 1e-9


class TestScoreInstance:
    def cfg(self, **kw):
        base = dict(alpha=0.5, top_n=5, dim=4, clamp_similarity=True)
        base.update(kw)
        return RankConfig(**base)

    def test_candidate_equal_to_doc_has_relevance_one(self):
        doc = np.array([1.0, 0.0, 0.0, 0.0])
        cands = make_candidates(1, embeddings=[doc.copy()])
        inst = score_instance(cands, doc, self.cfg())
        assert inst.relevance[0] == pytest.approx(1.0, abs=1e-12)

    def test_identical_candidates_have_sim_one(self):
        doc = np.array([0.0, 1.0, 0.0, 0.0])
        v = np.array([1.0, 1.0, 0.0, 0.0])
        inst = score_instance(make_candidates(2, embeddings=[v, v.copy()]),
                              doc, self.cfg())
        assert inst.sim[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_clamp_floors_negative_cosine(self):
        doc = np.array([1.0, 0.0])
        a = np.array([1.0, 0.5])
        b = np.array([-1.0, 0.3])
        cands = make_candidates(2, embeddings=[a, b])
        clamped = score_instance(cands, doc, self.cfg(dim=2))
        raw = score_instance(cands, doc, self.cfg(dim=2,
                                                  clamp_similarity=False))
        assert raw.sim[0, 1] < 0.0
        assert clamped.sim[0, 1] == 0.0

    def test_sim_exactly_symmetric(self):
        rng = np.random.default_rng(3)
        inst, _ = random_instance(rng, m=20, d=8)
        assert np.array_equal(inst.sim, inst.sim.T)

    def test_diagonal_zeroed(self):
        rng = np.random.default_rng(4)
        inst, _ = random_instance(rng, m=6, d=8)
        assert np.all(np.diag(inst.sim) == 0.0)

    def test_value_ranges(self):
        rng = np.random.default_rng(5)
        inst, _ = random_instance(rng, m=30, d=8)
        assert np.all(inst.relevance >= -1.0 - 1e-9)
        assert np.all(inst.relevance <= 1.0 + 1e-9)
        assert np.all(inst.sim >= 0.0)
        assert np.all(inst.sim <= 1.0 + 1e-9)

    def test_missing_embedding_rejected(self):
        cands = make_candidates(1)
        with pytest.raises(ValueError, match="no embedding"):
            score_instance(cands, np.zeros(4), self.cfg())

    def test_dim_mismatch_rejected(self):
        cands = make_candidates(1, embeddings=[np.zeros(3)])
        with pytest.raises(ValueError, match="dim"):
            score_instance(cands, np.zeros(4), self.cfg())

    def test_empty_candidates_ok(self):
        inst = score_instance([], np.zeros(4), self.cfg())
        assert inst.size == 0

    def test_scale_invariance(self):
        rng = np.random.default_rng(6)
        doc = rng.standard_normal(8)
        emb = rng.standard_normal((5, 8))
        cands = make_candidates(5, embeddings=list(emb))
        scaled = make_candidates(5, embeddings=[3.7 * e for e in emb])
        cfg = self.cfg(dim=8)
        a = score_instance(cands, doc, cfg)
        b = score_instance(scaled, 11.0 * doc, cfg)
        np.testing.assert_allclose(a.relevance, b.relevance, atol=1e-9)
        np.testing.assert_allclose(a.sim, b.sim, atol=1e-9)
        subset = [0, 2, 4]
        assert objective_value(a, subset) == pytest.approx(
            objective_value(b, subset), abs=1e-9)
        assert marginal_gain(a, subset, 1) == pytest.approx(
            marginal_gain(b, subset, 1), abs=1e-9)


def small_instance():
    relevance = np.array([0.9, 0.8])
    sim = np.array([[0.0, 0.5], [0.5, 0.0]])
    return ScoredInstance(relevance=relevance, sim=sim, alpha=0.5, clamped=True)


class TestObjectiveValue:
    def test_empty_set(self):
        assert objective_value(small_instance(), []) == 0.0

    def test_two_element_arithmetic(self):
        # 0.9 + 0.8 - 0.5 * 0.5 = 1.45
        assert objective_value(small_instance(), [0, 1]) == pytest.approx(
            1.45, abs=1e-12)

    def test_singleton_is_relevance(self):
        assert objective_value(small_instance(), [1]) == pytest.approx(
            0.8, abs=1e-12)

    def test_alpha_zero_is_relevance_sum(self):
        rng = np.random.default_rng(7)
        inst, _ = random_instance(rng, m=9, d=8, alpha=0.0)
        subset = [1, 4, 7]
        assert objective_value(inst, subset) == pytest.approx(
            float(inst.relevance[subset].sum()), abs=1e-12)

    def test_enumeration_order_irrelevant(self):
        rng = np.random.default_rng(8)
        inst, _ = random_instance(rng, m=10, d=8)
        assert objective_value(inst, [5, 1, 8, 3]) == objective_value(
            inst, [3, 8, 1, 5])

    def test_out_of_range_rejected(self):
        with pytest.raises(IndexError):
            objective_value(small_instance(), [0, 2])

    def test_matches_brute_force(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            m = int(rng.integers(1, 10))
            inst, _ = random_instance(rng, m=m, d=8,
                                      alpha=float(rng.uniform(0, 2)))
            size = int(rng.integers(0, m + 1))
            subset = list(rng.choice(m, size=size, replace=False))
            expected = brute_objective(inst.relevance, inst.sim, inst.alpha,
                                       subset)
            assert objective_value(inst, subset) == pytest.approx(
                expected, abs=1e-12)


class TestMarginalGain:
    def test_empty_base_is_relevance(self):
        assert marginal_gain(small_instance(), [], 0) == pytest.approx(
            0.9, abs=1e-12)

    def test_single_penalty_arithmetic(self):
        # 0.8 - 0.5 * 0.5 = 0.55
        assert marginal_gain(small_instance(), [0], 1) == pytest.approx(
            0.55, abs=1e-12)

    def test_member_rejected(self):
        with pytest.raises(ValueError, match="already"):
            marginal_gain(small_instance(), [0], 0)

    def test_out_of_range_rejected(self):
        with pytest.raises(IndexError):
            marginal_gain(small_instance(), [0], 5)

    def test_closed_form_matches_objective_difference(self):
        rng = np.random.default_rng(10)
        trials = 0
        while trials < 1000:
            m = int(rng.integers(2, 12))
            inst, _ = random_instance(rng, m=m, d=8,
                                      alpha=float(rng.uniform(0, 2)),
                                      clamp=bool(rng.integers(0, 2)))
            size = int(rng.integers(0, m))
            subset = list(rng.choice(m, size=size, replace=False))
            outside = [x for x in range(m) if x not in subset]
            x = int(rng.choice(outside))
            diff = (objective_value(inst, subset + [x])
                    - objective_value(inst, subset))
            assert marginal_gain(inst, subset, x) == pytest.approx(
                diff, abs=1e-12)
            trials += 1


class TestDiminishingReturns:
    def test_holds_for_clamped_instances(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 1000:
            m = int(rng.integers(2, 12))
            inst, _ = random_instance(rng, m=m, d=8,
                                      alpha=float(rng.uniform(0, 2)))
            perm = list(rng.permutation(m))
            b_size = int(rng.integers(1, m))
            b = perm[:b_size]
            a = [i for i in b if rng.random() < 0.5]
            x = perm[b_size]
            gain_a = marginal_gain(inst, a, x)
            gain_b = marginal_gain(inst, b, x)
            assert gain_a >= gain_b - 1e-12
            checked += 1

    def test_unclamped_counterexample(self):
        # antipodal pair: adding x to the larger set gains MORE without
        # clamping, which is exactly why clamping defaults to on
        doc = np.array([1.0, 0.0])
        x = np.array([1.0, 0.0])
        a = np.array([0.0, 1.0])
        b = np.array([-1.0, 0.0])
        cands = make_candidates(3, embeddings=[x, a, b])
        raw_cfg = RankConfig(alpha=1.0, dim=2, clamp_similarity=False)
        clamped_cfg = RankConfig(alpha=1.0, dim=2, clamp_similarity=True)
        raw = score_instance(cands, doc, raw_cfg)
        # A = {a} subset of B = {a, b}; sim(x, b) = -1 rewards adding x to B
        assert marginal_gain(raw, [1], 0) < marginal_gain(raw, [1, 2], 0)
        clamped = score_instance(cands, doc, clamped_cfg)
        assert marginal_gain(clamped, [1], 0) >= marginal_gain(
            clamped, [1, 2], 0) - 1e-12
