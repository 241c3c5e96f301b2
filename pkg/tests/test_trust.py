import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import trapezoid

from src.metrics import (
    class_priors,
    net_trust_score,
    question_answer_trust,
    trust_density,
    trust_report,
    trust_spectrum,
)
from src.models import Prediction, TrustConfig

from .conftest import make_prediction

CFG = TrustConfig()


def certain(clip_id, label, correct=True):
    """Prediction at confidence exactly 1.0 (the other class gets a vanishing probability)."""
    predicted = label if correct else 1 - label
    probs = (1.0, 1e-17) if predicted == 0 else (1e-17, 1.0)
    return Prediction.from_probs(clip_id, probs, label)


def random_predictions(rng, n):
    labels = np.r_[0, 1, rng.integers(0, 2, size=n - 2)]
    return [make_prediction(f"c{i}", float(rng.uniform(0.01, 0.99)), int(z)) for i, z in enumerate(labels)]


class TestQuestionAnswerTrust:
    def test_examples(self):
        correct = make_prediction("a", 0.9, 1)
        wrong = make_prediction("b", 0.9, 0)
        assert question_answer_trust(correct, 1, CFG) == pytest.approx(0.9)
        assert question_answer_trust(wrong, 0, CFG) == pytest.approx(0.1)
        assert question_answer_trust(certain("c", 1), 1, CFG) == 1.0

    def test_exponents(self):
        cfg = TrustConfig(alpha=2.0, beta=0.5)
        assert question_answer_trust(make_prediction("a", 0.8, 1), 1, cfg) == pytest.approx(0.64)
        assert question_answer_trust(make_prediction("b", 0.75, 0), 0, cfg) == pytest.approx(0.5)

    @settings(max_examples=200, deadline=None)
    @given(p1=st.floats(0.001, 0.999), z=st.sampled_from([0, 1]),
           alpha=st.floats(0.1, 5.0), beta=st.floats(0.1, 5.0))
    def test_stays_in_unit_interval(self, p1, z, alpha, beta):
        q = question_answer_trust(make_prediction("x", p1, z), z, TrustConfig(alpha=alpha, beta=beta))
        assert 0.0 <= q <= 1.0


class TestSpectrum:
    def test_mean_of_class_values(self):
        preds = [make_prediction("a", 0.9, 1), make_prediction("b", 0.7, 1), make_prediction("c", 0.6, 0)]
        assert trust_spectrum(preds, 1, CFG) == pytest.approx(0.8)

    def test_perfect_class(self):
        preds = [certain(f"c{i}", 1) for i in range(5)]
        assert trust_spectrum(preds, 1, CFG) == 1.0

    def test_empty_class_is_an_error(self):
        with pytest.raises(ValueError):
            trust_spectrum([make_prediction("a", 0.9, 1)], 0, CFG)

    def test_matches_straight_line_aggregation(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            preds = random_predictions(rng, 30)
            for z in (0, 1):
                values = []
                for p in preds:
                    if p.true_label != z:
                        continue
                    c = max(p.probs)
                    values.append(c if p.predicted == z else 1.0 - c)
                assert trust_spectrum(preds, z, CFG) == pytest.approx(sum(values) / len(values), abs=1e-12)


class TestNetTrustScore:
    def test_weighted_mean(self):
        preds = [certain("a", 0), make_prediction("b", 0.5, 1)]
        assert class_priors(preds) == {0: 0.5, 1: 0.5}
        assert net_trust_score(preds, CFG) == pytest.approx(0.75)

    def test_perfect_classifier(self):
        preds = [certain(f"c{i}", i % 2) for i in range(10)]
        assert net_trust_score(preds, CFG) == 1.0

    def test_coin_flip_classifier(self):
        rng = np.random.default_rng(1)
        preds = [make_prediction(f"c{i}", 0.5, int(z)) for i, z in enumerate(np.r_[0, 1, rng.integers(0, 2, 20)])]
        assert net_trust_score(preds, CFG) == pytest.approx(0.5, abs=1e-9)

    def test_missing_class_is_an_error(self):
        with pytest.raises(ValueError, match="no samples"):
            net_trust_score([make_prediction("a", 0.7, 1)], CFG)

    def test_uniform_prior(self):
        preds = [certain("a", 0), certain("b", 0), certain("c", 0), make_prediction("d", 0.5, 1)]
        assert net_trust_score(preds, CFG) == pytest.approx(0.75 * 1.0 + 0.25 * 0.5)
        assert net_trust_score(preds, TrustConfig(uniform_prior=True)) == pytest.approx(0.75)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_convex_combination_of_spectra(self, seed):
        preds = random_predictions(np.random.default_rng(seed), 15)
        nts = net_trust_score(preds, CFG)
        spectra = [trust_spectrum(preds, z, CFG) for z in (0, 1)]
        assert min(spectra) - 1e-12 <= nts <= max(spectra) + 1e-12
        assert 0.0 <= nts <= 1.0

    @settings(max_examples=1000, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), bump=st.floats(0.0, 0.5))
    def test_monotone_in_confidence(self, seed, bump):
        rng = np.random.default_rng(seed)
        preds = random_predictions(rng, 12)
        i = int(rng.integers(len(preds)))
        p = preds[i]
        confidence = max(p.probs)
        raised = min(confidence + bump, 0.999)
        p1 = raised if p.predicted == 1 else 1.0 - raised
        changed = list(preds)
        changed[i] = make_prediction(p.clip_id, p1, p.true_label)
        assert changed[i].predicted == p.predicted
        before, after = net_trust_score(preds, CFG), net_trust_score(changed, CFG)
        if p.correct:
            assert after >= before - 1e-12
        else:
            assert after <= before + 1e-12


class TestDensity:
    def test_non_negative_and_normalized(self):
        preds = random_predictions(np.random.default_rng(2), 40)
        for z in (0, 1):
            grid, density = trust_density(preds, z, CFG)
            assert grid.shape == density.shape == (CFG.grid_size,)
            assert np.all(density >= 0.0)
            assert abs(trapezoid(density, grid) - 1.0) <= 1e-3

    def test_cluster_mode(self):
        rng = np.random.default_rng(3)
        preds = [make_prediction(f"c{i}", float(np.clip(rng.normal(0.9, 0.02), 0.8, 0.99)), 1)
                 for i in range(60)]
        grid, density = trust_density(preds, 1, CFG)
        assert abs(grid[np.argmax(density)] - 0.9) <= 0.05

    def test_single_sample_gets_narrow_kernel(self):
        grid, density = trust_density([make_prediction("a", 0.7, 1)], 1, CFG)
        assert abs(grid[np.argmax(density)] - 0.7) <= 1.0 / (CFG.grid_size - 1)
        assert abs(trapezoid(density, grid) - 1.0) <= 1e-3

    def test_empty_class_is_an_error(self):
        with pytest.raises(ValueError):
            trust_density([make_prediction("a", 0.7, 1)], 0, CFG)


class TestReport:
    def test_report_fields(self):
        preds = random_predictions(np.random.default_rng(4), 20)
        report = trust_report(preds, CFG)
        assert report.nts == pytest.approx(net_trust_score(preds, CFG), abs=1e-12)
        assert sum(ct.n for ct in report.per_class.values()) == 20
        data = report.to_dict()
        assert set(data["per_class"]) == {"0", "1"}
        assert set(data) == {"per_class", "nts", "priors", "prior_estimator", "high_trust", "high_trust_threshold"}
        assert set(data["per_class"]["1"]) == {"name", "qz_mean", "n", "density_grid"}
        assert data["prior_estimator"] == "empirical"
        assert data["high_trust_threshold"] == 0.8
        assert data["high_trust"] == (report.nts > 0.8)
        assert sum(data["priors"].values()) == pytest.approx(1.0)

    def test_high_trust_flag(self):
        preds = [certain(f"c{i}", i % 2) for i in range(4)]
        assert trust_report(preds, CFG).high_trust
