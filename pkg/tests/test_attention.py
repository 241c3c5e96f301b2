import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from src.engine import Tensor, check_gradients, cross_entropy, generator, tensor
from src.errors import CheckpointError, DatasetError
from src.models import ClassifierConfig, ClipFeatures
from src.networks import (
    AttentionClassifier,
    SEBlock,
    classify,
    fuse,
    load_classifier,
    se_block,
    stratified_split,
    train_classifier,
)
from src.parsers.checkpoint_parser import decode_checkpoint, encode_checkpoint

from .conftest import GRADCHECK_INSTANCES as INSTANCES

CHANNELS = 4


def config(**overrides):
    settings_ = dict(se_reduction=2, dtype="float64", seed=11)
    settings_.update(overrides)
    return ClassifierConfig(**settings_)


def features(rng, t=6):
    return rng.standard_normal((CHANNELS, t))


def labelled_items(count=12, frames=6, with_mask=True, seed=0):
    """Clips whose first channel is shifted up for the successful class."""
    rng = np.random.default_rng(seed)
    items = []
    for i in range(count):
        label = i % 2
        video = rng.standard_normal((CHANNELS, frames))
        video[0] += 2.0 if label else -2.0
        mask = rng.standard_normal((CHANNELS, frames)) + 1.0 if with_mask else None
        items.append(ClipFeatures(f"clip_{i:02d}", label, video, mask))
    return items


class TestSEBlock:
    def test_gates_lie_strictly_inside_unit_interval(self):
        rng = np.random.default_rng(0)
        block = SEBlock(CHANNELS, 2, 3, generator(0, 1))
        for _ in range(20):
            u = block.conv(tensor(features(rng) * 5.0))
            g = block.gates(u).data
            assert g.shape == (CHANNELS,)
            assert np.all((g > 0.0) & (g < 1.0))

    def test_zero_input_gives_zero_output(self):
        block = SEBlock(CHANNELS, 2, 3, generator(0, 1))
        assert_array_equal(se_block(tensor(np.zeros((CHANNELS, 5))), block).data, 0.0)

    def test_output_shape_for_various_lengths(self):
        block = SEBlock(CHANNELS, 2, 3, generator(0, 1))
        for t in (3, 5, 17):
            assert se_block(tensor(np.ones((CHANNELS, t))), block).shape == (CHANNELS, t)

    def test_reduction_must_divide_channels(self):
        with pytest.raises(ValueError):
            SEBlock(6, 4, 3, generator(0, 1))

    def test_rejects_wrong_channel_count(self):
        block = SEBlock(CHANNELS, 2, 3, generator(0, 1))
        with pytest.raises(ValueError):
            block(tensor(np.ones((CHANNELS + 1, 5))))


class TestFuse:
    def test_identities(self):
        u = tensor(np.random.default_rng(1).standard_normal((CHANNELS, 5)))
        assert_array_equal(fuse(u, tensor(np.ones((CHANNELS, 5)))).data, u.data)
        assert_array_equal(fuse(u, tensor(np.zeros((CHANNELS, 5)))).data, 0.0)

    def test_commutes(self):
        rng = np.random.default_rng(2)
        a, b = tensor(rng.standard_normal((CHANNELS, 5))), tensor(rng.standard_normal((CHANNELS, 5)))
        assert_array_equal(fuse(a, b).data, fuse(b, a).data)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fuse(tensor(np.ones((CHANNELS, 5))), tensor(np.ones((CHANNELS, 4))))


class TestClassifier:
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**16), t=st.integers(3, 12), use_gaze=st.booleans())
    def test_probabilities_sum_to_one(self, seed, t, use_gaze):
        rng = np.random.default_rng(seed)
        model = AttentionClassifier(config(use_gaze=use_gaze), CHANNELS)
        mask = features(rng, t) if use_gaze else None
        probs = model.predict_proba(features(rng, t), mask)
        assert probs.shape == (2,)
        assert np.all(probs > 0.0)
        assert abs(probs.sum() - 1.0) <= 1e-12

    def test_mask_features_must_match_model(self):
        rng = np.random.default_rng(0)
        x = features(rng)
        with pytest.raises(ValueError):
            AttentionClassifier(config(use_gaze=True), CHANNELS).predict_proba(x)
        with pytest.raises(ValueError):
            AttentionClassifier(config(use_gaze=False), CHANNELS).predict_proba(x, x)

    def test_time_permutation_with_pointwise_conv(self):
        rng = np.random.default_rng(3)
        model = AttentionClassifier(config(use_gaze=True, kernel_size=1), CHANNELS)
        x, m = features(rng, 9), features(rng, 9)
        perm = rng.permutation(9)
        assert_allclose(model.predict_proba(x, m), model.predict_proba(x[:, perm], m[:, perm]),
                        rtol=0, atol=1e-12)

    def test_swapping_head_rows_swaps_classes(self):
        rng = np.random.default_rng(4)
        model = AttentionClassifier(config(), CHANNELS)
        x = features(rng)
        before = model.predict_proba(x)
        model.head.weight.data = model.head.weight.data[::-1].copy()
        model.head.bias.data = model.head.bias.data[::-1].copy()
        assert_allclose(model.predict_proba(x), before[::-1], rtol=0, atol=1e-12)

    def test_m1_and_m2_share_video_path_initialization(self):
        m1 = AttentionClassifier(config(use_gaze=False), CHANNELS)
        m2 = AttentionClassifier(config(use_gaze=True), CHANNELS)
        assert_array_equal(m1.video_block.conv.weight.data, m2.video_block.conv.weight.data)
        assert_array_equal(m1.head.weight.data, m2.head.weight.data)
        assert len(m2.parameters()) > len(m1.parameters())

    @pytest.mark.parametrize("seed", range(INSTANCES))
    @pytest.mark.parametrize("use_gaze", [False, True])
    def test_gradients(self, use_gaze, seed):
        rng = np.random.default_rng(seed)
        label = int(rng.integers(0, 2))
        model = AttentionClassifier(config(use_gaze=use_gaze, seed=seed), CHANNELS)
        x = Tensor(features(rng), requires_grad=True)
        m = Tensor(features(rng), requires_grad=True) if use_gaze else None
        targets = model.parameters() + [x] + ([m] if use_gaze else [])
        errors = check_gradients(lambda: cross_entropy(model(x, m), label), targets)
        assert max(errors.values()) < 1e-4, errors

    def test_classify_builds_prediction(self):
        model = AttentionClassifier(config(), CHANNELS)
        pred = classify(model, "c7", features(np.random.default_rng(6)), 1)
        assert pred.clip_id == "c7"
        assert pred.true_label == 1
        assert pred.predicted == int(pred.probs[1] > pred.probs[0])


class TestStratifiedSplit:
    LABELS = {f"c{i:02d}": int(i < 6) for i in range(16)}

    def test_per_class_counts_and_partition(self):
        train, test = stratified_split(self.LABELS, 0.25, seed=0)
        assert sorted(train + test) == sorted(self.LABELS)
        assert not set(train) & set(test)
        assert sum(self.LABELS[c] for c in test) == 2       # round(6 * 0.25)
        assert sum(1 - self.LABELS[c] for c in test) == 3   # round(10 * 0.25)
        assert train == sorted(train) and test == sorted(test)

    def test_is_seeded(self):
        assert stratified_split(self.LABELS, 0.3, 4) == stratified_split(self.LABELS, 0.3, 4)
        splits = {tuple(stratified_split(self.LABELS, 0.3, s)[1]) for s in range(6)}
        assert len(splits) > 1

    def test_single_clip_class_is_an_error(self):
        with pytest.raises(DatasetError, match="single class"):
            stratified_split({"a": 0, "b": 1, "c": 1, "d": 1}, 0.5, 0)

    def test_single_class_dataset_is_an_error(self):
        with pytest.raises(DatasetError):
            stratified_split({"a": 1, "b": 1, "c": 1}, 0.5, 0)


class TestTraining:
    @pytest.mark.parametrize("use_gaze", [False, True])
    def test_loss_falls_and_predictions_cover_test_split(self, use_gaze):
        items = labelled_items()
        cfg = config(use_gaze=use_gaze, epochs=20, lr=0.01, test_fraction=0.25)
        run = train_classifier(items, cfg, progress=False)
        assert run.final_loss < run.initial_loss
        assert len(run.epoch_losses) == 20
        assert [p.clip_id for p in run.predictions] == run.test_ids
        assert not set(run.train_ids) & set(run.test_ids)

    def test_same_seed_same_run(self):
        cfg = config(use_gaze=True, epochs=3)
        first = train_classifier(labelled_items(), cfg, progress=False)
        second = train_classifier(labelled_items(), cfg, progress=False)
        assert first.epoch_losses == second.epoch_losses
        assert [p.probs for p in first.predictions] == [p.probs for p in second.predictions]

    def test_gaze_model_needs_mask_features(self):
        with pytest.raises(DatasetError, match="mask"):
            train_classifier(labelled_items(with_mask=False), config(use_gaze=True, epochs=1), progress=False)

    def test_needs_features(self):
        with pytest.raises(DatasetError):
            train_classifier([], config(), progress=False)

    def test_checkpoint_round_trip(self):
        run = train_classifier(labelled_items(), config(use_gaze=True, epochs=1), progress=False)
        checkpoint = decode_checkpoint(encode_checkpoint(run.to_checkpoint()))
        assert checkpoint.metadata["model"] == "M2"
        model = load_classifier(checkpoint)
        item = labelled_items()[0]
        assert_array_equal(model.predict_proba(item.video, item.mask),
                           run.model.predict_proba(item.video, item.mask))

    def test_rejects_autoencoder_checkpoint(self):
        checkpoint = train_classifier(labelled_items(), config(epochs=0), progress=False).to_checkpoint()
        checkpoint.metadata["kind"] = "autoencoder"
        with pytest.raises(CheckpointError):
            load_classifier(checkpoint)
