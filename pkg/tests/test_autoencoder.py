import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy.signal import correlate2d

from src.engine import Tensor, check_gradients, tensor
from src.errors import CheckpointError, DatasetError
from src.extractors import encode_frames
from src.models import AEConfig
from src.networks import (
    Autoencoder,
    PerceptualNet,
    ae_total_loss,
    load_autoencoder,
    mse_loss,
    perceptual_loss,
    train_autoencoder,
)
from src.networks.perceptual import STRIDES
from src.parsers.checkpoint_parser import decode_checkpoint, encode_checkpoint

from .conftest import GRADCHECK_INSTANCES as INSTANCES


def tiny_ae_config(**overrides):
    settings = dict(latent_dim=3, channels=(1, 2, 2), epochs=2, batch=4, dropout=0.0,
                    dtype="float64", seed=5)
    settings.update(overrides)
    return AEConfig(**settings)


def direct_features(x, phi, layer):
    """Perceptual features of one (1, H, W) image, computed channel by channel."""
    h = x
    for w, b, stride in zip(phi.weights[:layer], phi.biases[:layer], STRIDES):
        out = np.stack([
            sum(correlate2d(h[c], w[o, c], mode="same") for c in range(h.shape[0])) + b[o]
            for o in range(w.shape[0])
        ])
        h = np.maximum(out[:, ::stride, ::stride], 0.0)
    return h


class TestLosses:
    def test_mse_examples(self):
        x = tensor(np.zeros((1, 1, 1, 2)))
        y = tensor(np.ones((1, 1, 1, 2)))
        assert mse_loss(x, y).item() == pytest.approx(2.0)
        doubled = mse_loss(tensor(np.zeros((2, 1, 1, 2))), tensor(np.ones((2, 1, 1, 2))))
        assert doubled.item() == pytest.approx(2.0)

    def test_mse_shape_mismatch(self):
        with pytest.raises(ValueError):
            mse_loss(tensor(np.zeros((1, 1, 2, 2))), tensor(np.zeros((1, 1, 2, 3))))

    def test_perceptual_is_zero_on_identical_inputs(self):
        phi = PerceptualNet(seed=1)
        x = tensor(np.random.default_rng(0).random((2, 1, 8, 8)))
        assert perceptual_loss(x, x, phi, 2).item() == 0.0

    @pytest.mark.parametrize("layer", [1, 2, 3])
    def test_perceptual_matches_direct_computation(self, layer):
        phi = PerceptualNet(seed=2)
        rng = np.random.default_rng(layer)
        x, y = rng.random((2, 1, 8, 8)), rng.random((2, 1, 8, 8))
        fx = np.stack([direct_features(img, phi, layer) for img in x])
        fy = np.stack([direct_features(img, phi, layer) for img in y])
        expected = np.sum((fx - fy) ** 2) / fx.size
        value = perceptual_loss(tensor(x), tensor(y), phi, layer).item()
        assert value >= 0.0
        assert value == pytest.approx(expected, rel=1e-10)

    def test_perceptual_layer_bounds(self):
        phi = PerceptualNet(seed=0)
        x = tensor(np.zeros((1, 1, 8, 8)))
        for layer in (0, phi.depth + 1):
            with pytest.raises(ValueError):
                perceptual_loss(x, x, phi, layer)

    def test_total_is_sum_of_terms(self):
        phi = PerceptualNet(seed=3)
        rng = np.random.default_rng(3)
        x, y = tensor(rng.random((3, 1, 8, 8))), tensor(rng.random((3, 1, 8, 8)))
        total = ae_total_loss(x, y, phi, 2).item()
        assert total == pytest.approx(mse_loss(x, y).item() + perceptual_loss(x, y, phi, 2).item(), rel=1e-12)

    @pytest.mark.parametrize("seed", range(INSTANCES))
    def test_loss_gradients(self, seed):
        phi = PerceptualNet(seed=seed)
        model = Autoencoder(tiny_ae_config(seed=seed), 8, 8)
        x = Tensor(np.random.default_rng(seed).random((2, 1, 8, 8)))
        targets = model.parameters()
        errors = check_gradients(lambda: ae_total_loss(x, model(x), phi, 2), targets)
        assert max(errors.values()) < 1e-4, errors


class TestArchitecture:
    @pytest.mark.parametrize("upsample", ["nearest", "transpose"])
    def test_shapes_and_range(self, upsample):
        model = Autoencoder(tiny_ae_config(upsample=upsample, latent_dim=6), 16, 12).eval()
        x = Tensor(np.random.default_rng(0).random((3, 1, 16, 12)))
        assert model.encode(x).shape == (3, 6)
        out = model(x).data
        assert out.shape == (3, 1, 16, 12)
        assert np.all((out > 0.0) & (out < 1.0))

    def test_frame_size_must_divide(self):
        with pytest.raises(ValueError, match="divisible"):
            Autoencoder(tiny_ae_config(), 10, 8)

    def test_same_seed_same_weights(self):
        a, b = Autoencoder(tiny_ae_config(), 8, 8), Autoencoder(tiny_ae_config(), 8, 8)
        for (name, p), (_, q) in zip(a.named_parameters(), b.named_parameters()):
            assert_array_equal(p.data, q.data, err_msg=name)

    def test_perceptual_net_is_deterministic_and_read_only(self):
        phi = PerceptualNet(seed=9)
        assert phi.fingerprint() == PerceptualNet(seed=9).fingerprint()
        assert phi.fingerprint() != PerceptualNet(seed=10).fingerprint()
        with pytest.raises(ValueError):
            phi.weights[0][0, 0, 0, 0] = 1.0


class TestEncodeFrames:
    def test_one_latent_per_frame(self):
        model = Autoencoder(tiny_ae_config(latent_dim=4), 8, 8)
        frames = np.random.default_rng(1).integers(0, 256, size=(5, 8, 8), dtype=np.uint8)
        frames[3] = frames[1]
        features = encode_frames(frames, model)
        assert features.shape == (4, 5)
        assert_array_equal(features[:, 3], features[:, 1])

    def test_masks_share_the_frame_encoder(self):
        model = Autoencoder(tiny_ae_config(latent_dim=4), 8, 8)
        mask = np.zeros((2, 8, 8), dtype=np.uint8)
        mask[:, 2:5, 3:6] = 255
        direct = model.encode(Tensor(mask[:, None].astype(np.float64) / 255.0)).data
        assert_allclose(encode_frames(mask, model), direct.T)

    def test_frame_size_mismatch(self):
        model = Autoencoder(tiny_ae_config(), 8, 8)
        with pytest.raises(ValueError, match="encoder expects"):
            encode_frames(np.zeros((2, 8, 12), dtype=np.uint8), model)


class TestTraining:
    @pytest.mark.slow
    def test_loss_halves_and_phi_stays_frozen(self, tiny_clips):
        cfg = AEConfig(epochs=30, seed=0)
        fingerprint = PerceptualNet(cfg.seed, dtype=np.float32).fingerprint()
        result = train_autoencoder(tiny_clips, cfg, progress=False)
        assert result.samples == 8 * 4
        assert len(result.epoch_losses) == 30
        assert result.final_loss < 0.5 * result.initial_loss
        losses = [result.initial_loss] + result.epoch_losses
        steady = sum(b <= a for a, b in zip(losses, losses[1:]))
        assert steady >= 0.8 * (len(losses) - 1), losses
        assert result.phi.fingerprint() == fingerprint
        assert not result.model.training

    def test_same_seed_same_curve(self, tiny_clips):
        cfg = tiny_ae_config(channels=(1, 2, 4), latent_dim=4, dropout=0.5, batch=8)
        first = train_autoencoder(tiny_clips[:2], cfg, progress=False)
        second = train_autoencoder(tiny_clips[:2], cfg, progress=False)
        assert first.epoch_losses == second.epoch_losses
        assert first.final_loss == second.final_loss

    def test_needs_clips(self):
        with pytest.raises(DatasetError):
            train_autoencoder([], tiny_ae_config(), progress=False)

    def test_checkpoint_round_trip(self, tiny_clips):
        cfg = tiny_ae_config(channels=(1, 2, 4), latent_dim=4, epochs=1)
        result = train_autoencoder(tiny_clips[:1], cfg, progress=False)
        checkpoint = decode_checkpoint(encode_checkpoint(result.to_checkpoint()))
        model = load_autoencoder(checkpoint)
        x = Tensor(np.random.default_rng(0).random((2, 1, 32, 32)))
        assert_allclose(model(x).data, result.model(x).data, rtol=0, atol=0)
        assert checkpoint.metadata["loss_curve"] == result.epoch_losses

    def test_rejects_other_checkpoints(self, tiny_clips):
        cfg = tiny_ae_config(channels=(1, 2, 4), latent_dim=4, epochs=0)
        checkpoint = train_autoencoder(tiny_clips[:1], cfg, progress=False).to_checkpoint()
        checkpoint.metadata["kind"] = "classifier"
        with pytest.raises(CheckpointError):
            load_autoencoder(checkpoint)
