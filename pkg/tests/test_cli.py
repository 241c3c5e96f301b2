import json

import pytest

import main
from src import __version__
from src.errors import EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, NumericalError
from src.exporters import read_json
from src.parsers import load_checkpoint, load_mask_sequence, load_predictions
from src.utils import sha256_file


def run(*argv):
    return main.dispatch([str(a) for a in argv])


@pytest.fixture
def synth_root(tmp_path):
    root = tmp_path / "data"
    code = run("synth", "--out", root, "--clips", 10, "--frames", 6, "--size", 32, 32,
               "--distractors", 1, "--seed", 1, "-q")
    assert code == EXIT_OK
    return root


@pytest.fixture
def autoencoder(tmp_path, synth_root):
    out = tmp_path / "ae.gzgd"
    code = run("train-ae", "--data", synth_root, "--out", out, "--epochs", 1, "--batch", 16,
               "--latent", 8, "--seed", 2, "-q")
    assert code == EXIT_OK
    return out


class TestParsing:
    def test_help_and_version(self, capsys):
        assert run("--help") == EXIT_OK
        capsys.readouterr()
        assert run("--version") == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_unknown_subcommand(self, capsys):
        assert run("bogus") == EXIT_USAGE
        assert "Error" in capsys.readouterr().err

    def test_missing_required_flag(self):
        assert run("eval", "--preds", "p.csv") == EXIT_USAGE

    def test_invalid_config_value_is_usage_error(self, tmp_path):
        assert run("synth", "--out", tmp_path / "d", "--clips", 1, "-q") == EXIT_USAGE
        assert run("synth", "--out", tmp_path / "d", "--ratio", "2.0", "-q") == EXIT_USAGE


class TestManifestLocation:
    def test_directory_output(self, tmp_path):
        assert main.manifest_location(tmp_path) == tmp_path / "manifest.json"

    def test_file_output(self, tmp_path):
        assert main.manifest_location(tmp_path / "m2.gzgd") == tmp_path / "m2.manifest.json"


class TestExitCodes:
    def test_missing_dataset_is_data_error(self, tmp_path, capsys):
        assert run("describe", "--data", tmp_path / "nowhere", "-q") == EXIT_DATA
        assert "does not exist" in capsys.readouterr().err

    def test_bad_predictions_is_data_error(self, tmp_path):
        preds = tmp_path / "preds.csv"
        preds.write_text("clip_id,true,pred,p0,p1\nc0,1,1,0.7,0.7\n")
        assert run("eval", "--preds", preds, "--report", tmp_path / "r.json", "-q") == EXIT_DATA

    def test_wrong_checkpoint_kind_is_data_error(self, tmp_path, synth_root, autoencoder):
        code = run("train-cls", "--data", synth_root, "--ae", autoencoder, "--out", tmp_path / "x.gzgd",
                   "--epochs", 1, "-q")
        assert code == EXIT_OK
        code = run("train-cls", "--data", synth_root, "--ae", tmp_path / "x.gzgd", "--out", tmp_path / "y.gzgd",
                   "--epochs", 1, "-q")
        assert code == EXIT_DATA

    def test_numerical_error(self, tmp_path, synth_root, monkeypatch):
        def diverge(*args, **kwargs):
            raise NumericalError("autoencoder loss is not finite", {"epoch": 1, "step": 0})

        monkeypatch.setattr(main, "train_autoencoder", diverge)
        code = run("train-ae", "--data", synth_root, "--out", tmp_path / "ae.gzgd", "-q")
        assert code == EXIT_NUMERICAL

    def test_mask_dataset_without_clips_is_data_error(self, tmp_path):
        root = tmp_path / "empty"
        root.mkdir()
        (root / "labels.csv").write_text("clip_id,label\n")
        assert run("mask", "--data", root, "--out", tmp_path / "masks", "-q") == EXIT_DATA
        assert not (tmp_path / "masks" / "manifest.json").exists()

    def test_masks_need_gaze_model(self, tmp_path, synth_root, autoencoder):
        code = run("train-cls", "--data", synth_root, "--ae", autoencoder, "--out", tmp_path / "m.gzgd",
                   "--masks", tmp_path, "-q")
        assert code == EXIT_USAGE


class TestPipeline:
    def test_synth_and_describe(self, tmp_path, synth_root, capsys):
        manifest = read_json(synth_root / "manifest.json")
        assert manifest["subcommand"] == "synth"
        assert manifest["seed"] == 1
        assert manifest["config"]["clips"] == 10
        out = tmp_path / "summary.json"
        assert run("describe", "--data", synth_root, "--json", out) == EXIT_OK
        summary = read_json(out)
        assert summary["clips"] == 10
        assert summary["successful"] == 5
        assert (tmp_path / "summary.manifest.json").is_file()

    def test_mask_subcommand(self, tmp_path, synth_root):
        out = tmp_path / "masks"
        assert run("mask", "--clip", synth_root / "clip_0000", "--out", out, "--preview",
                   "--preview-every", 3, "-q") == EXIT_OK
        masks = load_mask_sequence(out)
        assert masks.shape == (6, 32, 32)
        assert sorted(p.name for p in out.glob("preview_*.png")) == ["preview_00000.png", "preview_00003.png"]
        assert read_json(out / "manifest.json")["config"]["sigma"] == pytest.approx(1.0)

    def test_gaze_model_with_precomputed_masks(self, tmp_path, synth_root, autoencoder):
        masks = tmp_path / "masks"
        assert run("mask", "--data", synth_root, "--out", masks, "--mode", "combined", "-q") == EXIT_OK
        out = tmp_path / "m2" / "model.gzgd"
        code = run("train-cls", "--data", synth_root, "--ae", autoencoder, "--out", out,
                   "--use-gaze", "--masks", masks, "--epochs", 1, "--seed", 3, "-q")
        assert code == EXIT_OK
        checkpoint = load_checkpoint(out)
        assert checkpoint.metadata["model"] == "M2"
        assert checkpoint.metadata["autoencoder_sha256"] == sha256_file(autoencoder)
        preds = load_predictions(tmp_path / "m2" / "preds.csv")
        assert [p.clip_id for p in preds] == checkpoint.metadata["test_ids"]

    def test_full_run(self, tmp_path, synth_root, autoencoder, capsys):
        reports, trusts = [], []
        for name, extra in (("m1", []), ("m2", ["--use-gaze"])):
            model_dir = tmp_path / name
            assert run("train-cls", "--data", synth_root, "--ae", autoencoder, "--out", model_dir / "model.gzgd",
                       "--epochs", 2, "--seed", 4, "-q", *extra) == EXIT_OK
            preds = model_dir / "preds.csv"
            report = model_dir / "report.json"
            trust = model_dir / "trust.json"
            assert run("eval", "--preds", preds, "--report", report, "--plot", model_dir / "roc.svg",
                       "--plot-pr", model_dir / "pr.svg", "--xlsx", model_dir / "eval.xlsx", "-q") == EXIT_OK
            assert run("trust", "--preds", preds, "--report", trust, "--density-csv", model_dir / "density.csv",
                       "--plot", model_dir / "density.svg", "-q") == EXIT_OK
            reports.append(report)
            trusts.append(trust)
            data = read_json(report)
            assert set(data) == {"accuracy", "mcc", "f1", "specificity", "sensitivity", "roc_auc", "pr_auc",
                                 "n", "curves"}
            assert (model_dir / "roc.csv").is_file() and (model_dir / "pr.csv").is_file()
            assert 0.0 <= read_json(trust)["nts"] <= 1.0

        out = tmp_path / "cmp"
        assert run("compare", "--reports", *reports, "--names", "M1", "M2", "--trust", *trusts,
                   "--out", out, "--xlsx", "-q") == EXIT_OK
        lines = (out / "comparison.csv").read_text().splitlines()
        assert lines[0].startswith("model,accuracy")
        assert [line.split(",")[0] for line in lines[1:]] == ["M1", "M2"]
        assert (out / "comparison.xlsx").is_file()

        capsys.readouterr()
        assert run("inspect", tmp_path / "m2" / "model.gzgd") == EXIT_OK
        assert "classifier" in capsys.readouterr().out

    def test_compare_needs_matching_names(self, tmp_path):
        assert run("compare", "--reports", "a.json", "b.json", "--names", "M1", "--out", tmp_path, "-q") == EXIT_USAGE


class TestReproducibility:
    def pipeline(self, out, synth_root, autoencoder):
        masks = out / "masks"
        assert run("mask", "--data", synth_root, "--out", masks, "-q") == EXIT_OK
        model = out / "model.gzgd"
        assert run("train-cls", "--data", synth_root, "--ae", autoencoder, "--out", model, "--use-gaze",
                   "--masks", masks, "--epochs", 2, "--seed", 6, "-q") == EXIT_OK
        assert run("eval", "--preds", out / "preds.csv", "--report", out / "report.json", "-q") == EXIT_OK
        assert run("trust", "--preds", out / "preds.csv", "--report", out / "trust.json", "-q") == EXIT_OK
        return out

    def test_same_seed_gives_identical_outputs(self, tmp_path, synth_root, autoencoder):
        first = self.pipeline(tmp_path / "a", synth_root, autoencoder)
        second = self.pipeline(tmp_path / "b", synth_root, autoencoder)
        mask_files = sorted(p.relative_to(first) for p in (first / "masks").rglob("mask_*.pgm"))
        assert mask_files
        assert mask_files == sorted(p.relative_to(second) for p in (second / "masks").rglob("mask_*.pgm"))
        for name in mask_files + ["model.gzgd", "preds.csv", "report.json", "trust.json"]:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

        manifests = [read_json(d / "model.manifest.json") for d in (first, second)]
        for manifest in manifests:
            manifest["metadata"].pop("generated")
            manifest.pop("argv")
            for key in ("inputs", "outputs"):
                manifest[key] = sorted(manifest[key].values())
        assert manifests[0] == manifests[1]


class TestReplay:
    def test_replay_reproduces_checkpoint(self, tmp_path, autoencoder):
        manifest_path = tmp_path / "ae.manifest.json"
        manifest = read_json(manifest_path)
        assert manifest["seed"] == 2
        recorded = manifest["outputs"][str(autoencoder)]
        autoencoder.unlink()
        assert run("replay", "--manifest", manifest_path) == EXIT_OK
        assert sha256_file(autoencoder) == recorded

    def test_replay_uses_recorded_seed(self, tmp_path, synth_root, monkeypatch):
        monkeypatch.setenv("GZGD_SEED", "99")
        manifest_path = synth_root / "manifest.json"
        data = read_json(manifest_path)
        at = data["argv"].index("--seed")
        del data["argv"][at:at + 2]
        manifest_path.write_text(json.dumps(data))
        before = (synth_root / "clip_0000" / "frame_00000.pgm").read_bytes()
        assert run("replay", "--manifest", manifest_path) == EXIT_OK
        assert (synth_root / "clip_0000" / "frame_00000.pgm").read_bytes() == before

    def test_missing_manifest(self, tmp_path):
        assert run("replay", "--manifest", tmp_path / "none.json") == EXIT_DATA
