import numpy as np
import pytest
from numpy.testing import assert_array_equal

from src.errors import CheckpointError, ClipLoadError, DataError, DatasetError
from src.parsers import (
    Checkpoint,
    CheckpointParser,
    DatasetParser,
    decode_checkpoint,
    encode_checkpoint,
    encode_pgm,
    load_checkpoint,
    load_clip,
    load_mask_sequence,
    load_predictions,
    read_pgm,
    save_checkpoint,
    save_clip_frames,
    save_mask_sequence,
    write_gaze_csv,
    write_pgm,
)

from .conftest import make_trace


def write_clip_dir(path, frames, coords=None):
    save_clip_frames(path, frames)
    coords = coords if coords is not None else [(1.0, 1.0)] * len(frames)
    write_gaze_csv(path / "gaze.csv", make_trace(path.name, coords))


def test_pgm_round_trip(tmp_path):
    pixels = np.arange(48, dtype=np.uint8).reshape(6, 8)
    write_pgm(tmp_path / "a.pgm", pixels)
    assert_array_equal(read_pgm(tmp_path / "a.pgm"), pixels)


def test_pgm_header_comments_are_skipped(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# made by hand\n2 1\n255\n\x07\x09")
    assert_array_equal(read_pgm(path), [[7, 9]])


@pytest.mark.parametrize("data, message", [
    (b"P5\n2 1\n65535\n\x00\x00\x00\x00", "maxval"),
    (b"P2\n2 1\n255\n\x00\x00", "not a binary PGM"),
    (b"P5\n2 2\n255\n\x00", "truncated"),
])
def test_pgm_rejects_bad_files(tmp_path, data, message):
    path = tmp_path / "bad.pgm"
    path.write_bytes(data)
    with pytest.raises(ClipLoadError, match=message):
        read_pgm(path)


def test_encode_pgm_requires_uint8():
    with pytest.raises(ValueError):
        encode_pgm(np.zeros((2, 2), dtype=np.float32))


def test_load_clip_shape(tmp_path):
    frames = np.random.default_rng(1).integers(0, 256, size=(10, 64, 64), dtype=np.uint8)
    write_clip_dir(tmp_path / "clip_a", frames)
    clip = load_clip(tmp_path / "clip_a")
    assert (clip.num_frames, clip.height, clip.width) == (10, 64, 64)
    assert_array_equal(clip.frames, frames)
    assert len(clip.gaze) == 10


def test_load_clip_gap_names_index(tmp_path):
    frames = np.zeros((10, 4, 4), dtype=np.uint8)
    write_clip_dir(tmp_path / "clip_a", frames)
    (tmp_path / "clip_a" / "frame_00003.pgm").unlink()
    with pytest.raises(ClipLoadError, match="missing frame index 3"):
        load_clip(tmp_path / "clip_a")


def test_load_clip_mixed_sizes(tmp_path):
    clip_dir = tmp_path / "clip_a"
    write_clip_dir(clip_dir, np.zeros((2, 4, 4), dtype=np.uint8))
    write_pgm(clip_dir / "frame_00001.pgm", np.zeros((4, 5), dtype=np.uint8))
    with pytest.raises(ClipLoadError, match="expected 4x4"):
        load_clip(clip_dir)


def test_load_clip_clamps_gaze(tmp_path):
    clip_dir = tmp_path / "clip_a"
    write_clip_dir(clip_dir, np.zeros((2, 8, 8), dtype=np.uint8), [(20.0, -1.0), None])
    clip = load_clip(clip_dir)
    assert clip.gaze[0].xy == (7.0, 0.0)


def test_mask_sequence_round_trip(tmp_path):
    masks = np.random.default_rng(2).integers(0, 256, size=(3, 5, 7), dtype=np.uint8)
    paths = save_mask_sequence(tmp_path / "m", masks)
    assert [p.name for p in paths] == ["mask_00000.pgm", "mask_00001.pgm", "mask_00002.pgm"]
    assert_array_equal(load_mask_sequence(tmp_path / "m"), masks)


def test_dataset_parser(tiny_dataset):
    dataset = DatasetParser(tiny_dataset)
    assert len(dataset.clip_ids) == 8
    clips = dataset.load_all()
    assert [c.clip_id for c in clips] == sorted(c.clip_id for c in clips)
    assert {c.label for c in clips} == {0, 1}


@pytest.mark.parametrize("labels, message", [
    ("clip_id,label\nclip_0000,2\n", "label must be 0 or 1"),
    ("clip_id,label\nclip_0000,1\nclip_0000,0\n", "duplicate"),
    ("id,label\n", "header"),
    ("clip_id,label\n", "no clips"),
])
def test_dataset_labels_errors(tmp_path, labels, message):
    (tmp_path / "labels.csv").write_text(labels)
    with pytest.raises(DatasetError, match=message):
        DatasetParser(tmp_path).parse()


def test_dataset_missing_root(tmp_path):
    with pytest.raises(DatasetError):
        DatasetParser(tmp_path / "nope").parse()


@pytest.mark.parametrize("dtype", [np.float32, np.float64])
def test_checkpoint_round_trip_is_bit_exact(tmp_path, dtype):
    rng = np.random.default_rng(5)
    entries = {
        "enc.w": rng.standard_normal((3, 2, 3, 3)).astype(dtype),
        "enc.b": rng.standard_normal(3).astype(dtype),
        "scalar": np.array(np.pi, dtype=dtype),
        "special": np.array([np.inf, -0.0, 1e-300 if dtype == np.float64 else 1e-30], dtype=dtype),
    }
    path = save_checkpoint(tmp_path / "a.gzgd", Checkpoint(entries, {"kind": "test", "loss": [1.5, 0.5]}))
    loaded = load_checkpoint(path)
    assert loaded.kind == "test"
    assert loaded.metadata["loss"] == [1.5, 0.5]
    assert list(loaded.entries) == list(entries)
    for name, array in entries.items():
        assert loaded[name].dtype == array.dtype
        assert loaded[name].shape == array.shape
        assert loaded[name].tobytes() == array.tobytes()


def test_checkpoint_rejects_unknown_version_and_magic():
    data = bytearray(encode_checkpoint(Checkpoint({"w": np.zeros(2)})))
    data[4] = 9
    with pytest.raises(CheckpointError, match="unsupported checkpoint version 9"):
        decode_checkpoint(bytes(data))
    with pytest.raises(CheckpointError, match="bad magic"):
        decode_checkpoint(b"ABCD" + bytes(data[4:]))


def test_checkpoint_truncation_and_trailing_bytes():
    data = encode_checkpoint(Checkpoint({"w": np.ones((4, 4))}))
    with pytest.raises(CheckpointError, match="truncated"):
        decode_checkpoint(data[:-3])
    with pytest.raises(CheckpointError, match="trailing"):
        decode_checkpoint(data + b"\x00")


def test_checkpoint_rejects_integer_tensors():
    with pytest.raises(CheckpointError):
        encode_checkpoint(Checkpoint({"w": np.zeros(2, dtype=np.int32)}))


def test_dump_info_lists_entries():
    parser = CheckpointParser(data=encode_checkpoint(Checkpoint({"w": np.zeros((2, 3))}, {"kind": "autoencoder"})))
    info = parser.dump_info()
    assert "Kind: autoencoder" in info
    assert "2x3" in info


def test_predictions_csv(tmp_path):
    path = tmp_path / "preds.csv"
    path.write_text("clip_id,true,pred,p0,p1\nclip_0001,1,1,0.25,0.75\nclip_0002,0,1,0.4,0.6\n")
    preds = load_predictions(path)
    assert [p.clip_id for p in preds] == ["clip_0001", "clip_0002"]
    assert preds[0].confidence == 0.75
    assert not preds[1].correct


def test_predictions_csv_rejects_bad_probs(tmp_path):
    path = tmp_path / "preds.csv"
    path.write_text("clip_id,true,pred,p0,p1\nclip_0001,1,1,0.5,0.6\n")
    with pytest.raises(DataError, match=":2:"):
        load_predictions(path)
