#!/usr/bin/env python3
"""
Gaze-Guided Outcome Toolkit

Gaze-derived visual masks, autoencoder features, squeeze-and-excitation
fusion attention and binary outcome classification, with evaluation and
trust reports.

Usage:
    python main.py <subcommand> [options]

Example:
    python main.py synth --out data --clips 120 --seed 1
    python main.py mask --data data --out masks
    python main.py train-ae --data data --out runs/ae.gzgd
    python main.py train-cls --data data --ae runs/ae.gzgd --out runs/m1/cls.gzgd
    python main.py train-cls --data data --ae runs/ae.gzgd --out runs/m2/cls.gzgd --use-gaze --masks masks
    python main.py eval --preds runs/m2/preds.csv --report runs/m2/report.json --plot runs/m2/roc.svg
    python main.py trust --preds runs/m2/preds.csv --report runs/m2/trust.json

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src import __version__
from src.constants import CLASS_NAMES, get_class_name
from src.constants import defaults as D
from src.constants.formats import MANIFEST_FILENAME
from src.errors import EXIT_DATA, EXIT_OK, EXIT_USAGE, DatasetError, GazeGuideError, UsageError
from src.exporters import (
    XLSX_AVAILABLE,
    JsonExporter,
    density_plot,
    pr_plot,
    read_json,
    roc_plot,
    save_previews,
    write_comparison,
    write_curve,
    write_density,
    write_loss_curve,
    write_predictions,
)
from src.extractors import FeatureExtractor, MaskExtractor, mask_stack
from src.metrics import evaluate, trust_report
from src.models import (
    AEConfig,
    ClassifierConfig,
    EvalReport,
    MaskConfig,
    RunManifest,
    SynthConfig,
    TrustConfig,
)
from src.models.reports import EVAL_METRIC_KEYS
from src.networks import load_autoencoder, train_autoencoder, train_classifier
from src.parsers import (
    CheckpointParser,
    DatasetParser,
    load_checkpoint,
    load_clip,
    load_predictions,
    save_checkpoint,
    save_mask_sequence,
)
from src.synth import describe, discriminability, generate
from src.utils import hash_paths, resolve_seed, sha256_path

if XLSX_AVAILABLE:
    from src.exporters import XlsxExporter

logger = logging.getLogger("gazeguide")

MASK_MODE_FLAGS = {"per-frame": D.MASK_MODE_PER_FRAME, "combined": D.MASK_MODE_COMBINED}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n\n{self.format_usage()}")


def print_header(title: str) -> None:
    """Print application header."""
    print("=" * 60)
    print("  Gaze-Guided Outcome Toolkit")
    print(f"  {title}")
    print("=" * 60)
    print()


def step(args, index: int, total: int, text: str) -> None:
    if not args.quiet:
        print(f"[{index}/{total}] {text}")


def detail(args, text: str) -> None:
    if not args.quiet:
        print(f"       {text}")


def make_config(cls, **kwargs):
    """Build a config, reporting invalid flag values as usage errors."""
    try:
        return cls(**{k: v for k, v in kwargs.items() if v is not None})
    except ValueError as e:
        raise UsageError(str(e))


def manifest_location(output: Path) -> Path:
    """DIR/manifest.json for directory outputs, <stem>.manifest.json beside file outputs."""
    if output.is_dir():
        return output / MANIFEST_FILENAME
    return output.parent / f"{output.stem}.{MANIFEST_FILENAME}"


def write_manifest(args, config: Dict[str, Any], seed: Optional[int],
                   inputs: Sequence[Path], outputs: Sequence[Path], anchor: Path) -> Path:
    manifest = RunManifest(
        subcommand=args.command,
        argv=list(args.argv),
        config=config,
        seed=seed,
        inputs=hash_paths(inputs),
        outputs=hash_paths(outputs),
        tool_version=__version__,
    )
    location = manifest_location(anchor)
    return JsonExporter(location.parent).export_manifest(manifest, location.name)


def progress_enabled(args) -> bool:
    return not args.quiet and sys.stderr.isatty()


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_synth(args) -> int:
    seed = resolve_seed(args.seed)
    ratio = D.SYNTH_CLINICAL_RATIO if args.ratio == "clinical" else float(args.ratio)
    height, width = args.size
    cfg = make_config(
        SynthConfig, clips=args.clips, frames=args.frames, height=height, width=width, ratio=ratio,
        gaze_jitter=args.jitter, missing_rate=args.missing, distractors=args.distractors,
        noise=args.noise, seed=seed, workers=args.workers,
    )
    out = Path(args.out)
    total = 3 if args.oracle else 2

    step(args, 1, total, "Rendering synthetic clips...")
    labels = generate(cfg, out, progress=progress_enabled(args))
    positives = sum(labels.values())
    detail(args, f"Wrote {len(labels)} clips ({positives} successful, {len(labels) - positives} unsuccessful)")

    if args.oracle:
        step(args, 2, total, "Checking gaze discriminability...")
        scores = discriminability(DatasetParser(out).load_all(), cfg.patch)
        detail(args, f"Gaze patch accuracy: {scores['gaze_patch_accuracy']:.3f}")
        detail(args, f"Full frame accuracy: {scores['full_frame_accuracy']:.3f}")

    step(args, total, total, "Writing manifest...")
    write_manifest(args, cfg.to_dict(), seed, [], [out], out)
    return EXIT_OK


def cmd_describe(args) -> int:
    root = Path(args.data)
    step(args, 1, 1, "Reading dataset...")
    summary = describe(root)
    data = summary.to_dict()
    if args.oracle:
        data.update(discriminability(DatasetParser(root).load_all(), args.patch))
    for key, value in data.items():
        print(f"  {key}: {value}")
    if args.json:
        path = Path(args.json)
        JsonExporter(path.parent).export_summary(data, path.name, "dataset_summary")
        write_manifest(args, {'oracle': args.oracle, 'patch': args.patch}, None, [root], [path], path)
    return EXIT_OK


def _mask_config(args, height: int) -> MaskConfig:
    overrides = dict(alpha=args.alpha, beta=args.beta, sigma=args.sigma, kernel_radius=args.kernel_radius,
                     kappa=args.kappa, mode=MASK_MODE_FLAGS[args.mode], interpolate=not args.no_interp)
    try:
        return MaskConfig.for_frame_size(height, **{k: v for k, v in overrides.items() if v is not None})
    except ValueError as e:
        raise UsageError(str(e))


def _write_clip_masks(args, clip, out_dir: Path) -> MaskConfig:
    cfg = _mask_config(args, clip.height)
    extractor = MaskExtractor(cfg)
    stack = mask_stack(extractor.extract(clip))
    save_mask_sequence(out_dir, stack)
    if args.preview:
        masked = extractor.apply(clip, stack).frames
        save_previews(out_dir, clip.frames, stack, masked, every=args.preview_every)
    return cfg


def cmd_mask(args) -> int:
    out = Path(args.out)
    cfg = None
    if args.clip:
        source = Path(args.clip)
        step(args, 1, 2, f"Building masks for {source.name}...")
        clip = load_clip(source)
        cfg = _write_clip_masks(args, clip, out)
        detail(args, f"{clip.num_frames} masks, {clip.gaze.missing_count} frames without gaze")
    else:
        source = Path(args.data)
        dataset = DatasetParser(source)
        step(args, 1, 2, f"Building masks for {len(dataset.clip_ids)} clips...")
        for clip_id in dataset.clip_ids:
            clip = dataset.load_clip(clip_id)
            cfg = _write_clip_masks(args, clip, out / clip_id)
        if cfg is None:
            raise DatasetError(f"{source}: no clips to mask")
        detail(args, f"Masks written to {out}")

    step(args, 2, 2, "Writing manifest...")
    write_manifest(args, cfg.to_dict(), None, [source], [out], out)
    return EXIT_OK


def cmd_train_ae(args) -> int:
    seed = resolve_seed(args.seed)
    cfg = make_config(
        AEConfig, latent_dim=args.latent, epochs=args.epochs, batch=args.batch, lr=args.lr,
        dropout=args.dropout, perceptual_layer=args.perceptual_layer, frame_stride=args.frame_stride,
        upsample=args.upsample, dtype=args.dtype, seed=seed,
    )
    data, out = Path(args.data), Path(args.out)
    loss_csv = Path(args.loss_csv) if args.loss_csv else out.with_name(f"{out.stem}_loss.csv")

    step(args, 1, 3, "Loading dataset...")
    clips = DatasetParser(data).load_all(with_gaze=False)
    detail(args, f"{len(clips)} clips")

    step(args, 2, 3, f"Training autoencoder ({cfg.epochs} epochs)...")
    result = train_autoencoder(clips, cfg, progress=progress_enabled(args))
    detail(args, f"Loss {result.initial_loss:.5f} -> {result.final_loss:.5f} on {result.samples} frames")

    step(args, 3, 3, "Saving checkpoint...")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(out, result.to_checkpoint())
    write_loss_curve(loss_csv, result.epoch_losses, result.initial_loss)
    write_manifest(args, cfg.to_dict(), seed, [data], [out, loss_csv], out)
    detail(args, f"Saved {out}")
    return EXIT_OK


def cmd_train_cls(args) -> int:
    seed = resolve_seed(args.seed)
    cfg = make_config(
        ClassifierConfig, se_reduction=args.se_reduction, epochs=args.epochs, lr=args.lr,
        use_gaze=args.use_gaze, mask_source=args.mask_source, test_fraction=args.test_fraction,
        dtype=args.dtype, seed=seed,
    )
    data, ae_path, out = Path(args.data), Path(args.ae), Path(args.out)
    preds_path = Path(args.preds) if args.preds else out.with_name("preds.csv")
    if args.masks and not args.use_gaze:
        raise UsageError("--masks only applies with --use-gaze")

    step(args, 1, 4, "Loading dataset and autoencoder...")
    clips = DatasetParser(data).load_all(with_gaze=args.use_gaze and not args.masks)
    autoencoder = load_autoencoder(load_checkpoint(ae_path))
    detail(args, f"{len(clips)} clips, latent size {autoencoder.cfg.latent_dim}")

    step(args, 2, 4, "Encoding clips...")
    mask_cfg = _mask_config(args, clips[0].height) if args.use_gaze and not args.masks else None
    extractor = FeatureExtractor(autoencoder, cfg, mask_cfg=mask_cfg, masks_dir=args.masks, workers=args.workers)
    features = extractor.extract_all(clips, progress=progress_enabled(args))

    step(args, 3, 4, f"Training classifier {cfg.model_name} ({cfg.epochs} epochs)...")
    run = train_classifier(features, cfg, progress=progress_enabled(args))
    correct = sum(p.correct for p in run.predictions)
    detail(args, f"Loss {run.initial_loss:.5f} -> {run.final_loss:.5f}")
    detail(args, f"Test accuracy {correct}/{len(run.predictions)}")

    step(args, 4, 4, "Saving checkpoint and predictions...")
    out.parent.mkdir(parents=True, exist_ok=True)
    checkpoint = run.to_checkpoint()
    checkpoint.metadata['autoencoder_sha256'] = sha256_path(ae_path)
    save_checkpoint(out, checkpoint)
    write_predictions(preds_path, run.predictions)
    config = {'classifier': cfg.to_dict(), 'mask': mask_cfg.to_dict() if mask_cfg else None}
    inputs = [data, ae_path] + ([Path(args.masks)] if args.masks else [])
    write_manifest(args, config, seed, inputs, [out, preds_path], out)
    detail(args, f"Saved {out} and {preds_path}")
    return EXIT_OK


def print_metrics(report: EvalReport) -> None:
    percents = report.as_percent_row()
    for key in EVAL_METRIC_KEYS:
        print(f"  {key:<12s} {percents[key]:6.1f}")
    print(f"  {'n':<12s} {report.n:6d}")


def cmd_eval(args) -> int:
    preds_path, report_path = Path(args.preds), Path(args.report)
    step(args, 1, 2, "Computing metrics...")
    preds = load_predictions(preds_path)
    report = evaluate(preds)
    if not args.quiet:
        print_metrics(report)

    step(args, 2, 2, "Writing report...")
    outputs = [JsonExporter(report_path.parent).export_eval_report(report, report_path.name)]
    name = args.name or preds_path.parent.name or "model"
    if args.plot:
        outputs.append(roc_plot([(name, report.roc_points)]).save(args.plot))
        outputs.append(write_curve(Path(args.plot).with_suffix(".csv"), report.roc_points, "fpr", "tpr"))
    if args.plot_pr:
        outputs.append(pr_plot([(name, report.pr_points)]).save(args.plot_pr))
        outputs.append(write_curve(Path(args.plot_pr).with_suffix(".csv"), report.pr_points, "recall", "precision"))
    if args.xlsx:
        outputs.extend(_eval_workbook(args, name, report, preds))
    write_manifest(args, {'name': name}, None, [preds_path], outputs, report_path)
    return EXIT_OK


def _eval_workbook(args, name, report, preds) -> List[Path]:
    if not XLSX_AVAILABLE:
        logger.warning("openpyxl not installed, skipping %s", args.xlsx)
        return []
    path = Path(args.xlsx)
    exporter = XlsxExporter(path.parent)
    exporter.export_metrics({name: report})
    exporter.export_curves(name, report)
    exporter.export_predictions(name, preds)
    return [exporter.save(path.name)]


def cmd_trust(args) -> int:
    cfg = make_config(TrustConfig, alpha=args.alpha, beta=args.beta, grid_size=args.grid,
                      uniform_prior=args.uniform_prior)
    preds_path, report_path = Path(args.preds), Path(args.report)
    step(args, 1, 2, "Computing trust...")
    report = trust_report(load_predictions(preds_path), cfg)
    if not args.quiet:
        for z in sorted(report.per_class):
            ct = report.per_class[z]
            print(f"  T({get_class_name(z)}) = {ct.spectrum:.4f}  (n={ct.n}, P={ct.prior:.3f})")
        flag = "high" if report.high_trust else "below threshold"
        print(f"  NTS = {report.nts:.4f}  ({flag}, threshold {D.TRUST_HIGH_NTS})")

    step(args, 2, 2, "Writing report...")
    outputs = [JsonExporter(report_path.parent).export_trust_report(report, report_path.name)]
    if args.density_csv:
        outputs.append(write_density(args.density_csv, report))
    if args.plot:
        outputs.append(density_plot(report).save(args.plot))
    if args.xlsx:
        if XLSX_AVAILABLE:
            path = Path(args.xlsx)
            exporter = XlsxExporter(path.parent)
            exporter.export_trust({args.name or preds_path.parent.name or "model": report})
            outputs.append(exporter.save(path.name))
        else:
            logger.warning("openpyxl not installed, skipping %s", args.xlsx)
    write_manifest(args, cfg.to_dict(), None, [preds_path], outputs, report_path)
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.reports) != len(args.names):
        raise UsageError("--reports and --names need the same number of values")
    if args.trust and len(args.trust) != len(args.reports):
        raise UsageError("--trust needs one report per model")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    step(args, 1, 2, "Reading reports...")
    reports = {name: EvalReport.from_dict(read_json(path)) for name, path in zip(args.names, args.reports)}
    trust = {name: read_json(path) for name, path in zip(args.names, args.trust or [])}

    header = ["model"] + list(EVAL_METRIC_KEYS) + ["n"]
    if trust:
        header += ["nts"] + [f"trust_{CLASS_NAMES[z]}" for z in sorted(CLASS_NAMES)]
    rows = []
    for name, report in reports.items():
        percents = report.as_percent_row()
        row = [name] + [percents[k] for k in EVAL_METRIC_KEYS] + [report.n]
        if trust:
            per_class = trust[name]['per_class']
            row += [round(trust[name]['nts'], 3)] + [round(per_class[str(z)]['qz_mean'], 3) for z in sorted(CLASS_NAMES)]
        rows.append(row)
    if not args.quiet:
        print("  " + "  ".join(f"{h:>11s}" for h in header))
        for row in rows:
            print("  " + "  ".join(f"{v:>11}" for v in row))

    step(args, 2, 2, "Writing comparison...")
    outputs = [write_comparison(out / "comparison.csv", header, rows)]
    if args.xlsx:
        if XLSX_AVAILABLE:
            exporter = XlsxExporter(out)
            exporter.export_metrics(reports)
            if trust:
                exporter.export_table("Trust", header[:1] + header[-3:], [r[:1] + r[-3:] for r in rows])
            outputs.append(exporter.save("comparison.xlsx"))
        else:
            logger.warning("openpyxl not installed, skipping comparison.xlsx")
    inputs = [Path(p) for p in args.reports + (args.trust or [])]
    write_manifest(args, {'names': args.names}, None, inputs, outputs, out)
    return EXIT_OK


def cmd_inspect(args) -> int:
    parser = CheckpointParser(args.checkpoint)
    parser.parse()
    print(parser.dump_info())
    return EXIT_OK


def cmd_replay(args) -> int:
    manifest = RunManifest.from_dict(read_json(args.manifest))
    argv = list(manifest.argv)
    if manifest.seed is not None and "--seed" not in argv:
        argv += ["--seed", str(manifest.seed)]
    if manifest.tool_version and manifest.tool_version != __version__:
        logger.warning("manifest was written by version %s, running %s", manifest.tool_version, __version__)
    print(f"Replaying: {' '.join(argv)}")
    print()
    return dispatch(argv)


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def _common(sub) -> None:
    sub.add_argument("-v", "--verbose", action="store_true", help="debug logging and tracebacks")
    sub.add_argument("-q", "--quiet", action="store_true", help="no step output or progress bars")


def _seed(sub) -> None:
    sub.add_argument("--seed", type=int, default=None, help="run seed (default: $GZGD_SEED, then 0)")


def _mask_flags(sub) -> None:
    sub.add_argument("--alpha", type=float, help=f"decay base (default {D.MASK_ALPHA})")
    sub.add_argument("--beta", type=float, help=f"decay floor (default {D.MASK_BETA})")
    sub.add_argument("--sigma", type=float, help="smoothing sigma in pixels (default H/32)")
    sub.add_argument("--kernel-radius", type=int, help="smoothing kernel radius (default ceil(3 sigma))")
    sub.add_argument("--kappa", type=int, help=f"quantization scale (default {D.MASK_KAPPA})")
    sub.add_argument("--mode", choices=sorted(MASK_MODE_FLAGS), default="per-frame")
    sub.add_argument("--no-interp", action="store_true",
                     help="do not interpolate missing gaze; such frames use the combined-clip mask")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="main.py",
        description="Gaze-guided attention toolkit: masks, autoencoder, SE fusion classifier, metrics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="<subcommand>", required=True)

    p = subs.add_parser("synth", help="generate a synthetic clip + gaze dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--clips", type=int, default=D.SYNTH_CLIPS)
    p.add_argument("--frames", type=int, default=D.SYNTH_FRAMES)
    p.add_argument("--size", type=int, nargs=2, metavar=("H", "W"), default=(D.SYNTH_SIZE, D.SYNTH_SIZE))
    p.add_argument("--ratio", default=str(D.SYNTH_RATIO), help="successful fraction, or 'clinical' for 325:129")
    p.add_argument("--missing", type=float, default=D.SYNTH_MISSING_RATE)
    p.add_argument("--jitter", type=float, default=D.SYNTH_GAZE_JITTER)
    p.add_argument("--distractors", type=int, default=D.SYNTH_DISTRACTORS)
    p.add_argument("--noise", type=float, default=D.SYNTH_NOISE)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--oracle", action="store_true", help="report gaze-patch vs full-frame separability")
    _seed(p)
    _common(p)
    p.set_defaults(handler=cmd_synth)

    p = subs.add_parser("describe", help="summarize a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--patch", type=int, default=D.SYNTH_PATCH)
    p.add_argument("--json")
    _common(p)
    p.set_defaults(handler=cmd_describe)

    p = subs.add_parser("mask", help="build visual masks from gaze")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--clip", help="one clip directory")
    source.add_argument("--data", help="dataset root (masks for every clip)")
    p.add_argument("--out", required=True)
    _mask_flags(p)
    p.add_argument("--preview", action="store_true", help="also write PNG previews")
    p.add_argument("--preview-every", type=int, default=1)
    _common(p)
    p.set_defaults(handler=cmd_mask)

    p = subs.add_parser("train-ae", help="train the autoencoder")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=D.AE_EPOCHS)
    p.add_argument("--batch", type=int, default=D.AE_BATCH)
    p.add_argument("--lr", type=float, default=D.AE_LR)
    p.add_argument("--latent", type=int, default=D.AE_LATENT_DIM)
    p.add_argument("--dropout", type=float, default=D.AE_DROPOUT)
    p.add_argument("--perceptual-layer", type=int, default=D.AE_PERCEPTUAL_LAYER)
    p.add_argument("--frame-stride", type=int, default=D.AE_FRAME_STRIDE)
    p.add_argument("--upsample", choices=D.AE_UPSAMPLE_MODES, default="nearest")
    p.add_argument("--dtype", choices=("float32", "float64"), default="float32")
    p.add_argument("--loss-csv", help="loss curve CSV (default <out>_loss.csv)")
    _seed(p)
    _common(p)
    p.set_defaults(handler=cmd_train_ae)

    p = subs.add_parser("train-cls", help="train the attention classifier (M1, or M2 with --use-gaze)")
    p.add_argument("--data", required=True)
    p.add_argument("--ae", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--use-gaze", action="store_true")
    p.add_argument("--masks", help="precomputed mask root from the mask subcommand")
    p.add_argument("--mask-source", choices=D.MASK_SOURCES, default="mask")
    p.add_argument("--epochs", type=int, default=D.CLS_EPOCHS)
    p.add_argument("--lr", type=float, default=D.CLS_LR)
    p.add_argument("--se-reduction", type=int, default=D.CLS_SE_REDUCTION)
    p.add_argument("--test-fraction", type=float, default=D.CLS_TEST_FRACTION)
    p.add_argument("--dtype", choices=("float32", "float64"), default="float32")
    p.add_argument("--preds", help="predictions CSV (default preds.csv beside --out)")
    p.add_argument("--workers", type=int, default=1)
    _mask_flags(p)
    _seed(p)
    _common(p)
    p.set_defaults(handler=cmd_train_cls)

    p = subs.add_parser("eval", help="metrics and ROC/PR curves for a predictions CSV")
    p.add_argument("--preds", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--plot", help="ROC curve SVG")
    p.add_argument("--plot-pr", help="PR curve SVG")
    p.add_argument("--xlsx", help="workbook with metrics, curves and predictions")
    p.add_argument("--name", help="model name for plots and sheets")
    _common(p)
    p.set_defaults(handler=cmd_eval)

    p = subs.add_parser("trust", help="trust spectrum and NetTrustScore")
    p.add_argument("--preds", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--density-csv")
    p.add_argument("--plot", help="density SVG")
    p.add_argument("--xlsx")
    p.add_argument("--name")
    p.add_argument("--uniform-prior", action="store_true")
    p.add_argument("--alpha", type=float, default=D.TRUST_ALPHA)
    p.add_argument("--beta", type=float, default=D.TRUST_BETA)
    p.add_argument("--grid", type=int, default=D.TRUST_GRID_SIZE)
    _common(p)
    p.set_defaults(handler=cmd_trust)

    p = subs.add_parser("compare", help="side-by-side table of several eval reports")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--names", nargs="+", required=True)
    p.add_argument("--trust", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--xlsx", action="store_true")
    _common(p)
    p.set_defaults(handler=cmd_compare)

    p = subs.add_parser("inspect", help="print a checkpoint summary")
    p.add_argument("checkpoint")
    _common(p)
    p.set_defaults(handler=cmd_inspect)

    p = subs.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("--manifest", required=True)
    _common(p)
    p.set_defaults(handler=cmd_replay)

    return parser


def configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE
    args.argv = argv

    configure_logging(args)
    if not args.quiet and args.command != "replay":
        print_header(args.command)
    try:
        return args.handler(args)
    except GazeGuideError as e:
        if args.verbose:
            traceback.print_exc()
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        if args.verbose:
            traceback.print_exc()
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
