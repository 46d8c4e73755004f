"""`comb` command-line interface.

Subcommands: synth (corpus image + ground truth), detect (full pipeline to a
JSON report, optional SVG overlay), eval (report vs ground truth), compare
(per-variant segment counts), eval-corpus (directory convenience). All
outputs are deterministic byte-for-byte given identical inputs.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from .hough import Segment
from .metrics import corpus_report, match_segments
from .pipeline import PipelineConfig, compare_methods, detect_edges
from .raster import PnmParseError, binary_to_gray, load_pnm, save_pgm
from .render import svg_overlay
from .synth import CellGraph, SynthParams, generate


class CommandError(Exception):
    """User-facing validation failure; exits with status 2."""


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _read_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise CommandError(f"cannot read {what} {path}: {e}")
    except json.JSONDecodeError as e:
        raise CommandError(f"{what} {path} is not valid JSON: {e}")


def _load_image(path):
    try:
        return load_pnm(Path(path).read_bytes())
    except OSError as e:
        raise CommandError(f"cannot read input {path}: {e}")
    except PnmParseError as e:
        raise CommandError(f"cannot parse input {path}: {e}")


def _load_config(path, invert=False):
    if path is None:
        cfg = PipelineConfig()
        return PipelineConfig.from_dict({**cfg.to_dict(), "invert_input": invert or cfg.invert_input})
    raw = _read_json(path, "config")
    if not isinstance(raw, dict):
        raise CommandError(f"config {path} must be a JSON object")
    if invert:
        raw = {**raw, "invert_input": True}
    try:
        return PipelineConfig.from_dict(raw)
    except (ValueError, TypeError) as e:
        raise CommandError(f"bad config {path}: {e}")


def _load_truth(path):
    raw = _read_json(path, "ground truth")
    try:
        return CellGraph.from_json_dict(raw)
    except (ValueError, TypeError, KeyError) as e:
        raise CommandError(f"bad ground truth {path}: {e}")


def _load_report_segments(path):
    raw = _read_json(path, "report")
    if not isinstance(raw, dict) or "segments" not in raw:
        raise CommandError(f"report {path} missing 'segments'")
    try:
        return [Segment(int(a), int(b), int(c), int(d)) for a, b, c, d in raw["segments"]]
    except (TypeError, ValueError) as e:
        raise CommandError(f"report {path} has malformed segments: {e}")


def cmd_synth(args):
    try:
        params = SynthParams(
            cols=args.cols, rows=args.rows, cell_radius=args.cell,
            wall_thickness=args.thickness, jitter=args.jitter,
            noise_sigma=args.noise, gradient_strength=args.gradient,
            blur_sigma=args.blur, wall_intensity=args.wall,
            background_intensity=args.background, seed=args.seed,
        )
        img, graph = generate(params)
    except ValueError as e:
        raise CommandError(str(e))
    Path(args.out).write_bytes(save_pgm(img))
    _write_json(args.truth, graph.to_json_dict())
    return 0


def cmd_detect(args):
    img = _load_image(args.input)
    cfg = _load_config(args.config, invert=args.invert)
    report = detect_edges(img, cfg)
    _write_json(args.out, report.to_json_dict())
    if args.svg:
        Path(args.svg).write_bytes(svg_overlay(img, report.segments, report.nodes))
    return 0


def cmd_eval(args):
    segments = _load_report_segments(args.report)
    truth = _load_truth(args.truth)
    try:
        result = match_segments(segments, truth, dist_tol=args.dist_tol,
                                angle_tol=math.radians(args.angle_tol),
                                coverage_min=args.coverage)
    except ValueError as e:
        raise CommandError(str(e))
    _write_json(args.out, result.to_json_dict())
    print(f"recall={result.recall:.6f} precision={result.precision:.6f}")
    return 0


def cmd_compare(args):
    img = _load_image(args.input)
    cfg = _load_config(args.config)
    rows = compare_methods(img, cfg)
    lines = ["variant,segments"] + [f"{label},{len(segs)}" for label, _, segs in rows]
    Path(args.out).write_text("\n".join(lines) + "\n")
    if args.dump_masks:
        mask_dir = Path(args.dump_masks)
        mask_dir.mkdir(parents=True, exist_ok=True)
        for label, mask, _ in rows:
            (mask_dir / f"{label}.pgm").write_bytes(save_pgm(binary_to_gray(mask)))
    return 0


def cmd_eval_corpus(args):
    root = Path(args.dir)
    if not root.is_dir():
        raise CommandError(f"{args.dir} is not a directory")
    images = sorted(root.glob("*.pgm"))
    if not images:
        raise CommandError(f"no .pgm images in {args.dir}")
    cfg = _load_config(args.config)
    results = []
    for img_path in images:
        truth_path = img_path.with_suffix(".json")
        if not truth_path.exists():
            raise CommandError(f"missing ground truth {truth_path}")
        report = detect_edges(_load_image(img_path), cfg)
        result = match_segments(report.segments, _load_truth(truth_path),
                                dist_tol=args.dist_tol,
                                angle_tol=math.radians(args.angle_tol),
                                coverage_min=args.coverage)
        results.append(result)
        print(f"{img_path.name} recall={result.recall:.6f} precision={result.precision:.6f}")
    summary = corpus_report(results)
    print(f"mean recall={summary['recall']['mean']:.6f} "
          f"precision={summary['precision']['mean']:.6f}")
    if args.out:
        _write_json(args.out, summary)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="comb",
                                description="Honeycomb-block edge and node detection")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic honeycomb image with ground truth")
    s.add_argument("--cols", type=int, required=True)
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cell", type=float, required=True, help="cell circumradius in px")
    s.add_argument("--jitter", type=float, default=0.15)
    s.add_argument("--noise", type=float, default=8.0)
    s.add_argument("--gradient", type=float, default=20.0)
    s.add_argument("--blur", type=float, default=0.8)
    s.add_argument("--thickness", type=float, default=3.0)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--wall", type=int, default=255, help="wall intensity")
    s.add_argument("--background", type=int, default=0, help="background intensity")
    s.add_argument("--out", required=True)
    s.add_argument("--truth", required=True)
    s.set_defaults(func=cmd_synth)

    d = sub.add_parser("detect", help="run the detection pipeline on a PGM/PPM image")
    d.add_argument("--input", required=True)
    d.add_argument("--config", default=None)
    d.add_argument("--out", required=True)
    d.add_argument("--svg", default=None)
    d.add_argument("--invert", action="store_true",
                   help="invert input polarity (dark walls on bright background)")
    d.set_defaults(func=cmd_detect)

    e = sub.add_parser("eval", help="score a detection report against ground truth")
    e.add_argument("--report", required=True)
    e.add_argument("--truth", required=True)
    e.add_argument("--dist-tol", type=float, default=3.0)
    e.add_argument("--angle-tol", type=float, default=5.0, help="degrees")
    e.add_argument("--coverage", type=float, default=0.6)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("compare", help="per-variant segment counts")
    c.add_argument("--input", required=True)
    c.add_argument("--config", default=None)
    c.add_argument("--out", required=True)
    c.add_argument("--dump-masks", default=None)
    c.set_defaults(func=cmd_compare)

    ec = sub.add_parser("eval-corpus", help="detect+eval every <name>.pgm/<name>.json pair in a directory")
    ec.add_argument("--dir", required=True)
    ec.add_argument("--config", default=None)
    ec.add_argument("--dist-tol", type=float, default=3.0)
    ec.add_argument("--angle-tol", type=float, default=5.0, help="degrees")
    ec.add_argument("--coverage", type=float, default=0.6)
    ec.add_argument("--out", default=None)
    ec.set_defaults(func=cmd_eval_corpus)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandError as e:
        print(f"comb: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # internal failure
        print(f"comb: internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
