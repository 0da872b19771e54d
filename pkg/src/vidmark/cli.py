"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 capacity/insufficient
motion, 4 I/O or format error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from vidmark.attacks import AttackSpec, apply_attack
from vidmark.errors import ConfigurationError, FormatError, VidmarkError
from vidmark.pipeline import (
    RunConfig,
    default_attacks,
    embed_video,
    extract_video,
    load_manifest,
    run_experiment,
    save_manifest,
)
from vidmark.synth import SYNTH_KINDS, synth_clip
from vidmark.video_io import read_raw_yuv, read_y4m, write_y4m

_ATTACK_KINDS = {
    "quant": "adaptive_quantization",
    "lowpass": "lowpass",
    "highpass": "highpass",
    "drop": "frame_drop",
}


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ConfigurationError(f"expected WxH, got {text!r}") from None


def _parse_fps(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"expected a rational frame rate (e.g. 30/1), got {text!r}") from None


def _add_raw_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--raw-size", metavar="WxH", help="treat inputs as headerless planar YUV of this geometry")
    parser.add_argument("--raw-format", choices=("420", "422", "444"), default="420", help="raw input chroma layout")
    parser.add_argument("--fps", default="25", help="raw input frame rate N/D")


def _read_video(path: str, args: argparse.Namespace):
    if getattr(args, "raw_size", None):
        width, height = _parse_size(args.raw_size)
        return read_raw_yuv(path, width, height, args.raw_format, _parse_fps(args.fps))
    return read_y4m(path)


def cmd_embed(args: argparse.Namespace) -> int:
    seq = _read_video(args.input, args)
    cfg = RunConfig(
        domain=args.domain,
        alpha=args.alpha,
        block_size=args.block_size,
        wm_side=args.wm_size,
        wm_samples=args.wm_samples,
        threshold=args.threshold,
        search_range=args.range,
        seed=args.seed,
    )
    outcome = embed_video(seq, cfg)
    write_y4m(outcome.sequence, args.output)
    save_manifest(outcome.manifest, args.manifest)
    print(f"watermarked {len(outcome.manifest.frames)} of {len(seq.frames)} frames")
    if outcome.skipped:
        print(f"skipped (insufficient motion): {', '.join(map(str, outcome.skipped))}")
    return 0


def cmd_attack(args: argparse.Namespace) -> int:
    seq = _read_video(args.input, args)
    kind = _ATTACK_KINDS[args.kind]
    drop_indices = None
    if args.drop_frames:
        try:
            drop_indices = [int(tok) for tok in args.drop_frames.split(",") if tok]
        except ValueError:
            raise ConfigurationError(f"bad --drop-frames list {args.drop_frames!r}") from None
    spec = AttackSpec(
        kind=kind,
        q_base=args.q,
        adaptive=not args.uniform_quant,
        radius=args.radius,
        boost=args.boost,
        drop_ratio=args.drop_ratio,
        drop_indices=drop_indices,
    )
    attacked = apply_attack(seq, spec)
    write_y4m(attacked, args.output)
    print(f"{spec.label}: {len(seq.frames)} -> {len(attacked.frames)} frames")
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    original = _read_video(args.original, args)
    suspect = _read_video(args.suspect, args)
    manifest = load_manifest(args.manifest)
    result = extract_video(original, suspect, manifest)
    for fd in result.frames:
        if fd.delta is None:
            print(f"frame {fd.index}: dropped")
        else:
            print(f"frame {fd.index}: delta = {fd.delta:.6f}")
    print(f"mean delta = {result.mean_delta:.6f}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    clips = []
    for path in args.clip:
        seq = _read_video(path, args)
        clips.append((Path(path).stem, seq))
    cfg = RunConfig(seed=args.seed, wm_side=args.wm_size, wm_samples=args.wm_samples)
    attacks = default_attacks()
    if args.attacks:
        wanted = [tok for tok in args.attacks.split(",") if tok]
        unknown = set(wanted) - set(_ATTACK_KINDS)
        if unknown:
            raise ConfigurationError(f"unknown attack(s): {', '.join(sorted(unknown))}")
        labels = {_ATTACK_KINDS[w] for w in wanted}
        attacks = [a for a in attacks if a.label in labels]
    report = run_experiment(clips, cfg, attacks, detect_threshold=args.detect_threshold)

    out = Path(args.out)
    base = out.with_suffix("") if out.suffix in (".csv", ".json") else out
    csv_path = base.with_suffix(".csv")
    json_path = base.with_suffix(".json")
    csv_path.write_text(report.to_csv(), encoding="ascii")
    json_path.write_text(report.to_json(), encoding="ascii")
    print(report.to_table())
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    width, height = _parse_size(args.size)
    seq = synth_clip(args.kind, frames=args.frames, height=height, width=width, seed=args.seed)
    write_y4m(seq, args.out)
    print(f"wrote {args.frames}-frame {args.kind} clip to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vidmark",
        description="Motion-selective video watermarking in the spatial and 9/7 wavelet domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a seeded Gaussian watermark")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--domain", choices=("spatial", "frequency"), default="frequency")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--block-size", type=int, default=8)
    p.add_argument("--wm-size", type=int, default=32, help="watermark side length")
    p.add_argument("--wm-samples", type=int, default=None, help="flat watermark sample count (overrides --wm-size)")
    p.add_argument("--threshold", type=float, default=4.0)
    p.add_argument("--range", type=int, default=7)
    p.add_argument("--seed", type=int, default=1)
    _add_raw_input_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("attack", help="degrade a clip")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--kind", choices=tuple(_ATTACK_KINDS), required=True)
    p.add_argument("--q", type=float, default=16.0, help="quantization base step")
    p.add_argument("--uniform-quant", action="store_true", help="disable the activity scaling of the quantizer")
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--boost", type=float, default=1.0)
    p.add_argument("--drop-ratio", type=float, default=None)
    p.add_argument("--drop-frames", default=None, help="comma-separated frame indices")
    _add_raw_input_flags(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("extract", help="recover the watermark and report similarity")
    p.add_argument("--original", required=True)
    p.add_argument("--suspect", required=True)
    p.add_argument("--manifest", required=True)
    _add_raw_input_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="attack-robustness report over clips")
    p.add_argument("--clip", action="append", required=True)
    p.add_argument("--out", required=True, help="report path; .csv and .json are both written")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--wm-size", type=int, default=32)
    p.add_argument("--wm-samples", type=int, default=None)
    p.add_argument("--attacks", default=None, help="comma-separated subset of quant,lowpass,highpass,drop")
    p.add_argument("--detect-threshold", type=float, default=0.5)
    _add_raw_input_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a deterministic test clip")
    p.add_argument("--kind", choices=SYNTH_KINDS, default="morph")
    p.add_argument("--out", required=True)
    p.add_argument("--frames", type=int, default=30)
    p.add_argument("--size", default="128x128")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VidmarkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FormatError.exit_code


if __name__ == "__main__":
    sys.exit(main())
