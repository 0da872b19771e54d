"""End-to-end orchestration: embed, extract, attack evaluation, reports.

Motion is always estimated between consecutive *original* frames, never
against already-watermarked ones, so embedding and extraction see the same
block selection. The manifest sidecar carries everything extraction needs;
there is no hidden state.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from vidmark.attacks import AttackSpec, apply_attack
from vidmark.errors import (
    ConfigurationError,
    InsufficientMotionError,
    IntegrityError,
    NoCapacityError,
)
from vidmark.motion import compute_motion_field, select_blocks
from vidmark.rng import DEFAULT_GENERATOR_ID
from vidmark.video_io import Frame, FrameSequence
from vidmark.watermark import (
    EmbedManifest,
    FrameEntry,
    WatermarkPattern,
    blocks_required,
    embed_frequency,
    embed_spatial,
    extract_frequency,
    extract_spatial,
    generate_watermark,
    generate_watermark_samples,
    psnr,
    similarity,
)

DOMAINS = ("spatial", "frequency")

MANIFEST_VERSION = 1


@dataclass
class RunConfig:
    domain: str = "frequency"
    alpha: float = 0.1
    block_size: int = 8
    wm_side: int = 32
    wm_samples: int | None = None  # set for the flat sample-count mode
    threshold: float = 4.0
    search_range: int = 7
    levels: int = 2
    seed: int = 1
    generator_id: str = DEFAULT_GENERATOR_ID

    @property
    def wm_total(self) -> int:
        return self.wm_samples if self.wm_samples is not None else self.wm_side * self.wm_side

    def validate(self) -> None:
        if self.domain not in DOMAINS:
            raise ConfigurationError(f"unknown domain {self.domain!r}")
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")
        if self.block_size < 2 or self.block_size % 2:
            raise ConfigurationError(f"block size must be a positive even number, got {self.block_size}")
        if self.threshold < 0:
            raise ConfigurationError(f"threshold must be >= 0, got {self.threshold}")
        if self.search_range < 1:
            raise ConfigurationError(f"search range must be >= 1, got {self.search_range}")
        if self.domain == "frequency":
            if self.block_size != 8 or self.levels != 2:
                raise ConfigurationError(
                    "frequency domain requires block size 8 with 2 wavelet levels"
                )
        blocks_required(self.domain, self.wm_total, self.block_size)  # divisibility

    def required_blocks(self) -> int:
        return blocks_required(self.domain, self.wm_total, self.block_size)

    def make_watermark(self) -> WatermarkPattern:
        if self.wm_samples is not None:
            return generate_watermark_samples(self.seed, self.wm_samples, self.generator_id)
        return generate_watermark(self.seed, self.wm_side, self.generator_id)


@dataclass
class EmbedOutcome:
    sequence: FrameSequence
    manifest: EmbedManifest
    skipped: list[int]  # frame indices with too few motion blocks


def embed_video(seq: FrameSequence, cfg: RunConfig) -> EmbedOutcome:
    """Watermark every frame (from the second onward) that offers enough
    motion blocks; other frames pass through and are recorded as skipped."""
    cfg.validate()
    if len(seq.frames) < 2:
        raise ConfigurationError("embedding needs at least two frames")
    m = cfg.block_size
    if seq.width % m or seq.height % m:
        raise ConfigurationError(
            f"frame geometry {seq.width}x{seq.height} not divisible by block size {m}"
        )

    wm = cfg.make_watermark()
    required = cfg.required_blocks()
    embed_one = embed_spatial if cfg.domain == "spatial" else embed_frequency

    out_frames = [seq.frames[0].copy()]
    entries: list[FrameEntry] = []
    skipped: list[int] = []
    for t in range(1, len(seq.frames)):
        ref = seq.frames[t - 1]
        cur = seq.frames[t]
        fd = compute_motion_field(ref, cur, m, cfg.threshold, cfg.search_range)
        try:
            selected = select_blocks(fd, required)
        except InsufficientMotionError:
            skipped.append(cur.index)
            out_frames.append(cur.copy())
            continue
        out_frames.append(embed_one(cur, wm, selected, cfg.alpha, m))
        entries.append(FrameEntry(index=cur.index, blocks=[(b.grid_i, b.grid_j) for b in selected]))

    if not entries:
        raise NoCapacityError("no frame offered enough motion blocks to embed into")

    manifest = EmbedManifest(
        domain=cfg.domain,
        alpha=cfg.alpha,
        seed=cfg.seed,
        generator_id=cfg.generator_id,
        block_size=m,
        wm_side=None if cfg.wm_samples is not None else cfg.wm_side,
        wm_samples=cfg.wm_total,
        threshold=cfg.threshold,
        search_range=cfg.search_range,
        frames=entries,
        version=MANIFEST_VERSION,
    )
    watermarked = FrameSequence(
        frames=out_frames, frame_rate=seq.frame_rate, source_id=seq.source_id
    )
    return EmbedOutcome(sequence=watermarked, manifest=manifest, skipped=skipped)


# ---------------------------------------------------------------------------
# Extraction


@dataclass
class FrameDelta:
    index: int
    delta: float | None  # None when the suspect frame was dropped


@dataclass
class ExtractionResult:
    frames: list[FrameDelta]
    mean_delta: float
    dropped: int

    def surviving(self) -> list[FrameDelta]:
        return [f for f in self.frames if f.delta is not None]


def _frame_mad(a: Frame, b: Frame) -> float:
    return float(np.abs(a.luma - b.luma).mean())


def _align_by_content(original: FrameSequence, suspect: FrameSequence) -> dict[int, Frame]:
    """Monotone greedy alignment of a shorter suspect sequence onto original
    indices by luma MAD. Used when positional indices were lost (a dropped
    clip that went through a container with no frame numbering)."""
    slack = len(original.frames) - len(suspect.frames)
    mapping: dict[int, Frame] = {}
    prev = -1
    for j, sf in enumerate(suspect.frames):
        best_t = -1
        best_v = math.inf
        for t in range(max(prev + 1, j), j + slack + 1):
            v = _frame_mad(sf, original.frames[t])
            if v < best_v:
                best_v = v
                best_t = t
        mapping[best_t] = sf
        prev = best_t
    return mapping


def _resolve_suspect_frames(original: FrameSequence, suspect: FrameSequence) -> dict[int, Frame]:
    orig_idx = [f.index for f in original.frames]
    sus_idx = [f.index for f in suspect.frames]
    lost_positions = (
        len(suspect.frames) < len(original.frames)
        and sus_idx == list(range(len(sus_idx)))
        and orig_idx == list(range(len(orig_idx)))
    )
    if lost_positions:
        return _align_by_content(original, suspect)
    return {f.index: f for f in suspect.frames}


def extract_video(
    original: FrameSequence, suspect: FrameSequence, manifest: EmbedManifest
) -> ExtractionResult:
    """Per manifest frame: run the matching extractor and compare against the
    regenerated watermark. Missing suspect frames count as dropped, not as
    errors."""
    if manifest.domain not in DOMAINS:
        raise IntegrityError(f"manifest domain {manifest.domain!r} unknown")
    if original.frames and (original.width % manifest.block_size or original.height % manifest.block_size):
        raise IntegrityError("original sequence geometry does not match the manifest block grid")

    wm = manifest.regenerate_watermark()
    extract_one = extract_spatial if manifest.domain == "spatial" else extract_frequency
    suspects = _resolve_suspect_frames(original, suspect)

    frames: list[FrameDelta] = []
    deltas: list[float] = []
    for entry in manifest.frames:
        orig = original.frame_by_index(entry.index)
        if orig is None:
            raise IntegrityError(f"original sequence lacks manifest frame {entry.index}")
        sus = suspects.get(entry.index)
        if sus is None:
            frames.append(FrameDelta(index=entry.index, delta=None))
            continue
        w_star = extract_one(orig, sus, manifest)
        if not np.any(w_star):
            # nothing recovered (e.g. the embedding quantized away at an
            # 8-bit boundary): report zero correlation, not an error
            d = 0.0
        else:
            d = similarity(w_star, wm)
        frames.append(FrameDelta(index=entry.index, delta=d))
        deltas.append(d)

    if not deltas:
        raise IntegrityError("no watermarked frame survived in the suspect sequence")
    return ExtractionResult(
        frames=frames,
        mean_delta=float(np.mean(deltas)),
        dropped=len(frames) - len(deltas),
    )


# ---------------------------------------------------------------------------
# Manifest serialization


def manifest_to_dict(manifest: EmbedManifest) -> dict:
    doc = {
        "version": manifest.version,
        "generator_id": manifest.generator_id,
        "seed": manifest.seed,
        "domain": manifest.domain,
        "alpha": manifest.alpha,
        "block_size": manifest.block_size,
        "wm_side": manifest.wm_side,
        "threshold": manifest.threshold,
        "range": manifest.search_range,
        "frames": [
            {"index": e.index, "blocks": [[gi, gj] for gi, gj in e.blocks]}
            for e in manifest.frames
        ],
    }
    if manifest.wm_side is None:
        doc["wm_samples"] = manifest.wm_samples
    return doc


def manifest_from_dict(doc: dict) -> EmbedManifest:
    try:
        version = doc["version"]
        if version != MANIFEST_VERSION:
            raise IntegrityError(f"unsupported manifest version {version}")
        wm_side = doc["wm_side"]
        wm_samples = doc.get("wm_samples")
        if wm_side is None and wm_samples is None:
            raise IntegrityError("manifest specifies neither wm_side nor wm_samples")
        frames = []
        for e in doc["frames"]:
            blocks = [tuple(b) for b in e["blocks"]]
            if len(set(blocks)) != len(blocks):
                raise IntegrityError(f"duplicate blocks in manifest frame {e['index']}")
            frames.append(FrameEntry(index=e["index"], blocks=blocks))
        return EmbedManifest(
            domain=doc["domain"],
            alpha=doc["alpha"],
            seed=doc["seed"],
            generator_id=doc["generator_id"],
            block_size=doc["block_size"],
            wm_side=wm_side,
            wm_samples=wm_samples if wm_side is None else wm_side * wm_side,
            threshold=doc["threshold"],
            search_range=doc["range"],
            frames=frames,
            version=version,
        )
    except KeyError as exc:
        raise IntegrityError(f"manifest missing field {exc.args[0]!r}") from None


def save_manifest(manifest: EmbedManifest, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(manifest_to_dict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest(path) -> EmbedManifest:
    with open(path, "r", encoding="ascii") as fh:
        return manifest_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Experiments


@dataclass
class ReportRow:
    clip: str
    domain: str
    attack: str
    psnr_before: float
    psnr_after: float
    delta_before: float
    delta_after: float
    per_frame_delta: list
    frames_total: int
    frames_watermarked: int
    frames_skipped: int
    frames_dropped: int
    detected: bool


@dataclass
class EvaluationReport:
    rows: list[ReportRow]
    config: dict
    manifests: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
            "manifests": self.manifests,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        header = (
            "clip,domain,attack,psnr_before_db,psnr_after_db,"
            "delta_before,delta_after,frames_watermarked,frames_skipped,"
            "frames_dropped,detected\n"
        )
        lines = [header]
        for r in self.rows:
            lines.append(
                f"{r.clip},{r.domain},{r.attack},{r.psnr_before:.4f},{r.psnr_after:.4f},"
                f"{r.delta_before:.6f},{r.delta_after:.6f},{r.frames_watermarked},"
                f"{r.frames_skipped},{r.frames_dropped},{int(r.detected)}\n"
            )
        return "".join(lines)

    def to_table(self) -> str:
        cols = f"{'clip':<10} {'domain':<10} {'attack':<22} {'psnr(dB)':>9} {'delta':>8} {'hit':>4}"
        lines = [cols, "-" * len(cols)]
        for r in self.rows:
            lines.append(
                f"{r.clip:<10} {r.domain:<10} {r.attack:<22} "
                f"{r.psnr_after:>9.2f} {r.delta_after:>8.4f} {'yes' if r.detected else 'no':>4}"
            )
        return "\n".join(lines) + "\n"


def default_attacks() -> list[AttackSpec]:
    return [
        AttackSpec(kind="adaptive_quantization", q_base=16.0, label="adaptive_quantization"),
        AttackSpec(kind="lowpass", radius=1, label="lowpass"),
        AttackSpec(kind="highpass", radius=1, boost=1.0, label="highpass"),
        AttackSpec(kind="frame_drop", drop_ratio=0.5, label="frame_drop"),
    ]


def _mean_psnr(original: FrameSequence, processed: FrameSequence, indices) -> float:
    values = []
    by_index = {f.index: f for f in processed.frames}
    for i in indices:
        p = by_index.get(i)
        if p is None:
            continue
        values.append(psnr(original.frame_by_index(i), p))
    return float(np.mean(values)) if values else math.nan


def run_experiment(
    clips,
    cfg: RunConfig,
    attacks: list[AttackSpec] | None = None,
    domains=DOMAINS,
    detect_threshold: float = 0.5,
) -> EvaluationReport:
    """Embed, attack and extract every (clip, domain, attack) combination.

    `clips` is a list of (name, FrameSequence). Deterministic given the
    config seed; no clocks or environment enter the report.
    """
    if attacks is None:
        attacks = default_attacks()
    if not attacks:
        raise ConfigurationError("at least one attack spec is required")

    rows: list[ReportRow] = []
    manifests: dict[str, dict] = {}
    for clip_name, seq in clips:
        for domain in domains:
            dcfg = replace(cfg, domain=domain)
            outcome = embed_video(seq, dcfg)
            wm_seq, manifest = outcome.sequence, outcome.manifest
            manifests[f"{clip_name}/{domain}"] = manifest_to_dict(manifest)
            wm_indices = [e.index for e in manifest.frames]

            base = extract_video(seq, wm_seq, manifest)
            psnr_before = _mean_psnr(seq, wm_seq, wm_indices)
            rows.append(
                ReportRow(
                    clip=clip_name,
                    domain=domain,
                    attack="none",
                    psnr_before=psnr_before,
                    psnr_after=psnr_before,
                    delta_before=base.mean_delta,
                    delta_after=base.mean_delta,
                    per_frame_delta=[[f.index, f.delta] for f in base.frames],
                    frames_total=len(seq.frames),
                    frames_watermarked=len(wm_indices),
                    frames_skipped=len(outcome.skipped),
                    frames_dropped=0,
                    detected=base.mean_delta >= detect_threshold,
                )
            )
            for spec in attacks:
                attacked = apply_attack(wm_seq, spec)
                res = extract_video(seq, attacked, manifest)
                rows.append(
                    ReportRow(
                        clip=clip_name,
                        domain=domain,
                        attack=spec.label,
                        psnr_before=psnr_before,
                        psnr_after=_mean_psnr(seq, attacked, wm_indices),
                        delta_before=base.mean_delta,
                        delta_after=res.mean_delta,
                        per_frame_delta=[[f.index, f.delta] for f in res.frames],
                        frames_total=len(seq.frames),
                        frames_watermarked=len(wm_indices),
                        frames_skipped=len(outcome.skipped),
                        frames_dropped=res.dropped,
                        detected=res.mean_delta >= detect_threshold,
                    )
                )

    config = asdict(cfg)
    config["detect_threshold"] = detect_threshold
    return EvaluationReport(rows=rows, config=config, manifests=manifests)
