"""Motion-selective video watermarking in the spatial and 9/7 wavelet domains."""

from vidmark._kernels import kernel_backend
from vidmark.attacks import AttackSpec, adaptive_quantize, apply_attack, drop_frames, highpass, lowpass
from vidmark.motion import (
    BlockRecord,
    MotionField,
    MotionVector,
    block_distortion,
    compute_motion_field,
    mots_search,
    predict_initial_mv,
    select_blocks,
)
from vidmark.pipeline import (
    EmbedOutcome,
    EvaluationReport,
    ExtractionResult,
    RunConfig,
    embed_video,
    extract_video,
    load_manifest,
    run_experiment,
    save_manifest,
)
from vidmark.synth import synth_clip
from vidmark.video_io import (
    Frame,
    FrameSequence,
    read_raw_yuv,
    read_y4m,
    rgb_to_ycbcr,
    write_y4m,
    ycbcr_to_rgb,
)
from vidmark.watermark import (
    EmbedManifest,
    WatermarkPattern,
    embed_frequency,
    embed_spatial,
    extract_frequency,
    extract_spatial,
    generate_watermark,
    psnr,
    similarity,
)
from vidmark.wavelet import SubbandPyramid, fwt2d_block, fwt97_1d, iwt2d_block, iwt97_1d, subband_view

__version__ = "0.1.0"

__all__ = [
    "AttackSpec",
    "BlockRecord",
    "EmbedManifest",
    "EmbedOutcome",
    "EvaluationReport",
    "ExtractionResult",
    "Frame",
    "FrameSequence",
    "MotionField",
    "MotionVector",
    "RunConfig",
    "SubbandPyramid",
    "WatermarkPattern",
    "adaptive_quantize",
    "apply_attack",
    "block_distortion",
    "compute_motion_field",
    "drop_frames",
    "embed_frequency",
    "embed_spatial",
    "embed_video",
    "extract_frequency",
    "extract_spatial",
    "extract_video",
    "fwt2d_block",
    "fwt97_1d",
    "generate_watermark",
    "highpass",
    "iwt2d_block",
    "iwt97_1d",
    "kernel_backend",
    "load_manifest",
    "lowpass",
    "mots_search",
    "predict_initial_mv",
    "psnr",
    "read_raw_yuv",
    "read_y4m",
    "rgb_to_ycbcr",
    "run_experiment",
    "save_manifest",
    "select_blocks",
    "similarity",
    "subband_view",
    "synth_clip",
    "write_y4m",
    "ycbcr_to_rgb",
    "__version__",
]
