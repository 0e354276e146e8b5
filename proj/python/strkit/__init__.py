"""Scene text mask refinement and text-removal evaluation toolkit.

Thin numpy-facing wrapper around the compiled core. Images are (H, W, 3)
uint8 arrays, grayscale (H, W) uint8, masks (H, W) bool, CIELAB (H, W, 3)
float32, and label maps (H, W) int32.
"""

from ._core import (
    Error,
    MaskCorpus,
    MaskSampler,
    MergeConfig,
    MetricConfig,
    MetricValues,
    MixRatios,
    MrfConfig,
    MrfOutput,
    RefineConfig,
    SamplerState,
    SeedResult,
    SelectConfig,
    SlicParams,
    age,
    compose_reference,
    dilate,
    enforce_connectivity,
    erode,
    evaluate_dataset,
    evaluate_pair,
    finalize_mask,
    hierarchical_merge,
    load_corpus,
    load_gray,
    load_mask,
    load_rgb,
    mse_percent,
    mssim,
    overlay,
    pceps,
    peps,
    psnr,
    refine_seed,
    resample_mask,
    resize_bilinear,
    rgb_to_gray,
    rgb_to_lab,
    run_mrf,
    sample_mask,
    save_label_png16,
    save_png,
    select_text_segments,
    slic,
    threshold,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "MaskCorpus",
    "MaskSampler",
    "MergeConfig",
    "MetricConfig",
    "MetricValues",
    "MixRatios",
    "MrfConfig",
    "MrfOutput",
    "RefineConfig",
    "SamplerState",
    "SeedResult",
    "SelectConfig",
    "SlicParams",
    "age",
    "compose_reference",
    "dilate",
    "enforce_connectivity",
    "erode",
    "evaluate_dataset",
    "evaluate_pair",
    "finalize_mask",
    "hierarchical_merge",
    "load_corpus",
    "load_gray",
    "load_mask",
    "load_rgb",
    "mse_percent",
    "mssim",
    "overlay",
    "pceps",
    "peps",
    "psnr",
    "refine_seed",
    "resample_mask",
    "resize_bilinear",
    "rgb_to_gray",
    "rgb_to_lab",
    "run_mrf",
    "sample_mask",
    "save_label_png16",
    "save_png",
    "select_text_segments",
    "slic",
    "threshold",
]
