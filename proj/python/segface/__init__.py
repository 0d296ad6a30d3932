"""Facial-segment face detection: imaging primitives, segment-to-face
extrapolation, center clustering and frame-level detection metrics."""

from ._segface import (
    SEGMENT_KINDS,
    canonical_rect,
    clahe,
    cluster_segments,
    downsample,
    enclosing_box,
    estimate_full_face,
    f1_score,
    integral,
    iou,
    lbp_code,
    recall_at_precision,
    tpr_at_fpr,
    __version__,
)

__all__ = [
    "SEGMENT_KINDS",
    "canonical_rect",
    "clahe",
    "cluster_segments",
    "downsample",
    "enclosing_box",
    "estimate_full_face",
    "f1_score",
    "integral",
    "iou",
    "lbp_code",
    "recall_at_precision",
    "tpr_at_fpr",
    "__version__",
]
