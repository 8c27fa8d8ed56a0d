"""Viewpoint-aware video co-summarization.

Selects a fixed number of clips per video from a grouped corpus so that the
selections are diverse inside each summary, consistent across the videos of a
group, and discriminative between groups. The heavy lifting lives in the C++
extension; this package re-exports the main operations.
"""

from ._core import (
    Hyperparams,
    Summary,
    VideoSummary,
    average_precision,
    brute_force,
    detect_change_points,
    generate_planted_dataset,
    ground_truth_from_scores,
    kmeans_baseline,
    load_corpus_info,
    normalize_clips,
    pool_clip_features,
    project_capped_simplex,
    summarize,
    trace_report,
)

__all__ = [
    "Hyperparams",
    "Summary",
    "VideoSummary",
    "average_precision",
    "brute_force",
    "detect_change_points",
    "generate_planted_dataset",
    "ground_truth_from_scores",
    "kmeans_baseline",
    "load_corpus_info",
    "normalize_clips",
    "pool_clip_features",
    "project_capped_simplex",
    "summarize",
    "trace_report",
]

__version__ = "0.1.0"
