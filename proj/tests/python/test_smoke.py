"""Smoke tests for the Python bindings."""

import math
import os

import numpy as np
import pytest

import vpsumm


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("ds") / "planted"
    planted = vpsumm.generate_planted_dataset(out_dir, seed=7)
    return {"manifest": str(out_dir / "manifest.json"), "planted": planted}


def test_summarize_shapes_and_descent(dataset):
    summary = vpsumm.summarize(dataset["manifest"], s=2)
    assert len(summary.videos) == 4
    for video in summary.videos:
        assert len(video.selected) == 2
        assert len(set(video.selected)) == 2
        assert len(video.scores) == 6
    history = summary.objective_history
    assert len(history) >= 1
    for prev, cur in zip(history, history[1:]):
        assert cur <= prev + 1e-7 * (1.0 + abs(prev))
    assert summary.converged


def test_summarize_recovers_planted_clips(dataset):
    summary = vpsumm.summarize(dataset["manifest"], s=2)
    for video in summary.videos:
        assert sorted(video.selected) == sorted(dataset["planted"][video.video_id])


def test_summarize_is_deterministic(dataset):
    a = vpsumm.summarize(dataset["manifest"], s=2, seed=3)
    b = vpsumm.summarize(dataset["manifest"], s=2, seed=3)
    for va, vb in zip(a.videos, b.videos):
        assert list(va.selected) == list(vb.selected)
        assert list(va.scores) == list(vb.scores)
    assert a.objective_history == b.objective_history


def test_trace_report_matches_objective(dataset):
    summary = vpsumm.summarize(dataset["manifest"], s=2)
    selected = {v.video_id: list(v.selected) for v in summary.videos}
    report = vpsumm.trace_report(dataset["manifest"], selected, s=2)
    recombined = (
        -0.05 * report["inner_summary"]
        + 0.5 * report["within_group"]
        - 0.5 * report["between_group"]
    )
    assert math.isclose(recombined, report["objective"], rel_tol=0, abs_tol=1e-9)


def test_brute_force_lower_bounds_rounded_solve(dataset):
    summary = vpsumm.summarize(dataset["manifest"], s=2)
    selected = {v.video_id: list(v.selected) for v in summary.videos}
    rounded = vpsumm.trace_report(dataset["manifest"], selected, s=2)["objective"]
    best = vpsumm.brute_force(dataset["manifest"], s=2)
    assert best["objective"] <= rounded + 1e-9
    assert sorted(best["selected"]) == sorted(selected)


def test_kmeans_baseline_shape(dataset):
    summary = vpsumm.kmeans_baseline(dataset["manifest"], s=2, clusters=4)
    assert len(summary.videos) == 4
    for video in summary.videos:
        assert len(video.selected) == 2
        assert sorted(video.scores) == list(range(1, 7))


def test_load_corpus_info(dataset):
    info = vpsumm.load_corpus_info(dataset["manifest"])
    assert info["dim"] == 16
    assert info["total_clips"] == 24
    assert [v["clips"] for v in info["videos"]] == [6, 6, 6, 6]


def test_project_capped_simplex():
    projected = vpsumm.project_capped_simplex(np.array([0.9, 0.8, 0.1]), 1.0)
    assert np.allclose(projected, [0.55, 0.45, 0.0], atol=1e-12)
    assert math.isclose(projected.sum(), 1.0, abs_tol=1e-12)


def test_average_precision():
    assert math.isclose(
        vpsumm.average_precision([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.6]),
        (1.0 + 2.0 / 3.0) / 2.0,
        abs_tol=1e-12,
    )
    assert vpsumm.average_precision([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.6], k=2) == 0.5


def test_ground_truth_from_scores():
    labels = vpsumm.ground_truth_from_scores([9.0, 1.0, 8.0, 2.0, 3.0], ratio=0.4)
    assert labels == [1, 0, 1, 0, 0]


def test_segmentation_helpers():
    assert vpsumm.detect_change_points([0.1, 0.8, 0.05, 0.9]) == [2, 4]
    assert vpsumm.normalize_clips([100], 200) == [(0, 100), (100, 200)]
    clips = vpsumm.normalize_clips([5, 500], 700)
    assert clips[0][0] == 0 and clips[-1][1] == 700
    assert all(32 <= e - b <= 112 for b, e in clips)


def test_pool_clip_features():
    frames = np.array([[3.0, 4.0]])
    pooled = vpsumm.pool_clip_features(frames, [(0, 16)])
    assert np.allclose(pooled, [[0.6, 0.8]], atol=1e-12)


def test_errors_surface_as_exceptions(dataset, tmp_path):
    with pytest.raises(Exception, match="summary length"):
        vpsumm.summarize(dataset["manifest"], s=99)
    with pytest.raises(Exception):
        vpsumm.summarize(tmp_path / "missing.json", s=2)
