import numpy as np
import pytest

import segface


def test_module_surface():
    assert len(segface.SEGMENT_KINDS) == 14
    assert "NS" in segface.SEGMENT_KINDS
    u1, v1, u2, v2 = segface.canonical_rect("L12")
    assert (u1, v1, u2, v2) == (0.0, 0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        segface.canonical_rect("XX")


def test_downsample_checkerboard():
    img = np.array([[0, 255], [255, 0]], dtype=np.uint8)
    out = segface.downsample(img, 2)
    assert out.shape == (1, 1)
    assert int(out[0, 0]) == 128
    big = np.zeros((720, 1280), dtype=np.uint8)
    assert segface.downsample(big, 4).shape == (180, 320)


def test_integral_sums():
    img = np.ones((3, 3), dtype=np.uint8)
    table = segface.integral(img)
    assert table.shape == (4, 4)
    assert int(table[3, 3]) == 9
    assert int(table[0, 0]) == 0


def test_clahe_constant_fixed_point():
    img = np.full((32, 32), 77, dtype=np.uint8)
    out = segface.clahe(img, tiles_x=4, tiles_y=4, clip_limit=2.0)
    assert np.array_equal(out, img)


def test_iou_and_enclosing_box():
    assert segface.iou((0, 0, 2, 2), (0, 0, 2, 2)) == 1.0
    assert segface.iou((0, 0, 2, 2), (5, 5, 6, 6)) == 0.0
    assert segface.iou((0, 0, 2, 2), (1, 1, 3, 3)) == pytest.approx(1 / 7)
    assert segface.enclosing_box([(0, 0, 10, 10), (5, 5, 20, 15)]) == (0, 0, 20, 15)


def test_estimate_full_face_left_half():
    est = segface.estimate_full_face("L12", (10, 20, 50, 100), 200, 200)
    assert est["face"] == (10, 20, 90, 100)
    assert est["center"] == (50, 60)
    clamped = segface.estimate_full_face("L12", (10, 20, 50, 100), 70, 200)
    assert clamped["face"] == (10, 20, 70, 100)
    assert clamped["center"] == (50, 60)


def test_cluster_segments_agreeing_centers():
    face = (40, 30, 120, 130)
    dets = []
    for kind in ("NS", "U12", "B12", "L34"):
        u1, v1, u2, v2 = segface.canonical_rect(kind)
        w, h = face[2] - face[0], face[3] - face[1]
        dets.append((kind, (face[0] + u1 * w, face[1] + v1 * h,
                            face[0] + u2 * w, face[1] + v2 * h)))
    clusters = segface.cluster_segments(dets, 200, 200, c=2)
    assert len(clusters) == 4  # every detection anchors the same group
    assert clusters[0]["members"] == [0, 1, 2, 3]


def test_lbp_code_flat_region():
    img = np.full((6, 6), 9, dtype=np.uint8)
    assert segface.lbp_code(img, 0, 0, 2, 2) == 255


def test_metrics():
    assert segface.f1_score(5, 3, 2) == pytest.approx(10 / 15)
    outcomes = [(True, 1.0, True), (True, 0.9, True), (False, -1.0, False), (False, None, False)]
    assert segface.tpr_at_fpr(outcomes) == 1.0
    assert segface.recall_at_precision(outcomes) == 1.0
    no_neg = [(True, 1.0, True)]
    assert segface.tpr_at_fpr(no_neg) is None
