import itertools
import json

import numpy as np
import pytest

import segtrack


def test_rle_hand_vectors_and_roundtrip():
    mask = np.zeros((2, 2), dtype=bool)
    mask[1, 0] = True  # column-major: 0 then 1 then 0 0
    assert segtrack.rle_counts(mask) == [1, 1, 2]
    assert segtrack.rle_decode({"size": (16, 8), "counts": "5T3d0oL"}).sum() == 100 + 3

    rng = np.random.default_rng(0)
    for _ in range(20):
        m = rng.random((rng.integers(1, 40), rng.integers(1, 40))) < 0.3
        rle = segtrack.rle_encode(m)
        assert np.array_equal(segtrack.rle_decode(rle), m.astype(np.uint8))
        assert segtrack.rle_area(rle) == m.sum()


def test_rasterize_and_polygons():
    square = [(0, 0), (4, 0), (4, 4), (0, 4)]
    mask = segtrack.rasterize(square, 8, 8)
    assert mask.shape == (8, 8)
    assert mask.sum() == 16
    assert segtrack.polygon_area(square) == 16.0
    rings = segtrack.mask_to_polygons(mask)
    assert len(rings) == 1
    assert segtrack.polygon_area(rings[0]) == 16.0
    assert segtrack.mask_iou(mask, mask) == 1.0


def test_hungarian_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(30):
        cost = rng.normal(size=(rng.integers(1, 6), rng.integers(1, 6)))
        _, total = segtrack.hungarian(cost)
        rows, cols = cost.shape
        if rows <= cols:
            best = min(sum(cost[r, p[r]] for r in range(rows))
                       for p in itertools.permutations(range(cols), rows))
        else:
            best = min(sum(cost[p[c], c] for c in range(cols))
                       for p in itertools.permutations(range(rows), cols))
        assert total == pytest.approx(best)


def test_mota_arithmetic():
    assert segtrack.mota(38, 52, 11, 10575) == pytest.approx(0.990449, abs=1e-6)
    assert segtrack.event_rate(52, 10575) == pytest.approx(0.49, abs=0.005)
    with pytest.raises(segtrack.SegtrackError) as err:
        segtrack.mota(0, 0, 0, 0)
    assert err.value.args[1] == "undefined-metric"


def test_synth_roundtrip_through_metrics():
    out = segtrack.synthesize(n_animals=3, n_frames=80, min_separation=30, seed=5,
                              p_fn=0.05, p_fp=0.1, n_ids=2, centroid_noise=1.0)
    log = json.loads(out["log"])
    report = segtrack.evaluate_mot(out["gt_coco"], out["predictions"])
    assert report["fn"] == len(log["fn"])
    assert report["fp"] == len(log["fp"])
    assert report["ids"] == 2 * len(log["ids"])

    clean = segtrack.synthesize(n_animals=2, n_frames=10, min_separation=30, seed=5)
    rows = segtrack.evaluate_coco_ap(clean["gt_coco"], clean["predictions"], jobs=2)
    assert [r["category"] for r in rows] == ["animal_1", "animal_2"]
    assert all(r["AP"] == pytest.approx(1.0) for r in rows)
    assert segtrack.tracks_csv(clean["predictions"]).startswith("frame,label,present,")


def test_labelme_split_and_sampling():
    docs = []
    for i in range(10):
        docs.append(json.dumps({
            "imagePath": f"frame_{i}.png", "imageHeight": 32, "imageWidth": 32,
            "shapes": [{"label": "vole", "points": [[2, 2], [20, 2], [20, 20]],
                        "shape_type": "polygon", "group_id": None}],
        }))
    coco = segtrack.labelme_to_coco(docs)
    assert len(json.loads(coco)["annotations"]) == 10
    train, val = segtrack.split_dataset(coco, 0.8, 42)
    assert len(json.loads(train)["images"]) == 8
    assert len(json.loads(val)["images"]) == 2
    assert segtrack.sample_frames(10, 5, "uniform") == [0, 2, 4, 6, 8]
    assert segtrack.segment_bouts(["a", "a", "b", "a", "a"], 2) == [("a", 0, 4)]
