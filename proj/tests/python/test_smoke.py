"""Smoke tests for the compiled strkit module."""

import numpy as np
import pytest

import strkit


def checkerboard(h, w, tile=8):
    y, x = np.indices((h, w))
    return (((x // tile) + (y // tile)) % 2).astype(bool)


def synthetic_scene(size=96, seed=3):
    rng = np.random.default_rng(seed)
    img = np.full((size, size, 3), 180, np.uint8)
    img += rng.integers(-5, 6, img.shape).astype(np.uint8)
    strokes = np.zeros((size, size), bool)
    strokes[20:30, 10:80] = True
    strokes[50:60, 30:90] = True
    img[strokes] = (25, 20, 40)
    return img, strokes


def test_png_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (12, 17, 3), dtype=np.uint8)
    path = tmp_path / "img.png"
    strkit.save_png(path, img)
    assert np.array_equal(strkit.load_rgb(path), img)

    mask = checkerboard(9, 9)
    strkit.save_png(tmp_path / "m.png", mask)
    assert np.array_equal(strkit.load_mask(tmp_path / "m.png"), mask)


def test_missing_file_raises():
    with pytest.raises(strkit.Error):
        strkit.load_rgb("/definitely/not/here.png")


def test_color_ops():
    img = np.zeros((4, 4, 3), np.uint8)
    img[..., 0] = 255  # pure red
    gray = strkit.rgb_to_gray(img)
    assert gray.dtype == np.uint8
    assert int(gray[0, 0]) == 76

    lab = strkit.rgb_to_lab(np.full((2, 2, 3), 255, np.uint8))
    assert lab.shape == (2, 2, 3)
    assert abs(float(lab[0, 0, 0]) - 100.0) < 1e-3

    mask = strkit.threshold(np.full((3, 3), 128, np.uint8), 128)
    assert mask.all()


def test_morphology_and_refine():
    m = np.zeros((9, 9), bool)
    m[4, 4] = True
    plus = strkit.dilate(m, element="cross", radius=1)
    assert plus.sum() == 5
    assert not strkit.erode(m).any()

    bar = np.zeros((32, 48), bool)
    bar[12:22, 4:44] = True
    result = strkit.refine_seed(bar, strkit.RefineConfig(iterations=2))
    assert len(result.stages) == 2
    seed = result.seed
    assert 0 < seed.sum() <= bar.sum()
    assert (bar | seed == bar).all()  # seed stays inside the input


def test_slic_labels_are_dense_and_complete():
    img, _ = synthetic_scene(64)
    labels = strkit.slic(strkit.rgb_to_lab(img), strkit.SlicParams(k=16))
    assert labels.shape == (64, 64)
    assert labels.dtype == np.int32
    ids = np.unique(labels)
    assert ids.min() == 0
    assert len(ids) == ids.max() + 1


def test_run_mrf_end_to_end():
    img, strokes = synthetic_scene(96)
    initial = strkit.dilate(strokes, element="square", radius=4)
    cfg = strkit.MrfConfig(slic=strkit.SlicParams(k=36))
    out = strkit.run_mrf(img, initial, cfg)
    final = out.final_mask
    assert final.shape == strokes.shape
    assert final[strokes].mean() > 0.95  # strokes recovered
    assert final.sum() < initial.sum()  # tighter than the fat initial mask
    assert out.superpixels.max() + 1 > 1
    assert len(out.seed_stages) == 2


def test_metrics():
    img, _ = synthetic_scene(32)
    v = strkit.evaluate_pair(img, img)
    assert v.psnr == 100.0
    assert abs(v.mssim - 100.0) < 1e-9
    assert v.mse == v.age == v.peps == v.pceps == 0.0

    other = img.copy()
    other[:16] = 255 - other[:16]
    w = strkit.evaluate_pair(img, other)
    assert w.psnr < 100.0
    assert 0 < w.peps <= 1
    assert w.pceps <= w.peps
    assert w.psnr == pytest.approx(strkit.psnr(img, other))

    with pytest.raises(strkit.Error):
        strkit.psnr(img, other[:16])


def test_evaluate_dataset(tmp_path):
    img, _ = synthetic_scene(24)
    strkit.save_png(tmp_path / "pred.png", img)
    strkit.save_png(tmp_path / "gt.png", img)
    report = strkit.evaluate_dataset(
        [("p0", str(tmp_path / "pred.png"), str(tmp_path / "gt.png")),
         ("p1", str(tmp_path / "missing.png"), str(tmp_path / "gt.png"))])
    assert report["pair_count"] == 1
    assert report["failure_count"] == 1
    assert report["per_pair"][0]["values"].psnr == 100.0
    assert "error" in report["per_pair"][1]


def test_sampler_determinism(tmp_path):
    mask = checkerboard(6, 6)
    paths = []
    for i in range(3):
        p = tmp_path / f"m{i}.png"
        strkit.save_png(p, mask)
        paths.append(str(p))
    corpus = strkit.MaskCorpus(box=[paths[0]], coarse=[paths[1]], detailed=[paths[2]])

    a = strkit.MaskSampler(corpus, strkit.MixRatios(), strkit.SamplerState(seed=7))
    b = strkit.MaskSampler(corpus, strkit.MixRatios(), strkit.SamplerState(seed=7))
    seq_a = [a.next() for _ in range(20)]
    seq_b = [b.next() for _ in range(20)]
    assert seq_a == seq_b
    assert a.state.draw_count == 20

    loaded, source, path, state = strkit.sample_mask(
        corpus, strkit.MixRatios(), strkit.SamplerState(seed=7))
    assert (source, path) == seq_a[0]
    assert state.draw_count == 1
    assert np.array_equal(loaded, mask)


def test_compose_reference():
    img, strokes = synthetic_scene(32)
    bg = strkit.compose_reference(img, strokes, "keep_background")
    fg = strkit.compose_reference(img, strokes, "keep_region")
    assert (bg[strokes] == 0).all()
    assert (fg[~strokes] == 0).all()
    assert np.array_equal(bg.astype(int) + fg.astype(int), img.astype(int))
