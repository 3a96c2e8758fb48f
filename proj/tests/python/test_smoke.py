import json
import os
import subprocess

import numpy as np
import pytest

import ffm


def test_dft_matches_numpy():
    rng = np.random.default_rng(0)
    for d in (2, 3, 8, 33, 97, 500):
        x = rng.normal(size=d)
        got = np.asarray(ffm.dft_real_half(x))
        assert got.shape == (d // 2,)
        np.testing.assert_allclose(got, np.fft.fft(x).real[: d // 2], atol=1e-9)


def test_idft_single_component():
    out = ffm.idft_single_component(4.0, 1, 4, 4)
    np.testing.assert_allclose(out, [2.0, 0.0, -2.0, 0.0], atol=1e-12)


def test_sudden_drift_pipeline():
    chunks, truth = ffm.generate_stream(120, 64, 32, 2, seed=3)
    assert len(chunks) == 120 and chunks[0].shape == (64, 32) and chunks[0].dtype == np.float32
    meta = ffm.metadescribe(chunks, n=6)
    assert np.asarray(meta["R"]).shape == (120, 6)
    assert len(set(meta["selected"])) == 6

    R = ffm.normalize(meta["R"])
    assert R.min() >= 0.0 and R.max() <= 1.0
    labels = ffm.kmeans(R, 3, seed=1)["labels"]
    assert ffm.external_scores(truth, labels)["nmi"] >= 0.9

    report = ffm.identify_concept_count(meta["R"], 2, 8, seed=1)
    assert report["best_c"] == 3
    assert sorted(report["scores"]) == list(range(2, 9))

    image = np.asarray(ffm.render_chunk_image(meta, 0))
    assert image.shape == (6, 6)


def test_baselines_shapes():
    chunks, _ = ffm.generate_stream(20, 16, 8, 1, seed=4)
    assert np.asarray(ffm.ced_describe(chunks)).shape == (20, 10)
    assert np.asarray(ffm.ced_metafeatures(chunks[0])).shape == (10,)
    assert np.asarray(ffm.pca_describe(chunks)).shape == (20, 2)


def test_metrics_against_sklearn():
    metrics = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(5, 40))
        truth = rng.integers(0, 4, n).tolist()
        pred = rng.integers(0, 3, n).tolist()
        s = ffm.external_scores(truth, pred)
        assert s["nmi"] == pytest.approx(
            metrics.normalized_mutual_info_score(truth, pred, average_method="geometric"), abs=1e-9)
        assert s["adjusted_rand"] == pytest.approx(metrics.adjusted_rand_score(truth, pred), abs=1e-9)
        assert s["homogeneity"] == pytest.approx(metrics.homogeneity_score(truth, pred), abs=1e-9)
        assert s["completeness"] == pytest.approx(metrics.completeness_score(truth, pred), abs=1e-9)

        X = rng.normal(size=(n, 3))
        labels = rng.integers(0, 3, n)
        labels[:3] = [0, 1, 2]
        i = ffm.internal_scores(X, labels.tolist())
        assert i["silhouette"] == pytest.approx(metrics.silhouette_score(X, labels), abs=1e-9)
        assert i["calinski_harabasz"] == pytest.approx(metrics.calinski_harabasz_score(X, labels), rel=1e-9)
        # sklearn uses expanded-form distances here, good to about 1e-9 relative.
        assert i["davies_bouldin"] == pytest.approx(metrics.davies_bouldin_score(X, labels), rel=1e-6)


def test_paired_t_test():
    t, p, significant = ffm.paired_t_test([1.0, 2.0, 3.0, 4.0], [0.5, 1.0, 2.0, 2.5])
    stats = pytest.importorskip("scipy.stats")
    ref = stats.ttest_rel([1.0, 2.0, 3.0, 4.0], [0.5, 1.0, 2.0, 2.5])
    assert t == pytest.approx(ref.statistic, rel=1e-9)
    assert p == pytest.approx(ref.pvalue, rel=1e-6)
    assert significant == (ref.pvalue < 0.05)


def test_errors_carry_a_kind():
    with pytest.raises(ffm.FfmError) as info:
        ffm.generate_stream(3, 2, 4, 3)
    assert info.value.kind == "configuration"
    with pytest.raises(ValueError):
        ffm.kmeans(np.zeros((3, 2)), 4)


@pytest.mark.skipif("FFM_CLI" not in os.environ, reason="FFM_CLI not set")
def test_cli_round_trip(tmp_path):
    cli = os.environ["FFM_CLI"]

    def run(*args):
        subprocess.run([cli, *args], check=True, capture_output=True)

    run("generate", "--chunks", "60", "--chunk-size", "32", "--features", "16", "--drifts", "1",
        "--seed", "2", "--out", str(tmp_path / "s.f32"))
    run("describe", "--in", str(tmp_path / "s.f32"), "--n", "4", "--out", str(tmp_path / "m.json"))
    meta = json.loads((tmp_path / "m.json").read_text())
    assert len(meta["R"]) == 60 and len(meta["R"][0]) == 4

    run("identify", "--meta", str(tmp_path / "m.json"), "--c-min", "2", "--c-max", "5",
        "--out", str(tmp_path / "i.json"))
    assert json.loads((tmp_path / "i.json").read_text())["best_c"] == 2

    bad = subprocess.run([cli, "cluster", "--meta", str(tmp_path / "missing.json"), "--concepts", "2",
                          "--out", str(tmp_path / "c")], capture_output=True, text=True)
    assert bad.returncode == 1
    assert bad.stderr.startswith("error kind=io")
