import json

import numpy as np
import pytest

import sgce

TAXONOMY = "!root entity\nanimal\tentity\ndog\tanimal\ncat\tanimal\nvehicle\tentity\ncar\tvehicle\n"

PAIR = {
    "name": "pair",
    "graphs": [
        {"id": "x", "class_true": None, "class_pred": "a", "nodes": [{"id": 0, "label": "Dog"}], "edges": []},
        {
            "id": "y",
            "class_true": None,
            "class_pred": "b",
            "nodes": [{"id": 0, "label": "cat"}, {"id": 1, "label": "car"}],
            "edges": [{"src": 0, "dst": 1, "label": "near"}],
        },
    ],
}


@pytest.fixture(scope="module")
def costs():
    return sgce.CostModel(sgce.load_taxonomy(TAXONOMY))


def test_parse_and_ged(costs):
    ds = sgce.parse_dataset(json.dumps(PAIR))
    assert len(ds) == 2
    assert ds.ids == ["x", "y"]
    assert ds[0].labels == ["dog"]
    r = sgce.bipartite_ged(ds[0], ds[1], costs)
    assert r["value"] == pytest.approx(5.0)
    assert r["node_edits"] == 2 and r["edge_edits"] == 1
    assert sgce.exact_ged(ds[0], ds[1], costs)["value"] == pytest.approx(5.0)
    m = sgce.ged_matrix(ds, costs)
    assert m.shape == (2, 2)
    assert m[0, 1] == m[1, 0] == pytest.approx(5.0)


def test_errors_are_translated():
    with pytest.raises(sgce.Error, match="parse_error"):
        sgce.parse_dataset("{")
    with pytest.raises(sgce.Error, match="cycle"):
        sgce.load_taxonomy("!root r\na\tb\nb\ta\n")


def test_synthetic_pipeline():
    ds, tax_text, vec_text = sgce.synthetic_corpus()
    assert len(ds) == 60
    costs = sgce.CostModel(sgce.load_taxonomy(tax_text))
    wv = sgce.WordVectors.parse(vec_text)
    ged = sgce.ged_matrix(ds, costs)
    model, losses, samples, warnings = sgce.train(ds, ged, wv, seed=1, epochs=10, d_out=32)
    assert len(losses) == 10 and losses[-1] < losses[0]
    assert len(samples) == 885 and not warnings
    emb = sgce.embed_all(model, ds, wv)
    assert emb.shape == (60, 32)
    np.testing.assert_allclose(emb[4], model.embed(ds[4], wv))

    rankings = [sgce.rank_candidates(emb, q, ds.ids) for q in range(len(ds))]
    report = sgce.retrieve(ds, rankings, costs, k=3)
    assert len(report["queries"]) == 60
    for q in report["queries"]:
        assert q["target_class"] != q["query_class"]

    ged_rankings = [
        [(int(j), -float(ged[q, j])) for j in sorted((j for j in range(60) if j != q), key=lambda j: (ged[q, j], ds.ids[j]))]
        for q in range(60)
    ]
    self_report = sgce.retrieve(ds, ged_rankings, costs, method="ged")
    metrics = sgce.evaluate(ds, self_report, ged, costs)
    assert all(row["binary_ndcg"] == 1.0 for row in metrics["ranking"])

    gram = sgce.pyramid_gram(ds)
    np.testing.assert_array_equal(gram, gram.T)
    assert np.linalg.eigvalsh(gram).min() >= -1e-8


def test_cli_entry(tmp_path):
    code, out, err = sgce.run_cli(["synth", "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "dataset.json").exists()
    code, _, err = sgce.run_cli(["ged", "--dataset", str(tmp_path / "none.json"), "--taxonomy", "x", "--out", str(tmp_path)])
    assert code == 2
    assert json.loads(err)["error"] == "missing_artifact"
