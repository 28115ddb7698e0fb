import numpy as np
import pytest

from bsvm.data import LabeledDataset
from bsvm.kernels import KernelSpec
from bsvm.multiclass import OvoModel, predict_ovo, predict_ovo_batch, train_ovo
from bsvm.solver import BinaryModel, SolverConfig, decision_value
from conftest import blobs
from oracles import nearest_centroid


def test_pair_counts():
    assert len(train_ovo(blobs(0, classes=("a", "b"))).pairs) == 1
    seven = train_ovo(blobs(0, n_per_class=8, classes=tuple("abcdefg")))
    assert len(seven.pairs) == 21
    assert sorted((a, b) for a, b, _ in seven.pairs) == [
        (a, b) for i, a in enumerate("abcdefg") for b in "abcdefg"[i + 1:]]


def test_pair_orientation():
    model = train_ovo(blobs(1), KernelSpec("rbf", 0.5))
    for a, b, m in model.pairs:
        assert model.labels.index(a) < model.labels.index(b)
        # label_a is the +1 side
        assert decision_value(m, np.mean(blobs(1).vectors[np.array(blobs(1).labels) == a], axis=0)) > 0


def test_no_beliefs_means_unit_weights():
    model = train_ovo(blobs(2), use_beliefs=False)
    assert all(np.all(m.sv_beliefs == 1.0) for _, _, m in model.pairs)
    assert not model.use_beliefs


def test_beliefs_are_global_not_per_pair():
    from bsvm.belief import assign_beliefs
    data = blobs(3)
    model = train_ovo(data, use_beliefs=True)
    glob = assign_beliefs(data.vectors, data.labels).normalized
    lab = data.label_array
    for a, b, m in model.pairs:
        idx = np.flatnonzero((lab == a) | (lab == b))
        np.testing.assert_array_equal(m.sv_beliefs, glob[idx][m.sv_indices])


def test_fewer_than_two_classes():
    with pytest.raises(ValueError, match="at least 2 classes"):
        train_ovo(blobs(0, classes=("a",)))


def test_separable_matches_nearest_centroid():
    data = blobs(4, spread=0.4)
    model = train_ovo(data)
    probe = np.random.default_rng(0).uniform(-4, 4, (200, 2))
    pred, _, _ = predict_ovo_batch(model, data.vectors)
    assert pred == list(data.labels)
    want = nearest_centroid(data.vectors, data.labels, data.vectors)
    assert pred == want


def _const_binary(bias):
    return BinaryModel(np.zeros((1, 2)), np.ones(1), np.ones(1), np.ones(1), bias, KernelSpec("linear"), 1.0)


def test_votes_strict_majority():
    model = OvoModel(("a", "b", "c"), (("a", "b", _const_binary(1.0)), ("a", "c", _const_binary(0.5)),
                                       ("b", "c", _const_binary(-0.1))), KernelSpec("linear"))
    label, votes, _ = predict_ovo(model, (0.3, 0.3))
    assert votes == {"a": 2, "b": 0, "c": 1}
    assert label == "a"


def test_two_class_is_sign():
    model = OvoModel(("a", "b"), (("a", "b", _const_binary(-0.25)),), KernelSpec("linear"))
    assert predict_ovo(model, (0.0, 0.0))[0] == "b"


def test_circular_tie_broken_by_margin():
    pairs = (("a", "b", _const_binary(0.3)), ("a", "c", _const_binary(-0.5)), ("b", "c", _const_binary(0.2)))
    model = OvoModel(("a", "b", "c"), pairs, KernelSpec("linear"))
    x = (0.0, 0.0)
    # exhaustive evaluation of the three pair decisions
    dvs = {(a, b): decision_value(m, x) for a, b, m in pairs}
    winners = [a if v >= 0 else b for (a, b), v in dvs.items()]
    assert sorted(winners) == ["a", "b", "c"]
    agg = {lab: sum(abs(v) for (a, b), v in dvs.items() if (a if v >= 0 else b) == lab) for lab in "abc"}
    expected = max(agg, key=agg.get)
    label, votes, margins = predict_ovo(model, x)
    assert votes == {"a": 1, "b": 1, "c": 1}
    assert margins == pytest.approx(agg)
    assert label == expected == "c"


def test_full_tie_falls_back_to_label_order():
    pairs = (("a", "b", _const_binary(0.5)), ("a", "c", _const_binary(-0.5)), ("b", "c", _const_binary(0.5)))
    model = OvoModel(("a", "b", "c"), pairs, KernelSpec("linear"))
    assert predict_ovo(model, (0, 0))[0] == "a"


def test_label_permutation_equivariance():
    data = blobs(5, spread=0.8, sep=1.5)
    rename = {"a": "z", "b": "x", "c": "y"}
    renamed = data.relabel(rename)
    cfg = SolverConfig(seed=3)
    m1 = train_ovo(data, config=cfg)
    m2 = train_ovo(renamed, config=cfg)
    probe = np.random.default_rng(1).uniform(-3, 3, (300, 2))
    p1, _, _ = predict_ovo_batch(m1, probe)
    p2, _, _ = predict_ovo_batch(m2, probe)
    assert [rename[p] for p in p1] == p2


def test_determinism():
    data = blobs(6, spread=0.9, sep=1.0)
    a = train_ovo(data, config=SolverConfig(seed=7))
    b = train_ovo(data, config=SolverConfig(seed=7))
    for (_, _, ma), (_, _, mb) in zip(a.pairs, b.pairs):
        np.testing.assert_array_equal(ma.sv_alphas, mb.sv_alphas)
        assert ma.bias == mb.bias


def test_precomputed_beliefs_are_used():
    data = blobs(7)
    m = np.linspace(0.1, 1.0, len(data))
    model = train_ovo(LabeledDataset(data.vectors, data.labels, m))
    lab = data.label_array
    a, b, pair = model.pairs[0]
    idx = np.flatnonzero((lab == a) | (lab == b))
    np.testing.assert_array_equal(pair.sv_beliefs, m[idx][pair.sv_indices])
