"""Round-trip and layout tests for the flat snapshot format."""

import numpy as np
import pytest

from streamtree.datasets import DatasetSpec, generate_clusters
from streamtree.serialize import (
    FORMAT_VERSION,
    deserialize,
    model_bytes,
    node_record_bytes,
    serialize,
)
from streamtree.tree import Hyperparams, Sample, Tree


def trained_tree(seed=0, n=4000, max_nodes=63):
    params = Hyperparams(dims=3, classes=5, n_min=100, tau=0.1, max_nodes=max_nodes)
    tree = Tree(params)
    spec = DatasetSpec(5, 3, n, 0.05, 2.0, seed=seed)
    for s in generate_clusters(spec):
        tree.train(s)
    return tree


def test_fresh_tree_round_trip():
    params = Hyperparams(dims=2, classes=3, max_nodes=15)
    tree = Tree(params)
    buf = serialize(tree)
    assert len(buf) == model_bytes(params)
    back = deserialize(buf)
    assert back.node_count == 1
    assert back.params == params or (
        # f32 storage rounds the float fields
        back.params.dims == params.dims and back.params.classes == params.classes
    )
    assert back.arena[0].stats.total == 0
    assert serialize(back) == buf


def test_trained_tree_round_trip_predictions():
    tree = trained_tree()
    assert tree.node_count > 1
    buf = serialize(tree)
    back = deserialize(buf)
    assert back.node_count == tree.node_count
    rng = np.random.default_rng(123)
    probes = rng.uniform(-3, 3, size=(1000, 3)).astype(np.float32)
    for x in probes:
        assert tree.infer(x) == back.infer(x)
    assert serialize(back) == buf


def test_round_trip_preserves_statistics_and_training():
    tree = trained_tree(seed=3, n=1500, max_nodes=31)
    back = deserialize(serialize(tree))
    for idx in tree.leaf_indices():
        a, b = tree.arena[idx].stats, back.arena[idx].stats
        assert a.class_counts.tolist() == b.class_counts.tolist()
        assert a.sketch_estimates.tobytes() == b.sketch_estimates.tobytes()
        assert a.sketch_counts.tolist() == b.sketch_counts.tolist()
        assert a.since_last_attempt == b.since_last_attempt
        assert a.frozen == b.frozen
    # the restored tree keeps learning
    back.train(Sample(np.zeros(3, dtype=np.float32), 1))


def test_deserialize_rejects_corruption():
    tree = trained_tree(seed=1, n=500, max_nodes=15)
    buf = bytearray(serialize(tree))

    bad_magic = bytes(b"XXXX") + bytes(buf[4:])
    with pytest.raises(ValueError, match="magic"):
        deserialize(bad_magic)

    bad_version = bytearray(buf)
    bad_version[4] = FORMAT_VERSION + 1
    with pytest.raises(ValueError, match="version"):
        deserialize(bytes(bad_version))

    with pytest.raises(ValueError):
        deserialize(bytes(buf[: len(buf) // 2]))

    with pytest.raises(ValueError):
        deserialize(bytes(buf[:20]))

    # node_count above capacity
    bad_count = bytearray(buf)
    bad_count[30:34] = (10**6).to_bytes(4, "little")
    with pytest.raises(ValueError):
        deserialize(bytes(bad_count))

    # delta outside (0, 1)
    bad_delta = bytearray(buf)
    bad_delta[38:42] = np.float32(2.0).tobytes()
    with pytest.raises(ValueError):
        deserialize(bytes(bad_delta))


def test_deserialize_rejects_broken_topology():
    # a 3-node tree: root internal at slot 0, leaves at 1 and 2
    tree = Tree(Hyperparams(dims=3, classes=5, max_nodes=3))
    tree._split(0, 0, 0.0)
    assert tree.node_count == 3
    buf = serialize(tree)
    header = 50

    cyclic = bytearray(buf)
    cyclic[header + 10 : header + 14] = (0).to_bytes(4, "little")  # left -> root
    with pytest.raises(ValueError, match="twice"):
        deserialize(bytes(cyclic))

    orphaned = bytearray(buf)
    orphaned[header] = 0  # root flipped to a leaf; slots 1, 2 unreachable
    with pytest.raises(ValueError, match="not reachable"):
        deserialize(bytes(orphaned))


def test_model_bytes_affine_in_capacity():
    def params(nd):
        return Hyperparams(dims=4, classes=3, max_nodes=nd)

    record = node_record_bytes(4, 3, 16)
    assert model_bytes(params(2)) - model_bytes(params(1)) == record
    assert model_bytes(params(128)) - model_bytes(params(64)) == 64 * record
    sizes = [model_bytes(params(2**i)) for i in range(8)]
    assert all(b > a for a, b in zip(sizes, sizes[1:]))


def test_model_bytes_matches_serialized_length():
    for dims, classes, nd in [(1, 2, 1), (3, 5, 7), (10, 4, 33)]:
        params = Hyperparams(dims=dims, classes=classes, max_nodes=nd)
        assert len(serialize(Tree(params))) == model_bytes(params)


def test_frozen_flag_survives_round_trip():
    params = Hyperparams(dims=2, classes=2, n_min=20, max_nodes=1)
    tree = Tree(params)
    rng = np.random.default_rng(5)
    for i in range(60):
        x = rng.normal(0, 0.1, 2) + (i % 2) * 4.0
        tree.train(Sample(x.astype(np.float32), i % 2))
    assert tree.arena[0].stats.frozen
    back = deserialize(serialize(tree))
    assert back.arena[0].stats.frozen
    assert serialize(back) == serialize(tree)


def test_serialization_deterministic_across_identical_runs():
    assert serialize(trained_tree(seed=7)) == serialize(trained_tree(seed=7))
