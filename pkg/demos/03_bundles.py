"""Bundles: batch transfer without batch learning.

A bundle is an ordered batch of flagged samples handed to one kernel call.
Each sample is still processed by a single infer-then-train step, so the
outputs are identical to feeding the samples one by one; only the invocation
overhead is amortized. Samples flagged infer-only are answered without
touching the model.
"""

import numpy as np

from streamtree import (
    Bundle,
    Hyperparams,
    Sample,
    Tree,
    process_bundle,
    serialize,
    split_into_bundles,
)

rng = np.random.default_rng(3)
params = Hyperparams(dims=2, classes=2, n_min=50, max_nodes=63)

# two drifting interleaved classes plus occasional inference-only probes
stream = []
for i in range(5000):
    label = i % 2
    x = rng.normal(0, 0.3, 2)
    x[0] += (label - 0.5) * 2.5
    stream.append(Sample(x.astype(np.float32), label, train=rng.random() < 0.9))

bundled_tree = Tree(params)
outputs = []
for bundle in split_into_bundles(stream, capacity=512):
    outputs.extend(process_bundle(bundled_tree, bundle))

single_tree = Tree(params)
reference = [
    single_tree.train(s) if s.train else single_tree.infer(s.features)
    for s in stream
]

print(f"processed {len(stream)} samples in bundles of 512")
print(f"outputs identical to one-at-a-time calls: {outputs == reference}")
print(f"final models byte-identical: {serialize(bundled_tree) == serialize(single_tree)}")

infer_only = sum(not s.train for s in stream)
hits = sum(o == s.label for o, s in zip(outputs, stream))
print(f"\n{infer_only} samples were inference-only probes")
print(f"prequential-style accuracy across the stream: {hits / len(stream):.3f}")
print(f"final nodes: {bundled_tree.node_count}")
