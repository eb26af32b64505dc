"""Flat binary tree snapshots.

A serialized tree is one contiguous little-endian buffer sized for the full
arena capacity, so a model can be copied into a device buffer once and
updated in place. Layout:

  header (50 bytes):
    magic "HTRE" | u16 version | u32 max_nodes, dims, classes, n_quantiles,
    n_pt, n_min, node_count, root | f32 delta, lambda, tau
  then max_nodes fixed-size node records:
    u8 kind (0 leaf, 1 internal) | u8 frozen | u32 split_attr |
    f32 split_value | u32 left | u32 right | K x u64 class_counts |
    K x D x n_quantiles f32 sketch estimates | K x D u64 sketch counts |
    u32 since_last_attempt

Unused arena slots and unused fields (split data on leaves, statistics on
internal nodes) are zero-filled, which makes re-serialization byte-stable
and the total size an exact closed form.
"""

from __future__ import annotations

import struct

import numpy as np

from .tree import Hyperparams, LeafStats, Node, Tree

__all__ = ["serialize", "deserialize", "model_bytes", "node_record_bytes"]

MAGIC = b"HTRE"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sH8I3f")
_NODE_FIXED = struct.Struct("<BBIfII")
_TRAILER = struct.Struct("<I")

_KIND_LEAF = 0
_KIND_INTERNAL = 1


def node_record_bytes(dims: int, classes: int, n_quantiles: int) -> int:
    """Exact size of one arena slot on the wire."""
    return (
        _NODE_FIXED.size
        + 8 * classes
        + 4 * classes * dims * n_quantiles
        + 8 * classes * dims
        + _TRAILER.size
    )


def model_bytes(params: Hyperparams) -> int:
    """Exact serialized size of a tree with the given parameters.

    Affine in max_nodes: header plus max_nodes identical node records.
    """
    return _HEADER.size + params.max_nodes * node_record_bytes(
        params.dims, params.classes, params.n_quantiles
    )


def serialize(tree: Tree) -> bytes:
    """Snapshot the whole arena, including empty capacity, into one buffer."""
    p = tree.params
    record = node_record_bytes(p.dims, p.classes, p.n_quantiles)
    buf = bytearray(model_bytes(p))
    _HEADER.pack_into(
        buf,
        0,
        MAGIC,
        FORMAT_VERSION,
        p.max_nodes,
        p.dims,
        p.classes,
        p.n_quantiles,
        p.n_pt,
        p.n_min,
        tree.node_count,
        tree.root,
        p.delta,
        p.lam,
        p.tau,
    )
    for i, node in enumerate(tree.arena):
        off = _HEADER.size + i * record
        stats = node.stats
        if stats is None:
            _NODE_FIXED.pack_into(
                buf, off, _KIND_INTERNAL, 0,
                node.split_attr, node.split_value, node.left, node.right,
            )
            # statistics block stays zero
        else:
            _NODE_FIXED.pack_into(buf, off, _KIND_LEAF, int(stats.frozen), 0, 0.0, 0, 0)
            pos = off + _NODE_FIXED.size
            for arr, dtype in (
                (stats.class_counts, "<u8"),
                (stats.sketch_estimates, "<f4"),
                (stats.sketch_counts, "<u8"),
            ):
                raw = np.ascontiguousarray(arr).astype(dtype, copy=False).tobytes()
                buf[pos : pos + len(raw)] = raw
                pos += len(raw)
            _TRAILER.pack_into(buf, off + record - _TRAILER.size, stats.since_last_attempt)
    return bytes(buf)


def deserialize(buffer: bytes) -> Tree:
    """Rebuild a tree from a serialize() buffer.

    Rejects bad magic, unknown versions, truncated or oversized buffers, and
    headers whose fields violate the hyperparameter invariants.
    """
    if len(buffer) < _HEADER.size:
        raise ValueError("buffer too short for header")
    (
        magic, version, max_nodes, dims, classes, n_quantiles,
        n_pt, n_min, node_count, root, delta, lam, tau,
    ) = _HEADER.unpack_from(buffer, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    params = Hyperparams(
        dims=dims,
        classes=classes,
        delta=float(delta),
        lam=float(lam),
        tau=float(tau),
        n_min=n_min,
        n_pt=n_pt,
        n_quantiles=n_quantiles,
        max_nodes=max_nodes,
    )
    expected = model_bytes(params)
    if len(buffer) != expected:
        raise ValueError(f"buffer is {len(buffer)} bytes, expected {expected}")
    if not 1 <= node_count <= max_nodes:
        raise ValueError(f"node_count {node_count} outside [1, {max_nodes}]")
    if root >= node_count:
        raise ValueError(f"root index {root} out of range")

    record = node_record_bytes(dims, classes, n_quantiles)
    tree = Tree.__new__(Tree)
    tree.params = params
    tree.root = root
    arena: list[Node] = []
    for i in range(node_count):
        off = _HEADER.size + i * record
        kind, frozen, split_attr, split_value, left, right = _NODE_FIXED.unpack_from(
            buffer, off
        )
        if kind == _KIND_INTERNAL:
            if left >= node_count or right >= node_count:
                raise ValueError(f"node {i} has child index out of range")
            node = Node()
            node.split_attr = split_attr
            node.split_value = float(split_value)
            node.left = left
            node.right = right
        elif kind == _KIND_LEAF:
            stats = LeafStats(params)
            pos = off + _NODE_FIXED.size
            stats.class_counts[:] = np.frombuffer(buffer, "<u8", classes, pos).astype(
                np.int64
            )
            pos += 8 * classes
            stats.sketch_estimates[:] = np.frombuffer(
                buffer, "<f4", classes * dims * n_quantiles, pos
            ).reshape(classes, dims, n_quantiles)
            pos += 4 * classes * dims * n_quantiles
            stats.sketch_counts[:] = np.frombuffer(
                buffer, "<u8", classes * dims, pos
            ).reshape(classes, dims)
            stats.frozen = bool(frozen)
            (stats.since_last_attempt,) = _TRAILER.unpack_from(
                buffer, off + record - _TRAILER.size
            )
            node = Node(stats)
        else:
            raise ValueError(f"node {i} has unknown kind {kind}")
        arena.append(node)
    _check_structure(arena, root)
    tree.arena = arena
    return tree


def _check_structure(arena: list[Node], root: int) -> None:
    # every slot reachable exactly once from the root, so descent terminates
    seen = np.zeros(len(arena), dtype=bool)
    stack = [root]
    while stack:
        idx = stack.pop()
        if seen[idx]:
            raise ValueError(f"node {idx} is reachable twice (cycle or shared child)")
        seen[idx] = True
        node = arena[idx]
        if node.stats is None:
            stack.extend((node.left, node.right))
    if not seen.all():
        orphan = int(np.flatnonzero(~seen)[0])
        raise ValueError(f"node {orphan} is not reachable from the root")
