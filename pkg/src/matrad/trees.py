"""Planar leveled trees (PLTs), the partition <-> tree bijections, and the
projection to planar rooted trees (levels forgotten).

A down-rooted PLT with k levels is stored by its leaf decomposition: a
sequence of leaf sequences (n_1, ..., n_k), n_i listing the corolla sizes in
level i from left to right (size 1 = no vertex, the branch passes through).
Planar rooted trees without levels are nested tuples; a leaf is the string
"L", an internal node is the tuple of its children (always >= 2 of them).
"""

from dataclasses import dataclass

from .partitions import embed, pi, partitions_of

LEAF = "L"


@dataclass(frozen=True)
class LeveledTree:
    leaf_decomposition: tuple
    orientation: str = "down"

    def __post_init__(self):
        assert self.orientation in ("down", "up")

    @property
    def levels(self):
        return len(self.leaf_decomposition)

    @property
    def leaves(self):
        return sum(self.leaf_decomposition[0]) if self.leaf_decomposition else 1


def tree_from_partition(p, orientation="down"):
    """The bijection from partitions of an n-set to PLTs with n+1 leaves."""
    p = pi(tuple(p))
    if orientation == "up":
        return LeveledTree(_leaf_decomposition(tuple(reversed(p))), "up")
    return LeveledTree(_leaf_decomposition(p), "down")


def _leaf_decomposition(p):
    remaining = sorted(x for blk in p for x in blk)
    seqs = []
    for blk in p:
        ep = embed(blk, tuple(remaining))
        seqs.append(tuple(len(b) + 1 for b in ep))
        remaining = [x for x in remaining if x not in set(blk)]
    return tuple(seqs)


def leveled_nodes(tree):
    """Rebuild the PLT as a nested structure of (level, children) nodes.

    Levels count from 1 at the top (away from the root); leaves are LEAF.
    """
    ld = tree.leaf_decomposition
    k = len(ld)
    frontier = [LEAF] * ld[-1][0] if k else [LEAF]
    current = (k, tuple(frontier)) if k else LEAF
    for i in range(k - 2, -1, -1):
        sizes = ld[i]
        slot = iter(sizes)
        current = _attach(current, slot, i + 1)
    return current


def _attach(node, sizes, level):
    if node == LEAF:
        s = next(sizes)
        if s == 1:
            return LEAF
        return (level, (LEAF,) * s)
    lvl, children = node
    return (lvl, tuple(_attach(c, sizes, level) for c in children))


def partition_from_tree(tree):
    """Inverse bijection for ground {1..n}: label vertices by adjacent leaves."""
    assert tree.orientation == "down"
    root = leveled_nodes(tree)
    paths = []
    _leaf_paths(root, (), paths)
    n_leaves = len(paths)
    blocks = {}
    for ell in range(1, n_leaves):
        lvl = _meet_level(root, paths[ell - 1], paths[ell])
        blocks.setdefault(lvl, []).append(ell)
    k = tree.levels
    return tuple(tuple(sorted(blocks.get(i, ()))) for i in range(1, k + 1))


def _leaf_paths(node, path, out):
    if node == LEAF:
        out.append(path)
        return
    _, children = node
    for i, c in enumerate(children):
        _leaf_paths(c, path + (i,), out)


def _meet_level(root, p1, p2):
    node = root
    i = 0
    while i < len(p1) and i < len(p2) and p1[i] == p2[i]:
        node = node[1][p1[i]]
        i += 1
    return node[0]


def shape(node):
    """Forget levels: the underlying planar rooted tree as nested tuples."""
    if node == LEAF:
        return LEAF
    _, children = node
    return tuple(shape(c) for c in children)


def tonks_project(p):
    """Project a partition of {1..n} to its planar rooted tree (no levels)."""
    return shape(leveled_nodes(tree_from_partition(p)))


def tree_dim(t):
    """Dimension of the associahedron cell indexed by a planar tree."""
    if t == LEAF:
        return 0
    leaves = _count_leaves(t)
    return leaves - 1 - _count_nodes(t)


def _count_leaves(t):
    if t == LEAF:
        return 1
    return sum(_count_leaves(c) for c in t)


def _count_nodes(t):
    if t == LEAF:
        return 0
    return 1 + sum(_count_nodes(c) for c in t)


def is_nondegenerate(p):
    """Blockwise-consecutive test: block i consecutive in the remaining ground."""
    p = pi(tuple(p))
    remaining = sorted(x for blk in p for x in blk)
    for blk in p:
        positions = [remaining.index(x) for x in blk]
        if positions != list(range(min(positions), min(positions) + len(blk))):
            return False
        remaining = [x for x in remaining if x not in set(blk)]
    return True


def associahedron_cells(n):
    """Cells of K_{n+1} as planar trees, via the image of P_n."""
    cells = set()
    for p in partitions_of(tuple(range(1, n + 1))):
        cells.add(tonks_project(p))
    return cells


def fmt_tree(t):
    if t == LEAF:
        return "*"
    return "(" + "".join(fmt_tree(c) for c in t) + ")"
