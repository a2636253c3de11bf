from matrad.partitions import parse_aug, partitions_of
from matrad.trees import (
    LEAF,
    associahedron_cells,
    is_nondegenerate,
    leveled_nodes,
    partition_from_tree,
    tonks_project,
    tree_dim,
    tree_from_partition,
)


def P(text):
    return parse_aug(text)


class TestLeafDecomposition:
    def test_figure_one(self):
        t = tree_from_partition(P("5|13|24"))
        assert t.leaf_decomposition == ((1, 1, 1, 1, 2), (2, 2, 1), (3,))

    def test_corolla(self):
        for n in (1, 2, 3, 4):
            t = tree_from_partition((tuple(range(1, n + 1)),))
            assert t.leaf_decomposition == ((n + 1,),)
            assert leveled_nodes(t) == (1, (LEAF,) * (n + 1))

    def test_up_rooted(self):
        t = tree_from_partition(P("1|2"), orientation="up")
        assert t.orientation == "up"
        assert t.leaf_decomposition == tree_from_partition(P("2|1")).leaf_decomposition


class TestRoundTrip:
    def test_exhaustive(self):
        for n in range(1, 6):
            for p in partitions_of(tuple(range(1, n + 1))):
                t = tree_from_partition(p)
                assert partition_from_tree(t) == p


class TestTonks:
    def test_level_exchange_fiber(self):
        # the two leveled binary trees sharing a shape project equally,
        # together with the degenerate edge between them
        assert tonks_project(P("13|2")) == tonks_project(P("3|1|2"))
        assert tonks_project(P("13|2")) == tonks_project(P("1|3|2"))

    def test_vertex_to_binary(self):
        t = tonks_project(P("1|2|3"))
        assert tree_dim(t) == 0

    def test_k5_face_counts(self):
        cells = associahedron_cells(4)
        by_dim = {}
        for t in cells:
            by_dim.setdefault(tree_dim(t), 0)
            by_dim[tree_dim(t)] += 1
        assert by_dim == {3: 1, 2: 9, 1: 21, 0: 14}

    def test_surjective_constant_on_fibers(self):
        totals = {3: 11, 4: 45}  # face counts of K_4, K_5
        for n in range(1, 6):
            seen = {}
            for p in partitions_of(tuple(range(1, n + 1))):
                t = tonks_project(p)
                seen.setdefault(t, []).append(p)
            if n in totals:
                assert len(seen) == totals[n]
            # a non-degenerate cell keeps its dimension in the image
            for t, fiber in seen.items():
                for p in fiber:
                    if is_nondegenerate(p):
                        assert tree_dim(t) == n - len(p)


class TestNondegenerate:
    def test_spec_cases(self):
        assert is_nondegenerate(P("2|13"))
        assert not is_nondegenerate(P("13|2"))
        assert is_nondegenerate(P("1|2|3"))

    def test_oracle_equivalence(self):
        # nondegenerate iff the tree keeps the full dimension
        for n in range(1, 6):
            for p in partitions_of(tuple(range(1, n + 1))):
                t = tonks_project(p)
                assert is_nondegenerate(p) == (tree_dim(t) == n - len(p))
