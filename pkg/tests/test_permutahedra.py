import json

from matrad.partitions import parse_aug, partitions_of
from matrad.permutahedra import (
    boundary_perm_signed,
    boundary_perm_z2,
    d_squared_zero,
    euler,
    export_dot,
    export_json,
    f_vector,
    f_vector_oracle,
    join_decompose,
    join_reassemble,
    join_table,
    perm_cells,
)


def P(text):
    return parse_aug(text)


class TestBoundary:
    def test_top_cell_p3(self):
        faces = boundary_perm_z2(P("123"))
        expect = {P(t) for t in ("1|23", "2|13", "3|12", "12|3", "13|2", "23|1")}
        assert faces == expect

    def test_vertex(self):
        assert boundary_perm_z2(P("1|2|3")) == set()

    def test_dd_zero_top_p4(self):
        acc = set()
        for f in boundary_perm_z2(P("1234")):
            acc ^= boundary_perm_z2(f)
        assert acc == set()

    def test_dd_zero_complexes(self):
        for n in range(1, 7):
            assert d_squared_zero(n)

    def test_dd_zero_signed(self):
        for n in range(1, 6):
            assert d_squared_zero(n, signed=True)

    def test_signed_reduces_to_z2(self):
        for p in ("1234", "12|34", "134|2"):
            assert set(boundary_perm_signed(P(p))) == boundary_perm_z2(P(p))


class TestFVector:
    def test_matches_oracle(self):
        for n in range(1, 7):
            assert f_vector(n) == f_vector_oracle(n)

    def test_euler(self):
        for n in range(1, 7):
            assert euler(n) == 1


class TestJoin:
    def test_p1_p2_table(self):
        rows = join_table(1, 2)
        assert len(rows) == 13
        table = {tuple(c): (a, b) for _, a, b, c in rows}
        # the thirteen rows of the paper's table
        expect = {
            "123": ("1", "12"),
            "12|3": ("1|0", "1|2"),
            "13|2": ("1|0", "2|1"),
            "1|23": ("1|0", "0|12"),
            "2|13": ("0|1", "1|2"),
            "3|12": ("0|1", "2|1"),
            "23|1": ("0|1", "12|0"),
            "1|2|3": ("1|0|0", "0|1|2"),
            "1|3|2": ("1|0|0", "0|2|1"),
            "2|1|3": ("0|1|0", "1|0|2"),
            "3|1|2": ("0|1|0", "2|0|1"),
            "2|3|1": ("0|0|1", "1|2|0"),
            "3|2|1": ("0|0|1", "2|1|0"),
        }
        assert len(expect) == 13
        for c_text, (a_text, b_text) in expect.items():
            assert table[P(c_text)] == (P(a_text), P(b_text))

    def test_w_on_p1_p1(self):
        assert join_decompose(P("1|2"), 1, 1) == (P("1|0"), P("0|1"))
        assert join_decompose(P("2|1"), 1, 1) == (P("0|1"), P("1|0"))

    def test_subdivision_example(self):
        # 1|234 = 1|2 U 0|34, where 0|34 is 0|12 over the second ground
        # shifted by max{1,2} = 2 inside the partitioned union
        alpha, beta = join_decompose(P("1|234"), 2, 2)
        assert (alpha, beta) == (P("1|2"), P("0|12"))
        assert join_reassemble(alpha, beta) == P("1|234")

    def test_bijection(self):
        for m, n in ((1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (1, 5)):
            seen = set()
            for c in partitions_of(tuple(range(1, m + n + 1))):
                a, b = join_decompose(c, m, n)
                assert join_reassemble(a, b) == c
                seen.add((a, b))
            assert len(seen) == len(partitions_of(tuple(range(1, m + n + 1))))


class TestExports:
    def test_json_schema(self):
        data = json.loads(export_json(3))
        assert {c["label"] for c in data["cells"]} >= {"123", "1|2|3"}
        assert len(data["cells"]) == 13
        assert len(data["boundary"]) == 13

    def test_dot(self):
        out = export_dot(2)
        assert out.startswith("digraph")
        assert '"12"' in out


class TestCells:
    def test_grading(self):
        cells = perm_cells(4)
        assert sorted(cells) == [0, 1, 2, 3]
        assert len(cells[3]) == 1
