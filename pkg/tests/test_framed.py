from matrad.bipartitions import BMat, one_by_one, parse_bip
from matrad.partitions import parse_aug
from matrad.framed import (
    Prod,
    canon,
    canonicalize_path,
    cell_coherent,
    col_dim,
    dim,
    dimensionally_complete,
    ent_dim,
    formal_factors,
    formal_length,
    height,
    levels,
    restrict,
    row_dim,
    td_coherent,
    td_dimension,
    value_bip,
)

import pytest


def B(text):
    return parse_bip(text)


def M(rows, aframe, bframe):
    return BMat(rows, aframe, bframe)


def framed_ex_c3():
    f11_1 = M(((B("12/0"),), (B("0/0"),)), ((),), ((1, 2), ()))
    f11_2 = M(((B("3/1"),),), ((1,),), ((3,),))
    f11_3 = M(((B("0/0"), B("0/23")),), ((), (2, 3)), ((),))
    e11 = Prod((f11_1, f11_2, f11_3))
    g1 = M(((B("4/1"),), (B("0/1"),)), ((1,),), ((4,), ()))
    h1 = M(((B("5/0"),),), ((),), ((5,),))
    h2 = M(((B("0/2"),),), ((2,),), ((),))
    g2 = M(((B("5/0"), Prod((h1, h2))),), ((), (2,)), ((5,),))
    inner = Prod((g1, g2))
    f21_1 = M(((inner,), (B("0/12"),)), ((1, 2),), ((4, 5), ()))
    f21_2 = M(((B("6/0"), B("6/0"), B("6/3")),), ((), (), (3,)), ((6,),))
    e21 = Prod((f21_1, f21_2))
    return M(((e11,), (e21,)), ((1, 2, 3),), ((1, 2, 3), (4, 5, 6)))


class TestDimension:
    def test_worked_example_one(self):
        C = M(
            ((B("0/12"), B("0/0")), (B("3|4/1|2"), B("34/0"))),
            ((1, 2), ()),
            ((), (3, 4)),
        )
        assert (row_dim(C), col_dim(C), ent_dim(C)) == (1, 1, 2)
        assert dim(C) == 4

    def test_worked_example_two(self):
        C = M(
            ((B("0|1/1|0"), B("0|1/2|0")), (B("0|2/1|0"), B("0|2|0/0|2|0"))),
            ((1,), (2,)),
            ((1,), (2,)),
        )
        assert (row_dim(C), col_dim(C), ent_dim(C)) == (2, 2, 1)
        assert dim(C) == 5

    def test_worked_example_three(self):
        C3 = framed_ex_c3()
        assert (row_dim(C3), col_dim(C3), ent_dim(C3)) == (2, 1, 3)
        assert dim(C3) == 6

    def test_null_matrix(self):
        N = M(((B("0/0"),),), ((),), ((),))
        assert dim(N) == 0

    def test_pi_reduction_case(self):
        C = M(((B("0/1"), B("0|0/0|2")),), ((1,), (2,)), ((),))
        assert dim(C) == 1

    def test_additivity_over_factors(self):
        c = one_by_one(B("56|7|8/1|23|4"))
        from matrad.bipartitions import factorize

        assert dim(c) == sum(dim(F) for F in factorize(c))


class TestCanonical:
    def test_trivial_chain_collapses(self):
        # all-elementary products are plain bipartitions
        x = canon(framed_ex_c3())
        e11 = x.entry(1, 1)
        assert e11 == B("12|3|0/0|1|23")

    def test_height(self):
        assert height(canon(framed_ex_c3())) in (3,)
        assert height(B("1|2/1|2")) == 1

    def test_example_canonical(self):
        # the 1x2 row with length-3 entries refactors into maximal length 3
        row = M(
            ((B("2|4|3/0|0|0"), B("2|3|4/2|4|3")),),
            ((), (2, 3, 4)),
            ((2, 3, 4),),
        )
        col = M(
            ((B("1/1"),), (B("0/1"),), (B("0/1"),), (B("0/1"),)),
            ((1,),),
            ((1,), (), (), ()),
        )
        x = canon(Prod((col, row)))
        assert isinstance(x, Prod)
        assert len(x.factors) == 3
        mid = x.factors[1]
        assert (mid.q, mid.p) == (3, 2)
        last = x.factors[2]
        assert list(last.rows[0]) == [B("4|3/0|0"), B("3|4/0|0"), B("3|4/4|3")]

    def test_canonical_idempotent(self):
        for x in (framed_ex_c3(), B("0|1/12|0")):
            once = canon(x)
            assert canon(once) == once

    def test_canonicalize_path(self):
        x = canon(framed_ex_c3())
        path = levels(x)
        assert canonicalize_path(path) == path
        # repeated levels are suppressed
        padded = (path[0],) + path
        assert canonicalize_path(padded) == path

    def test_invalid_path(self):
        with pytest.raises(ValueError):
            canonicalize_path((B("1/1"), one_by_one(B("2/2"))))


class TestTD:
    def test_td_coherent_ex(self):
        C = M(
            ((B("1|0|2/0|1|0"), B("12/0")),),
            ((1,), ()),
            ((1, 2),),
        )
        assert cell_coherent(C, maximal=True)
        assert not dimensionally_complete(C)
        assert not td_coherent(C)
        D = M(((B("1|2/0|1"), B("12/0")),), ((1,), ()), ((1, 2),))
        assert td_coherent(D)
        assert td_dimension(D) == 2

    def test_coherent_elementary_is_td(self):
        E = M(
            ((B("0/1"),), (B("1/1"),), (B("0/1"),)),
            ((1,),),
            ((), (1,), ()),
        )
        assert td_coherent(E)

    def test_coherent_bipartition_dimension(self):
        # the length in the dimension formula is the essential one: the
        # unit identification deletes the null factor of the (0,0) biblock
        c = B("123|0|0|4|5/1|0|2|0|345")
        assert td_coherent(c)
        assert formal_length(c) == 4
        assert td_dimension(c) == len(c.iset) + len(c.oset) - formal_length(c)
        d = B("12|3|0/0|2|13")
        assert td_coherent(d)
        assert td_dimension(d) == len(d.iset) + len(d.oset) - d.r

    def test_22cframed(self):
        # the maximally totally coherent 2-level path has dimension 3 = 2+2-1
        C2 = M(
            (
                (
                    Prod(
                        (
                            M(((B("0/1"),), (B("0|0/1|0"),)), ((1,),), ((), ())),
                            M(((B("1|0/0|0"), B("1/0")),), ((), ()), ((1,),)),
                        )
                    ),
                    Prod(
                        (
                            M(((B("0/2"),), (B("0|0/0|2"),)), ((2,),), ((), ())),
                            M(((B("1/0"), B("1/0")),), ((), ()), ((1,),)),
                        )
                    ),
                ),
                (
                    Prod(
                        (
                            M(((B("0/1"),), (B("0/1"),)), ((1,),), ((), ())),
                            M(((B("0|2/0|0"), B("2/0")),), ((), ()), ((2,),)),
                        )
                    ),
                    Prod(
                        (
                            M(((B("0/0"),), (B("0/0"),)), ((),), ((), ())),
                            M(((B("2|0/2|0"),),), ((2,),), ((2,),)),
                        )
                    ),
                ),
            ),
            ((1,), (2,)),
            ((1,), (2,)),
        )
        x = canon(C2)
        assert dim(x) == 3
        assert cell_coherent(x, maximal=True)
        assert td_coherent(x)
        assert td_dimension(x) == 3


class TestFormal:
    def test_height_one_single_factor(self):
        E = M(((B("1/12"), B("1/3")), (B("2/12"), B("2/3"))),
              ((1, 2), (3,)), ((1,), (2,)))
        assert formal_factors(E) == (E,)
        assert formal_length(E) == 1

    def test_restriction(self):
        x = canon(framed_ex_c3())
        inner = None
        for F in formal_factors(x):
            for e in F.entries():
                if isinstance(e, Prod):
                    for G in e.factors:
                        if (G.q, G.p) == (2, 1) and isinstance(
                            G.entry(1, 1), Prod
                        ):
                            inner = G
        assert inner is not None
        sub = restrict(x, inner)
        assert sub == canon(inner)

    def test_restrict_missing(self):
        x = canon(framed_ex_c3())
        with pytest.raises(ValueError):
            restrict(x, one_by_one(B("9/9")))
