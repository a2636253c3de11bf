from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from matrad.partitions import (
    adim,
    aug_partitions_of,
    embed,
    fmt_aug,
    ground,
    merge_at,
    mu,
    ordered_bell,
    parse_aug,
    partitions_of,
    pi,
    punion,
    refines,
    split_at,
    vac,
    ResourceLimit,
)


def P(text):
    return parse_aug(text)


class TestEmbed:
    def test_paper_example(self):
        # EP_9{2,3,7,9} = 0|23|0|0|7|9
        assert embed((2, 3, 7, 9), tuple(range(1, 10))) == P("0|23|0|0|7|9")

    def test_identity(self):
        b = (1, 2, 5)
        assert embed(b, b) == (b,)

    def test_empty(self):
        assert embed((), (1, 2, 3)) == P("0|0|0|0")

    def test_not_subset(self):
        with pytest.raises(ValueError):
            embed((4,), (1, 2, 3))

    def test_block_count_law_exhaustive(self):
        # #(b \ a) = q - 1 for all a <= b, #b <= 7
        for nb in range(1, 8):
            b = tuple(range(1, nb + 1))
            for r in range(nb + 1):
                for a in combinations(b, r):
                    ep = embed(a, b)
                    assert ground(ep) == a
                    assert len(b) - len(a) == len(ep) - 1


class TestPartitionedUnion:
    def test_paper_table(self):
        assert punion(P("1|0"), P("1|2")) == P("12|3")
        assert punion(P("0|1"), P("12|0")) == P("23|1")
        assert punion(P("1"), P("12")) == P("123")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            punion(P("1"), P("1|2"))

    def test_associative(self):
        # on compatible triples over disjoint short grounds
        for r in (1, 2, 3):
            for a in aug_partitions_of((1, 2), r):
                for b in aug_partitions_of((1,), r):
                    for c in aug_partitions_of((1, 2), r):
                        left = punion(punion(a, b), c)
                        right = punion(a, punion(b, c))
                        assert left == right

    def test_ground_commutes(self):
        m, n = (1, 2), (1, 2, 3)
        assert punion((m,), (n,)) == punion((n,), (m,))


class TestMu:
    def test_extremes(self):
        a = P("1|2|3")
        assert mu(a, ()) == P("123")
        assert mu(a, (1, 2)) == a

    def test_merge(self):
        assert merge_at(P("1|2|3"), 1) == P("12|3")
        assert merge_at(P("1|2|3"), 2) == P("1|23")

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mu(P("1|2"), (5,))

    def test_composition_law(self):
        # merging twice equals merging once by the composed index set
        for n in range(1, 5):
            g = tuple(range(1, n + 2))
            for alpha in aug_partitions_of(g, n + 1):
                for lam in _subsets(tuple(range(1, n + 1))):
                    mid = mu(alpha, lam)
                    k = len(lam)
                    for lam2 in _subsets(tuple(range(1, k + 1))):
                        direct = mu(mid, lam2)
                        composed = mu(alpha, tuple(lam[i - 1] for i in lam2))
                        assert direct == composed


def _subsets(xs):
    out = [()]
    for x in xs:
        out += [s + (x,) for s in out]
    return out


class TestAction:
    def test_defining_split(self):
        assert split_at(P("12|3"), 1, (1,)) == P("1|2|3")

    def test_empty_split(self):
        assert split_at(P("12|3"), 1, ()) == P("0|12|3")

    def test_bad_subset(self):
        with pytest.raises(ValueError):
            split_at(P("12|3"), 1, (3,))

    def test_round_trip_exhaustive(self):
        # split(merge(alpha, k), k, A_k) == alpha for every alpha, #ground <= 5
        for n in range(1, 6):
            g = tuple(range(1, n + 1))
            for r in range(1, n + 2):
                for alpha in aug_partitions_of(g, r):
                    for k in range(1, r):
                        merged = merge_at(alpha, k)
                        assert split_at(merged, k, alpha[k - 1]) == alpha


class TestPi:
    def test_discard(self):
        a = P("0|23|0|7")
        assert pi(a) == P("23|7")
        assert vac(a) == 2

    def test_empty_ground(self):
        a = P("0|0|0")
        assert pi(a) == ()
        assert adim(a) == 0

    def test_dims(self):
        assert adim(P("1|2|3")) == 0
        assert adim(P("123")) == 2


class TestEnumerate:
    def test_counts_length(self):
        a = (1, 2, 3, 4)
        assert len(partitions_of(a, length=2)) == 14
        assert len(partitions_of(a, length=4)) == 24

    def test_singleton(self):
        assert partitions_of((7,)) == [((7,),)]

    def test_ordered_bell(self):
        assert [ordered_bell(n) for n in range(1, 5)] == [1, 3, 13, 75]
        for n in range(1, 5):
            assert len(partitions_of(tuple(range(1, n + 1)))) == ordered_bell(n)

    def test_aug_counts(self):
        # |P'_r(a)| = r^#a
        for n in range(0, 4):
            a = tuple(range(1, n + 1))
            for r in range(1, 4):
                assert len(aug_partitions_of(a, r)) == r ** n

    def test_bound(self):
        with pytest.raises(ResourceLimit):
            partitions_of(tuple(range(1, 10)))


class TestGrammar:
    def test_round_trip(self):
        for text in ("0|23|0|0|7|9", "123", "1|2|3", "0"):
            assert fmt_aug(parse_aug(text)) == text

    def test_multidigit(self):
        assert fmt_aug(((10, 11), ())) == "10,11|0"
        assert parse_aug("10,11|0") == ((10, 11), ())

    @given(st.lists(st.integers(1, 9), min_size=0, max_size=6, unique=True))
    def test_print_parse(self, xs):
        g = tuple(sorted(xs))
        for r in (1, 2, 3):
            for alpha in aug_partitions_of(g, r):
                assert parse_aug(fmt_aug(alpha)) == alpha


class TestRefines:
    def test_basic(self):
        assert refines(P("1|2|3"), P("12|3"))
        assert refines(P("1|2|3"), P("123"))
        assert not refines(P("13|2"), P("12|3"))
        assert refines(P("12|3"), P("12|3"))
