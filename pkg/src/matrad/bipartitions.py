"""Bipartitions and bipartition matrices over explicit frames.

A bipartition num/den is a pair of equal-length augmented partitions (den
over the input set, num over the output set).  A q x p matrix stores its
frame (a_1|...|a_p, b_1|...|b_q) explicitly; entry (i,j) is a bipartition
on (a_j, b_i).  Equality includes the frame.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .diagonals import (
    is_diag_component,
    is_interior_sub_component,
    is_sub_component,
)
from .partitions import (
    aug_partitions_of,
    fmt_aug,
    ground,
    mu,
    parse_aug,
    pi,
    split_at,
    vac,
)


@dataclass(frozen=True)
class Bip:
    den: tuple
    num: tuple

    def __post_init__(self):
        assert len(self.den) == len(self.num), (self.den, self.num)

    @property
    def r(self):
        return len(self.den)

    @property
    def iset(self):
        return ground(self.den)

    @property
    def oset(self):
        return ground(self.num)

    def is_elementary(self):
        return self.r == 1

    def is_null(self):
        return not self.iset and not self.oset

    def is_unit(self):
        return not self.iset and not self.oset

    def biblock(self, k):
        return (self.den[k - 1], self.num[k - 1])

    def __repr__(self):
        return fmt_bip(self)


def fmt_bip(c):
    return f"{fmt_aug(c.num)}/{fmt_aug(c.den)}"


def parse_bip(text):
    num, den = text.split("/")
    return Bip(parse_aug(den), parse_aug(num))


def strip_bip(c):
    """Drop (empty, empty) biblocks; a fully empty bipartition keeps one."""
    keep = [(d, n) for d, n in zip(c.den, c.num) if d or n]
    if not keep:
        keep = [((), ())]
    return Bip(tuple(d for d, _ in keep), tuple(n for _, n in keep))


@dataclass(frozen=True)
class BMat:
    rows: tuple  # q x p grid of entries
    aframe: tuple  # p blocks
    bframe: tuple  # q blocks

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            assert len(row) == len(self.aframe), "ragged matrix"
            for j, e in enumerate(row):
                if isinstance(e, Bip):
                    assert e.iset == tuple(sorted(self.aframe[j])), (e, self.aframe)
                    assert e.oset == tuple(sorted(self.bframe[i])), (e, self.bframe)
        assert len(self.rows) == len(self.bframe)

    @property
    def q(self):
        return len(self.rows)

    @property
    def p(self):
        return len(self.aframe)

    @property
    def iset(self):
        return tuple(sorted(x for blk in self.aframe for x in blk))

    @property
    def oset(self):
        return tuple(sorted(x for blk in self.bframe for x in blk))

    def entry(self, i, j):
        return self.rows[i - 1][j - 1]

    def entries(self):
        for row in self.rows:
            yield from row

    def row(self, i):
        return BMat((self.rows[i - 1],), self.aframe, (self.bframe[i - 1],))

    def col(self, j):
        return BMat(
            tuple((row[j - 1],) for row in self.rows),
            (self.aframe[j - 1],),
            self.bframe,
        )

    def is_null(self):
        return not self.iset and not self.oset

    def is_elementary(self):
        return all(
            isinstance(e, Bip) and e.is_elementary() for e in self.entries()
        )

    def is_plain(self):
        return all(isinstance(e, Bip) for e in self.entries())

    def is_semi_null(self):
        if not self.iset and self.oset:
            cols = [self.col(j).rows for j in range(1, self.p + 1)]
            return all(c == cols[0] for c in cols)
        if self.iset and not self.oset:
            return all(r == self.rows[0] for r in self.rows)
        return False

    def skeleton(self):
        """The elementary matrix over the same frame."""
        rows = tuple(
            tuple(Bip((tuple(a),), (tuple(b),)) for a in self.aframe)
            for b in self.bframe
        )
        return BMat(rows, self.aframe, self.bframe)

    def __repr__(self):
        return fmt_bmat(self)


def fmt_bmat(c):
    return "; ".join(", ".join(repr(e) for e in row) for row in c.rows)


def parse_bmat(text, aframe=None, bframe=None):
    rows = tuple(
        tuple(parse_bip(e) for e in row.split(",")) for row in text.split(";")
    )
    if aframe is None:
        aframe = tuple(rows[0][j].iset for j in range(len(rows[0])))
    if bframe is None:
        bframe = tuple(rows[i][0].oset for i in range(len(rows)))
    return BMat(rows, aframe, bframe)


def one_by_one(c):
    return BMat(((c,),), (c.iset,), (c.oset,))


def bunion(parts):
    """Blockwise union of equal-length augmented partitions over disjoint grounds."""
    parts = list(parts)
    r = len(parts[0])
    assert all(len(x) == r for x in parts)
    out = []
    for k in range(r):
        blk = []
        for x in parts:
            blk.extend(x[k])
        assert len(blk) == len(set(blk)), parts
        out.append(tuple(sorted(blk)))
    return tuple(out)


# ---------------------------------------------------------------------------
# equalizers

def _lex_subsets(n, size):
    """Size-`size` subsets of {1..n} in lexicographic order."""
    return [tuple(c) for c in combinations(range(1, n + 1), size)]


def _row_eq_at(C, i, size):
    """Lex-min row equalizer entries for row i at the given size, or None."""
    row = C.rows[i - 1]
    first = row[0]
    for lam0 in _lex_subsets(first.r - 1, size):
        target = mu(first.num, lam0)
        choice = [lam0]
        ok = True
        for e in row[1:]:
            found = None
            for lam in _lex_subsets(e.r - 1, size):
                if mu(e.num, lam) == target:
                    found = lam
                    break
            if found is None:
                ok = False
                break
            choice.append(found)
        if ok:
            return tuple(choice)
    return None


@lru_cache(maxsize=None)
def row_equalizer(C):
    """Canonical maximal row equalizer: per row, maximal size then lex-min."""
    out = []
    for i in range(1, C.q + 1):
        smax = min(e.r - 1 for e in C.rows[i - 1])
        for size in range(smax, -1, -1):
            choice = _row_eq_at(C, i, size)
            if choice is not None:
                out.append(choice)
                break
    return tuple(out)


def _transpose_entries(C):
    rows = tuple(
        tuple(Bip(e.num, e.den) for e in col)
        for col in zip(*C.rows)
    )
    return BMat(rows, C.bframe, C.aframe)


@lru_cache(maxsize=None)
def col_equalizer(C):
    """Canonical maximal column equalizer, as a q x p grid of index sets."""
    t = row_equalizer(_transpose_entries(C))
    # t is p rows of q entries; transpose back
    return tuple(tuple(t[j][i] for j in range(C.p)) for i in range(C.q))


@lru_cache(maxsize=None)
def full_equalizer(C):
    """Canonical maximal equalizer (row and column conditions jointly)."""
    rmax = min(e.r - 1 for e in C.entries())
    for size in range(rmax, 0, -1):
        found = _full_eq_at(C, size)
        if found is not None:
            return found
    return tuple(tuple(() for _ in range(C.p)) for _ in range(C.q))


def _full_eq_at(C, size):
    q, p = C.q, C.p
    grid = [[None] * p for _ in range(q)]
    row_targets = [None] * q
    col_targets = [None] * p

    def place(pos):
        if pos == q * p:
            return True
        i, j = divmod(pos, p)
        e = C.rows[i][j]
        for lam in _lex_subsets(e.r - 1, size):
            mn, md = mu(e.num, lam), mu(e.den, lam)
            if row_targets[i] is not None and mn != row_targets[i]:
                continue
            if col_targets[j] is not None and md != col_targets[j]:
                continue
            saved = (row_targets[i], col_targets[j])
            grid[i][j] = lam
            row_targets[i], col_targets[j] = mn, md
            if place(pos + 1):
                return True
            row_targets[i], col_targets[j] = saved
            grid[i][j] = None
        return False

    if place(0):
        return tuple(tuple(r) for r in grid)
    return None


def is_null_equalizer(lam):
    return all(not x for row in lam for x in row)


def equalization(C, lam):
    rows = tuple(
        tuple(
            Bip(mu(e.den, lam[i][j]), mu(e.num, lam[i][j]))
            for j, e in enumerate(row)
        )
        for i, row in enumerate(C.rows)
    )
    return BMat(rows, C.aframe, C.bframe)


@lru_cache(maxsize=None)
def is_indecomposable(C):
    return is_null_equalizer(full_equalizer(C))


def construct_lambda(C, lrow=None, lcol=None):
    """Build the maximal equalizer from the row and column ones (Prop. proof).

    Returns None when the construction finds no common refinement (the
    matrix is then indecomposable).
    """
    if lrow is None:
        lrow = row_equalizer(C)
    if lcol is None:
        lcol = col_equalizer(C)
    q, p = C.q, C.p
    sel = [[[] for _ in range(p)] for _ in range(q)]
    v = [0] * q  # per-row position already consumed in lrow (0-based count)
    w = [0] * p  # per-column position consumed in lcol
    while True:
        committed = False
        for v1 in range(v[0], len(lrow[0][0])):
            x = lrow[0][0][v1]
            if x not in lcol[0][0] or lcol[0][0].index(x) < w[0]:
                continue
            w_new = [None] * p
            w_new[0] = lcol[0][0].index(x)
            ok = True
            # row 1 fixes the per-column positions
            for j in range(1, p):
                if v1 >= len(lrow[0][j]):
                    ok = False
                    break
                xj = lrow[0][j][v1]
                if xj not in lcol[0][j] or lcol[0][j].index(xj) < w[j]:
                    ok = False
                    break
                w_new[j] = lcol[0][j].index(xj)
            if not ok:
                continue
            # column 1 fixes the per-row positions
            v_new = [None] * q
            v_new[0] = v1
            for i in range(1, q):
                if w_new[0] >= len(lcol[i][0]):
                    ok = False
                    break
                xi = lcol[i][0][w_new[0]]
                if xi not in lrow[i][0] or lrow[i][0].index(xi) < v[i]:
                    ok = False
                    break
                v_new[i] = lrow[i][0].index(xi)
            if not ok:
                continue
            for i in range(q):
                for j in range(p):
                    if v_new[i] >= len(lrow[i][j]) or w_new[j] >= len(lcol[i][j]):
                        ok = False
                        break
                    if lrow[i][j][v_new[i]] != lcol[i][j][w_new[j]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            for i in range(q):
                for j in range(p):
                    sel[i][j].append(lrow[i][j][v_new[i]])
            v = [x + 1 for x in v_new]
            w = [x + 1 for x in w_new]
            committed = True
            break
        if not committed:
            break
    if not sel[0][0]:
        return None
    return tuple(tuple(tuple(x) for x in row) for row in sel)


# ---------------------------------------------------------------------------
# transverse decomposition and factorization

from .partitions import embed  # noqa: E402


def transverse_decomposition(c, lam):
    """Cut a bipartition at 1 <= lam < r into a column-matrix, row-matrix pair."""
    if not 1 <= lam < c.r:
        raise ValueError(f"cut {lam} out of range for length {c.r}")
    a, b = c.iset, c.oset
    head_den, tail_den = c.den[:lam], c.den[lam:]
    head_num, tail_num = c.num[:lam], c.num[lam:]
    tail_d_union = tuple(sorted(x for blk in tail_den for x in blk))
    head_n_union = tuple(sorted(x for blk in head_num for x in blk))
    ablocks = embed(tail_d_union, a)  # a_1 | ... | a_p
    bblocks = embed(head_n_union, b)  # b_1 | ... | b_q
    col_rows = []
    for bi in bblocks:
        num_i = tuple(tuple(x for x in blk if x in set(bi)) for blk in head_num)
        col_rows.append((Bip(head_den, num_i),))
    head_d_union = tuple(sorted(x for blk in head_den for x in blk))
    A = BMat(tuple(col_rows), (head_d_union,), bblocks)
    row_entries = []
    for aj in ablocks:
        den_j = tuple(tuple(x for x in blk if x in set(aj)) for blk in tail_den)
        row_entries.append(Bip(den_j, tail_num))
    tail_n_union = tuple(sorted(x for blk in tail_num for x in blk))
    B = BMat((tuple(row_entries),), ablocks, (tail_n_union,))
    return A, B


def tp_value(A, B):
    """Value of a transverse pair (column, row); None when not a TP."""
    if A.p != 1 or B.q != 1:
        return None
    heads_den = {e.den for e in A.entries()}
    tails_num = {e.num for e in B.entries()}
    if len(heads_den) != 1 or len(tails_num) != 1:
        return None
    head_den = next(iter(heads_den))
    tail_num = next(iter(tails_num))
    try:
        head_num = bunion([e.num for e in A.entries()])
        tail_den = bunion([e.den for e in B.entries()])
    except AssertionError:
        return None
    c = Bip(head_den + tail_den, head_num + tail_num)
    try:
        A2, B2 = transverse_decomposition(c, len(head_den))
    except ValueError:
        return None
    if A2.rows == A.rows and B2.rows == B.rows:
        return c
    return None


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def btp_value(A, B):
    """Evaluate a block transverse pair of plain matrices; None if not a BTP."""
    t, s = B.q, A.p
    for rsplit in _compositions(A.q, t):
        rbounds = [0]
        for x in rsplit:
            rbounds.append(rbounds[-1] + x)
        for csplit in _compositions(B.p, s):
            cbounds = [0]
            for x in csplit:
                cbounds.append(cbounds[-1] + x)
            grid = []
            ok = True
            for i in range(t):
                row = []
                for j in range(s):
                    Aij = BMat(
                        tuple(
                            (A.rows[r][j],)
                            for r in range(rbounds[i], rbounds[i + 1])
                        ),
                        (A.aframe[j],),
                        A.bframe[rbounds[i] : rbounds[i + 1]],
                    )
                    Bij = BMat(
                        (B.rows[i][cbounds[j] : cbounds[j + 1]],),
                        B.aframe[cbounds[j] : cbounds[j + 1]],
                        (B.bframe[i],),
                    )
                    v = tp_value(Aij, Bij)
                    if v is None:
                        ok = False
                        break
                    row.append(v)
                if not ok:
                    break
                grid.append(tuple(row))
            if ok:
                aframe = tuple(grid[0][j].iset for j in range(s))
                bframe = tuple(grid[i][0].oset for i in range(t))
                return BMat(tuple(grid), aframe, bframe)
    return None


def chain_value(factors):
    """Evaluate a chain of plain matrices left to right; None if invalid."""
    cur = factors[0]
    for nxt in factors[1:]:
        cur = btp_value(cur, nxt)
        if cur is None:
            return None
    return cur


def factor_once(C, lam):
    """Cut every entry at its first equalizer index and assemble the BTP."""
    q, p = C.q, C.p
    cols_of_A = []  # per column j: list of q_i x 1 pieces stacked
    rows_of_B = []
    arow_counts = None
    for i in range(q):
        pieces_A, pieces_B = [], []
        for j in range(p):
            e = C.rows[i][j]
            A, B = transverse_decomposition(e, lam[i][j][0])
            pieces_A.append(A)
            pieces_B.append(B)
        qs = {a.q for a in pieces_A}
        assert len(qs) == 1, "head numerators must equalize along rows"
        cols_of_A.append(pieces_A)
        rows_of_B.append(pieces_B)
    ps = [{rows_of_B[i][j].p for i in range(q)} for j in range(p)]
    assert all(len(s) == 1 for s in ps), "tail denominators must equalize along columns"

    a_rows = []
    bframe1 = []
    for i in range(q):
        qi = cols_of_A[i][0].q
        for t in range(qi):
            a_rows.append(tuple(cols_of_A[i][j].rows[t][0] for j in range(p)))
        bframe1.extend(cols_of_A[i][0].bframe)
    aframe1 = tuple(cols_of_A[0][j].aframe[0] for j in range(p))
    C1 = BMat(tuple(a_rows), aframe1, tuple(bframe1))

    b_rows = []
    aframe2 = []
    for j in range(p):
        aframe2.extend(rows_of_B[0][j].aframe)
    for i in range(q):
        row = []
        for j in range(p):
            row.extend(rows_of_B[i][j].rows[0])
        b_rows.append(tuple(row))
    bframe2 = tuple(rows_of_B[i][0].bframe[0] for i in range(q))
    C2 = BMat(tuple(b_rows), tuple(aframe2), bframe2)
    return C1, C2


@lru_cache(maxsize=None)
def factorize(C):
    """Unique indecomposable factorization via the maximal equalizer."""
    lam = full_equalizer(C)
    if is_null_equalizer(lam):
        return (C,)
    C1, C2 = factor_once(C, lam)
    return factorize(C1) + factorize(C2)


@lru_cache(maxsize=None)
def bip_factorize(c):
    """Elementary factorization of a bipartition (the dedicated algorithm)."""
    r = c.r
    out = []
    for k in range(1, r + 1):
        acc_a = tuple(sorted(x for blk in c.den[:k] for x in blk))
        acc_b = tuple(sorted(x for blk in c.num[k - 1 :] for x in blk))
        ablocks = embed(c.den[k - 1], acc_a)
        bblocks = embed(c.num[k - 1], acc_b)
        rows = tuple(
            tuple(Bip((a,), (b,)) for a in ablocks) for b in bblocks
        )
        out.append(BMat(rows, ablocks, bblocks))
    return tuple(out)


# ---------------------------------------------------------------------------
# partitioning actions

def eta1(c):
    return Bip(((),) + c.den, ((),) + c.num)


def eta2(c):
    return Bip(c.den + ((),), c.num + ((),))


def apply_action(C, family):
    """Partitioning action: family maps (i,j) -> (k, M, N) biblock splits."""
    rows = []
    for i in range(1, C.q + 1):
        row = []
        for j in range(1, C.p + 1):
            e = C.entry(i, j)
            if (i, j) in family:
                k, m, n = family[(i, j)]
                row.append(Bip(split_at(e.den, k, m), split_at(e.num, k, n)))
            else:
                row.append(e)
        rows.append(tuple(row))
    return BMat(tuple(rows), C.aframe, C.bframe)


def _extreme(part, blk):
    return not part or tuple(sorted(part)) == tuple(sorted(blk))


def classify_action(C, family):
    """Name the action class, or "invalid" when no class's constraints hold."""
    if not family:
        return "trivial"
    q, p = C.q, C.p
    support = set(family)

    def pair_info(i, j):
        k, m, n = family[(i, j)]
        a_blk, b_blk = C.entry(i, j).biblock(k)
        return m, n, a_blk, b_blk

    if len(support) == 1:
        ((i, j),) = support
        m, n, a_blk, b_blk = pair_info(i, j)
        if (q == 1 or not _extreme(m, a_blk)) and (p == 1 or not _extreme(n, b_blk)):
            return f"entry {i},{j}"
    for i in range(1, q + 1):
        if support == {(i, j) for j in range(1, p + 1)} and p >= 2:
            infos = [pair_info(i, j) for j in range(1, p + 1)]
            m_ok = q == 1 or all(not _extreme(m, a) for m, n, a, b in infos)
            if all(n == () for m, n, a, b in infos) and m_ok:
                return f"left row {i}"
            if all(tuple(n) == b for m, n, a, b in infos) and m_ok:
                return f"right row {i}"
    for j in range(1, p + 1):
        if support == {(i, j) for i in range(1, q + 1)} and q >= 2:
            infos = [pair_info(i, j) for i in range(1, q + 1)]
            n_ok = p == 1 or all(not _extreme(n, b) for m, n, a, b in infos)
            if all(m == () for m, n, a, b in infos) and n_ok:
                return f"left column {j}"
            if all(tuple(m) == a for m, n, a, b in infos) and n_ok:
                return f"right column {j}"
    for i in range(1, q + 1):
        for j in range(1, p + 1):
            rowset = {(i, jj) for jj in range(1, p + 1)}
            colset = {(ii, j) for ii in range(1, q + 1)}
            if not (rowset | colset) <= support:
                continue
            extra = support - rowset - colset
            m, n, a_blk, b_blk = pair_info(i, j)
            strongly = (not m and not n) or (
                tuple(m) == a_blk and tuple(n) == b_blk
            )
            if strongly:
                continue
            if any(
                not (
                    (not family[s][1] and not family[s][2])
                    or (
                        tuple(family[s][1]) == C.entry(*s).biblock(family[s][0])[0]
                        and tuple(family[s][2]) == C.entry(*s).biblock(family[s][0])[1]
                    )
                )
                for s in extra
            ):
                continue
            if not is_indecomposable(apply_action(C, family)):
                return f"row {i}/column {j}"
    return "invalid"


# ---------------------------------------------------------------------------
# input/output data and coherence

@dataclass(frozen=True)
class IOData:
    alpha_hats: tuple  # per row i
    beta_checks: tuple  # per column j
    eq_hat: tuple
    eq_check: tuple
    e_hat: tuple  # (pi a_q, ..., pi a_1)
    e_check: tuple  # (pi b_1, ..., pi b_p)


@lru_cache(maxsize=None)
def io_data(C):
    lrow = row_equalizer(C)
    lcol = col_equalizer(C)
    alpha_hats = tuple(
        bunion(
            [mu(C.rows[i][j].den, lrow[i][j]) for j in range(C.p)]
        )
        for i in range(C.q)
    )
    beta_checks = tuple(
        bunion(
            [mu(C.rows[i][j].num, lcol[i][j]) for i in range(C.q)]
        )
        for j in range(C.p)
    )
    lam = full_equalizer(C)
    eq_hat = bunion([mu(C.rows[0][j].den, lam[0][j]) for j in range(C.p)])
    eq_check = bunion([mu(C.rows[i][0].num, lam[i][0]) for i in range(C.q)])
    e_hat = tuple(pi(alpha_hats[i]) for i in range(C.q - 1, -1, -1))
    e_check = tuple(pi(b) for b in beta_checks)
    return IOData(alpha_hats, beta_checks, eq_hat, eq_check, e_hat, e_check)


def in_vac(C):
    return sum(vac(a) for a in io_data(C).alpha_hats)


def out_vac(C):
    return sum(vac(b) for b in io_data(C).beta_checks)


@lru_cache(maxsize=None)
def row_precoherent(C, maximal=False):
    if not C.iset:
        return False
    data = io_data(C)
    target = pi(data.eq_hat)
    if maximal:
        return is_diag_component(data.e_hat, target)
    return is_interior_sub_component(data.e_hat, target)


@lru_cache(maxsize=None)
def col_precoherent(C, maximal=False):
    if not C.oset:
        return False
    data = io_data(C)
    target = pi(data.eq_check)
    if maximal:
        return is_diag_component(data.e_check, target)
    return is_interior_sub_component(data.e_check, target)


def precoherent(C, maximal=False):
    return row_precoherent(C, maximal) and col_precoherent(C, maximal)


def row_coherent(C, maximal=False):
    if not C.iset:
        return True
    return all(
        not F.iset or row_precoherent(F, maximal) for F in factorize(C)
    )


def col_coherent(C, maximal=False):
    if not C.oset:
        return True
    return all(
        not F.oset or col_precoherent(F, maximal) for F in factorize(C)
    )


@lru_cache(maxsize=None)
def coherent(C, maximal=False):
    return row_coherent(C, maximal) and col_coherent(C, maximal)


@lru_cache(maxsize=None)
def totally_coherent(C, maximal=False):
    if not coherent(C, maximal):
        return False
    for F in factorize(C):
        for i in range(1, F.q + 1):
            if not coherent(F.row(i), maximal):
                return False
        for j in range(1, F.p + 1):
            if not coherent(F.col(j), maximal):
                return False
        for e in F.entries():
            if not coherent(one_by_one(e), maximal):
                return False
    return True


def coherence_flags(C):
    return {
        "row_precoherent": row_precoherent(C),
        "max_row_precoherent": row_precoherent(C, True),
        "col_precoherent": col_precoherent(C),
        "max_col_precoherent": col_precoherent(C, True),
        "precoherent": precoherent(C),
        "max_precoherent": precoherent(C, True),
        "row_coherent": row_coherent(C),
        "col_coherent": col_coherent(C),
        "coherent": coherent(C),
        "max_coherent": coherent(C, True),
        "totally_coherent": totally_coherent(C),
        "max_totally_coherent": totally_coherent(C, True),
    }


# ---------------------------------------------------------------------------
# expansions, coheretization, primitive coheretization

def entry_expansions(e, maxlen=None):
    """All bipartitions reachable from e by partitioning actions."""
    if maxlen is None:
        maxlen = len(e.iset) + len(e.oset) + 2
    options = []
    for k in range(1, e.r + 1):
        a_blk, b_blk = e.biblock(k)
        opts = []
        for rk in range(1, maxlen + 1):
            for dpart in aug_partitions_of(a_blk, rk):
                for npart in aug_partitions_of(b_blk, rk):
                    opts.append((dpart, npart))
        options.append(opts)
    out = []
    _combine(options, 0, (), (), out, maxlen)
    return [Bip(d, n) for d, n in out]


def _combine(options, idx, den, num, out, maxlen):
    if len(den) > maxlen:
        return
    if idx == len(options):
        out.append((den, num))
        return
    for dpart, npart in options[idx]:
        _combine(options, idx + 1, den + dpart, num + npart, out, maxlen)


def matrix_expansions(C, maxlen=None):
    """All matrices whose entries expand C's entries (including C itself)."""
    per_entry = [
        [entry_expansions(e, maxlen) for e in row] for row in C.rows
    ]
    out = []
    _mat_combine(per_entry, 0, 0, [], out, C)
    return out


def _mat_combine(per_entry, i, j, acc, out, C):
    q, p = len(per_entry), len(per_entry[0])
    if i == q:
        rows = tuple(
            tuple(acc[r * p + c] for c in range(p)) for r in range(q)
        )
        out.append(BMat(rows, C.aframe, C.bframe))
        return
    ni, nj = (i, j + 1) if j + 1 < p else (i + 1, 0)
    for e in per_entry[i][j]:
        acc.append(e)
        _mat_combine(per_entry, ni, nj, acc, out, C)
        acc.pop()


def _row_alpha_hat(row_mat):
    """pi of the input partition of a standalone 1 x p row (row-local data)."""
    lam = row_equalizer(row_mat)[0]
    return pi(bunion([mu(e.den, lam[j]) for j, e in enumerate(row_mat.rows[0])]))


def _col_beta_check(col_mat):
    lam = col_equalizer(col_mat)
    return pi(bunion([mu(e.num, lam[i][0]) for i, (e,) in enumerate(col_mat.rows)]))


def _assemble(row_choices, C):
    rows = tuple(row_choices)
    return BMat(rows, C.aframe, C.bframe)


def coheretize(C, target_e_hat=None, target_e_check=None, maxlen=None):
    """Coheretizations of C: coherent expansions matching the given targets.

    Row equalizers couple entries only within a row (dually for columns), so
    a target input product filters candidate rows independently before the
    full matrices are assembled and checked.
    """
    from itertools import product as iproduct

    per_entry = [[entry_expansions(e, maxlen) for e in row] for row in C.rows]
    row_cands = []
    for i, opts in enumerate(per_entry):
        cands = []
        for combo in iproduct(*opts):
            if target_e_hat is not None:
                row_mat = BMat((combo,), C.aframe, (C.bframe[i],))
                # e_hat lists row q first
                want = tuple(target_e_hat)[C.q - 1 - i]
                if _row_alpha_hat(row_mat) != pi(tuple(want)):
                    continue
            cands.append(combo)
        row_cands.append(cands)
    out = []
    for choice in iproduct(*row_cands):
        D = _assemble(choice, C)
        if target_e_check is not None:
            data_check = tuple(
                pi(b) for b in io_data(D).beta_checks
            )
            if data_check != tuple(pi(tuple(t)) for t in target_e_check):
                continue
        if not coherent(D):
            continue
        data = io_data(D)
        if target_e_hat is not None and data.e_hat != tuple(
            pi(tuple(t)) for t in target_e_hat
        ):
            continue
        out.append(D)
    return out


def enumerate_coheretizations(C, maxlen=None):
    return coheretize(C, maxlen=maxlen)


def _restrict(alpha, blk):
    s = set(blk)
    return tuple(tuple(x for x in b if x in s) for b in alpha)


def seminull_coheretization(C, targets):
    """Row-restriction coheretization of a semi-null matrix.

    For equal-row C with os = 0: targets lists one augmented partition of
    is(C) per row (row 1 first); the denominator of entry (i,j) becomes the
    restriction of targets[i] to a_j, numerators pad with empty blocks.
    Dually (equal columns, is = 0) targets are per column and act on
    numerators.
    """
    if C.iset and not C.oset:
        rows = []
        for i in range(1, C.q + 1):
            x = tuple(targets[i - 1])
            row = []
            for j in range(1, C.p + 1):
                den = _restrict(x, C.aframe[j - 1])
                row.append(Bip(den, ((),) * len(den)))
            rows.append(tuple(row))
        return BMat(tuple(rows), C.aframe, C.bframe)
    if C.oset and not C.iset:
        rows = []
        for i in range(1, C.q + 1):
            row = []
            for j in range(1, C.p + 1):
                y = tuple(targets[j - 1])
                num = _restrict(y, C.bframe[i - 1])
                row.append(Bip(((),) * len(num), num))
            rows.append(tuple(row))
        return BMat(tuple(rows), C.aframe, C.bframe)
    raise ValueError("matrix is not semi-null")


def primitive_coheretization(E):
    """The unique totally coherent prim(E) of an elementary matrix."""
    assert E.is_elementary()
    a, b = E.iset, E.oset
    v = tuple((x,) for x in a) if a else ((),)
    w = tuple((x,) for x in reversed(b)) if b else ((),)
    L = max(len(v), len(w))
    rows = []
    for i in range(1, E.q + 1):
        row = []
        for j in range(1, E.p + 1):
            if (i, j) == (1, 1):
                row.append(E.entry(1, 1))
                continue
            den = _restrict(v, E.aframe[j - 1]) if a else ((),) * L
            num = _restrict(w, E.bframe[i - 1]) if b else ((),) * L
            den = den + ((),) * (L - len(den))
            num = num + ((),) * (L - len(num))
            row.append(Bip(den, num))
        rows.append(tuple(row))
    return BMat(tuple(rows), E.aframe, E.bframe)
