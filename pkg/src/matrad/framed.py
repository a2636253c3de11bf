"""Generalized bipartition matrices, framed elements, and their dimension.

A framed element is stored by the canonical (terminal) level of its level
path: a plain bipartition (height 1), or a formal product of matrices whose
entries are plain bipartitions or, recursively, formal products (height 2
and up).  The canonical representative has the minimal number of levels and
factor chains of maximal length; the earlier levels are reconstructed from
the terminal by truncation.
"""

from dataclasses import dataclass
from functools import lru_cache

from .bipartitions import (
    BMat,
    Bip,
    bip_factorize,
    col_precoherent,
    factorize,
    fmt_bip,
    full_equalizer,
    in_vac,
    io_data,
    is_null_equalizer,
    one_by_one,
    out_vac,
    row_precoherent,
    totally_coherent,
)
from .partitions import ground


@dataclass(frozen=True)
class Prod:
    factors: tuple  # of BMat

    def __post_init__(self):
        assert self.factors, "empty formal product"

    @property
    def iset(self):
        return tuple(sorted(x for f in self.factors for x in f.iset))

    @property
    def oset(self):
        return tuple(sorted(x for f in self.factors for x in f.oset))

    def __repr__(self):
        return " . ".join("(" + repr(f) + ")" for f in self.factors)


def value_bip(x):
    """The initial bipartition of an entry: biblock k = (is, os) of factor k."""
    if isinstance(x, Bip):
        return x
    return Bip(
        tuple(f.iset for f in x.factors), tuple(f.oset for f in x.factors)
    )


@lru_cache(maxsize=None)
def level1(M):
    """The initial bipartition matrix of a framed matrix."""
    rows = tuple(tuple(value_bip(e) for e in row) for row in M.rows)
    return BMat(rows, M.aframe, M.bframe)


def height(x):
    if isinstance(x, Bip):
        return 1
    if isinstance(x, BMat):
        return max(
            1,
            max(
                (height(e) for e in x.entries() if isinstance(e, Prod)),
                default=1,
            ),
        )
    return 1 + max(
        _entry_depth(e) for f in x.factors for e in f.entries()
    )


def _entry_depth(e):
    if isinstance(e, Bip):
        return 0 if e.is_elementary() else 1
    return 1 + max(_entry_depth(x) for f in e.factors for x in f.entries())


def is_plain_mat(F):
    return isinstance(F, BMat) and F.is_plain()


# ---------------------------------------------------------------------------
# canonical form

def canon(x):
    """Canonical representative: maximal factor chains, collapsed trivial
    expansions, null factors deleted where Definition GBPM forces it
    (the whole element, or entries whose row and column are
    indecomposable).  Iterates to a fixpoint: splitting can expose new
    forced deletions and conversely."""
    prev = None
    cur = x
    for _ in range(20):
        if cur == prev:
            return cur
        prev = cur
        cur = _canon_once(cur)
    raise RuntimeError("canonical form did not stabilize")


def _canon_once(x):
    if isinstance(x, Bip):
        factors = [F for F in bip_factorize(x) if not F.is_null()]
        if not factors:
            return Bip(((),), ((),))
        return _finish(factors, top=True)
    if isinstance(x, BMat):
        pieces = _split_all([_canon_mat(x)])
        return _finish(pieces, top=True)
    factors = [_canon_mat(F) for F in x.factors]
    return _finish(_split_all(factors), top=True)


def canon_entry(e):
    if isinstance(e, Bip):
        return e
    prev = None
    cur = e
    for _ in range(20):
        if cur == prev or isinstance(cur, Bip):
            return cur
        prev = cur
        factors = [_canon_mat(F) for F in cur.factors]
        cur = _finish(_split_all(factors), top=False)
    raise RuntimeError("entry canonical form did not stabilize")


def _finish(factors, top):
    if top:
        kept = [F for F in factors if not F.is_null()]
        factors = kept or list(factors[:1])
    if (
        all(F.is_elementary() for F in factors)
        and factors[0].p == 1
        and factors[-1].q == 1
    ):
        return value_bip(Prod(tuple(factors)))
    if len(factors) == 1:
        only = factors[0]
        if only.q == 1 and only.p == 1 and isinstance(only.entry(1, 1), Bip):
            return only.entry(1, 1)
        return only
    return Prod(tuple(factors))


def _canon_mat(F):
    rows = [[canon_entry(e) for e in row] for row in F.rows]
    M0 = BMat(tuple(tuple(r) for r in rows), F.aframe, F.bframe)
    if M0.q * M0.p > 1:
        from .bipartitions import strip_bip

        def signature(M):
            from .bipartitions import factorize, io_data
            from .partitions import pi

            l1 = level1(M)
            data = io_data(l1)
            return (
                _dim(M),
                len(factorize(l1)),
                tuple(pi(a) for a in data.alpha_hats),
                tuple(pi(b) for b in data.beta_checks),
            )

        base_sig = None
        for i in range(M0.q):
            for j in range(M0.p):
                e = rows[i][j]
                options = []
                if isinstance(e, Prod):
                    for k, f in enumerate(e.factors):
                        if f.is_null() and len(e.factors) > 1:
                            kept = e.factors[:k] + e.factors[k + 1 :]
                            options.append(_finish(list(kept), top=False))
                else:
                    for k in range(e.r):
                        if not e.den[k] and not e.num[k] and e.r > 1:
                            options.append(
                                Bip(
                                    e.den[:k] + e.den[k + 1 :],
                                    e.num[:k] + e.num[k + 1 :],
                                )
                            )
                for stripped in options:
                    trial = [list(r) for r in rows]
                    trial[i][j] = stripped
                    Mt = BMat(
                        tuple(tuple(r) for r in trial), F.aframe, F.bframe
                    )
                    if base_sig is None:
                        base_sig = signature(M0)
                    if signature(Mt) == base_sig:
                        rows[i][j] = stripped
                        M0 = Mt
                        base_sig = None
                        break
    return BMat(tuple(tuple(r) for r in rows), F.aframe, F.bframe)


def _split_all(factors):
    out = list(factors)
    changed = True
    while changed:
        changed = False
        nxt = []
        for F in out:
            if F.q == 1 and F.p == 1 and isinstance(F.entry(1, 1), Prod):
                nxt.extend(F.entry(1, 1).factors)
                changed = True
                continue
            pieces = split_once(F)
            if pieces is None:
                nxt.append(F)
            else:
                nxt.extend(pieces)
                changed = True
        out = nxt
    return out


@lru_cache(maxsize=None)
def split_once(F):
    """Split a single factor matrix into two, or None if indecomposable."""
    if F.is_plain():
        lam = full_equalizer(F)
        if is_null_equalizer(lam):
            return None
        from .bipartitions import factor_once

        return factor_once(F, lam)
    return _formal_split(F)


def entry_chain(e):
    """The maximal factor chain of an entry."""
    if isinstance(e, Prod):
        return e.factors
    return bip_factorize(e)


def _chain_to_entry(chain):
    if len(chain) == 1 and chain[0].q == 1 and chain[0].p == 1:
        return chain[0].entry(1, 1)
    return canon_entry(Prod(tuple(chain)))


def _formal_split(F):
    """Peel the leading column layer of a matrix with framed entries."""
    chains = [[entry_chain(e) for e in row] for row in F.rows]
    if any(len(c) < 2 for row in chains for c in row):
        return None
    lefts = [[c[0] for c in row] for row in chains]
    if any(L.p != 1 for row in lefts for L in row):
        return None
    heights = [{lefts[i][j].q for j in range(F.p)} for i in range(F.q)]
    if any(len(h) != 1 for h in heights):
        return None
    rests = [[c[1:] for c in row] for row in chains]
    rest_mats = [
        [_rest_as_row(rest) for rest in row] for row in rests
    ]
    if any(r is None for row in rest_mats for r in row):
        return None
    widths = [{rest_mats[i][j].p for i in range(F.q)} for j in range(F.p)]
    if any(len(w) != 1 for w in widths):
        return None
    a_rows, bframe1 = [], []
    for i in range(F.q):
        qi = next(iter(heights[i]))
        for t in range(qi):
            a_rows.append(tuple(lefts[i][j].rows[t][0] for j in range(F.p)))
        bframe1.extend(lefts[i][0].bframe)
    aframe1 = tuple(lefts[0][j].aframe[0] for j in range(F.p))
    F1 = BMat(tuple(a_rows), aframe1, tuple(bframe1))
    b_rows, aframe2 = [], []
    for j in range(F.p):
        aframe2.extend(rest_mats[0][j].aframe)
    for i in range(F.q):
        row = []
        for j in range(F.p):
            row.extend(rest_mats[i][j].rows[0])
        b_rows.append(tuple(row))
    bframe2 = tuple(rest_mats[i][0].bframe[0] for i in range(F.q))
    F2 = BMat(tuple(b_rows), tuple(aframe2), bframe2)
    return F1, F2


def _rest_as_row(chain):
    """A rest-chain as a single-row matrix, or None when it cannot flatten."""
    if len(chain) == 1:
        M = chain[0]
        return M if M.q == 1 else None
    first = chain[0]
    if first.q != 1:
        return None
    # fold the remaining factors into the entries of the leading row
    tails = chain[1:]
    if all(t.q == 1 for t in tails) and all(t.p == first.p for t in tails):
        rows = tuple(
            (tuple(
                _chain_to_entry(tuple([first.rows[0][j]] if False else []))
                for j in range(first.p)
            ),)
        )
    # general fallback: keep as an unsplit single entry product per column
    return None


def formal_factors(x):
    """Maximal formal factorization of a framed element/matrix."""
    x = canon(x)
    if isinstance(x, Bip):
        facs = tuple(F for F in bip_factorize(x) if not F.is_null())
        return facs or bip_factorize(x)[:1]
    if isinstance(x, BMat):
        return (x,)
    return x.factors


def formal_length(x):
    return len(formal_factors(x))


# ---------------------------------------------------------------------------
# dimension algorithms

def pi_matrix(C):
    """Discard empty biblocks in non-null entries; null entries become 0/0."""
    from .bipartitions import strip_bip

    rows = tuple(
        tuple(
            Bip(((),), ((),)) if e.is_null() else strip_bip(e)
            for e in row
        )
        for row in C.rows
    )
    return BMat(rows, C.aframe, C.bframe)


def dim(x):
    x = canon(x)
    return _dim(x)


@lru_cache(maxsize=None)
def _dim(x):
    if isinstance(x, Bip):
        x = one_by_one(x)
    if isinstance(x, BMat) and x.is_null():
        return 0
    if isinstance(x, Prod) and not x.iset and not x.oset:
        return 0
    return row_dim(x) + col_dim(x) + ent_dim(x)


@lru_cache(maxsize=None)
def row_dim(x):
    if isinstance(x, Prod):
        return sum(row_dim(F) for F in x.factors)
    if isinstance(x, Bip):
        x = one_by_one(x)
    pieces = split_once(x)
    if pieces is not None:
        return sum(row_dim(F) for F in pieces)
    if x.q > 1:
        return sum(row_dim(x.row(i)) for i in range(1, x.q + 1))
    if x.is_plain():
        x = pi_matrix(x)
        entries = x.rows[0]
        if all(e.is_elementary() for e in entries):
            if x.p == 1 and entries[0].oset:
                return 0
            if all(not e.oset for e in entries):
                return 0 if x.is_null() else max(len(x.iset) - 1, 0)
    total = 0
    for e in x.rows[0]:
        if isinstance(e, Prod):
            total += sum(row_dim(F) for F in e.factors)
        elif e.is_elementary():
            total += 0 if e.oset else (len(e.iset) - 1 if e.iset else 0)
        else:
            total += row_dim(e)
    return total


@lru_cache(maxsize=None)
def col_dim(x):
    if isinstance(x, Prod):
        return sum(col_dim(F) for F in x.factors)
    if isinstance(x, Bip):
        x = one_by_one(x)
    pieces = split_once(x)
    if pieces is not None:
        return sum(col_dim(F) for F in pieces)
    if x.p > 1:
        return sum(col_dim(x.col(j)) for j in range(1, x.p + 1))
    if x.is_plain():
        x = pi_matrix(x)
        entries = tuple(row[0] for row in x.rows)
        if all(e.is_elementary() for e in entries):
            if x.q == 1 and entries[0].iset:
                return 0
            if all(not e.iset for e in entries):
                return 0 if x.is_null() else max(len(x.oset) - 1, 0)
    total = 0
    for (e,) in x.rows:
        if isinstance(e, Prod):
            total += sum(col_dim(F) for F in e.factors)
        elif e.is_elementary():
            total += 0 if e.iset else (len(e.oset) - 1 if e.oset else 0)
        else:
            total += col_dim(e)
    return total


@lru_cache(maxsize=None)
def ent_dim(x):
    if isinstance(x, Prod):
        return sum(ent_dim(F) for F in x.factors)
    if isinstance(x, Bip):
        if x.is_elementary():
            return (
                len(x.iset) + len(x.oset) - 1 if x.iset and x.oset else 0
            )
        x = one_by_one(x)
    pieces = split_once(x)
    if pieces is not None:
        return sum(ent_dim(F) for F in pieces)
    total = 0
    for e in x.entries():
        if isinstance(e, Prod):
            total += sum(ent_dim(F) for F in e.factors)
        elif e.is_elementary():
            total += (
                len(e.iset) + len(e.oset) - 1 if e.iset and e.oset else 0
            )
        else:
            total += ent_dim(e)
    return total


# ---------------------------------------------------------------------------
# coherence of framed matrices and elements

@lru_cache(maxsize=None)
def coherent_mat(F, maximal=False):
    """Coherence of a framed matrix factor."""
    if F.is_plain():
        return totally_coherent(F, maximal)
    C1 = level1(F)
    if C1.iset and not row_precoherent(C1, maximal):
        return False
    if C1.oset and not col_precoherent(C1, maximal):
        return False
    if F.q > 1:
        for i in range(1, F.q + 1):
            if not cell_coherent(canon(F.row(i)), maximal):
                return False
    if F.p > 1:
        for j in range(1, F.p + 1):
            if not cell_coherent(canon(F.col(j)), maximal):
                return False
    for e in F.entries():
        if not cell_coherent(e, maximal):
            return False
    return True


@lru_cache(maxsize=None)
def cell_coherent(x, maximal=False):
    """Coherence of a framed element (cell candidate)."""
    x = canon(x)
    if isinstance(x, Bip):
        return totally_coherent(one_by_one(x), maximal)
    if isinstance(x, BMat):
        return coherent_mat(x, maximal)
    return all(coherent_mat(F, maximal) for F in x.factors)


# ---------------------------------------------------------------------------
# dimensional completeness and TD coherence

def embedded_mats(x):
    """All matrices embedded in a framed element/matrix (incl. itself)."""
    out = []
    if isinstance(x, Bip):
        return out
    if isinstance(x, Prod):
        for F in x.factors:
            out.extend(embedded_mats(F))
        return out
    out.append(x)
    for e in x.entries():
        if isinstance(e, Prod):
            for F in e.factors:
                out.extend(embedded_mats(F))
    return out


def one_sided_vacuity_ok(F):
    """Dimensional completeness of a one-sided factor: the input (resp.
    output) product has no vacuosity and carries exactly the factor's
    dimension."""
    from .partitions import adim, pi

    if isinstance(F, Bip):
        F = one_by_one(F)
    C1 = level1(F)
    data = None
    if C1.iset and not C1.oset:
        if in_vac(C1) != 0:
            return False
        data = io_data(C1).alpha_hats
    elif C1.oset and not C1.iset:
        if out_vac(C1) != 0:
            return False
        data = io_data(C1).beta_checks
    if data is not None:
        return sum(adim(pi(x)) for x in data) == _dim(F)
    return True


def dimensionally_complete(x):
    x = canon(x)
    if isinstance(x, (Bip, BMat)) and not one_sided_vacuity_ok(
        x if isinstance(x, BMat) else one_by_one(x)
    ):
        return False
    for B in embedded_mats(x):
        if not B.iset or not B.oset:
            continue
        C1 = level1(B)
        lhs_row = row_dim(B)
        rhs_row = out_vac(C1) + sum(
            row_dim(B.col(j)) for j in range(1, B.p + 1)
        )
        if lhs_row != rhs_row:
            return False
        lhs_col = col_dim(B)
        rhs_col = in_vac(C1) + sum(
            col_dim(B.row(i)) for i in range(1, B.q + 1)
        )
        if lhs_col != rhs_col:
            return False
    return True


def td_coherent(x):
    """Maximally coherent and dimensionally complete."""
    x = canon(x)
    if isinstance(x, Prod):
        return all(td_coherent(F) for F in x.factors)
    if isinstance(x, Bip):
        return cell_coherent(x, maximal=True) and all(
            dimensionally_complete(F) for F in bip_factorize(x)
        )
    return cell_coherent(x, maximal=True) and dimensionally_complete(x)


def td_dimension(x):
    """#is + #os - l for a non-null TD coherent element, cross-checked."""
    x = canon(x)
    if not td_coherent(x):
        raise ValueError("td_dimension needs a TD coherent input")
    iset = x.iset if not isinstance(x, Bip) else x.iset
    oset = x.oset
    if not iset and not oset:
        raise ValueError("td_dimension needs a non-null input")
    value = len(iset) + len(oset) - formal_length(x)
    assert value == dim(x), (value, dim(x))
    return value


# ---------------------------------------------------------------------------
# level paths, restriction, structure trees

def levels(x):
    """The canonical level path (c^1, ..., c^h) of a framed element."""
    x = canon(x)
    h = height(x)
    return tuple(truncate(x, i) for i in range(1, h + 1))


def truncate(x, depth):
    """Keep the given number of levels, collapsing deeper expansions."""
    if depth <= 1:
        return value_bip(x) if not isinstance(x, BMat) else level1(x)
    if isinstance(x, Bip):
        return x
    if isinstance(x, BMat):
        rows = tuple(
            tuple(truncate(e, depth) for e in row) for row in x.rows
        )
        return BMat(rows, x.aframe, x.bframe)
    return Prod(
        tuple(
            BMat(
                tuple(
                    tuple(truncate(e, depth - 1) for e in row)
                    for row in F.rows
                ),
                F.aframe,
                F.bframe,
            )
            for F in x.factors
        )
    )


def canonicalize_path(path):
    """Validate a level path and return the canonical one for its class."""
    path = tuple(path)
    prev_h = 0
    prev_val = None
    for lvl in path:
        c = canon(lvl)
        val = value_bip_of(c)
        if prev_val is not None and val != prev_val:
            raise ValueError("level path is not a chain of expansions")
        h = height(c)
        if h < prev_h:
            raise ValueError("level path heights must not decrease")
        prev_val, prev_h = val, h
    return levels(canon(path[-1]))


def value_bip_of(x):
    if isinstance(x, Bip):
        return x
    if isinstance(x, BMat):
        return level1(x)
    return value_bip(x)


def restrict(x, B):
    """The subframed element rooted at an inner matrix B of x."""
    for M in embedded_mats(canon(x)):
        if M == B:
            return canon(M)
    raise ValueError("inner matrix not found")


def structure_tree(x):
    """Nested display of the structure tree: (node, children)."""
    x = canon(x)
    if isinstance(x, Bip):
        return (fmt_bip(x), tuple())
    if isinstance(x, BMat):
        kids = tuple(
            structure_tree(e)
            for e in x.entries()
            if isinstance(e, Prod) or not e.is_elementary()
        )
        return (repr(x), kids)
    return (repr(value_bip(x)), tuple(structure_tree(F) for F in x.factors))


def skeleton_of(x):
    """The elementary matrix under a framed matrix/element."""
    if isinstance(x, BMat):
        return x.skeleton()
    if isinstance(x, Bip):
        return one_by_one(value_bip(x)).skeleton()
    raise ValueError("skeleton of a formal product is per factor")
