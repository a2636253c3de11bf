"""The coherent codimension-1 face operator on framed elements.

Faces of the top cell are the TD coherent length-2 formal products; faces
of a proper cell replace one structure matrix (or one positive-dimensional
elementary entry) by a coherent drop-one replacement, subject to the
admission rules for formally indecomposable results.
"""

from functools import lru_cache
from itertools import product as iproduct

from .bipartitions import (
    BMat,
    Bip,
    bip_factorize,
    entry_expansions,
    one_by_one,
)
from .framed import (
    Prod,
    canon,
    cell_coherent,
    coherent_mat,
    dim,
    formal_factors,
    one_sided_vacuity_ok,
    td_coherent,
    value_bip,
)


def element_ok(x):
    return all(one_sided_vacuity_ok(F) for F in formal_factors(x))


def top_cell(a, b):
    """The elementary bipartition b/a indexing the top cell of a (x) b."""
    return Bip((tuple(sorted(a)),), (tuple(sorted(b)),))


_IN_POOL = set()


def coheretized_variants(cand, depth=2):
    """The candidate itself when coherent, else every substitution of its
    incoherent plain factors by same-dimension coherent expansions."""
    cand = canon(cand)
    if cell_coherent(cand):
        return {cand}
    if depth == 0 or isinstance(cand, Bip):
        return set()
    factors = list(formal_factors(cand))
    options = []
    for F in factors:
        if not isinstance(F, BMat) or not F.is_plain() or coherent_mat(F):
            options.append((F,))
            continue
        if F in _IN_POOL:
            return set()
        pool = expansion_pool(F)
        repl = tuple(
            R
            for d in sorted(pool, reverse=True)
            for R in pool[d]
            if R != canon(F)
        )
        if not repl:
            return set()
        options.append(repl)
    out = set()
    for combo in iproduct(*options):
        nxt = canon(Prod(_flatten(list(combo))))
        if nxt == cand:
            continue
        out |= coheretized_variants(nxt, depth - 1)
    return out


@lru_cache(maxsize=None)
def expansion_pool(E, maxlen=None):
    """Canonical coherent expansions of E (itself included), by dimension.

    Row candidates are grouped by their input partition; only tuples lying
    in the subdivision complex of the iterated diagonal can belong to a
    coherent matrix, so everything else is skipped before assembly.
    """
    from .bipartitions import _row_alpha_hat
    from .diagonals import is_sub_component

    bound = len(E.iset) + len(E.oset) + 1
    if maxlen is not None:
        bound = min(bound, maxlen)
    per_entry = [
        [
            entry_expansions(
                e, min(bound, len(e.iset) + len(e.oset) + 2)
            )
            for e in row
        ]
        for row in E.rows
    ]
    _IN_POOL.add(E)
    row_groups = []
    for i, opts in enumerate(per_entry):
        groups = {}
        for combo in iproduct(*opts):
            row_mat = BMat((combo,), E.aframe, (E.bframe[i],))
            groups.setdefault(_row_alpha_hat(row_mat), []).append(combo)
        row_groups.append(groups)
    top_is = E.iset
    pool = {}
    top = dim(E)
    for alphas in iproduct(*[list(g) for g in row_groups]):
        if top_is:
            x = tuple(reversed(alphas))
            if not is_sub_component(x, (top_is,)):
                continue
        for rows in iproduct(*[row_groups[i][alphas[i]] for i in range(E.q)]):
            D = BMat(tuple(rows), E.aframe, E.bframe)
            d = dim(D)
            if d > top:
                continue
            c = canon(D)
            for v in coheretized_variants(c):
                dv = dim(v)
                if dv > top or not element_ok(v):
                    continue
                pool.setdefault(dv, set()).add(v)
    _IN_POOL.discard(E)
    return {d: tuple(sorted(v, key=repr)) for d, v in pool.items()}


def replacements(E, dim_target, maxlen=None):
    """Canonical coherent expansions of E at the given dimension, E excluded."""
    pool = expansion_pool(E, maxlen)
    ce = canon(E)
    return tuple(D for D in pool.get(dim_target, ()) if D != ce)


def _chain(x):
    from .framed import formal_factors

    return tuple(formal_factors(x))


@lru_cache(maxsize=None)
def length2_td(a, b):
    """m (x)td^2 n: the TD coherent length-2 formal products on b/a."""
    from .partitions import aug_partitions_of

    a, b = tuple(sorted(a)), tuple(sorted(b))
    want = len(a) + len(b) - 2
    seen = set()
    for den in aug_partitions_of(a, 2):
        for num in aug_partitions_of(b, 2):
            c1 = Bip(den, num)
            facs = bip_factorize(c1)
            if any(F.is_null() for F in facs):
                continue
            pools = [expansion_pool(F) for F in facs]
            for d1, opts1 in pools[0].items():
                opts2 = pools[1].get(want - d1)
                if not opts2:
                    continue
                for D1 in opts1:
                    for D2 in opts2:
                        cand = canon(Prod(_chain(D1) + _chain(D2)))
                        if len(formal_factors(cand)) != 2:
                            continue
                        if dim(cand) != want:
                            continue
                        if not td_coherent(cand):
                            continue
                        seen.add(cand)
    return frozenset(seen)


def _entry_addresses(x):
    """Addresses of structure matrices and elementary entries inside a cell.

    An address is a tuple of steps into the canonical form:
    ("factor", k) into a product, ("entry", i, j) into a matrix,
    ("chain", k) into an entry product.
    """
    mats, elems = [], []

    def walk_mat(M, addr):
        mats.append((addr, M))
        for i in range(1, M.q + 1):
            for j in range(1, M.p + 1):
                e = M.entry(i, j)
                if isinstance(e, Prod):
                    for k, F in enumerate(e.factors, start=1):
                        walk_mat(F, addr + (("entry", i, j), ("chain", k)))
                elif e.is_elementary():
                    elems.append((addr + (("entry", i, j),), e))

    x = canon(x)
    if isinstance(x, Bip):
        for k, F in enumerate(bip_factorize(x), start=1):
            walk_mat(F, (("factor", k),))
    elif isinstance(x, BMat):
        walk_mat(x, (("factor", 1),))
    else:
        for k, F in enumerate(x.factors, start=1):
            walk_mat(F, (("factor", k),))
    return mats, elems


def _replace(x, addr, new):
    """Rebuild a cell with the object at the address replaced."""
    x = canon(x)
    if isinstance(x, Bip):
        factors = list(bip_factorize(x))
    elif isinstance(x, BMat):
        factors = [x]
    else:
        factors = list(x.factors)
    step = addr[0]
    assert step[0] == "factor"
    k = step[1] - 1
    factors[k] = _replace_in_mat(factors[k], addr[1:], new)
    return canon(Prod(_flatten(factors)))


def _flatten(factors):
    flat = []
    for F in factors:
        if isinstance(F, Prod):
            flat.extend(F.factors)
        elif isinstance(F, Bip):
            flat.extend(
                G for G in bip_factorize(F) if not G.is_null()
            )
        else:
            flat.append(F)
    return tuple(flat)


def _replace_in_mat(M, addr, new):
    if not addr:
        return new
    step = addr[0]
    assert step[0] == "entry"
    i, j = step[1], step[2]
    e = M.entry(i, j)
    if len(addr) == 1:
        new_entry = new
    else:
        assert addr[1][0] == "chain"
        k = addr[1][1] - 1
        chain = list(e.factors)
        inner = _replace_in_mat(chain[k], addr[2:], new)
        if isinstance(inner, Prod):
            chain[k : k + 1] = list(inner.factors)
        else:
            chain[k] = inner
        new_entry = Prod(tuple(chain))
    rows = [list(r) for r in M.rows]
    rows[i - 1][j - 1] = new_entry
    return BMat(tuple(tuple(r) for r in rows), M.aframe, M.bframe)


def _value_entry_action(old, new, side):
    """True when new is a single biblock split of old admissible as an
    entry action inside a row (side "row": N not extreme) or a column
    (side "col": M not extreme)."""
    old, new = value_bip(old), value_bip(new)
    if new.r != old.r + 1:
        return False
    for k in range(1, new.r):
        m, n = new.biblock(k)
        merged_den = new.den[: k - 1] + (
            tuple(sorted(new.den[k - 1] + new.den[k])),
        ) + new.den[k + 1 :]
        merged_num = new.num[: k - 1] + (
            tuple(sorted(new.num[k - 1] + new.num[k])),
        ) + new.num[k + 1 :]
        if Bip(merged_den, merged_num) != old:
            continue
        a_blk, b_blk = old.biblock(k)
        if side == "row":
            if not n or tuple(n) == tuple(b_blk):
                continue
        else:
            if not m or tuple(m) == tuple(a_blk):
                continue
        return True
    return False


def _admissible(old_factor, new_factor):
    """Admission for a replacement whose canonical form stays indecomposable."""
    new_factor = canon(new_factor)
    if isinstance(new_factor, (Prod,)):
        return True  # formally decomposable
    if isinstance(new_factor, Bip):
        return True  # collapses to a plain bipartition (decomposable chain)
    F = new_factor
    if isinstance(old_factor, Bip):
        old_factor = one_by_one(old_factor)
    t, s = F.q, F.p
    if t >= 2 and s >= 2:
        return True
    if old_factor.q != t or old_factor.p != s:
        return False
    if s >= 2 and t == 1:
        hits = [
            j
            for j in range(1, s + 1)
            if F.entry(1, j) != old_factor.entry(1, j)
        ]
        return len(hits) == 1 and _value_entry_action(
            old_factor.entry(1, hits[0]), F.entry(1, hits[0]), "row"
        )
    if t >= 2 and s == 1:
        hits = [
            i
            for i in range(1, t + 1)
            if F.entry(i, 1) != old_factor.entry(i, 1)
        ]
        return len(hits) == 1 and _value_entry_action(
            old_factor.entry(hits[0], 1), F.entry(hits[0], 1), "col"
        )
    return False


@lru_cache(maxsize=None)
def faces(cell):
    """Coherent codimension-1 faces of a coherent framed element."""
    cell = canon(cell)
    if isinstance(cell, Bip) and cell.is_elementary():
        a, b = cell.iset, cell.oset
        if len(a) + len(b) < 2:
            return frozenset()
        return length2_td(a, b)
    want = dim(cell) - 1
    out = set()
    mats, elems = _entry_addresses(cell)
    for addr, E in mats:
        if dim(E) <= 0:
            continue
        for D in replacements(E, dim(E) - 1):
            if not _admissible(E, D):
                continue
            cand = _replace(cell, addr, canon(D))
            for v in coheretized_variants(cand):
                if dim(v) != want:
                    continue
                if not element_ok(v):
                    continue
                out.add(v)
    old_factors = {}
    for addr, E in mats:
        if addr[0][0] == "factor" and len(addr) == 1:
            old_factors[addr[0][1]] = E
    for addr, e in elems:
        if dim(e) <= 0:
            continue
        k = addr[0][1]
        for D in length2_td(e.iset, e.oset):
            piece = (
                Prod(tuple(bip_factorize(D)))
                if isinstance(D, Bip)
                else D
            )
            old_factor = old_factors.get(k)
            if old_factor is not None and len(addr) == 2:
                try:
                    new_factor = canon(
                        _replace_entry_mat(old_factor, addr[1:], piece)
                    )
                except AssertionError:
                    continue
                if not _admissible(old_factor, new_factor):
                    continue
            cand = _replace_entry_cell(cell, addr, piece)
            if cand is None:
                continue
            for v in coheretized_variants(cand):
                if dim(v) != want:
                    continue
                if not element_ok(v):
                    continue
                out.add(v)
    return frozenset(out)


def _replace_entry_cell(cell, addr, piece):
    cell = canon(cell)
    if isinstance(cell, Bip):
        factors = list(bip_factorize(cell))
    elif isinstance(cell, BMat):
        factors = [cell]
    else:
        factors = list(cell.factors)
    k = addr[0][1] - 1
    mat_addr = addr[1:]
    try:
        factors[k] = _replace_entry_mat(factors[k], mat_addr, piece)
    except AssertionError:
        return None
    return canon(Prod(_flatten(factors)))


def _replace_entry_mat(M, addr, piece):
    step = addr[0]
    assert step[0] == "entry"
    i, j = step[1], step[2]
    rows = [list(r) for r in M.rows]
    if len(addr) == 1:
        rows[i - 1][j - 1] = piece
    else:
        assert addr[1][0] == "chain"
        k = addr[1][1] - 1
        e = rows[i - 1][j - 1]
        chain = list(e.factors)
        chain[k] = _replace_entry_mat(chain[k], addr[2:], piece)
        rows[i - 1][j - 1] = Prod(tuple(chain))
    return BMat(tuple(tuple(r) for r in rows), M.aframe, M.bframe)
