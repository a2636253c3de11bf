"""The S-U diagonal on permutahedra via complementary pairs, its iterates,
the induced diagonal on associahedra, and the unique-factor-replacement of
product cells (used by the coherence machinery).

Everything is over Z2; the integer sign sgn(e1,e2) lives in an external
reference and is deliberately not implemented.
"""

from functools import lru_cache
from itertools import permutations

from .partitions import ResourceLimit, merge_at, pi, refines
from .permutahedra import boundary_perm_z2
from .trees import is_nondegenerate, tonks_project

MAX_N = 7


def cp_seed(sigma):
    """Split a permutation into maximal decreasing / increasing runs."""
    a_runs, b_runs = [], []
    dec, inc = [sigma[0]], [sigma[0]]
    for x in sigma[1:]:
        if x < dec[-1]:
            dec.append(x)
        else:
            a_runs.append(tuple(sorted(dec)))
            dec = [x]
        if x > inc[-1]:
            inc.append(x)
        else:
            b_runs.append(tuple(sorted(inc)))
            inc = [x]
    a_runs.append(tuple(sorted(dec)))
    b_runs.append(tuple(sorted(inc)))
    return tuple(a_runs), tuple(b_runs)


def right_shift(a, i, m):
    """R_M at position i (1-indexed): move m from block i into block i+1."""
    a = tuple(a)
    m = tuple(sorted(m))
    if not m:
        return a
    blk, nxt = a[i - 1], a[i]
    if not (set(m) < set(blk)) or (nxt and min(m) <= max(nxt)):
        raise ValueError(f"inadmissible right shift {m} at {i} in {a}")
    rest = tuple(x for x in blk if x not in set(m))
    return a[: i - 1] + (rest, tuple(sorted(nxt + m))) + a[i + 1 :]


def left_shift(a, j, n):
    """L_N at position j (1-indexed): move n from block j into block j-1."""
    a = tuple(a)
    n = tuple(sorted(n))
    if not n:
        return a
    blk, prev = a[j - 1], a[j - 2]
    if not (set(n) < set(blk)) or (prev and min(n) <= max(prev)):
        raise ValueError(f"inadmissible left shift {n} at {j} in {a}")
    rest = tuple(x for x in blk if x not in set(n))
    return a[: j - 2] + (tuple(sorted(prev + n)), rest) + a[j:]


def _proper_subsets(blk):
    out = [()]
    for x in blk:
        out += [s + (x,) for s in out]
    return [s for s in out if len(s) < len(blk)]


@lru_cache(maxsize=None)
def right_closure(a):
    """All R_M(a) over admissible shift chains M = (M_1, ..., M_{k-1})."""
    k = len(a)
    states = {a}
    for i in range(1, k):
        nxt = set()
        for cur in states:
            blk, after = cur[i - 1], cur[i]
            for m in _proper_subsets(blk):
                if m and after and min(m) <= max(after):
                    continue
                nxt.add(right_shift(cur, i, m) if m else cur)
        states = nxt
    return frozenset(states)


@lru_cache(maxsize=None)
def left_closure(a):
    """All L_N(a) over admissible shift chains N = (N_k, ..., N_2)."""
    k = len(a)
    states = {a}
    for j in range(k, 1, -1):
        nxt = set()
        for cur in states:
            blk, before = cur[j - 1], cur[j - 2]
            for n in _proper_subsets(blk):
                if n and before and min(n) <= max(before):
                    continue
                nxt.add(left_shift(cur, j, n) if n else cur)
        states = nxt
    return frozenset(states)


@lru_cache(maxsize=None)
def diagonal_top(ground):
    """Complementary pairs of the top cell of P(ground)."""
    ground = tuple(ground)
    n = len(ground)
    if n == 0:
        return frozenset({((), ())})
    pairs = set()
    for sigma in permutations(ground):
        a_s, b_s = cp_seed(sigma)
        for left in right_closure(a_s):
            for right in left_closure(b_s):
                pairs.add((left, right))
    return frozenset(pairs)


def diagonal_P(n, bound=MAX_N):
    """Delta_P(e^{n-1}) as the set of complementary pairs of partitions of {1..n}."""
    if n > bound:
        raise ResourceLimit(f"Delta_P bound {bound} exceeded for n={n}")
    return set(diagonal_top(tuple(range(1, n + 1))))


def diagonal_cell(p):
    """Comultiplicative extension of Delta_P to the cell indexed by partition p."""
    p = pi(tuple(p))
    if not p:
        return {((), ())}
    out = {((), ())}
    for blk in p:
        new = set()
        for u, v in out:
            for x, y in diagonal_top(blk):
                new.add((u + x, v + y))
        out = new
    return out


def diagonal_chain_map(n):
    """Check d(Delta x) = Delta(d x) over Z2 on every cell of P_n."""
    from .permutahedra import perm_cells

    for cells in perm_cells(n).values():
        for p in cells:
            lhs = set()
            for pair in diagonal_cell(p):
                for e1 in boundary_perm_z2(pair[0]):
                    lhs ^= {(e1, pair[1])}
                for e2 in boundary_perm_z2(pair[1]):
                    lhs ^= {(pair[0], e2)}
            rhs = set()
            for f in boundary_perm_z2(p):
                rhs ^= set(diagonal_cell(f))
            if lhs != rhs:
                return False
    return True


def diagonal_K(n, bound=MAX_N):
    """Push the non-degenerate complementary pairs through the Tonks projection."""
    pairs = diagonal_P(n, bound)
    out = set()
    for a, b in pairs:
        if is_nondegenerate(a) and is_nondegenerate(b):
            out.add((tonks_project(a), tonks_project(b)))
    return out


# ---------------------------------------------------------------------------
# iterated diagonal and diagonal components of product cells

def iterated_components(e, k):
    """Diagonal components of the k-fold left iterate on the cell e."""
    return set(_iterated(pi(tuple(e)), k))


@lru_cache(maxsize=None)
def _iterated(e, k):
    if k == 0:
        return frozenset({(e,)})
    out = set()
    for e1, e2 in diagonal_cell(e):
        for rest in _iterated(e1, k - 1):
            out.add(rest + (e2,))
    return frozenset(out)


def product_dim(x):
    from .partitions import adim

    return sum(adim(f) for f in x)


def is_diag_component(x, e):
    """|X| = |e| membership in the components of the (len(x)-1)-iterate."""
    x = tuple(pi(f) for f in x)
    return x in iterated_components(e, len(x) - 1)


def is_sub_component(x, e):
    """X lies in the subdivision complex: factorwise refinement of a component."""
    x = tuple(pi(f) for f in x)
    for y in iterated_components(e, len(x) - 1):
        if all(refines(xf, yf) for xf, yf in zip(x, y)):
            return True
    return False


def factor_replacement(x, e, exclude=None):
    """The unique (j, l) such that merging factor j at l gives a component of e.

    Implements the uniqueness of Proposition "ab": case (1) passes the
    excluded component, case (2) passes exclude=None.
    """
    x = tuple(tuple(f) for f in x)
    hits = []
    for j, factor in enumerate(x, start=1):
        for ell in range(1, len(factor)):
            merged = x[: j - 1] + (merge_at(factor, ell),) + x[j:]
            if exclude is not None and merged == exclude:
                continue
            if is_diag_component(merged, e):
                hits.append((j, ell, merged))
    if len(hits) != 1:
        raise ValueError(f"expected a unique replacement, found {len(hits)}")
    return hits[0]


def diagonal_oracle(n):
    """Pair-by-pair membership test, independent of the generating sweep."""
    from .partitions import partitions_of

    ground = tuple(range(1, n + 1))
    sigma_data = []
    for sigma in permutations(ground):
        a_s, b_s = cp_seed(sigma)
        sigma_data.append((right_closure(a_s), left_closure(b_s)))
    count = 0
    cells = partitions_of(ground)
    for a in cells:
        for b in cells:
            if any(a in ra and b in lb for ra, lb in sigma_data):
                count += 1
    return count


@lru_cache(maxsize=None)
def _proper_faces(e):
    """Strict refinements of the cell e (its proper faces)."""
    from .permutahedra import boundary_perm_z2

    seen = set()
    frontier = {pi(tuple(e))}
    while frontier:
        nxt = set()
        for c in frontier:
            for f in boundary_perm_z2(c):
                if f not in seen:
                    seen.add(f)
                    nxt.add(f)
        frontier = nxt
    return frozenset(seen)


def is_interior_sub_component(x, e):
    """Sub-component of e's iterate supported on no proper face of e.

    Subdivision cells over a boundary face are represented over that face,
    never over e itself."""
    x = tuple(pi(f) for f in x)
    if not is_sub_component(x, e):
        return False
    for z in _proper_faces(e):
        if is_sub_component(x, z):
            return False
    return True
