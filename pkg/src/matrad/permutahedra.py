"""The permutahedron P_n as a combinatorial face lattice.

Cells are partitions of {1..n} (length k <-> codimension k-1); the boundary
operator works over Z2 by default, with an optional signed mode whose sign
convention is validated only by d.d = 0.
"""

import json
from itertools import combinations
from math import comb

from .partitions import (
    ResourceLimit,
    fmt_aug,
    ground,
    oshift,
    partitions_of,
    pi,
    punion,
)

MAX_N = 8


def perm_cells(n, bound=MAX_N):
    """All cells of P_n, as a dict dimension -> sorted list of partitions."""
    if n > bound:
        raise ResourceLimit(f"P_{n} exceeds bound {bound}")
    cells = {}
    for p in partitions_of(tuple(range(1, n + 1))):
        cells.setdefault(n - len(p), []).append(p)
    return {d: sorted(ps) for d, ps in cells.items()}


def splits(blk):
    """Proper two-block splits M | blk \\ M with both parts nonempty."""
    blk = tuple(blk)
    out = []
    for r in range(1, len(blk)):
        for m in combinations(blk, r):
            rest = tuple(x for x in blk if x not in set(m))
            out.append((m, rest))
    return out


def boundary_perm_z2(p):
    """Codimension-1 faces of a cell of P_n, as a set (Z2 chain)."""
    p = tuple(p)
    faces = set()
    for r, blk in enumerate(p):
        if len(blk) < 2:
            continue
        for m, rest in splits(blk):
            faces.add(p[:r] + (m, rest) + p[r + 1 :])
    return faces


def shuffle_sign(m, rest):
    """Sign of the permutation reordering sorted(m + rest) to (m, rest)."""
    seq = list(m) + list(rest)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def boundary_perm_signed(p):
    """Signed boundary per the derivation rule; returns {face: coefficient}."""
    p = tuple(p)
    chain = {}
    prefix = 0
    for r, blk in enumerate(p):
        if len(blk) >= 2:
            outer = (-1) ** (prefix + (r + 1) + 1)
            for m, rest in splits(blk):
                face = p[:r] + (m, rest) + p[r + 1 :]
                coeff = outer * ((-1) ** len(m)) * shuffle_sign(m, rest)
                chain[face] = chain.get(face, 0) + coeff
        prefix += len(blk)
    return {f: c for f, c in chain.items() if c}


def d_squared_zero(n, signed=False):
    for cells in perm_cells(n).values():
        for p in cells:
            if signed:
                acc = {}
                for f, c in boundary_perm_signed(p).items():
                    for g, c2 in boundary_perm_signed(f).items():
                        acc[g] = acc.get(g, 0) + c * c2
                if any(v for v in acc.values()):
                    return False
            else:
                acc = set()
                for f in boundary_perm_z2(p):
                    acc ^= boundary_perm_z2(f)
                if acc:
                    return False
    return True


def f_vector(n):
    cells = perm_cells(n)
    return tuple(len(cells.get(d, ())) for d in range(n))


def f_vector_oracle(n):
    """Independent count: k! * S(n,k) length-k partitions, dim n-k."""
    return tuple(_surjections(n, n - d) for d in range(n))


def _surjections(n, k):
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1))


def euler(n):
    return sum((-1) ** d * f for d, f in enumerate(f_vector(n)))


# ---------------------------------------------------------------------------
# combinatorial join P_m *c P_n = P_{m+n}

def join_decompose(c, m, n):
    """W: split a cell of P_{m+n} into (alpha, beta) in P'_r(m) x P'_r(n)."""
    c = tuple(c)
    mset = set(range(1, m + 1))
    alpha, beta = [], []
    for blk in c:
        alpha.append(tuple(x for x in blk if x in mset))
        beta.append(tuple(x - m for x in blk if x not in mset))
    return tuple(alpha), tuple(beta)


def join_reassemble(alpha, beta):
    """alpha U beta with the conditional shift (inverse of join_decompose)."""
    return punion(alpha, beta)


def join_table(m, n, bound=MAX_N):
    """The full decomposition table of P_m *c P_n = P_{m+n}."""
    if m + n > bound:
        raise ResourceLimit(f"P_{m + n} exceeds bound {bound}")
    rows = []
    for c in partitions_of(tuple(range(1, m + n + 1))):
        alpha, beta = join_decompose(c, m, n)
        assert join_reassemble(alpha, beta) == c
        rows.append((len(c), alpha, beta, c))
    rows.sort(key=lambda row: (row[0], row[3]))
    return rows


def cells_sorted(n):
    by_dim = perm_cells(n)
    out = []
    for d in sorted(by_dim, reverse=True):
        out.extend(by_dim[d])
    return out


def export_json(n):
    cells = cells_sorted(n)
    ids = {p: i for i, p in enumerate(cells)}
    data = {
        "cells": [
            {"id": ids[p], "dim": n - len(p), "label": fmt_aug(p)} for p in cells
        ],
        "boundary": [sorted(ids[f] for f in boundary_perm_z2(p)) for p in cells],
    }
    return json.dumps(data, indent=1)


def export_dot(n):
    cells = cells_sorted(n)
    ids = {p: i for i, p in enumerate(cells)}
    lines = ["digraph P%d {" % n]
    for p in cells:
        lines.append('  c%d [label="%s"];' % (ids[p], fmt_aug(p)))
    for p in cells:
        for f in boundary_perm_z2(p):
            lines.append("  c%d -> c%d;" % (ids[p], ids[f]))
    lines.append("}")
    return "\n".join(lines)
