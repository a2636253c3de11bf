"""Cell complexes: the bipermutahedra PP_{n,m}, the biassociahedra
KK_{n+1,m+1} as reduced quotients, Z2 chain complexes and their checks.
"""

import json
import os
from dataclasses import dataclass, field

from .bipartitions import (
    BMat,
    Bip,
    bip_factorize,
    fmt_bip,
    one_by_one,
    strip_bip,
    tp_value,
)
from .faces import faces, top_cell
from .framed import (
    Prod,
    canon,
    dim,
    formal_factors,
    value_bip,
)
from .partitions import ResourceLimit, fmt_aug, punion

MAX_CELLS = int(os.environ.get("MATRAD_MAX_CELLS", 10 ** 6))


def cell_value(x):
    x = canon(x)
    if isinstance(x, Bip):
        return x
    if isinstance(x, BMat):
        return value_bip(Prod((x,)))
    return value_bip(x)


def perm_face(x, m):
    """The face of P_{m+n} carried by a cell (output blocks shifted by m)."""
    v = cell_value(x)
    return punion(v.den, v.num)


@dataclass
class Complex:
    kind: str
    m: int
    n: int
    cells: dict = field(default_factory=dict)  # key -> dict(dim=…, label=…)
    boundary: dict = field(default_factory=dict)  # key -> frozenset of keys
    top: object = None

    def by_dim(self):
        out = {}
        for key, info in self.cells.items():
            out.setdefault(info["dim"], []).append(key)
        return {d: sorted(ks, key=repr) for d, ks in out.items()}

    def f_vector(self):
        by = self.by_dim()
        topdim = max(by) if by else -1
        return tuple(len(by.get(d, ())) for d in range(topdim + 1))

    def euler(self):
        return sum(
            (-1) ** d * f for d, f in enumerate(self.f_vector())
        )

    def check_d_squared(self):
        """d.d = 0 over Z2; returns the offending cell or None."""
        for key, bnd in self.boundary.items():
            acc = set()
            for f in bnd:
                acc ^= self.boundary.get(f, frozenset())
            if acc:
                return key
        return None

    def labels(self, dimension):
        return sorted(
            {self.cells[k]["label"] for k in self.by_dim().get(dimension, ())}
        )


def build_pp(m, n, bound=5):
    """The bipermutahedron complex PP_{n,m} on m (x)pp n."""
    if m + n > bound:
        raise ResourceLimit(f"PP bound {bound} exceeded for m+n={m + n}")
    top = canon(top_cell(tuple(range(1, m + 1)), tuple(range(1, n + 1))))
    cx = Complex("pp", m, n, top=top)
    frontier = [top]
    cx.cells[top] = {"dim": dim(top), "label": fmt_bip(cell_value(top))}
    while frontier:
        nxt = []
        for cell in frontier:
            if len(cx.cells) > MAX_CELLS:
                raise ResourceLimit("cell cap exceeded")
            fs = frozenset(f for f in faces(cell) if balanced(f, m, n))
            cx.boundary[cell] = fs
            for f in fs:
                if f not in cx.cells:
                    cx.cells[f] = {
                        "dim": dim(f),
                        "label": fmt_bip(cell_value(f)),
                    }
                    nxt.append(f)
        frontier = nxt
    for key in cx.cells:
        cx.boundary.setdefault(key, frozenset())
    return cx


def balanced(cell, m, n):
    """The balanced filter: height <= 3, primitively coherent structure.

    Vacuous for min(m, n) <= 2 (the spec's whole build range)."""
    from .framed import height

    if height(canon(cell)) > 3:
        return False
    if min(m, n) <= 2:
        return True
    from .bipartitions import primitive_coheretization

    for F in formal_factors(cell):
        if F.is_plain() and not F.is_elementary():
            if F != primitive_coheretization(F.skeleton()) and not (
                F.is_semi_null() or not (F.iset and F.oset)
            ):
                return False
    return True


# ---------------------------------------------------------------------------
# the reduced (kk) quotient

def _strip_entry(e):
    if isinstance(e, Bip):
        return strip_bip(e)
    return Prod(tuple(_strip_mat(F) for F in e.factors))


def _strip_mat(F):
    rows = tuple(tuple(_strip_entry(e) for e in row) for row in F.rows)
    return BMat(rows, F.aframe, F.bframe)


def _is_unit(e):
    return isinstance(e, Bip) and e.is_null()


def _unit_eval(A, B):
    """Evaluate A.B when a valid block structure has a unit side per block."""
    from .bipartitions import _compositions

    if not (A.is_plain() and B.is_plain()):
        return None
    t, s = B.q, A.p
    if A.q < t or B.p < s:
        return None
    for rsplit in _compositions(A.q, t):
        rb = [0]
        for x in rsplit:
            rb.append(rb[-1] + x)
        for csplit in _compositions(B.p, s):
            cb = [0]
            for x in csplit:
                cb.append(cb[-1] + x)
            grid = []
            ok = True
            for i in range(t):
                row = []
                for j in range(s):
                    Aij = BMat(
                        tuple((A.rows[r][j],) for r in range(rb[i], rb[i + 1])),
                        (A.aframe[j],),
                        A.bframe[rb[i] : rb[i + 1]],
                    )
                    Bij = BMat(
                        (B.rows[i][cb[j] : cb[j + 1]],),
                        B.aframe[cb[j] : cb[j + 1]],
                        (B.bframe[i],),
                    )
                    a_unit = all(_is_unit(e) for e in Aij.entries())
                    b_unit = all(_is_unit(e) for e in Bij.entries())
                    if not (a_unit or b_unit):
                        ok = False
                        break
                    v = tp_value(Aij, Bij)
                    if v is None:
                        ok = False
                        break
                    row.append(strip_bip(v))
                if not ok:
                    break
                grid.append(tuple(row))
            if ok:
                aframe = tuple(grid[0][j].iset for j in range(s))
                bframe = tuple(grid[i][0].oset for i in range(t))
                return BMat(tuple(grid), aframe, bframe)
    return None


def kk_normal(x):
    """Class key for the reduced quotient: strip empty biblocks, evaluate
    unital compositions, iterate to a fixpoint."""
    x = canon(x)
    if isinstance(x, Bip):
        factors = [F for F in bip_factorize(x) if not F.is_null()]
    elif isinstance(x, BMat):
        factors = [x]
    else:
        factors = list(x.factors)
    factors = [_strip_mat(F) for F in factors]
    changed = True
    while changed:
        changed = False
        for k in range(len(factors) - 1):
            merged = _unit_eval(factors[k], factors[k + 1])
            if merged is not None:
                factors[k : k + 2] = [_strip_mat(merged)]
                changed = True
                break
    return tuple(factors)


def reddim(x):
    """Reduced dimension: sum over top-level non-null elementary leaves."""
    return sum(
        len(F.iset) + len(F.oset) - 1
        for F in _leaves(canon(x))
        if F.iset or F.oset
    )


def _leaves(x):
    out = []
    if isinstance(x, Bip):
        for F in bip_factorize(x):
            out.extend(_leaves(F))
        return out
    if isinstance(x, BMat):
        for e in x.entries():
            if isinstance(e, Bip) and e.is_elementary():
                out.append(e)
            else:
                out.extend(_leaves(e))
        return out
    for F in x.factors:
        out.extend(_leaves(F))
    return out


def reduce_kk(pp):
    """The biassociahedron KK_{n+1,m+1} as the reduced quotient of PP."""
    classes = {}
    for cell in pp.cells:
        key = kk_normal(cell)
        classes.setdefault(key, []).append(cell)
    kk = Complex("kk", pp.m, pp.n)
    rep_of = {}
    for key, members in classes.items():
        rdim = {reddim(c) for c in members}
        assert len(rdim) == 1, (key, rdim)
        rdim = rdim.pop()
        nondeg = [c for c in members if dim(c) == rdim]
        label_src = nondeg[0] if nondeg else members[0]
        kk.cells[key] = {
            "dim": rdim,
            "label": fmt_bip(strip_bip(cell_value(label_src))),
            "members": tuple(sorted(members, key=repr)),
        }
        rep_of[key] = nondeg
    kk.top = kk_normal(pp.top)
    for key, info in kk.cells.items():
        reps = rep_of[key]
        if not reps:
            kk.boundary[key] = frozenset()
            continue
        per_rep = []
        for rep in reps:
            acc = {}
            for f in pp.boundary.get(rep, frozenset()):
                fk = kk_normal(f)
                if kk.cells[fk]["dim"] == info["dim"] - 1:
                    acc[fk] = acc.get(fk, 0) ^ 1
            per_rep.append(frozenset(k for k, v in acc.items() if v))
        assert all(b == per_rep[0] for b in per_rep), key
        kk.boundary[key] = per_rep[0]
    return kk


def build_kk(m, n, bound=6):
    """KK_{n, m} built from the join parameters (n-1, m-1)."""
    if m + n > bound:
        raise ResourceLimit(f"KK bound {bound} exceeded")
    pp = build_pp(m - 1, n - 1, bound=bound)
    return reduce_kk(pp)


# ---------------------------------------------------------------------------
# theta monomials and exports

def theta_symbol(e):
    m, n = len(e.iset) + 1, len(e.oset) + 1
    if (m, n) == (1, 1):
        return "1"
    return f"t{m}^{n}"


def to_theta_monomial(x):
    """Display-only gamma expression of a cell's reduced normal form."""
    factors = kk_normal(x)
    parts = []
    for F in factors:
        if F.is_elementary():
            parts.append("".join(theta_symbol(e) for e in F.entries()))
        else:
            entry_strs = []
            for e in F.entries():
                if isinstance(e, Bip):
                    entry_strs.append(
                        "("
                        + ";".join(
                            theta_symbol(g)
                            for H in bip_factorize(e)
                            for g in H.entries()
                        )
                        + ")"
                    )
                else:
                    entry_strs.append("(" + to_theta_monomial(e) + ")")
            parts.append("[" + " ".join(entry_strs) + "]")
    return "g(" + "; ".join(parts) + ")"


def export_json(cx):
    by = cx.by_dim()
    order = [k for d in sorted(by, reverse=True) for k in by[d]]
    ids = {k: i for i, k in enumerate(order)}
    data = {
        "type": cx.kind,
        "m": cx.m,
        "n": cx.n,
        "cells": [
            {
                "id": ids[k],
                "dim": cx.cells[k]["dim"],
                "label": cx.cells[k]["label"],
                "monomial": to_theta_monomial(k)
                if cx.kind == "kk" and not isinstance(k, tuple)
                else None,
            }
            for k in order
        ],
        "boundary": {
            str(ids[k]): sorted(ids[f] for f in cx.boundary.get(k, ()))
            for k in order
        },
    }
    return json.dumps(data, indent=1)


def export_dot(cx):
    by = cx.by_dim()
    order = [k for d in sorted(by, reverse=True) for k in by[d]]
    ids = {k: i for i, k in enumerate(order)}
    lines = [f"digraph {cx.kind}_{cx.n}_{cx.m} {{"]
    for k in order:
        lines.append(
            '  c%d [label="%s (%d)"];'
            % (ids[k], cx.cells[k]["label"], cx.cells[k]["dim"])
        )
    for k in order:
        for f in cx.boundary.get(k, ()):
            lines.append("  c%d -> c%d;" % (ids[k], ids[f]))
    lines.append("}")
    return "\n".join(lines)
