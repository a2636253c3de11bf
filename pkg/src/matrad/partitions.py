"""Ordered sets and ordered/augmented partitions.

An ordered set is a strictly increasing tuple of positive integers (the
empty tuple is allowed, with min = max = 0 by convention).  An augmented
partition is a tuple of pairwise disjoint ordered sets ("blocks", empty
blocks allowed) whose union is the ground set.  Partitions proper have no
empty blocks, except for the empty ground which is carried by its number
of empty blocks.

Text form: blocks joined by "|", an empty block printed "0", elements
concatenated when all are single digits and comma-separated otherwise.
"""

from functools import lru_cache
from itertools import combinations

MAX_GROUND = 12


class ResourceLimit(Exception):
    """Enumeration bound exceeded."""


def oset(xs):
    """Normalize an iterable of positive integers to an ordered set."""
    t = tuple(sorted(set(xs)))
    assert all(isinstance(x, int) and x > 0 for x in t), t
    return t


def omin(a):
    return a[0] if a else 0


def omax(a):
    return a[-1] if a else 0


def oshift(a, n):
    """Right-shift a+n of an ordered set."""
    return tuple(x + n for x in a)


def ounion(a, b):
    """Ordered set union a U b, shifting b by max(a) when min(b) <= max(a)."""
    if b and a and omin(b) <= omax(a):
        b = oshift(b, omax(a))
    assert not set(a) & set(b)
    return tuple(sorted(a + b))


# ---------------------------------------------------------------------------
# augmented partitions: tuple of blocks

def ground(alpha):
    g = []
    for blk in alpha:
        g.extend(blk)
    return tuple(sorted(g))


def length(alpha):
    return len(alpha)


def check_aug(alpha):
    seen = set()
    for blk in alpha:
        assert blk == tuple(sorted(blk)), alpha
        assert not (set(blk) & seen), alpha
        seen.update(blk)
    return alpha


def embed(a, b):
    """Embedding partition EP_b(a) of a in b, as an augmented partition of a."""
    a, b = tuple(a), tuple(b)
    if not set(a) <= set(b):
        raise ValueError(f"{a} is not a subset of {b}")
    if not a:
        return ((),) * (len(b) + 1)
    elems = list(a)
    bset = sorted(b)
    blocks = []
    # leading gap
    j0 = sum(1 for x in bset if x < elems[0])
    blocks.extend([()] * j0)
    cur = [elems[0]]
    for prev, nxt in zip(elems, elems[1:]):
        gap = sum(1 for x in bset if prev < x < nxt)
        if gap == 0:
            cur.append(nxt)
        else:
            blocks.append(tuple(cur))
            blocks.extend([()] * (gap - 1))
            cur = [nxt]
    blocks.append(tuple(cur))
    jm = sum(1 for x in bset if x > elems[-1])
    blocks.extend([()] * jm)
    return tuple(blocks)


def punion(alpha, beta):
    """Partitioned union of equal-length augmented partitions."""
    if len(alpha) != len(beta):
        raise ValueError("partitioned union needs equal lengths")
    a, b = ground(alpha), ground(beta)
    shift = omax(a) if (b and a and omin(b) <= omax(a)) else 0
    out = []
    for x, y in zip(alpha, beta):
        out.append(tuple(sorted(x + oshift(y, shift))))
    return check_aug(tuple(out))


@lru_cache(maxsize=None)
def mu(alpha, lam):
    """lambda-projection: merge the blocks of alpha between the indices in lam.

    alpha has n+1 blocks, lam is an ordered subset of {1..n}; the result has
    len(lam)+1 blocks.
    """
    n = len(alpha) - 1
    lam = tuple(sorted(lam))
    if any(not 1 <= i <= n for i in lam):
        raise ValueError(f"lambda {lam} out of range for length {n + 1}")
    cuts = (0,) + lam + (n + 1,)
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        blk = []
        for i in range(lo, hi):
            blk.extend(alpha[i])
        out.append(tuple(sorted(blk)))
    return tuple(out)


def merge_at(alpha, i):
    """alpha[i]: merge blocks i and i+1 (1-indexed)."""
    n = len(alpha) - 1
    return mu(alpha, tuple(k for k in range(1, n + 1) if k != i))


def split_at(alpha, k, m):
    """Partitioning action of m on block k (1-indexed): ... | m | A_k \\ m | ..."""
    if not 1 <= k <= len(alpha):
        raise ValueError(f"block index {k} out of range")
    blk = alpha[k - 1]
    m = tuple(sorted(m))
    if not set(m) <= set(blk):
        raise ValueError(f"{m} is not a subset of block {blk}")
    rest = tuple(x for x in blk if x not in set(m))
    return alpha[: k - 1] + (m, rest) + alpha[k:]


def pi(alpha):
    """Discard empty blocks; the empty ground maps to the empty partition ()."""
    return tuple(blk for blk in alpha if blk)


def adim(alpha):
    """Dimension #ground - length of the underlying partition (0 on empty ground)."""
    g = ground(alpha)
    if not g:
        return 0
    return len(g) - len(pi(alpha))


def vac(alpha):
    """Vacuosity: the number of empty blocks."""
    return len(alpha) - len(pi(alpha))


def refines(x, y):
    """True when y is obtained from x by merging consecutive blocks (x <= y as faces)."""
    j = 0
    for blk in y:
        acc = []
        while j < len(x) and len(acc) < len(blk):
            acc.extend(x[j])
            j += 1
        if tuple(sorted(acc)) != blk:
            return False
    return j == len(x)


# ---------------------------------------------------------------------------
# enumeration

def partitions_of(a, length=None, bound=8):
    """Ordered partitions of the ordered set a (no empty blocks), lexicographic.

    With length=k, only the length-k partitions.  The empty ground yields the
    empty partition () once (and nothing for length >= 1).
    """
    a = tuple(a)
    if len(a) > bound:
        raise ResourceLimit(f"ground of size {len(a)} exceeds bound {bound}")
    out = sorted(_opartitions(a))
    if length is not None:
        out = [p for p in out if len(p) == length]
    return out


@lru_cache(maxsize=None)
def _opartitions(a):
    if not a:
        return ((),)
    first, rest = a[0], a[1:]
    out = []
    for sub in _subsets(rest):
        blk = tuple(sorted((first,) + sub))
        remainder = tuple(x for x in a if x not in set(blk))
        for tail in _opartitions(remainder):
            for pos in range(len(tail) + 1):
                out.append(tail[:pos] + (blk,) + tail[pos:])
    return tuple(set(out))


def _subsets(xs):
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield c


def aug_partitions_of(a, length, bound=8):
    """All augmented partitions of a with the given number of blocks."""
    a = tuple(a)
    if len(a) > bound:
        raise ResourceLimit(f"ground of size {len(a)} exceeds bound {bound}")
    if length < 1:
        return []
    out = []
    for assign in _assignments(a, length):
        out.append(assign)
    return sorted(set(out))


def _assignments(a, r):
    if not a:
        yield ((),) * r
        return
    head, tail = a[0], a[1:]
    for rest in _assignments(tail, r):
        for k in range(r):
            yield rest[:k] + (tuple(sorted((head,) + rest[k])),) + rest[k + 1 :]


def ordered_bell(n):
    """Independent count of ordered set partitions (Fubini numbers)."""
    if n == 0:
        return 1
    from math import comb

    return sum(comb(n, k) * ordered_bell(n - k) for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# text grammar

def fmt_block(blk):
    if not blk:
        return "0"
    if all(x < 10 for x in blk):
        return "".join(str(x) for x in blk)
    return ",".join(str(x) for x in blk)


def fmt_aug(alpha):
    return "|".join(fmt_block(blk) for blk in alpha)


def parse_block(text):
    text = text.strip()
    if text == "0":
        return ()
    if "," in text:
        return oset(int(x) for x in text.split(","))
    return oset(int(ch) for ch in text)


def parse_aug(text):
    return tuple(parse_block(b) for b in text.strip().split("|"))
