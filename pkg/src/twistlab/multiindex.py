"""Multi-index bookkeeping for the complex exterior algebra.

Monomials are written ``dz^I wedge dzbar^J`` with ``I`` and ``J`` strictly
increasing tuples of integers in ``1..n``.  All sign conventions used by the
rest of the package (wedge signs, contraction signs, conjugation signs) are
centralised here.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


def check_multi_index(indices, n):
    """Validate a strictly increasing multi-index with entries in 1..n."""
    idx = tuple(int(i) for i in indices)
    if any(i < 1 or i > n for i in idx):
        raise ValueError(f"index entries must lie in 1..{n}, got {idx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"multi-index must be strictly increasing, got {idx}")
    return idx


@lru_cache(maxsize=None)
def all_indices(n, p):
    """All strictly increasing multi-indices of length p in 1..n.

    Out-of-range lengths give an empty basis, so forms of impossible bidegree
    are canonically zero instead of an error; this keeps operator compositions
    uniform in all bidegrees.
    """
    if p < 0 or p > n:
        return ()
    return tuple(combinations(range(1, n + 1), p))


@lru_cache(maxsize=None)
def merge_sign(a, b):
    """Sign of sorting the concatenation a + b into increasing order.

    Returns ``(sign, merged)``; sign is 0 when the tuples overlap.
    """
    if set(a) & set(b):
        return 0, None
    sign = 1
    # count inversions of the concatenation
    for x in b:
        for y in a:
            if y > x:
                sign = -sign
    merged = tuple(sorted(a + b))
    return sign, merged


@lru_cache(maxsize=None)
def removal_sign(j, a):
    """Sign produced by moving dx_j to the front of dx^a, or 0 if j not in a."""
    if j not in a:
        return 0, None
    pos = a.index(j)
    return (-1) ** pos, tuple(x for x in a if x != j)


@lru_cache(maxsize=None)
def bidegree_basis(n, p, q):
    """Ordered basis of (p, q)-monomials as (I, J) pairs."""
    return tuple((I, J) for I in all_indices(n, p) for J in all_indices(n, q))


@lru_cache(maxsize=None)
def basis_position(n, p, q):
    """Map (I, J) -> position in ``bidegree_basis(n, p, q)``."""
    return {key: i for i, key in enumerate(bidegree_basis(n, p, q))}


@lru_cache(maxsize=None)
def wedge_table(n, p1, q1, p2, q2):
    """Structure constants of the wedge product on monomials.

    Entries are ``(pos_out, pos_a, pos_b, sign)`` with the convention
    ``(dz^I1 ^ dzbar^J1) ^ (dz^I2 ^ dzbar^J2)`` picking up ``(-1)**(p2*q1)``
    from moving the second dz-block through the first dzbar-block.
    """
    if p1 + p2 > n or q1 + q2 > n:
        return ()
    pos_a = basis_position(n, p1, q1)
    pos_b = basis_position(n, p2, q2)
    pos_out = basis_position(n, p1 + p2, q1 + q2)
    cross = (-1) ** (p2 * q1)
    table = []
    for (I1, J1), ia in pos_a.items():
        for (I2, J2), ib in pos_b.items():
            si, I = merge_sign(I1, I2)
            if si == 0:
                continue
            sj, J = merge_sign(J1, J2)
            if sj == 0:
                continue
            table.append((pos_out[(I, J)], ia, ib, si * sj * cross))
    return tuple(table)


@lru_cache(maxsize=None)
def conj_table(n, p, q):
    """Conjugation on monomials: conj(dz^I ^ dzbar^J) = (-1)^(pq) dz^J ^ dzbar^I.

    Returns tuples ``(pos_out, pos_in, sign)`` mapping (p, q) to (q, p).
    """
    pos_in = basis_position(n, p, q)
    pos_out = basis_position(n, q, p)
    sign = (-1) ** (p * q)
    return tuple((pos_out[(J, I)], i, sign) for (I, J), i in pos_in.items())


def degree_pairs(n):
    """All bidegrees (p, q) with 0 <= p, q <= n."""
    return [(p, q) for p in range(n + 1) for q in range(n + 1)]
