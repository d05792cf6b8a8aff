"""Brute-force cellular homology of UD^n T, independent of the Morse matching.

Betti numbers mod 2 come from rank reduction of the full boundary matrices
(columns stored as Python ints used as bitsets).  Torsion is checked with an
integral column reduction; when every pivot it meets is a unit the
elementary divisors are all 1, otherwise the offending matrix is handed to a
dense Smith normal form.
"""

import logging

from .cells import enumerate_cells, faces_with_sign

log = logging.getLogger(__name__)


class ResourceBoundExceeded(RuntimeError):
    pass


def chain_complex(tree, n, max_cells=200_000):
    """Cells per dimension and, for each dimension i >= 1, the boundary as a
    list of sparse integer columns ``{row index: coefficient}``."""
    cells = []
    for i in range(n + 1):
        cs = enumerate_cells(tree, n, i)
        if len(cs) > max_cells:
            raise ResourceBoundExceeded(f"{len(cs)} cells in dimension {i} exceeds bound {max_cells}")
        cells.append(cs)
    mats = [None]
    for i in range(1, n + 1):
        index = {c: k for k, c in enumerate(cells[i - 1])}
        cols = []
        for c in cells[i]:
            col = {}
            for f, s in faces_with_sign(tree, c):
                r = index[f]
                col[r] = col.get(r, 0) + s
            cols.append({r: a for r, a in col.items() if a})
        mats.append(cols)
    return cells, mats


def _rank_mod2(cols, skip=()):
    """Rank over GF(2); returns (rank, set of pivot rows)."""
    pivots = {}
    for j, col in enumerate(cols):
        if j in skip:
            continue
        x = 0
        for r, a in col.items():
            if a & 1:
                x ^= 1 << r
        while x:
            low = x.bit_length() - 1
            p = pivots.get(low)
            if p is None:
                pivots[low] = x
                break
            x ^= p
    return len(pivots), set(pivots)


def betti_mod2(tree, n, max_cells=200_000, complex_=None):
    """Mod-2 Betti numbers b_0..b_n by boundary-matrix rank."""
    cells, mats = complex_ or chain_complex(tree, n, max_cells)
    ranks = [0] * (n + 2)
    cleared = set()
    # top-down so pivot rows of d_{i+1} can be skipped as columns of d_i
    for i in range(n, 0, -1):
        ranks[i], rows = _rank_mod2(mats[i], skip=cleared)
        cleared = rows
    return [len(cells[i]) - ranks[i] - ranks[i + 1] for i in range(n + 1)]


def smith_invariants(matrix):
    """Nonzero invariant factors of a small dense integer matrix."""
    a = [list(row) for row in matrix]
    m = len(a)
    k = len(a[0]) if m else 0
    out = []
    t = 0
    while t < min(m, k):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, k) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for j in range(t, k):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            for j in range(t + 1, k):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if not done:
                continue
            # the pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, k) if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            i, _ = bad
            for j in range(t, k):
                a[t][j] += a[i][j]
        out.append(abs(a[t][t]))
        t += 1
    return out


def _reduce_integral(cols, nrows, skip=(), dense_limit=400):
    """Column-reduce over Z.  Returns (rank, pivot rows, invariant factors > 1)."""
    pivots = {}
    nonunit = False
    for j, col in enumerate(cols):
        if j in skip:
            continue
        x = dict(col)
        while x:
            low = max(x)
            p = pivots.get(low)
            if p is None:
                pivots[low] = x
                if abs(x[low]) != 1:
                    nonunit = True
                break
            a, b = x[low], p[low]
            if abs(b) != 1:
                nonunit = True
                break
            f = a * b
            for r, c in p.items():
                v = x.get(r, 0) - f * c
                if v:
                    x[r] = v
                else:
                    x.pop(r, None)
        if nonunit:
            break
    if not nonunit:
        return len(pivots), set(pivots), []
    live = [j for j in range(len(cols)) if j not in skip]
    if len(live) > dense_limit or nrows > dense_limit:
        raise ResourceBoundExceeded("non-unit pivot in a matrix too large for dense Smith form")
    dense = [[cols[j].get(r, 0) for j in live] for r in range(nrows)]
    inv = smith_invariants(dense)
    return len(inv), None, [d for d in inv if d > 1]


def integral_homology(tree, n, max_cells=200_000, complex_=None):
    """Free ranks and torsion coefficients of H_i(UD^n T; Z).

    Returns ``(ranks, torsion)`` where ``torsion[i]`` lists the invariant
    factors > 1 of the boundary map into dimension i.
    """
    cells, mats = complex_ or chain_complex(tree, n, max_cells)
    ranks = [0] * (n + 2)
    torsion = [[] for _ in range(n + 1)]
    cleared = set()
    for i in range(n, 0, -1):
        r, rows, tor = _reduce_integral(mats[i], len(cells[i - 1]), skip=cleared)
        ranks[i] = r
        torsion[i - 1] = tor
        # clearing is only sound when the pivots were all units
        cleared = rows if rows is not None else set()
    betti = [len(cells[i]) - ranks[i] - ranks[i + 1] for i in range(n + 1)]
    return betti, torsion

