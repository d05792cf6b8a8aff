"""The discrete Morse matching on UD^n T and its discrete flow.

Cells are classified by scanning their members in increasing order: the
first unblocked vertex or respectful edge decides whether the cell is
redundant or collapsible; if neither occurs the cell is critical.
"""

import enum

from .cells import (
    Cell,
    Chain,
    CellError,
    boundary,
    count_cells,
    enumerate_cells,
    faces_with_sign,
    format_cell,
    occupied,
)


class CellStatus(enum.Enum):
    CRITICAL = "Critical"
    REDUNDANT = "Redundant"
    COLLAPSIBLE = "Collapsible"

    def __str__(self):
        return self.value


class MorseError(CellError):
    pass


class VertexNotInCell(MorseError):
    pass


class EdgeNotInCell(MorseError):
    pass


class WrongStatus(MorseError):
    pass


class NotCritical(MorseError):
    pass


class StabilizationGuardExceeded(RuntimeError):
    pass


class MorseBoundaryNonzero(RuntimeError):
    pass


def is_blocked(tree, v, c, occ=None):
    """A vertex is blocked if it is the root or its edge toward the root
    touches another member of the cell."""
    if v not in c.vertices:
        raise VertexNotInCell(f"v{v} is not a vertex of {format_cell(c)}")
    if v == 0:
        return True
    if occ is None:
        occ = occupied(tree, c)
    return tree.parent[v] in occ


def is_disrespectful(tree, e, c):
    if e not in c.edges:
        raise EdgeNotInCell(f"e{e} is not an edge of {format_cell(c)}")
    t = tree.parent[e]
    verts = c.vertices
    # neighbours of t with t < v < e are exactly its children below e
    return any(w < e and w in verts for w in tree.children[t])


def _decide(tree, c):
    """Return (status, pivot) where pivot is the deciding vertex or edge."""
    occ = occupied(tree, c)
    parent = tree.parent
    verts = c.vertices
    vi = ei = 0
    nv, ne = len(verts), len(c.edges)
    while vi < nv or ei < ne:
        if ei >= ne or (vi < nv and verts[vi] < c.edges[ei]):
            v = verts[vi]
            vi += 1
            if v != 0 and parent[v] not in occ:
                return CellStatus.REDUNDANT, v
        else:
            e = c.edges[ei]
            ei += 1
            t = parent[e]
            if not any(w < e and w in verts for w in tree.children[t]):
                return CellStatus.COLLAPSIBLE, e
    return CellStatus.CRITICAL, None


def classify(tree, c):
    return _decide(tree, c)[0]


def match_up(tree, c):
    """W(c): swap the minimal unblocked vertex for its edge toward the root."""
    status, v = _decide(tree, c)
    if status is not CellStatus.REDUNDANT:
        raise WrongStatus(f"{format_cell(c)} is {status}, not Redundant")
    return Cell(tuple(u for u in c.vertices if u != v), tuple(sorted(c.edges + (v,))))


def match_down(tree, c):
    """W^-1(c): swap the minimal respectful edge for its far endpoint."""
    status, e = _decide(tree, c)
    if status is not CellStatus.COLLAPSIBLE:
        raise WrongStatus(f"{format_cell(c)} is {status}, not Collapsible")
    return Cell(tuple(sorted(c.vertices + (e,))), tuple(f for f in c.edges if f != e))


class MorseComplex:
    """Cell enumeration, matching and discrete flow for one (tree, n).

    Per-cell results are memoised; the object is read-only from the
    caller's point of view.
    """

    def __init__(self, tree, n):
        self.tree = tree
        self.n = n
        self._cells = {}
        self._decided = {}
        self._what = {}
        self._finf = {}
        self._critical = {}

    def cells(self, i):
        if i not in self._cells:
            self._cells[i] = enumerate_cells(self.tree, self.n, i)
        return self._cells[i]

    def decide(self, c):
        hit = self._decided.get(c)
        if hit is None:
            hit = self._decided[c] = _decide(self.tree, c)
        return hit

    def status(self, c):
        return self.decide(c)[0]

    def critical_cells(self, i):
        if i not in self._critical:
            self._critical[i] = [c for c in self.cells(i) if self.status(c) is CellStatus.CRITICAL]
        return list(self._critical[i])

    def status_counts(self, i):
        counts = {s: 0 for s in CellStatus}
        for c in self.cells(i):
            counts[self.status(c)] += 1
        return counts

    def w_hat(self, c):
        """(W(c), sign) with sign chosen so c has coefficient -1 in the boundary
        of sign * W(c); ``None`` unless ``c`` is redundant."""
        if c in self._what:
            return self._what[c]
        status, v = self.decide(c)
        out = None
        if status is CellStatus.REDUNDANT:
            up = Cell(tuple(u for u in c.vertices if u != v), tuple(sorted(c.edges + (v,))))
            eps = next(s for f, s in faces_with_sign(self.tree, up) if f == c)
            out = (up, -eps)
        self._what[c] = out
        return out

    def _w_hat_chain(self, terms):
        out = {}
        for c, a in terms.items():
            hit = self.w_hat(c)
            if hit is not None:
                up, s = hit
                out[up] = out.get(up, 0) + s * a
        return out

    def _boundary_terms(self, terms):
        out = {}
        for c, a in terms.items():
            if c.edges:
                for f, s in faces_with_sign(self.tree, c):
                    out[f] = out.get(f, 0) + s * a
        return out

    def flow(self, ch):
        """One step of the discrete flow 1 + dW + Wd."""
        terms = dict(ch.terms)
        for c, a in self._boundary_terms(self._w_hat_chain(ch.terms)).items():
            terms[c] = terms.get(c, 0) + a
        for c, a in self._w_hat_chain(self._boundary_terms(ch.terms)).items():
            terms[c] = terms.get(c, 0) + a
        return Chain(ch.dim, terms)

    def flow_infinity(self, ch, max_iter=None):
        """Iterate the flow until it stabilises."""
        if max_iter is None:
            max_iter = max(1, count_cells(self.tree, self.n, ch.dim)) if ch.dim >= 0 else 1
        cur = ch
        for _ in range(max_iter + 1):
            nxt = self.flow(cur)
            if nxt == cur:
                return cur
            cur = nxt
        raise StabilizationGuardExceeded(f"flow did not stabilise within {max_iter} steps")

    def critical_flow(self, c):
        """f^infinity of a single critical cell (memoised)."""
        if c not in self._finf:
            self._finf[c] = self.flow_infinity(Chain.of(c))
        return self._finf[c]

    def morse_boundary(self, c):
        if self.status(c) is not CellStatus.CRITICAL:
            raise NotCritical(f"{format_cell(c)} is not critical")
        if not c.edges:
            return Chain(-1)
        bd = boundary(self.tree, self.critical_flow(c))
        return Chain(c.dim - 1, {f: a for f, a in bd.items() if self.status(f) is CellStatus.CRITICAL})

    def betti_numbers(self, check=True):
        """Critical cell counts per dimension, which equal the Betti numbers.

        With ``check`` the Morse boundary of every critical cell is computed
        and must vanish.
        """
        ranks = []
        for i in range(self.n + 1):
            crit = self.critical_cells(i)
            if check:
                for c in crit:
                    if self.morse_boundary(c):
                        raise MorseBoundaryNonzero(f"Morse boundary of {format_cell(c)} is nonzero")
            ranks.append(len(crit))
        return ranks


def betti_numbers(tree, n, check=True):
    return MorseComplex(tree, n).betti_numbers(check=check)
