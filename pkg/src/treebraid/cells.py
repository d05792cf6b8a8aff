"""Cells, chains and cochains of the discretized configuration space UD^n T.

A cell is a set of ``n`` vertices and edges of the tree whose closures are
pairwise disjoint.  Its dimension is the number of edges.  Members are
ordered by their number (an edge carries the number of its far endpoint);
that ordering drives both the face signs and the Morse matching.
"""

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .tree import is_sufficiently_subdivided


class CellError(ValueError):
    pass


class InvalidCell(CellError):
    pass


class NotSufficientlySubdivided(CellError):
    pass


class ZeroDimensional(CellError):
    pass


class DimensionMismatch(CellError):
    pass


class NotAnEdgeOfCell(CellError):
    pass


@dataclass(frozen=True, slots=True)
class Cell:
    vertices: tuple
    edges: tuple = ()

    @classmethod
    def of(cls, vertices=(), edges=()):
        return cls(tuple(sorted(vertices)), tuple(sorted(edges)))

    @property
    def dim(self):
        return len(self.edges)

    @property
    def size(self):
        return len(self.vertices) + len(self.edges)

    def members(self):
        """Members as ``(number, is_edge)`` pairs in increasing order."""
        out = [(v, False) for v in self.vertices] + [(e, True) for e in self.edges]
        out.sort()
        return out

    def sort_key(self):
        return tuple(self.members())

    def __str__(self):
        return format_cell(self)


def format_cell(c):
    items = [f"e{e}" for e in c.edges] + ["*" if v == 0 else f"v{v}" for v in c.vertices]
    return "{" + ", ".join(items) + "}"


_ITEM = re.compile(r"^(?:\*|[ev]\d+)$")


def parse_cell(text):
    """Parse ``{e16, e19, v10, v13}``; ``*`` (or ``v0``) is the root."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise InvalidCell(f"cell must be enclosed in braces: {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise InvalidCell("empty cell")
    verts, edges = [], []
    for raw in body.split(","):
        item = raw.strip()
        if not _ITEM.match(item):
            raise InvalidCell(f"bad cell item {item!r}")
        if item == "*":
            verts.append(0)
        elif item[0] == "v":
            verts.append(int(item[1:]))
        else:
            edges.append(int(item[1:]))
    return Cell.of(verts, edges)


def occupied(tree, c):
    """All tree vertices touched by the closure of some member of ``c``."""
    occ = set(c.vertices)
    for e in c.edges:
        occ.add(e)
        occ.add(tree.parent[e])
    return occ


def validate_cell(tree, c, n=None):
    """Raise :class:`InvalidCell` unless ``c`` is a cell of UD^n ``tree``."""
    nv = tree.vertex_count
    if n is not None and c.size != n:
        raise InvalidCell(f"{format_cell(c)} has {c.size} members, expected {n}")
    for v in c.vertices:
        if not 0 <= v < nv:
            raise InvalidCell(f"vertex {v} not in tree")
    for e in c.edges:
        if not 1 <= e < nv:
            raise InvalidCell(f"edge {e} not in tree")
    if len(set(c.vertices)) != len(c.vertices) or len(set(c.edges)) != len(c.edges):
        raise InvalidCell(f"{format_cell(c)} repeats a member")
    if len(occupied(tree, c)) != len(c.vertices) + 2 * len(c.edges):
        raise InvalidCell(f"closures of members of {format_cell(c)} are not disjoint")
    return c


def _disjoint_edge_sets(tree, i):
    edges = list(tree.edges)
    parent = tree.parent

    def grow(start, chosen, used):
        if len(chosen) == i:
            yield tuple(chosen), used
            return
        for k in range(start, len(edges)):
            e = edges[k]
            p = parent[e]
            if e in used or p in used:
                continue
            chosen.append(e)
            yield from grow(k + 1, chosen, used | {e, p})
            chosen.pop()

    yield from grow(0, [], frozenset())


def enumerate_cells(tree, n, i, check=True):
    """All ``i``-cells of UD^n ``tree``, ordered lexicographically by members."""
    if check and not is_sufficiently_subdivided(tree, n):
        raise NotSufficientlySubdivided(f"tree is not sufficiently subdivided for {n} strands")
    if not 0 <= i <= n:
        return []
    nv = tree.vertex_count
    out = []
    for es, used in _disjoint_edge_sets(tree, i):
        free = [v for v in range(nv) if v not in used]
        for vs in combinations(free, n - i):
            out.append(Cell(vs, es))
    out.sort(key=Cell.sort_key)
    return out


def count_cells(tree, n, i):
    """Number of ``i``-cells, without building them."""
    from math import comb

    nv = tree.vertex_count
    return sum(comb(nv - 2 * i, n - i) for _ in _disjoint_edge_sets(tree, i))


def faces_with_sign(tree, c):
    """Codimension-1 faces of ``c`` with their incidence signs.

    With edges ranked 1..dim by number, the face replacing the k-th edge by
    its far endpoint gets sign (-1)^k and the one using its near endpoint
    gets (-1)^(k+1).
    """
    if not c.edges:
        raise ZeroDimensional(f"{format_cell(c)} has no faces")
    out = []
    sign = -1
    for k, e in enumerate(c.edges):
        rest = c.edges[:k] + c.edges[k + 1:]
        for v, s in ((e, sign), (tree.parent[e], -sign)):
            out.append((Cell(tuple(sorted(c.vertices + (v,))), rest), s))
        sign = -sign
    return out


def break_edges(tree, c, edges, ends="tau"):
    """Replace each edge in ``edges`` by one of its endpoints.

    ``ends`` is ``"iota"``, ``"tau"`` or a mapping edge -> one of those.
    """
    edges = set(edges)
    missing = edges - set(c.edges)
    if missing:
        raise NotAnEdgeOfCell(f"edges {sorted(missing)} are not in {format_cell(c)}")
    verts = list(c.vertices)
    for e in edges:
        choice = ends if isinstance(ends, str) else ends[e]
        if choice == "iota":
            verts.append(e)
        elif choice == "tau":
            verts.append(tree.parent[e])
        else:
            raise ValueError(f"endpoint choice must be 'iota' or 'tau', got {choice!r}")
    return Cell(tuple(sorted(verts)), tuple(e for e in c.edges if e not in edges))


def cofaces(tree, c):
    """Cells having ``c`` as a codimension-1 face."""
    occ = occupied(tree, c)
    out = []
    for v in c.vertices:
        # v can become edge v (toward the root) or edge w for a child w
        candidates = []
        if v != 0:
            candidates.append((v, tree.parent[v]))
        for w in tree.children[v]:
            candidates.append((w, w))
        for e, other in candidates:
            if other != v and other in occ:
                continue
            verts = tuple(u for u in c.vertices if u != v)
            out.append(Cell(verts, tuple(sorted(c.edges + (e,)))))
    return out


class Chain:
    """An integer combination of cells of one dimension."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        self.dim = dim
        self.terms = {c: k for c, k in (terms or {}).items() if k}

    @classmethod
    def of(cls, cell, coeff=1):
        return cls(cell.dim, {cell: coeff})

    def __getitem__(self, cell):
        return self.terms.get(cell, 0)

    def __iter__(self):
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def _combine(self, other, k):
        if self.terms and other.terms and self.dim != other.dim:
            raise DimensionMismatch(f"cannot add {self.dim}-chain and {other.dim}-chain")
        out = dict(self.terms)
        for c, a in other.terms.items():
            out[c] = out.get(c, 0) + k * a
        return Chain(self.dim if self.terms else other.dim, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain(self.dim, {c: -a for c, a in self.terms.items()})

    def __rmul__(self, k):
        return Chain(self.dim, {c: k * a for c, a in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.terms == other.terms and (self.dim == other.dim or not self.terms)

    def __repr__(self):
        body = " + ".join(f"{a}*{format_cell(c)}" for c, a in sorted(self.terms.items(), key=lambda t: t[0].sort_key()))
        return f"Chain[{self.dim}]({body or '0'})"


def boundary(tree, ch):
    if ch.dim <= 0:
        return Chain(ch.dim - 1)
    out = {}
    for c, a in ch.items():
        for f, s in faces_with_sign(tree, c):
            out[f] = out.get(f, 0) + s * a
    return Chain(ch.dim - 1, out)


class Cochain:
    """A mod-2 cochain, stored as the set of cells where it equals 1."""

    __slots__ = ("dim", "support")

    def __init__(self, dim, support=()):
        self.dim = dim
        self.support = frozenset(support)
        for c in self.support:
            if c.dim != dim:
                raise DimensionMismatch(f"{format_cell(c)} is not a {dim}-cell")

    def __call__(self, x):
        """Evaluate on a cell or a chain, mod 2."""
        if isinstance(x, Cell):
            return int(x in self.support)
        return sum(a for c, a in x.items() if c in self.support) % 2

    def __add__(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch("cochains of different dimensions")
        return Cochain(self.dim, self.support ^ other.support)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.dim == other.dim and self.support == other.support

    def __hash__(self):
        return hash((self.dim, self.support))

    def __bool__(self):
        return bool(self.support)

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return f"Cochain[{self.dim}](|support|={len(self.support)})"


def coboundary(tree, co, n=None):
    """Mod-2 coboundary: the (d+1)-cells with an odd number of faces in the support."""
    if n is not None:
        for c in co.support:
            if c.size != n:
                raise DimensionMismatch(f"{format_cell(c)} is not a cell of UD^{n}")
    hits = Counter()
    for c in co.support:
        hits.update(cofaces(tree, c))
    return Cochain(co.dim + 1, (c for c, k in hits.items() if k % 2))
