"""Equivalence classes of cells and the mod-2 cup product on H^*(UD^n T).

Two cells are equivalent when they have the same edges and the same number
of vertices in every component of the tree minus (the closures of) those
edges.  Cup products of duals of critical 1-cells are computed from least
upper bounds of their classes: the product is the cohomology class of the
indicator cocycle of the bound, read off in the dual basis by pairing with
the flow-invariant cycles of the critical cells.
"""

import random
import weakref
from dataclasses import dataclass, field
from itertools import combinations, product

from .cells import Cell, CellError, Cochain, break_edges, coboundary, format_cell, occupied
from .morse import CellStatus, classify


class CupRingError(CellError):
    pass


class DuplicateClass(CupRingError):
    pass


class MixedDimensions(CupRingError):
    pass


class NotACocycle(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class CellClass:
    """Canonical form of an equivalence class.

    ``counts`` holds ``(component key, vertex count)`` pairs for the
    components with at least one vertex; a component is keyed by its
    smallest vertex.
    """

    edges: tuple
    counts: tuple

    @property
    def dim(self):
        return len(self.edges)

    @property
    def n(self):
        return len(self.edges) + sum(k for _, k in self.counts)

    def __str__(self):
        body = ", ".join(f"{'*' if key == 0 else 'v' + str(key)}:{k}" for key, k in self.counts)
        return "[" + ", ".join(f"e{e}" for e in self.edges) + " | " + body + "]"


def class_of(tree, c):
    comp, _ = tree.components_without(c.edges)
    counts = {}
    for v in c.vertices:
        key = comp[v]
        counts[key] = counts.get(key, 0) + 1
    return CellClass(c.edges, tuple(sorted(counts.items())))


def representative(tree, k):
    """Some cell of the class: the lowest-numbered vertices of each component."""
    _, members = tree.components_without(k.edges)
    verts = []
    for key, cnt in k.counts:
        pool = members.get(key, ())
        if cnt > len(pool):
            raise CupRingError(f"class {k} puts {cnt} vertices in a component of size {len(pool)}")
        verts.extend(pool[:cnt])
    return Cell(tuple(sorted(verts)), k.edges)


def class_cells(tree, k):
    """Every cell in the class."""
    _, members = tree.components_without(k.edges)
    choices = [combinations(members[key], cnt) for key, cnt in k.counts]
    return [Cell(tuple(sorted(v for part in pick for v in part)), k.edges) for pick in product(*choices)]


def push_to_normal_form(tree, c, rng=None):
    """Move unblocked vertices one edge toward the root until none remain.

    By default the smallest unblocked vertex moves first.  Passing a
    :class:`random.Random` picks the next mover at random instead.
    """
    parent = tree.parent
    occ = occupied(tree, c)
    verts = set(c.vertices)
    while True:
        movable = [v for v in verts if v != 0 and parent[v] not in occ]
        if not movable:
            break
        v = rng.choice(sorted(movable)) if rng is not None else min(movable)
        verts.remove(v)
        occ.remove(v)
        p = parent[v]
        verts.add(p)
        occ.add(p)
    return Cell(tuple(sorted(verts)), c.edges)


def try_critical_representative(tree, k):
    """The critical cell of class ``k``, or ``None`` when the class has none."""
    c = push_to_normal_form(tree, representative(tree, k))
    return c if classify(tree, c) is CellStatus.CRITICAL else None


def class_leq(tree, a, b):
    """Some cell of ``a`` is a face of some cell of ``b``."""
    if a.n != b.n or not set(a.edges) <= set(b.edges):
        return False
    rep = representative(tree, b)
    extra = [e for e in b.edges if e not in a.edges]
    return class_of(tree, break_edges(tree, rep, extra)) == a


def one_classes_of(tree, k):
    """The single-edge classes below ``k``, one per edge of ``k``."""
    rep = representative(tree, k)
    return {class_of(tree, break_edges(tree, rep, [f for f in k.edges if f != e])) for e in k.edges}


def _check_one_classes(classes):
    classes = list(classes)
    if any(k.dim != 1 for k in classes):
        raise MixedDimensions("least upper bounds are taken over classes of 1-cells")
    if len(set(classes)) != len(classes):
        raise DuplicateClass("classes must be distinct")
    return classes


def lub(tree, classes):
    """Least upper bound of distinct single-edge classes, or ``None``.

    The bound, if any, has exactly the union of the edges.  Its vertex
    counts per component are found by searching distributions subject to
    the count constraints that each input class imposes on the components
    of the tree minus its own edge.
    """
    classes = _check_one_classes(classes)
    if not classes:
        raise CupRingError("need at least one class")
    if len(classes) == 1:
        return classes[0]
    n = classes[0].n
    edges = [k.edges[0] for k in classes]
    if len(set(edges)) != len(edges):
        return None
    ends = set()
    for e in edges:
        for x in (e, tree.parent[e]):
            if x in ends:
                return None
            ends.add(x)
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    edges = [edges[i] for i in order]
    classes = [classes[i] for i in order]
    _, members = tree.components_without(tuple(edges))
    keys = sorted(members)
    free = n - len(edges)

    # required[i][D]: vertices the bound must put in component D of T - e_i
    groups = []
    for i, (e, k) in enumerate(zip(edges, classes)):
        comp_i, members_i = tree.components_without((e,))
        req = {key: 0 for key in members_i}
        req.update(dict(k.counts))
        for j, f in enumerate(edges):
            if j != i:
                req[comp_i[f]] -= 1
        if any(r < 0 for r in req.values()):
            return None
        groups.append(([comp_i[key] for key in keys], req))

    caps = []
    for idx, key in enumerate(keys):
        cap = min(len(members[key]), free)
        for where, req in groups:
            cap = min(cap, req[where[idx]])
        caps.append(cap)

    solutions = []
    x = [0] * len(keys)

    def feasible(upto):
        for where, req in groups:
            load = {}
            for idx in range(upto):
                load[where[idx]] = load.get(where[idx], 0) + x[idx]
            if any(load[d] > req[d] for d in load):
                return False
        return True

    def search(idx, left):
        if idx == len(keys):
            if left == 0 and all(
                sum(x[t] for t in range(len(keys)) if where[t] == d) == r
                for where, req in groups
                for d, r in req.items()
            ):
                solutions.append(tuple(x))
            return
        for v in range(min(caps[idx], left), -1, -1):
            x[idx] = v
            if feasible(idx + 1):
                search(idx + 1, left - v)
        x[idx] = 0

    search(0, free)
    if not solutions:
        return None
    if len(solutions) > 1:
        raise AssertionError(f"upper bound of {classes} is not unique")
    counts = tuple((key, v) for key, v in zip(keys, solutions[0]) if v)
    return CellClass(tuple(edges), counts)


_CLASS_LISTS = weakref.WeakKeyDictionary()


def _classes_by_edges(space, dim):
    per_space = _CLASS_LISTS.setdefault(space, {})
    if dim not in per_space:
        grouped = {}
        for k in sorted({class_of(space.tree, c) for c in space.cells(dim)}):
            grouped.setdefault(k.edges, []).append(k)
        per_space[dim] = grouped
    return per_space[dim]


def classes_of_dim(space, dim):
    """Sorted distinct classes of the ``dim``-cells of ``space`` (cached)."""
    return [k for group in _classes_by_edges(space, dim).values() for k in group]


def lub_by_scan(space, classes):
    """Least upper bound found by scanning every class of every dimension.

    ``space`` is a :class:`MorseComplex`; this is the slow reference path.
    """
    classes = _check_one_classes(classes)
    tree = space.tree
    uppers = []
    need = {a.edges[0] for a in classes}
    for dim in range(len(classes), space.n + 1):
        for edges, group in _classes_by_edges(space, dim).items():
            if not need <= set(edges):
                continue
            uppers.extend(k for k in group if all(class_leq(tree, a, k) for a in classes))
    least = [k for k in uppers if all(class_leq(tree, k, u) for u in uppers)]
    if not least:
        return None
    if len(least) > 1:
        raise AssertionError("least upper bound is not unique")
    return least[0]


def phi_cocycle(tree, n, k, check=True):
    """Indicator cochain of the class ``k``; verified to be a cocycle."""
    co = Cochain(k.dim, class_cells(tree, k))
    if check and coboundary(tree, co):
        raise NotACocycle(f"indicator of {k} is not a cocycle")
    return co


@dataclass(frozen=True)
class DualBasisVector:
    """Mod-2 coordinates with respect to the duals of the critical cells."""

    dim: int
    bits: tuple

    def __bool__(self):
        return any(self.bits)

    def __add__(self, other):
        return DualBasisVector(self.dim, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def support(self):
        return [i for i, b in enumerate(self.bits) if b]

    def as_int(self):
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    @classmethod
    def zero(cls, dim, length):
        return cls(dim, (0,) * length)

    @classmethod
    def unit(cls, dim, length, i):
        return cls(dim, tuple(int(j == i) for j in range(length)))


def express_in_dual_basis(space, co, check=True):
    """Coordinates of the cohomology class of the cocycle ``co``."""
    if check and coboundary(space.tree, co):
        raise NotACocycle("cochain is not a cocycle")
    crit = space.critical_cells(co.dim)
    return DualBasisVector(co.dim, tuple(co(space.critical_flow(c)) for c in crit))


def cup(space, cells):
    """Cup product of the duals of the given critical 1-cells."""
    tree = space.tree
    if not cells:
        raise CupRingError("empty product")
    classes = [class_of(tree, c) for c in cells]
    length = len(space.critical_cells(len(cells)))
    if len(set(classes)) != len(classes):
        return DualBasisVector.zero(len(cells), length)
    bound = lub(tree, classes)
    if bound is None:
        return DualBasisVector.zero(len(cells), length)
    return express_in_dual_basis(space, phi_cocycle(tree, space.n, bound))


def gf2_rank(rows):
    """Rank of a list of ints read as GF(2) row vectors."""
    pivots = {}
    rank = 0
    for x in rows:
        while x:
            low = x.bit_length() - 1
            if low in pivots:
                x ^= pivots[low]
            else:
                pivots[low] = x
                rank += 1
                break
    return rank


@dataclass
class RingTable:
    """Products of pairs of H^1 dual basis elements, in the H^2 dual basis.

    ``products`` only holds nonzero entries, keyed by index pairs ``i < j``
    into ``basis1``; values are index tuples into ``basis2``.  ``triples``
    records the product for every triangle of the product graph.
    """

    tree_vertices: int
    n: int
    basis1: list
    basis2: list
    products: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)

    def product(self, i, j):
        if i == j:
            return ()
        return self.products.get((min(i, j), max(i, j)), ())

    def pairing_rank(self):
        m = len(self.basis2)
        rows = []
        for i in range(len(self.basis1)):
            x = 0
            for j in range(len(self.basis1)):
                for b in self.product(i, j):
                    x |= 1 << (j * m + b)
            rows.append(x)
        return gf2_rank(rows)

    def radical_dimension(self):
        return len(self.basis1) - self.pairing_rank()

    def product_graph(self):
        """Edges ``(i, j, product)`` between basis elements with nonzero product."""
        return [(i, j, p) for (i, j), p in sorted(self.products.items())]

    def to_document(self):
        return {
            "n": self.n,
            "basis1": [format_cell(c) for c in self.basis1],
            "basis2": [format_cell(c) for c in self.basis2],
            "products": [[i, j, b] for (i, j), p in sorted(self.products.items()) for b in p],
            "pairing_rank": self.pairing_rank(),
            "radical_dimension": self.radical_dimension(),
        }

    def to_dot(self):
        used = sorted({i for i, j, _ in self.product_graph()} | {j for i, j, _ in self.product_graph()})
        lines = ["graph cup_products {"]
        for i in used:
            lines.append(f'  "{format_cell(self.basis1[i])}";')
        for i, j, p in self.product_graph():
            label = " + ".join(format_cell(self.basis2[b]) for b in p)
            lines.append(f'  "{format_cell(self.basis1[i])}" -- "{format_cell(self.basis1[j])}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def ring_table(space):
    """All pairwise cup products of H^1 dual basis elements of ``space``."""
    basis1 = space.critical_cells(1)
    basis2 = space.critical_cells(2) if space.n >= 2 else []
    table = RingTable(space.tree.vertex_count, space.n, basis1, basis2)
    if space.n < 2:
        return table
    for i, j in combinations(range(len(basis1)), 2):
        p = cup(space, [basis1[i], basis1[j]])
        if p:
            table.products[(i, j)] = tuple(p.support())
    adj = {}
    for i, j in table.products:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    for i, j in table.products:
        for k in sorted(adj[i] & adj[j]):
            if k > j and space.n >= 3:
                table.triples[(i, j, k)] = tuple(cup(space, [basis1[i], basis1[j], basis1[k]]).support())
            elif k > j:
                table.triples[(i, j, k)] = ()
    return table


@dataclass
class HatComplex:
    """Labels of the torus subcomplex built from single-edge classes.

    ``cells[i]`` maps an ``i``-subset of vertices (a frozenset of classes)
    to the least upper bound that labels it.
    """

    vertices: list
    cells: dict


def single_edge_classes(space):
    return classes_of_dim(space, 1)


def build_hat_complex(space, max_dim=2):
    """Vertices and low-dimensional cells of the torus subcomplex."""
    tree = space.tree
    verts = single_edge_classes(space)
    cells = {1: {frozenset([k]): k for k in verts}}
    by_edge = {}
    for k in verts:
        by_edge.setdefault(k.edges[0], []).append(k)
    for dim in range(2, max_dim + 1):
        cells[dim] = {}
        for es in _disjoint_edge_subsets(tree, sorted(by_edge), dim):
            for pick in product(*(by_edge[e] for e in es)):
                bound = lub(tree, pick)
                if bound is not None:
                    cells[dim][frozenset(pick)] = bound
    return HatComplex(verts, cells)


def _disjoint_edge_subsets(tree, edges, size):
    for es in combinations(edges, size):
        ends = [x for e in es for x in (e, tree.parent[e])]
        if len(set(ends)) == len(ends):
            yield es


def confluent(tree, c, trials=100, seed=0):
    """True iff random move orders all push ``c`` to the same cell."""
    rng = random.Random(seed)
    target = push_to_normal_form(tree, c)
    return all(push_to_normal_form(tree, c, rng) == target for _ in range(trials))

