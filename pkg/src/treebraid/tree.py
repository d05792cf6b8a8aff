"""Rooted plane trees.

Vertices are identified with their position in the DFS preorder that follows
the leftmost branch first, so the root (the basepoint ``*``) is vertex 0 and
its unique neighbour is vertex 1.  An edge is named by its endpoint farther
from the root: edge ``k`` joins vertex ``k`` to ``parent[k]``.
"""

from collections import deque


class TreeError(ValueError):
    pass


class NotATree(TreeError):
    pass


class RootDegreeInvalid(TreeError):
    pass


class SameVertex(TreeError):
    pass


class TooFewVertices(TreeError):
    pass


class PlaneTree:
    """A rooted plane tree in preorder numbering.

    ``parent[v]`` is the parent of ``v`` (``-1`` for the root) and
    ``children[v]`` lists the children of ``v`` left to right.  ``labels``
    keeps the caller's vertex ids so trees can be written back out.
    Instances are treated as immutable.
    """

    __slots__ = ("parent", "children", "labels", "_size", "_cache")

    def __init__(self, parent, children, labels=None):
        self.parent = tuple(parent)
        self.children = tuple(tuple(c) for c in children)
        if labels is None:
            labels = [str(v) for v in range(len(self.parent))]
        self.labels = tuple(labels)
        self._cache = {}
        nv = len(self.parent)
        size = [1] * nv
        for v in range(nv - 1, 0, -1):
            size[self.parent[v]] += size[v]
        self._size = tuple(size)

    # -- basic structure ---------------------------------------------------

    @property
    def vertex_count(self):
        return len(self.parent)

    @property
    def root(self):
        return 0

    @property
    def edges(self):
        """Edge ids, i.e. every non-root vertex."""
        return range(1, len(self.parent))

    def iota(self, e):
        return e

    def tau(self, e):
        return self.parent[e]

    def endpoints(self, e):
        return (e, self.parent[e])

    def degree(self, v):
        return len(self.children[v]) + (0 if v == 0 else 1)

    def neighbours(self, v):
        """Neighbours of ``v`` in clockwise order, starting toward the root."""
        if v == 0:
            return self.children[0]
        return (self.parent[v],) + self.children[v]

    def subtree_size(self, v):
        return self._size[v]

    def in_subtree(self, w, v):
        """True iff ``w`` lies in the subtree hanging below ``v`` (inclusive)."""
        return v <= w < v + self._size[v]

    def path(self, u, w):
        """Vertices of the geodesic from ``u`` to ``w``, both ends included."""
        up, down = [u], [w]
        a, b = u, w
        while a != b:
            if a > b:
                a = self.parent[a]
                up.append(a)
            else:
                b = self.parent[b]
                down.append(b)
        down.pop()
        return up + down[::-1]

    def distance(self, u, w):
        return len(self.path(u, w)) - 1

    def __eq__(self, other):
        if not isinstance(other, PlaneTree):
            return NotImplemented
        return self.children == other.children and self.labels == other.labels

    def __hash__(self):
        return hash((self.children, self.labels))

    def __repr__(self):
        return f"PlaneTree(vertex_count={self.vertex_count})"

    # -- conversions -------------------------------------------------------

    def to_document(self):
        """The ``{root, children}`` document accepted by :func:`from_document`."""
        lab = self.labels
        return {
            "root": lab[0],
            "children": {lab[v]: [lab[c] for c in cs] for v, cs in enumerate(self.children) if cs},
        }

    def rerooted(self, leaf):
        """The same plane tree with basepoint moved to the degree-1 vertex ``leaf``."""
        if self.degree(leaf) != 1:
            raise RootDegreeInvalid(f"vertex {leaf} has degree {self.degree(leaf)}")
        kids = {}
        stack = [(leaf, None)]
        while stack:
            v, came_from = stack.pop()
            ring = list(self.neighbours(v))
            if came_from is None:
                order = ring
            else:
                i = ring.index(came_from)
                order = ring[i + 1:] + ring[:i]
            kids[self.labels[v]] = [self.labels[w] for w in order]
            for w in order:
                stack.append((w, v))
        return order_vertices(self.labels[leaf], kids)

    def components_without(self, edges):
        """Vertex components of the tree minus the closed edges ``edges``.

        Returns a pair ``(comp, members)``: ``comp[v]`` is the key of the
        component containing ``v`` (its smallest vertex), or ``-1`` for
        endpoints of the removed edges; ``members`` maps each key to the
        sorted vertex list of that component.
        """
        key = tuple(edges)
        hit = self._cache.get(("comp", key))
        if hit is not None:
            return hit
        removed = set()
        for e in key:
            removed.add(e)
            removed.add(self.parent[e])
        nv = len(self.parent)
        comp = [-1] * nv
        members = {}
        # preorder: a vertex whose parent survives joins the parent's component
        for v in range(nv):
            if v in removed:
                continue
            p = self.parent[v]
            if v != 0 and p not in removed:
                comp[v] = comp[p]
            else:
                comp[v] = v
                members[v] = []
            members[comp[v]].append(v)
        out = (tuple(comp), {k: tuple(vs) for k, vs in members.items()})
        self._cache[("comp", key)] = out
        return out

    def segments(self):
        """Maximal paths whose interior vertices all have degree 2.

        Each segment is a vertex list from one degree != 2 vertex to another.
        """
        hit = self._cache.get("segments")
        if hit is not None:
            return hit
        out = []
        for v in range(len(self.parent)):
            if v != 0 and self.degree(v) == 2:
                continue
            for w in self.children[v]:
                seg = [v, w]
                while self.degree(seg[-1]) == 2:
                    seg.append(self.children[seg[-1]][0])
                out.append(tuple(seg))
        out = tuple(out)
        self._cache["segments"] = out
        return out


def order_vertices(root, children):
    """Build a :class:`PlaneTree` from a root id and an ordered child map.

    ``children`` maps a vertex id to the left-to-right list of its children.
    Vertices are numbered by leftmost-first DFS preorder from ``root``.
    """
    children = {k: list(v) for k, v in children.items()}
    seen = {root}
    order = []
    parent_of = {root: None}
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = children.get(v, [])
        for w in kids:
            if w in seen:
                raise NotATree(f"vertex {w!r} reached twice")
            seen.add(w)
            parent_of[w] = v
        stack.extend(reversed(kids))
    stray = (set(children) | {w for ws in children.values() for w in ws}) - seen
    if stray:
        raise NotATree(f"vertices not connected to the root: {sorted(map(str, stray))}")
    if len(children.get(root, [])) != 1:
        raise RootDegreeInvalid(f"root {root!r} has degree {len(children.get(root, []))}, expected 1")
    number = {v: i for i, v in enumerate(order)}
    parent = [-1] + [number[parent_of[v]] for v in order[1:]]
    kids = [[number[w] for w in children.get(v, [])] for v in order]
    return PlaneTree(parent, kids, [str(v) for v in order])


def from_document(doc):
    """Parse a ``{"root": id, "children": {id: [ids]}}`` document."""
    try:
        root = str(doc["root"])
        raw = doc["children"]
    except (KeyError, TypeError) as exc:
        raise NotATree(f"malformed tree document: {exc}") from None
    children = {str(k): [str(w) for w in ws] for k, ws in raw.items()}
    return order_vertices(root, children)


def from_parents(parent):
    """Tree from a parent list already in preorder (``parent[0] == -1``)."""
    kids = [[] for _ in parent]
    for v, p in enumerate(parent):
        if v:
            if not 0 <= p < v:
                raise NotATree(f"parent of {v} must precede it, got {p}")
            kids[p].append(v)
    tree = PlaneTree(parent, kids)
    if len(kids[0]) != 1:
        raise RootDegreeInvalid("root must have exactly one child")
    return tree


def path_tree(vertex_count):
    """The path ``0 - 1 - ... - (vertex_count-1)`` rooted at an end."""
    if vertex_count < 2:
        raise TooFewVertices("a path tree needs at least 2 vertices")
    return from_parents([-1] + list(range(vertex_count - 1)))


def spider(arm_lengths, stem=None):
    """A star-like tree: a stem from the root to a centre, then arms.

    ``stem`` defaults to the first arm length.  Arms hang off the centre in
    the given order.
    """
    if stem is None:
        stem, arm_lengths = arm_lengths[0], arm_lengths[1:]
    parent = [-1]
    for _ in range(stem):
        parent.append(len(parent) - 1)
    centre = len(parent) - 1
    for length in arm_lengths:
        prev = centre
        for _ in range(length):
            parent.append(prev)
            prev = len(parent) - 1
    return from_parents(parent)


def canonical_t_min():
    """The minimal nonlinear tree with the vertex numbering used throughout.

    Essential vertices are 3, 9, 12 and 21; every arm and connecting path
    has three edges.
    """
    ch = {v: [v + 1] for v in range(28)}
    ch[3] = [4, 7]
    ch[9] = [10, 19]
    ch[12] = [13, 16]
    ch[21] = [22, 25]
    for leaf in (6, 15, 18, 24, 27):
        ch[leaf] = []
    parent = [-1] * 28
    for v, ws in ch.items():
        for w in ws:
            parent[w] = v
    tree = from_parents(parent)
    return PlaneTree(tree.parent, tree.children, ["*"] + [f"v{v}" for v in range(1, 28)])


# -- queries -------------------------------------------------------------


def direction_index(tree, v, w):
    """Direction from ``v`` toward ``w``: 0 toward the root, else child rank."""
    if v == w:
        raise SameVertex(f"direction from {v} to itself is undefined")
    if v == 0:
        return 0
    if not tree.in_subtree(w, v):
        return 0
    for i, c in enumerate(tree.children[v], start=1):
        if tree.in_subtree(w, c):
            return i
    raise AssertionError("unreachable")


def is_essential(tree, v):
    return tree.degree(v) >= 3


def essential_vertices(tree):
    return [v for v in range(tree.vertex_count) if tree.degree(v) >= 3]


def spanning_subtree(tree, vertices):
    """Vertex set of the smallest subtree containing ``vertices``."""
    keep = set(vertices)
    if len(keep) <= 1:
        return keep
    deg = [tree.degree(v) for v in range(tree.vertex_count)]
    alive = set(range(tree.vertex_count))
    queue = deque(v for v in alive if deg[v] <= 1 and v not in keep)
    while queue:
        v = queue.popleft()
        alive.discard(v)
        for w in tree.neighbours(v):
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1 and w not in keep:
                    queue.append(w)
    return alive


def is_linear(tree):
    """True iff one embedded arc passes through every essential vertex."""
    span = spanning_subtree(tree, essential_vertices(tree))
    for v in span:
        if sum(1 for w in tree.neighbours(v) if w in span) > 2:
            return False
    return True


def is_sufficiently_subdivided(tree, n):
    """Every path between distinct degree != 2 vertices has >= n-1 edges."""
    if tree.vertex_count < n:
        raise TooFewVertices(f"{tree.vertex_count} vertices cannot hold {n} strands")
    return all(len(seg) - 1 >= n - 1 for seg in tree.segments())


def subdivide_for(tree, n):
    """Insert degree-2 vertices so the tree becomes sufficiently subdivided.

    Each segment shorter than ``n-1`` edges is lengthened to exactly ``n-1``
    by spreading the new vertices evenly over its edges; child order is kept.
    """
    if all(len(seg) - 1 >= n - 1 for seg in tree.segments()):
        return tree
    extra = {}  # edge id -> number of vertices to insert on it
    for seg in tree.segments():
        length = len(seg) - 1
        missing = n - 1 - length
        if missing <= 0:
            continue
        q, r = divmod(missing, length)
        for j, e in enumerate(seg[1:]):
            extra[e] = q + (1 if j < r else 0)
    lab = tree.labels
    kids = {}
    for v in range(tree.vertex_count):
        out = []
        for c in tree.children[v]:
            k = extra.get(c, 0)
            if k:
                chain = [f"{lab[c]}/{j}" for j in range(k)]
                out.append(chain[0])
                for a, b in zip(chain, chain[1:]):
                    kids[a] = [b]
                kids[chain[-1]] = [lab[c]]
            else:
                out.append(lab[c])
        kids[lab[v]] = out
    return order_vertices(lab[0], kids)

