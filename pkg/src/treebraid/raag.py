"""Flag complexes and the right-angled Artin group classification.

A tree braid group is a right-angled Artin group exactly when the tree is
linear or there are fewer than four strands.  For the other direction this
module builds an explicit copy of the minimal nonlinear tree inside a host
tree, together with the induced map of configuration spaces, so its
type-preservation property can be checked cell by cell.
"""

import enum
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .cells import Cell, CellError, InvalidCell, enumerate_cells, format_cell, occupied, validate_cell
from .morse import CellStatus, classify
from .tree import (
    essential_vertices,
    is_linear,
    is_sufficiently_subdivided,
    order_vertices,
)


class SimplicialComplex:
    """A finite simplicial complex stored as the set of all its simplices."""

    def __init__(self, vertices=(), simplices=()):
        faces = {frozenset([v]) for v in vertices}
        for s in simplices:
            s = frozenset(s)
            for k in range(1, len(s) + 1):
                faces.update(frozenset(f) for f in combinations(sorted(s, key=repr), k))
        self.simplices = frozenset(faces)
        self.vertices = frozenset(v for s in faces for v in s)

    def __contains__(self, simplex):
        return frozenset(simplex) in self.simplices

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"SimplicialComplex(vertices={len(self.vertices)}, simplices={len(self.simplices)})"

    def dimension(self):
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def one_skeleton(self):
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(s) for s in self.simplices if len(s) == 2)
        return g


def missing_clique(k):
    """A clique of the 1-skeleton that is not a simplex, or ``None``."""
    for clique in nx.enumerate_all_cliques(k.one_skeleton()):
        if frozenset(clique) not in k.simplices:
            return frozenset(clique)
    return None


def is_flag(k):
    return missing_clique(k) is None


def flag_completion(graph):
    """The clique complex of a graph (a networkx graph or an edge list)."""
    if not isinstance(graph, nx.Graph):
        g = nx.Graph()
        g.add_edges_from(graph)
        graph = g
    return SimplicialComplex(graph.nodes, nx.enumerate_all_cliques(graph))


# -- classification ------------------------------------------------------


class Verdict(enum.Enum):
    IS_RAAG = "IsRAAG"
    NOT_RAAG = "NotRAAG"

    def __str__(self):
        return self.value


class Reason(enum.Enum):
    LINEAR = "Linear"
    FEW_STRANDS = "FewStrands"
    NONLINEAR_MANY_STRANDS = "NonlinearManyStrands"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RaagStatus:
    verdict: Verdict
    reason: Reason

    @property
    def is_raag(self):
        return self.verdict is Verdict.IS_RAAG

    def to_document(self):
        return {"verdict": str(self.verdict), "reason": str(self.reason)}


def raag_status(tree, n):
    """Decide whether B_n of ``tree`` is a right-angled Artin group."""
    if n < 1:
        raise ValueError(f"strand count must be positive, got {n}")
    if n < 4:
        # fewer than four strands on a tree give a free group
        return RaagStatus(Verdict.IS_RAAG, Reason.FEW_STRANDS)
    if is_linear(tree):
        return RaagStatus(Verdict.IS_RAAG, Reason.LINEAR)
    return RaagStatus(Verdict.NOT_RAAG, Reason.NONLINEAR_MANY_STRANDS)


def non_flag_witness(table):
    """A triangle of the product graph whose triple product vanishes.

    Returns ``(cells, evidence)`` or ``None``.  This only shows that the
    ring is not a face algebra of a flag complex in the given basis; it is
    a diagnostic, not a proof of non-RAAG-ness.
    """
    for (i, j, k), prod in sorted(table.triples.items()):
        if not prod:
            cells = tuple(table.basis1[x] for x in (i, j, k))
            evidence = {
                "indices": [i, j, k],
                "pair_products": {
                    f"{a},{b}": [format_cell(table.basis2[x]) for x in table.product(a, b)]
                    for a, b in ((i, j), (i, k), (j, k))
                },
                "triple_product": [],
            }
            return cells, evidence
    return None


# -- embedding the minimal nonlinear tree -------------------------------


class EmbeddingError(ValueError):
    pass


class HostLinear(EmbeddingError):
    pass


class HostTooSmall(EmbeddingError):
    pass


class FillerCollision(CellError):
    pass


@dataclass(frozen=True)
class TreeEmbedding:
    """A copy ``sub`` of a subdivided minimal nonlinear tree inside ``host``.

    ``host`` is rerooted at the basepoint, so vertex 0 of ``host`` is ``*``.
    ``sub`` is rooted at ``star_bar`` and numbered by the host's plane
    structure; ``vertex_map[k]`` is the host vertex of sub vertex ``k``.
    ``fillers`` are the host vertices on the path from ``*`` toward
    ``star_bar``, excluding ``star_bar`` itself.
    """

    host: object
    sub: object
    vertex_map: tuple
    fillers: tuple
    branch: tuple = field(default=())

    @property
    def star(self):
        return 0

    @property
    def star_bar(self):
        return self.vertex_map[0]

    @property
    def n(self):
        return 4 + len(self.fillers)

    def crossing_count(self):
        """Edges on the geodesic from ``*`` to ``star_bar``."""
        return self.host.distance(self.star, self.star_bar)

    def to_document(self):
        lab = self.host.labels
        return {
            "n": self.n,
            "star": lab[self.star],
            "star_bar": lab[self.star_bar],
            "fillers": [lab[v] for v in self.fillers],
            "branch": [lab[v] for v in self.branch],
            "vertex_map": [lab[v] for v in self.vertex_map],
        }


def _max_colinear_pair(tree, ess):
    best = None
    for a, b in combinations(ess, 2):
        on = set(tree.path(a, b))
        size = sum(1 for v in ess if v in on)
        if best is None or size > best[0]:
            best = (size, a, b)
    return best[1], best[2]


def _arm(tree, v, first, length=3):
    """A path of ``length`` edges leaving ``v`` through ``first``, or ``None``."""

    def walk(path):
        if len(path) == length + 1:
            return path
        for w in tree.neighbours(path[-1]):
            if w != path[-2]:
                got = walk(path + [w])
                if got:
                    return got
        return None

    return walk([v, first])


def _escape_arc(tree, start, image):
    """Walk from ``start`` away from ``image`` until a degree-1 vertex."""
    arc = [start]
    prev = None
    cur = start
    while True:
        nxt = next((w for w in tree.neighbours(cur) if w != prev and w not in image), None)
        if nxt is None:
            return arc
        arc.append(nxt)
        prev, cur = cur, nxt


def embed_t_min(host, n):
    """Embed a subdivided minimal nonlinear tree into ``host`` for ``n`` strands.

    The copy is a Y-graph on three essential vertices, not all on one arc,
    with two 3-edge arms at each tip.  The basepoint is moved to the end of
    an arc leaving the copy so that exactly ``n - 4`` vertices precede it.
    """
    if n < 4:
        raise EmbeddingError(f"need at least 4 strands, got {n}")
    if is_linear(host):
        raise HostLinear("host tree is linear")
    ess = essential_vertices(host)
    v1, v2 = _max_colinear_pair(host, ess)
    spine = host.path(v1, v2)
    on_spine = set(spine)
    v3 = min(v for v in ess if v not in on_spine)
    leg3 = host.path(v3, v1)
    v4 = next(v for v in leg3 if v in on_spine)
    legs = [host.path(v4, v1), host.path(v4, v2), host.path(v4, v3)]
    if any(len(p) - 1 < 3 for p in legs):
        raise HostTooSmall("essential vertices of the copy are closer than 3 edges")
    image = set().union(*legs)
    edges = {frozenset(pair) for p in legs for pair in zip(p, p[1:])}
    leaves = []
    for tip, leg in zip((v1, v2, v3), legs):
        toward = leg[-2]
        arms = []
        for w in host.neighbours(tip):
            if w == toward:
                continue
            arm = _arm(host, tip, w)
            if arm is not None:
                arms.append(arm)
            if len(arms) == 2:
                break
        if len(arms) < 2:
            raise HostTooSmall(f"no room for two 3-edge arms at vertex {host.labels[tip]}")
        for arm in arms:
            image.update(arm)
            edges.update(frozenset(pair) for pair in zip(arm, arm[1:]))
            leaves.append(arm[-1])

    star = star_bar_old = None
    gamma = []
    for leaf in sorted(leaves):
        arc = _escape_arc(host, leaf, image)
        length = len(arc) - 1
        if length == 0 and n == 4:
            star = star_bar_old = leaf
            gamma = [leaf]
            break
        if length >= n - 4 and length > 0:
            gamma = arc[::-1]  # from the new basepoint to the leaf
            star = gamma[0]
            star_bar_old = gamma[n - 4]
            break
    if star is None:
        raise HostTooSmall(f"no arc of {n - 4} edges leaves the copy at a degree-1 vertex")
    sub_old = image | set(gamma[n - 4:])
    fillers_old = gamma[: n - 4]

    rerooted = host.rerooted(star)
    index = {lab: i for i, lab in enumerate(rerooted.labels)}
    old_to_new = [index[lab] for lab in host.labels]
    sub_new = {old_to_new[v] for v in sub_old}
    root = old_to_new[star_bar_old]
    kids = {str(v): [str(w) for w in rerooted.children[v] if w in sub_new] for v in sorted(sub_new)}
    sub = order_vertices(str(root), kids)
    vertex_map = tuple(int(lab) for lab in sub.labels)
    sub = type(sub)(sub.parent, sub.children, [rerooted.labels[v] for v in vertex_map])
    if not is_sufficiently_subdivided(sub, 4):
        raise HostTooSmall("copy is not sufficiently subdivided for 4 strands")
    return TreeEmbedding(
        host=rerooted,
        sub=sub,
        vertex_map=vertex_map,
        fillers=tuple(old_to_new[v] for v in fillers_old),
        branch=tuple(old_to_new[v] for v in (v1, v2, v3, v4)),
    )


def theta_cell(c, emb, n=None):
    """Image of a 4-strand cell of ``emb.sub`` in UD^n of ``emb.host``."""
    if n is not None and n != emb.n:
        raise EmbeddingError(f"embedding was built for {emb.n} strands, not {n}")
    validate_cell(emb.sub, c, 4)
    vm = emb.vertex_map
    image = Cell(tuple(sorted(vm[v] for v in c.vertices)), tuple(sorted(vm[e] for e in c.edges)))
    occ = occupied(emb.host, image)
    clash = [v for v in emb.fillers if v in occ]
    if clash:
        raise FillerCollision(f"fillers {clash} meet the image of {format_cell(c)}")
    out = Cell(tuple(sorted(image.vertices + tuple(emb.fillers))), image.edges)
    try:
        return validate_cell(emb.host, out, emb.n)
    except InvalidCell as exc:
        raise FillerCollision(str(exc)) from None


@dataclass
class TypeReport:
    checked: int = 0
    failures: list = field(default_factory=list)
    critical_images: int = 0
    critical_injective: bool = True
    crossing_count: int = 0

    @property
    def ok(self):
        return not self.failures and self.critical_injective


def check_type_preservation(emb, n=None, max_dim=2):
    """Compare the cell type of every cell of ``emb.sub`` (up to ``max_dim``)
    with the type of its image.  Errors count as failures."""
    report = TypeReport(crossing_count=emb.crossing_count())
    seen = set()
    for i in range(max_dim + 1):
        for c in enumerate_cells(emb.sub, 4, i):
            report.checked += 1
            want = classify(emb.sub, c)
            try:
                img = theta_cell(c, emb, n)
                got = classify(emb.host, img)
            except (CellError, EmbeddingError) as exc:
                report.failures.append((c, want, exc))
                continue
            if got is not want:
                report.failures.append((c, want, got))
            if want is CellStatus.CRITICAL:
                report.critical_images += 1
                if img in seen:
                    report.critical_injective = False
                seen.add(img)
    return report
