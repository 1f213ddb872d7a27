"""Multigraph carrier plus the connectivity, distance and dissolution primitives."""

from collections import deque
import math

from .errors import InputError

INF = math.inf


def _key(u, v):
    return (u, v) if u < v else (v, u)


class Multigraph:
    """Undirected loopless multigraph over opaque integer vertex ids.

    Instances are treated as immutable once built. ``edges`` may be a mapping
    ``{(u, v): mult}`` or an iterable of ``(u, v)`` / ``(u, v, mult)``
    tuples; repeated pairs in an iterable accumulate multiplicity.
    """

    __slots__ = ("_vertices", "_vset", "_edges", "_adj", "_labels", "_nbrs")

    def __init__(self, vertices, edges=(), labels=None):
        verts = tuple(vertices)
        vset = frozenset(verts)
        if len(vset) != len(verts):
            raise InputError("duplicate vertex identifier", "duplicate-vertex")
        mult = {}
        items = edges.items() if isinstance(edges, dict) else edges
        for item in items:
            if isinstance(edges, dict):
                (u, v), m = item
            elif len(item) == 2:
                (u, v), m = item, 1
            else:
                u, v, m = item
            if u == v:
                raise InputError(f"loop at vertex {u}", "loop")
            if u not in vset or v not in vset:
                raise InputError(f"edge ({u}, {v}) has an unknown endpoint", "unknown-vertex")
            if m < 1:
                raise InputError(f"multiplicity {m} on ({u}, {v}) must be >= 1", "bad-multiplicity")
            k = _key(u, v)
            mult[k] = mult.get(k, 0) + m
        adj = {v: {} for v in verts}
        for (u, v), m in mult.items():
            adj[u][v] = m
            adj[v][u] = m
        self._vertices = verts
        self._vset = vset
        self._edges = mult
        self._adj = adj
        self._labels = dict(labels) if labels else {}
        for v in self._labels:
            if v not in vset:
                raise InputError(f"label for unknown vertex {v}", "unknown-vertex")
        self._nbrs = {}

    # ---- basic accessors -------------------------------------------------
    @property
    def vertices(self):
        return self._vertices

    @property
    def labels(self):
        return dict(self._labels)

    def label(self, v):
        return self._labels.get(v)

    def __len__(self):
        return len(self._vertices)

    def __contains__(self, v):
        return v in self._vset

    def __iter__(self):
        return iter(self._vertices)

    def vertex_set(self):
        return self._vset

    def edges(self):
        """Sorted list of ``((u, v), mult)`` with ``u < v``."""
        return sorted(self._edges.items())

    def edge_pairs(self):
        return self._edges.keys()

    @property
    def num_edges(self):
        """Number of adjacent pairs (multiplicity ignored)."""
        return len(self._edges)

    @property
    def total_multiplicity(self):
        return sum(self._edges.values())

    def multiplicity(self, u, v):
        return self._adj[u].get(v, 0) if u in self._adj else 0

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def neighbors(self, v):
        """Neighbours of ``v`` in increasing id order."""
        nb = self._nbrs.get(v)
        if nb is None:
            nb = tuple(sorted(self._adj[v]))
            self._nbrs[v] = nb
        return nb

    def adjacency(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def edge_degree(self, v):
        return sum(self._adj[v].values())

    def min_degree(self):
        return min((self.edge_degree(v) for v in self._vertices), default=0)

    def check_vertex(self, v):
        if v not in self._vset:
            raise InputError(f"unknown vertex {v}", "unknown-vertex")

    # ---- derived graphs --------------------------------------------------
    def simple(self):
        """Underlying simple graph (all multiplicities set to 1)."""
        if all(m == 1 for m in self._edges.values()):
            return self
        return Multigraph(self._vertices, {k: 1 for k in self._edges}, self._labels)

    def is_simple(self):
        return all(m == 1 for m in self._edges.values())

    def induced(self, members):
        s = set(members)
        verts = [v for v in self._vertices if v in s]
        edges = {k: m for k, m in self._edges.items() if k[0] in s and k[1] in s}
        labels = {v: l for v, l in self._labels.items() if v in s}
        return Multigraph(verts, edges, labels)

    def relabel(self, mapping):
        """Rename vertices through the injective ``mapping``."""
        verts = [mapping[v] for v in self._vertices]
        edges = [(mapping[u], mapping[v], m) for (u, v), m in self._edges.items()]
        labels = {mapping[v]: l for v, l in self._labels.items()}
        return Multigraph(verts, edges, labels)

    def same_as(self, other, multiplicities=True):
        """Literal equality: same vertex ids and same edges."""
        if self._vset != other._vset:
            return False
        if multiplicities:
            return self._edges == other._edges
        return self._edges.keys() == other._edges.keys()

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges \
            and self._labels == other._labels

    def __hash__(self):
        return hash((self._vertices, frozenset(self._edges.items())))

    def __repr__(self):
        return f"Multigraph(n={len(self)}, m={self.num_edges}, total={self.total_multiplicity})"


# ---- traversal ----------------------------------------------------------

def bfs_distances(g, source, within=None):
    """Edge-count distances from ``source`` inside ``g[within]`` (or all of g)."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.neighbors(u):
            if w not in dist and (within is None or w in within):
                dist[w] = du
                queue.append(w)
    return dist


def distance(g, u, v):
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0
    return bfs_distances(g, u).get(v, INF)


def diameter(g, members):
    """Largest pairwise distance inside the induced subgraph ``g[members]``."""
    s = frozenset(members)
    if not s:
        raise InputError("diameter of an empty set", "empty-set")
    for v in s:
        g.check_vertex(v)
    best = 0
    for v in s:
        dist = bfs_distances(g, v, s)
        if len(dist) < len(s):
            return INF
        best = max(best, max(dist.values()))
    return best


def connected_components(g, members=None):
    """Components of ``g[members]`` as frozensets, ordered by minimum vertex id."""
    s = g.vertex_set() if members is None else frozenset(members)
    seen = set()
    comps = []
    for v in sorted(s):
        if v in seen:
            continue
        comp = bfs_distances(g, v, s).keys()
        seen.update(comp)
        comps.append(frozenset(comp))
    return comps


def is_connected_set(g, members):
    s = frozenset(members)
    if not s:
        return False
    start = next(iter(s))
    return len(bfs_distances(g, start, s)) == len(s)


def is_connected(g):
    return len(g) > 0 and is_connected_set(g, g.vertex_set())


def shortest_path(g, sources, targets, within=None):
    """Shortest path from any source to any target, staying inside ``within``.

    Sources are seeded and neighbours expanded in increasing id order, so the
    result is deterministic. Returns a vertex list or ``None``.
    """
    targets = frozenset(targets)
    parent = {}
    queue = deque()
    for s in sorted(sources):
        if within is not None and s not in within:
            continue
        parent[s] = None
        queue.append(s)
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in g.neighbors(u):
            if w not in parent and (within is None or w in within):
                parent[w] = u
                queue.append(w)
    return None


def touches(g, a, b):
    """True when the vertex sets intersect or some edge joins them."""
    if not a.isdisjoint(b):
        return True
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    return any(w in big for v in small for w in g.neighbors(v))


def quotient(g, blocks):
    """Simple quotient graph: block i ~ block j iff some edge joins them.

    ``blocks`` is a sequence of disjoint vertex sets covering V(g); the result
    has vertices ``0..len(blocks)-1``.
    """
    owner = {}
    for i, b in enumerate(blocks):
        for v in b:
            owner[v] = i
    edges = set()
    for (u, v) in g.edge_pairs():
        a, b = owner[u], owner[v]
        if a != b:
            edges.add(_key(a, b))
    return Multigraph(range(len(blocks)), sorted(edges))


# ---- dissolution --------------------------------------------------------

def dissolve(g, v):
    """Dissolve the edge-degree-2 vertex ``v`` (two distinct neighbours)."""
    g.check_vertex(v)
    adj = g.adjacency(v)
    if g.edge_degree(v) != 2:
        raise InputError(f"vertex {v} has edge-degree {g.edge_degree(v)}, not 2", "not-degree-two")
    if len(adj) != 2:
        raise InputError(f"both edges at {v} go to the same neighbour", "would-create-loop")
    x, y = sorted(adj)
    edges = {k: m for k, m in g._edges.items() if v not in k}
    k = _key(x, y)
    edges[k] = edges.get(k, 0) + 1
    labels = {u: l for u, l in g.labels.items() if u != v}
    return Multigraph([u for u in g.vertices if u != v], edges, labels)


def dissolvable_vertices(g):
    return [v for v in g.vertices if g.edge_degree(v) == 2 and g.degree(v) == 2]


def dissolution_closure_step(g):
    """All graphs reachable by one legal dissolution, deduplicated up to isomorphism."""
    from .iso import are_isomorphic

    out = []
    for v in dissolvable_vertices(g):
        h = dissolve(g, v)
        if not any(are_isomorphic(h, seen) for seen in out):
            out.append(h)
    return out


# ---- small constructors used across modules and tests -------------------

def path_graph(n):
    return Multigraph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Multigraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Multigraph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Multigraph(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])
