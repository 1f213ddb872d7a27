"""Tree decompositions: validation, exact treewidth on small graphs, and lifting
a decomposition back through a size-bounded contraction."""

from dataclasses import dataclass

from .contraction import verify_contraction
from .errors import BudgetExceeded, InputError, InvariantError, Verdict
from .graph import Multigraph, is_connected

MAX_EXACT_VERTICES = 20


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Multigraph
    bags: dict

    @property
    def width(self):
        return max((len(b) for b in self.bags.values()), default=0) - 1


def _check_tree(t):
    if len(t) == 0 or not is_connected(t) or t.num_edges != len(t) - 1 or not t.is_simple():
        raise InputError("decomposition tree is not a tree", "not-a-tree")


def validate_decomposition(g, d):
    """Coverage, edge and connectivity checks; the first violation is reported."""
    _check_tree(d.tree)
    if set(d.bags) != set(d.tree.vertices):
        raise InputError("bags must be given for exactly the tree nodes", "bad-bags")
    covered = set().union(*d.bags.values())
    for v in g.vertices:
        if v not in covered:
            return Verdict.violation("coverage", f"vertex {v} lies in no bag", vertex=v)
    extra = covered - set(g.vertices)
    if extra:
        return Verdict.violation("coverage", f"bags mention unknown vertices {sorted(extra)[:5]}")
    for (u, v) in g.edge_pairs():
        if not any(u in b and v in b for b in d.bags.values()):
            return Verdict.violation("edge", f"edge ({u}, {v}) is in no bag", pair=(u, v))
    for v in g.vertices:
        nodes = {t for t, b in d.bags.items() if v in b}
        start = min(nodes)
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for s in d.tree.neighbors(t):
                if s in nodes and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if seen != nodes:
            return Verdict.violation("connectivity", f"nodes holding {v} are not a subtree",
                                     vertex=v)
    return Verdict.success(width=d.width)


# ---- exact treewidth ----------------------------------------------------

def _popcount(x):
    return bin(x).count("1")


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Eliminator:
    """Bitmask helpers over a simple graph with vertices renumbered 0..n-1."""

    def __init__(self, g):
        self.ids = sorted(g.vertices)
        self.pos = {v: i for i, v in enumerate(self.ids)}
        self.n = len(self.ids)
        self.adj = [0] * self.n
        for (u, v) in g.edge_pairs():
            a, b = self.pos[u], self.pos[v]
            self.adj[a] |= 1 << b
            self.adj[b] |= 1 << a

    def components(self, s):
        """(component mask, neighbourhood mask) for each component of G[s]."""
        out = []
        rest = s
        while rest:
            start = rest & -rest
            reach = start
            frontier = start
            nb_all = 0
            while frontier:
                nb = 0
                for i in _bits(frontier):
                    nb |= self.adj[i]
                nb_all |= nb
                frontier = nb & s & ~reach
                reach |= frontier
            out.append((reach, nb_all & ~reach))
            rest &= ~reach
        return out

    def q_set(self, s, v, comps):
        """Vertices outside s + v reachable from v through s."""
        q = self.adj[v]
        for comp, nb in comps:
            if comp & self.adj[v]:
                q |= nb
        return q & ~s & ~(1 << v)

    def degeneracy(self):
        alive = (1 << self.n) - 1
        best = 0
        while alive:
            v = min(_bits(alive), key=lambda i: (_popcount(self.adj[i] & alive), i))
            best = max(best, _popcount(self.adj[v] & alive))
            alive &= ~(1 << v)
        return best

    def order_within(self, k):
        """An elimination order of width <= k, or None."""
        n = self.n
        full = (1 << n) - 1
        parent = {0: None}
        layer = [0]
        while layer:
            nxt = []
            for s in layer:
                rest = full & ~s
                if _popcount(rest) - 1 <= k:
                    order = []
                    cur = s
                    while parent[cur] is not None:
                        prev, v = parent[cur]
                        order.append(v)
                        cur = prev
                    return order[::-1] + list(_bits(rest))
                comps = self.components(s)
                for v in _bits(rest):
                    t = s | (1 << v)
                    if t in parent:
                        continue
                    if _popcount(self.q_set(s, v, comps)) <= k:
                        parent[t] = (s, v)
                        nxt.append(t)
            layer = nxt
        return None


def decomposition_from_order(g, order):
    """Tree decomposition induced by eliminating vertices of ``g`` in ``order``."""
    el = _Eliminator(g.simple())
    seq = [el.pos[v] for v in order]
    if sorted(seq) != list(range(el.n)):
        raise InputError("order must list every vertex exactly once", "bad-order")
    rank = {v: i for i, v in enumerate(seq)}
    s = 0
    bags = {}
    parent = {}
    for i, v in enumerate(seq):
        q = el.q_set(s, v, el.components(s))
        members = list(_bits(q))
        bags[i] = frozenset([el.ids[v]] + [el.ids[u] for u in members])
        if members:
            parent[i] = min(rank[u] for u in members)
        s |= 1 << v
    roots = [i for i in range(el.n) if i not in parent]
    for a, b in zip(roots, roots[1:]):
        parent[a] = b
    tree = Multigraph(range(el.n), [(i, p) for i, p in sorted(parent.items())])
    return TreeDecomposition(tree, bags)


def exact_treewidth(g, max_vertices=MAX_EXACT_VERTICES):
    """Optimal width and a certifying decomposition (subset search, n <= max_vertices)."""
    if len(g) > max_vertices:
        raise BudgetExceeded(f"exact treewidth limited to {max_vertices} vertices, got {len(g)}")
    simple = g.simple()
    if len(simple) == 0:
        return -1, TreeDecomposition(Multigraph([0]), {0: frozenset()})
    el = _Eliminator(simple)
    k = el.degeneracy()
    while True:
        order = el.order_within(k)
        if order is not None:
            d = decomposition_from_order(simple, [el.ids[v] for v in order])
            if d.width != k or not validate_decomposition(simple, d):
                raise InvariantError("reconstructed decomposition does not certify the width")
            return k, d
        k += 1


# ---- lifting ------------------------------------------------------------

def lift_decomposition(w, d):
    """Inflate every bag of a decomposition of ``w.target`` by the preimages."""
    if w.kind.name != "size":
        raise InputError("lifting needs a size-bounded contraction witness", "bad-kind")
    verdict = verify_contraction(w)
    if not verdict:
        raise InputError(f"witness does not verify: {verdict.detail}", "bad-witness")
    verdict = validate_decomposition(w.target, d)
    if not verdict:
        raise InputError(f"decomposition of the target is invalid: {verdict.detail}",
                         "bad-decomposition")
    blocks = w.blocks()
    bags = {t: frozenset().union(*(blocks[x] for x in bag)) if bag else frozenset()
            for t, bag in d.bags.items()}
    lifted = TreeDecomposition(d.tree, bags)
    bound = (w.kind.bound + 1) * (d.width + 1) - 1
    if lifted.width > bound or not validate_decomposition(w.source, lifted):
        raise InvariantError("lifted decomposition breaks the width bound or is invalid",
                             {"width": lifted.width, "bound": bound})
    return lifted


def lift_bound(c_size, width):
    return (c_size + 1) * (width + 1) - 1
