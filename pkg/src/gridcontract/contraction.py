"""Contraction witnesses: verification, exhaustive discovery, composition and bcg."""

from dataclasses import dataclass

from .errors import BudgetExceeded, InputError, Verdict
from .graph import Multigraph, diameter, is_connected_set, quotient
from .grids import gen_gamma, shrink_map
from .iso import find_isomorphism


@dataclass(frozen=True)
class Kind:
    """Bound attached to a contraction: ``diameter``, ``size`` or ``unbounded``."""

    name: str
    bound: int = None

    def __post_init__(self):
        if self.name not in ("diameter", "size", "unbounded"):
            raise InputError(f"unknown contraction kind {self.name!r}", "bad-kind")
        if self.name != "unbounded" and (self.bound is None or self.bound < 0):
            raise InputError(f"kind {self.name} needs a non-negative bound", "bad-kind")

    @classmethod
    def diameter(cls, c):
        return cls("diameter", c)

    @classmethod
    def size(cls, c):
        return cls("size", c)

    def __str__(self):
        return self.name if self.name == "unbounded" else f"{self.name}({self.bound})"


UNBOUNDED = Kind("unbounded")


@dataclass(frozen=True)
class Budget:
    max_vertices: int = 12
    max_states: int = 10 ** 7


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class ContractionWitness:
    """Claim that ``target`` is a contraction of ``source`` through ``sigma``."""

    source: Multigraph
    target: Multigraph
    sigma: dict
    kind: Kind = UNBOUNDED

    def blocks(self):
        """Preimage of every target vertex, keyed by target vertex."""
        out = {x: set() for x in self.target.vertices}
        for v, x in self.sigma.items():
            out[x].add(v)
        return {x: frozenset(b) for x, b in out.items()}

    def with_kind(self, kind):
        return ContractionWitness(self.source, self.target, self.sigma, kind)


def identity_witness(g, kind=Kind.diameter(0)):
    return ContractionWitness(g, g, {v: v for v in g.vertices}, kind)


def witness_from_blocks(g, blocks, kind=UNBOUNDED):
    """Witness onto the quotient of ``g`` by ``blocks`` (block i becomes vertex i)."""
    h = quotient(g, blocks)
    sigma = {v: i for i, b in enumerate(blocks) for v in b}
    return ContractionWitness(g, h, sigma, kind)


def verify_contraction(w):
    """Check the witness against the contraction definition.

    Multiplicities are ignored on both sides. Returns a :class:`Verdict`; a
    mapping that is not total or leaves the target raises :class:`InputError`.
    """
    g, h, sigma = w.source, w.target, w.sigma
    if set(sigma) != set(g.vertices):
        missing = sorted(set(g.vertices) - set(sigma))
        raise InputError(f"mapping is not total on the source (missing {missing[:5]})",
                         "not-total")
    hv = h.vertex_set()
    for v, x in sigma.items():
        if x not in hv:
            raise InputError(f"vertex {v} maps to {x}, which is not a target vertex",
                             "outside-target")
    blocks = w.blocks()
    for x in h.vertices:
        if not blocks[x]:
            return Verdict.violation("not-surjective", f"target vertex {x} has an empty preimage",
                                     vertex=x)
    for x in h.vertices:
        if not is_connected_set(g, blocks[x]):
            return Verdict.violation("disconnected-block",
                                     f"preimage of {x} is not connected", vertex=x)
    # with connected blocks, the union of two blocks is connected iff an edge joins them
    seen = set()
    for (u, v) in g.edge_pairs():
        a, b = sigma[u], sigma[v]
        if a == b:
            continue
        pair = (a, b) if a < b else (b, a)
        if pair not in seen:
            seen.add(pair)
            if not h.has_edge(a, b):
                return Verdict.violation(
                    "adjacency-law", f"preimages of {pair[0]} and {pair[1]} touch but the "
                    "target has no such edge", pair=pair)
    for pair in h.edge_pairs():
        if pair not in seen:
            return Verdict.violation(
                "adjacency-law", f"target edge {pair} but the preimages do not touch", pair=pair)
    kind = w.kind
    if kind.name == "size":
        for x in h.vertices:
            if len(blocks[x]) > kind.bound:
                return Verdict.violation("size-bound", f"preimage of {x} has {len(blocks[x])} "
                                         f"vertices > {kind.bound}", vertex=x)
    elif kind.name == "diameter":
        for x in h.vertices:
            d = diameter(g, blocks[x])
            if d > kind.bound:
                return Verdict.violation("diameter-bound", f"preimage of {x} has diameter {d} "
                                         f"> {kind.bound}", vertex=x)
    return Verdict.success()


def contraction_compose(w1, w2):
    """Compose ``w1: G -> H`` with ``w2: H -> F`` into an unbounded ``G -> F`` witness."""
    if not w1.target.same_as(w2.source):
        raise InputError("intermediate graphs differ: w1.target is not w2.source",
                         "mismatched-intermediate")
    sigma = {v: w2.sigma[x] for v, x in w1.sigma.items()}
    return ContractionWitness(w1.source, w2.target, sigma, UNBOUNDED)


def grid_shrink_witness(k, k_small):
    """Witness ``Gamma_{k_small} <= Gamma_k`` folding the last rows/columns together."""
    return ContractionWitness(gen_gamma(k), gen_gamma(k_small), shrink_map(k, k_small))


# ---- exhaustive search --------------------------------------------------

def _bfs_order(g):
    order, seen = [], set()
    for s in sorted(g.vertices):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        for u in queue:
            order.append(u)
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _degree_signature(h):
    return sorted(h.degree(v) for v in h.vertices)


class _PartitionSearch:
    """Connected partitions of V(g) into exactly m blocks, as restricted-growth strings."""

    def __init__(self, g, m, size_bound, budget):
        self.g = g
        self.order = _bfs_order(g)
        self.pos = {v: i for i, v in enumerate(self.order)}
        self.n = len(self.order)
        self.adj = [0] * self.n
        for (u, v) in g.edge_pairs():
            a, b = self.pos[u], self.pos[v]
            self.adj[a] |= 1 << b
            self.adj[b] |= 1 << a
        self.m = m
        self.size_bound = size_bound
        self.budget = budget
        self.states = 0

    def _reachable(self, start_bit, region):
        reach = start_bit
        frontier = start_bit
        adj = self.adj
        while frontier:
            nb = 0
            f = frontier
            while f:
                low = f & -f
                nb |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nb & region & ~reach
            reach |= frontier
        return reach

    def _alive(self, block, free):
        return block & ~self._reachable(block & -block, block | free) == 0

    def partitions(self):
        """Yield lists of bitmask blocks."""
        n, m = self.n, self.m
        if m > n or (m == 0) != (n == 0):
            return
        blocks = []
        full = (1 << n) - 1

        def rec(p):
            self.states += 1
            if self.states > self.budget.max_states:
                raise BudgetExceeded(f"partition search exceeded {self.budget.max_states} states")
            if p == n:
                if len(blocks) == m:
                    yield list(blocks)
                return
            if n - p < m - len(blocks):
                return
            bit = 1 << p
            free = full & ~((bit << 1) - 1)
            choices = list(range(len(blocks)))
            if len(blocks) < m:
                choices.append(len(blocks))
            for b in choices:
                opened = b == len(blocks)
                if opened:
                    blocks.append(bit)
                else:
                    if self.size_bound is not None and \
                            bin(blocks[b]).count("1") >= self.size_bound:
                        continue
                    blocks[b] |= bit
                if all(self._alive(blk, free) for blk in blocks):
                    yield from rec(p + 1)
                if opened:
                    blocks.pop()
                else:
                    blocks[b] &= ~bit

        yield from rec(0)

    def to_sets(self, masks):
        out = []
        for mask in masks:
            out.append(frozenset(self.order[i] for i in range(self.n) if mask >> i & 1))
        return out


def find_contraction(g, h, kind=UNBOUNDED, budget=DEFAULT_BUDGET):
    """Exhaustively look for a witness ``h <= g`` respecting ``kind``.

    Returns a verified :class:`ContractionWitness` or ``None`` (a proof of
    absence). Raises :class:`BudgetExceeded` when the search is too large.
    """
    if len(g) > budget.max_vertices:
        raise BudgetExceeded(f"source has {len(g)} vertices > budget {budget.max_vertices}")
    hs = h.simple()
    if len(hs) > len(g):
        return None
    if hs.num_edges > g.simple().num_edges:
        return None
    size_bound = kind.bound if kind.name == "size" else None
    search = _PartitionSearch(g, len(hs), size_bound, budget)
    target_degrees = _degree_signature(hs)
    for masks in search.partitions():
        blocks = search.to_sets(masks)
        q = quotient(g, blocks)
        if q.num_edges != hs.num_edges or _degree_signature(q) != target_degrees:
            continue
        if kind.name == "diameter" and any(diameter(g, b) > kind.bound for b in blocks):
            continue
        iso = find_isomorphism(q, hs)
        if iso is None:
            continue
        sigma = {v: iso[i] for i, b in enumerate(blocks) for v in b}
        return ContractionWitness(g, h, sigma, kind)
    return None


def bcg(g, budget=DEFAULT_BUDGET):
    """Largest k >= 3 with Gamma_k a contraction of g; 0 when there is none."""
    if len(g) > budget.max_vertices:
        raise BudgetExceeded(f"graph has {len(g)} vertices > budget {budget.max_vertices}")
    simple_edges = g.simple().num_edges
    k = int(len(g) ** 0.5)
    while k >= 3:
        if simple_edges >= 3 * k * k - 6 and find_contraction(g, gen_gamma(k), UNBOUNDED,
                                                              budget) is not None:
            return k
        k -= 1
    return 0


def block_diameters(w):
    return {x: diameter(w.source, b) for x, b in w.blocks().items()}


def max_block_size(w):
    return max((len(b) for b in w.blocks().values()), default=0)


def max_block_diameter(w):
    return max(block_diameters(w).values(), default=0)
