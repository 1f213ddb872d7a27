"""Random instances whose contraction witnesses hold by construction."""

import random
from dataclasses import dataclass

from .contraction import ContractionWitness, Kind, verify_contraction
from .errors import InputError, InvariantError
from .formats import format_graph, format_witness
from .graph import Multigraph, is_connected, quotient
from .grids import gen_gamma

MAX_K = 30
MAX_INFLATE = 4


@dataclass(frozen=True)
class GeneratedInstance:
    g: Multigraph
    sigma: ContractionWitness  # Gamma_k <= g
    h: Multigraph
    phi: ContractionWitness    # h <=^c g
    seed: int
    params: tuple              # (k, c, inflate)

    def to_bytes(self):
        parts = [format_graph(self.g), format_witness(self.sigma),
                 format_graph(self.h), format_witness(self.phi)]
        return "".join(parts).encode()


def _random_tree(rng, size):
    """Edges of a random labelled tree on 0..size-1 (random attachment)."""
    return [(i, rng.randrange(i)) for i in range(1, size)]


def _inflate(grid, inflate, rng):
    if inflate == 1:
        return grid, {v: v for v in grid.vertices}
    gadgets = {}
    total = 0
    for x in grid.vertices:
        size = rng.randint(1, inflate)
        gadgets[x] = list(range(total, total + size))
        total += size
    perm = list(range(total))
    rng.shuffle(perm)
    edges = []
    sigma = {}
    for x, members in gadgets.items():
        ids = [perm[i] for i in members]
        for v in ids:
            sigma[v] = x
        for a, b in _random_tree(rng, len(ids)):
            edges.append((ids[a], ids[b]))
        gadgets[x] = ids
    for (x, y), _ in grid.edges():
        a, b = gadgets[x], gadgets[y]
        links = {(rng.choice(a), rng.choice(b)) for _ in range(rng.randint(1, 2))}
        edges.extend(sorted(links))
    return Multigraph(range(total), edges), sigma


def _ball(g, centre, free, radius):
    dist = {v: 0 for v in centre}
    frontier = list(centre)
    for r in range(radius):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                if w in free and w not in dist:
                    dist[w] = r + 1
                    nxt.append(w)
        frontier = nxt
    return set(dist)


def random_diameter_partition(g, c, rng):
    """Blocks of diameter <= c grown as balls in the still unassigned part of ``g``.

    Radius floor(c/2) around a vertex; for odd ``c`` around an edge when one is free.
    """
    if c == 0:
        return [frozenset([v]) for v in g.vertices]
    radius = c // 2
    order = list(g.vertices)
    rng.shuffle(order)
    free = set(g.vertices)
    blocks = []
    for u in order:
        if u not in free:
            continue
        centre = [u]
        if c % 2 == 1:
            options = [w for w in g.neighbors(u) if w in free]
            if options:
                centre.append(rng.choice(options))
        block = _ball(g, centre, free, radius)
        free -= block
        blocks.append(frozenset(block))
    return sorted(blocks, key=min)


def gen_instance(k, c, inflate, seed):
    if not 3 <= k <= MAX_K:
        raise InputError(f"k must lie in [3, {MAX_K}], got {k}", "out-of-budget")
    if c < 0:
        raise InputError(f"c must be non-negative, got {c}", "out-of-budget")
    if not 1 <= inflate <= MAX_INFLATE:
        raise InputError(f"inflate must lie in [1, {MAX_INFLATE}], got {inflate}", "out-of-budget")
    if not 0 <= seed < 2 ** 64:
        raise InputError("seed must be a 64-bit unsigned integer", "out-of-budget")
    rng = random.Random(seed)
    grid = gen_gamma(k)
    g, sig = _inflate(grid, inflate, rng)
    sigma = ContractionWitness(g, grid, sig, Kind.size(inflate))
    blocks = random_diameter_partition(g, c, rng)
    h = quotient(g, blocks)
    phi = ContractionWitness(g, h, {v: i for i, b in enumerate(blocks) for v in b},
                             Kind.diameter(c))
    if not is_connected(g):
        raise InvariantError("generated host is disconnected")
    for w in (sigma, phi):
        verdict = verify_contraction(w)
        if not verdict:
            raise InvariantError(f"generated witness does not verify: {verdict.detail}")
    return GeneratedInstance(g, sigma, h, phi, seed, (k, c, inflate))
