"""Exact multigraph isomorphism: colour refinement followed by backtracking.

Meant for graphs of a few dozen vertices; highly regular large inputs may be
slow.
"""

import sys


def _refine(g1, g2):
    """Joint 1-WL colouring. Returns (colours1, colours2) or None on mismatch."""
    c1 = {v: (g1.degree(v), g1.edge_degree(v)) for v in g1}
    c2 = {v: (g2.degree(v), g2.edge_degree(v)) for v in g2}
    classes = -1
    while True:
        palette = sorted(set(c1.values()) | set(c2.values()))
        index = {col: i for i, col in enumerate(palette)}
        c1 = {v: index[c] for v, c in c1.items()}
        c2 = {v: index[c] for v, c in c2.items()}
        if sorted(c1.values()) != sorted(c2.values()):
            return None
        if len(palette) == classes:
            return c1, c2
        classes = len(palette)
        c1 = {v: (c1[v], tuple(sorted((c1[w], m) for w, m in g1.adjacency(v).items())))
              for v in g1}
        c2 = {v: (c2[v], tuple(sorted((c2[w], m) for w, m in g2.adjacency(v).items())))
              for v in g2}


def _search_order(g, colours):
    size = {}
    for c in colours.values():
        size[c] = size.get(c, 0) + 1
    order = []
    placed = set()
    score = {v: 0 for v in g}
    remaining = set(g.vertices)
    while remaining:
        v = min(remaining, key=lambda u: (-score[u], size[colours[u]], u))
        remaining.discard(v)
        placed.add(v)
        order.append(v)
        for w in g.neighbors(v):
            if w in remaining:
                score[w] += 1
    return order


def find_isomorphism(g1, g2, multiplicities=True):
    """Return a bijection V(g1) -> V(g2) preserving edge multiplicities, or None.

    With ``multiplicities=False`` the underlying simple graphs are compared.
    """
    if not multiplicities:
        g1, g2 = g1.simple(), g2.simple()
    if len(g1) != len(g2) or g1.num_edges != g2.num_edges \
            or g1.total_multiplicity != g2.total_multiplicity:
        return None
    if len(g1) == 0:
        return {}
    refined = _refine(g1, g2)
    if refined is None:
        return None
    col1, col2 = refined
    by_colour = {}
    for v in g2.vertices:
        by_colour.setdefault(col2[v], []).append(v)
    order = _search_order(g1, col1)
    mapping = {}
    used = set()

    def feasible(v, c):
        mapped_nbrs = 0
        for w, m in g1.adjacency(v).items():
            if w in mapping:
                if g2.multiplicity(c, mapping[w]) != m:
                    return False
                mapped_nbrs += 1
        image_nbrs = sum(1 for x in g2.adjacency(c) if x in used)
        return image_nbrs == mapped_nbrs

    def extend(depth):
        if depth == len(order):
            return True
        v = order[depth]
        anchor = next((w for w in g1.neighbors(v) if w in mapping), None)
        if anchor is None:
            pool = by_colour[col1[v]]
        else:
            pool = [x for x in g2.neighbors(mapping[anchor]) if col2[x] == col1[v]]
        for c in pool:
            if c in used or not feasible(v, c):
                continue
            mapping[v] = c
            used.add(c)
            if extend(depth + 1):
                return True
            del mapping[v]
            used.discard(c)
        return False

    limit = sys.getrecursionlimit()
    if len(order) + 100 > limit:
        sys.setrecursionlimit(len(order) + 100)
    try:
        return dict(mapping) if extend(0) else None
    finally:
        sys.setrecursionlimit(limit)


def are_isomorphic(g1, g2, multiplicities=True):
    return find_isomorphism(g1, g2, multiplicities) is not None
