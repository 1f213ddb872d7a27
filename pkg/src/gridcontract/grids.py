"""Generators for the square grid, the uniformly triangulated grid and its apex extension.

Grid vertex ``(i, j)`` has id ``i * k + j`` and label ``"(i,j)"``; the apex of
the extended grid has id ``k * k`` and label ``"a"``.
"""

from .errors import InputError
from .graph import Multigraph


def vertex_id(i, j, k):
    return i * k + j


def coords(v, k):
    return divmod(v, k)


def apex_id(k):
    return k * k


def boundary(k):
    """Ids of ``[0,k-1]^2`` minus ``[1,k-2]^2``, row-major."""
    return [vertex_id(i, j, k) for i in range(k) for j in range(k)
            if i in (0, k - 1) or j in (0, k - 1)]


def _labels(k):
    return {vertex_id(i, j, k): f"({i},{j})" for i in range(k) for j in range(k)}


def _grid_edges(k):
    edges = []
    for i in range(k):
        for j in range(k):
            if i + 1 < k:
                edges.append((vertex_id(i, j, k), vertex_id(i + 1, j, k)))
            if j + 1 < k:
                edges.append((vertex_id(i, j, k), vertex_id(i, j + 1, k)))
    return edges


def _diagonals(k):
    return [(vertex_id(i + 1, j, k), vertex_id(i, j + 1, k))
            for i in range(k - 1) for j in range(k - 1)]


def gen_square_grid(k):
    if k < 1:
        raise InputError(f"grid side must be >= 1, got {k}", "bad-size")
    return Multigraph(range(k * k), _grid_edges(k), _labels(k))


def _triangulated_edges(k, hub):
    # grid, then diagonals, then hub-to-boundary pairs not already present
    edges = _grid_edges(k) + _diagonals(k)
    present = {frozenset(e) for e in edges}
    for b in boundary(k):
        if b != hub and frozenset((hub, b)) not in present:
            edges.append((hub, b))
    return edges


def gen_gamma(k):
    """The uniformly triangulated grid on ``k * k`` vertices (k >= 3)."""
    if k < 3:
        raise InputError(f"triangulated grid needs k >= 3, got {k}", "bad-size")
    corner = vertex_id(k - 1, k - 1, k)
    return Multigraph(range(k * k), _triangulated_edges(k, corner), _labels(k))


def gen_gamma_hat(k):
    """The triangulated grid with a fresh apex joined to the whole boundary."""
    if k < 3:
        raise InputError(f"extended triangulated grid needs k >= 3, got {k}", "bad-size")
    a = apex_id(k)
    labels = _labels(k)
    labels[a] = "a"
    return Multigraph(range(k * k + 1), _triangulated_edges(k, a), labels)


def gamma_side(g):
    """Return k when ``g`` is literally ``gen_gamma(k)``, else None."""
    n = len(g)
    k = int(round(n ** 0.5))
    if k < 3 or k * k != n:
        return None
    return k if g.same_as(gen_gamma(k), multiplicities=False) else None


def shrink_map(k, k_small):
    """Vertex map Gamma_k -> Gamma_{k_small} folding trailing rows and columns."""
    if not 3 <= k_small <= k:
        raise InputError(f"cannot shrink Gamma_{k} to Gamma_{k_small}", "bad-size")
    last = k_small - 1
    return {vertex_id(i, j, k): vertex_id(min(i, last), min(j, last), k_small)
            for i in range(k) for j in range(k)}


def apex_merge_map(k):
    """Vertex map Gamma-hat_k -> Gamma_k sending the apex onto (k-1, k-1)."""
    m = {v: v for v in range(k * k)}
    m[apex_id(k)] = vertex_id(k - 1, k - 1, k)
    return m
