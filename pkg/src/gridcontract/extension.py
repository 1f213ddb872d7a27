"""Intersection graphs of connected sets and (c1, c2)-extension witnesses."""

import math
from dataclasses import dataclass, field
from itertools import combinations

from .contraction import DEFAULT_BUDGET, ContractionWitness, Kind, bcg, verify_contraction
from .errors import BudgetExceeded, InputError, InvariantError, Verdict
from .graph import Multigraph, diameter, dissolve, is_connected_set
from .treewidth import MAX_EXACT_VERTICES, exact_treewidth


@dataclass(frozen=True)
class IntersectionInstance:
    host: Multigraph
    family: tuple
    result: Multigraph


def build_intersection(host, family):
    """Intersection multigraph: vertex i per set, multiplicity |C_i & C_j|."""
    family = tuple(frozenset(s) for s in family)
    for i, s in enumerate(family):
        if not s:
            raise InputError(f"family member {i} is empty", "empty-member")
        unknown = s - host.vertex_set()
        if unknown:
            raise InputError(f"family member {i} has unknown vertices {sorted(unknown)[:5]}",
                             "unknown-vertex")
        if not is_connected_set(host, s):
            raise InputError(f"family member {i} is not connected in the host", "disconnected-member")
    edges = {}
    for i, j in combinations(range(len(family)), 2):
        m = len(family[i] & family[j])
        if m:
            edges[(i, j)] = m
    return IntersectionInstance(host, family, Multigraph(range(len(family)), edges))


def edge_degree_bound(g):
    return max((g.edge_degree(v) for v in g.vertices), default=0)


# ---- Steiner trees ------------------------------------------------------

def steiner_tree(g, members, terminals):
    """Minimum-vertex tree of ``g[members]`` spanning ``terminals`` (Dreyfus-Wagner).

    Returns the edge list (sorted pairs) of the tree; a single terminal gives no edges.
    Ties are resolved by the fixed iteration order (ascending ids, smaller subsets first).
    """
    terms = sorted(terminals)
    if len(terms) <= 1:
        return []
    verts = sorted(members)
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    nbrs = [[pos[w] for w in g.neighbors(v) if w in pos] for v in verts]
    # all-pairs hop distances and first-step paths inside g[members]
    dist = [[math.inf] * n for _ in range(n)]
    nxt = [[-1] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        nxt[s][s] = s
        queue = [s]
        for u in queue:
            for w in nbrs[u]:
                if dist[s][w] == math.inf:
                    dist[s][w] = dist[s][u] + 1
                    nxt[w][s] = u  # towards s
                    queue.append(w)

    def path_edges(a, b):
        out = []
        while a != b:
            step = nxt[a][b]
            out.append((a, step))
            a = step
        return out

    t = len(terms)
    tpos = [pos[x] for x in terms]
    full = (1 << t) - 1
    inf = math.inf
    dp = [[inf] * n for _ in range(1 << t)]
    back = [[None] * n for _ in range(1 << t)]
    for i, p in enumerate(tpos):
        for v in range(n):
            dp[1 << i][v] = dist[p][v]
            back[1 << i][v] = ("path", p)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        row = dp[mask]
        brow = back[mask]
        low = mask & -mask
        for u in range(n):
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    cost = dp[sub][u] + dp[mask ^ sub][u]
                    if cost < row[u]:
                        row[u] = cost
                        brow[u] = ("split", sub, u)
                sub = (sub - 1) & mask
        merged = list(row)
        mback = list(brow)
        for v in range(n):
            best, arg = merged[v], None
            for u in range(n):
                cost = row[u] + dist[u][v]
                if cost < best:
                    best, arg = cost, u
            if arg is not None:
                merged[v] = best
                mback[v] = ("move", arg, brow[arg])
        dp[mask] = merged
        back[mask] = mback
    root = tpos[-1]
    rest = full & ~(1 << (t - 1))
    if dp[rest][root] == inf:
        raise InputError("terminals are not connected inside the set", "disconnected-member")
    edges = set()

    def collect(mask, v, kind=None):
        kind = kind or back[mask][v]
        if kind[0] == "path":
            edges.update(path_edges(v, kind[1]))
        elif kind[0] == "move":
            _, u, before = kind
            edges.update(path_edges(v, u))
            collect(mask, u, before)
        else:
            _, sub, u = kind
            collect(sub, u)
            collect(mask ^ sub, u)

    collect(rest, root)
    pairs = sorted({(min(verts[a], verts[b]), max(verts[a], verts[b])) for a, b in edges})
    tree_vertices = {v for e in pairs for v in e}
    if len(pairs) != len(tree_vertices) - 1 or not set(terms) <= tree_vertices:
        raise InvariantError("Steiner reconstruction is not a tree over the terminals")
    return pairs


# ---- extension witnesses ------------------------------------------------

@dataclass(frozen=True)
class ExtensionWitness:
    base: Multigraph          # G
    middle: Multigraph        # J
    result: Multigraph        # H
    sigma1: ContractionWitness  # G <= J, size(c1)
    sigma2: ContractionWitness  # H <= J, diameter(c2)
    bounds: tuple             # (c1, c2)
    trees: tuple = field(default=(), compare=False)  # dissolved trees, when built from a family


def verify_extension(w):
    c1, c2 = w.bounds
    if not (w.sigma1.source.same_as(w.middle) and w.sigma2.source.same_as(w.middle)):
        return Verdict.violation("mismatched-middle", "witnesses do not start at the middle graph")
    if not w.sigma1.target.same_as(w.base):
        return Verdict.violation("mismatched-base", "first witness does not reach the base graph")
    if not w.sigma2.target.same_as(w.result):
        return Verdict.violation("mismatched-result", "second witness does not reach the result")
    for name, wit, kind in (("first", w.sigma1, Kind.size(c1)), ("second", w.sigma2, Kind.diameter(c2))):
        try:
            verdict = verify_contraction(wit.with_kind(kind))
        except InputError as exc:
            return Verdict.violation("bad-witness", f"{name} witness: {exc}")
        if not verdict:
            return Verdict.violation(verdict.code, f"{name} witness: {verdict.detail}",
                                     **verdict.data)
    return Verdict.success()


def _dissolve_tree(tree_edges, root, keep):
    """Suppress degree-2 vertices outside ``keep``; returns (vertices, edges)."""
    if not tree_edges:
        return [root], []
    verts = sorted({v for e in tree_edges for v in e})
    t = Multigraph(verts, tree_edges)
    for v in verts:
        if v not in keep and t.degree(v) == 2:
            t = dissolve(t, v)
    return list(t.vertices), [e for e, _ in t.edges()]


def build_extension_witness(inst, d):
    """Extension witness with bounds (d+1, d-1) for an intersection graph of edge-degree <= d."""
    if d < 1:
        raise InputError("d must be at least 1", "bad-degree")
    h = inst.result
    if edge_degree_bound(h) > d:
        raise InputError(f"intersection graph has edge-degree {edge_degree_bound(h)} > {d}",
                         "degree-bound")
    fam = inst.family
    count = {}
    for s in fam:
        for x in s:
            count[x] = count.get(x, 0) + 1
    crowded = sorted(x for x, m in count.items() if m > d + 1)
    if crowded:
        raise InputError(f"vertex {crowded[0]} lies in more than {d + 1} sets", "too-many-sets")
    g = inst.host
    n = len(fam)
    terminals = []
    for i in range(n):
        vi = set()
        for j in range(n):
            if j != i:
                vi |= fam[i] & fam[j]
        terminals.append(frozenset(vi))

    raw_trees, dissolved = [], []
    for i in range(n):
        root = min(terminals[i]) if terminals[i] else min(fam[i])
        edges = steiner_tree(g, fam[i], terminals[i])
        raw_trees.append((root, edges))
        tv = {v for e in edges for v in e} or {root}
        for v in tv - terminals[i]:
            if any(v in fam[j] for j in range(n) if j != i):
                raise InvariantError(f"non-terminal {v} of tree {i} lies in another set")
        verts, tedges = _dissolve_tree(edges, root, terminals[i])
        tree = Multigraph(verts, tedges)
        span = diameter(tree, tree.vertices)
        if span > max(len(terminals[i]) - 1, 0):
            raise InvariantError(f"dissolved tree {i} has diameter {span} "
                                 f"> {len(terminals[i]) - 1}")
        dissolved.append(tree)

    # G': union of the raw trees, then dissolve every non-terminal degree-2 vertex
    union_vertices = sorted({v for root, edges in raw_trees
                             for v in ({x for e in edges for x in e} or {root})})
    union_edges = sorted({e for _, edges in raw_trees for e in edges})
    base = Multigraph(union_vertices, union_edges)
    # non-terminals belong to one tree only, so their degree there is their degree in the union
    for i, (_, edges) in enumerate(raw_trees):
        deg = {}
        for a, b in edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        for v in sorted(deg):
            if deg[v] == 2 and v not in terminals[i]:
                base = dissolve(base, v)

    # J: disjoint copies of the dissolved trees plus a clique on the copies of each vertex
    copies = [(i, v) for i in range(n) for v in dissolved[i].vertices]
    jid = {cv: k for k, cv in enumerate(copies)}
    labels = {jid[(i, v)]: f"{v}@{i}" for (i, v) in copies}
    j_edges = []
    for i, t in enumerate(dissolved):
        for (a, b), _ in t.edges():
            j_edges.append((jid[(i, a)], jid[(i, b)]))
    holders = {}
    for (i, v) in copies:
        holders.setdefault(v, []).append(jid[(i, v)])
    for v, ids in sorted(holders.items()):
        if len(ids) > 1:
            if not 2 <= len(ids) <= d + 1:
                raise InvariantError(f"clique on copies of {v} has size {len(ids)}")
            j_edges.extend(combinations(ids, 2))
    middle = Multigraph(range(len(copies)), j_edges, labels)
    sigma1 = ContractionWitness(middle, base, {jid[cv]: cv[1] for cv in copies}, Kind.size(d + 1))
    sigma2 = ContractionWitness(middle, h, {jid[cv]: cv[0] for cv in copies}, Kind.diameter(d - 1))
    w = ExtensionWitness(base, middle, h, sigma1, sigma2, (d + 1, d - 1), tuple(dissolved))
    verdict = verify_extension(w)
    if not verdict:
        raise InvariantError(f"constructed extension witness fails: {verdict.detail}",
                             {"code": verdict.code})
    return w


# ---- chained bound check ------------------------------------------------

PASS, FAIL, OVER = "pass", "fail", "over_budget"


@dataclass(frozen=True)
class BoundReport:
    tw_result: int
    tw_middle: int
    tw_base: int
    bcg_result: int
    bcg_base: int
    checks: dict   # name -> PASS / FAIL / OVER

    @property
    def ok(self):
        return FAIL not in self.checks.values()

    @property
    def complete(self):
        return OVER not in self.checks.values()


def _measure(fn, g, limit):
    if len(g) > limit:
        return None
    try:
        return fn(g)
    except BudgetExceeded:
        return None


def theorem_bound_check(w, lam, c, budget=DEFAULT_BUDGET, tw_limit=MAX_EXACT_VERTICES,
                        strict=True):
    """Measure tw/bcg and test each link of the chained treewidth bound.

    Checks: ``tw(H) <= tw(J)``; ``tw(J) <= (c1+1)(tw(G)+1)-1``;
    ``tw(G) <= lam * bcg(G)^c``; ``bcg(G) <= (2c2+1)(bcg(H)+2)+1``; and the
    combined ``tw(H) <= (c1+1)(lam*[(2c2+1)(bcg(H)+2)+1]^c + 1) - 1``.
    With ``strict`` a graph beyond the search budgets raises
    :class:`BudgetExceeded`; otherwise the affected checks read ``over_budget``.
    """
    if lam <= 0:
        raise InputError("lambda must be positive", "bad-parameter")
    if not 1 <= c < 2:
        raise InputError("exponent c must lie in [1, 2)", "bad-parameter")
    verdict = verify_extension(w)
    if not verdict:
        raise InputError(f"extension witness does not verify: {verdict.detail}", "bad-witness")
    c1, c2 = w.bounds
    if strict:
        for g in (w.result, w.middle, w.base):
            if len(g) > tw_limit:
                raise BudgetExceeded(f"treewidth oracle limited to {tw_limit} vertices")
        for g in (w.result, w.base):
            if len(g) > budget.max_vertices:
                raise BudgetExceeded(f"bcg oracle limited to {budget.max_vertices} vertices")

    def tw(g):
        return exact_treewidth(g, tw_limit)[0]

    tw_h = _measure(tw, w.result, tw_limit)
    tw_j = _measure(tw, w.middle, tw_limit)
    tw_g = _measure(tw, w.base, tw_limit)
    bcg_h = _measure(lambda g: bcg(g, budget), w.result, budget.max_vertices)
    bcg_g = _measure(lambda g: bcg(g, budget), w.base, budget.max_vertices)
    if strict and None in (bcg_h, bcg_g):
        raise BudgetExceeded("bcg search exceeded its state budget")

    def judge(*values_and_test):
        *values, test = values_and_test
        if any(v is None for v in values):
            return OVER
        return PASS if test(*values) else FAIL

    eps = 1e-9
    checks = {
        "minor": judge(tw_h, tw_j, lambda a, b: a <= b),
        "lift": judge(tw_j, tw_g, lambda a, b: a <= (c1 + 1) * (b + 1) - 1),
        "class": judge(tw_g, bcg_g, lambda a, b: a <= lam * b ** c + eps),
        "grid": judge(bcg_g, bcg_h, lambda a, b: a <= (2 * c2 + 1) * (b + 2) + 1),
        "combined": judge(tw_h, bcg_h, lambda a, b: a <= (c1 + 1) * (
            lam * ((2 * c2 + 1) * (b + 2) + 1) ** c + 1) - 1 + eps),
    }
    return BoundReport(tw_h, tw_j, tw_g, bcg_h, bcg_g, checks)
