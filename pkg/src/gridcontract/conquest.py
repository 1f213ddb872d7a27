"""Transfer of a triangulated-grid contraction through a diameter-bounded contraction.

Given ``Gamma_k <= G`` (through ``sigma``) and ``H <=^c G`` (through ``phi``),
capitals are planted on a sparse sub-lattice of the grid, each capital grows a
state, states are joined by freeways, and the clouds (the ``phi`` preimages)
are absorbed one by one by the expand / clash / annex procedures until the
states partition ``V(G)``. Contracting the states then gives the extended grid
on the capital lattice, which is in turn a contraction of ``H``.

Capital keys: interior anchor ``(i, j)``, ``1 <= i, j <= k'``, has key
``(i - 1) * k' + (j - 1)``; the outer capital has key ``k' * k'``. With these
keys the capital graph is literally ``gen_gamma_hat(k')``.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .contraction import (ContractionWitness, contraction_compose, grid_shrink_witness,
                          verify_contraction)
from .errors import InputError, InvariantError, Verdict
from .graph import diameter, is_connected, shortest_path
from .grids import apex_id, apex_merge_map, gamma_side, gen_gamma, gen_gamma_hat, vertex_id


def transfer_side(k, c):
    """Side of the grid guaranteed in H: floor((k - 1) / (2c + 1)) - 1."""
    return (k - 1) // (2 * c + 1) - 1


def required_side(k_prime, c):
    return 1 + (2 * c + 1) * (k_prime + 1)


class Tag(str, Enum):
    INSIDE = "inside"
    EXPANDABLE = "expandable"
    CLASHING = "clashing"
    ANNEXABLE = "annexable"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class CloudClass:
    tag: Tag
    state: int = None      # expandable: shadowed state; annexable: absorbing state
    freeway: tuple = None  # clashing: key of the freeway met
    freeways: int = 0
    coverage: int = 0


class StateConfiguration:
    """States, capitals, freeways and clouds over one host graph.

    Values are never mutated after construction; :func:`step` builds a new one.
    """

    def __init__(self, host, lam, capitals, states, freeways, clouds, c, k_prime,
                 cloud_diameters=None, owner=None):
        self.host = host
        self.lam = lam
        self.capitals = capitals
        self.states = states
        self.freeways = freeways
        self.clouds = clouds
        self.c = c
        self.k_prime = k_prime
        self.cloud_diameters = cloud_diameters
        if owner is None:
            owner = {}
            for q, x in states.items():
                for v in x:
                    owner.setdefault(v, q)
        self.owner = owner
        self.indep = frozenset(v for v in host.vertices if v not in owner)
        self._cloud_of = None
        self._freeway_at = None

    @property
    def cloud_of(self):
        if self._cloud_of is None:
            self._cloud_of = {v: i for i, cl in enumerate(self.clouds) for v in cl}
        return self._cloud_of

    @property
    def freeway_at(self):
        """Vertex -> keys of the freeways through it."""
        if self._freeway_at is None:
            at = {}
            for key, path in self.freeways.items():
                for v in path:
                    at.setdefault(v, []).append(key)
            self._freeway_at = at
        return self._freeway_at

    def is_complete(self):
        return not self.indep

    def shadowed(self, cloud):
        return {self.owner[v] for v in cloud if v in self.owner}

    def in_front(self, cloud):
        owners = {self.owner.get(v) for v in cloud}
        return len(owners) != 1 or None in owners

    def front(self):
        return [i for i, cl in enumerate(self.clouds) if self.in_front(cl)]

    def coverage(self, cloud):
        return len(self.shadowed(cloud))

    def cost(self):
        return sum(self.coverage(self.clouds[i]) for i in self.front())

    def freeways_met(self, cloud):
        at = self.freeway_at
        keys = set()
        for v in cloud:
            keys.update(at.get(v, ()))
        return keys

    def copy_with(self, states, freeways, owner):
        s = StateConfiguration(self.host, self.lam, self.capitals, states, freeways,
                               self.clouds, self.c, self.k_prime, self.cloud_diameters, owner)
        s._cloud_of = self._cloud_of
        if freeways is self.freeways:
            s._freeway_at = self._freeway_at
        return s


# ---- verification -------------------------------------------------------

def _connected_in(g, members):
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w in members and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(members)


def verify_state_configuration(s):
    """Check the configuration conditions and normality w.r.t. the clouds."""
    g = s.host
    keys = set(s.lam.vertices)
    if set(s.capitals) != keys or set(s.states) != keys:
        return Verdict.violation("cond2-bijection", "capitals, states and capital graph "
                                 "disagree on their keys")
    seen = {}
    for q in sorted(keys):
        x = s.states[q]
        if not x:
            return Verdict.violation("cond1-empty", f"state {q} is empty", state=q)
        for v in x:
            if v in seen:
                return Verdict.violation("cond1-overlap", f"vertex {v} lies in states "
                                         f"{seen[v]} and {q}", vertex=v)
            seen[v] = q
        if not _connected_in(g, x):
            return Verdict.violation("cond1-disconnected", f"state {q} is not connected",
                                     state=q)
    for q in sorted(keys):
        w = s.capitals[q]
        if not w or not _connected_in(g, w):
            return Verdict.violation("capital", f"capital {q} is empty or disconnected", state=q)
        if not w <= s.states[q]:
            return Verdict.violation("cond2-capital", f"capital {q} is not inside its state",
                                     state=q)
    lam_edges = set(s.lam.edge_pairs())
    if set(s.freeways) != lam_edges:
        return Verdict.violation("cond4-bijection", "freeways do not match the capital graph "
                                 "edges one to one")
    internal = {}
    for key in sorted(s.freeways):
        path = s.freeways[key]
        if len(path) < 2 or len(set(path)) != len(path):
            return Verdict.violation("cond3-not-path", f"freeway {key} is not a simple path",
                                     freeway=key)
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                return Verdict.violation("cond3-not-path", f"freeway {key} uses the non-edge "
                                         f"({a}, {b})", freeway=key)
        for v in path[1:-1]:
            internal[v] = key
    for key in sorted(s.freeways):
        path = s.freeways[key]
        for v in path:
            other = internal.get(v)
            if other is not None and other != key:
                return Verdict.violation("cond3-internal", f"freeways {key} and {other} share "
                                         f"vertex {v}, internal to {other}", freeway=key)
    for key in sorted(s.freeways):
        path = s.freeways[key]
        a, b = key
        ends = (path[0], path[-1])
        if not ((ends[0] in s.capitals[a] and ends[1] in s.capitals[b])
                or (ends[0] in s.capitals[b] and ends[1] in s.capitals[a])):
            return Verdict.violation("cond4-endpoints", f"freeway {key} does not join its "
                                     "two capitals", freeway=key)
        allowed_states = (a, b)
        for v in path:
            if seen.get(v) not in allowed_states:
                return Verdict.violation("cond4-outside", f"freeway {key} leaves its two "
                                         f"states at vertex {v}", freeway=key, vertex=v)
    covered = sum(len(cl) for cl in s.clouds)
    if covered != len(g) or set().union(*s.clouds) != set(g.vertices):
        return Verdict.violation("clouds-partition", "clouds do not partition the host")
    diams = s.cloud_diameters
    if diams is None:
        diams = [diameter(g, cl) for cl in s.clouds]
    for i, d in enumerate(diams):
        if d > s.c:
            return Verdict.violation("clouds-diameter", f"cloud {i} has diameter {d} > {s.c}",
                                     cloud=i)
    capital_of = {v: q for q, w in s.capitals.items() for v in w}
    at = s.freeway_at
    for i, cl in enumerate(s.clouds):
        caps = {capital_of[v] for v in cl if v in capital_of}
        for q in caps:
            if not cl <= s.states[q]:
                return Verdict.violation("normal-A", f"cloud {i} meets capital {q} but leaves "
                                         "its state", cloud=i, state=q)
        met = set()
        for v in cl:
            met.update(at.get(v, ()))
        if len(met) >= 2:
            shadow = {seen[v] for v in cl if v in seen}
            if len(shadow) > 1:
                return Verdict.violation("normal-B", f"cloud {i} meets {len(met)} freeways "
                                         f"and shadows {len(shadow)} states", cloud=i)
    return Verdict.success()


# ---- initial configuration ----------------------------------------------

def _ball(grid, sources, radius):
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if dist[u] == radius:
            continue
        for w in grid.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return set(dist)


def _monotone_path(g, layer_of, length):
    """Shortest path from layer 0 to layer ``length`` never stepping back a layer."""
    parent = {}
    queue = deque()
    for v in sorted(v for v, t in layer_of.items() if t == 0):
        parent[v] = None
        queue.append(v)
    while queue:
        u = queue.popleft()
        if layer_of[u] == length:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        tu = layer_of[u]
        for w in g.neighbors(u):
            tw = layer_of.get(w)
            if tw is None or w in parent or tw not in (tu, tu + 1):
                continue
            parent[w] = u
            queue.append(w)
    return None


def _lattice_path(i, j, di, dj, step, side):
    return [vertex_id((i * step) + t * di, (j * step) + t * dj, side) for t in range(step + 1)]


def init_configuration(g, sigma, phi, k_prime):
    """Initial configuration from ``sigma: Gamma_k <= g`` and ``phi: H <=^c g``."""
    if phi.kind.name != "diameter":
        raise InputError("phi must be a diameter-bounded witness", "bad-kind")
    c = phi.kind.bound
    if k_prime < 3:
        raise InputError(f"target side k' = {k_prime} < 3", "degenerate")
    k_star = required_side(k_prime, c)
    k = gamma_side(sigma.target)
    if k is None:
        raise InputError("sigma must target a triangulated grid", "bad-target")
    if k_star > k:
        raise InputError(f"need Gamma_{k_star} but sigma only provides Gamma_{k}", "grid-too-small")
    if sigma.source is not g and not sigma.source.same_as(g):
        raise InputError("sigma does not start at the host graph", "bad-source")
    if phi.source is not g and not phi.source.same_as(g):
        raise InputError("phi does not start at the host graph", "bad-source")
    for name, w in (("sigma", sigma), ("phi", phi)):
        verdict = verify_contraction(w)
        if not verdict:
            raise InputError(f"{name} does not verify: {verdict.detail}", "bad-witness")
    if not is_connected(g):
        raise InputError("host graph is disconnected", "disconnected")
    if k_star < k:
        sigma = contraction_compose(sigma, grid_shrink_witness(k, k_star))
    grid = gen_gamma(k_star)
    step = 2 * c + 1
    kp = k_prime
    out_key = apex_id(kp)

    def key(i, j):
        return (i - 1) * kp + (j - 1)

    def anchor(i, j):
        return vertex_id(i * step, j * step, k_star)

    ring = [(i, j) for i in range(kp + 2) for j in range(kp + 2)
            if i in (0, kp + 1) or j in (0, kp + 1)]
    ring_anchors = {anchor(i, j) for i, j in ring}
    pre = {}
    for v, x in sigma.sigma.items():
        pre.setdefault(x, []).append(v)

    def preimage(vs):
        return frozenset(v for x in vs for v in pre[x])

    capitals, states = {}, {}
    for i in range(1, kp + 1):
        for j in range(1, kp + 1):
            b = anchor(i, j)
            capitals[key(i, j)] = preimage([b])
            states[key(i, j)] = preimage(_ball(grid, [b], c))
    capitals[out_key] = preimage(ring_anchors)
    states[out_key] = preimage(_ball(grid, sorted(ring_anchors), c))

    lam = gen_gamma_hat(kp)
    dist_ring = None
    freeways = {}
    for (a, b) in lam.edge_pairs():
        if b == out_key:
            i, j = divmod(a, kp)
            i, j = i + 1, j + 1
            if dist_ring is None:
                dist_ring = _ball(grid, sorted(ring_anchors), step - 1)
            candidates = []
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)):
                ti, tj = i + di, j + dj
                if (ti, tj) in ring and 0 <= ti <= kp + 1 and 0 <= tj <= kp + 1:
                    candidates.append(_lattice_path(i, j, di, dj, step, k_star))
            # the straight segments are shortest iff the anchor is >= step away from the ring
            if not candidates or anchor(i, j) in dist_ring:
                raise InvariantError(f"no shortest ring path from anchor {(i, j)}")
            z = min(candidates)
        else:
            (ia, ja), (ib, jb) = divmod(a, kp), divmod(b, kp)
            z = _lattice_path(ia + 1, ja + 1, ib - ia, jb - ja, step, k_star)
        for u, w in zip(z, z[1:]):
            if not grid.has_edge(u, w):
                raise InvariantError(f"anchor path for {(a, b)} is not a grid path")
        layer_of = {}
        for t, x in enumerate(z):
            for v in pre[x]:
                layer_of[v] = t
        path = _monotone_path(g, layer_of, step)
        if path is None:
            raise InvariantError(f"no freeway inside the preimage of the anchor path {(a, b)}")
        freeways[(a, b)] = tuple(path)

    clouds = tuple(sorted((frozenset(bl) for bl in phi.blocks().values()), key=min))
    diams = tuple(diameter(g, cl) for cl in clouds)
    s = StateConfiguration(g, lam, capitals, states, freeways, clouds, c, kp, diams)
    verdict = verify_state_configuration(s)
    if not verdict:
        raise InvariantError(f"initial configuration invalid: {verdict.detail}",
                             {"code": verdict.code, **verdict.data})
    return s


# ---- procedures ---------------------------------------------------------

def _touching_states(s, cloud):
    hit = set()
    for v in cloud:
        for w in s.host.neighbors(v):
            q = s.owner.get(w)
            if q is not None:
                hit.add(q)
    return hit


def classify_cloud(s, cloud):
    cloud = frozenset(cloud)
    if not s.in_front(cloud):
        raise InputError("cloud lies inside a state, it is not in the front", "not-in-front")
    shadow = s.shadowed(cloud)
    met = s.freeways_met(cloud)
    cov = len(shadow)
    if len(met) >= 2:
        if len(shadow) != 1:
            raise InvariantError(f"cloud meets {len(met)} freeways but shadows {len(shadow)} states")
        return CloudClass(Tag.EXPANDABLE, state=next(iter(shadow)), freeways=len(met), coverage=cov)
    if len(met) == 1:
        return CloudClass(Tag.CLASHING, freeway=next(iter(met)), freeways=1, coverage=cov)
    near = _touching_states(s, cloud) | shadow
    if not near:
        return CloudClass(Tag.ISOLATED, coverage=0)
    return CloudClass(Tag.ANNEXABLE, state=_annex_target(s, near, shadow), coverage=cov)


def _annex_target(s, near, shadow):
    """Lowest-key touched state linked to every other touched state, if any.

    Absorbing the cloud elsewhere would make two unlinked states adjacent.
    """
    lam = s.lam
    pool = shadow or near
    safe = [t for t in sorted(pool)
            if all(r == t or lam.has_edge(t, r) for r in near)]
    if safe:
        return safe[0]
    return min(shadow) if shadow else min(near)


def _absorb(s, cloud, winner):
    """States after ``winner`` takes ``cloud`` and every other state is trimmed."""
    g = s.host
    states = dict(s.states)
    owner = dict(s.owner)
    for q in s.shadowed(cloud) - {winner}:
        rest = s.states[q] - cloud
        keep = set()
        stack = [v for v in s.capitals[q]]
        keep.update(stack)
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w in rest and w not in keep:
                    keep.add(w)
                    stack.append(w)
        for v in s.states[q] - keep:
            del owner[v]
        states[q] = frozenset(keep)
    states[winner] = s.states[winner] | cloud
    for v in cloud:
        owner[v] = winner
    return states, owner


def step(s, cloud, check=True):
    """Apply the procedure selected by :func:`classify_cloud` to ``cloud``."""
    cloud = frozenset(cloud)
    cls = classify_cloud(s, cloud)
    if cls.tag is Tag.ISOLATED:
        raise InputError("cloud touches no state; no procedure applies", "isolated")
    freeways = s.freeways
    if cls.tag is Tag.EXPANDABLE:
        x = cls.state
        states = dict(s.states)
        states[x] = s.states[x] | cloud
        owner = dict(s.owner)
        for v in cloud:
            owner[v] = x
    elif cls.tag is Tag.ANNEXABLE:
        states, owner = _absorb(s, cloud, cls.state)
    else:
        key = cls.freeway
        path = s.freeways[key]
        hits = [i for i, v in enumerate(path) if v in cloud]
        first, last = hits[0], hits[-1]
        a, b = key
        on_a = any(s.owner[path[i]] == a for i in hits)
        on_b = any(s.owner[path[i]] == b for i in hits)
        if on_a and on_b:
            winner = a if first <= len(path) - 1 - last else b
        else:
            winner = a if on_a else b
        bridge = shortest_path(s.host, [path[first]], [path[last]], within=cloud)
        new_path = path[:first] + tuple(bridge) + path[last + 1:]
        freeways = dict(s.freeways)
        freeways[key] = new_path
        states, owner = _absorb(s, cloud, winner)
    out = s.copy_with(states, freeways, owner)
    if check:
        verdict = verify_state_configuration(out)
        if not verdict:
            raise InvariantError(f"{cls.tag.value} produced an invalid configuration: "
                                 f"{verdict.detail}", {"code": verdict.code, **verdict.data})
    return out


@dataclass
class StepRecord:
    index: int
    phase: int
    action: str
    cloud: int
    coverage: int
    cost_before: int
    cost_after: int
    indep_before: int
    indep_after: int


@dataclass
class ConquestLog:
    records: list = field(default_factory=list)
    initial_cost: int = 0

    def violations(self):
        """Measure breaches: cost increase, or no strict progress where it is owed."""
        bad = []
        for r in self.records:
            if r.cost_after > r.cost_before:
                bad.append((r.index, "cost-increased"))
            if r.coverage >= 1 and not r.cost_after < r.cost_before:
                bad.append((r.index, "cost-not-decreasing"))
            if r.coverage == 0 and not r.indep_after < r.indep_before:
                bad.append((r.index, "indep-not-decreasing"))
        return bad


def _front_stats(s):
    """(front cloud indices with coverage, cost) in one pass."""
    owner = s.owner
    stats = []
    cost = 0
    for i, cl in enumerate(s.clouds):
        owners = set()
        free = False
        for v in cl:
            q = owner.get(v)
            if q is None:
                free = True
            else:
                owners.add(q)
        if free or len(owners) > 1:
            stats.append((i, len(owners)))
            cost += len(owners)
    return stats, cost


def run_conquest(s, log=None, on_step=None, check=True):
    """Drive the configuration to a complete one (two phases)."""
    verdict = verify_state_configuration(s)
    if not verdict:
        raise InputError(f"configuration does not verify: {verdict.detail}", "bad-configuration")
    if log is None:
        log = ConquestLog()
    stats, cost = _front_stats(s)
    log.initial_cost = cost
    index = 0
    phase = 1
    while True:
        if phase == 1:
            pick = next((i for i, cov in stats if cov >= 1), None)
            if pick is None:
                phase = 2
                continue
        else:
            if not s.indep:
                break
            pick = next((i for i, _ in stats if _touching_states(s, s.clouds[i])), None)
            if pick is None:
                raise InvariantError("independent vertices remain but no cloud touches a state",
                                     {"indep": len(s.indep)})
        cloud = s.clouds[pick]
        cls = classify_cloud(s, cloud)
        indep_before = len(s.indep)
        s = step(s, cloud, check=check)
        stats, new_cost = _front_stats(s)
        rec = StepRecord(index, phase, cls.tag.value, pick, cls.coverage, cost, new_cost,
                         indep_before, len(s.indep))
        log.records.append(rec)
        if check:
            breach = ConquestLog([rec]).violations()
            if breach:
                raise InvariantError(f"step {index} breaks the progress measure: {breach[0][1]}",
                                     {"record": rec})
        if on_step is not None:
            on_step(s, rec)
        cost = new_cost
        index += 1
    if stats:
        raise InvariantError("configuration complete but the front is not empty")
    return s


def finalize(s, phi):
    """Turn a complete configuration into a witness ``Gamma_{k'} <= H``."""
    if not s.is_complete():
        raise InputError("configuration is not complete", "incomplete")
    h = phi.target
    tau = {}
    for x, block in phi.blocks().items():
        owners = {s.owner[v] for v in block}
        if len(owners) != 1:
            raise InputError(f"cloud of {x} is split over states {sorted(owners)}", "front-not-empty")
        tau[x] = owners.pop()
    to_hat = ContractionWitness(h, s.lam, tau)
    verdict = verify_contraction(to_hat)
    if not verdict:
        raise InvariantError(f"contracting the states does not give the extended grid: "
                             f"{verdict.detail}", {"code": verdict.code, **verdict.data})
    kp = s.k_prime
    merge = ContractionWitness(s.lam, gen_gamma(kp), apex_merge_map(kp))
    out = contraction_compose(to_hat, merge)
    verdict = verify_contraction(out)
    if not verdict:
        raise InvariantError(f"final witness does not verify: {verdict.detail}")
    return out


@dataclass
class TransferResult:
    status: str          # "ok" or "degenerate"
    k: int
    c: int
    k_prime: int
    witness: ContractionWitness = None
    log: ConquestLog = None
    configuration: StateConfiguration = None

    @property
    def degenerate(self):
        return self.status == "degenerate"


def transfer(g, sigma, phi, on_step=None, check=True):
    """Witness ``Gamma_{k'} <= H`` from ``sigma: Gamma_k <= g`` and ``phi: H <=^c g``."""
    if phi.kind.name != "diameter":
        raise InputError("phi must be a diameter-bounded witness", "bad-kind")
    k = gamma_side(sigma.target)
    if k is None:
        raise InputError("sigma must target a triangulated grid", "bad-target")
    c = phi.kind.bound
    kp = transfer_side(k, c)
    if kp < 3:
        for name, w in (("sigma", sigma), ("phi", phi)):
            verdict = verify_contraction(w)
            if not verdict:
                raise InputError(f"{name} does not verify: {verdict.detail}", "bad-witness")
        if not is_connected(g):
            raise InputError("host graph is disconnected", "disconnected")
        return TransferResult("degenerate", k, c, kp)
    s = init_configuration(g, sigma, phi, kp)
    log = ConquestLog()
    s = run_conquest(s, log, on_step, check)
    w = finalize(s, phi)
    return TransferResult("ok", k, c, kp, w, log, s)
