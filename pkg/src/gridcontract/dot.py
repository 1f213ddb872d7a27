"""Graphviz DOT text for graphs, witnesses, decompositions and conquest snapshots."""

PALETTE = ("#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6",
           "#bcf60c", "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000",
           "#aaffc3", "#808000", "#ffd8b1", "#000075", "#808080")


def _quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _colour(i):
    return PALETTE[i % len(PALETTE)]


def _node(v, label=None, attrs=()):
    parts = [f"label={_quote(v if label is None else label)}"] + list(attrs)
    return f"  {v} [{', '.join(parts)}];"


def _edge(u, v, mult=1, attrs=()):
    parts = list(attrs)
    if mult > 1:
        parts.insert(0, f"label={mult}")
    tail = f" [{', '.join(parts)}]" if parts else ""
    return f"  {u} -- {v}{tail};"


def graph_to_dot(g, name="G"):
    """Plain rendering; multi-edges carry their multiplicity as label."""
    lines = [f"graph {_quote(name)} {{"]
    lines += [_node(v, g.label(v)) for v in g.vertices]
    lines += [_edge(u, v, m) for (u, v), m in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def witness_to_dot(w, name="witness"):
    """Source graph coloured by target vertex; edges inside a block are bold."""
    g = w.source
    order = {x: i for i, x in enumerate(w.target.vertices)}
    lines = [f"graph {_quote(name)} {{", "  node [style=filled];"]
    for v in g.vertices:
        x = w.sigma[v]
        lines.append(_node(v, f"{v}->{x}", [f"fillcolor={_quote(_colour(order[x]))}"]))
    for (u, v), m in g.edges():
        inside = w.sigma[u] == w.sigma[v]
        lines.append(_edge(u, v, m, ["style=bold"] if inside else ["color=gray"]))
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_dot(d, name="decomposition"):
    lines = [f"graph {_quote(name)} {{", "  node [shape=box];"]
    for t in d.tree.vertices:
        lines.append(_node(t, "{" + ", ".join(map(str, sorted(d.bags[t]))) + "}"))
    lines += [_edge(a, b) for (a, b), _ in d.tree.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def configuration_to_dot(s, name="conquest"):
    """States filled by colour, freeways bold, multi-vertex clouds as dashed clusters.

    Independent vertices are left white; capital vertices are drawn as double circles.
    """
    g = s.host
    keys = sorted(s.lam.vertices)
    index = {q: i for i, q in enumerate(keys)}
    capital = {v for w in s.capitals.values() for v in w}
    on_freeway = set()
    for path in s.freeways.values():
        on_freeway.update(zip(path, path[1:]))
        on_freeway.update(zip(path[1:], path))
    lines = [f"graph {_quote(name)} {{", "  node [style=filled, fillcolor=white];"]
    clustered = set()
    for i, cloud in enumerate(s.clouds):
        if len(cloud) < 2:
            continue
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append("    style=dashed;")
        for v in sorted(cloud):
            lines.append("  " + _vertex_line(s, v, index, capital))
            clustered.add(v)
        lines.append("  }")
    for v in g.vertices:
        if v not in clustered:
            lines.append(_vertex_line(s, v, index, capital))
    for (u, v), m in g.edges():
        attrs = ["style=bold", "penwidth=3"] if (u, v) in on_freeway else []
        lines.append(_edge(u, v, m, attrs))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _vertex_line(s, v, index, capital):
    q = s.owner.get(v)
    attrs = []
    if q is not None:
        attrs.append(f"fillcolor={_quote(_colour(index[q]))}")
    if v in capital:
        attrs.append("shape=doublecircle")
    label = f"{v}" if q is None else f"{v}:{q}"
    return _node(v, label, attrs)
