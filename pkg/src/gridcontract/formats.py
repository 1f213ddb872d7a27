"""Line-oriented text formats for graphs, witnesses, decompositions and set families.

graph:    ``graph <n> <m>`` / ``v <id> [label]`` / ``e <u> <v> <mult>``
witness:  ``witness <kind> <param>`` / ``m <source vertex> <target vertex>``
td:       ``td <nodes> <width>`` / ``b <node> <v1> ...`` / ``t <node1> <node2>``
family:   ``family <n>`` / ``s <idx> <v1> ...``

Blank lines and lines starting with ``#`` are ignored.
"""

from pathlib import Path

from .contraction import UNBOUNDED, ContractionWitness, Kind
from .errors import InputError
from .graph import Multigraph
from .treewidth import TreeDecomposition


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}",
                         "parse-error") from None


def _header(lines, word, arity):
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise InputError(f"empty input, expected a {word!r} header", "parse-error") from None
    parts = line.split()
    if parts[0] != word or len(parts) != arity + 1:
        raise InputError(f"line {lineno}: expected '{word}' header with {arity} fields",
                         "parse-error")
    return parts[1:]


# ---- graphs -------------------------------------------------------------

def format_graph(g):
    out = [f"graph {len(g)} {g.num_edges}"]
    for v in g.vertices:
        label = g.label(v)
        out.append(f"v {v}" if label is None else f"v {v} {label}")
    for (u, v), m in g.edges():
        out.append(f"e {u} {v} {m}")
    return "\n".join(out) + "\n"


def parse_graph(text):
    lines = _lines(text)
    n, m = _ints(_header(lines, "graph", 2), 1)
    verts, labels, edges, seen = [], {}, [], set()
    for lineno, line in lines:
        parts = line.split(maxsplit=2)
        tag = parts[0]
        if tag == "v":
            if len(parts) < 2:
                raise InputError(f"line {lineno}: vertex line needs an id", "parse-error")
            (v,) = _ints(parts[1:2], lineno)
            verts.append(v)
            if len(parts) == 3:
                labels[v] = parts[2]
        elif tag == "e":
            fields = line.split()
            if len(fields) != 4:
                raise InputError(f"line {lineno}: edge line is 'e <u> <v> <mult>'", "parse-error")
            u, v, mult = _ints(fields[1:], lineno)
            pair = (min(u, v), max(u, v))
            if pair in seen:
                raise InputError(f"line {lineno}: duplicate edge line for {pair}",
                                 "duplicate-edge")
            seen.add(pair)
            edges.append((u, v, mult))
        else:
            raise InputError(f"line {lineno}: unknown record {tag!r}", "parse-error")
    if len(verts) != n or len(edges) != m:
        raise InputError(f"header announces {n} vertices / {m} edges, found "
                         f"{len(verts)} / {len(edges)}", "count-mismatch")
    return Multigraph(verts, edges, labels)


# ---- witnesses ----------------------------------------------------------

def format_witness(w):
    param = "-" if w.kind.name == "unbounded" else str(w.kind.bound)
    out = [f"witness {w.kind.name} {param}"]
    for v in w.source.vertices:
        out.append(f"m {v} {w.sigma[v]}")
    return "\n".join(out) + "\n"


def parse_witness_mapping(text):
    """Return ``(kind, sigma)``; graphs are supplied separately."""
    lines = _lines(text)
    name, param = _header(lines, "witness", 2)
    if name == "unbounded":
        kind = UNBOUNDED
    else:
        (bound,) = _ints([param], 1)
        kind = Kind(name, bound)
    sigma = {}
    for lineno, line in lines:
        parts = line.split()
        if parts[0] != "m" or len(parts) != 3:
            raise InputError(f"line {lineno}: expected 'm <source> <target>'", "parse-error")
        v, x = _ints(parts[1:], lineno)
        if v in sigma:
            raise InputError(f"line {lineno}: vertex {v} mapped twice", "duplicate-mapping")
        sigma[v] = x
    return kind, sigma


def parse_witness(text, source, target):
    kind, sigma = parse_witness_mapping(text)
    return ContractionWitness(source, target, sigma, kind)


# ---- tree decompositions ------------------------------------------------

def format_decomposition(d):
    out = [f"td {len(d.tree)} {d.width}"]
    for t in d.tree.vertices:
        out.append(" ".join(["b", str(t)] + [str(v) for v in sorted(d.bags[t])]))
    for (a, b), _ in d.tree.edges():
        out.append(f"t {a} {b}")
    return "\n".join(out) + "\n"


def parse_decomposition(text):
    lines = _lines(text)
    nodes, _width = _ints(_header(lines, "td", 2), 1)
    bags, edges = {}, []
    for lineno, line in lines:
        parts = line.split()
        if parts[0] == "b" and len(parts) >= 2:
            vals = _ints(parts[1:], lineno)
            if vals[0] in bags:
                raise InputError(f"line {lineno}: bag {vals[0]} given twice", "parse-error")
            bags[vals[0]] = frozenset(vals[1:])
        elif parts[0] == "t" and len(parts) == 3:
            edges.append(tuple(_ints(parts[1:], lineno)))
        else:
            raise InputError(f"line {lineno}: unknown record {parts[0]!r}", "parse-error")
    if len(bags) != nodes:
        raise InputError(f"header announces {nodes} nodes, found {len(bags)} bags",
                         "count-mismatch")
    return TreeDecomposition(Multigraph(sorted(bags), edges), bags)


# ---- set families -------------------------------------------------------

def format_family(family):
    out = [f"family {len(family)}"]
    for i, s in enumerate(family):
        out.append(" ".join(["s", str(i)] + [str(v) for v in sorted(s)]))
    return "\n".join(out) + "\n"


def parse_family(text):
    lines = _lines(text)
    (n,) = _ints(_header(lines, "family", 1), 1)
    members = {}
    for lineno, line in lines:
        parts = line.split()
        if parts[0] != "s" or len(parts) < 2:
            raise InputError(f"line {lineno}: expected 's <idx> <v1> ...'", "parse-error")
        vals = _ints(parts[1:], lineno)
        if vals[0] in members:
            raise InputError(f"line {lineno}: set {vals[0]} given twice", "parse-error")
        members[vals[0]] = frozenset(vals[1:])
    if sorted(members) != list(range(n)):
        raise InputError(f"family sets must be numbered 0..{n - 1}", "count-mismatch")
    return [members[i] for i in range(n)]


# ---- files --------------------------------------------------------------

def read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", "io-error") from None


def write_text(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")
