"""Graphs with boundary: data model, structural queries, and file I/O.

The universal input object is :class:`GraphWithBoundary`, a simple
undirected graph on vertices ``0..n-1`` together with a non-empty boundary
vertex set.  Everything here is immutable after construction and all
operations are pure.
"""

import json
from collections import deque
from dataclasses import dataclass

import networkx as nx

__all__ = [
    "GraphWithBoundary",
    "ValidationReport",
    "BlockDecomposition",
    "PlanarityResult",
    "validate",
    "connected_components",
    "is_connected",
    "bfs_distances",
    "diameter",
    "blocks",
    "is_block_graph",
    "is_planar",
    "trace_faces",
    "canonical_json",
    "parse_graph_json",
    "canonical_edgelist",
    "parse_graph_edgelist",
    "load_graph",
]


class GraphWithBoundary:
    """Simple undirected graph with a designated boundary vertex set.

    Vertices are dense integers ``0..n-1``.  Edges are stored as sorted
    pairs in lexicographic order; the boundary is a sorted tuple.  Self
    loops and duplicate edges are rejected.
    """

    __slots__ = ("n", "edges", "boundary", "_adj")

    def __init__(self, n, edges, boundary):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        bset = set(boundary)
        if not bset:
            raise ValueError("boundary must be non-empty")
        for v in bset:
            if not (0 <= v < n):
                raise ValueError(f"boundary vertex {v} out of range")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "boundary", tuple(sorted(bset)))
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    def __setattr__(self, name, value):
        raise AttributeError("GraphWithBoundary is immutable")

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max(len(a) for a in self._adj)

    @property
    def interior(self) -> tuple:
        bset = set(self.boundary)
        return tuple(v for v in range(self.n) if v not in bset)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def __eq__(self, other):
        if not isinstance(other, GraphWithBoundary):
            return NotImplemented
        return (self.n, self.edges, self.boundary) == (other.n, other.edges, other.boundary)

    def __hash__(self):
        return hash((self.n, self.edges, self.boundary))

    def __repr__(self):
        return f"GraphWithBoundary(n={self.n}, edges={len(self.edges)}, boundary={self.boundary})"


@dataclass(frozen=True)
class ValidationReport:
    simple: bool
    connected: bool
    boundary_all_leaves: bool


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks (maximal 2-connected subgraphs), cut vertices, block-cut tree.

    ``block_cut_tree`` is the bipartite tree as (block_index, cut_vertex)
    incidence pairs.
    """

    blocks: tuple
    cut_vertices: tuple
    block_cut_tree: tuple

    @property
    def max_block_size(self) -> int:
        return max((len(b) for b in self.blocks), default=1)


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    # clockwise neighbor order per vertex when planar
    rotation: dict | None
    # edges of a K5/K33-subdivision witness when not planar
    witness: tuple | None


def validate(g: GraphWithBoundary) -> ValidationReport:
    """Report-only structural checks; never raises, never mutates."""
    # simplicity is enforced at construction, so it always holds here
    leaves_ok = all(g.degree(v) == 1 for v in g.boundary)
    return ValidationReport(simple=True, connected=is_connected(g), boundary_all_leaves=leaves_ok)


def connected_components(g: GraphWithBoundary) -> list:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = []
        queue = deque([s])
        seen[s] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: GraphWithBoundary) -> bool:
    return len(connected_components(g)) == 1


def bfs_distances(g: GraphWithBoundary, source: int) -> list:
    """Unweighted shortest-path distances from ``source`` (-1 if unreachable)."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: GraphWithBoundary) -> int:
    best = 0
    for s in range(g.n):
        dist = bfs_distances(g, s)
        m = max(dist)
        if min(dist) < 0:
            raise ValueError("infinite diameter: graph is disconnected")
        best = max(best, m)
    return best


def blocks(g: GraphWithBoundary) -> BlockDecomposition:
    """Block decomposition via the DFS lowpoint algorithm (networkx).

    Blocks are sorted by smallest contained vertex, then lexicographically,
    so the decomposition is deterministic.
    """
    if not is_connected(g):
        raise ValueError("block decomposition requires a connected graph")
    G = g.to_networkx()
    comps = [tuple(sorted(c)) for c in nx.biconnected_components(G)]
    comps.sort()
    cuts = tuple(sorted(nx.articulation_points(G)))
    cutset = set(cuts)
    tree = tuple(
        (i, v) for i, comp in enumerate(comps) for v in comp if v in cutset
    )
    return BlockDecomposition(blocks=tuple(comps), cut_vertices=cuts, block_cut_tree=tree)


def is_block_graph(g: GraphWithBoundary):
    """True iff every block induces a complete graph; returns (flag, B).

    B is the maximum block size (1 for a single-vertex graph).
    """
    decomp = blocks(g)
    for comp in decomp.blocks:
        k = len(comp)
        need = k * (k - 1) // 2
        have = sum(1 for i, u in enumerate(comp) for v in comp[i + 1:] if g.has_edge(u, v))
        if have != need:
            return False, decomp.max_block_size
    return True, decomp.max_block_size


def is_planar(g: GraphWithBoundary) -> PlanarityResult:
    """Left-right planarity test with embedding or Kuratowski witness."""
    G = g.to_networkx()
    ok, cert = nx.check_planarity(G, counterexample=True)
    if ok:
        # re-run without counterexample to obtain the embedding object
        _, embedding = nx.check_planarity(G)
        data = embedding.get_data()
        rotation = {v: tuple(data.get(v, ())) for v in range(g.n)}
        return PlanarityResult(planar=True, rotation=rotation, witness=None)
    witness = tuple(sorted((min(u, v), max(u, v)) for u, v in cert.edges()))
    return PlanarityResult(planar=False, rotation=None, witness=witness)


def trace_faces(rotation: dict) -> list:
    """Face walks of a combinatorial embedding.

    ``rotation`` maps each vertex to its neighbors in clockwise order.  The
    walk for each face follows half-edges with the next-edge rule
    ``next(u->v) = (v, cw-successor of u around v)``; every half-edge lies
    on exactly one face, and V - E + F = 2 for connected planar graphs.
    """
    index = {
        v: {w: i for i, w in enumerate(nbrs)} for v, nbrs in rotation.items()
    }
    remaining = {(u, v) for u, nbrs in rotation.items() for v in nbrs}
    faces = []
    while remaining:
        start = min(remaining)
        walk = []
        edge = start
        while True:
            remaining.discard(edge)
            u, v = edge
            walk.append(u)
            nbrs = rotation[v]
            i = index[v][u]
            edge = (v, nbrs[(i + 1) % len(nbrs)])
            if edge == start:
                break
        faces.append(tuple(walk))
    return faces


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def canonical_json(g: GraphWithBoundary) -> str:
    """Canonical JSON serialization (byte-stable round trip)."""
    obj = {
        "n": g.n,
        "edges": [[u, v] for u, v in g.edges],
        "boundary": list(g.boundary),
    }
    return json.dumps(obj) + "\n"


def parse_graph_json(text: str) -> GraphWithBoundary:
    obj = json.loads(text)
    try:
        n = obj["n"]
        edges = [tuple(e) for e in obj["edges"]]
        boundary = obj["boundary"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise ValueError("malformed graph JSON: edges must be pairs")
    return GraphWithBoundary(n, edges, boundary)


def canonical_edgelist(g: GraphWithBoundary) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    lines.append("boundary " + " ".join(str(v) for v in g.boundary))
    return "\n".join(lines) + "\n"


def parse_graph_edgelist(text: str) -> GraphWithBoundary:
    n = None
    edges = []
    boundary = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            n = int(parts[1])
        elif parts[0] == "boundary":
            boundary = [int(x) for x in parts[1:]]
        else:
            if len(parts) != 2:
                raise ValueError(f"malformed edge line: {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if n is None or boundary is None:
        raise ValueError("edge list needs an 'n' line and a 'boundary' line")
    return GraphWithBoundary(n, edges, boundary)


def load_graph(path: str) -> GraphWithBoundary:
    """Load a graph file, sniffing JSON vs plain edge list."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph_edgelist(text)
