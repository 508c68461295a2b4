"""Extremal-tree search and monotonicity checks.

Trees are compared up to isomorphism through a centroid-rooted AHU code.
The default enumeration class is homeomorphically irreducible trees (no
internal vertex of degree two) with a given leaf count and degree cap; the
class with degree-2 vertices allowed is infinite and therefore requires an
explicit vertex cap.  Two independent brute-force counters back the
enumeration: a labeled Prüfer sweep (small sizes) and, for degree cap 3,
an exact skeleton count.
"""

import json
from dataclasses import dataclass
from itertools import product

import networkx as nx
import numpy as np

from .graphs import GraphWithBoundary, connected_components
from .spectra import steklov_spectrum
from .families import FamilyInstance, balanced_tree
from ._rng import SplitMix64

__all__ = [
    "canonical_code",
    "TreeCatalogEntry",
    "enumerate_trees",
    "ArgmaxReport",
    "argmax_lambda2",
    "MonotonicityReport",
    "check_edge_monotonicity",
    "check_subtree_monotonicity",
    "random_subtree",
    "prufer_decode",
    "count_trees_bruteforce",
    "count_cubic_irreducible_trees",
    "catalog_csv",
    "summary_json",
]


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _centroids(adj) -> list:
    n = len(adj)
    if n == 1:
        return [0]
    size = [1] * n
    order = []
    parent = [-1] * n
    stack = [0]
    seen = [False] * n
    seen[0] = True
    while stack:
        u = stack.pop()
        order.append(u)
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                stack.append(w)
    for u in reversed(order):
        if parent[u] >= 0:
            size[parent[u]] += size[u]
    best, cents = None, []
    for u in range(n):
        heaviest = n - size[u]
        for w in adj[u]:
            if w != parent[u]:
                heaviest = max(heaviest, size[w])
        if best is None or heaviest < best:
            best, cents = heaviest, [u]
        elif heaviest == best:
            cents.append(u)
    return cents


def _ahu(adj, root: int) -> str:
    # iterative post-order to stay clear of recursion limits
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    code = {}
    for u in reversed(order):
        children = sorted(code[w] for w in adj[u] if w != parent[u])
        code[u] = "(" + "".join(children) + ")"
    return code[root]


def canonical_code(g) -> str:
    """Isomorphism-invariant code of a tree (centroid-rooted AHU encoding)."""
    if isinstance(g, GraphWithBoundary):
        adj = [list(g.neighbors(v)) for v in range(g.n)]
    else:
        adj = [list(a) for a in g]
    n = len(adj)
    if sum(len(a) for a in adj) != 2 * (n - 1):
        raise ValueError("canonical_code expects a tree")
    return min(_ahu(adj, c) for c in _centroids(adj))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeCatalogEntry:
    tree: GraphWithBoundary
    leaf_count: int
    max_degree: int
    lambda2: float
    canonical_code: str


def _tree_graph_from_nx(T: nx.Graph) -> GraphWithBoundary:
    n = T.number_of_nodes()
    mapping = {v: i for i, v in enumerate(sorted(T.nodes()))}
    edges = [(mapping[u], mapping[v]) for u, v in T.edges()]
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    leaves = [v for v in range(n) if deg[v] == 1]
    return GraphWithBoundary(n, edges, leaves)


def enumerate_trees(leaves: int, max_degree: int, allow_degree2: bool = False,
                    max_vertices: int | None = None) -> list:
    """All trees with the given leaf count and degree cap, one per iso class.

    With ``allow_degree2`` false (default) the class is the finite family of
    homeomorphically irreducible trees: at most leaves-2 internal vertices,
    so at most 2*leaves-2 vertices total.  With it true the family is
    infinite and ``max_vertices`` must bound the search.  Entries come back
    sorted by canonical code.
    """
    if leaves < 2 or max_degree < 2:
        raise ValueError("need leaves >= 2 and max_degree >= 2")
    if allow_degree2:
        if max_vertices is None:
            raise ValueError("infinite family: allow_degree2 requires max_vertices")
        n_range = range(2, max_vertices + 1)
    else:
        n_range = range(2, 2 * leaves - 1)
    entries = {}
    for n in n_range:
        for T in nx.nonisomorphic_trees(n):
            degs = dict(T.degree())
            if sum(1 for d in degs.values() if d == 1) != leaves:
                continue
            if max(degs.values()) > max_degree:
                continue
            if not allow_degree2 and n > 2 and any(d == 2 for d in degs.values()):
                continue
            g = _tree_graph_from_nx(T)
            code = canonical_code(g)
            if code in entries:
                continue
            lam2 = float(steklov_spectrum(g).eigenvalues[1])
            entries[code] = TreeCatalogEntry(
                tree=g,
                leaf_count=leaves,
                max_degree=max(degs.values()),
                lambda2=lam2,
                canonical_code=code,
            )
    return [entries[c] for c in sorted(entries)]


@dataclass(frozen=True)
class ArgmaxReport:
    leaves: int
    degree_cap: int
    entries: tuple
    max_lambda2: float
    maximizers: tuple  # TreeCatalogEntry subset within tolerance of the max
    balanced: FamilyInstance
    balanced_code: str
    balanced_lambda2: float
    balanced_is_maximizer: bool


def argmax_lambda2(leaves: int, degree_cap: int, tol: float = 1e-9) -> ArgmaxReport:
    """Maximizers of lambda2 over the irreducible class, compared with the
    coin-splitting balanced tree.  Reports, never asserts, the comparison.
    """
    entries = enumerate_trees(leaves, degree_cap)
    if not entries:
        raise ValueError(f"no trees with {leaves} leaves and degree <= {degree_cap}")
    best = max(e.lambda2 for e in entries)
    maxi = tuple(e for e in entries if e.lambda2 >= best - tol)
    bal = balanced_tree(leaves, degree_cap)
    bal_code = canonical_code(bal.graph)
    bal_lam = float(steklov_spectrum(bal.graph).eigenvalues[1])
    return ArgmaxReport(
        leaves=leaves,
        degree_cap=degree_cap,
        entries=tuple(entries),
        max_lambda2=best,
        maximizers=maxi,
        balanced=bal,
        balanced_code=bal_code,
        balanced_lambda2=bal_lam,
        balanced_is_maximizer=any(e.canonical_code == bal_code for e in maxi),
    )


# ---------------------------------------------------------------------------
# Prüfer brute-force oracles
# ---------------------------------------------------------------------------

def prufer_decode(seq, n: int) -> list:
    """Edge list of the labeled tree with the given Prüfer sequence."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, w), max(u, w)))
    return edges


def _adj_from_edges(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def count_trees_bruteforce(leaves: int, max_degree: int, irreducible: bool = True) -> int:
    """Count iso classes by sweeping every labeled tree (Prüfer sequences).

    Exact but exponential: intended for leaves <= 5 raw, or leaves == 6
    with max_degree == 3 where the degree constraints prune the sweep.
    """
    if leaves == 2:
        return 1  # the single edge
    codes = set()
    for n in range(leaves + 1, 2 * leaves - 1):
        length = n - 2
        if leaves <= 5:
            seq_iter = product(range(n), repeat=length)
        elif max_degree == 3 and irreducible:
            seq_iter = _prufer_exact_pairs(n, length)
        else:
            raise ValueError("brute force limited to leaves <= 5 (or 6 with D=3)")
        for seq in seq_iter:
            counts = [0] * n
            ok = True
            for v in seq:
                counts[v] += 1
                if counts[v] > max_degree - 1:
                    ok = False
                    break
            if not ok:
                continue
            if sum(1 for c in counts if c == 0) != leaves:
                continue
            if irreducible and any(c == 1 for c in counts):
                continue
            adj = _adj_from_edges(n, prufer_decode(seq, n))
            codes.add(canonical_code(adj))
    return len(codes)


def _prufer_exact_pairs(n, length):
    """Prüfer sequences where every used label appears exactly twice."""
    seq = [0] * length
    counts = [0] * n

    def rec(pos):
        if pos == length:
            if all(c != 1 for c in counts):
                yield tuple(seq)
            return
        for v in range(n):
            if counts[v] >= 2:
                continue
            # a label at count 1 must still be able to reach 2
            deficit = sum(1 for c in counts if c == 1) + (0 if counts[v] == 1 else 1)
            if deficit > length - pos:
                continue
            counts[v] += 1
            seq[pos] = v
            yield from rec(pos + 1)
            counts[v] -= 1

    yield from rec(0)


def count_cubic_irreducible_trees(leaves: int) -> int:
    """Irreducible trees with the given leaf count and degree cap 3.

    Every internal vertex has degree exactly 3, so stripping the leaves is a
    bijection onto trees on leaves-2 vertices with maximum degree <= 3
    (conversely, attach 3-deg(v) leaves to each skeleton vertex).  Skeletons
    are counted by a full Prüfer sweep, which stays tiny.
    """
    if leaves < 2:
        raise ValueError("need leaves >= 2")
    if leaves == 2:
        return 1
    m = leaves - 2
    if m == 1:
        return 1
    if m == 2:
        return 1
    codes = set()
    for seq in product(range(m), repeat=m - 2):
        counts = [0] * m
        ok = True
        for v in seq:
            counts[v] += 1
            if counts[v] > 2:  # skeleton degree = count + 1 <= 3
                ok = False
                break
        if not ok:
            continue
        adj = _adj_from_edges(m, prufer_decode(seq, m))
        codes.add(canonical_code(adj))
    return len(codes)


# ---------------------------------------------------------------------------
# monotonicity checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotonicityReport:
    skipped: bool
    ok: bool
    eigenvalues_before: np.ndarray | None
    eigenvalues_after: np.ndarray | None
    max_violation: float
    reason: str = ""


def check_edge_monotonicity(g: GraphWithBoundary, edge, tol: float = 1e-9) -> MonotonicityReport:
    """All Steklov eigenvalues are non-increasing under interior-edge removal."""
    u, v = min(edge), max(edge)
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    bset = set(g.boundary)
    if u in bset or v in bset:
        raise ValueError(f"({u},{v}) is not an interior edge")
    kept = [e for e in g.edges if e != (u, v)]
    h = GraphWithBoundary(g.n, kept, g.boundary)
    if len(connected_components(h)) > 1:
        return MonotonicityReport(True, True, None, None, 0.0, "removal disconnects")
    lam_g = steklov_spectrum(g).eigenvalues
    lam_h = steklov_spectrum(h).eigenvalues
    viol = float(np.max(lam_h - lam_g))
    return MonotonicityReport(False, viol <= tol, lam_g, lam_h, viol)


def check_subtree_monotonicity(t: GraphWithBoundary, sub_vertices, tol: float = 1e-9) -> MonotonicityReport:
    """lambda_k(T) <= lambda_k(T') for a subtree T' with its leaves as boundary."""
    if len(t.edges) != t.n - 1:
        raise ValueError("first argument must be a tree")
    sub = sorted(set(sub_vertices))
    if len(sub) < 2:
        raise ValueError("subtree must be nontrivial (>= 2 vertices)")
    index = {v: i for i, v in enumerate(sub)}
    sub_set = set(sub)
    edges = [(index[u], index[v]) for u, v in t.edges if u in sub_set and v in sub_set]
    if len(edges) != len(sub) - 1:
        raise ValueError("vertex set does not induce a subtree")
    deg = [0] * len(sub)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if min(deg) == 0:
        raise ValueError("vertex set does not induce a connected subtree")
    leaves = [i for i, d in enumerate(deg) if d == 1]
    t_sub = GraphWithBoundary(len(sub), edges, leaves)
    lam_t = steklov_spectrum(t).eigenvalues
    lam_s = steklov_spectrum(t_sub).eigenvalues
    k = len(lam_s)
    viol = float(np.max(lam_t[:k] - lam_s))
    return MonotonicityReport(False, viol <= tol, lam_t, lam_s, viol)


def random_subtree(t: GraphWithBoundary, size: int, seed: int) -> list:
    """Seeded connected vertex subset of a tree (grown by random attachment)."""
    rng = SplitMix64(seed)
    start = rng.randrange(t.n)
    chosen = {start}
    frontier = [w for w in t.neighbors(start)]
    while len(chosen) < size and frontier:
        w = frontier.pop(rng.randrange(len(frontier)))
        if w in chosen:
            continue
        chosen.add(w)
        frontier.extend(x for x in t.neighbors(w) if x not in chosen)
    return sorted(chosen)


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def catalog_csv(report: ArgmaxReport) -> str:
    lines = ["canonical_code,n,leaves,max_degree,lambda2,is_balanced_tree,is_maximizer"]
    maxi = {e.canonical_code for e in report.maximizers}
    for e in report.entries:
        lines.append(
            ",".join(
                [
                    e.canonical_code,
                    str(e.tree.n),
                    str(e.leaf_count),
                    str(e.max_degree),
                    format(e.lambda2, ".17g"),
                    str(e.canonical_code == report.balanced_code).lower(),
                    str(e.canonical_code in maxi).lower(),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def summary_json(reports) -> str:
    obj = []
    for r in reports:
        obj.append(
            {
                "leaves": r.leaves,
                "degree_cap": r.degree_cap,
                "class_size": len(r.entries),
                "max_lambda2": r.max_lambda2,
                "n_maximizers": len(r.maximizers),
                "balanced_tree_lambda2": r.balanced_lambda2,
                "balanced_tree_is_maximizer": r.balanced_is_maximizer,
            }
        )
    return json.dumps(obj, indent=2) + "\n"
