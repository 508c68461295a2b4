"""Constructive machinery behind the block-graph eigenvalue bounds.

``find_balanced_subgraph`` runs the block-removal descent that produces a
connected subgraph H whose boundary share theta = |H ∩ boundary|/|boundary|
satisfies 1/(B(D-1)) <= theta <= 1/B, with the full removal trace.  The two
test-function builders turn that certificate (resp. a boundary geodesic)
into explicit zero-boundary-sum fields whose Rayleigh quotients realize the
degree and diameter bounds.
"""

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import GraphWithBoundary, bfs_distances, blocks, diameter, is_block_graph

__all__ = [
    "SubgraphCertificate",
    "TraceStep",
    "PathTestFunction",
    "find_balanced_subgraph",
    "cut_test_function",
    "path_test_function",
    "certificate_json",
]


@dataclass(frozen=True)
class TraceStep:
    removed_blocks: tuple  # blocks whose edges were removed at this step
    chosen_component: tuple  # vertex set of the component descended into / returned


@dataclass(frozen=True)
class SubgraphCertificate:
    subgraph_vertices: tuple
    boundary_fraction: Fraction
    trace: tuple
    max_block_size: int
    max_degree: int


def _components(vertices, adjacency, banned_edges, banned_vertices=frozenset()):
    """Connected components of the induced graph minus banned edges/vertices."""
    vset = set(vertices) - set(banned_vertices)
    seen = set()
    comps = []
    for s in sorted(vset):
        if s in seen:
            continue
        comp = []
        queue = deque([s])
        seen.add(s)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in adjacency[u]:
                if w in vset and w not in seen:
                    e = (min(u, w), max(u, w))
                    if e in banned_edges:
                        continue
                    seen.add(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _block_edges(block):
    return {(min(a, b), max(a, b)) for i, a in enumerate(block) for b in block[i + 1:]}


def _pick(components, boundary_set):
    """Component with the largest boundary count, ties by smallest vertex."""
    return max(components, key=lambda c: (len(boundary_set.intersection(c)), -c[0]))


def find_balanced_subgraph(g: GraphWithBoundary) -> SubgraphCertificate:
    """Block-removal descent producing a boundary-balanced connected subgraph.

    Start from the block containing the smallest vertex and remove its
    edges.  If every resulting component holds at most a 1/B share of the
    boundary, return the best one.  Otherwise descend into the overweight
    component through its connecting vertex, removing that vertex together
    with all of its incident blocks, until the share first drops to <= 1/B.
    The final share is also >= 1/(B(D-1)); both comparisons are exact.
    """
    blocky, B = is_block_graph(g)
    if not blocky:
        raise ValueError("balanced subgraph requires a block graph")
    b = len(g.boundary)
    if b < 2:
        raise ValueError("balanced subgraph requires |boundary| >= 2")
    D = g.max_degree()
    boundary_set = set(g.boundary)
    decomp = blocks(g)
    upper = Fraction(1, B)

    def fraction(comp):
        return Fraction(len(boundary_set.intersection(comp)), b)

    # step 1: remove the edges of the block containing the smallest vertex
    # (blocks are sorted, so it is the first one)
    first_block = decomp.blocks[0]
    comps = _components(range(g.n), g._adj, _block_edges(first_block))
    trace = []
    chosen = _pick(comps, boundary_set)
    if fraction(chosen) <= upper:
        trace.append(TraceStep((first_block,), chosen))
        return _finish(g, chosen, trace, B, D, boundary_set)
    trace.append(TraceStep((first_block,), chosen))
    gamma = chosen
    connector = next(v for v in first_block if v in set(gamma))

    for _ in range(len(decomp.blocks) + 1):
        gamma_set = set(gamma)
        at_v = tuple(
            blk for blk in decomp.blocks if connector in blk and set(blk) <= gamma_set
        )
        if not at_v:
            # the descent dead-ends on a bare vertex: happens exactly when
            # the boundary is too small relative to B and no integral share
            # can land in [1/(B(D-1)), 1/B]
            raise ValueError(
                "balanced-subgraph procedure exhausted; boundary too small "
                f"relative to the maximum block size (|boundary|={b}, B={B})"
            )
        banned = set()
        for blk in at_v:
            banned |= _block_edges(blk)
        comps = _components(gamma, g._adj, banned, banned_vertices={connector})
        chosen = _pick(comps, boundary_set)
        trace.append(TraceStep(at_v, chosen))
        if fraction(chosen) <= upper:
            return _finish(g, chosen, trace, B, D, boundary_set)
        gamma = chosen
        removed_vertices = set()
        for blk in at_v:
            removed_vertices |= set(blk)
        connector = next(v for v in gamma if v in removed_vertices)
    raise RuntimeError("balanced-subgraph descent failed to terminate")


def _finish(g, chosen, trace, B, D, boundary_set):
    frac = Fraction(len(boundary_set.intersection(chosen)), len(g.boundary))
    lo = Fraction(1, B * (D - 1)) if D >= 2 else None
    if lo is None or not (lo <= frac <= Fraction(1, B)):
        raise ValueError(
            f"certificate share {frac} outside [1/(B(D-1)), 1/B] "
            f"with B={B}, D={D}"
        )
    return SubgraphCertificate(
        subgraph_vertices=chosen,
        boundary_fraction=frac,
        trace=tuple(trace),
        max_block_size=B,
        max_degree=D,
    )


def cut_test_function(g: GraphWithBoundary, cert: SubgraphCertificate) -> np.ndarray:
    """Field 1-theta on H and -theta elsewhere, theta the certificate share.

    The boundary sum vanishes exactly, so the Rayleigh quotient of the
    field upper-bounds lambda2 and is itself bounded by B^2(D-1)/|boundary|.
    """
    theta = cert.boundary_fraction
    f = np.full(g.n, -float(theta))
    f[list(cert.subgraph_vertices)] = float(1 - theta)
    return f


@dataclass(frozen=True)
class PathTestFunction:
    """Level function along a boundary geodesic.

    Vertices at level k (distance class around the k-th geodesic vertex)
    take value a_k = a0 - k*(a0+S)/L; the in-between block remainders take
    the half-integer levels.  S is fixed by the zero-boundary-sum equation;
    the one-parameter family is normalized by a0 = 1.
    """

    geodesic: tuple
    levels: dict  # level key (Fraction) -> value
    S: float
    field: np.ndarray
    pair_distance: int
    graph_diameter: int
    counts: dict  # level key -> boundary count


def _geodesic(g: GraphWithBoundary, x0: int, xL: int) -> list:
    dist = bfs_distances(g, xL)
    path = [x0]
    cur = x0
    while cur != xL:
        cur = min(w for w in g.neighbors(cur) if dist[w] == dist[cur] - 1)
        path.append(cur)
    return path


def path_test_function(g: GraphWithBoundary) -> PathTestFunction:
    """Test field realizing the diameter bound on a block graph.

    Built on the lexicographically smallest boundary pair of maximum
    distance; both that distance and the true diameter are reported.
    """
    blocky, B = is_block_graph(g)
    if not blocky:
        raise ValueError("path test function requires a block graph")
    L_true = diameter(g)
    best = None
    for x in g.boundary:
        dist = bfs_distances(g, x)
        for y in g.boundary:
            if y <= x:
                continue
            key = (dist[y], -x, -y)
            if best is None or key > best[0]:
                best = (key, x, y)
    _, x0, xL = best
    L = bfs_distances(g, x0)[xL]
    if L < 2:
        raise ValueError("degenerate geodesic: no boundary pair at distance >= 2")
    spine = _geodesic(g, x0, xL)
    decomp = blocks(g)
    edge_block = {}
    for blk in decomp.blocks:
        for e in _block_edges(blk):
            edge_block[e] = blk

    spine_blocks = []
    for k in range(L):
        u, v = spine[k], spine[k + 1]
        spine_blocks.append(edge_block[(min(u, v), max(u, v))])

    level_sets = {}  # Fraction level index -> vertex tuple
    # whole levels: component of x_k after removing the two flanking blocks
    for k in range(1, L):
        banned = _block_edges(spine_blocks[k - 1]) | _block_edges(spine_blocks[k])
        comps = _components(range(g.n), g._adj, banned)
        level_sets[Fraction(k)] = next(c for c in comps if spine[k] in c)
    # half levels: what remains of each interior block once the whole
    # levels on both sides are deleted
    for k in range(1, L - 1):
        banned_vertices = set(level_sets[Fraction(k)]) | set(level_sets[Fraction(k + 1)])
        comps = _components(range(g.n), g._adj, set(), banned_vertices)
        extras = [v for v in spine_blocks[k] if v not in (spine[k], spine[k + 1])]
        if extras:
            level_sets[Fraction(2 * k + 1, 2)] = next(c for c in comps if extras[0] in c)

    assigned = {x0, xL}
    for vs in level_sets.values():
        assigned |= set(vs)
    # anything not covered (possible only with non-leaf boundary endpoints)
    # joins the nearer endpoint's level
    extra0, extraL = [], []
    if len(assigned) < g.n:
        d0 = bfs_distances(g, x0)
        dL = bfs_distances(g, xL)
        for v in range(g.n):
            if v not in assigned:
                (extra0 if d0[v] <= dL[v] else extraL).append(v)

    boundary_set = set(g.boundary)
    counts = {Fraction(0): len(boundary_set.intersection({x0, *extra0}))}
    counts[Fraction(L)] = len(boundary_set.intersection({xL, *extraL}))
    for lev, vs in level_sets.items():
        counts[lev] = len(boundary_set.intersection(vs))

    # zero boundary sum: sum_lev counts[lev] * (a0 - lev * t) = 0 with a0 = 1
    total = sum(counts.values())
    moment = sum(lev * c for lev, c in counts.items())
    t = Fraction(total) / moment  # moment >= L * counts[L] >= L > 0
    a0 = Fraction(1)
    value = {lev: a0 - lev * t for lev in counts}
    S = float(L * t - a0)

    f = np.empty(g.n)
    f[x0] = float(value[Fraction(0)])
    f[xL] = float(value[Fraction(L)])
    for v in extra0:
        f[v] = float(value[Fraction(0)])
    for v in extraL:
        f[v] = float(value[Fraction(L)])
    for lev, vs in level_sets.items():
        f[list(vs)] = float(value[lev])

    return PathTestFunction(
        geodesic=tuple(spine),
        levels={lev: float(val) for lev, val in value.items()},
        S=S,
        field=f,
        pair_distance=L,
        graph_diameter=L_true,
        counts=counts,
    )


def certificate_json(cert: SubgraphCertificate) -> str:
    """JSON export with the share as an exact fraction string."""
    obj = {
        "vertices": list(cert.subgraph_vertices),
        "fraction": f"{cert.boundary_fraction.numerator}/{cert.boundary_fraction.denominator}",
        "max_block_size": cert.max_block_size,
        "max_degree": cert.max_degree,
        "trace": [
            {
                "removed_blocks": [list(b) for b in step.removed_blocks],
                "chosen_component": list(step.chosen_component),
            }
            for step in cert.trace
        ],
    }
    return json.dumps(obj, indent=2) + "\n"
