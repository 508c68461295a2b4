"""Deterministic generators for the named graph families.

Each generator returns a :class:`FamilyInstance` carrying the graph, the
parameters, labeled vertex roles, and, where one exists, the closed-form
first nontrivial Steklov eigenvalue as an exact fraction.

Closed forms:

* barbell(p, q, L):      lambda2 = (p+q) / ((L-2)pq + p + q)
* cherry(base, leaf):    lambda2 = 1
* path_stack(D, n):      lambda2 = 2(D-1) / (n + 2(D-1)), diameter n+2
* block_path(L):         lambda2 = 2/L (L even)

The seeded random generators draw from the package's splitmix64 stream, so
identical (parameters, seed) reproduce byte-identical graphs.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import GraphWithBoundary, is_planar
from ._rng import SplitMix64

__all__ = [
    "FamilyInstance",
    "barbell",
    "cherry",
    "path_stack",
    "block_path",
    "balanced_tree",
    "random_block_graph",
    "random_tree",
]


@dataclass(frozen=True)
class FamilyInstance:
    graph: GraphWithBoundary
    family_name: str
    parameters: dict = field(compare=False)
    closed_form_lambda2: Fraction | None = None
    metadata: dict = field(default_factory=dict, compare=False)


def barbell(p: int, q: int, L: int) -> FamilyInstance:
    """Path of length L-2 with p pendants on one end, q on the other.

    Vertices: u-pendants 0..p-1, path w_1..w_{L-1} at p..p+L-2, v-pendants
    after that.  Boundary = all p+q pendants.  For L = 2 the path collapses
    to a single vertex carrying all pendants (a star).
    """
    if p < 1 or q < 1:
        raise ValueError("barbell needs p, q >= 1")
    if L < 2:
        raise ValueError("barbell needs L >= 2")
    path = list(range(p, p + L - 1))
    u_pend = list(range(p))
    v_pend = list(range(p + L - 1, p + L - 1 + q))
    n = p + q + L - 1
    edges = [(u, path[0]) for u in u_pend]
    edges += [(path[i], path[i + 1]) for i in range(len(path) - 1)]
    edges += [(path[-1], v) for v in v_pend]
    g = GraphWithBoundary(n, edges, u_pend + v_pend)
    lam = Fraction(p + q, (L - 2) * p * q + p + q)
    return FamilyInstance(
        graph=g,
        family_name="barbell",
        parameters={"p": p, "q": q, "L": L},
        closed_form_lambda2=lam,
        metadata={"u_pendants": tuple(u_pend), "path": tuple(path), "v_pendants": tuple(v_pend)},
    )


def cherry(base: GraphWithBoundary, leaf: int) -> FamilyInstance:
    """Attach two pendants to a degree-1 vertex of a planar graph.

    The two new pendants form the boundary; lambda2 = 1 regardless of the
    base (the eigenfield is +-1 on the pendants and 0 elsewhere).
    """
    if base.degree(leaf) != 1:
        raise ValueError(f"cherry site {leaf} must have degree 1")
    if not is_planar(base).planar:
        raise ValueError("cherry base must be planar")
    n = base.n + 2
    a, b = base.n, base.n + 1
    edges = list(base.edges) + [(leaf, a), (leaf, b)]
    g = GraphWithBoundary(n, edges, [a, b])
    return FamilyInstance(
        graph=g,
        family_name="cherry",
        parameters={"base_n": base.n, "leaf": leaf},
        closed_form_lambda2=Fraction(1),
        metadata={"pendants": (a, b), "site": (leaf,)},
    )


def path_stack(D: int, n: int) -> FamilyInstance:
    """(D-1) internally disjoint paths of length n glued at two hubs, one
    pendant per hub.  Max degree D, diameter n+2, boundary = the 2 pendants.

    The eigenfield is linear along each parallel path (hub values
    +-(1-lambda2), per-step decrement 2(1-lambda2)/n); harmonicity at a hub
    then pins lambda2 = 2(D-1)/(n+2(D-1)).
    """
    if D < 2:
        raise ValueError("path_stack needs D >= 2")
    if n < 2:
        raise ValueError("path_stack needs n >= 2")
    pend_a = 0
    hub_a = 1
    k = n - 1  # interior vertices per path
    paths = []
    next_id = 2
    for _ in range(D - 1):
        chain = list(range(next_id, next_id + k))
        next_id += k
        paths.append(chain)
    hub_b = next_id
    pend_b = next_id + 1
    edges = [(pend_a, hub_a), (hub_b, pend_b)]
    for chain in paths:
        edges.append((hub_a, chain[0]))
        edges += [(chain[i], chain[i + 1]) for i in range(k - 1)]
        edges.append((chain[-1], hub_b))
    g = GraphWithBoundary(pend_b + 1, edges, [pend_a, pend_b])
    lam = Fraction(2 * (D - 1), n + 2 * (D - 1))
    return FamilyInstance(
        graph=g,
        family_name="path_stack",
        parameters={"D": D, "n": n},
        closed_form_lambda2=lam,
        metadata={
            "pendants": (pend_a, pend_b),
            "hubs": (hub_a, hub_b),
            "paths": tuple(tuple(c) for c in paths),
        },
    )


def block_path(L: int) -> FamilyInstance:
    """Block graph of even diameter L with lambda2 = 2/L.

    A spine path of length L (pendant, L-1 spine vertices, pendant) with a
    triangle block dangling from every second interior spine vertex.
    Dangling complete blocks are spectrally inert (their harmonic values
    equal the attachment value), so the DtN matrix is that of the bare
    length-L path and lambda2 = 2/L exactly, while B = 3 for L >= 4.
    """
    if L < 2 or L % 2 != 0:
        raise ValueError("block_path needs even L >= 2")
    # spine: pendant 0, y_0..y_{L-2} at ids 1..L-1, pendant L
    spine = list(range(1, L))
    edges = [(0, 1), (L - 1, L)]
    edges += [(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
    next_id = L + 1
    apexes = []
    for i in range(1, L - 2, 2):
        y = spine[i]
        a, b = next_id, next_id + 1
        next_id += 2
        edges += [(y, a), (y, b), (a, b)]
        apexes.append((a, b))
    g = GraphWithBoundary(next_id, edges, [0, L])
    return FamilyInstance(
        graph=g,
        family_name="block_path",
        parameters={"L": L},
        closed_form_lambda2=Fraction(2, L),
        metadata={"spine": tuple([0] + spine + [L]), "triangles": tuple(apexes)},
    )


def balanced_tree(leaves: int, D: int) -> FamilyInstance:
    """Coin-splitting balanced tree with the given leaf count.

    Start with `leaves` coins at a root.  The root splits into min(leaves, D)
    children; afterwards every vertex holding s > 1 coins splits into
    min(s, D-1) children.  Coins are divided as evenly as possible with the
    larger piles going to the leftmost (lowest-id) children.  Terminates when
    every pile is a single coin; those vertices are the leaves (= boundary).
    """
    if leaves < 2:
        raise ValueError("balanced tree needs >= 2 leaves")
    if D < 3:
        raise ValueError("balanced tree needs D >= 3")

    def split(s: int, parts: int) -> list:
        lo, hi = divmod(s, parts)
        return [lo + 1] * hi + [lo] * (parts - hi)

    edges = []
    leaf_ids = []
    queue = [(0, leaves, True)]  # (vertex, coins, is_root)
    next_id = 1
    while queue:
        v, s, root = queue.pop(0)
        if s == 1:
            leaf_ids.append(v)
            continue
        parts = min(s, D) if root else min(s, D - 1)
        for pile in split(s, parts):
            edges.append((v, next_id))
            queue.append((next_id, pile, False))
            next_id += 1
    g = GraphWithBoundary(next_id, edges, leaf_ids)
    return FamilyInstance(
        graph=g,
        family_name="balanced_tree",
        parameters={"leaves": leaves, "D": D},
        closed_form_lambda2=None,
        metadata={"root": (0,), "leaves": tuple(sorted(leaf_ids))},
    )


def random_block_graph(blocks: int, B_max: int, D_max: int, seed: int) -> FamilyInstance:
    """Random connected block graph with pendant-leaf boundary.

    Grows a block-cut structure by attaching complete blocks of size
    2..B_max at random vertices, keeping structural degrees <= D_max - 1,
    then hangs one pendant boundary leaf on every non-cut vertex.  The
    pendants bring every degree to <= D_max and guarantee |boundary| >= B,
    so the balanced-subgraph certificate always has an integral solution.
    """
    if blocks < 1:
        raise ValueError("need at least one block")
    if B_max < 2:
        raise ValueError("B_max must be >= 2")
    if D_max < 2:
        raise ValueError("D_max must be >= 2")
    rng = SplitMix64(seed)
    degree = [0]
    block_count = [0]  # number of structural blocks containing each vertex
    edges = []
    for _ in range(blocks):
        # v can host K_s when degree(v) + (s-1) <= D_max - 1 (pendant reserved)
        candidates = [v for v in range(len(degree)) if degree[v] + 1 <= D_max - 1]
        if not candidates:
            raise ValueError("infeasible: no vertex can host another block")
        v = candidates[rng.randrange(len(candidates))]
        s_max = min(B_max, D_max - degree[v])
        s = rng.randint(2, s_max)
        new = list(range(len(degree), len(degree) + s - 1))
        degree.extend([s - 1] * (s - 1))
        block_count.extend([1] * (s - 1))
        degree[v] += s - 1
        block_count[v] += 1
        members = [v] + new
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                edges.append((a, b))
    non_cut = [v for v in range(len(degree)) if block_count[v] <= 1]
    pendants = []
    next_id = len(degree)
    for v in non_cut:
        edges.append((v, next_id))
        pendants.append(next_id)
        next_id += 1
    g = GraphWithBoundary(next_id, edges, pendants)
    return FamilyInstance(
        graph=g,
        family_name="random_block_graph",
        parameters={"blocks": blocks, "B_max": B_max, "D_max": D_max, "seed": seed},
        closed_form_lambda2=None,
        metadata={"pendants": tuple(pendants)},
    )


def random_tree(n: int, D_max: int, seed: int) -> FamilyInstance:
    """Random attachment tree on n vertices with degrees <= D_max.

    Boundary = all leaves.  Deterministic given the seed.
    """
    if n < 2:
        raise ValueError("random tree needs n >= 2")
    if D_max < 2:
        raise ValueError("D_max must be >= 2")
    rng = SplitMix64(seed)
    degree = [0] * n
    edges = []
    for i in range(1, n):
        candidates = [j for j in range(i) if degree[j] < D_max]
        if not candidates:
            raise ValueError("infeasible: degree cap too tight")
        j = candidates[rng.randrange(len(candidates))]
        edges.append((j, i))
        degree[j] += 1
        degree[i] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    g = GraphWithBoundary(n, edges, leaves)
    return FamilyInstance(
        graph=g,
        family_name="random_tree",
        parameters={"n": n, "D_max": D_max, "seed": seed},
        closed_form_lambda2=None,
        metadata={"leaves": tuple(leaves)},
    )
