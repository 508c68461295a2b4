"""Closed-form upper bounds on the first nontrivial Steklov eigenvalue.

Six named bounds, each with its applicability class:

================== ======================================== ==================
name               value                                     applies to
================== ======================================== ==================
planar_degree      8 D / b                                   planar graphs
block_degree       B^2 (D-1) / b                             block graphs, D>=2
block_degree_sharp B^2 (B-1) (D-1)^2 / ((B(D-1)-1) b)        block graphs, D>=2
block_diameter     (2L + (L-2)(B-2)) / L^2                   block graphs, L>=2
tree_degree        4 (D-1) / b                               trees, D>=2
tree_diameter      2 / L                                     trees, L>=2
================== ======================================== ==================

with D the maximum degree, b = |boundary|, B the maximum block size, and L
the diameter.  ``evaluate_all`` decides applicability from structural
predicates of the graph itself, never from how an instance was generated.
"""

from dataclasses import dataclass

from .graphs import GraphWithBoundary, diameter, is_block_graph, is_planar
from .spectra import steklov_spectrum

__all__ = [
    "BoundReport",
    "BOUND_NAMES",
    "planar_degree_bound",
    "block_degree_bound",
    "block_diameter_bound",
    "evaluate_all",
    "reports_csv",
]

BOUND_NAMES = (
    "planar_degree",
    "block_degree",
    "block_degree_sharp",
    "block_diameter",
    "tree_degree",
    "tree_diameter",
)

# additive slack absorbing eigensolver error; bound values are exact
SLACK = 1e-9


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    applicable: bool
    bound_value: float
    lambda2: float
    slack: float
    satisfied: bool

    @staticmethod
    def inapplicable(name: str, lam2: float) -> "BoundReport":
        return BoundReport(name, False, float("nan"), lam2, float("nan"), False)

    @staticmethod
    def check(name: str, value: float, lam2: float) -> "BoundReport":
        return BoundReport(name, True, value, lam2, value - lam2, lam2 <= value + SLACK)


def planar_degree_bound(D: int, b: int) -> float:
    """8D/b."""
    if D < 1:
        raise ValueError("max degree must be >= 1")
    if b < 2:
        raise ValueError("planar degree bound needs |boundary| >= 2")
    return 8.0 * D / b


def block_degree_bound(B: int, D: int, b: int):
    """(coarse, sharp) = (B^2(D-1)/b, B^2(B-1)(D-1)^2/((B(D-1)-1) b))."""
    if B < 2 or D < 2:
        raise ValueError("block degree bound needs B >= 2 and D >= 2")
    if b < 2:
        raise ValueError("block degree bound needs |boundary| >= 2")
    coarse = B * B * (D - 1) / b
    sharp = B * B * (B - 1) * (D - 1) ** 2 / ((B * (D - 1) - 1) * b)
    return coarse, sharp


def block_diameter_bound(L: int, B: int) -> float:
    """(2L + (L-2)(B-2)) / L^2."""
    if L < 2:
        raise ValueError("block diameter bound needs diameter >= 2")
    if B < 2:
        raise ValueError("block diameter bound needs B >= 2")
    return (2 * L + (L - 2) * (B - 2)) / (L * L)


def evaluate_all(g: GraphWithBoundary) -> list:
    """One BoundReport per named bound, lambda2 computed once.

    A bound is reported as applicable only when its graph-class predicate
    and its parameter preconditions both hold.
    """
    b = len(g.boundary)
    if b < 2:
        raise ValueError("bound certificates require |boundary| >= 2")
    lam2 = float(steklov_spectrum(g).eigenvalues[1])
    D = g.max_degree()
    L = diameter(g)
    planar = is_planar(g).planar
    blocky, B = is_block_graph(g)
    tree = blocky and B <= 2

    reports = []
    if planar:
        reports.append(BoundReport.check("planar_degree", planar_degree_bound(D, b), lam2))
    else:
        reports.append(BoundReport.inapplicable("planar_degree", lam2))

    if blocky and B >= 2 and D >= 2:
        coarse, sharp = block_degree_bound(B, D, b)
        reports.append(BoundReport.check("block_degree", coarse, lam2))
        reports.append(BoundReport.check("block_degree_sharp", sharp, lam2))
    else:
        reports.append(BoundReport.inapplicable("block_degree", lam2))
        reports.append(BoundReport.inapplicable("block_degree_sharp", lam2))

    if blocky and B >= 2 and L >= 2:
        reports.append(BoundReport.check("block_diameter", block_diameter_bound(L, B), lam2))
    else:
        reports.append(BoundReport.inapplicable("block_diameter", lam2))

    if tree and D >= 2:
        reports.append(BoundReport.check("tree_degree", 4.0 * (D - 1) / b, lam2))
    else:
        reports.append(BoundReport.inapplicable("tree_degree", lam2))

    if tree and L >= 2:
        reports.append(BoundReport.check("tree_diameter", 2.0 / L, lam2))
    else:
        reports.append(BoundReport.inapplicable("tree_diameter", lam2))

    return reports


def reports_csv(reports) -> str:
    lines = ["bound_name,applicable,bound_value,lambda2,slack,satisfied"]
    for r in reports:
        lines.append(
            ",".join(
                [
                    r.bound_name,
                    str(r.applicable).lower(),
                    format(r.bound_value, ".17g"),
                    format(r.lambda2, ".17g"),
                    format(r.slack, ".17g"),
                    str(r.satisfied).lower(),
                ]
            )
        )
    return "\n".join(lines) + "\n"
