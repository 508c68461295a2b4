"""Steklov spectra via the Dirichlet-to-Neumann (DtN) matrix.

The Steklov problem on a graph with boundary asks for pairs (f, lambda)
with f harmonic at every interior vertex and the outward normal derivative
satisfying df/dn = lambda * f on the boundary.  The eigenvalues are those
of the DtN matrix, i.e. the Schur complement of the graph Laplacian onto
the boundary block.

Convention for edges joining two boundary vertices: they enter the
Laplacian, the Rayleigh quotient, and the DtN matrix through the Schur
complement (with an empty interior the DtN matrix is the full Laplacian).
This is the unique convention under which the Rayleigh characterization
and the eigenvalue equations agree on every graph.
"""

from dataclasses import dataclass

import numpy as np

from .graphs import GraphWithBoundary, bfs_distances
from ._rng import SplitMix64

__all__ = [
    "SteklovSpectrum",
    "VariationalReport",
    "laplacian",
    "harmonic_extension",
    "dtn_matrix",
    "dtn_matrix_by_indicators",
    "steklov_spectrum",
    "lambda2",
    "rayleigh_quotient",
    "variational_check",
    "spectrum_csv",
]


def laplacian(g: GraphWithBoundary) -> np.ndarray:
    """Dense combinatorial Laplacian L = D - A."""
    L = np.zeros((g.n, g.n))
    for u, v in g.edges:
        L[u, u] += 1.0
        L[v, v] += 1.0
        L[u, v] -= 1.0
        L[v, u] -= 1.0
    return L


def _check_every_component_touches_boundary(g: GraphWithBoundary) -> None:
    bset = set(g.boundary)
    seen = [False] * g.n
    for v in g.boundary:
        if not seen[v]:
            dist = bfs_distances(g, v)
            for u, d in enumerate(dist):
                if d >= 0:
                    seen[u] = True
    if not all(seen):
        raise ValueError("no unique extension: a component has no boundary vertex")


def harmonic_extension(g: GraphWithBoundary, boundary_values) -> np.ndarray:
    """Extend boundary data harmonically to all vertices.

    Parameters
    ----------
    g : GraphWithBoundary
    boundary_values : sequence of floats, aligned with ``g.boundary``
        (which is sorted ascending).

    Returns
    -------
    ndarray of length ``g.n`` agreeing with the data on the boundary and
    with zero Laplacian at every interior vertex.  The extension exists and
    is unique iff every connected component contains a boundary vertex.
    """
    vals = np.asarray(boundary_values, dtype=float)
    if vals.shape != (len(g.boundary),):
        raise ValueError("boundary_values must align with g.boundary")
    _check_every_component_touches_boundary(g)
    f = np.zeros(g.n)
    f[list(g.boundary)] = vals
    interior = list(g.interior)
    if interior:
        L = laplacian(g)
        b_idx = list(g.boundary)
        L_ii = L[np.ix_(interior, interior)]
        L_ib = L[np.ix_(interior, b_idx)]
        f[interior] = np.linalg.solve(L_ii, -L_ib @ vals)
    return f


def dtn_matrix(g: GraphWithBoundary) -> np.ndarray:
    """DtN matrix as the Schur complement L_BB - L_BI L_II^{-1} L_IB.

    Rows/columns follow ``g.boundary`` order.  Symmetric, positive
    semidefinite, zero row sums.
    """
    _check_every_component_touches_boundary(g)
    L = laplacian(g)
    b_idx = list(g.boundary)
    interior = list(g.interior)
    L_bb = L[np.ix_(b_idx, b_idx)]
    if not interior:
        return L_bb
    L_bi = L[np.ix_(b_idx, interior)]
    L_ii = L[np.ix_(interior, interior)]
    return L_bb - L_bi @ np.linalg.solve(L_ii, L_bi.T)


def dtn_matrix_by_indicators(g: GraphWithBoundary) -> np.ndarray:
    """Independent DtN assembly: one harmonic extension per boundary vertex.

    Column y is the boundary restriction of the Laplacian applied to the
    harmonic extension of the indicator of boundary vertex y.  Used as the
    oracle route against :func:`dtn_matrix`.
    """
    b = len(g.boundary)
    b_idx = list(g.boundary)
    L = laplacian(g)
    out = np.zeros((b, b))
    for j in range(b):
        ind = np.zeros(b)
        ind[j] = 1.0
        f = harmonic_extension(g, ind)
        out[:, j] = (L @ f)[b_idx]
    return out


@dataclass(frozen=True)
class SteklovSpectrum:
    """Ordered Steklov eigenvalues with harmonically extended eigenfields.

    ``eigenvalues`` has length |boundary| in nondecreasing order;
    ``eigenfields[k]`` is the harmonic extension (length n) of the k-th DtN
    eigenvector.
    """

    eigenvalues: np.ndarray
    eigenfields: np.ndarray
    boundary: tuple

    def __len__(self):
        return len(self.eigenvalues)


def steklov_spectrum(g: GraphWithBoundary) -> SteklovSpectrum:
    if len(g.boundary) < 2:
        raise ValueError("Steklov spectrum requires |boundary| >= 2")
    dtn = dtn_matrix(g)
    evals, evecs = np.linalg.eigh(dtn)
    fields = np.empty((len(evals), g.n))
    for k in range(len(evals)):
        fields[k] = harmonic_extension(g, evecs[:, k])
    return SteklovSpectrum(eigenvalues=evals, eigenfields=fields, boundary=g.boundary)


def lambda2(g: GraphWithBoundary) -> float:
    return float(steklov_spectrum(g).eigenvalues[1])


def rayleigh_quotient(g: GraphWithBoundary, f) -> float:
    """Edge energy over boundary mass: R(f) = sum_E (f_x-f_y)^2 / sum_B f_x^2."""
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise ValueError("f must assign one value per vertex")
    b_idx = list(g.boundary)
    mass = float(np.dot(f[b_idx], f[b_idx]))
    if mass == 0.0:
        raise ValueError("undefined quotient: f vanishes on the boundary")
    energy = 0.0
    for u, v in g.edges:
        d = f[u] - f[v]
        energy += d * d
    return energy / mass


@dataclass(frozen=True)
class VariationalReport:
    trials: int
    min_quotient: float
    lambda2: float
    all_above: bool


def variational_check(g: GraphWithBoundary, trials: int, seed: int, tol: float = 1e-9) -> VariationalReport:
    """R(f) >= lambda2 for random fields with zero boundary sum.

    Fields are uniform in [-1,1] per vertex, then shifted on the boundary
    to zero boundary sum.  Deterministic given the seed.
    """
    if len(g.boundary) < 2:
        raise ValueError("variational check requires |boundary| >= 2")
    lam2 = lambda2(g)
    rng = SplitMix64(seed)
    b_idx = list(g.boundary)
    best = np.inf
    for _ in range(trials):
        f = np.array([rng.uniform(-1.0, 1.0) for _ in range(g.n)])
        f[b_idx] -= f[b_idx].mean()
        if np.max(np.abs(f[b_idx])) < 1e-12:
            continue
        best = min(best, rayleigh_quotient(g, f))
    return VariationalReport(
        trials=trials,
        min_quotient=float(best),
        lambda2=lam2,
        all_above=bool(best >= lam2 - tol),
    )


def spectrum_csv(spectrum: SteklovSpectrum, include_fields: bool = False) -> str:
    """CSV export, 17 significant digits."""
    lines = []
    if include_fields:
        nv = spectrum.eigenfields.shape[1]
        header = "index,eigenvalue," + ",".join(f"f{v}" for v in range(nv))
        lines.append(header)
        for k, lam in enumerate(spectrum.eigenvalues):
            row = [str(k), format(lam, ".17g")]
            row += [format(x, ".17g") for x in spectrum.eigenfields[k]]
            lines.append(",".join(row))
    else:
        lines.append("index,eigenvalue")
        for k, lam in enumerate(spectrum.eigenvalues):
            lines.append(f"{k},{format(lam, '.17g')}")
    return "\n".join(lines) + "\n"
