"""Numerical circle-packing pipeline for the planar eigenvalue bound.

Pipeline: maximal-planar triangulation -> tangency circle packing in the
plane (angle-sum iteration) -> stereographic projection to spherical caps
-> sphere automorphism centering the boundary cap centers -> embedding
ratio.  The chain lambda2 <= ratio <= 8*D/|boundary| is then a per-instance
numerical certificate.

Geometry conventions.  The plane is tangent to the unit sphere at
(-1, 0, 0); plane coordinates (u, v) sit at (-1, u, v) in space and project
from the pole (1, 0, 0).  Cap radii are chordal: c = |m(C) - x| for x on
the cap's boundary circle, which makes the cap area exactly pi*c^2 and
makes chordal radii subadditive along tangencies -- the two facts the
certificate chain rests on.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .graphs import GraphWithBoundary, is_planar, trace_faces

__all__ = [
    "Triangulation",
    "CirclePacking",
    "CapConfiguration",
    "ChainCertificate",
    "triangulate",
    "circle_pack",
    "project_to_sphere",
    "mu_alpha",
    "center_caps",
    "embedding_ratio",
    "planar_chain",
    "packing_csv",
    "caps_csv",
    "chain_json",
]


@dataclass(frozen=True)
class Triangulation:
    graph: GraphWithBoundary  # maximal planar supergraph, same vertex set
    rotation: dict  # clockwise neighbor order per vertex


def triangulate(g: GraphWithBoundary) -> Triangulation:
    """Deterministic maximal-planar triangulation containing g.

    Repeatedly inserts the lexicographically smallest valid chord between
    vertices two steps apart on a non-triangular face walk, re-embedding
    after every insertion, until |E| = 3n-6.  Face walks may repeat
    vertices (cut vertices), so candidate chords are screened for
    simplicity.
    """
    if g.n < 3:
        raise ValueError("triangulation needs n >= 3")
    res = is_planar(g)
    if not res.planar:
        raise ValueError("cannot triangulate a non-planar graph")
    edges = set(g.edges)
    target = 3 * g.n - 6
    rotation = res.rotation
    while len(edges) < target:
        faces = trace_faces(rotation)
        candidates = set()
        for walk in faces:
            k = len(walk)
            if k <= 3:
                continue
            for i in range(k):
                u, w = walk[i], walk[(i + 2) % k]
                if u != w and (min(u, w), max(u, w)) not in edges:
                    candidates.add((min(u, w), max(u, w)))
        if not candidates:
            raise RuntimeError("triangulation stalled: no valid chord found")
        edges.add(min(candidates))
        aug = GraphWithBoundary(g.n, sorted(edges), g.boundary)
        res = is_planar(aug)
        rotation = res.rotation
    tri = GraphWithBoundary(g.n, sorted(edges), g.boundary)
    return Triangulation(graph=tri, rotation=rotation)


@dataclass(frozen=True)
class CirclePacking:
    centers: np.ndarray  # (n, 2) planar centers
    radii: np.ndarray  # (n,) positive radii
    tangencies: tuple  # edges realized as tangencies (triangulation edges)
    outer: tuple  # the three fixed outer-face vertices
    boundary: tuple  # boundary vertex set carried through the pipeline
    angle_residual: float
    tangency_residual: float  # max relative tangency error over tangencies
    overlap_residual: float  # max relative interior overlap over non-edges


def _angle_sums(radii, owner_pos, owner_vertex, nbr_a, nbr_b, n_interior):
    rv = radii[owner_vertex]
    ra = radii[nbr_a]
    rb = radii[nbr_b]
    s = np.sqrt((ra / (rv + ra)) * (rb / (rv + rb)))
    angles = 2.0 * np.arcsin(np.clip(s, 0.0, 1.0))
    sums = np.zeros(n_interior)
    np.add.at(sums, owner_pos, angles)
    return sums


def circle_pack(tri: Triangulation, tol: float = 1e-10, max_iter: int = 200000) -> CirclePacking:
    """Tangency circle packing of a triangulation.

    The three vertices of the outer face (the face with the largest vertex
    ids) are fixed at radius 1; interior radii are adjusted by the
    uniform-neighbor angle-sum iteration until every interior angle sum is
    2*pi within ``tol``, with an Aitken-style superstep every few sweeps.
    Circles are then laid out by breadth-first face traversal.
    """
    g = tri.graph
    n = g.n
    faces = trace_faces(tri.rotation)
    tri_faces = [f for f in faces if len(f) == 3]
    if len(tri_faces) != len(faces):
        raise ValueError("input is not a triangulation")
    outer = max(faces, key=lambda f: tuple(sorted(f, reverse=True)))
    outer_set = set(outer)
    interior = [v for v in range(n) if v not in outer_set]
    idx = {v: i for i, v in enumerate(interior)}

    radii = np.ones(n)
    if interior:
        radii[interior] = 0.5
        owner_pos, owner_vertex, nbr_a, nbr_b = [], [], [], []
        degree = np.zeros(len(interior))
        for v in interior:
            flower = tri.rotation[v]
            k = len(flower)
            degree[idx[v]] = k
            for j in range(k):
                owner_pos.append(idx[v])
                owner_vertex.append(v)
                nbr_a.append(flower[j])
                nbr_b.append(flower[(j + 1) % k])
        owner_pos = np.array(owner_pos)
        owner_vertex = np.array(owner_vertex)
        nbr_a = np.array(nbr_a)
        nbr_b = np.array(nbr_b)
        int_idx = np.array(interior)
        delta = np.sin(np.pi / degree)

        def sweep(r):
            sums = _angle_sums(r, owner_pos, owner_vertex, nbr_a, nbr_b, len(interior))
            beta = np.sin(np.clip(sums / (2.0 * degree), 0.0, math.pi / 2 - 1e-12))
            r_hat = beta * r[int_idx] / (1.0 - beta)
            r_new = r.copy()
            r_new[int_idx] = r_hat * (1.0 - delta) / delta
            return r_new, float(np.max(np.abs(sums - 2.0 * math.pi)))

        err_prev = np.inf
        r_prev = radii.copy()
        err = np.inf
        it = 0
        while it < max_iter:
            r_next, err = sweep(radii)
            if err < tol:
                break
            # superstep: extrapolate the fixed point in log space when the
            # error is contracting steadily
            if err_prev < np.inf and err < err_prev and it % 5 == 4:
                lam = err / err_prev
                if 0.1 < lam < 0.999:
                    factor = lam / (1.0 - lam)
                    logs = np.log(r_next[int_idx]) + factor * (
                        np.log(r_next[int_idx]) - np.log(radii[int_idx])
                    )
                    trial = r_next.copy()
                    trial[int_idx] = np.exp(np.clip(logs, -50, 50))
                    _, err_trial = sweep(trial)
                    if err_trial < err:
                        r_next = trial
                        err = err_trial
            r_prev = radii
            radii = r_next
            err_prev = err
            it += 1
        sums = _angle_sums(radii, owner_pos, owner_vertex, nbr_a, nbr_b, len(interior))
        angle_residual = float(np.max(np.abs(sums - 2.0 * math.pi)))
        if angle_residual > tol:
            raise RuntimeError(
                f"circle packing did not converge: angle residual {angle_residual:.3e} "
                f"after {it} iterations"
            )
    else:
        angle_residual = 0.0

    centers = _layout(n, radii, tri_faces, outer)
    tangencies = tri.graph.edges
    tang_res = 0.0
    for u, v in tangencies:
        d = float(np.linalg.norm(centers[u] - centers[v]))
        s = radii[u] + radii[v]
        tang_res = max(tang_res, abs(d - s) / s)
    adj = {frozenset(e) for e in tangencies}
    over_res = 0.0
    for u in range(n):
        for v in range(u + 1, n):
            if frozenset((u, v)) in adj:
                continue
            d = float(np.linalg.norm(centers[u] - centers[v]))
            s = radii[u] + radii[v]
            over_res = max(over_res, (s - d) / s)
    return CirclePacking(
        centers=centers,
        radii=radii,
        tangencies=tangencies,
        outer=tuple(outer),
        boundary=g.boundary,
        angle_residual=angle_residual,
        tangency_residual=tang_res,
        overlap_residual=max(over_res, 0.0),
    )


def _layout(n, radii, tri_faces, outer):
    """Breadth-first placement; each traced face (a,b,c) puts c left of a->b."""
    placed = np.zeros(n, dtype=bool)
    centers = np.zeros((n, 2))

    def place_third(a, b, c):
        pa, pb = centers[a], centers[b]
        d = float(np.linalg.norm(pb - pa))
        da = radii[a] + radii[c]
        db = radii[b] + radii[c]
        along = (da * da - db * db + d * d) / (2.0 * d)
        h = math.sqrt(max(da * da - along * along, 0.0))
        u = (pb - pa) / d
        left = np.array([-u[1], u[0]])
        centers[c] = pa + along * u + h * left

    internal = [f for f in tri_faces if tuple(f) != tuple(outer)]
    if not internal:  # K3: the two faces coincide as vertex sets
        internal = [tri_faces[0]]
    a, b, c = internal[0]
    centers[a] = (0.0, 0.0)
    centers[b] = (radii[a] + radii[b], 0.0)
    placed[a] = placed[b] = True
    place_third(a, b, c)
    placed[c] = True
    pending = internal[1:]
    while pending:
        rest = []
        progress = False
        for f in pending:
            done = False
            for i in range(3):
                a, b, c = f[i], f[(i + 1) % 3], f[(i + 2) % 3]
                if placed[a] and placed[b]:
                    if not placed[c]:
                        place_third(a, b, c)
                        placed[c] = True
                    done = True
                    progress = True
                    break
            if not done:
                rest.append(f)
        if not progress and rest:
            raise RuntimeError("layout failed: disconnected face structure")
        pending = rest
    return centers


# ---------------------------------------------------------------------------
# sphere
# ---------------------------------------------------------------------------

_POLE = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class CapConfiguration:
    centers: np.ndarray  # (n, 3) unit vectors, spherical cap centers m(C)
    chordal: np.ndarray  # (n,) chordal radii in (0, 2)
    boundary: tuple


def _plane_to_sphere(u, v):
    rho2 = u * u + v * v
    s = 4.0 + rho2
    return np.array([(rho2 - 4.0) / s, 4.0 * u / s, 4.0 * v / s])


def _cap_from_points(p1, p2, p3, inside):
    nrm = np.cross(p2 - p1, p3 - p1)
    norm = np.linalg.norm(nrm)
    if norm < 1e-14:
        raise RuntimeError("degenerate circle on the sphere")
    nrm = nrm / norm
    d = float(np.dot(nrm, p1))
    if np.dot(nrm, inside) < d:
        nrm, d = -nrm, -d
    if d <= -1.0 + 1e-12 or d >= 1.0 - 1e-15:
        raise RuntimeError("degenerate cap (circle collapses to a point)")
    return nrm, math.sqrt(2.0 * (1.0 - d))


def project_to_sphere(p: CirclePacking) -> CapConfiguration:
    """Map the packing to tangent spherical caps.

    The packing is first rescaled into the unit disk around the tangency
    point for conditioning.  Each circle maps to a cap via three boundary
    points; the cap center is the spherical one (not the projection of the
    planar center) and the radius is chordal.  The cap is taken on the side
    away from the pole, which is where bounded disks land.
    """
    n = len(p.radii)
    lo = np.min(p.centers - p.radii[:, None], axis=0)
    hi = np.max(p.centers + p.radii[:, None], axis=0)
    mid = (lo + hi) / 2.0
    scale = max(np.max(np.abs(p.centers - mid)) + np.max(p.radii), 1e-30)
    centers = (p.centers - mid) / scale
    radii = p.radii / scale

    m = np.zeros((n, 3))
    c = np.zeros(n)
    for i in range(n):
        pts = []
        for phi in (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0):
            u = centers[i, 0] + radii[i] * math.cos(phi)
            v = centers[i, 1] + radii[i] * math.sin(phi)
            pts.append(_plane_to_sphere(u, v))
        inside = _plane_to_sphere(centers[i, 0], centers[i, 1])
        nrm, chord = _cap_from_points(*pts, inside)
        if np.dot(nrm, _POLE) >= np.dot(nrm, inside):
            raise RuntimeError("re-normalize packing: a disk projects across the pole")
        m[i] = nrm / np.linalg.norm(nrm)
        c[i] = chord
    return CapConfiguration(centers=m, chordal=c, boundary=p.boundary)


def _mu_point(z, beta, a):
    """mu_alpha on a single sphere point (alpha = (1-a) * beta)."""
    denom = 1.0 + float(np.dot(z, beta))
    if denom < 1e-14:
        # the pole -beta is a fixed point
        return -beta.copy()
    w = -beta + 2.0 * (z + beta) / denom
    w = beta + a * (w - beta)
    w2 = float(np.dot(w, w))
    t = (w2 - 1.0) / (w2 + 3.0)
    out = w - t * (w + beta)
    return out / np.linalg.norm(out)


def _orthobasis(nrm):
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(nrm)))] = 1.0
    e1 = np.cross(nrm, ref)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(nrm, e1)


def mu_alpha(caps: CapConfiguration, alpha) -> CapConfiguration:
    """Sphere automorphism family: project to the plane tangent at
    alpha/|alpha|, dilate about the tangency point by 1-|alpha|, re-project.

    Circle-preserving for |alpha| < 1; the identity at alpha = 0; caps
    concentrate toward alpha/|alpha| as |alpha| -> 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    norm = float(np.linalg.norm(alpha))
    if norm >= 1.0:
        raise ValueError("mu_alpha needs |alpha| < 1")
    if norm < 1e-15:
        return CapConfiguration(
            centers=caps.centers.copy(), chordal=caps.chordal.copy(), boundary=caps.boundary
        )
    beta = alpha / norm
    a = 1.0 - norm
    return _transform_caps(caps, beta, a, range(len(caps.chordal)))


def _transform_caps(caps, beta, a, which):
    n = len(caps.chordal)
    m_out = caps.centers.copy()
    c_out = caps.chordal.copy()
    for i in which:
        nrm = caps.centers[i]
        chord = caps.chordal[i]
        d = 1.0 - chord * chord / 2.0
        rho = math.sqrt(max(1.0 - d * d, 0.0))
        e1, e2 = _orthobasis(nrm)
        pts = None
        for shift in (0.0, 0.35, 0.7, 1.05):
            trial = [
                d * nrm + rho * (math.cos(phi + shift) * e1 + math.sin(phi + shift) * e2)
                for phi in (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
            ]
            if all(1.0 + np.dot(t, beta) > 1e-9 for t in trial):
                pts = trial
                break
        if pts is None:
            raise RuntimeError("cap boundary hugs the projection pole")
        inside = nrm
        if 1.0 + float(np.dot(inside, beta)) < 1e-9:
            theta = 2.0 * math.asin(min(chord / 2.0, 1.0))
            inside = math.cos(theta / 2.0) * nrm + math.sin(theta / 2.0) * e1
        imgs = [_mu_point(t, beta, a) for t in pts]
        inside_img = _mu_point(inside, beta, a)
        nrm2, chord2 = _cap_from_points(*imgs, inside_img)
        m_out[i] = nrm2 / np.linalg.norm(nrm2)
        c_out[i] = chord2
    return CapConfiguration(centers=m_out, chordal=c_out, boundary=caps.boundary)


def _fibonacci_sphere(k: int) -> np.ndarray:
    i = np.arange(k) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _well_behaved(caps: CapConfiguration, b_idx) -> None:
    """Reject configurations where one sphere point lies strictly inside
    more than half of the boundary caps (disjoint packings never do)."""
    m = caps.centers[b_idx]
    d = 1.0 - caps.chordal[b_idx] ** 2 / 2.0
    samples = np.vstack([m, _fibonacci_sphere(2000)])
    counts = (samples @ m.T > d[None, :] + 1e-12).sum(axis=1)
    worst = int(counts.max())
    if worst > len(b_idx) / 2.0:
        raise ValueError(
            f"caps are not well-behaved: a point lies inside {worst} of "
            f"{len(b_idx)} boundary caps"
        )


def center_caps(caps: CapConfiguration, tol: float = 1e-6, max_iter: int = 10000):
    """Find alpha with the boundary cap centers of mu_alpha summing to ~0.

    Damped first-order iteration: step alpha against the current boundary
    centroid, halving the step whenever the residual grows.  Returns
    (alpha, centered configuration); the residual |sum m| is at most
    tol * |boundary|.
    """
    b_idx = sorted(set(caps.boundary))
    if len(b_idx) < 2:
        raise ValueError("centering needs at least two boundary caps")
    _well_behaved(caps, b_idx)

    def centroid(alpha):
        if np.linalg.norm(alpha) < 1e-15:
            cfg = caps
        else:
            nn = np.linalg.norm(alpha)
            cfg = _transform_caps(caps, alpha / nn, 1.0 - nn, b_idx)
        return cfg.centers[b_idx].mean(axis=0)

    def clip(v):
        nv = float(np.linalg.norm(v))
        return v * (0.999999 / nv) if nv >= 0.999999 else v

    alpha = np.zeros(3)
    c = centroid(alpha)
    eta = 0.5
    stall = 0
    best = (float(np.linalg.norm(c)), alpha.copy())
    for _ in range(max_iter):
        res = float(np.linalg.norm(c))
        if res < best[0]:
            best = (res, alpha.copy())
        if res <= tol:
            break
        trial = clip(alpha - eta * c)
        c_trial = centroid(trial)
        if float(np.linalg.norm(c_trial)) < res:
            alpha, c = trial, c_trial
            eta = min(eta * 1.3, 2.0)
            stall = 0
            continue
        eta *= 0.5
        stall += 1
        if stall < 3:
            continue
        # plain steps are bouncing: secant (finite-difference Gauss-Newton)
        # rescue around the stalled point
        h = max(1e-7, 1e-4 * res)
        J = np.column_stack([
            (centroid(clip(alpha + h * np.eye(3)[k])) - c) / h for k in range(3)
        ])
        delta = -np.linalg.lstsq(J, c, rcond=None)[0]
        for scale in (1.0, 0.5, 0.25, 0.125, 1 / 16, 1 / 32, 1 / 64):
            trial = clip(alpha + scale * delta)
            c_trial = centroid(trial)
            if float(np.linalg.norm(c_trial)) < res:
                alpha, c = trial, c_trial
                eta = max(eta, 0.05)
                stall = 0
                break
        else:
            if eta < 1e-14:
                raise RuntimeError(
                    f"centering stalled: best residual {best[0]:.3e} "
                    f"(tolerance {tol:.1e})"
                )
    else:
        raise RuntimeError(
            f"centering did not reach tolerance in {max_iter} iterations: "
            f"best residual {best[0]:.3e}"
        )
    centered = mu_alpha(caps, alpha)
    return alpha, centered


def embedding_ratio(centered: CapConfiguration, g: GraphWithBoundary, tol: float = 1e-6) -> float:
    """Rayleigh quotient of the cap-center embedding.

    Requires the boundary centers to be centered within tol * |boundary|;
    then lambda2 <= ratio, and ratio <= 8D/|boundary| by chord subadditivity
    plus the cap-area budget.
    """
    b_idx = sorted(set(g.boundary))
    resid = float(np.linalg.norm(centered.centers[b_idx].sum(axis=0)))
    if resid > tol * len(b_idx):
        raise ValueError(f"configuration is not centered: residual {resid:.3e}")
    v = centered.centers
    num = 0.0
    for x, y in g.edges:
        num += float(np.sum((v[x] - v[y]) ** 2))
    den = float(np.sum(v[b_idx] ** 2))
    return num / den


@dataclass(frozen=True)
class ChainCertificate:
    lambda2: float
    ratio: float
    degree_bound: float
    max_degree: int
    boundary_size: int
    angle_residual: float
    tangency_residual: float
    overlap_residual: float
    centering_residual: float
    alpha: tuple
    cap_area_sum: float  # sum pi c^2 <= 4 pi
    chain_holds: bool


def planar_chain(g: GraphWithBoundary, tol: float = 1e-6) -> ChainCertificate:
    """Run the full pipeline and certify lambda2 <= ratio <= 8D/|boundary|."""
    from .spectra import steklov_spectrum

    lam2 = float(steklov_spectrum(g).eigenvalues[1])
    tri = triangulate(g)
    packing = circle_pack(tri)
    caps = project_to_sphere(packing)
    alpha, centered = center_caps(caps, tol=tol)
    b_idx = sorted(set(g.boundary))
    resid = float(np.linalg.norm(centered.centers[b_idx].sum(axis=0)))
    ratio = embedding_ratio(centered, g, tol=tol)
    D = g.max_degree()
    bound = 8.0 * D / len(b_idx)
    area = float(np.sum(math.pi * centered.chordal**2))
    return ChainCertificate(
        lambda2=lam2,
        ratio=ratio,
        degree_bound=bound,
        max_degree=D,
        boundary_size=len(b_idx),
        angle_residual=packing.angle_residual,
        tangency_residual=packing.tangency_residual,
        overlap_residual=packing.overlap_residual,
        centering_residual=resid,
        alpha=tuple(float(x) for x in alpha),
        cap_area_sum=area,
        chain_holds=bool(lam2 <= ratio + tol and ratio <= bound + tol),
    )


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def packing_csv(p: CirclePacking) -> str:
    lines = ["vertex,cx,cy,r"]
    for v in range(len(p.radii)):
        lines.append(
            f"{v},{format(p.centers[v,0], '.17g')},{format(p.centers[v,1], '.17g')},"
            f"{format(p.radii[v], '.17g')}"
        )
    return "\n".join(lines) + "\n"


def caps_csv(c: CapConfiguration) -> str:
    lines = ["vertex,mx,my,mz,c"]
    for v in range(len(c.chordal)):
        m = c.centers[v]
        lines.append(
            f"{v},{format(m[0], '.17g')},{format(m[1], '.17g')},{format(m[2], '.17g')},"
            f"{format(c.chordal[v], '.17g')}"
        )
    return "\n".join(lines) + "\n"


def chain_json(cert: ChainCertificate) -> str:
    obj = {
        "lambda2": cert.lambda2,
        "embedding_ratio": cert.ratio,
        "degree_bound": cert.degree_bound,
        "max_degree": cert.max_degree,
        "boundary_size": cert.boundary_size,
        "residuals": {
            "angle": cert.angle_residual,
            "tangency": cert.tangency_residual,
            "overlap": cert.overlap_residual,
            "centering": cert.centering_residual,
        },
        "alpha": list(cert.alpha),
        "cap_area_sum": cert.cap_area_sum,
        "chain_holds": cert.chain_holds,
    }
    return json.dumps(obj, indent=2) + "\n"
