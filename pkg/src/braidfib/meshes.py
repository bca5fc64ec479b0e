"""Fiber surfaces arg(g)^{-1}(phi) in C x S^1 as triangle meshes.

The level set {arg g = phi} equals {Im(e^{-i phi} g) = 0, Re(e^{-i phi} g) > 0},
which avoids evaluating arg anywhere: marching tetrahedra extract the zero
set of s = Im(e^{-i phi} g) on a grid over [-R, R]^2 x S^1 (periodic in t),
and triangles are then clipped against rho = Re(e^{-i phi} g) >= 0.  The
rho = 0 cut locus is exactly the braid g = 0, so the clip boundary is the
braid boundary of the fiber; the remaining boundary lies on the box walls.

Welding is exact where it matters: marching vertices are keyed by the grid
edge they sit on (periodic node ids make the t = 0 and t = 2*pi slices the
same nodes), clip vertices by the mesh edge they cut; a final quantized
pass merges vertices that landed on shared grid nodes.

Euler characteristics are reported in the capped convention: each outer
wall boundary component counts as a virtual disk, so a P-fibered loop's
fiber scores n - (number of bands), the disk-band count of the braided
surface.  The raw V - E + F of the emitted (uncapped) geometry is also
available.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .rootfinding import polyval
from .svgout import fmt

__all__ = ["FiberMesh", "level_set", "euler_characteristic", "sweep_report", "MeshError"]

# cube corners are bit-coded dx + 2 dy + 4 dt; the six Kuhn tetrahedra share
# the main diagonal (0,7) and split every cube face the same way as the
# neighbouring cube, so the global triangulation is face-consistent
TETS = ((0, 1, 3, 7), (0, 1, 5, 7), (0, 2, 3, 7),
        (0, 2, 6, 7), (0, 4, 5, 7), (0, 4, 6, 7))
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
CASE_TRIS = {
    1: ((0, 1, 2),), 14: ((0, 1, 2),),
    2: ((0, 3, 4),), 13: ((0, 3, 4),),
    4: ((1, 3, 5),), 11: ((1, 3, 5),),
    8: ((2, 4, 5),), 7: ((2, 4, 5),),
    3: ((1, 3, 4), (1, 4, 2)), 12: ((1, 3, 4), (1, 4, 2)),
    5: ((0, 3, 5), (0, 5, 2)), 10: ((0, 3, 5), (0, 5, 2)),
    9: ((1, 0, 4), (1, 4, 5)), 6: ((1, 0, 4), (1, 4, 5)),
}


class MeshError(RuntimeError):
    pass


class CriticalPhiError(MeshError):
    """The requested fiber argument is (numerically) a critical value of arg g."""


# fixed irrational grid offset (as a fraction of one cell): keeps field zeros
# off the grid nodes, which would otherwise weld into degenerate umbrellas
GRID_SHIFT_X = 1.7320508075688772e-4
GRID_SHIFT_Y = 2.2360679774997896e-4


@dataclass
class FiberMesh:
    vertices: np.ndarray        # (V, 3): x, y, t  (t stored mod 2*pi)
    triangles: np.ndarray       # (F, 3) vertex indices
    boundary_polylines: list    # [(kind, [vertex ids]), ...], kind in {braid, wall}
    phi: float
    grid: tuple
    radius: float
    meta: dict = field(default_factory=dict)

    @property
    def wall_components(self):
        return sum(1 for kind, _ in self.boundary_polylines if kind == "wall")

    @property
    def braid_components(self):
        return sum(1 for kind, _ in self.boundary_polylines if kind == "braid")

    def edge_counts(self):
        e = np.sort(np.concatenate([self.triangles[:, (0, 1)],
                                    self.triangles[:, (1, 2)],
                                    self.triangles[:, (2, 0)]]), axis=1)
        keys = e[:, 0].astype(np.int64) * len(self.vertices) + e[:, 1]
        uniq, counts = np.unique(keys, return_counts=True)
        return uniq, counts

    def euler_raw(self):
        uniq, counts = self.edge_counts()
        if np.any(counts > 2):
            raise MeshError("non-manifold edge (more than two incident triangles)")
        return int(len(self.vertices) - len(uniq) + len(self.triangles))

    def component_count(self):
        parent = np.arange(len(self.vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for tri in self.triangles:
            a, b, c = (int(v) for v in tri)
            ra, rb, rc = find(a), find(b), find(c)
            parent[ra] = rb
            parent[find(rb)] = find(rc)
        roots = {find(int(v)) for tri in self.triangles for v in tri}
        return len(roots)

    def save_obj(self, path):
        with open(path, "w") as f:
            f.write(f"# fiber mesh phi={fmt(self.phi)} grid={self.grid} radius={fmt(self.radius)}\n")
            for v in self.vertices:
                f.write(f"v {fmt(v[0])} {fmt(v[1])} {fmt(v[2])}\n")
            for tri in self.triangles:
                f.write(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}\n")

    def save_ply(self, path):
        import struct

        head = (
            "ply\nformat binary_little_endian 1.0\n"
            f"element vertex {len(self.vertices)}\n"
            "property double x\nproperty double y\nproperty double z\n"
            f"element face {len(self.triangles)}\n"
            "property list uchar int vertex_indices\nend_header\n"
        )
        with open(path, "wb") as f:
            f.write(head.encode("ascii"))
            for v in self.vertices:
                f.write(struct.pack("<3d", v[0], v[1], v[2]))
            for tri in self.triangles:
                f.write(struct.pack("<B3i", 3, int(tri[0]), int(tri[1]), int(tri[2])))


def euler_characteristic(mesh: FiberMesh):
    """V - E + F plus one virtual cap per outer-wall boundary component.

    The caps make the number agree with the disk-band count n - l of the
    braided fiber surface (outer annular collars never change it); the
    emitted geometry itself stays uncapped.  Raises on non-manifold edges.
    """
    return mesh.euler_raw() + mesh.wall_components


def _field_slices(loop, ts, xs, ys):
    """g_t(u) on the grid, one complex slice per t sample."""
    U = xs[:, None] + 1j * ys[None, :]
    out = np.empty((len(ts), len(xs), len(ys)), dtype=np.complex128)
    for i, t in enumerate(ts):
        out[i] = polyval(loop.coeffs_at(t), U)
    return out


def level_set(loop, phi, grid=(192, 192, 384), radius=None, critical_args=None,
              arg_tol=1e-4, _field=None, _roots=None):
    """Triangle mesh of the fiber arg(g)^{-1}(phi) on a periodic grid.

    ``grid`` is (Nx, Ny, Nt) cells; ``radius`` defaults to twice (1 + the
    largest root/critical point magnitude).  phi must be a regular value:
    its distance to every critical argument (supplied or computed) is
    checked, as is the grid's ability to resolve the strands (minimum
    strand separation at least two cells).
    """
    nx, ny, nt = grid
    if min(nx, ny, nt) < 16:
        raise ValueError("grid dimensions must be at least 16")
    phi = float(phi) % (2 * math.pi)

    roots = _roots if _roots is not None else _tracked_roots(loop, nt)
    if critical_args is None:
        critical_args = _critical_args(loop)
    for a in critical_args:
        d = abs((phi - a + math.pi) % (2 * math.pi) - math.pi)
        if d < arg_tol:
            raise CriticalPhiError(f"phi={phi:.6f} is within {arg_tol} of the "
                                   f"critical argument {a:.6f}")

    if radius is None:
        radius = _auto_radius(loop, roots)
    if float(np.max(np.abs(roots))) > 0.5 * radius:
        raise MeshError("clip radius too small: roots must stay within radius/2")
    cell = 2.0 * radius / min(nx, ny)
    sep = _min_root_separation(roots)
    if loop.degree > 1 and sep < 2.0 * cell:
        raise MeshError(f"grid too coarse: strand separation {sep:.4g} below two cells "
                        f"({2 * cell:.4g})")

    ts, xs, ys = _grid_axes(grid, radius)
    G = _field if _field is not None else _field_slices(loop, ts, xs, ys)
    rot = np.exp(-1j * phi)

    mesh = _march(G, rot, xs, ys, ts, radius, grid)
    mesh.phi = phi
    mesh.meta.update({"critical_args": [float(a) for a in critical_args]})
    return mesh


def _grid_axes(grid, radius):
    nx, ny, nt = grid
    ts = np.linspace(0.0, 2 * math.pi, nt, endpoint=False)
    xs = np.linspace(-radius, radius, nx + 1) + GRID_SHIFT_X * (2 * radius / nx)
    ys = np.linspace(-radius, radius, ny + 1) + GRID_SHIFT_Y * (2 * radius / ny)
    return ts, xs, ys


def _tracked_roots(loop, nt):
    from .polyloops import track

    if loop.degree == 1:
        ts = np.linspace(0.0, 2 * math.pi, 256 + 1)
        return np.array([[-loop.coeffs_at(t)[0]] for t in ts])
    sb = track(loop, "roots", N=max(256, nt // 2))
    return sb.points


def _critical_args(loop):
    if loop.degree < 2:
        return []
    from .argmap import arg_critical_points
    from .polyloops import critical_data

    cd = critical_data(loop, N=1024)
    return sorted({p.critical_arg for p in arg_critical_points(cd)})


def _auto_radius(loop, roots):
    m = float(np.max(np.abs(roots))) if roots.size else 1.0
    if loop.degree >= 2:
        from .polyloops import track

        sb = track(loop, "critical_points", N=256)
        m = max(m, float(np.max(np.abs(sb.points))))
    return 2.0 * (1.0 + m)


def _min_root_separation(roots):
    k = roots.shape[1]
    if k < 2:
        return np.inf
    d = np.inf
    for a in range(k):
        for b in range(a + 1, k):
            d = min(d, float(np.min(np.abs(roots[:, a] - roots[:, b]))))
    return d


def _march(G, rot, xs, ys, ts, radius, grid):
    nx, ny, nt = grid
    n_nodes_slice = (nx + 1) * (ny + 1)

    corner_keys = []   # (M, 2) int64 node-id pairs per emitted triangle corner
    corner_xyz = []
    corner_rho = []

    # local corner offsets: bit k of the corner code selects dx, dy, dt
    for it in range(nt):
        it1 = (it + 1) % nt
        s0 = (G[it] * rot).imag
        s1 = (G[it1] * rot).imag
        r0 = (G[it] * rot).real
        r1 = (G[it1] * rot).real
        t0v, t1v = ts[it], ts[it] + (ts[1] - ts[0])

        ids0 = (np.arange(nx + 1)[:, None] + (nx + 1) * np.arange(ny + 1)[None, :]
                + n_nodes_slice * it)
        ids1 = (np.arange(nx + 1)[:, None] + (nx + 1) * np.arange(ny + 1)[None, :]
                + n_nodes_slice * it1)

        def corner(bits):
            dx, dy, dt = bits & 1, (bits >> 1) & 1, (bits >> 2) & 1
            sl = (slice(dx, nx + dx), slice(dy, ny + dy))
            s = (s1 if dt else s0)[sl].ravel()
            r = (r1 if dt else r0)[sl].ravel()
            ids = (ids1 if dt else ids0)[sl].ravel()
            x = np.broadcast_to(xs[dx:nx + dx, None], (nx, ny)).ravel()
            y = np.broadcast_to(ys[None, dy:ny + dy], (nx, ny)).ravel()
            t = np.full(nx * ny, t1v if dt else t0v)
            return s, r, ids, x, y, t

        cdata = [corner(b) for b in range(8)]
        # only cubes whose corner signs straddle zero can cut the surface
        pos = np.stack([cd[0] >= 0 for cd in cdata])
        active = np.nonzero(np.any(pos, axis=0) & ~np.all(pos, axis=0))[0]
        if not active.size:
            continue
        cdata = [tuple(arr[active] for arr in cd) for cd in cdata]

        for tet in TETS:
            svals = [cdata[c][0] for c in tet]
            mask = ((svals[0] >= 0).astype(np.int8)
                    | ((svals[1] >= 0).astype(np.int8) << 1)
                    | ((svals[2] >= 0).astype(np.int8) << 2)
                    | ((svals[3] >= 0).astype(np.int8) << 3))
            for case, tris in CASE_TRIS.items():
                sel = np.nonzero(mask == case)[0]
                if not sel.size:
                    continue
                everts = {}
                for tri in tris:
                    for e in tri:
                        if e in everts:
                            continue
                        a, b = TET_EDGES[e]
                        ca, cb = tet[a], tet[b]
                        sa, sb_ = cdata[ca][0][sel], cdata[cb][0][sel]
                        tau = sa / (sa - sb_)
                        ia, ib = cdata[ca][2][sel], cdata[cb][2][sel]
                        keys = np.stack([np.minimum(ia, ib), np.maximum(ia, ib)], axis=1)
                        xyz = np.stack([
                            cdata[ca][3][sel] + tau * (cdata[cb][3][sel] - cdata[ca][3][sel]),
                            cdata[ca][4][sel] + tau * (cdata[cb][4][sel] - cdata[ca][4][sel]),
                            cdata[ca][5][sel] + tau * (cdata[cb][5][sel] - cdata[ca][5][sel]),
                        ], axis=1)
                        rho = cdata[ca][1][sel] + tau * (cdata[cb][1][sel] - cdata[ca][1][sel])
                        everts[e] = (keys, xyz, rho)
                for tri in tris:
                    ka, xa, ra = everts[tri[0]]
                    kb, xb, rb = everts[tri[1]]
                    kc, xc, rc = everts[tri[2]]
                    corner_keys.append(np.stack([ka, kb, kc], axis=1))  # (k, 3, 2)
                    corner_xyz.append(np.stack([xa, xb, xc], axis=1))   # (k, 3, 3)
                    corner_rho.append(np.stack([ra, rb, rc], axis=1))   # (k, 3)

    if not corner_keys:
        return FiberMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), [],
                         0.0, grid, radius, meta={"empty": True})

    keys = np.concatenate(corner_keys).reshape(-1, 2)   # interleaved t0c0, t0c1, ...
    xyz = np.concatenate(corner_xyz).reshape(-1, 3)
    rho = np.concatenate(corner_rho).reshape(-1)
    packed = keys[:, 0] * np.int64(n_nodes_slice * nt) + keys[:, 1]
    uniq, first, inverse = np.unique(packed, return_index=True, return_inverse=True)
    verts = xyz[first]
    vrho = rho[first]
    tris = inverse.reshape(-1, 3)

    verts, tris, braid_cut = _clip(verts, vrho, tris)
    verts, tris = _quantize_weld(verts, tris, 1e-7 * radius)
    tris = tris[(tris[:, 0] != tris[:, 1]) & (tris[:, 1] != tris[:, 2])
                & (tris[:, 0] != tris[:, 2])]
    tris = _mod2_reduce(tris)
    verts, tris = _compact(verts, tris)

    mesh = FiberMesh(verts, tris, [], 0.0, grid, radius)
    mesh.boundary_polylines = _boundary_polylines(mesh, radius)
    return mesh


def _clip(verts, vrho, tris):
    """Drop the rho < 0 side, splitting straddling triangles on rho = 0."""
    neg = vrho < 0.0
    tneg = neg[tris]
    nneg = tneg.sum(axis=1)

    keep = tris[nneg == 0]
    out_tris = [keep]
    new_edges = {}
    extra = []

    def cut_vertex(a, b):
        key = (a, b) if a < b else (b, a)
        if key in new_edges:
            return new_edges[key]
        ra, rb = vrho[a], vrho[b]
        sigma = ra / (ra - rb)
        idx = len(extra) + len(verts)
        extra.append(verts[a] + sigma * (verts[b] - verts[a]))
        new_edges[key] = idx
        return idx

    worklist = np.nonzero((nneg == 1) | (nneg == 2))[0]
    split_tris = []
    for ti in worklist:
        tri = tris[ti]
        flags = tneg[ti]
        if nneg[ti] == 1:
            k = int(np.nonzero(flags)[0][0])
            a = int(tri[k])                 # the negative corner
            b, c = int(tri[(k + 1) % 3]), int(tri[(k + 2) % 3])
            p = cut_vertex(a, b)
            q = cut_vertex(a, c)
            split_tris.append((p, b, c))
            split_tris.append((p, c, q))
        else:
            k = int(np.nonzero(~flags)[0][0])
            a = int(tri[k])                 # the positive corner
            b, c = int(tri[(k + 1) % 3]), int(tri[(k + 2) % 3])
            p = cut_vertex(a, b)
            q = cut_vertex(a, c)
            split_tris.append((a, p, q))
    if split_tris:
        out_tris.append(np.array(split_tris, dtype=np.int64))
    all_tris = np.concatenate(out_tris) if out_tris else np.zeros((0, 3), dtype=np.int64)
    all_verts = np.vstack([verts, np.array(extra)]) if extra else verts
    return all_verts, all_tris, set(new_edges.values())


def _mod2_reduce(tris):
    """Drop coincident triangle pairs (unoriented chain reduction mod 2)."""
    if not len(tris):
        return tris
    key = np.sort(tris, axis=1)
    v = np.int64(key.max()) + 1
    if v ** 3 < np.iinfo(np.int64).max // 2:
        packed = (key[:, 0] * v + key[:, 1]) * v + key[:, 2]
        _, index, counts = np.unique(packed, return_index=True, return_counts=True)
    else:
        _, index, counts = np.unique(key, axis=0, return_index=True, return_counts=True)
    keep = np.zeros(len(tris), dtype=bool)
    keep[index[counts % 2 == 1]] = True
    return tris[keep]


def _quantize_weld(verts, tris, tol):
    if not len(verts):
        return verts, tris
    q = np.round(verts / tol).astype(np.int64)
    _, first, inverse = np.unique(q, axis=0, return_index=True, return_inverse=True)
    return verts[first], inverse[tris]


def _compact(verts, tris):
    used = np.unique(tris)
    remap = -np.ones(len(verts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    return verts[used], remap[tris]


def _boundary_polylines(mesh, radius):
    uniq, counts = mesh.edge_counts()
    nb = uniq[counts == 1]
    if not nb.size:
        return []
    V = len(mesh.vertices)
    edges = np.stack([nb // V, nb % V], axis=1)
    adj = {}
    for a, b in edges:
        adj.setdefault(int(a), []).append(int(b))
        adj.setdefault(int(b), []).append(int(a))
    seen = set()
    polylines = []
    for start in sorted(adj):
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxts = [v for v in adj[cur] if v != prev and v not in seen]
            if not nxts:
                nxts = [v for v in adj[cur] if v != prev]
                if nxts and nxts[0] == start and len(chain) > 2:
                    break
                break
            prev, cur = cur, nxts[0]
            chain.append(cur)
            seen.add(cur)
        wallish = np.max(np.abs(mesh.vertices[chain][:, :2]), axis=1)
        kind = "wall" if np.max(wallish) > 0.75 * radius else "braid"
        polylines.append((kind, chain))
    return polylines


def worker_count():
    """Worker cap from BRAIDFIB_THREADS (default 1: fully deterministic order)."""
    try:
        return max(1, int(os.environ.get("BRAIDFIB_THREADS", "1")))
    except ValueError:
        return 1


def sweep_report(loop, phis, grid=(128, 128, 256), radius=None):
    """Per-phi fiber invariants and the change points between consecutive phis.

    Results are independent of the worker count: meshes are computed
    per-phi (optionally in a thread pool capped by BRAIDFIB_THREADS) and
    assembled in phi order.
    """
    from concurrent.futures import ThreadPoolExecutor

    phis = [float(p) % (2 * math.pi) for p in phis]
    crit = _critical_args(loop)
    nx, ny, nt = grid
    roots = _tracked_roots(loop, nt)
    R = radius if radius is not None else _auto_radius(loop, roots)
    ts, xs, ys = _grid_axes(grid, R)
    G = _field_slices(loop, ts, xs, ys)

    def one(phi):
        mesh = level_set(loop, phi, grid=grid, radius=R, critical_args=crit,
                         _field=G, _roots=roots)
        return {
            "phi": phi,
            "chi": euler_characteristic(mesh),
            "chi_raw": mesh.euler_raw(),
            "components": mesh.component_count(),
            "wall_components": mesh.wall_components,
        }

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, phis))
    else:
        rows = [one(phi) for phi in phis]

    changes = []
    for a, b in zip(rows, rows[1:]):
        if a["chi"] != b["chi"] or a["components"] != b["components"]:
            inside = [c for c in crit
                      if _in_arc(a["phi"], b["phi"], c)]
            changes.append({
                "between": (a["phi"], b["phi"]),
                "delta_chi": b["chi"] - a["chi"],
                "critical_args_inside": inside,
            })
    return {"rows": rows, "changes": changes, "critical_args": crit}


def _in_arc(a, b, c):
    span = (b - a) % (2 * math.pi)
    return (c - a) % (2 * math.pi) < span
