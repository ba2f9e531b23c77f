#!/usr/bin/env python3
"""Offline generator for the fixture meshes under fixtures/meshes/.

Emits the solver's ASCII mesh format:

    dim nv ne
    nv lines of vertex coordinates
    ne lines of 1-based vertex ids (dim+1 per element)
    facet <elem> <local> <tag>     # one line per tagged boundary facet

Tags: 1/2 = x lo/hi, 3/4 = y lo/hi, 5/6 = z lo/hi, 7 = reflecting wall.
Local facet f is the facet opposite local vertex f.

The checked-in fixtures were produced by `python3 tools/meshgen.py`; the
script is deterministic (fixed seeds), so regenerating reproduces them
bit-for-bit with the same numpy version.
"""
import os
import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures", "meshes")

TAG_AXIS = {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4, (2, 0): 5, (2, 1): 6}
TAG_WALL = 7


def boundary_facets(conn, dim):
    """(elem, local) pairs of facets that appear exactly once."""
    seen = {}
    for e, verts in enumerate(conn):
        for f in range(dim + 1):
            key = tuple(sorted(v for k, v in enumerate(verts) if k != f))
            seen.setdefault(key, []).append((e, f))
    out = []
    for key, owners in seen.items():
        if len(owners) == 1:
            out.append((owners[0], key))
        elif len(owners) != 2:
            raise RuntimeError(f"non-manifold facet {key}: {owners}")
    return out


def write_mesh(name, dim, xyz, conn, tagger):
    os.makedirs(OUT, exist_ok=True)
    path = os.path.join(OUT, name + ".txt")
    lines = [f"# fixture mesh: {name}", f"{dim} {len(xyz)} {len(conn)}"]
    for p in xyz:
        lines.append(" ".join(repr(float(c)) for c in p[:dim]))
    for verts in conn:
        lines.append(" ".join(str(v + 1) for v in verts))
    ntag = 0
    for (e, f), key in boundary_facets(conn, dim):
        tag = tagger([xyz[v] for v in key])
        if tag is None:
            raise RuntimeError(f"{name}: untagged boundary facet {key}")
        lines.append(f"facet {e + 1} {f + 1} {tag}")
        ntag += 1
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"{name}: {len(xyz)} verts, {len(conn)} elems, {ntag} boundary facets")


def axis_tagger(lo, hi, dim, tol=1e-9):
    def tag(pts):
        for ax in range(dim):
            for side, val in ((0, lo[ax]), (1, hi[ax])):
                if all(abs(p[ax] - val) <= tol for p in pts):
                    return TAG_AXIS[(ax, side)]
        return None
    return tag


def square_mesh(name, lo, hi, nx, perturb=0.0, seed=0, diagonal="fixed"):
    """nx*nx squares on [lo,hi]^2, each split into two triangles.

    diagonal: "fixed" (all one way), "alternate" (checkerboard), or "random"
    (seeded per-quad choice; together with vertex jitter this breaks the
    translation symmetry that otherwise produces structured-mesh error
    cancellation)."""
    rng = np.random.default_rng(seed)
    xs = np.linspace(lo, hi, nx + 1)
    ys = np.linspace(lo, hi, nx + 1)
    vid = lambda i, j: j * (nx + 1) + i
    xyz = [(xs[i], ys[j]) for j in range(nx + 1) for i in range(nx + 1)]
    if perturb > 0.0:
        h = (hi - lo) / nx
        xyz = [list(p) for p in xyz]
        for j in range(1, nx):
            for i in range(1, nx):
                d = rng.uniform(-perturb, perturb, 2) * h
                xyz[vid(i, j)][0] += d[0]
                xyz[vid(i, j)][1] += d[1]
    def area(a, b, c):
        return 0.5 * ((xyz[b][0] - xyz[a][0]) * (xyz[c][1] - xyz[a][1])
                      - (xyz[b][1] - xyz[a][1]) * (xyz[c][0] - xyz[a][0]))

    conn = []
    for j in range(nx):
        for i in range(nx):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            flip = {"fixed": False, "alternate": (i + j) % 2 == 1,
                    "random": bool(rng.integers(2))}[diagonal]
            split = [(v00, v10, v01), (v10, v11, v01)] if flip else \
                    [(v00, v10, v11), (v00, v11, v01)]
            if min(area(*t) for t in split) <= 0.0:
                # non-convex jittered quad: only the other diagonal is valid
                split = [(v00, v10, v11), (v00, v11, v01)] if flip else \
                        [(v00, v10, v01), (v10, v11, v01)]
                if min(area(*t) for t in split) <= 0.0:
                    raise RuntimeError(f"{name}: quad ({i},{j}) inverted both ways")
            conn.extend(split)
    write_mesh(name, 2, xyz, conn, axis_tagger((lo, lo), (hi, hi), 2))


def diagonal_profile(rng, period, kmin=3, kmax=48, samples=4096):
    """Periodic multiscale profile: sum of sinusoids with 1/k amplitudes and
    random phases, normalized to peak 1. Contains structure from domain scale
    down to a few cells of the finest fixture level."""
    ks = np.arange(kmin, kmax + 1)
    amps = 1.0 / ks
    phis = rng.uniform(0, 2 * np.pi, len(ks))

    def raw(q):
        return float(np.sum(amps * np.sin(2 * np.pi * ks * q / period + phis)))

    peak = max(abs(raw(q)) for q in np.linspace(0, period, samples,
                                                endpoint=False))
    return lambda q: raw(q) / peak


def irregular_square_mesh(name, lo, hi, nx, gt, gl, bits, at=0.10, bl=0.28):
    """Non-uniform triangulation of [lo,hi]^2 with diagonally striped
    distortion: vertex displacement and diagonal orientation depend only on
    q = x - y, through the fixed profiles gt (transverse) and gl
    (longitudinal) and the per-diagonal bit pattern.

    Isotropic random meshes (jittered lattices, Poisson-disk Delaunay) leave
    the scheme's flux errors statistically symmetric, and the smooth linear
    advection test then converges one order above the truncation order.
    Making the irregularity constant along the (1,1) flow direction removes
    that cancellation, which is the regime the non-uniform convergence
    criterion probes.  Boundary vertices stay uniform (a 2-cell blend band)
    so opposite edges match under periodic wraparound."""
    h = (hi - lo) / nx
    xs = np.linspace(lo, hi, nx + 1)
    vid = lambda i, j: j * (nx + 1) + i
    P = [[xs[i], xs[j]] for j in range(nx + 1) for i in range(nx + 1)]
    for j in range(nx + 1):
        for i in range(nx + 1):
            w = min(1.0, min(i, j, nx - i, nx - j) / 2.0)
            if w == 0.0:
                continue
            q = xs[i] - xs[j]
            st = at * h * gt(q)
            sl = bl * h * gl(q)
            P[vid(i, j)][0] += w * (st + sl)
            P[vid(i, j)][1] += w * (-st + sl)

    def area(a, b, c):
        return 0.5 * ((P[b][0] - P[a][0]) * (P[c][1] - P[a][1])
                      - (P[b][1] - P[a][1]) * (P[c][0] - P[a][0]))

    conn = []
    amin = 1e9
    for j in range(nx):
        for i in range(nx):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            flip = bool(bits[(i - j) % len(bits)])
            split = [(v00, v10, v01), (v10, v11, v01)] if flip else \
                    [(v00, v10, v11), (v00, v11, v01)]
            if min(area(*t) for t in split) <= 0:
                # non-convex distorted quad: only the other diagonal is valid
                split = [(v00, v10, v11), (v00, v11, v01)] if flip else \
                        [(v00, v10, v01), (v10, v11, v01)]
            amin = min(amin, min(area(*t) for t in split))
            conn.extend(split)
    if amin <= 0:
        raise RuntimeError(f"{name}: inverted element")
    write_mesh(name, 2, [tuple(p) for p in P], conn,
               axis_tagger((lo, lo), (hi, hi), 2))


def disk_mesh(name, nr, radius=1.0):
    """Hex-based polar triangulation: ring k holds 6k vertices at radius k/nr."""
    xyz = [(0.0, 0.0)]
    ring = [[0]]
    for k in range(1, nr + 1):
        ids = []
        r = radius * k / nr
        for j in range(6 * k):
            th = 2.0 * np.pi * j / (6 * k)
            ids.append(len(xyz))
            xyz.append((r * np.cos(th), r * np.sin(th)))
        ring.append(ids)
    conn = []
    for k in range(1, nr + 1):
        outer, inner = ring[k], ring[k - 1]
        for s in range(6):
            A = [outer[(s * k + i) % (6 * k)] for i in range(k + 1)]
            if k == 1:
                conn.append((inner[0], A[0], A[1]))
                continue
            B = [inner[(s * (k - 1) + i) % (6 * (k - 1))] for i in range(k)]
            for i in range(k):
                conn.append((A[i], A[i + 1], B[i]))
            for i in range(k - 1):
                conn.append((B[i], A[i + 1], B[i + 1]))
    def tag(pts):
        if all(abs(np.hypot(*p) - radius) <= 1e-9 * radius for p in pts):
            return TAG_WALL
        return None
    write_mesh(name, 2, xyz, conn, tag)


KUHN_PERMS = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]


def cube_conn(nx):
    vid = lambda i, j, k: (k * (nx + 1) + j) * (nx + 1) + i
    conn = []
    for k in range(nx):
        for j in range(nx):
            for i in range(nx):
                for perm in KUHN_PERMS:
                    idx = [np.array((i, j, k))]
                    for ax in perm:
                        idx.append(idx[-1] + np.eye(3, dtype=int)[ax])
                    conn.append(tuple(vid(*v) for v in idx))
    return conn


def cube_mesh(name, lo, hi, nx):
    xs = np.linspace(lo, hi, nx + 1)
    xyz = [(xs[i], xs[j], xs[k])
           for k in range(nx + 1) for j in range(nx + 1) for i in range(nx + 1)]
    write_mesh(name, 3, xyz, cube_conn(nx), axis_tagger((lo,) * 3, (hi,) * 3, 3))


def sphere_map(p, radius):
    """Smooth cube-to-ball map. The max-norm shell |p|_inf = c lands exactly on
    the sphere of radius c*radius, so cube grid shells become concentric
    spheres (and the grid shell at 0.2 carries the explosion IC jump)."""
    ninf = np.max(np.abs(p))
    if ninf == 0.0:
        return (0.0, 0.0, 0.0)
    x, y, z = p / ninf
    q = np.array([x * np.sqrt(1 - y * y / 2 - z * z / 2 + y * y * z * z / 3),
                  y * np.sqrt(1 - z * z / 2 - x * x / 2 + z * z * x * x / 3),
                  z * np.sqrt(1 - x * x / 2 - y * y / 2 + x * x * y * y / 3)])
    return tuple(radius * ninf * q)


def ball_mesh(name, nx, radius=1.0):
    xs = np.linspace(-1.0, 1.0, nx + 1)
    raw = [np.array((xs[i], xs[j], xs[k]))
           for k in range(nx + 1) for j in range(nx + 1) for i in range(nx + 1)]
    xyz = [sphere_map(p, radius) for p in raw]
    conn = cube_conn(nx)

    def vol(pts, verts):
        a, b, c, d = (np.array(pts[v]) for v in verts)
        return np.linalg.det(np.stack([b - a, c - a, d - a])) / 6.0

    flips = sum(1 for verts in conn if vol(raw, verts) * vol(xyz, verts) <= 0.0)
    if flips:
        raise RuntimeError(f"{name}: map inverted {flips} tetrahedra")
    total = sum(abs(vol(xyz, verts)) for verts in conn)
    vmin = min(abs(vol(xyz, verts)) for verts in conn)
    print(f"{name}: min tet volume {vmin:.3e}, "
          f"total {total:.5f} (ball {4 * np.pi / 3:.5f})")
    def tag(pts):
        if all(abs(np.linalg.norm(p) - radius) <= 1e-9 * radius for p in pts):
            return TAG_WALL
        return None
    write_mesh(name, 3, xyz, conn, tag)


def main():
    rng = np.random.default_rng(777)
    gt = diagonal_profile(rng, period=4.0)
    gl = diagonal_profile(rng, period=4.0)
    bits = rng.integers(0, 2, 257)
    for nx in (8, 16, 32, 64):
        square_mesh(f"square_uniform_nx{nx}", -2.0, 2.0, nx)
        irregular_square_mesh(f"square_irregular_nx{nx}", -2.0, 2.0, nx,
                              gt, gl, bits)
    for nx in (10, 20, 40, 80):
        square_mesh(f"vortex_nx{nx}", 0.0, 10.0, nx)
    for nr in (15, 30, 60):
        disk_mesh(f"disk_nr{nr}", nr)
    for nx in (4, 6, 8, 10):
        cube_mesh(f"cube_nx{nx}", -2.0, 2.0, nx)
    for nx in (10, 20):
        ball_mesh(f"ball_nx{nx}", nx)


if __name__ == "__main__":
    main()
