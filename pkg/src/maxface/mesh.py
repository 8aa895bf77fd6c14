"""Triangle meshes of maxfaces over a (u, v) grid, written as ASCII OBJ."""

from dataclasses import dataclass

import numpy as np

FLOAT_FMT = "%.9g"


@dataclass
class MeshOutput:
    vertices: np.ndarray          # (nu * nv, 3), row-major over (i, j)
    faces: np.ndarray             # (2 (nu-1)(nv-1), 3), zero-based
    polyline: np.ndarray          # zero-based vertex indices of the singular curve
    polyline_types: list          # one type name per polyline vertex
    polyline_u: np.ndarray

    @property
    def n_vertices(self):
        return len(self.vertices)


def grid_faces(nu, nv):
    """Two triangles per grid cell, consistently oriented."""
    idx = np.arange(nu * nv).reshape(nu, nv)
    a = idx[:-1, :-1].ravel()
    b = idx[1:, :-1].ravel()
    c = idx[1:, 1:].ravel()
    d = idx[:-1, 1:].ravel()
    return np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])


def build_mesh(solution, classify=None, offset=(0.0, 0.0, 0.0)):
    """Mesh of ``solution.values`` plus the singular polyline on ``v = 0``.

    ``classify`` maps a real ``u`` to a type name for the polyline tags.
    ``offset`` translates every vertex (typically ``gamma(u0)``).
    """
    X = solution.values
    nu, nv = solution.grid_shape
    verts = X.reshape(-1, 3) + np.asarray(offset)
    faces = grid_faces(nu, nv)
    vs = np.linspace(*solution.domain.v_range, nv)
    j0 = np.flatnonzero(np.abs(vs) < 1e-12)
    poly, types, pu = np.array([], dtype=int), [], np.array([])
    if j0.size:
        us = np.linspace(*solution.domain.u_range, nu)
        a, b = solution.data.interval
        eps = 1e-9 * (b - a)  # linspace roundoff must not land on an endpoint
        inside = np.flatnonzero((us > a + eps) & (us < b - eps))
        poly = inside * nv + j0[0]
        pu = us[inside]
        types = [classify(float(u)) if classify else "" for u in pu]
    return MeshOutput(verts, faces, poly, types, pu)


def write_obj(mesh, path, comment=None):
    lines = []
    if comment:
        lines += [f"# {line}" for line in comment.splitlines()]
    lines += ["v " + " ".join(FLOAT_FMT % c for c in v) for v in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    if len(mesh.polyline) > 1:
        lines.append("l " + " ".join(str(i + 1) for i in mesh.polyline))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_obj(path):
    """Vertices, faces (zero-based) and line elements of an OBJ file."""
    verts, faces, lines = [], [], []
    with open(path) as fh:
        for raw in fh:
            parts = raw.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in parts[1:]])
            elif parts[0] == "l":
                lines.append([int(x) - 1 for x in parts[1:]])
    return np.array(verts), np.array(faces, dtype=int), lines
