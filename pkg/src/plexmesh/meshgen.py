"""Deterministic structured mesh builders for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .gmsh_io import RawMesh


def interval_mesh(ncells: int, length: float = 1.0) -> RawMesh:
    """1D mesh of ncells equal segments on [0, length]."""
    if ncells < 1:
        raise ValueError("need at least one cell")
    xs = np.linspace(0.0, length, ncells + 1).reshape(-1, 1)
    cells = np.column_stack([np.arange(ncells), np.arange(1, ncells + 1)])
    return RawMesh(dim=1, vertices=xs, cells=cells,
                   cell_region_ids=np.zeros(ncells, dtype=np.int64),
                   boundary_facets=np.empty((0, 1), dtype=np.int64),
                   boundary_markers=np.empty(0, dtype=np.int64))


def triangle_grid(nx: int, ny: int) -> RawMesh:
    """Unit square split into an nx x ny grid of quads, two triangles each.

    Vertices are numbered row-major (x fastest); each quad is split along its
    lower-left to upper-right diagonal.  Boundary edges carry markers
    1=bottom, 2=right, 3=top, 4=left.
    """
    if nx < 1 or ny < 1:
        raise ValueError("grid needs at least one quad per direction")
    xs = np.linspace(0.0, 1.0, nx + 1)
    ys = np.linspace(0.0, 1.0, ny + 1)
    verts = np.array([(x, y) for y in ys for x in xs])
    vid = lambda i, j: j * (nx + 1) + i

    cells = []
    for j in range(ny):
        for i in range(nx):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            cells.append((v00, v10, v11))
            cells.append((v00, v11, v01))

    bfacets, markers = [], []
    for i in range(nx):
        bfacets.append((vid(i, 0), vid(i + 1, 0)))
        markers.append(1)
    for j in range(ny):
        bfacets.append((vid(nx, j), vid(nx, j + 1)))
        markers.append(2)
    for i in range(nx):
        bfacets.append((vid(i, ny), vid(i + 1, ny)))
        markers.append(3)
    for j in range(ny):
        bfacets.append((vid(0, j), vid(0, j + 1)))
        markers.append(4)

    nc = len(cells)
    return RawMesh(dim=2, vertices=verts, cells=np.array(cells, dtype=np.int64),
                   cell_region_ids=np.zeros(nc, dtype=np.int64),
                   boundary_facets=np.array(bfacets, dtype=np.int64),
                   boundary_markers=np.array(markers, dtype=np.int64))


_BOX_TETS = (  # Kuhn decomposition of the unit cube into six tetrahedra
    (0, 1, 3, 7), (0, 1, 7, 5), (0, 5, 7, 4),
    (0, 3, 2, 7), (0, 6, 4, 7), (0, 2, 6, 7),
)


def tet_box(nx: int, ny: int, nz: int) -> RawMesh:
    """Unit cube as an nx x ny x nz grid of boxes, six tetrahedra each.

    Boundary triangles carry markers 1..6 for the x=0, x=1, y=0, y=1, z=0,
    z=1 faces respectively.
    """
    if min(nx, ny, nz) < 1:
        raise ValueError("grid needs at least one box per direction")
    xs = np.linspace(0.0, 1.0, nx + 1)
    ys = np.linspace(0.0, 1.0, ny + 1)
    zs = np.linspace(0.0, 1.0, nz + 1)
    verts = np.array([(x, y, z) for z in zs for y in ys for x in xs])
    vid = lambda i, j, k: (k * (ny + 1) + j) * (nx + 1) + i

    cells = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                corner = [vid(i + a, j + b, k + c)
                          for c in (0, 1) for b in (0, 1) for a in (0, 1)]
                for tet in _BOX_TETS:
                    cells.append(tuple(corner[t] for t in tet))
    cells = np.array(cells, dtype=np.int64)

    # Boundary faces: the two triangles of each outer box face, matching the
    # tetrahedralization (diagonals inherited from the Kuhn split).
    bfacets, markers = [], []
    cell_faces = set()
    for cell in cells:
        for f in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
            cell_faces.add(tuple(sorted(cell[t] for t in f)))

    def emit(quad, marker):
        # quad = (a, b, c, d) corners in cyclic order; pick the diagonal that
        # exists in the tetrahedralization
        a, b, c, d = quad
        for tri in ((a, b, c), (a, c, d), (a, b, d), (b, c, d)):
            key = tuple(sorted(tri))
            if key in cell_faces:
                bfacets.append(key)
                markers.append(marker)

    for k in range(nz):
        for j in range(ny):
            emit((vid(0, j, k), vid(0, j + 1, k), vid(0, j + 1, k + 1), vid(0, j, k + 1)), 1)
            emit((vid(nx, j, k), vid(nx, j + 1, k), vid(nx, j + 1, k + 1), vid(nx, j, k + 1)), 2)
    for k in range(nz):
        for i in range(nx):
            emit((vid(i, 0, k), vid(i + 1, 0, k), vid(i + 1, 0, k + 1), vid(i, 0, k + 1)), 3)
            emit((vid(i, ny, k), vid(i + 1, ny, k), vid(i + 1, ny, k + 1), vid(i, ny, k + 1)), 4)
    for j in range(ny):
        for i in range(nx):
            emit((vid(i, j, 0), vid(i + 1, j, 0), vid(i + 1, j + 1, 0), vid(i, j + 1, 0)), 5)
            emit((vid(i, j, nz), vid(i + 1, j, nz), vid(i + 1, j + 1, nz), vid(i, j + 1, nz)), 6)

    return RawMesh(dim=3, vertices=verts, cells=cells,
                   cell_region_ids=np.zeros(len(cells), dtype=np.int64),
                   boundary_facets=np.array(bfacets, dtype=np.int64),
                   boundary_markers=np.array(markers, dtype=np.int64))
