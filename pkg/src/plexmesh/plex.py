"""Layered-DAG representation of unstructured mesh topology.

A mesh is encoded as a directed acyclic graph over abstract "points": one
point per topological entity (cell, facet, edge, vertex), all pooled into a
single contiguous numbering called the chart.  Each point covers the points
one level down its boundary (its *cone*); the transpose relation is the
*support*.  Strata (entities of equal dimension) are recovered from the DAG
itself as sets of points with equal depth/height, so all traversal code is
dimension independent.

Point numbering for built meshes: cells occupy [0, ncells), then vertices,
then facets (3D only), then edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PointId = int

# Local facets of a tetrahedron (a,b,c,d) and local edges of a triangle
# (x,y,z), in the creation order the interpolated numbering is defined by.
_TET_FACETS = ((0, 1, 2), (0, 2, 3), (0, 1, 3), (1, 2, 3))
_TRI_EDGES = ((1, 2), (0, 2), (0, 1))

_CELL_ARITY = {1: 2, 2: 3, 3: 4}


class Plex:
    """Immutable layered DAG over mesh points.

    Construction computes the support (transpose) adjacency and the per-point
    depth/height strata; it rejects cyclic cover relations.  All queries are
    read-only, so instances are safe for concurrent use.
    """

    def __init__(self, dim: int, cones: Sequence[Sequence[int]]):
        if dim not in (1, 2, 3):
            raise ValueError(f"unsupported mesh dimension {dim}")
        self.dim = dim
        self.chart_size = len(cones)

        sizes = np.fromiter((len(c) for c in cones), dtype=np.int64,
                            count=self.chart_size)
        self._cone_offsets = np.zeros(self.chart_size + 1, dtype=np.int64)
        np.cumsum(sizes, out=self._cone_offsets[1:])
        self._cone_targets = np.fromiter(
            (q for c in cones for q in c), dtype=np.int64,
            count=int(self._cone_offsets[-1]))
        if self._cone_targets.size and (
                self._cone_targets.min() < 0
                or self._cone_targets.max() >= self.chart_size):
            raise ValueError("cone target outside chart")

        self._support_offsets, self._support_targets = self._transpose()
        self.depths, self.heights = self._stratify()

    # -- construction helpers -------------------------------------------------

    def _transpose(self) -> tuple[np.ndarray, np.ndarray]:
        # Stable sort of cone arcs by target keeps sources ascending, so every
        # support list comes out sorted.
        counts = np.bincount(self._cone_targets, minlength=self.chart_size)
        offsets = np.zeros(self.chart_size + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        sources = np.repeat(np.arange(self.chart_size, dtype=np.int64),
                            np.diff(self._cone_offsets))
        order = np.argsort(self._cone_targets, kind="stable")
        return offsets, sources[order]

    def _stratify(self) -> tuple[np.ndarray, np.ndarray]:
        depths = self._longest_paths(self._cone_offsets, self._cone_targets)
        heights = self._longest_paths(self._support_offsets, self._support_targets)
        return depths, heights

    def _longest_paths(self, out_off, out_tgt) -> np.ndarray:
        """Longest out-edge path length from each point to an out-degree-0 point."""
        n = self.chart_size
        dist = np.zeros(n, dtype=np.int64)
        sources = np.repeat(np.arange(n, dtype=np.int64), np.diff(out_off))
        # Relaxation sweeps converge within the longest path length on a DAG;
        # a cycle never reaches a fixpoint, so n sweeps without one is fatal.
        for _ in range(n + 1):
            prev = dist.copy()
            np.maximum.at(dist, sources, dist[out_tgt] + 1)
            if np.array_equal(dist, prev):
                return dist
        raise ValueError("cover relation contains a cycle")

    # -- incidence queries -----------------------------------------------------

    def _check(self, p: int) -> int:
        p = int(p)
        if not 0 <= p < self.chart_size:
            raise IndexError(f"point {p} outside chart [0, {self.chart_size})")
        return p

    def cone(self, p: PointId) -> np.ndarray:
        """Points directly covered by p (its boundary one level down)."""
        p = self._check(p)
        return self._cone_targets[self._cone_offsets[p]:self._cone_offsets[p + 1]]

    def support(self, p: PointId) -> np.ndarray:
        """Points directly covering p, ascending."""
        p = self._check(p)
        return self._support_targets[self._support_offsets[p]:self._support_offsets[p + 1]]

    def closure(self, p: PointId) -> np.ndarray:
        """p plus everything reachable through cones, breadth first.

        Each BFS level is appended in ascending point order, so the result is
        deterministic and each point appears exactly once.
        """
        return self._traverse(p, self.cone)

    def star(self, p: PointId) -> np.ndarray:
        """p plus everything reachable through supports, breadth first."""
        return self._traverse(p, self.support)

    def _traverse(self, p, step) -> np.ndarray:
        p = self._check(p)
        seen = {p}
        out = [p]
        frontier = [p]
        while frontier:
            new = set()
            for q in frontier:
                for r in step(q):
                    r = int(r)
                    if r not in seen:
                        seen.add(r)
                        new.add(r)
            frontier = sorted(new)
            out.extend(frontier)
        return np.array(out, dtype=np.int64)

    # -- strata ----------------------------------------------------------------

    def depth(self, p: PointId) -> int:
        return int(self.depths[self._check(p)])

    def height(self, p: PointId) -> int:
        return int(self.heights[self._check(p)])

    def depth_stratum(self, d: int) -> np.ndarray:
        """Points at depth d (distance from the vertex stratum), ascending."""
        return np.flatnonzero(self.depths == d).astype(np.int64)

    def height_stratum(self, h: int) -> np.ndarray:
        """Points at height h (distance from the cell stratum), ascending."""
        return np.flatnonzero(self.heights == h).astype(np.int64)

    @property
    def num_cells(self) -> int:
        return int(np.count_nonzero(self.heights == 0))

    @property
    def num_vertices(self) -> int:
        return int(np.count_nonzero(self.depths == 0))

    @property
    def is_interpolated(self) -> bool:
        """True when the DAG is strictly graded and cells sit at depth dim."""
        cells = self.height_stratum(0)
        if cells.size and not np.all(self.depths[cells] == self.dim):
            return False
        sources = np.repeat(np.arange(self.chart_size, dtype=np.int64),
                            np.diff(self._cone_offsets))
        return bool(np.all(self.depths[self._cone_targets]
                           == self.depths[sources] - 1))

    def cones(self) -> list[tuple[int, ...]]:
        """All cones as tuples, indexed by point."""
        return [tuple(int(q) for q in self.cone(p)) for p in range(self.chart_size)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Plex):
            return NotImplemented
        return (self.dim == other.dim
                and np.array_equal(self._cone_offsets, other._cone_offsets)
                and np.array_equal(self._cone_targets, other._cone_targets))

    def __repr__(self) -> str:
        return f"Plex(dim={self.dim}, chart_size={self.chart_size})"


@dataclass
class Label:
    """Named integer markers over sets of plex points."""

    name: str
    values: dict[int, set[int]] = field(default_factory=dict)

    def add(self, value: int, points: Iterable[int]) -> None:
        self.values.setdefault(int(value), set()).update(int(p) for p in points)

    def points_with(self, value: int) -> np.ndarray:
        return np.array(sorted(self.values.get(int(value), ())), dtype=np.int64)

    def value_ids(self) -> list[int]:
        return sorted(self.values)

    def relabeled(self, point_map: dict[int, int]) -> "Label":
        """New label with every point mapped through point_map; points absent
        from the map are dropped (used for restriction to a submesh)."""
        out = Label(self.name)
        for value, pts in self.values.items():
            mapped = {point_map[p] for p in pts if p in point_map}
            if mapped:
                out.values[value] = mapped
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Label):
            return NotImplemented
        return self.name == other.name and self.values == other.values


def build_from_cells(cell_vertex_lists: Sequence[Sequence[int]],
                     num_vertices: int, dim: int) -> Plex:
    """Interpolate a cell-vertex mesh into a full plex.

    Cells must all be simplices of the given dimension (2 vertex ids = line,
    3 = triangle, 4 = tetrahedron).  Intermediate entities are created in a
    fixed traversal order and deduplicated by sorted vertex tuple, so the
    result is a pure function of the input.

    Args:
        cell_vertex_lists: one vertex-id tuple per cell.
        num_vertices: total vertex count (ids must be < num_vertices).
        dim: topological dimension, 1, 2 or 3.

    Returns:
        An interpolated Plex numbered cells, vertices, facets, edges.
    """
    if dim not in _CELL_ARITY:
        raise ValueError(f"unsupported mesh dimension {dim}")
    cells = [tuple(int(v) for v in c) for c in cell_vertex_lists]
    if not cells:
        raise ValueError("cell list is empty")
    arity = _CELL_ARITY[dim]
    for c in cells:
        if len(c) != arity:
            if len({len(x) for x in cells}) > 1:
                raise ValueError("mixed cell arities")
            raise ValueError(
                f"cell arity {len(c)} inconsistent with dimension {dim}")
        for v in c:
            if not 0 <= v < num_vertices:
                raise ValueError(f"vertex id {v} out of range [0, {num_vertices})")

    ncells = len(cells)
    vert_pt = lambda v: ncells + v

    if dim == 1:
        cones: list[tuple[int, ...]] = [()] * (ncells + num_vertices)
        for i, (a, b) in enumerate(cells):
            cones[i] = (vert_pt(a), vert_pt(b))
        return Plex(dim, cones)

    # Facet pass (3D): deduplicate triangles shared between cells, keeping
    # the vertex tuple in first-encounter order for the edge pass below.
    if dim == 3:
        facet_of: dict[tuple[int, ...], int] = {}
        facet_verts: list[tuple[int, int, int]] = []
        cell_facets: list[list[int]] = []
        for c in cells:
            row = []
            for tmpl in _TET_FACETS:
                tri = tuple(c[k] for k in tmpl)
                key = tuple(sorted(tri))
                idx = facet_of.get(key)
                if idx is None:
                    idx = len(facet_verts)
                    facet_of[key] = idx
                    facet_verts.append(tri)
                row.append(idx)
            cell_facets.append(row)
        triangles = facet_verts
    else:
        triangles = cells
        cell_facets = []

    # Edge pass: every triangle (a cell in 2D, a facet in 3D) contributes its
    # three edges, deduplicated by sorted vertex pair.
    edge_of: dict[tuple[int, int], int] = {}
    edge_verts: list[tuple[int, int]] = []
    tri_edges: list[list[int]] = []
    for tri in triangles:
        row = []
        for tmpl in _TRI_EDGES:
            pair = (tri[tmpl[0]], tri[tmpl[1]])
            key = (pair[0], pair[1]) if pair[0] < pair[1] else (pair[1], pair[0])
            idx = edge_of.get(key)
            if idx is None:
                idx = len(edge_verts)
                edge_of[key] = idx
                edge_verts.append(pair)
            row.append(idx)
        tri_edges.append(row)

    if dim == 3:
        facet_pt0 = ncells + num_vertices
        edge_pt0 = facet_pt0 + len(triangles)
    else:
        facet_pt0 = 0  # unused
        edge_pt0 = ncells + num_vertices

    chart = edge_pt0 + len(edge_verts)
    cones = [()] * chart
    if dim == 3:
        for i, row in enumerate(cell_facets):
            cones[i] = tuple(facet_pt0 + f for f in row)
        for f, row in enumerate(tri_edges):
            cones[facet_pt0 + f] = tuple(edge_pt0 + e for e in row)
    else:
        for i, row in enumerate(tri_edges):
            cones[i] = tuple(edge_pt0 + e for e in row)
    for e, (a, b) in enumerate(edge_verts):
        cones[edge_pt0 + e] = (vert_pt(a), vert_pt(b))

    return Plex(dim, cones)
