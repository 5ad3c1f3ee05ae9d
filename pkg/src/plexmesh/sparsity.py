"""Vertex-coupling sparsity patterns, bandwidth/profile, spy-plot export."""

from __future__ import annotations

import numpy as np

from .gmsh_io import MeshBundle


class CsrPattern:
    """Symmetric CSR sparsity pattern with a full diagonal.

    Column indices are strictly increasing within each row.
    """

    def __init__(self, n: int, rows_cols):
        """rows_cols: iterable of per-row column index iterables."""
        self.n = n
        cols = []
        offsets = np.zeros(n + 1, dtype=np.int64)
        for i, row in enumerate(rows_cols):
            row = sorted(set(int(c) for c in row) | {i})
            if row and (row[0] < 0 or row[-1] >= n):
                raise ValueError("column index out of range")
            cols.extend(row)
            offsets[i + 1] = len(cols)
        self.indptr = offsets
        self.indices = np.array(cols, dtype=np.int64)

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CsrPattern):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))


def p1_pattern(bundle: MeshBundle) -> CsrPattern:
    """Vertex-vertex coupling: (i, j) stored when i and j share a cell closure.

    Row/column indices count vertices in ascending vertex-point order, which
    keeps the pattern well defined on permuted bundles too.
    """
    plex = bundle.plex
    if not plex.is_interpolated:
        raise ValueError("pattern construction needs an interpolated plex")
    verts = plex.depth_stratum(0)
    vrank = {int(p): i for i, p in enumerate(verts)}
    rows: list[set[int]] = [set() for _ in verts]
    for c in plex.height_stratum(0):
        vs = [vrank[int(q)] for q in plex.closure(int(c)) if plex.depths[q] == 0]
        for i in vs:
            rows[i].update(vs)
    return CsrPattern(len(verts), rows)


def bandwidth(pattern: CsrPattern) -> int:
    """Max distance from the diagonal to the leftmost entry of any row."""
    if pattern.n == 0:
        return 0
    return max(i - int(pattern.row(i)[0]) for i in range(pattern.n))


def profile(pattern: CsrPattern) -> int:
    """Sum over rows of the distance from diagonal to leftmost entry."""
    return sum(i - int(pattern.row(i)[0]) for i in range(pattern.n))


def spy_export(pattern: CsrPattern) -> str:
    """CSV of stored entries, row-major: header 'row,col' then one line each."""
    lines = ["row,col"]
    for i in range(pattern.n):
        lines.extend(f"{i},{j}" for j in pattern.row(i))
    return "\n".join(lines) + "\n"
