"""Topology migration onto simulated ranks, star forests and halo layout.

Ranks are simulated in-process: each rank receives an independent
RankLocalMesh value and all cross-rank relationships are expressed through
the immutable StarForest, never shared state, so per-rank extraction could
run concurrently as-is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gmsh_io import MeshBundle
from .partition import PartitionMap
from .permutation import Permutation
from .plex import Label, Plex
from .section import Field, Section, section_from_depth_dofs


@dataclass
class StarForest:
    """Ghost-point sharing: per rank, (local point, owner rank, owner-local point)."""

    leaves: list[list[tuple[int, int, int]]]

    @property
    def nranks(self) -> int:
        return len(self.leaves)

    def rank_leaves(self, rank: int) -> list[tuple[int, int, int]]:
        return self.leaves[rank]


@dataclass(eq=False)
class RankPointSet:
    """One rank's share of the global chart: owned points plus one cell overlap."""

    rank: int
    points: np.ndarray  # sorted global ids, owned + overlap
    owned: np.ndarray   # sorted global ids owned by this rank


@dataclass(eq=False)
class RankLocalMesh:
    """Self-contained local mesh with its mapping back to the global chart."""

    rank: int
    bundle: MeshBundle
    local_to_global: np.ndarray
    owned_cells: set[int]   # local cell points owned by this rank
    ghost_points: set[int]  # local points owned elsewhere


@dataclass
class Halo:
    """Trailing-receives layout summary for one rank's data.

    n_owned counts owned dofs; every ghost dof lands at index >= n_owned once
    the accompanying permutation is applied.  receives lists ghost points as
    (permuted local point, owner rank, owner-local point), ordered by
    (owner rank, owner-local point); owner-local ids refer to the owner's
    unpermuted numbering.
    """

    n_owned: int
    receives: list[tuple[int, int, int]]


@dataclass
class MigrationReport:
    """Byte accounting of what migration ships to the ranks.

    Topology counts one 8-byte word per cone entry plus one per point of
    metadata; coordinates and fields count 8 bytes per dof.
    """

    bytes_topology: int
    bytes_coordinates: int
    bytes_fields: int
    points_per_rank: list[int]

    @property
    def bytes_total(self) -> int:
        return self.bytes_topology + self.bytes_coordinates + self.bytes_fields

    def as_dict(self) -> dict:
        return {
            "bytes_topology": self.bytes_topology,
            "bytes_coordinates": self.bytes_coordinates,
            "bytes_fields": self.bytes_fields,
            "bytes_total": self.bytes_total,
            "points_per_rank": list(self.points_per_rank),
        }


def close_partition(plex: Plex, pmap: PartitionMap) -> list[RankPointSet]:
    """Expand a cell assignment to per-rank point sets with one layer of overlap.

    A rank receives the closure of every cell assigned to it plus the closure
    of every foreign cell sharing a facet with one of its cells.  A point is
    owned by the lowest rank whose own-cell closures contain it.
    """
    cells = plex.height_stratum(0)
    if len(pmap.ranks) != len(cells):
        raise ValueError("partition map does not cover the cells")
    nparts = pmap.nparts

    closures = {int(c): plex.closure(int(c)) for c in cells}
    owner = np.full(plex.chart_size, -1, dtype=np.int64)
    point_sets: list[set[int]] = [set() for _ in range(nparts)]
    for i, c in enumerate(cells):
        r = int(pmap.ranks[i])
        point_sets[r].update(int(p) for p in closures[int(c)])
    # Lowest-rank ownership: visit ranks ascending and claim unowned points.
    for r in range(nparts):
        for i in np.flatnonzero(pmap.ranks == r):
            for p in closures[int(cells[i])]:
                if owner[p] < 0:
                    owner[p] = r

    # One layer of overlap through shared facets.
    crank = {int(c): i for i, c in enumerate(cells)}
    for f in plex.height_stratum(1):
        sup = plex.support(int(f))
        rs = {int(pmap.ranks[crank[int(c)]]) for c in sup}
        if len(rs) > 1:
            for c in sup:
                cl = closures[int(c)]
                for r in rs:
                    if r != int(pmap.ranks[crank[int(c)]]):
                        point_sets[r].update(int(p) for p in cl)

    out = []
    for r in range(nparts):
        pts = np.array(sorted(point_sets[r]), dtype=np.int64)
        owned = pts[owner[pts] == r]
        out.append(RankPointSet(rank=r, points=pts, owned=owned))
    return out


def _extract_rank(bundle: MeshBundle, rps: RankPointSet) -> RankLocalMesh:
    plex = bundle.plex
    l2g = rps.points
    g2l = {int(g): l for l, g in enumerate(l2g)}

    cones = [tuple(g2l[int(q)] for q in plex.cone(int(g))) for g in l2g]
    local_plex = Plex(plex.dim, cones)

    verts_global = plex.depth_stratum(0)
    gvrank = {int(p): i for i, p in enumerate(verts_global)}
    coords_global = bundle.vertex_coords()
    local_verts = [int(g) for g in l2g if plex.depths[g] == 0]
    values = np.concatenate([coords_global[gvrank[g]] for g in local_verts]) \
        if local_verts else np.empty(0)
    sec = section_from_depth_dofs(local_plex, [plex.dim] + [0] * plex.dim)
    coords = Field("coordinates", sec, values)

    labels = {name: lab.relabeled(g2l) for name, lab in bundle.labels.items()}

    owned_set = set(int(p) for p in rps.owned)
    owned_cells = {g2l[int(g)] for g in l2g
                   if plex.heights[g] == 0 and int(g) in owned_set}
    ghosts = {g2l[int(g)] for g in l2g if int(g) not in owned_set}
    return RankLocalMesh(rank=rps.rank, bundle=MeshBundle(local_plex, coords, labels),
                         local_to_global=l2g, owned_cells=owned_cells,
                         ghost_points=ghosts)


def migrate(bundle: MeshBundle, pmap: PartitionMap, nranks: int,
            fields: Sequence[Field] | None = None,
            ) -> tuple[list[RankLocalMesh], StarForest, MigrationReport]:
    """Split a bundle into rank-local meshes plus the star forest linking them.

    Only topology, coordinates and labels are materialized per rank.  Fields,
    when supplied, are accounted in the migration byte counts (the fully
    allocated state a preprocessor-style start-up would ship) but not
    expanded; omitting them models the topology-only start-up.
    """
    if nranks != pmap.nparts:
        raise ValueError(f"nranks={nranks} does not match map nparts={pmap.nparts}")
    for f in fields or ():
        if f.section.num_points != bundle.plex.chart_size:
            raise ValueError(f"field '{f.name}' is not laid out over this chart")
    rank_sets = close_partition(bundle.plex, pmap)
    locals_ = [_extract_rank(bundle, rps) for rps in rank_sets]

    leaves: list[list[tuple[int, int, int]]] = []
    owner = np.full(bundle.plex.chart_size, -1, dtype=np.int64)
    for rps in rank_sets:
        owner[rps.owned] = rps.rank
    for rps in rank_sets:
        mine = []
        for l, g in enumerate(rps.points):
            r = int(owner[g])
            if r != rps.rank:
                owner_local = int(np.searchsorted(rank_sets[r].points, g))
                mine.append((l, r, owner_local))
        leaves.append(mine)
    sf = StarForest(leaves)

    bytes_topology = 0
    bytes_coordinates = 0
    bytes_fields = 0
    for lm in locals_:
        lp = lm.bundle.plex
        bytes_topology += 8 * (lp._cone_offsets[-1] + lp.chart_size)
        bytes_coordinates += 8 * lm.bundle.coordinates.section.total_size
        for f in fields or ():
            bytes_fields += 8 * int(f.section.dofs[lm.local_to_global].sum())
    report = MigrationReport(
        bytes_topology=int(bytes_topology),
        bytes_coordinates=int(bytes_coordinates),
        bytes_fields=int(bytes_fields),
        points_per_rank=[lm.bundle.plex.chart_size for lm in locals_],
    )
    return locals_, sf, report


def build_halo(local: RankLocalMesh, sf: StarForest, section: Section,
               ) -> tuple[Halo, Permutation]:
    """Compute the trailing-receives point permutation for one rank.

    Points carrying owned dofs come first (ascending), then owned points
    without dofs, then all ghost points ordered by (owner rank, owner-local
    point).  Applying the permutation to the section therefore puts the owned
    dofs at [0, n_owned) and every ghost dof after them.
    """
    n = local.bundle.plex.chart_size
    if section.num_points != n:
        raise ValueError("section does not match the local chart")
    entries = sf.rank_leaves(local.rank)
    if {e[0] for e in entries} != local.ghost_points:
        raise ValueError("star forest leaves do not match the ghost point set")

    ghost_order = sorted(entries, key=lambda e: (e[1], e[2]))
    owned = [p for p in range(n) if p not in local.ghost_points]
    with_dofs = [p for p in owned if section.dofs[p] > 0]
    without = [p for p in owned if section.dofs[p] == 0]
    new_order = with_dofs + without + [e[0] for e in ghost_order]
    perm = Permutation.from_new_order(new_order)

    n_owned = int(section.dofs[owned].sum()) if owned else 0
    receives = [(int(perm.forward[e[0]]), e[1], e[2]) for e in ghost_order]
    return Halo(n_owned=n_owned, receives=receives), perm


def gather_to_root(locals_: Sequence[RankLocalMesh], sf: StarForest) -> MeshBundle:
    """Reassemble the original bundle from a complete distribution.

    Every global point must be owned by exactly one rank; cones, coordinates
    and labels are taken from the owners, reproducing the pre-migration
    numbering exactly.
    """
    chart = 1 + max(int(lm.local_to_global.max()) for lm in locals_)
    dim = locals_[0].bundle.dim
    claimed = np.zeros(chart, dtype=np.int64)
    cones: list[tuple[int, ...] | None] = [None] * chart
    for lm in locals_:
        ghost = lm.ghost_points
        lp = lm.bundle.plex
        l2g = lm.local_to_global
        for l in range(lp.chart_size):
            if l in ghost:
                continue
            g = int(l2g[l])
            claimed[g] += 1
            cones[g] = tuple(int(l2g[q]) for q in lp.cone(l))
    if np.any(claimed > 1):
        raise ValueError("inconsistent ownership: a point is claimed by two ranks")
    if np.any(claimed == 0):
        raise ValueError("incomplete distribution: a point is owned by no rank")

    plex = Plex(dim, cones)
    verts = plex.depth_stratum(0)
    gvrank = {int(p): i for i, p in enumerate(verts)}
    coords = np.zeros((len(verts), dim), dtype=np.float64)
    label_names = sorted({name for lm in locals_ for name in lm.bundle.labels})
    labels = {name: Label(name) for name in label_names}
    for lm in locals_:
        lp = lm.bundle.plex
        l2g = lm.local_to_global
        local_coords = lm.bundle.vertex_coords()
        for i, p in enumerate(lp.depth_stratum(0)):
            if int(p) not in lm.ghost_points:
                coords[gvrank[int(l2g[p])]] = local_coords[i]
        for name, lab in lm.bundle.labels.items():
            for value, pts in lab.values.items():
                labels[name].add(value, (int(l2g[p]) for p in pts))

    sec = section_from_depth_dofs(plex, [dim] + [0] * dim)
    return MeshBundle(plex, Field("coordinates", sec, coords.ravel()), labels)
