from __future__ import annotations

from pathlib import Path

import pytest

import plexmesh as pm

DATA = Path(__file__).parent / "data"

# The test corpus: single simplex per dimension, the two-triangle square,
# structured triangle grids and a tetrahedralized cube.  Small meshes are
# checked-in golden files; the larger ones come from the deterministic
# generators.
GOLDEN_FILES = ["line_single", "tri_single", "tet_single", "square_2tri"]


def _generated():
    return {
        "grid4": pm.triangle_grid(4, 4),
        "grid32": pm.triangle_grid(32, 32),
        "cube": pm.tet_box(3, 3, 3),
    }


@pytest.fixture(scope="session")
def corpus() -> dict[str, pm.RawMesh]:
    meshes = {name: pm.read_gmsh_file(DATA / f"{name}.msh") for name in GOLDEN_FILES}
    meshes.update(_generated())
    return meshes


@pytest.fixture(scope="session")
def bundles(corpus) -> dict[str, pm.MeshBundle]:
    return {name: pm.raw_to_bundle(raw) for name, raw in corpus.items()}


@pytest.fixture(scope="session")
def corpus_dir(corpus, tmp_path_factory) -> Path:
    """All corpus meshes written out as .msh files."""
    d = tmp_path_factory.mktemp("corpus")
    for name, raw in corpus.items():
        pm.write_gmsh_file(raw, d / f"{name}.msh")
    return d


@pytest.fixture()
def two_triangle(bundles) -> pm.MeshBundle:
    return bundles["square_2tri"]


@pytest.fixture()
def tet_bundle(bundles) -> pm.MeshBundle:
    return bundles["tet_single"]
