"""Shared fixtures: grids are session-scoped because building one runs
connectivity checks per removed edge."""

import pytest

from dlcss import Coordinate, GridGraph


@pytest.fixture(scope="session")
def intact_grid():
    """12x12 lattice with no removed edges; paths are fully deterministic."""
    return GridGraph.build(
        rows=12, cols=12, origin=Coordinate(50.75, 6.08),
        spacing_m=250.0, removal_fraction=0.0, seed=0,
    )


@pytest.fixture(scope="session")
def default_grid():
    """The default 20x20 grid with 10% of edges removed (seed 0)."""
    return GridGraph.build()
