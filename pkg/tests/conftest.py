from fractions import Fraction as F

import pytest

from bankstab import NetworkSpec

FIG1_EDGES = [
    ("v2", "v1"),
    ("v1", "v4"),
    ("v4", "v2"),
    ("v3", "v1"),
    ("v3", "v4"),
    ("v5", "v4"),
    ("v5", "v3"),
]


@pytest.fixture
def fig1_hom() -> NetworkSpec:
    """Five-bank worked example, homogeneous: I=7, E=14, gamma=0.1."""
    return NetworkSpec.homogeneous(
        nodes=["v1", "v2", "v3", "v4", "v5"],
        edges=FIG1_EDGES,
        gamma=F(1, 10),
        phi=F(1, 2),
        total_external=14,
        total_interbank=7,
    )


@pytest.fixture
def fig1_het() -> NetworkSpec:
    """Same topology, heterogeneous: 95% of E split over {v1,v2}, 95% of I
    split over the first three edges; the rest spread evenly."""
    heavy_w = F(95, 100) * 7 / 3
    light_w = F(5, 100) * 7 / 4
    weights = {e: (heavy_w if i < 3 else light_w) for i, e in enumerate(FIG1_EDGES)}
    heavy_e = F(95, 100) * 14 / 2
    light_e = F(5, 100) * 14 / 3
    return NetworkSpec.heterogeneous(
        nodes=["v1", "v2", "v3", "v4", "v5"],
        edges=FIG1_EDGES,
        gamma=F(1, 10),
        phi=F(1, 2),
        external_assets={
            "v1": heavy_e,
            "v2": heavy_e,
            "v3": light_e,
            "v4": light_e,
            "v5": light_e,
        },
        weights=weights,
    )


@pytest.fixture
def sec6() -> NetworkSpec:
    """Five-node cascade example: gamma=0.1, Phi=0.4, E=5, unit weights."""
    return NetworkSpec.homogeneous(
        nodes=["a", "b", "c", "d", "e"],
        edges=[("c", "b"), ("c", "a"), ("e", "c"), ("d", "c")],
        gamma=F(1, 10),
        phi=F(2, 5),
        total_external=5,
    )
