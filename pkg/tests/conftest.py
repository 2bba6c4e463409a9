import numpy as np
import pytest

from fourpoint import generate, space_from_points


@pytest.fixture
def line4():
    return generate("line", {"n": 4})


@pytest.fixture
def unit_square():
    return space_from_points([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def four_cycle():
    return generate("graph", {"n": 4, "edges": [(0, 1), (1, 2), (2, 3), (3, 0)]})


@pytest.fixture
def line013():
    # three collinear points at coordinates 0, 1, 3
    return space_from_points([0.0, 1.0, 3.0])


def circle_space(n, seed=0, radius=1.0):
    """Concyclic planar points (sorted random angles), exact Ptolemy equality."""
    rng = np.random.default_rng(seed)
    th = np.sort(rng.uniform(0, 2 * np.pi, size=n))
    pts = radius * np.stack([np.cos(th), np.sin(th)], axis=1)
    return space_from_points(pts)


def generated_suite(include_strip=True):
    """The cross-module test diet: one space per generator family."""
    spaces = {
        "line4": generate("line", {"n": 4}),
        "euclidean": generate("euclidean", {"n": 8, "dim": 2}, seed=11),
        "hyperboloid": generate("hyperboloid", {"n": 8, "kappa": -1, "radius": 2}, seed=12),
        "random": generate("random_metric", {"n": 8}, seed=13),
        "graph4": generate("graph", {"n": 4, "edges": [(0, 1), (1, 2), (2, 3), (3, 0)]}),
    }
    if include_strip:
        spaces["strip"] = generate("strip", {"a": 1, "t": 10})
    return spaces
