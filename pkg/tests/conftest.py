"""Shared test helpers: seeded point clouds and committed fixtures."""

import json
import pathlib

import numpy as np
import pytest

FIXTURE_PATH = pathlib.Path(__file__).parent / "fixtures.json"


@pytest.fixture(scope="session")
def fixtures():
    return json.loads(FIXTURE_PATH.read_text())


def random_points(rng, count, n=1, z_extent=2.0, t_extent=4.0):
    """Seeded points in a centered coordinate box, shape (count, 2n+1)."""
    dim = 2 * n + 1
    pts = np.empty((count, dim))
    pts[:, :-1] = rng.uniform(-z_extent, z_extent, size=(count, dim - 1))
    pts[:, -1] = rng.uniform(-t_extent, t_extent, size=count)
    return pts


def rel_err(a, b):
    denom = np.maximum(np.abs(a), np.abs(b))
    return np.abs(a - b) / np.where(denom > 0, denom, 1.0)
