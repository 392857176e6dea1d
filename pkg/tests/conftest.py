import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from germlab import MapGerm, Unfolding

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "germlab", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.abspath(os.path.join(FIXTURES, name))


@pytest.fixture
def cusp():
    return MapGerm.from_strings(["x"], ["X1", "X2"], ["x^2", "x^3"])


@pytest.fixture
def cusp_opsu():
    total = MapGerm.from_strings(["x", "l"], ["X1", "X2", "L"], ["x^2", "x^3 + l*x", "l"])
    return Unfolding.from_total(total, 1)


@pytest.fixture
def h2():
    return MapGerm.from_strings(["x", "y"], ["X1", "X2", "X3"], ["x", "y^3", "y^5 + x*y"])


@pytest.fixture
def g_a2():
    total = MapGerm.from_strings(["y", "l"], ["Y", "L"], ["y^3 + l*y", "l"])
    return Unfolding.from_total(total, 1)


def an_unfolding(n: int) -> MapGerm:
    """Minimal stable unfolding of the A_n singularity as an n -> n germ."""
    src = [f"x{i}" for i in range(1, n + 1)]
    tgt = [f"X{i}" for i in range(1, n + 1)]
    comp1 = f"x1^{n + 1}" + "".join(f" + x{k}*x1^{k - 1}" for k in range(2, n + 1))
    comps = [comp1] + [f"x{i}" for i in range(2, n + 1)]
    return MapGerm.from_strings(src, tgt, comps)
