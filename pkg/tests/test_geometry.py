import math

import numpy as np
import pytest

from rankone.errors import DomainError, PreconditionError
from rankone.geometry import (
    GroupDatum,
    StripQuery,
    catalog,
    delta_density,
    delta_scaled,
    in_strip,
    log_delta,
    strip_distance,
    strip_halfwidth,
)


def test_catalog_rho():
    rhos = {g.name: g.rho for g in catalog()}
    assert rhos == {"H2R": 0.5, "H3R": 1.0, "H4R": 1.5, "H2C": 2.0, "H2H": 5.0, "H2O": 11.0}


def test_parse_forms():
    assert GroupDatum.parse("2,1") == GroupDatum(2, 1)
    assert GroupDatum.parse("h2o") == GroupDatum(8, 7)
    assert GroupDatum(5, 2).formal
    with pytest.raises(DomainError):
        GroupDatum.parse("nope")
    with pytest.raises(PreconditionError):
        GroupDatum(0, 1)


def test_density_small_t():
    g = GroupDatum(1, 0)
    assert delta_density(1e-12, g) < 1e-11


def test_density_closed_form():
    g = GroupDatum(2, 1)
    assert math.isclose(delta_density(1.0, g), (2 * math.sinh(1)) ** 3 * 2 * math.cosh(1), rel_tol=1e-14)


@pytest.mark.parametrize("g", catalog(), ids=lambda g: g.name)
def test_log_density_growth(g):
    assert abs(log_delta(30.0, g) / 30.0 - 2 * g.rho) < 1e-6
    assert abs(delta_scaled(30.0, g) - 1) < 1e-6


@pytest.mark.parametrize("g", catalog(), ids=lambda g: g.name)
def test_scaled_density_bounded(g):
    t = np.geomspace(1e-6, 500, 200)
    s = delta_scaled(t, g)
    assert np.all(s > 0) and np.all(s <= 1)


def test_density_domain():
    with pytest.raises(DomainError):
        delta_density(0.0, GroupDatum(1, 0))


def test_strip_distance_examples():
    g = GroupDatum(2, 0)
    assert strip_distance(3.7, g) == g.rho
    assert strip_distance(1j * g.rho, g) == 0
    assert strip_distance(3j, g) == 2


def test_strips():
    g = GroupDatum(2, 1)
    assert strip_halfwidth(1.0, g) == g.rho
    assert strip_halfwidth(2.0, g) == 0.0
    assert in_strip(1 + 1.9j, 1.0, g)
    assert not StripQuery(1.0, 2.1j).contains(g)
