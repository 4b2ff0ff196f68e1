import math

import pytest

from rankone import checks
from rankone.geometry import GroupDatum

H3R = GroupDatum(2, 0)


def test_registered_ids():
    assert set(checks.SUITES) >= {"3.1", "3.4", "3.5", "4.1", "4.3", "5.1", "8.1", "8.2", "8.3"}
    assert set(checks.SCANS) == {"3.1", "3.1-large", "3.5", "4.4"}


def test_unknown_id():
    with pytest.raises(KeyError):
        checks.run_suite("bogus", H3R)


def test_single_check_report():
    rep = checks.run_suite("connection", H3R)
    assert rep.status == "pass" and rep.tolerance == 1e-8 and rep.max_residual < 1e-8
    d = rep.as_dict()
    assert d["lemma_id"] == "connection" and d["group"]["name"] == "H3R"


def test_multi_check_report_uses_ratio():
    rep = checks.run_suite("3.1", H3R)
    assert rep.tolerance == 1.0 and rep.status == "pass"
    assert len(rep.checks) == 3


def test_tolerance_override():
    rep = checks.run_suite("connection", H3R, tol=1e-30)
    assert rep.status == "fail"


def test_numerical_error_becomes_failed_check():
    # roundtrip needs more decay than sinc^8 gives on the octonionic plane
    rep = checks.run_suite("roundtrip", GroupDatum(8, 7))
    assert rep.status == "fail" and rep.error and math.isinf(rep.max_residual)


def test_subcheck_zero_tolerance():
    assert checks.SubCheck("x", 0.0, 0.0).passed
    assert not checks.SubCheck("x", 1e-300, 0.0).passed
