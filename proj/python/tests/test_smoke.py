import pytest

import quatperiod


def test_mass_of_level_eleven():
    assert quatperiod.eichler_mass(11) == "5/12"
    # (1/24) * prod_{p | N1} (p - 1) * prod_{p | N2} (p + 1)
    assert quatperiod.eichler_mass(11, 2) == "5/4"
    assert quatperiod.eichler_mass(2, 11) == "1/2"


def test_admissible_discriminants():
    assert quatperiod.admissible_discriminants(26) == [2, 13]


def test_classset_envelope():
    out = quatperiod.run("classset", disc=11)
    assert out["schema"] == quatperiod.schema_version
    assert out["command"] == "classset"
    assert out["conventions"]["version"] == quatperiod.convention_version
    assert out["result"]["mass"] == "5/12"


def test_deterministic_apart_from_timestamp():
    a = quatperiod.run("eigen", disc=11, pmax=13)
    b = quatperiod.run("eigen", disc=11, pmax=13)
    a.pop("generated_at")
    b.pop("generated_at")
    assert a == b


def test_period_level_eleven():
    out = quatperiod.run("period", labels="11a,11a,11a,11a", periods="plain")
    report = out["result"]["report"]
    assert out["result"]["selected_disc"] == 11
    assert report["s1"] == report["s2"] == "-19"
    assert report["product"] == "361"


def test_validation_errors():
    with pytest.raises(ValueError):
        quatperiod.run("classset", disc=6)
    with pytest.raises(ValueError):
        quatperiod.run("classset", bogus=1)
    with pytest.raises(ValueError):
        quatperiod.run("period", labels=["11a", "99z", "11a", "11a"])
