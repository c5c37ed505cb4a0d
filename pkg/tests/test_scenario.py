import re

import pytest

from threatcorr.scenario import (
    BUNDLED,
    FORMAT,
    ParseError,
    ValidationError,
    bundled_path,
    dumps,
    load_scenario,
    loads,
)


def _strip(text):
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def _fig2_text():
    return bundled_path("figure2").read_text()


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_loads(name):
    s = load_scenario(name)
    assert s.name == name
    assert [a.role for a in s.arguments] == ["location1", "location2", "movement", "coverage", "separation"]
    assert len(s.routes) == 2


@pytest.mark.parametrize("name", BUNDLED)
def test_round_trip(name):
    text = bundled_path(name).read_text()
    assert _strip(dumps(loads(text))) == _strip(text)
    assert dumps(loads(dumps(loads(text)))) == dumps(loads(text))


def test_figure2_tables(fig2_scenario):
    loc1 = fig2_scenario.argument("location1")
    assert [m for _, m in loc1.mass.entries] == [0.18] * 5 + [0.1]
    assert fig2_scenario.argument("coverage").mass.entries[0][1] == 0.7
    assert fig2_scenario.threshold == 0.25
    ecm = fig2_scenario.factors[0]
    assert ecm.target == "location2" and ecm.tests[0].cost == 1.0
    assert ecm.tests[0].scripted.present == 0.4
    assert list(fig2_scenario.argument("location2").rebuttals) == ["ecm"]


def test_variants_differ_only_where_intended():
    base = load_scenario("figure2")
    close = load_scenario("variant-close")
    low = load_scenario("variant-lowcoverage")
    assert close.argument("location2").mass.entries[0][0].same.disc2.center == (50.0, 60.0)
    assert low.argument("coverage").mass.entries[0][1] == 0.3
    assert close.argument("movement").mass == base.argument("movement").mass


def test_mass_sum_names_the_table():
    text = _fig2_text().replace("mass = [0.17, 0.17, 0.17, 0.17, 0.17, 0.15]", "mass = [0.17, 0.17, 0.17, 0.17, 0.17, 0.2]")
    with pytest.raises(ValidationError) as exc:
        loads(text)
    assert exc.value.field == "separation"


def test_unknown_factor_target():
    with pytest.raises(ValidationError) as exc:
        loads(_fig2_text().replace('target = "movement"', 'target = "nowhere"'))
    assert exc.value.field.endswith(".target")


def test_unknown_key():
    with pytest.raises(ValidationError) as exc:
        loads(_fig2_text().replace("same_mass = 0.7", "same_mass = 0.7\nsame_mas = 0.1"))
    assert exc.value.field == "coverage.same_mas"


def test_wrong_format_header():
    with pytest.raises(ValidationError) as exc:
        loads(_fig2_text().replace(FORMAT, "something-else/9"))
    assert exc.value.field == "format"


def test_missing_section():
    text = re.sub(r"\[coverage\][^\[]*", "", _fig2_text())
    with pytest.raises(ValidationError) as exc:
        loads(text)
    assert exc.value.field == "coverage"


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        loads(_fig2_text().replace("threshold = 0.25", "threshold = = 0.25"))
    assert exc.value.line == 8


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_scenario(tmp_path / "absent.scenario")


def test_bundled_name_with_suffix():
    assert load_scenario("figure2.scenario").name == "figure2"


def test_threshold_range():
    with pytest.raises(ValidationError):
        loads(_fig2_text().replace("threshold = 0.25", "threshold = 1.5"))


def test_zero_cost_test_rejected():
    with pytest.raises(ValidationError):
        loads(_fig2_text().replace("cost = 1.0", "cost = 0.0"))
