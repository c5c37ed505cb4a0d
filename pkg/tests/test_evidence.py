import itertools
import math

import pytest

from threatcorr.evidence import (
    BadTable,
    ContourRow,
    build_coverage_bel,
    build_location_bel,
    build_movement_bel,
    build_separation_bel,
    rows,
)
from threatcorr.frame import UNIVERSAL, Disc, intersect_elements


def test_figure2_location_tables(fig2_args):
    bel1, bel2 = fig2_args[0], fig2_args[1]
    assert len(bel1.mass) == 6 and len(bel2.mass) == 6
    assert [m for _, m in bel1.mass.entries] == [0.18] * 5 + [0.10]
    assert [e.same.disc1.radius for e, _ in bel1.mass.entries] == [4.5, 9.5, 15.0, 22.0, 33.0, 60.0]
    assert [e.same.disc2.radius for e, _ in bel2.mass.entries] == [9.0, 18.0, 30.0, 45.0, 70.0, 120.0]
    assert all(e.same.disc2.is_full for e, _ in bel1.mass.entries)
    assert all(e.same == e.diff for e, _ in bel1.mass.entries)


def test_location_rejects_infinite_radius():
    with pytest.raises(BadTable):
        build_location_bel(1, (0, 0), [ContourRow(math.inf, 1.0)])


@pytest.mark.parametrize(
    "radii, masses",
    [([5.0, 4.0], [0.5, 0.5]), ([1.0, 2.0], [0.5, 0.6]), ([1.0, 1.0], [0.5, 0.5])],
)
def test_location_rejects_bad_tables(radii, masses):
    with pytest.raises(BadTable):
        build_location_bel(2, (0, 0), rows(radii, masses))


def test_location_contours_are_nested(fig2_args):
    entries = [e for e, _ in fig2_args[1].mass.entries]
    for a, b in itertools.combinations(entries, 2):
        meet = intersect_elements(a, b)
        assert meet.key() in (a.key(), b.key())


def test_movement_figure2(fig2_args):
    bel3 = fig2_args[2]
    entries = bel3.mass.entries
    assert entries[0][1] == 0.3
    assert entries[0][0].same.band.hi == 0.0 and entries[0][0].diff.band.hi == math.inf
    assert [m for _, m in entries[1:]] == [0.15] * 4 + [0.10]
    assert entries[-1][0].key() == UNIVERSAL.key()
    assert [(e.same.band.lo, e.same.band.hi) for e, _ in entries[1:5]] == [(10, 13), (9, 15), (7.5, 18), (6, 22)]


def test_movement_pure_diagonal():
    m = build_movement_bel(1.0, []).mass
    assert len(m) == 1 and m.entries[0][0].same.band.hi == 0.0


def test_movement_mass_check():
    with pytest.raises(BadTable):
        build_movement_bel(0.3, rows([10.0], [0.6], [13.0]))


def test_movement_bands_must_nest():
    with pytest.raises(BadTable):
        build_movement_bel(0.0, rows([10.0, 12.0], [0.5, 0.5], [13.0, 20.0]))


def test_coverage():
    m = build_coverage_bel(0.7).mass
    assert m.entries[0][0].diff is None and m.entries[0][1] == 0.7
    assert m.entries[1][0].key() == UNIVERSAL.key()
    assert m.entries[1][1] == pytest.approx(0.3)
    assert build_coverage_bel(0.0).mass.is_vacuous()
    assert build_coverage_bel(0.3).mass.entries[0][1] == 0.3
    with pytest.raises(BadTable):
        build_coverage_bel(1.2)


def test_separation_figure2(fig2_args):
    m = fig2_args[4].mass
    assert [e.diff.band.lo for e, _ in m.entries] == [60, 49, 40, 32, 26, 20]
    assert all(e.same.key() == UNIVERSAL.same.key() for e, _ in m.entries)


def test_separation_zero_floor_is_vacuous():
    assert build_separation_bel(rows([0.0], [1.0])).mass.is_vacuous()


def test_separation_mass_check():
    with pytest.raises(BadTable):
        build_separation_bel(rows([60, 49, 40, 32, 26, 20], [0.17] * 5 + [0.20]))


def test_separation_must_decrease():
    with pytest.raises(BadTable):
        build_separation_bel(rows([20, 30], [0.5, 0.5]))


def test_every_focal_element_nonempty(fig2_args):
    for a in fig2_args:
        assert all(not e.is_empty for e, _ in a.mass.entries)


def test_argument_discounting_from_original(fig2_args):
    bel2 = fig2_args[1]
    d = bel2.with_rate(0.4).discounted()
    masses = [m for _, m in d.entries]
    assert masses[:6] == pytest.approx([0.108] * 5 + [0.06])
    assert masses[6] == pytest.approx(0.4)
    again = bel2.with_rate(0.4).with_rate(0.4).discounted()
    assert [m for _, m in again.entries] == masses


def test_disc_validation():
    with pytest.raises(ValueError):
        Disc((0, 0), -1)
