"""Tests for bump families and the theorem checkers."""

from fractions import Fraction
import random

import pytest

from riesz_lab.checkers import (
    LEFT,
    RIGHT,
    BumpFamily,
    ConfirmedDistributive,
    DistributivityWitness,
    bound_in_ideal,
    bump_nth,
    even_sum_counterexample,
    meet_distributivity_witness,
    order_bounded_check,
    prefix_certificates,
    search_dominating_bound,
    self_majorizing_report,
)
from riesz_lab.errors import FamilyNotInIdealError, UnsupportedIdealShapeError
from riesz_lab.functions import PLFun, indicator_of_components
from riesz_lab.ideals import Principal, RegionIdeal, SequenceGenerated
from riesz_lab.regions import Region
from riesz_lab.schemas import BandStatus
from riesz_lab.urysohn import IncreasingSeqRule
from riesz_lab.verifiers import all_hold


HALF = Fraction(1, 2)


@pytest.fixture
def right_half(interval):
    return Region.interval(interval, 0, 1, False, True)


class TestBumpFamily:
    """Disjoint tents accumulating at a point."""

    def test_geometry(self, interval):
        family = BumpFamily(interval, 0, RIGHT, HALF, HALF)
        assert family.interval(0) == (HALF, Fraction(5, 8))
        assert family.peak(0) == Fraction(9, 16)
        assert bump_nth(family, 0)(Fraction(9, 16)) == 1
        assert family.span() == Region.interval(interval, 0, Fraction(5, 8), False, True)

    def test_left_side(self, interval):
        family = BumpFamily(interval, 1, LEFT, HALF, HALF, s=HALF)
        assert family.interval(1) == (Fraction(11, 16), Fraction(3, 4))
        assert family.height(2) == Fraction(1, 4)

    def test_prefix_certificates(self, interval):
        family = BumpFamily(interval, 0, RIGHT, HALF, HALF)
        assert all_hold(prefix_certificates(family, 6))

    @pytest.mark.parametrize("kwargs", [
        {"r": 1}, {"r": 0}, {"d0": 0}, {"s": 2}, {"direction": "up"},
    ])
    def test_rejects_bad_parameters(self, interval, kwargs):
        params = {"p": 0, "direction": RIGHT, "d0": HALF, "r": HALF}
        params.update(kwargs)
        with pytest.raises(ValueError):
            BumpFamily(interval, **params)

    def test_must_stay_in_component(self, interval):
        with pytest.raises(ValueError):
            BumpFamily(interval, 1, RIGHT, HALF, HALF)


class TestBoundInIdeal:
    """Order bounds for bump families inside H."""

    def test_equal_decay_is_bounded(self, interval, right_half):
        family = BumpFamily(interval, 0, RIGHT, HALF, HALF, s=HALF)
        outcome = bound_in_ideal(family, RegionIdeal(right_half), prefix=10)
        assert outcome.is_bounded
        assert all_hold(outcome.certificates)

    def test_constant_heights_are_unbounded(self, interval, right_half):
        family = BumpFamily(interval, 0, RIGHT, HALF, HALF)
        outcome = bound_in_ideal(family, RegionIdeal(right_half), rng=random.Random(0))
        assert not outcome.is_bounded
        assert outcome.search.index == 7
        assert outcome.search.dominators == 0
        assert all_hold(outcome.certificates)

    def test_interior_point_is_bounded(self, interval, right_half):
        family = BumpFamily(interval, 1, LEFT, HALF, HALF)
        outcome = bound_in_ideal(family, RegionIdeal(right_half))
        assert outcome.is_bounded
        assert outcome.bound(1) == 1

    def test_family_outside_support(self, interval):
        ideal = RegionIdeal(Region.interval(interval, HALF, 1, False, True))
        with pytest.raises(FamilyNotInIdealError):
            bound_in_ideal(BumpFamily(interval, 0, RIGHT, HALF, HALF), ideal)


class TestSearchDominatingBound:
    """Slope-limited candidates never dominate past n*."""

    def test_slope_limit(self, interval):
        search = search_dominating_bound(BumpFamily(interval, 0, RIGHT, HALF, HALF),
                                         random.Random(3), candidates=10)
        assert search.slope_limit == 128
        assert search.candidates == 10
        assert all_hold(search.certificates)

    def test_certificates_bound_every_candidate(self, interval):
        search = search_dominating_bound(BumpFamily(interval, 0, RIGHT, HALF, HALF),
                                         random.Random(5), candidates=20)
        assert [c.claim for c in search.certificates] == ["value_at", "below_at", "le"]
        envelope = search.certificates[-1].args["lhs"]
        cone = search.certificates[-1].args["rhs"]
        assert cone(HALF) == 64
        peak = search.certificates[0].args
        assert envelope(peak["x"]) < peak["value"]
        assert all_hold(search.certificates)

    def test_no_index_when_heights_decay(self, interval):
        search = search_dominating_bound(BumpFamily(interval, 0, RIGHT, HALF, HALF, s=HALF))
        assert search.index is None
        assert search.candidates == 0


class TestOrderBoundedCheck:
    """Projection band iff disjoint families stay order bounded."""

    def test_band_only(self, right_half):
        report = order_bounded_check(RegionIdeal(right_half), prefix=10)
        assert report.verdict == "consistent"
        assert report.passed
        assert report.details["band_status"] == "BandOnly"
        verdicts = {row["family"]["p"]: row["verdict"] for row in report.details["families"]
                    if row["family"]["r"] == row["family"]["s"]}
        assert verdicts == {"0": "Bound", "1": "Bound"}

    def test_projection_band(self, two_components):
        report = order_bounded_check(RegionIdeal(two_components.component(0)), prefix=10)
        assert report.verdict == "consistent"
        assert report.details["band_status"] == "ProjectionBand"
        assert all(row["verdict"] == "Bound" for row in report.details["families"])

    def test_decaying_grid_is_inconclusive(self, right_half):
        report = order_bounded_check(RegionIdeal(right_half), grid=((HALF, HALF),), prefix=5)
        assert report.verdict == "inconclusive"
        assert not report.passed

    def test_workers_give_the_same_rows(self, right_half):
        serial = order_bounded_check(RegionIdeal(right_half), prefix=5, seed=2)
        pooled = order_bounded_check(RegionIdeal(right_half), prefix=5, seed=2, workers=3)
        assert serial.details == pooled.details

    def test_needs_support_determined_ideal(self, right_half):
        ideal = SequenceGenerated(IncreasingSeqRule.exhaustion(right_half))
        with pytest.raises(UnsupportedIdealShapeError):
            order_bounded_check(ideal)

    def test_band_status_is_recomputed(self, right_half):
        report = order_bounded_check(RegionIdeal(right_half), grid=((HALF, 1),), prefix=5)
        first = report.certificates[0]
        assert first.claim == "band_status"
        assert first.subject == "status:band_status"
        assert first.args["status"] == BandStatus.BAND_ONLY
        assert first.holds


class TestMeetDistributivity:
    """H + lim J_n against the limit of H + J_n."""

    def test_band_only_has_witness(self, right_half):
        witness = meet_distributivity_witness(RegionIdeal(right_half), stages=6)
        assert isinstance(witness, DistributivityWitness)
        assert witness.point == 0
        assert len(witness.stage_certificates) == 6
        assert all_hold(witness.certificates)

    def test_projection_band_confirmed(self, two_components):
        outcome = meet_distributivity_witness(RegionIdeal(two_components.component(0)),
                                              samples=5, rng=random.Random(1))
        assert isinstance(outcome, ConfirmedDistributive)
        assert all_hold(outcome.certificates)

    def test_random_families_confirmed(self, two_components):
        outcome = meet_distributivity_witness(RegionIdeal(two_components.component(1)),
                                              samples=100, rng=random.Random(4))
        assert isinstance(outcome, ConfirmedDistributive)
        assert outcome.families == 100
        assert all_hold(outcome.certificates)
        claims = {c.claim for c in outcome.certificates}
        assert claims <= {"region_equal", "ideal_member", "support_subset"}
        assert "rational_eq" not in claims

    def test_needs_region_ideal(self, tplus):
        with pytest.raises(UnsupportedIdealShapeError):
            meet_distributivity_witness(Principal(tplus))


class TestEvenSum:
    def test_counterexample(self):
        report = even_sum_counterexample()
        assert report.passed
        assert report.details == {
            "even_near_zero": "Out", "full": "In", "contrast": "In",
        }


class TestSelfMajorizing:
    """Self-majorizing iff the principal ideal is a projection band."""

    def test_positive_part(self, tplus):
        report = self_majorizing_report(tplus, random.Random(0), samples=4)
        assert report.passed
        assert report.details["self_majorizing"] is False
        assert report.details["samples"][0]["unbounded_at"] == "0"

    def test_component_indicator(self, two_components):
        e = indicator_of_components(two_components, [1])
        report = self_majorizing_report(e, random.Random(0), samples=4)
        assert report.passed
        assert report.details["self_majorizing"] is True
        assert report.details["band_status"] == "ProjectionBand"

    def test_constant_one(self, interval):
        report = self_majorizing_report(PLFun.one(interval), samples=2)
        assert report.passed
        assert report.details["samples"][1]["bound"] == "1"
