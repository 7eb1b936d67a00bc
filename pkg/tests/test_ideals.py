"""Tests for sublattices, ideal descriptions and band decisions."""

from fractions import Fraction
import random

import pytest

from riesz_lab import ideals

from riesz_lab.errors import (
    NotInSublatticeError,
    NotOrderDenseError,
    NotProjectionBandError,
    PreconditionViolatedError,
)
from riesz_lab.functions import PLFun, indicator_of_components, support
from riesz_lab.ideals import (
    DisjComp,
    Intersection,
    Principal,
    RegionIdeal,
    RegionSequence,
    SequenceGenerated,
    SublatticeSpec,
    Sum,
    band_generated,
    band_projection,
    band_status,
    disjoint_complement,
    first_disagreement,
    ideal_member,
    ideal_support,
    is_support_determined,
    local_projection_check,
    order_dense_status,
    order_dense_witness,
    principal_identities_check,
    projection_certificates,
    same_ideal,
    sublattice_member,
    sublattice_separator,
)
from riesz_lab.regions import Region
from riesz_lab.sampling import random_region
from riesz_lab.schemas import BandStatus, MemberStatus
from riesz_lab.urysohn import IncreasingSeqRule
from riesz_lab.verifiers import all_hold


@pytest.fixture
def left_half(interval):
    return Region.interval(interval, -1, 0, True, False)


@pytest.fixture
def right_half(interval):
    return Region.interval(interval, 0, 1, False, True)


@pytest.fixture
def halves(left_half, right_half):
    return Sum(RegionIdeal(left_half), RegionIdeal(right_half))


class TestSublattices:
    """Full and the functions even near 0."""

    def test_absolute_value_is_even(self, interval, abs_t):
        assert sublattice_member(SublatticeSpec.even_near_zero(interval), abs_t)

    def test_identity_is_not_even(self, interval, t):
        assert not sublattice_member(SublatticeSpec.even_near_zero(interval), t)

    def test_full_holds_everything(self, interval, t):
        assert sublattice_member(SublatticeSpec.full(interval), t)

    def test_even_needs_symmetric_interval(self, unit):
        with pytest.raises(ValueError):
            SublatticeSpec.even_near_zero(unit)

    @pytest.mark.parametrize("x, y", [
        ("1/2", "0"), ("0", "1/2"), ("-1/3", "1/3"), ("1", "-1"),
    ])
    def test_even_sublattice_separates_points(self, interval, x, y):
        even = SublatticeSpec.even_near_zero(interval)
        g = sublattice_separator(even, Fraction(x), Fraction(y))
        assert g(Fraction(x)) == 1
        assert g(Fraction(y)) == 0
        assert sublattice_member(even, g)


class TestIdealSupport:
    """supp H for every node of the ideal tree."""

    def test_principal(self, tplus, right_half):
        assert ideal_support(Principal(tplus)) == right_half

    def test_disjoint_complement_of_principal(self, tplus, left_half):
        assert ideal_support(DisjComp(Principal(tplus))) == left_half

    def test_intersection_of_halves(self, left_half, right_half):
        ideal = Intersection(RegionIdeal(left_half), RegionIdeal(right_half))
        assert ideal_support(ideal).is_empty()

    def test_region_ideal_uses_interior(self, interval):
        closed = Region.interval(interval, 0, 1)
        assert ideal_support(RegionIdeal(closed)) == closed.interior()

    def test_sequence_generated(self, right_half):
        rule = IncreasingSeqRule.exhaustion(right_half)
        assert ideal_support(SequenceGenerated(rule)) == right_half


class TestMembership:
    """In, Out or Unsupported, with certificates."""

    def test_sum_in_full(self, interval, halves, abs_t):
        verdict = ideal_member(SublatticeSpec.full(interval), halves, abs_t)
        assert verdict.status == MemberStatus.IN
        assert all_hold(verdict.certificates)

    def test_sum_in_even_sublattice(self, interval, halves, abs_t):
        verdict = ideal_member(SublatticeSpec.even_near_zero(interval), halves, abs_t)
        assert verdict.status == MemberStatus.OUT
        claims = [c.claim for c in verdict.certificates]
        assert "sum_equals" in claims
        assert "even_at" in claims
        assert all_hold(verdict.certificates)

    def test_overlapping_sum_in_even_sublattice(self, interval, abs_t):
        wide = RegionIdeal(interval.full())
        verdict = ideal_member(SublatticeSpec.even_near_zero(interval), Sum(wide, wide), abs_t)
        assert verdict.status == MemberStatus.UNSUPPORTED

    def test_principal_support_escapes(self, interval, tplus, abs_t):
        verdict = ideal_member(SublatticeSpec.full(interval), Principal(tplus), abs_t)
        assert verdict.status == MemberStatus.OUT
        assert verdict.certificates[0].claim == "not_region_subset"

    def test_principal_ratio(self, interval, tplus):
        verdict = ideal_member(SublatticeSpec.full(interval), Principal(tplus), tplus.scale(5))
        assert verdict.is_in
        assert verdict.certificates[0].args["bound"] == 5

    def test_signed_generator(self, interval, t, abs_t):
        verdict = ideal_member(SublatticeSpec.full(interval), Principal(t), abs_t)
        assert verdict.is_in

    def test_candidate_must_lie_in_sublattice(self, interval, halves, t):
        with pytest.raises(NotInSublatticeError):
            ideal_member(SublatticeSpec.even_near_zero(interval), halves, t)

    def test_sequence_generated_stage_search(self, interval, right_half):
        ideal = SequenceGenerated(IncreasingSeqRule.exhaustion(right_half))
        tent = PLFun.tent(interval, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)
        full = SublatticeSpec.full(interval)
        assert ideal_member(full, ideal, tent).is_in

    def test_sequence_generated_cutoff(self, interval, right_half, tplus):
        ideal = SequenceGenerated(IncreasingSeqRule.exhaustion(right_half))
        verdict = ideal_member(SublatticeSpec.full(interval), ideal, tplus, cutoff=8)
        assert verdict.status == MemberStatus.OUT
        assert verdict.notes == ["cutoff_reached: 8"]


class TestComplements:
    """Disjoint complements and generated bands."""

    def test_principal(self, tplus, left_half):
        assert disjoint_complement(Principal(tplus)) == RegionIdeal(left_half)

    def test_full_and_empty(self, interval):
        assert disjoint_complement(RegionIdeal(interval.full())) == RegionIdeal(interval.empty())
        assert disjoint_complement(RegionIdeal(interval.empty())) == RegionIdeal(interval.full())

    def test_band_generated(self, interval, tplus, right_half):
        band = band_generated(Principal(tplus))
        assert band == RegionIdeal(Region.interval(interval, 0, 1))
        assert ideal_support(band) == right_half

    def test_band_generated_open_interval(self, interval):
        region = Region.interval(interval, Fraction(-1, 2), Fraction(1, 2), False, False)
        assert band_generated(RegionIdeal(region)) == RegionIdeal(region.closure())

    def test_band_generated_is_double_complement(self, interval):
        ideal = RegionIdeal(Region.interval(interval, Fraction(1, 4), Fraction(1, 2), False, True))
        twice = disjoint_complement(disjoint_complement(ideal))
        assert band_generated(ideal) == RegionIdeal(Region.interval(interval, Fraction(1, 4),
                                                                    Fraction(1, 2)))
        assert twice == RegionIdeal(Region.interval(interval, Fraction(1, 4), Fraction(1, 2),
                                                    False, False))
        assert same_ideal(band_generated(ideal), twice)

    def test_random_regions(self, interval):
        rng = random.Random(7)
        for _ in range(200):
            ideal = RegionIdeal(random_region(rng, interval))
            once = disjoint_complement(ideal)
            twice = disjoint_complement(once)
            assert same_ideal(disjoint_complement(twice), once)
            assert same_ideal(band_generated(ideal), twice)

    def test_relative_complement(self, interval):
        rng = random.Random(11)
        for _ in range(200):
            e = RegionIdeal(random_region(rng, interval))
            j = RegionIdeal(random_region(rng, interval))
            lhs = Intersection(e, disjoint_complement(Intersection(e, j)))
            assert same_ideal(lhs, Intersection(e, disjoint_complement(j)))


class TestSameIdeal:
    """Equality of ideals up to their description."""

    def test_closure_and_interior(self, interval):
        closed = Region.interval(interval, 0, Fraction(1, 2))
        assert same_ideal(RegionIdeal(closed), RegionIdeal(closed.interior()))
        assert RegionIdeal(closed) != RegionIdeal(closed.interior())

    def test_principal_against_region(self, tplus, right_half):
        assert same_ideal(Principal(tplus), RegionIdeal(right_half))

    def test_different_supports(self, left_half, right_half):
        assert not same_ideal(RegionIdeal(left_half), RegionIdeal(right_half))

    def test_different_spaces(self, interval, unit):
        assert not same_ideal(RegionIdeal(interval.full()), RegionIdeal(unit.full()))


class TestBandStatus:
    """Clopen, regular open or neither."""

    def test_positive_part_is_band_only(self, tplus):
        assert band_status(Principal(tplus)) == BandStatus.BAND_ONLY

    def test_identity_is_not_band(self, t):
        assert band_status(Principal(t)) == BandStatus.NOT_BAND

    def test_component_is_projection_band(self, two_components):
        assert band_status(RegionIdeal(two_components.component(0))) == \
            BandStatus.PROJECTION_BAND

    def test_sequence_generated_is_not_band(self, right_half):
        ideal = SequenceGenerated(IncreasingSeqRule.exhaustion(right_half))
        assert not is_support_determined(ideal)
        assert band_status(ideal) == BandStatus.NOT_BAND

    def test_multiples_are_support_determined(self, tplus):
        ideal = SequenceGenerated(IncreasingSeqRule.multiples(tplus))
        assert is_support_determined(ideal)
        assert band_status(ideal) == BandStatus.BAND_ONLY


class TestBandProjection:
    """Pf + (f - Pf) with Pf in H and the rest in H^d."""

    def test_component(self, two_components):
        one = PLFun.one(two_components)
        part, rest = band_projection(RegionIdeal(two_components.component(1)), one)
        assert part == indicator_of_components(two_components, [1])
        assert rest == indicator_of_components(two_components, [0])

    def test_whole_and_zero(self, interval, tplus):
        zero = PLFun.zero(interval)
        assert band_projection(RegionIdeal(interval.full()), tplus) == (tplus, zero)
        assert band_projection(RegionIdeal(interval.empty()), tplus) == (zero, tplus)

    def test_certificates(self, two_components):
        ideal = RegionIdeal(two_components.component(0))
        f = PLFun.from_knots(two_components, [[(-1, 2), (0, 0)], [(1, 0), (2, 3)]])
        assert all_hold(projection_certificates(ideal, f))

    def test_band_only_has_no_projection(self, tplus, one):
        with pytest.raises(NotProjectionBandError):
            band_projection(Principal(tplus), one)


class TestOrderDensity:
    """Dense support and order-dense witnesses."""

    def test_punctured_space_is_dense(self, interval, left_half, right_half, one):
        ideal = RegionIdeal(left_half.union(right_half))
        full = SublatticeSpec.full(interval)
        assert order_dense_status(full, ideal)
        g = order_dense_witness(ideal, one, full)
        assert g.is_nonnegative()
        assert g <= one
        assert not g.is_zero()
        assert support(g).is_subset(ideal_support(ideal))

    def test_half_is_not_dense(self, interval, right_half, one):
        ideal = RegionIdeal(right_half)
        assert not order_dense_status(SublatticeSpec.full(interval), ideal)
        with pytest.raises(NotOrderDenseError):
            order_dense_witness(ideal, one)

    def test_even_witness_vanishes_near_zero(self, interval, left_half, right_half, abs_t):
        even = SublatticeSpec.even_near_zero(interval)
        ideal = RegionIdeal(left_half.union(right_half))
        g = order_dense_witness(ideal, abs_t, even)
        assert sublattice_member(even, g)
        assert g(0) == 0 and not g.is_zero()

    def test_witness_needs_positive_f(self, interval):
        with pytest.raises(PreconditionViolatedError):
            order_dense_witness(RegionIdeal(interval.full()), PLFun.zero(interval))


class TestPrincipalIdentities:
    """I(e v f) = I(e) + I(f) and I(e ^ f) = I(e) n I(f)."""

    def test_disjoint_generators(self, tplus, tminus, rng):
        report = principal_identities_check(tplus, tminus, rng, samples=20)
        assert report.passed
        assert report.counterexample is None
        claims = [c.claim for c in report.certificates]
        assert "region_empty" in claims
        assert claims.count("membership_agrees") == 2

    def test_equal_generators(self, tplus, rng):
        report = principal_identities_check(tplus, tplus, rng, samples=10)
        assert report.passed
        assert report.counterexample is None
        assert all_hold(report.certificates)

    def test_counterexample_is_reported(self, tplus, tminus, rng, monkeypatch):
        g = tplus | tminus
        monkeypatch.setattr(ideals, "first_disagreement",
                            lambda *args: (g, MemberStatus.IN, MemberStatus.OUT))
        report = principal_identities_check(tplus, tminus, rng, samples=5)
        assert not report.passed
        example = report.counterexample
        assert example["identity"] == "I(e v f) = I(e) + I(f)"
        assert example["fn"] == g
        assert (example["lhs"], example["rhs"]) == (MemberStatus.IN, MemberStatus.OUT)
        left, right = [c for c in report.certificates if c.claim == "ideal_member"]
        assert left.holds and left.subject == "status:lhs"
        assert not right.holds

    def test_first_disagreement(self, interval):
        found = first_disagreement(RegionIdeal(interval.full()), RegionIdeal(interval.empty()),
                                   seed=3, samples=20)
        assert found is not None
        g, left, right = found
        assert not g.is_zero()
        assert (left, right) == (MemberStatus.IN, MemberStatus.OUT)
        assert first_disagreement(RegionIdeal(interval.full()), RegionIdeal(interval.full()),
                                  seed=3, samples=20) is None


class TestLocalProjection:
    """H n I_g is a projection band in I_g iff supp g avoids the boundary of supp H."""

    def test_boundary_met(self, tplus, one):
        holds, certs = local_projection_check(Principal(tplus), one)
        assert not holds
        assert all_hold(certs)

    def test_boundary_avoided(self, interval, tplus):
        g = PLFun.tent(interval, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)
        holds, certs = local_projection_check(Principal(tplus), g)
        assert holds
        assert all_hold(certs)


class TestRegionSequence:
    """Shrinking neighbourhoods with exact limit data."""

    def test_neighbourhoods(self, interval):
        sequence = RegionSequence(Region.interval(interval, -1, 0))
        assert sequence.region(2) == Region.interval(interval, -1, Fraction(1, 2), True, False)
        assert sequence.limit == Region.interval(interval, -1, 0, True, False)
        assert sequence.verify(8)

    def test_needs_closed_center(self, right_half):
        with pytest.raises(ValueError):
            RegionSequence(right_half)
