"""Tests for piecewise-linear functions and their exact operations."""

from fractions import Fraction

import pytest

from riesz_lab.errors import (
    NotOpenError,
    PointOutsideSpaceError,
    PreconditionViolatedError,
    SchemaError,
)
from riesz_lab.functions import (
    PLFun,
    bump_for,
    distance_profile,
    kernel,
    pl_eval,
    pl_op,
    ratio_bound,
    riesz_split,
    sup_norm_on,
    superlevel,
    support,
)
from riesz_lab.regions import Region
from riesz_lab.sampling import random_plfun, random_points


class TestEvaluation:
    """Affine interpolation between exact knots."""

    def test_interpolates(self, tplus):
        assert pl_eval(tplus, Fraction(1, 2)) == Fraction(1, 2)

    def test_breakpoint_value(self, abs_t):
        assert pl_eval(abs_t, 0) == 0

    def test_outside_space(self, tplus):
        with pytest.raises(PointOutsideSpaceError):
            pl_eval(tplus, 2)

    def test_slopes(self, abs_t):
        assert abs_t.slopes_at(0) == (-1, 1)
        assert abs_t.slopes_at(-1) == (None, -1)


class TestConstruction:
    """Knot lists are validated and simplified."""

    def test_collinear_knots_dropped(self, interval):
        f = PLFun.from_knots(interval, [[(-1, -1), (0, 0), (1, 1)]])
        assert f == PLFun.identity(interval)
        assert f.knots == (((-1, -1), (1, 1)),)

    def test_knots_must_span_component(self, interval):
        with pytest.raises(ValueError):
            PLFun.from_knots(interval, [[(0, 0), (1, 1)]])

    def test_json_codec(self, abs_t):
        assert abs_t.to_json() == [[["-1", "1"], ["0", "0"], ["1", "1"]]]
        assert PLFun.from_json(abs_t.to_json()) == abs_t

    def test_json_errors_carry_location(self):
        with pytest.raises(SchemaError, match=r"\$\[0\]\[1\]"):
            PLFun.from_json([[["0", "0"], ["1"]]])


class TestLatticeOps:
    """Linear and lattice operations in canonical form."""

    def test_join_is_absolute_value(self, t, abs_t):
        assert pl_op('join', t, -t) == abs_t

    def test_positive_part(self, t, tplus):
        assert pl_op('pos_part', t) == tplus
        assert tplus.knots == (((-1, 0), (0, 0), (1, 1)),)

    def test_crossing_inserted_exactly(self, unit):
        t = PLFun.identity(unit)
        meet = pl_op('meet', t, PLFun.one(unit) - t)
        assert meet.knots == ((
            (0, 0), (Fraction(1, 2), Fraction(1, 2)), (1, 0)),)

    def test_scale_needs_scalar(self, t):
        with pytest.raises(ValueError):
            pl_op('scale', t)

    def test_pointwise_oracle(self, two_components, rng):
        """Every operation agrees with its scalar counterpart at random points."""
        for _ in range(1000):
            f = random_plfun(rng, two_components)
            g = random_plfun(rng, two_components)
            c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            results = {
                'add': (pl_op('add', f, g), lambda u, v: u + v),
                'sub': (pl_op('sub', f, g), lambda u, v: u - v),
                'join': (pl_op('join', f, g), max),
                'meet': (pl_op('meet', f, g), min),
                'abs': (pl_op('abs', f), lambda u, v: abs(u)),
                'pos_part': (pl_op('pos_part', f), lambda u, v: max(u, 0)),
                'neg_part': (pl_op('neg_part', f), lambda u, v: max(-u, 0)),
                'scale': (pl_op('scale', f, scalar=c), lambda u, v: c * u),
            }
            for x in random_points(rng, two_components, 100):
                for op, (h, expected) in results.items():
                    assert h(x) == expected(f(x), g(x)), op


class TestSupport:
    """Supports are relatively open regions."""

    def test_positive_part(self, interval, tplus):
        assert support(tplus) == Region.interval(interval, 0, 1, False, True)

    def test_identity_punctured(self, interval, t):
        expected = Region.interval(interval, -1, 0, True, False).union(
            Region.interval(interval, 0, 1, False, True))
        assert support(t) == expected

    def test_zero(self, interval):
        assert support(PLFun.zero(interval)).is_empty()

    def test_kernel(self, interval, tplus):
        assert kernel(tplus) == Region.interval(interval, -1, 0)

    def test_superlevel(self, interval, t):
        assert superlevel(t, Fraction(1, 2)) == Region.interval(interval, Fraction(1, 2), 1)

    def test_support_is_open(self, two_components, rng):
        for _ in range(100):
            assert support(random_plfun(rng, two_components)).is_open()


class TestSupNorm:
    """Exact suprema, attained or not."""

    def test_whole_space(self, interval, t):
        assert sup_norm_on(t, interval.full()) == 1

    def test_not_attained(self, interval, tplus):
        region = Region.interval(interval, 0, Fraction(1, 2), False, False)
        assert sup_norm_on(tplus, region) == Fraction(1, 2)

    def test_single_point(self, interval, abs_t):
        assert sup_norm_on(abs_t, Region.points(interval, [0])) == 0


class TestBumpFor:
    """0 <= e <= 1, supp e == U, e == 1 on K."""

    def test_half_open(self, interval, tplus):
        region = Region.interval(interval, 0, 1, False, True)
        e = bump_for(region)
        assert e == tplus
        assert support(e) == region

    def test_full_space(self, interval, one):
        assert bump_for(interval.full(), interval.full()) == one

    def test_trapezoid(self, interval):
        region = Region.interval(interval, Fraction(-1, 2), Fraction(1, 2), False, False)
        compact = Region.interval(interval, Fraction(-1, 4), Fraction(1, 4))
        e = bump_for(region, compact)
        assert [e(x) for x in (Fraction(-1, 4), 0, Fraction(1, 4))] == [1, 1, 1]
        assert e(Fraction(3, 8)) == Fraction(1, 2)
        assert e(Fraction(1, 2)) == 0
        assert support(e) == region

    def test_needs_open(self, interval):
        with pytest.raises(NotOpenError):
            bump_for(Region.interval(interval, 0, 1))

    def test_distance_profile(self, interval):
        profile = distance_profile(interval, Region.points(interval, [0]), Fraction(1, 2))
        assert profile(Fraction(1, 4)) == Fraction(1, 4)
        assert profile(Fraction(-3, 4)) == Fraction(1, 2)


class TestRatioBound:
    """Least n with |f| <= n e."""

    def test_same_function(self, tplus):
        assert ratio_bound(tplus, tplus) == 1

    def test_against_absolute_value(self, tplus, abs_t):
        assert ratio_bound(tplus, abs_t) == 1

    def test_support_escapes(self, tplus, abs_t):
        assert ratio_bound(abs_t, tplus) is None

    def test_vanishing_slopes(self, tplus):
        assert ratio_bound(tplus.scale(3), tplus.scale(Fraction(1, 2))) == 6

    def test_needs_nonnegative(self, t):
        with pytest.raises(PreconditionViolatedError):
            ratio_bound(t, t)


class TestRieszSplit:
    """0 <= f <= g1 + g2 splits as f1 + f2 under g1 and g2."""

    def test_absolute_value(self, abs_t, tplus, tminus):
        assert riesz_split(abs_t, tminus, tplus) == (tminus, tplus)

    def test_second_bound_zero(self, interval, tplus):
        assert riesz_split(tplus, tplus, PLFun.zero(interval)) == (tplus, PLFun.zero(interval))

    def test_meet_with_larger_bound(self, interval, tplus):
        assert riesz_split(tplus, tplus, tplus) == (tplus, PLFun.zero(interval))

    def test_violated_bound(self, one, tplus):
        with pytest.raises(PreconditionViolatedError):
            riesz_split(one, tplus, tplus)
