"""
Symbolic ideals of the PL function lattice and their decision procedures.

An ideal is described by an IdealSpec tree (principal, region, sum,
intersection, disjoint complement, sequence-generated). Membership, supports,
disjoint complements, band status, band projections and order density are
decided from supports and exact ratio bounds; every verdict carries
certificates that riesz_lab.verifiers can re-evaluate.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple
import logging
import random

from .errors import (
    NotInSublatticeError,
    NotOrderDenseError,
    NotProjectionBandError,
    PreconditionViolatedError,
    SpaceMismatchError,
)
from .functions import PLFun, bump_for, ratio_bound, support
from .regions import Piece, Region, Space
from .sampling import random_plfun
from .schemas import BandStatus, Certificate, MemberStatus, Verdict
from .utils import DEFAULT_SAMPLES, DEFAULT_SEQUENCE_CUTOFF, to_rational
from .verifiers import certify


logger = logging.getLogger("rieszlab")

FULL = "Full"
EVEN_NEAR_ZERO = "EvenNearZero"
SUBLATTICE_KINDS = (FULL, EVEN_NEAR_ZERO)


@dataclass(frozen=True)
class SublatticeSpec:
    """
    Cataloged sublattice of the PL functions on a space.

    Full is everything; EvenNearZero (on a symmetric interval [-c, c]) holds
    the functions that are even on some punctured neighbourhood of 0.
    """
    kind: str
    space: Space

    def __post_init__(self):
        if self.kind not in SUBLATTICE_KINDS:
            raise ValueError(f"Unknown sublattice: {self.kind}")
        if self.kind == EVEN_NEAR_ZERO and not self.space.is_symmetric_interval():
            raise ValueError("EvenNearZero needs a symmetric interval [-c, c]")

    @classmethod
    def full(cls, space: Space) -> "SublatticeSpec":
        return cls(FULL, space)

    @classmethod
    def even_near_zero(cls, space: Space) -> "SublatticeSpec":
        return cls(EVEN_NEAR_ZERO, space)


def sublattice_member(sublattice: SublatticeSpec, f: PLFun) -> bool:
    """
    Full: always. EvenNearZero: the one-sided slopes at 0 mirror each other,
    which for a PL function is evenness on a punctured neighbourhood of 0.
    """
    if f.space != sublattice.space:
        raise SpaceMismatchError()
    if sublattice.kind == FULL:
        return True
    left, right = f.slopes_at(0)
    return right == -left


def sublattice_separator(sublattice: SublatticeSpec, x, y) -> PLFun:
    """
    An element g of the sublattice with g(x) == 1 and g(y) == 0.

    Away from 0 a narrow tent at x that vanishes near 0 is used; at x == 0
    the tent is symmetric.
    """
    x, y = to_rational(x), to_rational(y)
    space = sublattice.space
    space.locate(x)
    space.locate(y)
    if x == y:
        raise ValueError("Points to separate must differ")
    radius = abs(x - y) / 2
    if sublattice.kind == EVEN_NEAR_ZERO and x != 0:
        radius = min(radius, abs(x) / 2)
    xs = [[x - radius, x, x + radius]] * len(space.components)
    tent = PLFun.from_profile(space, xs, lambda t: max(to_rational(0), 1 - abs(t - x) / radius))
    assert sublattice_member(sublattice, tent)
    return tent


class IdealSpec:
    """Base of the ideal description tree."""

    @property
    def space(self) -> Space:
        raise NotImplementedError

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Principal(IdealSpec):
    """
    I_e, the ideal generated by e; a signed e generates the same ideal as |e|.
    """
    e: PLFun

    @property
    def generator(self) -> PLFun:
        return abs(self.e)

    @property
    def space(self) -> Space:
        return self.e.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "Principal", "e": self.e.to_json()}


@dataclass(frozen=True)
class RegionIdeal(IdealSpec):
    region: Region

    @property
    def space(self) -> Space:
        return self.region.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "RegionIdeal", "region": self.region.to_json()}


@dataclass(frozen=True)
class Sum(IdealSpec):
    left: IdealSpec
    right: IdealSpec

    def __post_init__(self):
        if self.left.space != self.right.space:
            raise SpaceMismatchError()

    @property
    def space(self) -> Space:
        return self.left.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "Sum", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Intersection(IdealSpec):
    left: IdealSpec
    right: IdealSpec

    def __post_init__(self):
        if self.left.space != self.right.space:
            raise SpaceMismatchError()

    @property
    def space(self) -> Space:
        return self.left.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "Intersection", "left": self.left.to_json(),
                "right": self.right.to_json()}


@dataclass(frozen=True)
class DisjComp(IdealSpec):
    inner: IdealSpec

    @property
    def space(self) -> Space:
        return self.inner.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "DisjComp", "inner": self.inner.to_json()}


@dataclass(frozen=True)
class SequenceGenerated(IdealSpec):
    """
    Ideal generated by an increasing catalog sequence h_1 <= h_2 <= ...

    rule is an urysohn.IncreasingSeqRule (stage(n), limit, space).
    """
    rule: Any

    @property
    def space(self) -> Space:
        return self.rule.space

    def to_json(self) -> Dict[str, Any]:
        return {"type": "SequenceGenerated", "rule": self.rule.to_json()}


@dataclass(frozen=True)
class RegionSequence:
    """
    Catalog sequence of regions with exact limit data.

    The only rule is the neighbourhood rule: stage n is the open
    scale/n-neighbourhood of a closed region C; the sequence decreases and
    the interior of its intersection is interior(C).
    """
    center: Region
    scale: Any = 1

    def __post_init__(self):
        if not self.center.is_closed():
            raise ValueError("Neighbourhood sequences shrink onto a closed region")
        object.__setattr__(self, 'scale', to_rational(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def space(self) -> Space:
        return self.center.space

    def region(self, n: int) -> Region:
        if n < 1:
            raise ValueError("Stages start at 1")
        if self.center.is_empty():
            return self.center
        return self.center.expand(self.scale / n)

    @property
    def limit(self) -> Region:
        return self.center.interior()

    def verify(self, stages: int = 16) -> bool:
        """
        Monotone decrease and limit inside every stage, for the first stages.
        """
        for n in range(1, stages + 1):
            if not self.region(n + 1).is_subset(self.region(n)):
                return False
            if not self.limit.is_subset(self.region(n)):
                return False
        return True


def ideal_support(ideal: IdealSpec) -> Region:
    """
    The open region supp H, the union of the supports of all members.
    """
    if isinstance(ideal, Principal):
        return support(ideal.e)
    if isinstance(ideal, RegionIdeal):
        return ideal.region.interior()
    if isinstance(ideal, Sum):
        return ideal_support(ideal.left).union(ideal_support(ideal.right))
    if isinstance(ideal, Intersection):
        return ideal_support(ideal.left).intersect(ideal_support(ideal.right))
    if isinstance(ideal, DisjComp):
        return ideal_support(ideal.inner).closure().complement()
    if isinstance(ideal, SequenceGenerated):
        return ideal.rule.limit
    raise TypeError(f"Not an ideal description: {ideal!r}")


def is_support_determined(ideal: IdealSpec, cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> bool:
    """
    Whether H == E(supp H): every function supported inside supp H is a member.

    Sequence-generated ideals qualify only when some stage up to the cutoff
    already has the limit support.
    """
    if isinstance(ideal, (Principal, RegionIdeal, DisjComp)):
        return True
    if isinstance(ideal, (Sum, Intersection)):
        return (is_support_determined(ideal.left, cutoff)
                and is_support_determined(ideal.right, cutoff))
    if isinstance(ideal, SequenceGenerated):
        limit = ideal.rule.limit
        return any(support(ideal.rule.stage(n)) == limit for n in range(1, cutoff + 1))
    raise TypeError(f"Not an ideal description: {ideal!r}")


def stage_approximation(ideal: IdealSpec, n: int) -> IdealSpec:
    """
    A support-determined ideal inside H: every sequence-generated node is
    replaced by the principal ideal of its n-th generator.
    """
    if isinstance(ideal, SequenceGenerated):
        return Principal(ideal.rule.stage(n))
    if isinstance(ideal, Sum):
        return Sum(stage_approximation(ideal.left, n), stage_approximation(ideal.right, n))
    if isinstance(ideal, Intersection):
        return Intersection(stage_approximation(ideal.left, n),
                            stage_approximation(ideal.right, n))
    return ideal


def disjoint_complement(ideal: IdealSpec) -> RegionIdeal:
    return RegionIdeal(ideal_support(ideal).closure().complement())


def band_generated(ideal: IdealSpec) -> RegionIdeal:
    return RegionIdeal(ideal_support(ideal).closure())


def same_ideal(lhs: IdealSpec, rhs: IdealSpec, cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> bool:
    """
    Whether two descriptions denote the same ideal.

    Support-determined ideals are equal exactly when their supports are, so
    RegionIdeal(cl R) and RegionIdeal(int cl R) compare equal. Anything else
    falls back to comparing the descriptions.
    """
    if lhs.space != rhs.space:
        return False
    if is_support_determined(lhs, cutoff) and is_support_determined(rhs, cutoff):
        return ideal_support(lhs) == ideal_support(rhs)
    return lhs == rhs


def ideal_member(sublattice: SublatticeSpec, ideal: IdealSpec, f: PLFun,
                 cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> Verdict:
    """
    Decide whether f belongs to the ideal H of the sublattice E.

    Args:
        sublattice: Ambient sublattice E
        ideal: Ideal description H
        f: Candidate element (must lie in E)
        cutoff: Last stage searched for sequence-generated ideals

    Returns:
        Verdict In, Out or Unsupported with its certificates
    """
    if ideal.space != sublattice.space:
        raise SpaceMismatchError()
    if not sublattice_member(sublattice, f):
        raise NotInSublatticeError(f"{f} is not in {sublattice.kind}")
    verdict = _member(sublattice, ideal, f, cutoff)
    logger.debug(f"Membership in {type(ideal).__name__}: {verdict.status.value}")
    return verdict


def _member(sublattice: SublatticeSpec, ideal: IdealSpec, f: PLFun, cutoff: int) -> Verdict:
    if isinstance(ideal, Principal):
        bound = ratio_bound(f, ideal.generator)
        if bound is None:
            return Verdict(MemberStatus.OUT, [certify(
                "not_region_subset", "support escapes the generator's support",
                lhs=support(f), rhs=support(ideal.e))])
        return Verdict(MemberStatus.IN, [certify(
            "ratio_le", "|f| <= n e", fn=f, e=ideal.generator, bound=bound)])

    if isinstance(ideal, RegionIdeal):
        inner = ideal.region.interior()
        if support(f).is_subset(inner):
            return Verdict(MemberStatus.IN, [certify(
                "support_subset", "supp f inside int A", fn=f, region=inner)])
        return Verdict(MemberStatus.OUT, [certify(
            "not_region_subset", "supp f leaves int A", lhs=support(f), rhs=inner)])

    if isinstance(ideal, DisjComp):
        return _member(sublattice, disjoint_complement(ideal.inner), f, cutoff)

    if isinstance(ideal, Intersection):
        left = _member(sublattice, ideal.left, f, cutoff)
        right = _member(sublattice, ideal.right, f, cutoff)
        if MemberStatus.OUT in (left.status, right.status):
            status = MemberStatus.OUT
            certs = left.certificates if left.status == MemberStatus.OUT else right.certificates
        elif left.is_in and right.is_in:
            status, certs = MemberStatus.IN, left.certificates + right.certificates
        else:
            status, certs = MemberStatus.UNSUPPORTED, left.certificates + right.certificates
        return Verdict(status, certs, left.notes + right.notes)

    if isinstance(ideal, SequenceGenerated):
        return _sequence_member(ideal, f, cutoff)

    if isinstance(ideal, Sum):
        return _sum_member(sublattice, ideal, f, cutoff)

    raise TypeError(f"Not an ideal description: {ideal!r}")


def _sequence_member(ideal: SequenceGenerated, f: PLFun, cutoff: int) -> Verdict:
    limit = ideal.rule.limit
    if not support(f).is_subset(limit):
        return Verdict(MemberStatus.OUT, [certify(
            "not_region_subset", "support escapes the limit support",
            lhs=support(f), rhs=limit)])
    for n in range(1, cutoff + 1):
        h = ideal.rule.stage(n)
        bound = ratio_bound(f, h)
        if bound is not None and bound <= n:
            return Verdict(MemberStatus.IN, [certify(
                "ratio_le", f"|f| <= {n} h_{n}", fn=f, e=h, bound=n)])
    logger.debug(f"Stage search stopped at cutoff {cutoff}")
    return Verdict(MemberStatus.OUT, [], [f"cutoff_reached: {cutoff}"])


def _split_signed(f: PLFun, left: Region, right: Region) -> Tuple[PLFun, PLFun]:
    from .urysohn import split_cover

    pos_left, pos_right = split_cover(f.pos(), left, right)
    neg_left, neg_right = split_cover(f.neg(), left, right)
    return pos_left - neg_left, pos_right - neg_right


def _sum_member(sublattice: SublatticeSpec, ideal: Sum, f: PLFun, cutoff: int) -> Verdict:
    union = ideal_support(ideal)
    if not support(f).is_subset(union):
        return Verdict(MemberStatus.OUT, [certify(
            "not_region_subset", "support escapes the union of summand supports",
            lhs=support(f), rhs=union)])

    if sublattice.kind == EVEN_NEAR_ZERO:
        left_supp, right_supp = ideal_support(ideal.left), ideal_support(ideal.right)
        if not left_supp.is_disjoint(right_supp):
            return Verdict(MemberStatus.UNSUPPORTED, [],
                           ["overlapping summand supports in EvenNearZero"])
        first, second = _split_signed(f, left_supp, right_supp)
        certs = [certify("sum_equals", "forced split adds up to f",
                         parts=[first, second], total=f)]
        for part in (first, second):
            if not sublattice_member(sublattice, part):
                certs.append(certify("even_at", "forced summand is not even near 0",
                                     fn=part, x=0, expected=False))
                return Verdict(MemberStatus.OUT, certs, ["forced split leaves the sublattice"])
        return _combine_parts(sublattice, ideal.left, ideal.right, first, second, certs, cutoff)

    stages = [None] if is_support_determined(ideal, cutoff) else range(1, cutoff + 1)
    for n in stages:
        approx = ideal if n is None else stage_approximation(ideal, n)
        left_supp, right_supp = ideal_support(approx.left), ideal_support(approx.right)
        if not support(f).is_subset(left_supp.union(right_supp)):
            continue
        first, second = _split_signed(f, left_supp, right_supp)
        certs = [certify("sum_equals", "split adds up to f", parts=[first, second], total=f)]
        return _combine_parts(sublattice, approx.left, approx.right, first, second, certs, cutoff)
    return Verdict(MemberStatus.OUT, [], [f"cutoff_reached: {cutoff}"])


def _combine_parts(sublattice: SublatticeSpec, left: IdealSpec, right: IdealSpec,
                   first: PLFun, second: PLFun, certs: List[Certificate],
                   cutoff: int) -> Verdict:
    left_verdict = _member(sublattice, left, first, cutoff)
    right_verdict = _member(sublattice, right, second, cutoff)
    certs = certs + left_verdict.certificates + right_verdict.certificates
    notes = left_verdict.notes + right_verdict.notes
    if left_verdict.is_in and right_verdict.is_in:
        return Verdict(MemberStatus.IN, certs, notes)
    if MemberStatus.UNSUPPORTED in (left_verdict.status, right_verdict.status):
        return Verdict(MemberStatus.UNSUPPORTED, certs, notes)
    return Verdict(MemberStatus.OUT, certs, notes)


def band_status(ideal: IdealSpec, cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> BandStatus:
    """
    ProjectionBand iff supp H is clopen, BandOnly iff it is only regular
    open, NotBand otherwise (including ideals that are not E(supp H)).
    """
    if not is_support_determined(ideal, cutoff):
        return BandStatus.NOT_BAND
    region = ideal_support(ideal)
    if region.is_clopen():
        return BandStatus.PROJECTION_BAND
    if region.is_regular_open():
        return BandStatus.BAND_ONLY
    return BandStatus.NOT_BAND


def band_projection(ideal: IdealSpec, f: PLFun) -> Tuple[PLFun, PLFun]:
    """
    Split f as Pf + (f - Pf) with Pf in H and f - Pf in the disjoint complement.

    Raises:
        NotProjectionBandError: unless supp H is clopen
    """
    if band_status(ideal) != BandStatus.PROJECTION_BAND:
        raise NotProjectionBandError(f"{ideal_support(ideal)} is not clopen")
    part = f.restrict_components(ideal_support(ideal).full_components())
    return part, f - part


def projection_certificates(ideal: IdealSpec, f: PLFun) -> List[Certificate]:
    """
    Certificates for band_projection: the two parts add up to f and lie in
    H and its disjoint complement; for f >= 0, Pf <= f.
    """
    part, rest = band_projection(ideal, f)
    full = SublatticeSpec.full(ideal.space)
    certs = [certify("sum_equals", "Pf + (f - Pf) = f", parts=[part, rest], total=f)]
    certs += ideal_member(full, ideal, part).certificates
    certs += ideal_member(full, disjoint_complement(ideal), rest).certificates
    if f.is_nonnegative():
        certs.append(certify("le", "Pf <= f", lhs=part, rhs=f))
    return certs


def order_dense_status(sublattice: SublatticeSpec, ideal: IdealSpec) -> bool:
    if ideal.space != sublattice.space:
        raise SpaceMismatchError()
    return ideal_support(ideal).is_dense()


def middle_half(piece: Piece) -> Piece:
    if piece.is_point():
        return piece
    quarter = (piece.hi - piece.lo) / 4
    return Piece(piece.lo + quarter, piece.hi - quarter, False, False)


def order_dense_witness(ideal: IdealSpec, f: PLFun,
                        sublattice: Optional[SublatticeSpec] = None,
                        cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> PLFun:
    """
    For 0 < f, a member 0 < g <= f of H (and of the sublattice).

    g is f met with a bump on the middle half of a piece of
    supp f n supp H; inside EvenNearZero the piece avoids 0 so that g
    vanishes near 0.
    """
    sublattice = sublattice or SublatticeSpec.full(ideal.space)
    if not f.is_nonnegative() or f.is_zero():
        raise PreconditionViolatedError("order_dense_witness needs f >= 0, f != 0")
    if not order_dense_status(sublattice, ideal):
        raise NotOrderDenseError(f"{ideal_support(ideal)} is not dense")
    space = ideal.space
    stages = [None] if is_support_determined(ideal, cutoff) else range(1, cutoff + 1)
    for n in stages:
        approx = ideal if n is None else stage_approximation(ideal, n)
        window = support(f).intersect(ideal_support(approx))
        if sublattice.kind == EVEN_NEAR_ZERO:
            window = window.difference(Region.points(space, [0]))
        pieces = [piece for _, piece in window.iter_pieces()]
        if not pieces:
            continue
        core = Region.build(space, [middle_half(pieces[0])])
        g = f & bump_for(core)
        logger.debug(f"Order-dense witness on {core}")
        return g
    raise NotOrderDenseError(f"No stage up to {cutoff} meets supp f")


@dataclass
class IdentitiesReport:
    """
    Outcome of principal_identities_check.

    counterexample is None when every sample agreed, otherwise the first
    disagreeing g with its status in both ideals.
    """
    certificates: List[Certificate]
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None and all(c.holds for c in self.certificates)


def first_disagreement(lhs: IdealSpec, rhs: IdealSpec, seed: int,
                       samples: int = DEFAULT_SAMPLES, cutoff: int = DEFAULT_SEQUENCE_CUTOFF
                       ) -> Optional[Tuple[PLFun, MemberStatus, MemberStatus]]:
    """
    Replay the samples drawn from seed and return the first g whose
    membership status differs between lhs and rhs.
    """
    rng = random.Random(seed)
    full = SublatticeSpec.full(lhs.space)
    for _ in range(samples):
        g = random_plfun(rng, lhs.space)
        left = ideal_member(full, lhs, g, cutoff).status
        right = ideal_member(full, rhs, g, cutoff).status
        if left != right:
            return g, left, right
    return None


def principal_identities_check(e: PLFun, f: PLFun, rng: Optional[random.Random] = None,
                               samples: int = DEFAULT_SAMPLES,
                               cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> IdentitiesReport:
    """
    Check I(e v f) == I(e) + I(f) and I(e ^ f) == I(e) n I(f).

    Supports are compared exactly; membership is cross-checked on random
    samples drawn from a recorded seed, so a re-check replays the same
    samples. For disjoint e and f the intersection is the zero ideal.
    """
    rng = rng or random.Random(0)
    if e.space != f.space:
        raise SpaceMismatchError()
    certs = [
        certify("support_equals", "supp(e v f) = supp e u supp f",
                fn=e | f, region=support(e).union(support(f))),
        certify("support_equals", "supp(e ^ f) = supp e n supp f",
                fn=e & f, region=support(e).intersect(support(f))),
    ]
    if (e & f).is_zero():
        certs.append(certify("region_empty", "disjoint generators give disjoint ideals",
                             region=support(e).intersect(support(f))))

    identities = (
        ("I(e v f) = I(e) + I(f)", Principal(e | f), Sum(Principal(e), Principal(f))),
        ("I(e ^ f) = I(e) n I(f)", Principal(e & f), Intersection(Principal(e), Principal(f))),
    )
    counterexample = None
    for name, lhs, rhs in identities:
        seed = rng.randrange(2 ** 32)
        certs.append(certify("membership_agrees", f"{name} on {samples} samples", lhs=lhs,
                             rhs=rhs, seed=seed, samples=samples, cutoff=cutoff))
        if certs[-1].holds or counterexample is not None:
            continue
        g, left, right = first_disagreement(lhs, rhs, seed, samples, cutoff)
        logger.info(f"{name} fails at g = {g}: {left.value} vs {right.value}")
        counterexample = {"identity": name, "fn": g, "lhs": left, "rhs": right}
        certs += [
            certify("ideal_member", f"g is {left.value} on the left", subject="status:lhs",
                    sublattice=FULL, ideal=lhs, fn=g, cutoff=cutoff, status=left),
            certify("ideal_member", f"g is {right.value} on the right", subject="status:rhs",
                    sublattice=FULL, ideal=rhs, fn=g, cutoff=cutoff, status=right),
        ]
    return IdentitiesReport(certs, counterexample)


def local_projection_check(ideal: IdealSpec, g: PLFun) -> Tuple[bool, List[Certificate]]:
    """
    Whether H n I_g is a projection band in I_g, i.e. g in H + H^d.

    Decided from supports (supp g must avoid the boundary of supp H) and
    cross-checked against Sum membership.
    """
    region = ideal_support(ideal)
    outside = region.closure().complement()
    allowed = region.union(outside)
    by_support = support(g).is_subset(allowed)
    if by_support:
        cert = certify("support_subset", "supp g avoids the boundary of supp H",
                       fn=g, region=allowed)
    else:
        cert = certify("not_region_subset", "supp g meets the boundary of supp H",
                       lhs=support(g), rhs=allowed)
    agree = certify("ideal_member", "support test agrees with H + H^d membership",
                    sublattice=FULL, ideal=Sum(ideal, RegionIdeal(outside)), fn=g,
                    cutoff=DEFAULT_SEQUENCE_CUTOFF,
                    status=MemberStatus.IN if by_support else MemberStatus.OUT)
    return by_support, [cert, agree]
