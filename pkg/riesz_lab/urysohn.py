"""
Constructive Urysohn-type lemmas over PL functions.

Each construction fixes a deterministic shape (bumps, trapezoids, midpoint
expansions) and has a companion *_certificates function that re-verifies the
output against its postconditions with independent pointwise and region
checks.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple
import logging

from .errors import (
    CompactNotInsideOpenError,
    CompactNotInsideSupportError,
    CoverViolatedError,
    InvalidSequenceRuleError,
    NoWitnessRegionError,
    PreconditionViolatedError,
    RegionsIntersectError,
)
from .functions import (
    PLFun,
    bump_for,
    distance_profile,
    ratio_bound,
    require_closed,
    require_open,
    riesz_split,
    sup_norm_on,
    superlevel,
    support,
)
from .ideals import (
    FULL,
    IdealSpec,
    SublatticeSpec,
    ideal_member,
    ideal_support,
    is_support_determined,
    middle_half,
    stage_approximation,
)
from .regions import Region, Space, midpoint_expansion
from .schemas import Certificate, MemberStatus
from .utils import DEFAULT_SEQUENCE_CUTOFF, format_rational, to_rational
from .verifiers import all_hold, certify


logger = logging.getLogger("rieszlab")

SEQUENCE_KINDS = ("exhaustion", "multiples")


@dataclass(frozen=True)
class IncreasingSeqRule:
    """
    Catalog rule n -> h_n of nonnegative PL functions with h_n <= h_{n+1}.

    exhaustion(U, scale): h_n ramps from 0 where dist(x, X \\ U) <= scale/(n+1)
    up to 1 where it is >= scale/n; the supports exhaust the open region U.

    multiples(e): h_n = n e, generating the principal ideal of e.
    """
    kind: str
    space: Space
    region: Optional[Region] = None
    scale: Fraction = Fraction(1)
    generator: Optional[PLFun] = None

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise InvalidSequenceRuleError(f"Unknown sequence rule: {self.kind}")
        object.__setattr__(self, 'scale', to_rational(self.scale))
        if self.kind == "exhaustion":
            if self.region is None or not self.region.is_open():
                raise InvalidSequenceRuleError("exhaustion needs an open region")
            if self.scale <= 0:
                raise InvalidSequenceRuleError("exhaustion needs a positive scale")
        elif self.generator is None or not self.generator.is_nonnegative():
            raise InvalidSequenceRuleError("multiples needs a generator e >= 0")

    @classmethod
    def exhaustion(cls, region: Region, scale=1) -> "IncreasingSeqRule":
        return cls("exhaustion", region.space, region=region, scale=scale)

    @classmethod
    def multiples(cls, e: PLFun) -> "IncreasingSeqRule":
        return cls("multiples", e.space, generator=e)

    @cached_property
    def _distance(self) -> PLFun:
        return distance_profile(self.space, self.region.complement(), self.scale)

    def stage(self, n: int) -> PLFun:
        if n < 1:
            raise ValueError("Stages start at 1")
        if self.kind == "multiples":
            return self.generator.scale(n)
        outer, inner = self.scale / n, self.scale / (n + 1)
        shifted = self._distance - PLFun.constant(self.space, inner)
        ramp = shifted.scale(1 / (outer - inner))
        return (ramp & PLFun.one(self.space)).pos()

    @property
    def limit(self) -> Region:
        if self.kind == "multiples":
            return support(self.generator)
        return self.region

    def verify(self, stages: int = 16) -> None:
        """
        Check nonnegativity, monotonicity and supports inside the limit.

        Raises:
            InvalidSequenceRuleError: on the first failing stage
        """
        previous = None
        for n in range(1, stages + 1):
            h = self.stage(n)
            if not h.is_nonnegative():
                raise InvalidSequenceRuleError(f"h_{n} takes negative values")
            if previous is not None and not previous <= h:
                raise InvalidSequenceRuleError(f"h_{n - 1} <= h_{n} fails")
            if not support(h).is_subset(self.limit):
                raise InvalidSequenceRuleError(f"supp h_{n} leaves the limit region")
            previous = h

    def to_json(self) -> Dict[str, Any]:
        if self.kind == "multiples":
            return {"kind": "multiples", "e": self.generator.to_json()}
        return {"kind": "exhaustion", "region": self.region.to_json(),
                "scale": format_rational(self.scale)}


def _require_nonnegative(f: PLFun, name: str = "f") -> None:
    if not f.is_nonnegative():
        raise PreconditionViolatedError(f"{name} must be >= 0")


def coincide_vanish(f: PLFun, compact: Region, open_region: Region) -> PLFun:
    """
    e with 0 <= e <= f, e == f on K and supp e inside U.

    Built as f ^ (M bump_for(U, K)) with M the supremum of f on U.

    Args:
        f: Nonnegative function
        compact: Closed region K
        open_region: Open region U containing K
    """
    _require_nonnegative(f)
    require_closed(compact, "K")
    require_open(open_region, "U")
    if not compact.is_subset(open_region):
        raise CompactNotInsideOpenError(f"{compact} is not inside {open_region}")
    if open_region.is_empty():
        return PLFun.zero(f.space)
    height = sup_norm_on(f, open_region)
    if height == 0:
        return PLFun.zero(f.space)
    return f & bump_for(open_region, compact).scale(height)


def coincide_certificates(f: PLFun, compact: Region, open_region: Region,
                          e: PLFun) -> List[Certificate]:
    return [
        certify("nonnegative", "e >= 0", fn=e),
        certify("le", "e <= f", lhs=e, rhs=f),
        certify("equal_on", "e = f on K", lhs=e, rhs=f, region=compact),
        certify("support_subset", "supp e inside U", fn=e, region=open_region),
    ]


def separate_compacts(f: PLFun, compact: Region, other: Region) -> PLFun:
    """
    e with 0 <= e <= f, e == f on K and e == 0 on L, for disjoint closed K, L.
    """
    require_closed(compact, "K")
    require_closed(other, "L")
    if not compact.is_disjoint(other):
        raise RegionsIntersectError(f"{compact} meets {other}")
    return coincide_vanish(f, compact, other.complement())


def split_cover(f: PLFun, first: Region, second: Region) -> Tuple[PLFun, PLFun]:
    """
    Split f >= 0 as g + h with supp g in U and supp h in V.

    n is the least multiplier with f <= n (bump_U + bump_V); the split is the
    Riesz decomposition of f under n bump_U + n bump_V.

    Raises:
        CoverViolatedError: if supp f is not inside U u V
    """
    _require_nonnegative(f)
    require_open(first, "U")
    require_open(second, "V")
    if not support(f).is_subset(first.union(second)):
        raise CoverViolatedError(f"supp f is not inside {first.union(second)}")
    bump_first, bump_second = bump_for(first), bump_for(second)
    n = ratio_bound(f, bump_first + bump_second)
    logger.debug(f"split_cover multiplier {n}")
    return riesz_split(f, bump_first.scale(n), bump_second.scale(n))


def split_certificates(f: PLFun, first: Region, second: Region,
                       g: PLFun, h: PLFun) -> List[Certificate]:
    return [
        certify("sum_equals", "g + h = f", parts=[g, h], total=f),
        certify("nonnegative", "g >= 0", fn=g),
        certify("nonnegative", "h >= 0", fn=h),
        certify("le", "g <= f", lhs=g, rhs=f),
        certify("le", "h <= f", lhs=h, rhs=f),
        certify("support_subset", "supp g inside U", fn=g, region=first),
        certify("support_subset", "supp h inside V", fn=h, region=second),
    ]


def _support_stage(ideal: IdealSpec, compact: Region, cutoff: int) -> IdealSpec:
    if is_support_determined(ideal, cutoff):
        return ideal
    for n in range(1, cutoff + 1):
        approx = stage_approximation(ideal, n)
        if compact.is_subset(ideal_support(approx)):
            return approx
    raise CompactNotInsideSupportError(f"No stage up to {cutoff} covers {compact}")


def ideal_coincide(ideal: IdealSpec, compact: Region, f: PLFun,
                   cutoff: int = DEFAULT_SEQUENCE_CUTOFF) -> PLFun:
    """
    h in H with 0 <= h <= f and h == f on the closed region K inside supp H.

    K is grown by half its distance to the edge of supp H (or of the first
    generator stage covering it); h vanishes outside that expansion.
    """
    _require_nonnegative(f)
    require_closed(compact, "K")
    if not compact.is_subset(ideal_support(ideal)):
        raise CompactNotInsideSupportError(f"{compact} is not inside supp H")
    if compact.is_empty():
        return PLFun.zero(f.space)
    stage = _support_stage(ideal, compact, cutoff)
    window = midpoint_expansion(compact, ideal_support(stage))
    return coincide_vanish(f, compact, window)


def ideal_coincide_certificates(ideal: IdealSpec, compact: Region, f: PLFun,
                                h: PLFun, cutoff: int = DEFAULT_SEQUENCE_CUTOFF
                                ) -> List[Certificate]:
    certs = [
        certify("nonnegative", "h >= 0", fn=h),
        certify("le", "h <= f", lhs=h, rhs=f),
        certify("equal_on", "h = f on K", lhs=h, rhs=f, region=compact),
    ]
    verdict = ideal_member(SublatticeSpec.full(ideal.space), ideal, h, cutoff)
    certs += verdict.certificates
    certs.append(certify("ideal_member", "h is a member of H", sublattice=FULL, ideal=ideal,
                         fn=h, cutoff=cutoff, status=MemberStatus.IN))
    return certs


def order_dense_urysohn(f: PLFun, open_region: Region) -> Tuple[Region, PLFun]:
    """
    Nonempty open V inside U and e with 0 <= e <= f, supp e in U, e == f on V.

    V is the middle half of the first piece of U n supp f. When f vanishes
    on all of U, V = U and e = 0.
    """
    _require_nonnegative(f)
    require_open(open_region, "U")
    if open_region.is_empty():
        raise NoWitnessRegionError("U is empty")
    window = open_region.intersect(support(f))
    pieces = [piece for _, piece in window.iter_pieces()]
    if not pieces:
        return open_region, PLFun.zero(f.space)
    core = Region.build(f.space, [middle_half(pieces[0])])
    e = coincide_vanish(f, core.closure(), open_region)
    logger.debug(f"order_dense_urysohn picked V = {core}")
    return core, e


def order_dense_certificates(f: PLFun, open_region: Region, core: Region,
                             e: PLFun) -> List[Certificate]:
    return [
        certify("region_pred", "V is open", pred="is_open", region=core, expected=True),
        certify("region_pred", "V is not empty", pred="is_empty", region=core, expected=False),
        certify("region_subset", "V inside U", lhs=core, rhs=open_region),
        certify("nonnegative", "e >= 0", fn=e),
        certify("le", "e <= f", lhs=e, rhs=f),
        certify("equal_on", "e = f on V", lhs=e, rhs=f, region=core),
        certify("support_subset", "supp e inside U", fn=e, region=open_region),
    ]


@dataclass
class TelescopingResult:
    """
    Disjoint telescoping pieces f_1..f_N with partial sums g_n.

    compacts[n - 1] is K_n = {h_n >= e/n} for n = 1..N+1.
    """
    parts: List[PLFun]
    partial_sums: List[PLFun]
    compacts: List[Region]
    certificates: List[Certificate] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all_hold(self.certificates)


def telescoping_decomposition(f: PLFun, rule: IncreasingSeqRule, e_unit: PLFun,
                              count: int) -> TelescopingResult:
    """
    Build f_n in [0, f - g_{n-1}] equal to f - g_{n-1} on K_n and vanishing
    outside int K_{n+1}, where K_n = {h_n >= e_unit/n}, and verify:
    f_n and f_m disjoint for |m - n| > 1; f - g_n disjoint from f_m for
    m < n; 0 <= f - g_n <= (f - h_n)^+ + e_unit/n; and, for the bounds
    g_N, f and g_N + e_unit, (f - g)^+ vanishes on K_N.

    Args:
        f: Nonnegative function
        rule: Increasing generator sequence
        e_unit: Strictly positive unit
        count: Number of pieces N >= 1
    """
    if count < 1:
        raise ValueError("Need at least one piece")
    _require_nonnegative(f)
    if e_unit.space != f.space or rule.space != f.space:
        raise PreconditionViolatedError("f, the sequence and the unit must share a space")
    if e_unit.min_value() <= 0:
        raise PreconditionViolatedError(
            f"e_unit must be strictly positive at every point, got minimum "
            f"{format_rational(e_unit.min_value())}; a weak unit vanishing somewhere is rejected"
        )
    rule.verify(count + 1)

    space = f.space
    zero = PLFun.zero(space)
    stages = [rule.stage(n) for n in range(1, count + 2)]
    compacts = [
        superlevel(h - e_unit.scale(Fraction(1, n)), 0)
        for n, h in enumerate(stages, start=1)
    ]
    parts: List[PLFun] = []
    sums: List[PLFun] = []
    current = zero
    for n in range(1, count + 1):
        rest = f - current
        piece = coincide_vanish(rest, compacts[n - 1], compacts[n].interior())
        parts.append(piece)
        current = current + piece
        sums.append(current)
    logger.debug(f"Telescoping built {count} pieces")

    result = TelescopingResult(parts, sums, compacts)
    certs = result.certificates
    for n in range(1, count + 1):
        for m in range(n + 2, count + 1):
            certs.append(certify("disjoint", f"f_{n} and f_{m} are disjoint",
                                 lhs=parts[n - 1], rhs=parts[m - 1]))
    for n in range(1, count + 1):
        rest = f - sums[n - 1]
        for m in range(1, n):
            certs.append(certify("disjoint", f"f - g_{n} and f_{m} are disjoint",
                                 lhs=rest, rhs=parts[m - 1]))
        slack = (f - stages[n - 1]).pos() + e_unit.scale(Fraction(1, n))
        certs.append(certify("nonnegative", f"f - g_{n} >= 0", fn=rest))
        certs.append(certify("le", f"f - g_{n} <= (f - h_{n})^+ + e/{n}",
                             lhs=rest, rhs=slack))
    last = sums[-1]
    for name, bound in (("g_N", last), ("f", f), ("g_N + e", last + e_unit)):
        certs.append(certify("equal_on", f"(f - {name})^+ vanishes on K_N",
                             lhs=(f - bound).pos(), rhs=zero, region=compacts[count - 1]))
    return result
