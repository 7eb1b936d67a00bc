"""
Exact piecewise-linear functions on a Space.

A PLFun stores, per component, a strictly increasing list of knots (x, value)
starting and ending at the component endpoints; the function is affine
between consecutive knots. Knots collinear with their neighbours are dropped,
so structural equality is equality of functions.

Lattice operations insert crossing points exactly, which keeps every result
piecewise linear with rational knots.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import bisect
import logging

from .errors import (
    CompactNotInsideOpenError,
    EmptyRegionError,
    NotClosedError,
    NotOpenError,
    PreconditionViolatedError,
    SchemaError,
    SpaceMismatchError,
)
from .regions import Piece, Region, Space
from .utils import format_rational, pairwise, read_rational, to_rational


logger = logging.getLogger("rieszlab")

Knot = Tuple[Fraction, Fraction]


def _collinear(p: Knot, q: Knot, r: Knot) -> bool:
    return (q[1] - p[1]) * (r[0] - q[0]) == (r[1] - q[1]) * (q[0] - p[0])


def _simplify(knots: Sequence[Knot]) -> Tuple[Knot, ...]:
    out: List[Knot] = []
    for knot in knots:
        while len(out) >= 2 and _collinear(out[-2], out[-1], knot):
            out.pop()
        out.append(knot)
    return tuple(out)


@dataclass(frozen=True)
class PLFun:
    """
    Continuous piecewise-linear function with rational knots.

    Attributes:
        space: The Space the function lives on
        knots: Per component, the canonical knot list
    """
    space: Space
    knots: Tuple[Tuple[Knot, ...], ...]

    # Construction

    @classmethod
    def from_knots(cls, space: Space, knots) -> "PLFun":
        """
        Build a function from per-component knot lists.

        Args:
            space: Target space
            knots: One list of (x, value) pairs per component
        """
        knots = list(knots)
        if len(knots) != len(space.components):
            raise SpaceMismatchError(
                f"Expected {len(space.components)} knot lists, got {len(knots)}"
            )
        canon = []
        for (a, b), comp in zip(space.components, knots):
            comp = [(to_rational(x), to_rational(v)) for x, v in comp]
            if not comp:
                raise ValueError("Every component needs at least one knot")
            if comp[0][0] != a or comp[-1][0] != b:
                raise ValueError(
                    f"Knots must start at {a} and end at {b}"
                )
            if a == b:
                if len(comp) != 1:
                    raise ValueError("A degenerate component takes a single knot")
                canon.append(tuple(comp))
                continue
            for (x0, _), (x1, _) in pairwise(comp):
                if not x0 < x1:
                    raise ValueError("Knot abscissae must be strictly increasing")
            canon.append(_simplify(comp))
        return cls(space, tuple(canon))

    @classmethod
    def from_profile(cls, space: Space, xs_per_component, value: Callable) -> "PLFun":
        """
        Build a function by evaluating value(x) at the given abscissae.
        """
        knots = []
        for (a, b), xs in zip(space.components, xs_per_component):
            grid = sorted({a, b} | {to_rational(x) for x in xs if a <= x <= b})
            knots.append([(x, to_rational(value(x))) for x in grid])
        return cls.from_knots(space, knots)

    @classmethod
    def constant(cls, space: Space, c=0) -> "PLFun":
        c = to_rational(c)
        return cls.from_knots(space, [
            [(a, c)] if a == b else [(a, c), (b, c)] for a, b in space.components
        ])

    @classmethod
    def zero(cls, space: Space) -> "PLFun":
        return cls.constant(space, 0)

    @classmethod
    def one(cls, space: Space) -> "PLFun":
        return cls.constant(space, 1)

    @classmethod
    def identity(cls, space: Space) -> "PLFun":
        return cls.from_knots(space, [
            [(a, a)] if a == b else [(a, a), (b, b)] for a, b in space.components
        ])

    @classmethod
    def tent(cls, space: Space, lo, peak, hi, height) -> "PLFun":
        """
        Tent supported on [lo, hi] with value height at peak, zero elsewhere.
        """
        lo, peak, hi, height = (to_rational(v) for v in (lo, peak, hi, height))
        if not lo < peak < hi:
            raise ValueError("Tent needs lo < peak < hi")
        idx = space.locate(peak)
        a, b = space.components[idx]
        if lo < a or hi > b:
            raise ValueError(f"Tent [{lo}, {hi}] leaves its component [{a}, {b}]")
        knots = []
        for j, (ca, cb) in enumerate(space.components):
            if j != idx:
                knots.append([(ca, Fraction(0))] if ca == cb else
                             [(ca, Fraction(0)), (cb, Fraction(0))])
                continue
            pts = {a: Fraction(0), b: Fraction(0), lo: Fraction(0), hi: Fraction(0)}
            pts[peak] = height
            knots.append(sorted(pts.items()))
        return cls.from_knots(space, knots)

    # Evaluation

    def _component_value(self, idx: int, x: Fraction) -> Fraction:
        comp = self.knots[idx]
        if len(comp) == 1:
            return comp[0][1]
        xs = [k[0] for k in comp]
        pos = bisect.bisect_left(xs, x)
        if pos < len(xs) and xs[pos] == x:
            return comp[pos][1]
        (x0, v0), (x1, v1) = comp[pos - 1], comp[pos]
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0)

    def __call__(self, x) -> Fraction:
        x = to_rational(x)
        return self._component_value(self.space.locate(x), x)

    def slopes_at(self, x) -> Tuple[Optional[Fraction], Optional[Fraction]]:
        """
        One-sided slopes (left, right) at x; None past a component end.
        """
        x = to_rational(x)
        idx = self.space.locate(x)
        comp = self.knots[idx]
        a, b = self.space.components[idx]
        left = right = None
        xs = [k[0] for k in comp]
        if x > a:
            pos = bisect.bisect_left(xs, x)
            (x0, v0), (x1, v1) = comp[pos - 1], comp[pos]
            left = (v1 - v0) / (x1 - x0)
        if x < b:
            pos = bisect.bisect_right(xs, x)
            (x0, v0), (x1, v1) = comp[pos - 1], comp[pos]
            right = (v1 - v0) / (x1 - x0)
        return left, right

    def abscissae(self, idx: int) -> List[Fraction]:
        return [x for x, _ in self.knots[idx]]

    def values(self) -> List[Fraction]:
        return [v for comp in self.knots for _, v in comp]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values())

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values())

    def max_value(self) -> Fraction:
        return max(self.values())

    def min_value(self) -> Fraction:
        return min(self.values())

    # Arithmetic

    def _combine(self, other: "PLFun", op: Callable[[Fraction, Fraction], Fraction],
                 crossings: bool) -> "PLFun":
        if self.space != other.space:
            raise SpaceMismatchError()
        knots = []
        for idx in range(len(self.space.components)):
            xs = sorted(set(self.abscissae(idx)) | set(other.abscissae(idx)))
            fv = [self._component_value(idx, x) for x in xs]
            gv = [other._component_value(idx, x) for x in xs]
            points = []
            for i, x in enumerate(xs):
                points.append((x, fv[i], gv[i]))
                if crossings and i + 1 < len(xs):
                    d0, d1 = fv[i] - gv[i], fv[i + 1] - gv[i + 1]
                    if d0 * d1 < 0:
                        x1 = xs[i + 1]
                        cx = x + (x1 - x) * d0 / (d0 - d1)
                        cv = fv[i] + (fv[i + 1] - fv[i]) * (cx - x) / (x1 - x)
                        points.append((cx, cv, cv))
            knots.append([(x, op(u, v)) for x, u, v in points])
        return PLFun.from_knots(self.space, knots)

    def _map(self, op: Callable[[Fraction], Fraction]) -> "PLFun":
        return PLFun.from_knots(
            self.space, [[(x, op(v)) for x, v in comp] for comp in self.knots]
        )

    def __add__(self, other: "PLFun") -> "PLFun":
        return self._combine(other, lambda u, v: u + v, crossings=False)

    def __sub__(self, other: "PLFun") -> "PLFun":
        return self._combine(other, lambda u, v: u - v, crossings=False)

    def __neg__(self) -> "PLFun":
        return self._map(lambda v: -v)

    def scale(self, c) -> "PLFun":
        c = to_rational(c)
        return self._map(lambda v: c * v)

    def __rmul__(self, c) -> "PLFun":
        return self.scale(c)

    def __or__(self, other: "PLFun") -> "PLFun":
        return self._combine(other, max, crossings=True)

    def __and__(self, other: "PLFun") -> "PLFun":
        return self._combine(other, min, crossings=True)

    def __abs__(self) -> "PLFun":
        return self | -self

    def pos(self) -> "PLFun":
        return self | PLFun.zero(self.space)

    def neg(self) -> "PLFun":
        """
        Negative part f^- = (-f)^+, a nonnegative function.
        """
        return (-self).pos()

    def __le__(self, other: "PLFun") -> bool:
        return (other - self).is_nonnegative()

    def __ge__(self, other: "PLFun") -> bool:
        return (self - other).is_nonnegative()

    def disjoint_from(self, other: "PLFun") -> bool:
        return (abs(self) & abs(other)).is_zero()

    def restrict_components(self, indices) -> "PLFun":
        """
        Keep the function on the given components and set it to 0 elsewhere.
        """
        keep = set(indices)
        knots = []
        for idx, comp in enumerate(self.knots):
            knots.append(comp if idx in keep else [(x, Fraction(0)) for x, _ in comp])
        return PLFun.from_knots(self.space, knots)

    # Codec

    def to_json(self) -> List[List[List[str]]]:
        return [
            [[format_rational(x), format_rational(v)] for x, v in comp]
            for comp in self.knots
        ]

    @classmethod
    def from_json(cls, data, space: Optional[Space] = None,
                  location: str = "$") -> "PLFun":
        """
        Decode a per-component list of [x, value] pairs.

        The knot lists carry their component endpoints, so the space is
        recovered from the data when not given.
        """
        if not isinstance(data, list) or not data:
            raise SchemaError("a function is a nonempty list of knot lists", location)
        knots = []
        for i, comp in enumerate(data):
            if not isinstance(comp, list) or not comp:
                raise SchemaError("expected a nonempty list of [x, v] pairs",
                                  f"{location}[{i}]")
            row = []
            for j, pair in enumerate(comp):
                where = f"{location}[{i}][{j}]"
                if not isinstance(pair, list) or len(pair) != 2:
                    raise SchemaError("expected an [x, v] pair", where)
                row.append((read_rational(pair[0], f"{where}[0]"),
                            read_rational(pair[1], f"{where}[1]")))
            knots.append(row)
        if space is None:
            space = Space.from_json(
                [[format_rational(c[0][0]), format_rational(c[-1][0])] for c in knots],
                location,
            )
        try:
            return cls.from_knots(space, knots)
        except (ValueError, SpaceMismatchError) as e:
            raise SchemaError(str(e), location)

    def __str__(self) -> str:
        comps = []
        for comp in self.knots:
            comps.append(", ".join(
                f"{format_rational(x)}->{format_rational(v)}" for x, v in comp
            ))
        return "PL[" + " | ".join(comps) + "]"


PL_OPS = ('add', 'sub', 'scale', 'join', 'meet', 'abs', 'pos_part', 'neg_part')


def pl_eval(f: PLFun, x) -> Fraction:
    """
    Exact value of f at x by affine interpolation.
    """
    return f(x)


def pl_op(op: str, *args: PLFun, scalar=None) -> PLFun:
    """
    Apply a named linear or lattice operation.

    Args:
        op: One of add, sub, scale, join, meet, abs, pos_part, neg_part
        args: PLFun operands (one or two)
        scalar: Multiplier for scale

    Returns:
        The result in canonical form
    """
    if op in ('add', 'sub', 'join', 'meet'):
        f, g = args
        return {
            'add': lambda: f + g,
            'sub': lambda: f - g,
            'join': lambda: f | g,
            'meet': lambda: f & g,
        }[op]()
    (f,) = args
    if op == 'scale':
        if scalar is None:
            raise ValueError("scale needs a scalar")
        return f.scale(scalar)
    if op == 'abs':
        return abs(f)
    if op == 'pos_part':
        return f.pos()
    if op == 'neg_part':
        return f.neg()
    raise ValueError(f"Unknown function operation: {op}")


def support(f: PLFun) -> Region:
    """
    The relatively open region {x : f(x) != 0}.
    """
    zeros: List[Piece] = []
    for comp in f.knots:
        for x, v in comp:
            if v == 0:
                zeros.append(Piece(x, x))
        for (x0, v0), (x1, v1) in pairwise(comp):
            if v0 == 0 and v1 == 0:
                zeros.append(Piece(x0, x1))
            elif v0 * v1 < 0:
                cx = x0 + (x1 - x0) * v0 / (v0 - v1)
                zeros.append(Piece(cx, cx))
    return Region.build(f.space, zeros).complement()


def kernel(f: PLFun) -> Region:
    return support(f).complement()


def superlevel(f: PLFun, c) -> Region:
    """
    The closed region {x : f(x) >= c}.
    """
    below = (PLFun.constant(f.space, c) - f).pos()
    return support(below).complement()


def sup_norm_on(f: PLFun, region: Region) -> Fraction:
    """
    Exact supremum of |f| over a nonempty region.
    """
    if region.space != f.space:
        raise SpaceMismatchError()
    if region.is_empty():
        raise EmptyRegionError("Supremum over an empty region")
    best = Fraction(0)
    for idx, piece in region.iter_pieces():
        best = max(best, abs(f._component_value(idx, piece.lo)),
                   abs(f._component_value(idx, piece.hi)))
        for x, v in f.knots[idx]:
            if piece.lo < x < piece.hi:
                best = max(best, abs(v))
    return best


def ratio_sup(f: PLFun, e: PLFun, region: Region) -> Optional[Fraction]:
    """
    Exact supremum of |f|/e over the points of region where e > 0.

    Limits at the region's boundary are included, so a point where e
    vanishes but |f| does not makes the supremum infinite (None). Where
    both vanish the limit is the quotient of one-sided slopes.

    Args:
        f: Numerator
        e: Nonnegative denominator
        region: Region to take the supremum over

    Returns:
        The supremum, or None if it is infinite
    """
    if f.space != e.space or region.space != f.space:
        raise SpaceMismatchError()
    numerator = abs(f)
    best = Fraction(0)
    for idx, piece in region.iter_pieces():
        if piece.is_point():
            top = numerator._component_value(idx, piece.lo)
            bottom = e._component_value(idx, piece.lo)
            if bottom > 0:
                best = max(best, top / bottom)
            elif top != 0:
                return None
            continue
        grid = sorted(
            {piece.lo, piece.hi}
            | {x for x in numerator.abscissae(idx) if piece.lo < x < piece.hi}
            | {x for x in e.abscissae(idx) if piece.lo < x < piece.hi}
        )
        for x0, x1 in pairwise(grid):
            f0 = numerator._component_value(idx, x0)
            f1 = numerator._component_value(idx, x1)
            e0 = e._component_value(idx, x0)
            e1 = e._component_value(idx, x1)
            if e0 <= 0 and e1 <= 0:
                if f0 != 0 or f1 != 0:
                    return None
                continue
            for top, bottom in ((f0, e0), (f1, e1)):
                if bottom > 0:
                    best = max(best, top / bottom)
                elif top != 0:
                    return None
                else:
                    best = max(best, abs((f1 - f0) / (e1 - e0)))
    return best


def ratio_bound(f: PLFun, e: PLFun) -> Optional[Fraction]:
    """
    Least n >= 0 with |f| <= n*e, or None when no such n exists.

    Such an n exists exactly when supp f lies inside supp e: piecewise-linear
    functions vanish at most linearly, so the ratio stays bounded.
    """
    if not e.is_nonnegative():
        raise PreconditionViolatedError("ratio_bound needs e >= 0")
    if not support(f).is_subset(support(e)):
        return None
    bound = ratio_sup(f, e, support(e))
    logger.debug(f"ratio_bound: least multiplier {bound}")
    return bound


def riesz_split(f: PLFun, g1: PLFun, g2: PLFun) -> Tuple[PLFun, PLFun]:
    """
    Split 0 <= f <= g1 + g2 as f1 + f2 with 0 <= f1 <= g1 and 0 <= f2 <= g2.
    """
    if not (g1.is_nonnegative() and g2.is_nonnegative()):
        raise PreconditionViolatedError("riesz_split needs g1, g2 >= 0")
    if not (f.is_nonnegative() and f <= g1 + g2):
        raise PreconditionViolatedError("riesz_split needs 0 <= f <= g1 + g2")
    first = f & g1
    return first, f - first


def _distance_knots(a: Fraction, b: Fraction, walls: Sequence[Piece]) -> List[Knot]:
    """
    Knots of x -> dist(x, walls) on [a, b]; walls are closed and nonempty.
    """
    pts: Dict[Fraction, Fraction] = {}
    if walls[0].lo > a:
        pts[a] = walls[0].lo - a
    for wall in walls:
        pts[wall.lo] = Fraction(0)
        pts[wall.hi] = Fraction(0)
    for left, right in pairwise(walls):
        mid = (left.hi + right.lo) / 2
        pts[mid] = mid - left.hi
    if walls[-1].hi < b:
        pts[b] = b - walls[-1].hi
    return sorted(pts.items())


def _wall_distance(x: Fraction, walls: Sequence[Piece]) -> Fraction:
    return min(Piece(x, x).gap_to(wall) for wall in walls)


def distance_profile(space: Space, closed: Region, cap) -> PLFun:
    """
    min(cap, dist(x, C)) measured inside each component; components that
    miss C get the constant cap.
    """
    cap = to_rational(cap)
    knots = []
    for idx, (a, b) in enumerate(space.components):
        walls = closed.closure().pieces[idx]
        if not walls:
            knots.append([(a, cap)] if a == b else [(a, cap), (b, cap)])
        elif a == b:
            knots.append([(a, Fraction(0))])
        else:
            knots.append(_distance_knots(a, b, walls))
    return PLFun.from_knots(space, knots) & PLFun.constant(space, cap)


def bump_for(open_region: Region, compact: Optional[Region] = None) -> PLFun:
    """
    Urysohn profile: 0 <= e <= 1 with supp e == U exactly, e == 1 on K.

    On each piece of U the profile is the distance to the complement of U,
    rescaled so that its peak is 1 (a symmetric tent, or a ramp up to an
    included component endpoint); with K given it is rescaled so that it
    reaches 1 on K and clamped there.

    Args:
        open_region: Open region U
        compact: Optional closed region K inside U

    Returns:
        The profile e
    """
    if not open_region.is_open():
        raise NotOpenError(f"{open_region} is not open")
    space = open_region.space
    if compact is not None:
        if not compact.closure().is_subset(open_region):
            raise CompactNotInsideOpenError(f"{compact} is not inside {open_region}")
        compact = compact.closure()
    walls_region = open_region.complement()
    knots = []
    for idx, (a, b) in enumerate(space.components):
        pieces = open_region.pieces[idx]
        walls = walls_region.pieces[idx]
        if not pieces:
            knots.append([(a, Fraction(0))] if a == b else [(a, Fraction(0)), (b, Fraction(0))])
            continue
        if not walls:
            knots.append([(a, Fraction(1))] if a == b else [(a, Fraction(1)), (b, Fraction(1))])
            continue
        dist = _distance_knots(a, b, walls)
        scales = []
        for piece in pieces:
            inner = [k for k in (compact.pieces[idx] if compact else ())
                     if piece.contains(k.lo)]
            if inner:
                low = min(min(_wall_distance(k.lo, walls), _wall_distance(k.hi, walls))
                          for k in inner)
                scales.append(1 / low)
            else:
                peak = max(d for x, d in dist if piece.contains(x))
                scales.append(1 / peak)
        comp = []
        for x, d in dist:
            if d == 0:
                comp.append((x, d))
                continue
            owner = next(i for i, piece in enumerate(pieces) if piece.contains(x))
            comp.append((x, d * scales[owner]))
        knots.append(comp)
    return PLFun.from_knots(space, knots) & PLFun.one(space)


def indicator_of_components(space: Space, indices) -> PLFun:
    """
    The (continuous) indicator of a union of whole components.
    """
    return PLFun.one(space).restrict_components(indices)


def require_closed(region: Region, name: str = "region") -> None:
    if not region.is_closed():
        raise NotClosedError(f"{name} {region} is not closed")


def require_open(region: Region, name: str = "region") -> None:
    if not region.is_open():
        raise NotOpenError(f"{name} {region} is not open")
