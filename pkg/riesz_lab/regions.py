"""
Spaces and regions for riesz-lab.

A Space is a compact subset of the line assembled from finitely many disjoint
closed rational intervals (its components). A Region is a finite union of
subintervals of those components, each endpoint carrying an inclusion flag.
Regions are kept in a canonical form so that two regions are equal as point
sets exactly when they compare equal.

All topology (interior, closure, density, clopenness) is relative to the Space.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import bisect
import logging

from .errors import (
    CompactNotInsideOpenError,
    NotClosedError,
    NotOpenError,
    NotRegularOpenError,
    PointOutsideSpaceError,
    SchemaError,
    SpaceMismatchError,
)
from .utils import format_rational, read_rational, to_rational


logger = logging.getLogger("rieszlab")


@dataclass(frozen=True)
class Space:
    """
    Compact space given by its ordered components [a_i, b_i].

    Degenerate components (a_i == b_i) are isolated points.
    """
    components: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        comps = tuple(
            (to_rational(a), to_rational(b)) for a, b in self.components
        )
        if not comps:
            raise ValueError("A space needs at least one component")
        for a, b in comps:
            if a > b:
                raise ValueError(f"Component [{a}, {b}] is reversed")
        for (_, b), (a, _) in zip(comps, comps[1:]):
            if not b < a:
                raise ValueError("Components must be disjoint and increasing")
        object.__setattr__(self, 'components', comps)

    @classmethod
    def interval(cls, a, b) -> "Space":
        return cls(((a, b),))

    @classmethod
    def of(cls, *pairs) -> "Space":
        return cls(tuple(pairs))

    def component_index(self, x: Fraction) -> Optional[int]:
        """
        Index of the component containing x, or None.
        """
        lows = [a for a, _ in self.components]
        idx = bisect.bisect_right(lows, x) - 1
        if idx >= 0 and x <= self.components[idx][1]:
            return idx
        return None

    def locate(self, x) -> int:
        x = to_rational(x)
        idx = self.component_index(x)
        if idx is None:
            raise PointOutsideSpaceError(x)
        return idx

    def is_symmetric_interval(self) -> bool:
        if len(self.components) != 1:
            return False
        a, b = self.components[0]
        return a == -b and b > 0

    def full(self) -> "Region":
        return Region.build(
            self, [Piece(a, b, True, True) for a, b in self.components]
        )

    def empty(self) -> "Region":
        return Region(self, tuple(() for _ in self.components))

    def component(self, index: int) -> "Region":
        a, b = self.components[index]
        return Region.build(self, [Piece(a, b, True, True)])

    def to_json(self) -> List[List[str]]:
        return [[format_rational(a), format_rational(b)] for a, b in self.components]

    @classmethod
    def from_json(cls, data, location: str = "$") -> "Space":
        if not isinstance(data, list) or not data:
            raise SchemaError("a space is a nonempty list of [a, b] pairs", location)
        pairs = []
        for i, pair in enumerate(data):
            where = f"{location}[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError("expected an [a, b] pair", where)
            pairs.append((read_rational(pair[0], f"{where}[0]"),
                          read_rational(pair[1], f"{where}[1]")))
        try:
            return cls(tuple(pairs))
        except ValueError as e:
            raise SchemaError(str(e), location)

    def __str__(self) -> str:
        return " | ".join(
            f"[{format_rational(a)},{format_rational(b)}]" for a, b in self.components
        )


@dataclass(frozen=True)
class Piece:
    """
    One subinterval with endpoint inclusion flags.
    """
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def closed(self) -> "Piece":
        return Piece(self.lo, self.hi, True, True)

    def clip(self, a: Fraction, b: Fraction) -> "Piece":
        """
        Intersect with the closed interval [a, b].
        """
        lo, lo_closed = self.lo, self.lo_closed
        hi, hi_closed = self.hi, self.hi_closed
        if lo < a:
            lo, lo_closed = a, True
        if hi > b:
            hi, hi_closed = b, True
        return Piece(lo, hi, lo_closed, hi_closed)

    def gap_to(self, other: "Piece") -> Fraction:
        """
        Distance between the closures of two pieces.
        """
        return max(Fraction(0), other.lo - self.hi, self.lo - other.hi)

    def to_json(self) -> Dict[str, object]:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        if self.is_point():
            return "{" + format_rational(self.lo) + "}"
        left = '[' if self.lo_closed else '('
        right = ']' if self.hi_closed else ')'
        return f"{left}{format_rational(self.lo)},{format_rational(self.hi)}{right}"


def _canonical(pieces: Sequence[Piece]) -> Tuple[Piece, ...]:
    """
    Sort, drop empty pieces and merge overlapping or touching ones.
    """
    live = sorted(
        (p for p in pieces if not p.is_empty()),
        key=lambda p: (p.lo, not p.lo_closed),
    )
    out: List[Piece] = []
    for p in live:
        if out:
            q = out[-1]
            if p.lo < q.hi or (p.lo == q.hi and (q.hi_closed or p.lo_closed)):
                if p.hi > q.hi:
                    hi, hi_closed = p.hi, p.hi_closed
                elif p.hi == q.hi:
                    hi, hi_closed = q.hi, q.hi_closed or p.hi_closed
                else:
                    hi, hi_closed = q.hi, q.hi_closed
                out[-1] = Piece(q.lo, hi, q.lo_closed, hi_closed)
                continue
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class Region:
    """
    Finite union of subintervals of a Space, stored per component.

    Use Region.build to construct; it clips pieces to the components and
    canonicalizes, so equality of Regions is equality of point sets.
    """
    space: Space
    pieces: Tuple[Tuple[Piece, ...], ...]

    @classmethod
    def build(cls, space: Space, pieces: Sequence[Piece]) -> "Region":
        buckets: List[List[Piece]] = [[] for _ in space.components]
        for piece in pieces:
            for idx, (a, b) in enumerate(space.components):
                clipped = piece.clip(a, b)
                if not clipped.is_empty():
                    buckets[idx].append(clipped)
        return cls(space, tuple(_canonical(bucket) for bucket in buckets))

    @classmethod
    def interval(cls, space: Space, lo, hi, lo_closed: bool = True,
                 hi_closed: bool = True) -> "Region":
        return cls.build(
            space, [Piece(to_rational(lo), to_rational(hi), lo_closed, hi_closed)]
        )

    @classmethod
    def points(cls, space: Space, xs) -> "Region":
        return cls.build(space, [Piece(to_rational(x), to_rational(x)) for x in xs])

    # Inspection

    def iter_pieces(self) -> Iterator[Tuple[int, Piece]]:
        for idx, bucket in enumerate(self.pieces):
            for piece in bucket:
                yield idx, piece

    def is_empty(self) -> bool:
        return all(not bucket for bucket in self.pieces)

    def contains(self, x) -> bool:
        x = to_rational(x)
        idx = self.space.component_index(x)
        if idx is None:
            return False
        return any(piece.contains(x) for piece in self.pieces[idx])

    def distance(self, x) -> Optional[Fraction]:
        """
        Distance from x to the closure of this region inside x's component.

        Returns None when the region does not meet that component.
        """
        x = to_rational(x)
        idx = self.space.locate(x)
        bucket = self.pieces[idx]
        if not bucket:
            return None
        return min(Piece(x, x).gap_to(piece) for piece in bucket)

    def full_components(self) -> List[int]:
        """
        Indices of the components this region covers entirely.
        """
        out = []
        for idx, (a, b) in enumerate(self.space.components):
            if self.pieces[idx] == (Piece(a, b, True, True),):
                out.append(idx)
        return out

    def boundary_points(self) -> Tuple[Fraction, ...]:
        """
        The (finite) topological boundary, closure minus interior.
        """
        rim = self.closure().intersect(self.interior().complement())
        return tuple(piece.lo for _, piece in rim.iter_pieces())

    # Set algebra

    def _check(self, other: "Region") -> None:
        if self.space != other.space:
            raise SpaceMismatchError("Regions live on different spaces")

    def union(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self.space, tuple(
            _canonical(list(a) + list(b)) for a, b in zip(self.pieces, other.pieces)
        ))

    def complement(self) -> "Region":
        buckets = []
        for (a, b), bucket in zip(self.space.components, self.pieces):
            gaps = []
            cur, cur_closed = a, True
            for piece in bucket:
                gaps.append(Piece(cur, piece.lo, cur_closed, not piece.lo_closed))
                cur, cur_closed = piece.hi, not piece.hi_closed
            gaps.append(Piece(cur, b, cur_closed, True))
            buckets.append(_canonical(gaps))
        return Region(self.space, tuple(buckets))

    def intersect(self, other: "Region") -> "Region":
        self._check(other)
        return self.complement().union(other.complement()).complement()

    def difference(self, other: "Region") -> "Region":
        return self.intersect(other.complement())

    def closure(self) -> "Region":
        return Region(self.space, tuple(
            _canonical([piece.closed() for piece in bucket]) for bucket in self.pieces
        ))

    def interior(self) -> "Region":
        buckets = []
        for (a, b), bucket in zip(self.space.components, self.pieces):
            buckets.append(_canonical([
                Piece(p.lo, p.hi, p.lo_closed and p.lo == a, p.hi_closed and p.hi == b)
                for p in bucket
            ]))
        return Region(self.space, tuple(buckets))

    def expand(self, eps) -> "Region":
        """
        Open neighbourhood {x : dist(x, closure) < eps}, measured inside
        each component.
        """
        eps = to_rational(eps)
        if eps <= 0:
            raise ValueError("Neighbourhood radius must be positive")
        grown = []
        for idx, piece in self.iter_pieces():
            a, b = self.space.components[idx]
            lo, hi = piece.lo - eps, piece.hi + eps
            lo_piece = (a, True) if lo < a else (lo, False)
            hi_piece = (b, True) if hi > b else (hi, False)
            grown.append(Piece(lo_piece[0], hi_piece[0], lo_piece[1], hi_piece[1]))
        return Region.build(self.space, grown)

    # Predicates

    def is_open(self) -> bool:
        return self.interior() == self

    def is_closed(self) -> bool:
        return self.closure() == self

    def is_clopen(self) -> bool:
        return self.is_open() and self.is_closed()

    def is_regular_open(self) -> bool:
        return self.closure().interior() == self

    def is_dense(self) -> bool:
        return self.closure() == self.space.full()

    def is_subset(self, other: "Region") -> bool:
        self._check(other)
        return self.union(other) == other

    def is_disjoint(self, other: "Region") -> bool:
        return self.intersect(other).is_empty()

    # Codec

    def to_json(self) -> List[List[Dict[str, object]]]:
        return [[piece.to_json() for piece in bucket] for bucket in self.pieces]

    @classmethod
    def from_json(cls, space: Space, data, location: str = "$") -> "Region":
        """
        Decode a per-component list of {lo, hi, lo_closed, hi_closed}.
        """
        if not isinstance(data, list) or len(data) != len(space.components):
            raise SchemaError(
                f"expected {len(space.components)} per-component piece lists", location
            )
        pieces = []
        for i, bucket in enumerate(data):
            if not isinstance(bucket, list):
                raise SchemaError("expected a list of pieces", f"{location}[{i}]")
            for j, item in enumerate(bucket):
                where = f"{location}[{i}][{j}]"
                if not isinstance(item, dict) or 'lo' not in item or 'hi' not in item:
                    raise SchemaError("a piece needs lo and hi", where)
                lo = read_rational(item['lo'], f"{where}.lo")
                hi = read_rational(item['hi'], f"{where}.hi")
                a, b = space.components[i]
                if lo < a or hi > b:
                    raise SchemaError(f"piece leaves component [{a}, {b}]", where)
                pieces.append(Piece(lo, hi, bool(item.get('lo_closed', True)),
                                    bool(item.get('hi_closed', True))))
        return cls.build(space, pieces)

    def __str__(self) -> str:
        parts = [str(piece) for _, piece in self.iter_pieces()]
        return " | ".join(parts) if parts else "{}"


def midpoint_expansion(compact: Region, open_region: Region) -> Region:
    """
    Grow a closed region K inside an open region U by half its distance to
    the complement of U.

    The result W is open with K inside W and closure(W) inside U.

    Args:
        compact: Closed region K
        open_region: Open region U containing K

    Returns:
        The open region W
    """
    if not compact.is_closed():
        raise NotClosedError(f"{compact} is not closed")
    if not open_region.is_open():
        raise NotOpenError(f"{open_region} is not open")
    if not compact.is_subset(open_region):
        raise CompactNotInsideOpenError(f"{compact} is not inside {open_region}")

    space = compact.space
    outside = open_region.complement()
    result = space.empty()
    for idx, bucket in enumerate(compact.pieces):
        if not bucket:
            continue
        walls = outside.pieces[idx]
        if not walls:
            result = result.union(space.component(idx))
            continue
        delta = min(k.gap_to(w) for k in bucket for w in walls)
        local = Region(space, tuple(
            bucket if j == idx else () for j in range(len(space.components))
        ))
        result = result.union(local.expand(delta / 2))
        logger.debug(f"Midpoint expansion on component {idx}: radius {delta / 2}")
    return result


REGION_OPS = ('union', 'intersect', 'complement', 'interior', 'closure')
REGION_PREDS = ('is_open', 'is_closed', 'is_clopen', 'is_regular_open',
                'is_dense', 'subset', 'equal')


def region_op(op: str, *args: Region) -> Region:
    """
    Apply a named region operation.

    Args:
        op: One of union, intersect, complement, interior, closure
        args: One region for unary operations, two for binary ones
    """
    if op in ('union', 'intersect'):
        left, right = args
        return left.union(right) if op == 'union' else left.intersect(right)
    if op in ('complement', 'interior', 'closure'):
        (region,) = args
        return getattr(region, op)()
    raise ValueError(f"Unknown region operation: {op}")


def region_pred(pred: str, *args: Region) -> bool:
    """
    Evaluate a named region predicate.
    """
    if pred in ('subset', 'equal'):
        left, right = args
        if left.space != right.space:
            raise SpaceMismatchError("Regions live on different spaces")
        return left.is_subset(right) if pred == 'subset' else left == right
    if pred in REGION_PREDS:
        (region,) = args
        return getattr(region, pred)()
    raise ValueError(f"Unknown region predicate: {pred}")


def ro_join(left: Region, right: Region) -> Region:
    """
    Join in the Boolean algebra of regular open regions: int(cl(R u S)).
    """
    for region in (left, right):
        if not region.is_regular_open():
            raise NotRegularOpenError(f"{region} is not regular open")
    return left.union(right).closure().interior()
