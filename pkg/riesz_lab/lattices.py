"""
Finite posets and lattices.

A FinPoset stores its order as a read-only n x n boolean numpy table
(leq[i, j] iff i <= j). A FinLattice adds meet and join tables, computed by
brute force and checked against the lattice axioms when the lattice is
built. Everything downstream (pseudo-complements, skeletons, complemented
elements, lattice ideals) works on those tables.
"""

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .errors import (
    NotAPartialOrderError,
    NotALatticeError,
    NotDistributiveError,
    SchemaError,
    SizeLimitError,
)
from .utils import DEFAULT_DOWNSET_LIMIT


logger = logging.getLogger("rieszlab")


def _freeze(table: np.ndarray) -> np.ndarray:
    table = np.array(table, dtype=bool)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, eq=False)
class FinPoset:
    """
    Finite partial order on range(n).

    Attributes:
        leq: Read-only boolean table, leq[i, j] iff i <= j
        labels: Display name of each element
    """
    leq: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        leq = _freeze(self.leq)
        n = leq.shape[0] if leq.ndim == 2 else -1
        if leq.ndim != 2 or leq.shape != (n, n):
            raise SchemaError(f"leq must be a square table, got shape {leq.shape}")
        object.__setattr__(self, 'leq', leq)
        labels = tuple(self.labels) or tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise SchemaError(f"Expected {n} labels, got {len(labels)}")
        object.__setattr__(self, 'labels', labels)
        self._validate()

    def _validate(self) -> None:
        leq = self.leq
        missing = np.flatnonzero(~np.diag(leq))
        if missing.size:
            i = int(missing[0])
            raise NotAPartialOrderError(f"Element {i} is not <= itself", (i,))
        both = leq & leq.T
        np.fill_diagonal(both, False)
        pairs = np.argwhere(both)
        if pairs.size:
            i, j = (int(v) for v in pairs[0])
            raise NotAPartialOrderError(f"{i} <= {j} <= {i} with {i} != {j}", (i, j))
        through = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        broken = np.argwhere(through & ~leq)
        if broken.size:
            i, k = (int(v) for v in broken[0])
            j = int(np.flatnonzero(leq[i, :] & leq[:, k])[0])
            raise NotAPartialOrderError(
                f"{i} <= {j} <= {k} but not {i} <= {k}", (i, j, k)
            )

    @property
    def n(self) -> int:
        return self.leq.shape[0]

    @classmethod
    def from_table(cls, table, labels: Sequence[str] = ()) -> "FinPoset":
        return cls(np.array(table, dtype=bool), tuple(labels))

    @classmethod
    def from_relation(cls, n: int, pairs, labels: Sequence[str] = ()) -> "FinPoset":
        """
        Reflexive-transitive closure of a relation given as (i, j) pairs.
        """
        leq = np.eye(n, dtype=bool)
        for i, j in pairs:
            leq[i, j] = True
        for k in range(n):
            leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
        return cls(leq, tuple(labels))

    def downset(self, i: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.leq[:, i]))

    def canonical_key(self) -> bytes:
        """
        Isomorphism-invariant key: smallest relabelled table.
        """
        best = None
        for perm in permutations(range(self.n)):
            idx = np.array(perm, dtype=int)
            key = np.packbits(self.leq[np.ix_(idx, idx)]).tobytes()
            if best is None or key < best:
                best = key
        return best if best is not None else b""

    def to_json(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "leq": self.leq.tolist(),
            "labels": list(self.labels),
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, FinPoset) and np.array_equal(self.leq, other.leq)

    def __hash__(self) -> int:
        return hash(self.leq.tobytes())


@dataclass(frozen=True, eq=False)
class FinLattice:
    """
    Finite lattice with cached meet/join tables and bounds.

    Build with validate_lattice or FinLattice.from_poset.
    """
    poset: FinPoset
    meet: np.ndarray
    join: np.ndarray
    bottom: int
    top: int

    @classmethod
    def from_poset(cls, poset: FinPoset) -> "FinLattice":
        return validate_lattice(poset)

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def leq(self) -> np.ndarray:
        return self.poset.leq

    def label(self, i: int) -> str:
        return self.poset.labels[i]

    def index(self, label: str) -> int:
        try:
            return self.poset.labels.index(str(label))
        except ValueError:
            raise SchemaError(f"no element labelled {label!r}")

    def join_all(self, elements) -> int:
        return reduce(lambda a, b: int(self.join[a, b]), elements, self.bottom)

    def meet_all(self, elements) -> int:
        return reduce(lambda a, b: int(self.meet[a, b]), elements, self.top)

    @cached_property
    def distributive_witness(self) -> Optional[Tuple[int, int, int]]:
        meet, join = self.meet, self.join
        idx = np.arange(self.n)
        lhs = meet[idx[:, None, None], join[None, :, :]]
        rhs = join[meet[:, :, None], meet[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return tuple(int(v) for v in bad[0])
        return None

    @cached_property
    def pseudo_table(self) -> np.ndarray:
        require_distributive(self)
        table = np.array(
            [self.join_all(np.flatnonzero(self.meet[p, :] == self.bottom))
             for p in range(self.n)],
            dtype=int,
        )
        table.flags.writeable = False
        return table

    def to_json(self) -> Dict[str, object]:
        return self.poset.to_json()


def validate_lattice(poset: FinPoset) -> FinLattice:
    """
    Compute meet and join tables by brute force.

    Args:
        poset: Candidate poset

    Returns:
        FinLattice with verified lattice axioms

    Raises:
        NotALatticeError: with the first pair lacking a meet or a join
    """
    n, leq = poset.n, poset.leq
    if n == 0:
        raise NotALatticeError(None, "elements")
    meet = np.zeros((n, n), dtype=int)
    join = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i, n):
            lower = np.flatnonzero(leq[:, i] & leq[:, j])
            glb = [g for g in lower if leq[lower, g].all()]
            if not glb:
                raise NotALatticeError((i, j), "meet")
            upper = np.flatnonzero(leq[i, :] & leq[j, :])
            lub = [u for u in upper if leq[u, upper].all()]
            if not lub:
                raise NotALatticeError((i, j), "join")
            meet[i, j] = meet[j, i] = glb[0]
            join[i, j] = join[j, i] = lub[0]
    meet.flags.writeable = False
    join.flags.writeable = False

    idx = np.arange(n)
    for name, op, dual in (("meet", meet, join), ("join", join, meet)):
        assoc = op[op[:, :, None], idx[None, None, :]] == op[idx[:, None, None], op[None, :, :]]
        absorb = op[idx[:, None], dual] == idx[:, None]
        if not (assoc.all() and absorb.all()):
            bad = np.argwhere(~absorb) if assoc.all() else np.argwhere(~assoc)[:, :2]
            raise NotALatticeError(tuple(int(v) for v in bad[0][:2]), f"lawful {name}")

    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    logger.debug(f"Validated lattice with {n} elements")
    return FinLattice(poset, meet, join, bottom, top)


def is_distributive(lattice: FinLattice) -> Tuple[bool, Optional[Tuple[int, int, int]]]:
    """
    Brute force p ^ (q v r) == (p ^ q) v (p ^ r) over all triples.

    Returns:
        (True, None) or (False, violating triple)
    """
    witness = lattice.distributive_witness
    return witness is None, witness


def require_distributive(lattice: FinLattice) -> None:
    witness = lattice.distributive_witness
    if witness is not None:
        raise NotDistributiveError(witness)


def pseudo_complement(lattice: FinLattice, p: int) -> int:
    """
    Largest q with p ^ q == 0: the join of all such q.
    """
    star = int(lattice.pseudo_table[p])
    assert lattice.meet[p, star] == lattice.bottom
    return star


def relative_pseudo_complement(lattice: FinLattice, p: int, r: int) -> int:
    """
    Pseudo-complement of p inside the interval [0, r].
    """
    if not lattice.leq[p, r]:
        raise ValueError(f"{lattice.label(p)} is not below {lattice.label(r)}")
    require_distributive(lattice)
    candidates = [q for q in np.flatnonzero(lattice.leq[:, r])
                  if lattice.meet[p, q] == lattice.bottom]
    best = lattice.join_all(candidates)
    if best not in candidates:
        raise NotDistributiveError((p, r, best))
    return best


@dataclass
class LatticeReport:
    """
    Outcome of one lattice-level check.

    Attributes:
        elements: Elements the check produced (skeleton, complemented, ...)
        checks: Law name to outcome
        counterexamples: Law name to the first failing tuple
    """
    elements: List[int] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    counterexamples: Dict[str, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    bad = np.argwhere(~mask)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def _record(report: LatticeReport, name: str, mask) -> None:
    mask = np.asarray(mask, dtype=bool)
    report.checks[name] = bool(mask.all())
    if not report.checks[name]:
        report.counterexamples[name] = _first(mask)


def skeleton_algebra(lattice: FinLattice) -> LatticeReport:
    """
    The Glivenko skeleton P* = {p*} = {p : p == p**} and its Boolean axioms.

    The skeleton join is (p* ^ q*)*; meets are inherited from the lattice.
    """
    star = lattice.pseudo_table
    meet = lattice.meet
    image = sorted({int(v) for v in star})
    fixed = [p for p in range(lattice.n) if star[star[p]] == p]
    report = LatticeReport(elements=image)
    report.checks["image_equals_fixed_points"] = image == fixed

    s = np.array(image, dtype=int)
    sub_meet = meet[np.ix_(s, s)]
    sub_join = star[meet[star[s][:, None], star[s][None, :]]]
    members = np.isin(sub_meet, s)
    _record(report, "meet_closed", members)

    leq = lattice.leq
    upper = leq[s[:, None], sub_join] & leq[s[None, :], sub_join]
    # least among skeleton elements above both
    above_both = leq[s[:, None, None], s[None, None, :]] & leq[s[None, :, None], s[None, None, :]]
    least = ~above_both | leq[sub_join[:, :, None], s[None, None, :]]
    _record(report, "join_is_least_upper_bound", upper & least.all(axis=2))

    comp = star[s]
    _record(report, "complement_meet", meet[s, comp] == lattice.bottom)
    _record(report, "complement_join",
            star[meet[star[s], star[comp]]] == lattice.top)
    pos = {int(v): i for i, v in enumerate(s)}
    k = len(s)
    jidx = np.vectorize(pos.get)(sub_join) if k else sub_join
    midx = np.vectorize(pos.get)(sub_meet) if k and members.all() else None
    if midx is not None:
        idx = np.arange(k)
        lhs = midx[idx[:, None, None], jidx[None, :, :]]
        rhs = jidx[midx[:, :, None], midx[:, None, :]]
        _record(report, "distributive", lhs == rhs)
    else:
        report.checks["distributive"] = False
    return report


def complemented_elements(lattice: FinLattice) -> LatticeReport:
    """
    Elements with a complement, checked to form a Boolean sublattice.
    """
    require_distributive(lattice)
    meet, join, star = lattice.meet, lattice.join, lattice.pseudo_table
    has_comp = ((meet == lattice.bottom) & (join == lattice.top)).any(axis=1)
    comp = [int(p) for p in np.flatnonzero(has_comp)]
    report = LatticeReport(elements=comp)
    c = np.array(comp, dtype=int)
    _record(report, "meet_closed", np.isin(meet[np.ix_(c, c)], c))
    _record(report, "join_closed", np.isin(join[np.ix_(c, c)], c))
    _record(report, "de_morgan_meet",
            star[meet[np.ix_(c, c)]] == join[star[c][:, None], star[c][None, :]])
    _record(report, "de_morgan_join",
            star[join[np.ix_(c, c)]] == meet[star[c][:, None], star[c][None, :]])
    _record(report, "inside_skeleton", star[star[c]] == c)
    return report


def glivenko_check(lattice: FinLattice) -> LatticeReport:
    """
    Pseudo-complement identities over all pairs and all relativizations:
    (p ^ q)* == (p** ^ q)*, (p ^ q)** == p** ^ q**, (p* ^ q*)* == (p v q)**,
    and in every interval [0, r] the relative pseudo-complement of p is
    p* ^ r with double relative p** ^ r.
    """
    star = lattice.pseudo_table
    meet, join = lattice.meet, lattice.join
    dstar = star[star]
    report = LatticeReport()
    _record(report, "meet_star", star[meet] == star[meet[dstar[:, None], np.arange(lattice.n)[None, :]]])
    _record(report, "double_star_meet", dstar[meet] == meet[dstar[:, None], dstar[None, :]])
    _record(report, "skeleton_join", star[meet[star[:, None], star[None, :]]] == dstar[join])
    _record(report, "monotone_closure", lattice.leq[np.arange(lattice.n), dstar])

    relative = np.ones((lattice.n, lattice.n), dtype=bool)
    double = np.ones((lattice.n, lattice.n), dtype=bool)
    for r in range(lattice.n):
        for p in np.flatnonzero(lattice.leq[:, r]):
            rel = relative_pseudo_complement(lattice, p, r)
            relative[p, r] = rel == meet[star[p], r]
            double[p, r] = relative_pseudo_complement(lattice, rel, r) == meet[dstar[p], r]
    _record(report, "relative_pseudo_complement", relative)
    _record(report, "relative_double", double)
    return report


def _down_masks(poset: FinPoset) -> List[int]:
    return [sum(1 << int(j) for j in np.flatnonzero(poset.leq[:, i])) for i in range(poset.n)]


def enumerate_downsets(poset: FinPoset, limit: int = DEFAULT_DOWNSET_LIMIT) -> List[int]:
    """
    All down-closed subsets as bitmasks, ordered by size then value.
    """
    down = _down_masks(poset)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            for i in range(poset.n):
                bit = 1 << i
                if mask & bit or (down[i] & ~mask) != bit:
                    continue
                grown = mask | bit
                if grown not in seen:
                    seen.add(grown)
                    if len(seen) > limit:
                        raise SizeLimitError(
                            f"More than {limit} downsets; raise the limit to continue"
                        )
                    nxt.append(grown)
        frontier = nxt
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def downset_lattice(poset: FinPoset, limit: int = DEFAULT_DOWNSET_LIMIT) -> FinLattice:
    """
    Lattice of downsets under inclusion (always distributive).
    """
    masks = enumerate_downsets(poset, limit)
    labels = []
    for mask in masks:
        names = [poset.labels[i] for i in range(poset.n) if mask >> i & 1]
        labels.append("{" + ",".join(names) + "}")
    if poset.n <= 63:
        arr = np.array(masks, dtype=np.uint64)
        leq = (arr[:, None] & ~arr[None, :]) == 0
    else:
        leq = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool)
    logger.debug(f"Downset lattice of a {poset.n}-element poset has {len(masks)} elements")
    return validate_lattice(FinPoset(leq, tuple(labels)))


def ideals_of(lattice: FinLattice, limit: int = DEFAULT_DOWNSET_LIMIT) -> List[Tuple[int, ...]]:
    """
    Lattice ideals: nonempty, down-closed and join-closed subsets.
    """
    out = []
    for mask in enumerate_downsets(lattice.poset, limit):
        members = [i for i in range(lattice.n) if mask >> i & 1]
        if not members:
            continue
        if all(mask >> int(lattice.join[a, b]) & 1 for a in members for b in members):
            out.append(tuple(members))
    return out


def ideal_lattice_check(lattice: FinLattice,
                        limit: int = DEFAULT_DOWNSET_LIMIT) -> LatticeReport:
    """
    Enumerate the lattice ideals and check the ideal-lattice identities.

    Joins of ideals are elementwise joins, meets are intersections (for
    pairs and for the whole family) and the ideal lattice is distributive.
    """
    require_distributive(lattice)
    ideals = [frozenset(i) for i in ideals_of(lattice, limit)]
    report = LatticeReport(elements=list(range(len(ideals))))
    known = set(ideals)

    report.checks["principal"] = all(
        ideal == frozenset(lattice.poset.downset(lattice.join_all(ideal)))
        for ideal in ideals
    )

    def smallest_above(members) -> frozenset:
        above = [i for i in ideals if members <= i]
        return reduce(frozenset.intersection, above)

    joins_ok = meets_ok = True
    for left, right in combinations(ideals, 2):
        elementwise = frozenset(int(lattice.join[a, b]) for a in left for b in right)
        if smallest_above(left | right) != elementwise:
            joins_ok = False
            report.counterexamples.setdefault("join_elementwise", (min(left), min(right)))
        if (left & right) not in known:
            meets_ok = False
            report.counterexamples.setdefault("meet_intersection", (min(left), min(right)))
    report.checks["join_elementwise"] = joins_ok
    report.checks["meet_intersection"] = meets_ok
    report.checks["family_meet"] = reduce(frozenset.intersection, ideals) in known

    order = [[a <= b for b in ideals] for a in ideals]
    ideal_lattice = validate_lattice(FinPoset.from_table(order))
    report.checks["distributive"] = ideal_lattice.distributive_witness is None
    logger.debug(f"Checked {len(ideals)} lattice ideals")
    return report


# Named generators

def chain(k: int) -> FinPoset:
    return FinPoset.from_relation(k, [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> FinPoset:
    return FinPoset.from_relation(k, [])


def boolean(k: int) -> FinPoset:
    size = 1 << k
    leq = np.array([[a & ~b == 0 for b in range(size)] for a in range(size)], dtype=bool)
    labels = ["{" + ",".join(str(i) for i in range(k) if a >> i & 1) + "}" for a in range(size)]
    return FinPoset(leq, tuple(labels))


def divisors(m: int) -> FinPoset:
    if m < 1:
        raise ValueError("divisors needs a positive integer")
    divs = [d for d in range(1, m + 1) if m % d == 0]
    leq = np.array([[b % a == 0 for b in divs] for a in divs], dtype=bool)
    return FinPoset(leq, tuple(str(d) for d in divs))


def fence(k: int) -> FinPoset:
    """
    Zigzag 0 < 1 > 2 < 3 > ...
    """
    pairs = [(i, i + 1) if i % 2 == 0 else (i + 1, i) for i in range(k - 1)]
    return FinPoset.from_relation(k, pairs)


def n5() -> FinPoset:
    return FinPoset.from_relation(
        5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], ("0", "a", "b", "c", "1")
    )


def m3() -> FinPoset:
    return FinPoset.from_relation(
        5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], ("0", "a", "b", "c", "1")
    )


NAMED: Dict[str, Callable[[], FinPoset]] = {"N5": n5, "M3": m3}


def all_posets(n: int) -> List[FinPoset]:
    """
    One poset per isomorphism class on n points.

    Every finite poset has a linear extension, so it suffices to enumerate
    transitive relations inside the strict upper triangle.
    """
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    classes: Dict[bytes, FinPoset] = {}
    for bits in range(1 << len(slots)):
        chosen = [slots[s] for s in range(len(slots)) if bits >> s & 1]
        leq = np.eye(n, dtype=bool)
        for i, j in chosen:
            leq[i, j] = True
        closed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        if not np.array_equal(closed, leq):
            continue
        poset = FinPoset(leq)
        classes.setdefault(poset.canonical_key(), poset)
    return [classes[key] for key in sorted(classes)]


LATTICE_LAWS: Dict[str, Callable[[FinLattice], bool]] = {
    "distributive": lambda lat: lat.distributive_witness is None,
    "skeleton_boolean": lambda lat: skeleton_algebra(lat).passed,
    "complemented_boolean": lambda lat: complemented_elements(lat).passed,
    "glivenko": lambda lat: glivenko_check(lat).passed,
    "ideal_lattice": lambda lat: ideal_lattice_check(lat).passed,
}
