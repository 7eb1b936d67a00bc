"""
Certificate evaluation and independent re-checking.

Every certificate names a claim from CLAIMS. The same evaluators run when a
certificate is created (on live values) and when a serialized report is
re-checked (on values decoded back from JSON), so a report never has to be
trusted.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple
import logging

from .errors import NotALatticeError, SchemaError
from .functions import PLFun, support
from .lattices import LATTICE_LAWS, FinLattice, FinPoset, ideals_of, validate_lattice
from .regions import Region, Space
from .schemas import Certificate
from .utils import to_rational


logger = logging.getLogger("rieszlab")


def _le(args) -> bool:
    return args["lhs"] <= args["rhs"]


def _equal(args) -> bool:
    return args["lhs"] == args["rhs"]


def _disjoint(args) -> bool:
    return args["lhs"].disjoint_from(args["rhs"])


def _sum_equals(args) -> bool:
    parts = args["parts"]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total == args["total"]


def _equal_on(args) -> bool:
    region = args["region"]
    if region.is_empty():
        return True
    return support(args["lhs"] - args["rhs"]).is_disjoint(region)


def _ratio_le(args) -> bool:
    bound = to_rational(args["bound"])
    return abs(args["fn"]) <= args["e"].scale(bound)


def _value_at(args) -> bool:
    return args["fn"](to_rational(args["x"])) == to_rational(args["value"])


def _below_at(args) -> bool:
    return args["fn"](to_rational(args["x"])) < to_rational(args["value"])


def _even_at(args) -> bool:
    left, right = args["fn"].slopes_at(to_rational(args["x"]))
    even = left is not None and right is not None and right == -left
    return even == bool(args["expected"])


def _region_pred(args) -> bool:
    return getattr(args["region"], args["pred"])() == bool(args["expected"])


def _compare(op: Callable[[Fraction, Fraction], bool]):
    return lambda args: op(to_rational(args["lhs"]), to_rational(args["rhs"]))


def _lattice_law(args) -> bool:
    law = LATTICE_LAWS[args["law"]]
    return law(args["lattice"]) == bool(args["expected"])


def _is_lattice(args) -> bool:
    return isinstance(args["poset"], FinLattice) == bool(args["expected"])


def _pseudo_complement(args) -> bool:
    """
    star is the largest q <= top with p ^ q == 0.
    """
    lattice = args["lattice"]
    p, top, star = (lattice.index(args[key]) for key in ("p", "top", "star"))
    if not lattice.leq[star, top] or lattice.meet[p, star] != lattice.bottom:
        return False
    return all(lattice.leq[q, star] for q in range(lattice.n)
               if lattice.leq[q, top] and lattice.meet[p, q] == lattice.bottom)


def _principal_ideals(args) -> bool:
    """
    The listed ideals are all lattice ideals, each the downset of its join.
    """
    lattice = args["lattice"]
    listed = [frozenset(lattice.index(label) for label in ideal) for ideal in args["ideals"]]
    if set(listed) != {frozenset(ideal) for ideal in ideals_of(lattice, int(args["limit"]))}:
        return False
    return all(ideal == frozenset(lattice.poset.downset(lattice.join_all(sorted(ideal))))
               for ideal in listed)


def _in_sublattice(args) -> bool:
    from .ideals import SublatticeSpec, sublattice_member

    fn = args["fn"]
    return sublattice_member(SublatticeSpec(args["sublattice"], fn.space), fn)


def _plain(value: Any) -> Any:
    return getattr(value, "value", value)


def _ideal_member(args) -> bool:
    from .ideals import SublatticeSpec, ideal_member

    ideal = args["ideal"]
    sublattice = SublatticeSpec(args["sublattice"], ideal.space)
    verdict = ideal_member(sublattice, ideal, args["fn"], int(args["cutoff"]))
    return verdict.status.value == _plain(args["status"])


def _band_status(args) -> bool:
    from .ideals import band_status

    return band_status(args["ideal"], int(args["cutoff"])).value == _plain(args["status"])


def _same_ideal(args) -> bool:
    from .ideals import same_ideal

    return same_ideal(args["lhs"], args["rhs"]) == bool(args["expected"])


def _membership_agrees(args) -> bool:
    from .ideals import first_disagreement

    return first_disagreement(args["lhs"], args["rhs"], int(args["seed"]),
                              int(args["samples"]), int(args["cutoff"])) is None


CLAIMS: Dict[str, Callable[[Dict[str, Any]], bool]] = {
    "nonnegative": lambda args: args["fn"].is_nonnegative(),
    "nonzero": lambda args: not args["fn"].is_zero(),
    "le": _le,
    "equal": _equal,
    "disjoint": _disjoint,
    "sum_equals": _sum_equals,
    "equal_on": _equal_on,
    "support_subset": lambda args: support(args["fn"]).is_subset(args["region"]),
    "support_equals": lambda args: support(args["fn"]) == args["region"],
    "region_subset": lambda args: args["lhs"].is_subset(args["rhs"]),
    "not_region_subset": lambda args: not args["lhs"].is_subset(args["rhs"]),
    "region_equal": lambda args: args["lhs"] == args["rhs"],
    "region_differs": lambda args: args["lhs"] != args["rhs"],
    "region_empty": lambda args: args["region"].is_empty(),
    "region_pred": _region_pred,
    "contains": lambda args: args["region"].contains(to_rational(args["x"])),
    "not_contains": lambda args: not args["region"].contains(to_rational(args["x"])),
    "ratio_le": _ratio_le,
    "value_at": _value_at,
    "below_at": _below_at,
    "even_at": _even_at,
    "rational_le": _compare(lambda a, b: a <= b),
    "rational_lt": _compare(lambda a, b: a < b),
    "rational_eq": _compare(lambda a, b: a == b),
    "lattice_law": _lattice_law,
    "is_lattice": _is_lattice,
    "pseudo_complement": _pseudo_complement,
    "principal_ideals": _principal_ideals,
    "in_sublattice": _in_sublattice,
    "ideal_member": _ideal_member,
    "band_status": _band_status,
    "same_ideal": _same_ideal,
    "membership_agrees": _membership_agrees,
}


def certify(claim: str, label: str = None, subject: Optional[str] = None,
            **args: Any) -> Certificate:
    """
    Evaluate a claim on live values and wrap it as a Certificate.

    Args:
        claim: Name of a registered claim
        label: Short human-readable description
        subject: Binds the command result to an argument: "arg" compares the
            whole result with args[arg], "arg:key" compares result[key]
        args: Values the claim reads

    Returns:
        Certificate with holds set by the evaluator
    """
    if claim not in CLAIMS:
        raise ValueError(f"Unknown claim: {claim}")
    if subject is not None and subject.partition(':')[0] not in args:
        raise ValueError(f"subject {subject!r} names no argument of {claim}")
    holds = bool(CLAIMS[claim](args))
    if not holds:
        logger.debug(f"Certificate failed: {claim} ({label})")
    return Certificate(claim=claim, args=args, holds=holds, label=label, subject=subject)


def all_hold(certificates: List[Certificate]) -> bool:
    return all(c.holds for c in certificates)


def _decode_poset(data: Any, location: str) -> Any:
    """
    A lattice when the table has all meets and joins, else the bare poset.
    """
    if not isinstance(data, dict) or not isinstance(data.get("leq"), list):
        raise SchemaError("a poset needs a leq table", location)
    poset = FinPoset.from_table(data["leq"], data.get("labels") or ())
    try:
        return validate_lattice(poset)
    except NotALatticeError:
        return poset


def decode_value(data: Any, location: str = "$") -> Any:
    """
    Turn a tagged JSON value from a report back into a live value.
    """
    if isinstance(data, list):
        return [decode_value(item, f"{location}[{i}]") for i, item in enumerate(data)]
    if not isinstance(data, dict):
        return data
    if set(data) == {"pl"}:
        return PLFun.from_json(data["pl"], location=f"{location}.pl")
    if set(data) == {"space", "region"}:
        space = Space.from_json(data["space"], f"{location}.space")
        return Region.from_json(space, data["region"], f"{location}.region")
    if set(data) == {"space", "ideal"}:
        from .ingest import Ingester

        space = Space.from_json(data["space"], f"{location}.space")
        return Ingester(space).read_ideal(data["ideal"], f"{location}.ideal")
    if set(data) == {"poset"}:
        return _decode_poset(data["poset"], f"{location}.poset")
    return {key: decode_value(value, f"{location}.{key}") for key, value in data.items()}


def recheck_certificate(entry: Dict[str, Any], location: str = "$") -> bool:
    claim = entry.get("claim")
    if claim not in CLAIMS:
        raise SchemaError(f"unknown claim {claim!r}", f"{location}.claim")
    args = decode_value(entry.get("args", {}), f"{location}.args")
    return bool(CLAIMS[claim](args))


def subject_matches(entry: Dict[str, Any], result: Any) -> bool:
    """
    Whether the serialized result still equals the certified argument named
    by the certificate's subject.
    """
    name, _, key = entry["subject"].partition(':')
    if key:
        if not isinstance(result, dict) or key not in result:
            return False
        result = result[key]
    return entry.get("args", {}).get(name) == result


def recheck(report: Dict[str, Any]) -> List[Tuple[int, str, bool, bool]]:
    """
    Re-evaluate every certificate of a serialized report.

    A certificate with a subject also fails when the report's result no
    longer matches the argument it certifies.

    Args:
        report: Report as loaded from JSON

    Returns:
        One (index, label, recorded, recomputed) tuple per certificate whose
        recomputed value differs from the recorded one
    """
    mismatches = []
    result = report.get("result")
    for i, entry in enumerate(report.get("certificates", [])):
        recomputed = recheck_certificate(entry, f"$.certificates[{i}]")
        if entry.get("subject") and not subject_matches(entry, result):
            logger.debug(f"Result no longer matches certificate {i}")
            recomputed = False
        recorded = bool(entry.get("holds"))
        if recomputed != recorded:
            mismatches.append((i, entry.get("label") or entry.get("claim"),
                               recorded, recomputed))
    logger.info(
        f"Rechecked {len(report.get('certificates', []))} certificates, "
        f"{len(mismatches)} mismatches"
    )
    return mismatches
