"""
Input loading for riesz-lab.

Every value on the command line is a catalog keyword, inline JSON or a path
to a JSON file. Regions additionally accept interval notation such as
"[-1,0)|(0,1]". Malformed input raises SchemaError with a JSON-path location.
"""

import json
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple
import logging

from .errors import SchemaError, SpaceMismatchError
from .functions import PLFun
from .ideals import (
    DisjComp,
    IdealSpec,
    Intersection,
    Principal,
    RegionIdeal,
    SequenceGenerated,
    SublatticeSpec,
    Sum,
)
from .lattices import (
    NAMED,
    FinLattice,
    FinPoset,
    antichain,
    boolean,
    chain,
    divisors,
    downset_lattice,
    fence,
    validate_lattice,
)
from .regions import Piece, Region, Space
from .urysohn import IncreasingSeqRule
from .utils import DEFAULT_DOWNSET_LIMIT, read_rational


logger = logging.getLogger("rieszlab")


SPACES: Dict[str, Tuple[Tuple[int, int], ...]] = {
    "interval": ((-1, 1),),
    "unit": ((0, 1),),
    "two-components": ((-1, 0), (1, 2)),
}

FUNCTIONS = ("one", "zero", "identity", "t", "tplus", "tminus", "abs")

PIECE_PATTERN = re.compile(r'^([\[(])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([\])])$')
POINTS_PATTERN = re.compile(r'^\{([^}:"]*)\}$')


def catalog_function(name: str, space: Space) -> PLFun:
    t = PLFun.identity(space)
    builders = {
        "one": lambda: PLFun.one(space),
        "zero": lambda: PLFun.zero(space),
        "identity": lambda: t,
        "t": lambda: t,
        "tplus": t.pos,
        "tminus": t.neg,
        "abs": lambda: abs(t),
    }
    return builders[name]()


def parse_interval_notation(space: Space, text: str, location: str = "$") -> Region:
    """
    Read "[a,b)|(c,d]|{x,y}" as a region; "empty" and "full" are accepted.
    """
    text = text.strip()
    if text == "empty":
        return space.empty()
    if text == "full":
        return space.full()
    pieces = []
    for i, chunk in enumerate(part.strip() for part in text.split('|')):
        where = f"{location}|{i}"
        match = PIECE_PATTERN.match(chunk)
        if match:
            left, lo, hi, right = match.groups()
            pieces.append(Piece(read_rational(lo, where), read_rational(hi, where),
                                left == '[', right == ']'))
            continue
        match = POINTS_PATTERN.match(chunk)
        if match:
            for x in filter(None, (v.strip() for v in match.group(1).split(','))):
                value = read_rational(x, where)
                pieces.append(Piece(value, value, True, True))
            continue
        raise SchemaError(f"cannot read {chunk!r} as an interval like [a,b) or {{x}}", where)
    for i, piece in enumerate(pieces):
        if piece.lo > piece.hi:
            raise SchemaError(f"interval {piece} has lo > hi", f"{location}|{i}")
        if space.component_index(piece.lo) is None or space.component_index(piece.hi) is None \
                or space.component_index(piece.lo) != space.component_index(piece.hi):
            raise SchemaError(f"interval {piece} is not inside one component of {space}",
                              f"{location}|{i}")
    return Region.build(space, pieces)


def _looks_like_notation(text: str) -> bool:
    text = text.strip()
    return text in ("empty", "full") or any(
        PIECE_PATTERN.match(part.strip()) or POINTS_PATTERN.match(part.strip())
        for part in text.split('|')
    )


class Ingester:
    """
    Turns command-line values into spaces, functions, regions, ideals and
    lattices.

    Attributes:
        space: Ambient space used for catalog functions, regions and ideals
    """

    def __init__(self, space: Optional[Space] = None):
        self.space = space or self.read_space("interval")

    def load(self, value: Any, location: str = "$") -> Any:
        """
        Read a raw value: a JSON file, inline JSON, or a bare keyword.

        A missing "name.json" falls back to the keyword "name", so catalog
        entries can be named like files.
        """
        if not isinstance(value, str):
            return value
        path = Path(value)
        if path.is_file():
            logger.debug(f"Reading {path}")
            try:
                return json.loads(path.read_text(encoding='utf-8'))
            except json.JSONDecodeError as e:
                raise SchemaError(f"{path} is not valid JSON: {e.msg}", location)
        if path.suffix.lower() == '.json':
            return path.stem
        try:
            return json.loads(value)
        except json.JSONDecodeError:
            return value.strip()

    def read_space(self, value: Any, location: str = "$") -> Space:
        data = self.load(value, location)
        if isinstance(data, str):
            if data not in SPACES:
                raise SchemaError(
                    f"unknown space {data!r}; known: {', '.join(SPACES)}", location
                )
            return Space.of(*SPACES[data])
        return Space.from_json(data, location)

    def read_function(self, value: Any, location: str = "$") -> PLFun:
        data = self.load(value, location)
        if isinstance(data, str):
            if data not in FUNCTIONS:
                raise SchemaError(
                    f"unknown function {data!r}; known: {', '.join(FUNCTIONS)}", location
                )
            return catalog_function(data, self.space)
        if isinstance(data, dict) and set(data) == {"pl"}:
            data, location = data["pl"], f"{location}.pl"
        return PLFun.from_json(data, self.space, location)

    def read_region(self, value: Any, location: str = "$") -> Region:
        if isinstance(value, str) and not Path(value).is_file() and _looks_like_notation(value):
            return parse_interval_notation(self.space, value, location)
        data = self.load(value, location)
        if isinstance(data, str):
            if data.startswith("component:"):
                index = data.partition(':')[2]
                if not index.isdigit() or int(index) >= len(self.space.components):
                    raise SchemaError(f"no component {index!r} in {self.space}", location)
                return self.space.component(int(index))
            return parse_interval_notation(self.space, data, location)
        if isinstance(data, dict) and set(data) == {"space", "region"}:
            space = Space.from_json(data["space"], f"{location}.space")
            if space != self.space:
                raise SpaceMismatchError(f"region lives on {space}, expected {self.space}")
            return Region.from_json(space, data["region"], f"{location}.region")
        return Region.from_json(self.space, data, location)

    def read_sublattice(self, value: Optional[str]) -> SublatticeSpec:
        kind = value or "Full"
        try:
            return SublatticeSpec(kind, self.space)
        except ValueError as e:
            raise SchemaError(str(e), "--sublattice")

    def read_ideal(self, value: Any, location: str = "$") -> IdealSpec:
        """
        Decode an ideal tree:
        {"type": "Principal", "e": fn}, {"type": "RegionIdeal", "region": r},
        {"type": "Sum"|"Intersection", "left": ..., "right": ...},
        {"type": "DisjComp", "inner": ...} and
        {"type": "SequenceGenerated", "rule": {"kind": "exhaustion", "region": r,
        "scale": "1"} | {"kind": "multiples", "e": fn}}.
        """
        data = self.load(value, location)
        if not isinstance(data, dict) or "type" not in data:
            raise SchemaError("an ideal is an object with a \"type\"", location)
        kind = data["type"]

        def field(name: str) -> Any:
            if name not in data:
                raise SchemaError(f"{kind} needs \"{name}\"", location)
            return data[name]

        if kind == "Principal":
            return Principal(self.read_function(field("e"), f"{location}.e"))
        if kind == "RegionIdeal":
            return RegionIdeal(self.read_region(field("region"), f"{location}.region"))
        if kind in ("Sum", "Intersection"):
            left = self.read_ideal(field("left"), f"{location}.left")
            right = self.read_ideal(field("right"), f"{location}.right")
            return Sum(left, right) if kind == "Sum" else Intersection(left, right)
        if kind == "DisjComp":
            return DisjComp(self.read_ideal(field("inner"), f"{location}.inner"))
        if kind == "SequenceGenerated":
            return SequenceGenerated(self.read_rule(field("rule"), f"{location}.rule"))
        raise SchemaError(f"unknown ideal type {kind!r}", f"{location}.type")

    def read_rule(self, data: Any, location: str = "$") -> IncreasingSeqRule:
        if not isinstance(data, dict) or "kind" not in data:
            raise SchemaError("a sequence rule is an object with a \"kind\"", location)
        if data["kind"] == "exhaustion":
            if "region" not in data:
                raise SchemaError("exhaustion needs \"region\"", location)
            region = self.read_region(data["region"], f"{location}.region")
            scale = read_rational(data.get("scale", 1), f"{location}.scale")
            return IncreasingSeqRule.exhaustion(region, scale)
        if data["kind"] == "multiples":
            if "e" not in data:
                raise SchemaError("multiples needs \"e\"", location)
            return IncreasingSeqRule.multiples(self.read_function(data["e"], f"{location}.e"))
        raise SchemaError(f"unknown sequence rule {data['kind']!r}", f"{location}.kind")

    def read_poset(self, value: Any, location: str = "$") -> FinPoset:
        """
        {"n", "leq": [[bool]], "labels"?} or {"n", "pairs": [[i, j]], "labels"?},
        optionally wrapped as {"poset": ...}.
        """
        data = self.load(value, location)
        if isinstance(data, dict) and set(data) == {"poset"}:
            data, location = data["poset"], f"{location}.poset"
        if not isinstance(data, dict):
            raise SchemaError("a poset is an object with \"leq\" or \"pairs\"", location)
        labels = data.get("labels") or ()
        if "leq" in data:
            table = data["leq"]
            if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
                raise SchemaError("leq must be a list of rows", f"{location}.leq")
            return FinPoset.from_table(table, labels)
        if "pairs" in data and isinstance(data.get("n"), int):
            pairs = data["pairs"]
            for i, pair in enumerate(pairs):
                if not (isinstance(pair, list) and len(pair) == 2
                        and all(isinstance(v, int) and 0 <= v < data["n"] for v in pair)):
                    raise SchemaError("expected a pair of element indices",
                                      f"{location}.pairs[{i}]")
            return FinPoset.from_relation(data["n"], [tuple(p) for p in pairs], labels)
        raise SchemaError("a poset needs \"leq\" or \"n\" with \"pairs\"", location)

    def read_generated_poset(self, inputs: Dict[str, Any]) -> FinPoset:
        """
        The poset chosen by one of --chain, --antichain, --boolean, --divisors,
        --fence, --named or --poset.
        """
        generators = {
            "chain": chain, "antichain": antichain, "boolean": boolean,
            "divisors": divisors, "fence": fence,
        }
        chosen = [key for key in (*generators, "named", "poset") if inputs.get(key) is not None]
        if len(chosen) != 1:
            raise SchemaError("choose exactly one of --chain, --antichain, --boolean, "
                              "--divisors, --fence, --named, --poset", "$")
        key = chosen[0]
        if key == "named":
            name = inputs["named"]
            if name not in NAMED:
                raise SchemaError(f"unknown lattice {name!r}; known: {', '.join(NAMED)}",
                                  "--named")
            return NAMED[name]()
        if key == "poset":
            return self.read_poset(inputs["poset"])
        if inputs[key] < 1:
            raise SchemaError(f"--{key} needs a positive size", f"--{key}")
        return generators[key](inputs[key])

    def read_lattice(self, inputs: Dict[str, Any],
                     limit: int = DEFAULT_DOWNSET_LIMIT) -> FinLattice:
        poset = self.read_generated_poset(inputs)
        if inputs.get("downsets"):
            return downset_lattice(poset, limit)
        return validate_lattice(poset)

    def read_report(self, value: str) -> Dict[str, Any]:
        path = Path(value)
        if not path.is_file():
            raise SchemaError(f"report file does not exist: {value}", "$")
        data = self.load(value)
        if not isinstance(data, dict) or "certificates" not in data:
            raise SchemaError("a report is an object with \"certificates\"", "$")
        return data
