"""
Data models for riesz-lab.

These schemas describe what flows between the decision procedures, the
report builder and the emitter: certificates, verdicts, reports and the
per-run configuration.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .utils import (
    DEFAULT_BUMP_PREFIX,
    DEFAULT_DOWNSET_LIMIT,
    DEFAULT_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SEQUENCE_CUTOFF,
)


class MemberStatus(str, Enum):
    IN = "In"
    OUT = "Out"
    UNSUPPORTED = "Unsupported"


class BandStatus(str, Enum):
    NOT_BAND = "NotBand"
    BAND_ONLY = "BandOnly"
    PROJECTION_BAND = "ProjectionBand"


@dataclass
class Certificate:
    """
    One machine-checkable claim.

    The claim name selects an evaluator in riesz_lab.verifiers; args hold
    the live values it needs (PLFun, Region, Fraction, FinLattice, ...).
    holds is the evaluator's answer at construction time.
    subject names the argument that carries the command result, if any.
    """
    claim: str
    args: Dict[str, Any]
    holds: bool
    label: Optional[str] = None
    subject: Optional[str] = None


@dataclass
class Verdict:
    """
    Membership verdict together with the certificates backing it.
    """
    status: MemberStatus
    certificates: List[Certificate] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def is_in(self) -> bool:
        return self.status == MemberStatus.IN


@dataclass
class LabConfig:
    """
    Per-run options collected from the command line.
    """
    seed: int = DEFAULT_SEED
    cutoff: int = DEFAULT_SEQUENCE_CUTOFF
    grid: Tuple[Tuple[Fraction, Fraction], ...] = DEFAULT_GRID
    samples: int = DEFAULT_SAMPLES
    workers: int = 1
    recheck: bool = False
    timings: bool = False
    verbose: bool = False
    downset_limit: int = DEFAULT_DOWNSET_LIMIT
    bump_prefix: int = DEFAULT_BUMP_PREFIX


@dataclass
class LabReport:
    """
    Everything one CLI run produces.

    verdict is "pass"/"fail" style text chosen by the command; passed
    decides the exit status.
    """
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    certificates: List[Certificate] = field(default_factory=list)
    verdict: str = "pass"
    passed: bool = True
    scenario: Optional[str] = None
    result: Any = None
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class Command:
    """
    One parsed invocation: subcommand, its operation and raw input values.

    inputs keeps the strings given on the command line (catalog keywords,
    inline JSON or file paths); riesz_lab.ingest turns them into values.
    """
    name: str
    op: Optional[str] = None
    inputs: Dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
