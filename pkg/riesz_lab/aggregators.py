"""
Report assembly for riesz-lab.

Collects inputs, certificates, verdicts and timings of one run and encodes
live values into tagged JSON that riesz_lab.verifiers can decode again.
"""

from contextlib import contextmanager
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple
import logging
import time

import numpy as np

from .functions import PLFun
from .ideals import IdealSpec
from .lattices import FinLattice, FinPoset
from .regions import Region, Space
from .schemas import Certificate, LabConfig, LabReport
from .utils import format_rational


logger = logging.getLogger("rieszlab")


def encode_value(value: Any) -> Any:
    """
    Encode a live value as JSON.

    PL functions become {"pl": knots}, regions {"space", "region"}, ideal
    trees {"space", "ideal"} and lattices {"poset": table}; rationals are
    "p/q" strings.
    """
    if isinstance(value, PLFun):
        return {"pl": value.to_json()}
    if isinstance(value, Region):
        return {"space": value.space.to_json(), "region": value.to_json()}
    if isinstance(value, (FinLattice, FinPoset)):
        return {"poset": value.to_json()}
    if isinstance(value, IdealSpec):
        return {"space": value.space.to_json(), "ideal": value.to_json()}
    if isinstance(value, Space):
        return value.to_json()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(key): encode_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(item) for item in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def encode_certificate(certificate: Certificate) -> Dict[str, Any]:
    data = {
        "claim": certificate.claim,
        "label": certificate.label,
        "args": encode_value(certificate.args),
        "holds": certificate.holds,
    }
    if certificate.subject:
        data["subject"] = certificate.subject
    return data


class ReportBuilder:
    """
    Builds the report of one command.
    """

    def __init__(self, command: str, config: LabConfig):
        self.config = config
        self.report = LabReport(command=command)
        self.recheck: Optional[Dict[str, Any]] = None

    def add_input(self, name: str, value: Any) -> None:
        self.report.inputs[name] = value

    def add_certificates(self, certificates: Iterable[Certificate]) -> None:
        self.report.certificates.extend(certificates)

    def set_result(self, result: Any, verdict: str = None, passed: bool = None) -> None:
        """
        Record the command's answer.

        Args:
            result: Live value (encoded at serialization time)
            verdict: Verdict text; defaults to "pass"/"fail"
            passed: Outcome; defaults to all certificates holding
        """
        self.report.result = result
        if passed is None:
            passed = all(c.holds for c in self.report.certificates)
        self.report.passed = bool(passed)
        self.report.verdict = verdict or ("pass" if passed else "fail")

    def set_scenario(self, scenario: str) -> None:
        self.report.scenario = scenario

    def set_recheck(self, count: int, mismatches: List[Tuple[int, str, bool, bool]]) -> None:
        """
        Attach the outcome of re-checking the serialized report; any
        mismatch fails the run.
        """
        self.recheck = {
            "certificates": count,
            "mismatches": [
                {"index": i, "label": label, "recorded": recorded, "recomputed": recomputed}
                for i, label, recorded, recomputed in mismatches
            ],
        }
        if mismatches:
            logger.error(f"{len(mismatches)} certificates changed on re-check")
            self.report.passed = False
            self.report.verdict = "recheck mismatch"

    @contextmanager
    def timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.config.timings:
                self.report.timings[stage] = round(time.perf_counter() - start, 6)

    @property
    def passed(self) -> bool:
        return self.report.passed

    def summary(self) -> Dict[str, int]:
        certificates = self.report.certificates
        holding = sum(1 for c in certificates if c.holds)
        by_claim: Dict[str, int] = {}
        for c in certificates:
            by_claim[c.claim] = by_claim.get(c.claim, 0) + 1
        return {
            "certificates": len(certificates),
            "holding": holding,
            "failing": len(certificates) - holding,
            "by_claim": by_claim,
        }

    def to_dict(self) -> Dict[str, Any]:
        """
        The JSON form of the report. Timings appear only when requested, so
        default reports are byte-identical across runs.
        """
        report = self.report
        data: Dict[str, Any] = {
            "command": report.command,
            "inputs": encode_value(report.inputs),
            "certificates": [encode_certificate(c) for c in report.certificates],
            "verdict": report.verdict,
            "passed": report.passed,
            "result": encode_value(report.result),
            "summary": self.summary(),
        }
        if report.scenario:
            data["scenario"] = report.scenario
        if self.recheck is not None:
            data["recheck"] = self.recheck
        if self.config.timings:
            data["timings"] = dict(report.timings)
        return data


def lattice_elements(lattice: FinLattice, elements: Iterable[int]) -> List[str]:
    return [lattice.label(int(i)) for i in elements]
