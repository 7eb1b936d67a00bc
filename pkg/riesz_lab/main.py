"""
Main orchestration for riesz-lab.

Coordinates one command: ingest inputs, run the operation or checker,
collect certificates into a report, optionally re-check it, and emit JSON.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence
import json
import logging
import random

from .aggregators import ReportBuilder, lattice_elements
from .checkers import (
    DistributivityWitness,
    even_sum_counterexample,
    meet_distributivity_witness,
    order_bounded_check,
    self_majorizing_report,
)
from .emitters import Emitter
from .errors import NotALatticeError, SchemaError
from .functions import (
    PL_OPS,
    PLFun,
    bump_for,
    kernel,
    pl_eval,
    pl_op,
    ratio_bound,
    riesz_split,
    sup_norm_on,
    support,
)
from .ideals import (
    IdealSpec,
    Principal,
    RegionIdeal,
    band_generated,
    band_projection,
    band_status,
    disjoint_complement,
    ideal_member,
    ideal_support,
    is_support_determined,
    local_projection_check,
    order_dense_status,
    order_dense_witness,
    principal_identities_check,
    projection_certificates,
    sublattice_separator,
)
from .ingest import Ingester
from .lattices import (
    FinLattice,
    LatticeReport,
    complemented_elements,
    downset_lattice,
    glivenko_check,
    ideal_lattice_check,
    ideals_of,
    is_distributive,
    pseudo_complement,
    relative_pseudo_complement,
    skeleton_algebra,
    validate_lattice,
)
from .regions import REGION_OPS, REGION_PREDS, Region, region_op, region_pred, ro_join
from .schemas import BandStatus, Certificate, Command, LabConfig
from .urysohn import (
    IncreasingSeqRule,
    coincide_certificates,
    coincide_vanish,
    ideal_coincide,
    ideal_coincide_certificates,
    order_dense_certificates,
    order_dense_urysohn,
    separate_compacts,
    split_certificates,
    split_cover,
    telescoping_decomposition,
)
from .utils import canonical_json, read_rational, setup_logging
from .verifiers import certify, recheck


logger = logging.getLogger("rieszlab")


FN_OPS = ('eval',) + PL_OPS + ('support', 'kernel', 'sup-norm', 'ratio-bound',
                               'riesz-split', 'bump')
REGION_COMMAND_OPS = REGION_OPS + REGION_PREDS + ('ro_join', 'boundary')
IDEAL_OPS = ('member', 'support', 'complement', 'band-generated', 'band-status',
             'projection', 'order-dense', 'order-dense-witness', 'local-projection',
             'principal-identities', 'separator')
URYSOHN_OPS = ('coincide', 'separate', 'split', 'ideal-coincide', 'order-dense')
CHECKS = ('order-bounded', 'meet-distributive', 'even-sum', 'self-majorizing',
          'glivenko', 'ideal-lattice')
LATTICE_OPS = ('validate', 'distributive', 'pseudo', 'relative-pseudo', 'skeleton',
               'complemented', 'ideals', 'downsets')

DEFAULT_TELESCOPE_COUNT = 10

SCALAR_OPS: Dict[str, Callable[[List[Fraction], Optional[Fraction]], Fraction]] = {
    'add': lambda v, c: v[0] + v[1],
    'sub': lambda v, c: v[0] - v[1],
    'scale': lambda v, c: c * v[0],
    'join': lambda v, c: max(v),
    'meet': lambda v, c: min(v),
    'abs': lambda v, c: abs(v[0]),
    'pos_part': lambda v, c: max(v[0], Fraction(0)),
    'neg_part': lambda v, c: max(-v[0], Fraction(0)),
}


def pointwise_certificates(op: str, result: PLFun, operands: Sequence[PLFun],
                           scalar: Optional[Fraction] = None) -> List[Certificate]:
    """
    Compare result with the scalar operation at every knot of the operands
    and the result, and at the midpoints between them.
    """
    certs = []
    for idx in range(len(result.space.components)):
        xs = set(result.abscissae(idx))
        for fn in operands:
            xs.update(fn.abscissae(idx))
        xs = sorted(xs)
        points = xs + [(a + b) / 2 for a, b in zip(xs, xs[1:])]
        for x in sorted(points):
            expected = SCALAR_OPS[op]([fn(x) for fn in operands], scalar)
            certs.append(certify("value_at", f"{op} at {x}", fn=result, x=x, value=expected))
    return certs


def _require(inputs: Dict[str, Any], key: str) -> Any:
    value = inputs.get(key)
    if value is None:
        flag = "--" + key.replace('_', '-')
        raise SchemaError(f"{flag} is required", flag)
    return value


def _lattice_result(lattice: FinLattice, report: LatticeReport) -> Dict[str, Any]:
    return {
        "elements": lattice_elements(lattice, report.elements),
        "checks": dict(report.checks),
        "counterexamples": {
            name: lattice_elements(lattice, tuple_) if tuple_ else None
            for name, tuple_ in report.counterexamples.items()
        },
    }


class Laboratory:
    """
    Main orchestrator.

    Runs one Command:
    1. Ingest spaces, functions, regions, ideals or lattices
    2. Run the operation or theorem checker
    3. Collect certificates and verdict into a report
    4. Optionally re-check every certificate from the serialized report
    5. Emit JSON
    """

    def __init__(self, config: Optional[LabConfig] = None):
        """
        Args:
            config: Per-run options (seed, cutoffs, grid, workers, ...)
        """
        self.config = config or LabConfig()
        level = logging.DEBUG if self.config.verbose else logging.INFO
        setup_logging(level)
        self.rng = random.Random(self.config.seed)
        self.handlers: Dict[str, Callable[[Command, Ingester, ReportBuilder], None]] = {
            "fn": self._run_fn,
            "region": self._run_region,
            "ideal": self._run_ideal,
            "urysohn": self._run_urysohn,
            "telescope": self._run_telescope,
            "check": self._run_check,
            "lattice": self._run_lattice,
            "recheck": self._run_recheck,
        }

    def run(self, command: Command, emitter: Optional[Emitter] = None) -> Dict[str, Any]:
        """
        Run a command and write its report.

        Args:
            command: Parsed command
            emitter: Report writer (defaults to one built from command.out)

        Returns:
            The report as a JSON-compatible dict
        """
        if command.name not in self.handlers:
            raise SchemaError(f"unknown command {command.name!r}", "$")
        title = " ".join(part for part in (command.name, command.op) if part)
        logger.info("=" * 60)
        logger.info("riesz-lab - exact vector-lattice laboratory")
        logger.info("=" * 60)
        logger.info(f"Command: {title}")

        rng = random.Random(self.config.seed)
        builder = ReportBuilder(title, self.config)
        space_value = command.inputs.get("space")
        ingester = Ingester()
        if space_value is not None:
            ingester.space = ingester.read_space(space_value, "--space")
        builder.add_input("space", ingester.space)

        self.rng = rng
        with builder.timed("compute"):
            self.handlers[command.name](command, ingester, builder)

        report = builder.to_dict()
        if self.config.recheck and command.name != "recheck":
            with builder.timed("recheck"):
                mismatches = recheck(json.loads(canonical_json(report)))
            builder.set_recheck(len(report["certificates"]), mismatches)
            report = builder.to_dict()

        (emitter or Emitter(command.out)).emit_report(report)

        logger.info("=" * 60)
        logger.info(f"Verdict: {report['verdict']}")
        logger.info(f"Certificates: {report['summary']['holding']} of "
                    f"{report['summary']['certificates']} hold")
        logger.info("=" * 60)
        return report

    # Inputs

    def _ideal(self, ingester: Ingester, inputs: Dict[str, Any]) -> IdealSpec:
        chosen = [key for key in ("ideal", "principal", "region_ideal")
                  if inputs.get(key) is not None]
        if len(chosen) != 1:
            raise SchemaError("choose exactly one of --ideal, --principal, --region-ideal", "$")
        key = chosen[0]
        if key == "principal":
            return Principal(ingester.read_function(inputs[key], "--principal"))
        if key == "region_ideal":
            return RegionIdeal(ingester.read_region(inputs[key], "--region-ideal"))
        return ingester.read_ideal(inputs[key], "--ideal")

    def _function(self, ingester: Ingester, inputs: Dict[str, Any], key: str = "fn") -> PLFun:
        return ingester.read_function(_require(inputs, key), "--" + key)

    def _region(self, ingester: Ingester, inputs: Dict[str, Any],
                key: str = "region") -> Region:
        return ingester.read_region(_require(inputs, key), "--" + key)

    def _rational(self, inputs: Dict[str, Any], key: str) -> Fraction:
        return read_rational(_require(inputs, key), "--" + key)

    # Subcommands

    def _run_fn(self, command: Command, ingester: Ingester, builder: ReportBuilder) -> None:
        op, inputs = command.op, command.inputs
        f = self._function(ingester, inputs)
        builder.add_input("fn", f)

        if op == 'eval':
            x = self._rational(inputs, "at")
            value = pl_eval(f, x)
            builder.add_input("at", x)
            builder.add_certificates([certify("value_at", "f(x)", subject="value", fn=f, x=x, value=value)])
            builder.set_result(value)
            return

        if op in PL_OPS:
            operands = [f]
            if op in ('add', 'sub', 'join', 'meet'):
                operands.append(self._function(ingester, inputs, "fn2"))
                builder.add_input("fn2", operands[1])
            scalar = self._rational(inputs, "scalar") if op == 'scale' else None
            if scalar is not None:
                builder.add_input("scalar", scalar)
            result = pl_op(op, *operands, scalar=scalar)
            builder.add_certificates(pointwise_certificates(op, result, operands, scalar))
            builder.set_result(result)
            return

        if op == 'support':
            result = support(f)
            builder.add_certificates([certify("support_equals", "supp f", fn=f, region=result)])
            builder.set_result(result)
        elif op == 'kernel':
            result = kernel(f)
            builder.add_certificates([
                certify("region_equal", "ker f is the complement of supp f",
                        lhs=result, rhs=support(f).complement()),
            ])
            builder.set_result(result)
        elif op == 'sup-norm':
            region = self._region(ingester, inputs)
            builder.add_input("region", region)
            value = sup_norm_on(f, region)
            closure = region.closure()
            builder.add_certificates([
                certify("rational_le", f"|f({x})| <= sup", lhs=abs(f(x)), rhs=value)
                for idx in range(len(f.space.components))
                for x in f.abscissae(idx) if closure.contains(x)
            ])
            builder.set_result(value)
        elif op == 'ratio-bound':
            e = self._function(ingester, inputs, "fn2")
            builder.add_input("fn2", e)
            bound = ratio_bound(f, e)
            if bound is None:
                cert = certify("not_region_subset", "supp f escapes supp e",
                               lhs=support(f), rhs=support(e))
            else:
                cert = certify("ratio_le", "|f| <= bound e", subject="bound", fn=f, e=e, bound=bound)
            builder.add_certificates([cert])
            builder.set_result(bound, verdict="bounded" if bound is not None else "unbounded",
                               passed=cert.holds)
        elif op == 'riesz-split':
            g1 = self._function(ingester, inputs, "fn2")
            g2 = self._function(ingester, inputs, "fn3")
            builder.add_input("fn2", g1)
            builder.add_input("fn3", g2)
            first, second = riesz_split(f, g1, g2)
            builder.add_certificates([
                certify("sum_equals", "f1 + f2 = f", parts=[first, second], total=f),
                certify("nonnegative", "f1 >= 0", fn=first),
                certify("nonnegative", "f2 >= 0", fn=second),
                certify("le", "f1 <= g1", lhs=first, rhs=g1),
                certify("le", "f2 <= g2", lhs=second, rhs=g2),
            ])
            builder.set_result([first, second])
        elif op == 'bump':
            region = self._region(ingester, inputs)
            compact = (ingester.read_region(inputs["region2"], "--region2")
                       if inputs.get("region2") is not None else None)
            builder.add_input("region", region)
            builder.add_input("region2", compact)
            e = bump_for(region, compact)
            one = PLFun.one(e.space)
            certs = [
                certify("support_equals", "supp e = U", fn=e, region=region),
                certify("nonnegative", "e >= 0", fn=e),
                certify("le", "e <= 1", lhs=e, rhs=one),
            ]
            if compact is not None:
                certs.append(certify("equal_on", "e = 1 on K", lhs=e, rhs=one, region=compact))
            builder.add_certificates(certs)
            builder.set_result(e)
        else:
            raise SchemaError(f"unknown fn operation {op!r}", "$.op")

    def _run_region(self, command: Command, ingester: Ingester,
                    builder: ReportBuilder) -> None:
        op, inputs = command.op, command.inputs
        region = self._region(ingester, inputs)
        builder.add_input("region", region)
        other = None
        if op in ('union', 'intersect', 'subset', 'equal', 'ro_join'):
            other = self._region(ingester, inputs, "region2")
            builder.add_input("region2", other)

        if op in REGION_PREDS:
            args = (region, other) if other is not None else (region,)
            answer = region_pred(op, *args)
            if op == 'subset':
                claim = "region_subset" if answer else "not_region_subset"
                cert = certify(claim, "R inside S", lhs=region, rhs=other)
            elif op == 'equal':
                cert = (certify("region_equal", "R = S", lhs=region, rhs=other) if answer
                        else certify("region_differs", "R differs from S", lhs=region, rhs=other))
            else:
                cert = certify("region_pred", op, subject="expected", pred=op, region=region,
                               expected=answer)
            builder.add_certificates([cert])
            builder.set_result(answer, verdict="true" if answer else "false", passed=answer)
            return

        if op == 'boundary':
            points = list(region.boundary_points())
            closure, interior = region.closure(), region.interior()
            certs = []
            for x in points:
                certs.append(certify("contains", f"{x} in the closure", region=closure, x=x))
                certs.append(certify("not_contains", f"{x} not in the interior",
                                     region=interior, x=x))
            builder.add_certificates(certs)
            builder.set_result(points)
            return

        if op == 'ro_join':
            result = ro_join(region, other)
            certs = [certify("region_pred", "R v S is regular open", pred="is_regular_open",
                             region=result, expected=True)]
        elif op in REGION_OPS:
            result = region_op(op, *((region, other) if other is not None else (region,)))
            certs = self._region_op_certificates(op, region, other, result)
        else:
            raise SchemaError(f"unknown region operation {op!r}", "$.op")
        if other is not None:
            if op == 'intersect':
                pairs = ((result, region, "R n S inside R"), (result, other, "R n S inside S"))
            else:
                pairs = ((region, result, "R inside the result"),
                         (other, result, "S inside the result"))
            certs += [certify("region_subset", label, lhs=lhs, rhs=rhs)
                      for lhs, rhs, label in pairs]
        builder.add_certificates(certs)
        builder.set_result(result)

    @staticmethod
    def _region_op_certificates(op: str, region: Region, other: Optional[Region],
                                result: Region) -> List[Certificate]:
        if op == 'complement':
            return [
                certify("region_empty", "R n R^c is empty", region=region.intersect(result)),
                certify("region_equal", "R u R^c is the space",
                        lhs=region.union(result), rhs=region.space.full()),
            ]
        if op == 'interior':
            return [
                certify("region_pred", "interior is open", pred="is_open",
                        region=result, expected=True),
                certify("region_subset", "int R inside R", lhs=result, rhs=region),
            ]
        if op == 'closure':
            return [
                certify("region_pred", "closure is closed", pred="is_closed",
                        region=result, expected=True),
                certify("region_subset", "R inside cl R", lhs=region, rhs=result),
            ]
        return []

    def _run_ideal(self, command: Command, ingester: Ingester,
                   builder: ReportBuilder) -> None:
        op, inputs = command.op, command.inputs
        config = self.config

        if op == 'principal-identities':
            e = self._function(ingester, inputs)
            f = self._function(ingester, inputs, "fn2")
            builder.add_input("fn", e)
            builder.add_input("fn2", f)
            report = principal_identities_check(e, f, self.rng, config.samples, config.cutoff)
            builder.add_certificates(report.certificates)
            builder.set_result(report.counterexample,
                               verdict="pass" if report.passed else "counterexample",
                               passed=report.passed)
            return

        sublattice = ingester.read_sublattice(inputs.get("sublattice"))
        builder.add_input("sublattice", sublattice.kind)

        if op == 'separator':
            x, y = self._rational(inputs, "at"), self._rational(inputs, "at2")
            g = sublattice_separator(sublattice, x, y)
            certs = [
                certify("value_at", "g(x) = 1", fn=g, x=x, value=1),
                certify("value_at", "g(y) = 0", fn=g, x=y, value=0),
                certify("in_sublattice", f"g lies in {sublattice.kind}",
                        sublattice=sublattice.kind, fn=g),
            ]
            if sublattice.kind != "Full":
                certs.append(certify("even_at", "g is even near 0", fn=g, x=0, expected=True))
            builder.add_certificates(certs)
            builder.set_result(g)
            return

        ideal = self._ideal(ingester, inputs)
        builder.add_input("ideal", ideal)
        region = ideal_support(ideal)

        if op == 'member':
            f = self._function(ingester, inputs)
            builder.add_input("fn", f)
            verdict = ideal_member(sublattice, ideal, f, config.cutoff)
            builder.add_certificates(verdict.certificates)
            builder.add_certificates([
                certify("ideal_member", f"f is {verdict.status.value}", subject="status:status",
                        sublattice=sublattice.kind, ideal=ideal, fn=f, cutoff=config.cutoff,
                        status=verdict.status),
            ])
            builder.set_result({"status": verdict.status, "notes": verdict.notes},
                               verdict=verdict.status.value, passed=verdict.is_in)
        elif op == 'support':
            builder.set_result(region)
        elif op == 'complement':
            comp = disjoint_complement(ideal)
            builder.add_certificates([
                certify("region_empty", "supp H n supp H^d is empty",
                        region=region.intersect(ideal_support(comp))),
            ])
            builder.set_result({"ideal": comp, "support": ideal_support(comp)})
        elif op == 'band-generated':
            band = band_generated(ideal)
            builder.add_certificates([
                certify("same_ideal", "the generated band is H^dd", lhs=band,
                        rhs=disjoint_complement(disjoint_complement(ideal)), expected=True),
                certify("region_subset", "supp H inside the band",
                        lhs=region, rhs=ideal_support(band)),
            ])
            builder.set_result({"ideal": band, "support": ideal_support(band)})
        elif op == 'band-status':
            status = band_status(ideal, config.cutoff)
            certs = [certify("band_status", f"H is {status.value}", subject="status",
                             ideal=ideal, cutoff=config.cutoff, status=status)]
            if is_support_determined(ideal, config.cutoff):
                certs += [
                    certify("region_pred", "supp H clopen", pred="is_clopen", region=region,
                            expected=status == BandStatus.PROJECTION_BAND),
                    certify("region_pred", "supp H regular open", pred="is_regular_open",
                            region=region, expected=status != BandStatus.NOT_BAND),
                ]
            builder.add_certificates(certs)
            builder.set_result(status, verdict=status.value, passed=True)
        elif op == 'projection':
            f = self._function(ingester, inputs)
            builder.add_input("fn", f)
            part, rest = band_projection(ideal, f)
            builder.add_certificates(projection_certificates(ideal, f))
            builder.set_result([part, rest])
        elif op == 'order-dense':
            dense = order_dense_status(sublattice, ideal)
            builder.add_certificates([certify("region_pred", "supp H dense", subject="expected",
                                              pred="is_dense", region=region, expected=dense)])
            builder.set_result(dense, verdict="dense" if dense else "not dense", passed=dense)
        elif op == 'order-dense-witness':
            f = self._function(ingester, inputs)
            builder.add_input("fn", f)
            g = order_dense_witness(ideal, f, sublattice, config.cutoff)
            builder.add_certificates([
                certify("nonnegative", "g >= 0", fn=g),
                certify("le", "g <= f", lhs=g, rhs=f),
                certify("support_subset", "g lies in H", fn=g, region=region),
                certify("nonzero", "g is not zero", fn=g),
            ])
            builder.set_result(g)
        elif op == 'local-projection':
            g = self._function(ingester, inputs)
            builder.add_input("fn", g)
            holds, certs = local_projection_check(ideal, g)
            builder.add_certificates(certs)
            builder.set_result(holds, verdict="projection band in I_g" if holds
                               else "not a projection band in I_g", passed=holds)
        else:
            raise SchemaError(f"unknown ideal operation {op!r}", "$.op")

    def _run_urysohn(self, command: Command, ingester: Ingester,
                     builder: ReportBuilder) -> None:
        op, inputs = command.op, command.inputs
        f = self._function(ingester, inputs)
        builder.add_input("fn", f)

        if op == 'ideal-coincide':
            ideal = self._ideal(ingester, inputs)
            compact = self._region(ingester, inputs)
            builder.add_input("ideal", ideal)
            builder.add_input("region", compact)
            h = ideal_coincide(ideal, compact, f, self.config.cutoff)
            builder.add_certificates(
                ideal_coincide_certificates(ideal, compact, f, h, self.config.cutoff))
            builder.set_result(h)
            return

        first = self._region(ingester, inputs)
        builder.add_input("region", first)
        if op == 'order-dense':
            core, e = order_dense_urysohn(f, first)
            builder.add_certificates(order_dense_certificates(f, first, core, e))
            builder.set_result({"V": core, "e": e})
            return

        second = self._region(ingester, inputs, "region2")
        builder.add_input("region2", second)
        if op == 'coincide':
            e = coincide_vanish(f, first, second)
            builder.add_certificates(coincide_certificates(f, first, second, e))
            builder.set_result(e)
        elif op == 'separate':
            e = separate_compacts(f, first, second)
            builder.add_certificates([
                certify("nonnegative", "e >= 0", fn=e),
                certify("le", "e <= f", lhs=e, rhs=f),
                certify("equal_on", "e = f on K", lhs=e, rhs=f, region=first),
                certify("equal_on", "e = 0 on L", lhs=e, rhs=PLFun.zero(f.space),
                        region=second),
            ])
            builder.set_result(e)
        elif op == 'split':
            g, h = split_cover(f, first, second)
            builder.add_certificates(split_certificates(f, first, second, g, h))
            builder.set_result([g, h])
        else:
            raise SchemaError(f"unknown urysohn operation {op!r}", "$.op")

    def _run_telescope(self, command: Command, ingester: Ingester,
                       builder: ReportBuilder) -> None:
        inputs = command.inputs
        f = self._function(ingester, inputs)
        if inputs.get("region") is not None:
            scale = (self._rational(inputs, "scalar")
                     if inputs.get("scalar") is not None else Fraction(1))
            rule = IncreasingSeqRule.exhaustion(self._region(ingester, inputs), scale)
        elif inputs.get("fn2") is not None:
            rule = IncreasingSeqRule.multiples(self._function(ingester, inputs, "fn2"))
        else:
            raise SchemaError("telescope needs --region (exhaustion) or --fn2 (multiples)", "$")
        unit = (self._function(ingester, inputs, "fn3") if inputs.get("fn3") is not None
                else PLFun.one(f.space))
        count = inputs.get("count") or DEFAULT_TELESCOPE_COUNT
        builder.add_input("fn", f)
        builder.add_input("rule", rule)
        builder.add_input("unit", unit)
        builder.add_input("count", count)

        result = telescoping_decomposition(f, rule, unit, count)
        builder.add_certificates(result.certificates)
        builder.set_scenario("disjoint telescoping decomposition along an increasing "
                             "generator sequence")
        builder.set_result({"parts": result.parts, "compacts": result.compacts})

    def _run_check(self, command: Command, ingester: Ingester,
                   builder: ReportBuilder) -> None:
        name, inputs, config = command.op, command.inputs, self.config

        if name in ('glivenko', 'ideal-lattice'):
            lattice = ingester.read_lattice(inputs, config.downset_limit)
            builder.add_input("lattice", lattice)
            law = "glivenko" if name == 'glivenko' else "ideal_lattice"
            report = (glivenko_check(lattice) if name == 'glivenko'
                      else ideal_lattice_check(lattice, config.downset_limit))
            builder.add_certificates([certify("lattice_law", law, lattice=lattice, law=law,
                                              expected=True)])
            builder.set_scenario(
                "pseudo-complement identities and relativization in a finite distributive lattice"
                if name == 'glivenko' else
                "joins and meets of lattice ideals are elementwise joins and intersections"
            )
            builder.set_result(_lattice_result(lattice, report), passed=report.passed)
            return

        if name == 'even-sum':
            outcome = even_sum_counterexample()
        elif name == 'self-majorizing':
            e = self._function(ingester, inputs)
            builder.add_input("fn", e)
            outcome = self_majorizing_report(e, self.rng, cutoff=config.cutoff)
        elif name == 'order-bounded':
            ideal = self._ideal(ingester, inputs)
            builder.add_input("ideal", ideal)
            builder.add_input("grid", [list(pair) for pair in config.grid])
            outcome = order_bounded_check(ideal, config.grid, config.bump_prefix,
                                          config.seed, config.workers)
        elif name == 'meet-distributive':
            ideal = self._ideal(ingester, inputs)
            builder.add_input("ideal", ideal)
            witness = meet_distributivity_witness(ideal, config.cutoff, config.samples,
                                                  self.rng)
            builder.add_certificates(witness.certificates)
            builder.set_scenario("meet distributivity of the ideal lattice at H")
            if isinstance(witness, DistributivityWitness):
                builder.set_result({
                    "kind": "witness",
                    "f": witness.f,
                    "point": witness.point,
                    "sequence": {"center": witness.sequence.center,
                                 "scale": witness.sequence.scale},
                    "stages": len(witness.stage_certificates),
                }, verdict="witness")
            else:
                builder.set_result({"kind": "confirmed", "families": witness.families},
                                   verdict="confirmed")
            return
        else:
            raise SchemaError(f"unknown check {name!r}", "$.op")

        builder.add_certificates(outcome.certificates)
        builder.set_scenario(outcome.scenario)
        builder.set_result(outcome.details, verdict=outcome.verdict, passed=outcome.passed)

    def _run_lattice(self, command: Command, ingester: Ingester,
                     builder: ReportBuilder) -> None:
        op, inputs, config = command.op, command.inputs, self.config

        if op in ('validate', 'downsets'):
            poset = ingester.read_generated_poset(inputs)
            builder.add_input("poset", poset)
            if op == 'downsets' or inputs.get("downsets"):
                lattice = downset_lattice(poset, config.downset_limit)
                builder.add_certificates([certify("lattice_law", "downsets are distributive",
                                                  lattice=lattice, law="distributive",
                                                  expected=True)])
                builder.set_result({"lattice": lattice, "size": lattice.n})
                return
            try:
                lattice = validate_lattice(poset)
            except NotALatticeError as e:
                pair = [poset.labels[i] for i in e.pair] if e.pair else None
                builder.add_certificates([certify("is_lattice", f"missing {e.kind}",
                                                  subject="expected:lattice", poset=poset,
                                                  expected=False)])
                builder.set_result({"lattice": False, "pair": pair, "kind": e.kind},
                                   verdict="not a lattice", passed=False)
                return
            builder.add_certificates([certify("is_lattice", "meet and join tables exist",
                                              subject="expected:lattice", poset=lattice,
                                              expected=True)])
            builder.set_result({"lattice": True, "bottom": lattice.label(lattice.bottom),
                                "top": lattice.label(lattice.top)},
                               verdict="lattice", passed=True)
            return

        lattice = ingester.read_lattice(inputs, config.downset_limit)
        builder.add_input("lattice", lattice)

        if op == 'distributive':
            ok, triple = is_distributive(lattice)
            builder.add_certificates([certify("lattice_law", "distributivity",
                                              subject="expected:distributive",
                                              lattice=lattice, law="distributive",
                                              expected=ok)])
            builder.set_result({
                "distributive": ok,
                "witness": lattice_elements(lattice, triple) if triple else None,
            }, verdict="distributive" if ok else "not distributive", passed=ok)
        elif op in ('pseudo', 'relative-pseudo'):
            p = lattice.index(_require(inputs, "element"))
            if op == 'pseudo':
                top = lattice.top
                star = pseudo_complement(lattice, p)
            else:
                top = lattice.index(_require(inputs, "element2"))
                star = relative_pseudo_complement(lattice, p, top)
            builder.add_certificates([
                certify("pseudo_complement", "p* is the largest q <= top with p ^ q = 0",
                        subject="star", lattice=lattice, p=lattice.label(p),
                        top=lattice.label(top), star=lattice.label(star)),
            ])
            builder.set_result(lattice.label(star), verdict=lattice.label(star))
        elif op in ('skeleton', 'complemented'):
            report = (skeleton_algebra(lattice) if op == 'skeleton'
                      else complemented_elements(lattice))
            law = "skeleton_boolean" if op == 'skeleton' else "complemented_boolean"
            builder.add_certificates([certify("lattice_law", law, lattice=lattice, law=law,
                                              expected=True)])
            builder.set_result(_lattice_result(lattice, report), passed=report.passed)
        elif op == 'ideals':
            ideals = ideals_of(lattice, config.downset_limit)
            listed = [lattice_elements(lattice, ideal) for ideal in ideals]
            builder.add_certificates([certify("principal_ideals", "every ideal is principal",
                                              subject="ideals", lattice=lattice,
                                              ideals=listed, limit=config.downset_limit)])
            builder.set_result(listed)
        else:
            raise SchemaError(f"unknown lattice operation {op!r}", "$.op")

    def _run_recheck(self, command: Command, ingester: Ingester,
                     builder: ReportBuilder) -> None:
        path = _require(command.inputs, "report")
        report = ingester.read_report(path)
        mismatches = recheck(report)
        builder.set_result({
            "source_command": report.get("command"),
            "certificates": len(report.get("certificates", [])),
            "mismatches": [
                {"index": i, "label": label, "recorded": recorded, "recomputed": recomputed}
                for i, label, recorded, recomputed in mismatches
            ],
        }, verdict="confirmed" if not mismatches else "mismatch", passed=not mismatches)
