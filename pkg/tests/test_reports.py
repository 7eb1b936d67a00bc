"""Tests for certificates, report assembly, re-checking and emission."""

from fractions import Fraction
import io
import json
import logging

import numpy as np
import pytest

from riesz_lab.aggregators import ReportBuilder, encode_value, lattice_elements
from riesz_lab.emitters import Emitter
from riesz_lab.errors import SchemaError
from riesz_lab.ideals import RegionIdeal, band_generated, disjoint_complement
from riesz_lab.lattices import divisors, validate_lattice
from riesz_lab.regions import Region
from riesz_lab.schemas import BandStatus, LabConfig
from riesz_lab.utils import (
    canonical_json,
    format_rational,
    parse_grid,
    setup_logging,
    to_rational,
)
from riesz_lab.verifiers import all_hold, certify, decode_value, recheck


def serialized(builder):
    return json.loads(canonical_json(builder.to_dict()))


@pytest.fixture
def builder(interval, tplus, abs_t):
    builder = ReportBuilder("fn le", LabConfig())
    builder.add_input("f", tplus)
    builder.add_certificates([
        certify("le", "t+ <= |t|", lhs=tplus, rhs=abs_t),
        certify("ratio_le", "t+ <= 1 |t|", fn=tplus, e=abs_t, bound=Fraction(1)),
        certify("region_pred", "supp is regular open", pred="is_regular_open",
                region=Region.interval(interval, 0, 1, False, True), expected=True),
        certify("lattice_law", "divisors of 12 satisfy Glivenko",
                law="glivenko", lattice=validate_lattice(divisors(12)), expected=True),
        certify("rational_lt", "1/3 < 1/2", lhs=Fraction(1, 3), rhs=Fraction(1, 2)),
    ])
    builder.set_result(True)
    return builder


class TestCertify:
    def test_holds(self, tplus, abs_t):
        assert certify("le", lhs=tplus, rhs=abs_t).holds

    def test_fails(self, t, tplus):
        cert = certify("le", "t+ <= t", lhs=tplus, rhs=t)
        assert not cert.holds
        assert not all_hold([cert])

    def test_unknown_claim(self):
        with pytest.raises(ValueError):
            certify("bigger", lhs=1, rhs=2)

    def test_even_at(self, abs_t, tplus):
        assert certify("even_at", fn=abs_t, x=0, expected=True).holds
        assert certify("even_at", fn=tplus, x=0, expected=False).holds

    def test_subject_must_name_an_argument(self, tplus):
        with pytest.raises(ValueError):
            certify("nonzero", subject="value", fn=tplus)

    def test_pseudo_complement(self):
        lattice = validate_lattice(divisors(12))
        assert certify("pseudo_complement", lattice=lattice, p="4", top="12", star="3").holds
        assert not certify("pseudo_complement", lattice=lattice, p="4", top="12",
                           star="1").holds
        assert not certify("pseudo_complement", lattice=lattice, p="4", top="12",
                           star="12").holds

    def test_relative_pseudo_complement(self):
        lattice = validate_lattice(divisors(12))
        assert certify("pseudo_complement", lattice=lattice, p="2", top="6", star="3").holds

    def test_principal_ideals(self):
        lattice = validate_lattice(divisors(6))
        ideals = [["1"], ["1", "2"], ["1", "3"], ["1", "2", "3", "6"]]
        assert certify("principal_ideals", lattice=lattice, ideals=ideals, limit=64).holds
        assert not certify("principal_ideals", lattice=lattice, ideals=ideals[:3],
                           limit=64).holds
        assert not certify("principal_ideals", lattice=lattice,
                           ideals=ideals + [["1", "2", "3"]], limit=64).holds

    def test_below_at(self, tplus):
        assert certify("below_at", fn=tplus, x=Fraction(1, 2), value=1).holds
        assert not certify("below_at", fn=tplus, x=Fraction(1, 2), value=Fraction(1, 2)).holds


class TestEncoding:
    """Live values become tagged JSON."""

    def test_scalars(self):
        assert encode_value(Fraction(1, 2)) == "1/2"
        assert encode_value(np.int64(3)) == 3
        assert encode_value(np.bool_(True)) is True
        assert encode_value(BandStatus.BAND_ONLY) == "BandOnly"

    def test_function_and_region(self, interval, tplus):
        assert encode_value(tplus) == {"pl": tplus.to_json()}
        region = Region.interval(interval, 0, 1, False, True)
        assert encode_value(region) == {"space": [["-1", "1"]], "region": region.to_json()}

    def test_decode_reverses_encode(self, interval, tplus):
        region = Region.interval(interval, 0, 1, False, True)
        data = encode_value({"fn": tplus, "regions": [region, region]})
        decoded = decode_value(json.loads(json.dumps(data)))
        assert decoded == {"fn": tplus, "regions": [region, region]}

    def test_decode_lattice(self):
        lattice = validate_lattice(divisors(6))
        decoded = decode_value(encode_value(lattice))
        assert decoded.n == 4
        assert np.array_equal(decoded.leq, lattice.leq)

    def test_decode_poset_needs_table(self):
        with pytest.raises(SchemaError, match=r"\$\.x\.poset"):
            decode_value({"x": {"poset": {"n": 2}}})


class TestReportBuilder:
    """Reports carry inputs, certificates, verdict and summary."""

    def test_summary(self, builder):
        summary = builder.summary()
        assert summary["certificates"] == 5
        assert summary["failing"] == 0
        assert summary["by_claim"]["le"] == 1

    def test_default_verdict(self, builder, t, tplus):
        builder.add_certificates([certify("le", lhs=tplus, rhs=t)])
        builder.set_result(None)
        assert builder.report.verdict == "fail"
        assert not builder.passed

    def test_timings_are_opt_in(self, builder):
        with builder.timed("compute"):
            pass
        assert "timings" not in builder.to_dict()

        timed = ReportBuilder("fn le", LabConfig(timings=True))
        with timed.timed("compute"):
            pass
        assert set(timed.to_dict()["timings"]) == {"compute"}

    def test_deterministic(self, builder):
        assert canonical_json(builder.to_dict()) == canonical_json(builder.to_dict())

    def test_recheck_mismatch_fails_the_run(self, builder):
        builder.set_recheck(5, [(0, "t+ <= |t|", True, False)])
        assert not builder.passed
        assert builder.report.verdict == "recheck mismatch"
        assert builder.to_dict()["recheck"]["mismatches"][0]["index"] == 0

    def test_lattice_elements(self):
        lattice = validate_lattice(divisors(12))
        assert lattice_elements(lattice, [np.int64(0), 5]) == ["1", "12"]


class TestRecheck:
    """Serialized certificates are re-evaluated from JSON alone."""

    def test_clean_report(self, builder):
        assert recheck(serialized(builder)) == []

    def test_flipped_verdict(self, builder):
        data = serialized(builder)
        data["certificates"][0]["holds"] = False
        assert recheck(data) == [(0, "t+ <= |t|", False, True)]

    def test_tampered_argument(self, builder):
        data = serialized(builder)
        data["certificates"][4]["args"]["lhs"] = "2/3"
        assert recheck(data) == [(4, "1/3 < 1/2", True, False)]

    def test_tampered_function(self, builder, t):
        data = serialized(builder)
        data["certificates"][0]["args"]["rhs"] = encode_value(t)
        assert recheck(data) == [(0, "t+ <= |t|", True, False)]

    def test_unknown_claim(self, builder):
        data = serialized(builder)
        data["certificates"][1]["claim"] = "bigger"
        with pytest.raises(SchemaError, match=r"\$\.certificates\[1\]\.claim"):
            recheck(data)

    def test_result_bound_to_argument(self, tplus):
        builder = ReportBuilder("fn eval", LabConfig())
        builder.add_certificates([certify("value_at", "f(x)", subject="value", fn=tplus,
                                          x=Fraction(1, 2), value=Fraction(1, 2))])
        builder.set_result(Fraction(1, 2))
        data = serialized(builder)
        assert data["certificates"][0]["subject"] == "value"
        assert recheck(data) == []

        data["result"] = "1/3"
        assert recheck(data) == [(0, "f(x)", True, False)]

    def test_result_key_bound_to_argument(self):
        lattice = validate_lattice(divisors(6))
        builder = ReportBuilder("lattice validate", LabConfig())
        builder.add_certificates([certify("is_lattice", "lattice", subject="expected:lattice",
                                          poset=lattice, expected=True)])
        builder.set_result({"lattice": True})
        data = serialized(builder)
        assert recheck(data) == []

        data["result"] = {"lattice": False}
        assert recheck(data) == [(0, "lattice", True, False)]
        data["result"] = None
        assert recheck(data) == [(0, "lattice", True, False)]

    def test_ideal_arguments(self, interval):
        ideal = RegionIdeal(Region.interval(interval, Fraction(1, 4), Fraction(1, 2), False, True))
        twice = disjoint_complement(disjoint_complement(ideal))
        builder = ReportBuilder("ideal band-generated", LabConfig())
        builder.add_certificates([
            certify("same_ideal", "band is H^dd", lhs=band_generated(ideal), rhs=twice,
                    expected=True),
            certify("band_status", "H is BandOnly", subject="status", ideal=ideal,
                    cutoff=8, status=BandStatus.BAND_ONLY),
        ])
        builder.set_result(BandStatus.BAND_ONLY)
        data = serialized(builder)
        assert data["certificates"][1]["args"]["status"] == "BandOnly"
        assert recheck(data) == []

        data["certificates"][0]["args"]["rhs"] = encode_value(disjoint_complement(ideal))
        assert recheck(data) == [(0, "band is H^dd", True, False)]


class TestEmitter:
    """Sorted-key JSON to a stream, a file or a directory."""

    def test_stream(self, builder):
        stream = io.StringIO()
        assert Emitter(stream=stream).emit_report(builder.to_dict()) is None
        text = stream.getvalue()
        assert text.endswith("}\n")
        assert json.loads(text)["command"] == "fn le"

    def test_directory(self, builder, tmp_path):
        path = Emitter(str(tmp_path)).emit_report(builder.to_dict())
        assert path == tmp_path / "fn-le.json"
        assert json.loads(path.read_text(encoding="utf-8"))["passed"] is True

    def test_file_in_new_directory(self, builder, tmp_path):
        target = tmp_path / "reports" / "run.json"
        assert Emitter(str(target)).emit_report(builder.to_dict()) == target
        assert target.read_text(encoding="utf-8") == canonical_json(builder.to_dict()) + "\n"

    @pytest.mark.parametrize("name", ["fresh/", "fresh"])
    def test_new_directory(self, builder, tmp_path, name):
        path = Emitter(str(tmp_path / "out") + "/" + name).emit_report(builder.to_dict())
        assert path == tmp_path / "out" / "fresh" / "fn-le.json"
        assert path.is_file()

    def test_file_in_the_way(self, builder, tmp_path):
        (tmp_path / "taken").write_text("", encoding="utf-8")
        with pytest.raises(SchemaError, match="not a directory"):
            Emitter(str(tmp_path / "taken") + "/").emit_report(builder.to_dict())


class TestLogging:
    def test_single_stderr_handler(self):
        logger = setup_logging(logging.INFO)
        again = setup_logging(logging.DEBUG)
        assert logger is again
        assert len(logger.handlers) == 1
        assert logger.handlers[0].level == logging.DEBUG
        assert not logger.propagate


class TestRationals:
    def test_format(self):
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(-2)) == "-2"

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            to_rational(0.5)

    def test_grid(self):
        assert parse_grid("1/2:1, 3/4:1/2") == (
            (Fraction(1, 2), Fraction(1)), (Fraction(3, 4), Fraction(1, 2)))
        with pytest.raises(ValueError):
            parse_grid("1/2")
