import json
import math

import numpy as np
import pytest

from entrocap import ValidationError
from entrocap.cli import main, run
from entrocap.specfile import (
    SpecFileError,
    decode_complex_matrix,
    encode_complex_matrix,
    load_spec,
    parse_spec,
)

SPECS = "specs"


def write_spec(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def kraus_doc(ops, constraint=None):
    doc = {
        "schema_version": 1,
        "kind": "kraus",
        "payload": {"kraus": [encode_complex_matrix(op) for op in ops]},
    }
    if constraint is not None:
        doc["constraint"] = constraint
    return doc


class TestEncoding:
    def test_roundtrip(self):
        mat = np.array([[1.0 + 2.0j, 0.0], [-1.5j, 0.25]])
        back = decode_complex_matrix(encode_complex_matrix(mat), "x")
        assert np.abs(back - mat).max() <= 1e-15

    def test_bad_shape(self):
        with pytest.raises(SpecFileError):
            decode_complex_matrix([[1.0, 0.0], [0.0, 1.0]], "x")


class TestParsing:
    def test_example_specs_parse(self):
        for name in ("identity_qubit", "cq_qutrit", "gaussian_attenuator"):
            spec = load_spec(f"{SPECS}/{name}.json")
            assert spec.raw["schema_version"] == 1

    def test_unknown_kind(self):
        with pytest.raises(SpecFileError):
            parse_spec({"schema_version": 1, "kind": "weird", "payload": {}})

    def test_missing_schema_version(self):
        with pytest.raises(SpecFileError):
            parse_spec({"kind": "kraus", "payload": {"kraus": []}})

    def test_number_operator_constraint(self, tmp_path):
        doc = {
            "schema_version": 1,
            "kind": "named",
            "payload": {"name": "attenuator", "params": {"eta": 0.5, "cutoff": 4}},
            "constraint": {"F": "number_operator", "E": 1.0},
        }
        spec = load_spec(write_spec(tmp_path, doc))
        assert spec.constraint.dim == 5
        assert np.allclose(np.diagonal(spec.constraint.operator).real, range(5))

    def test_invariant_violation_is_validation_error(self, tmp_path):
        bad = kraus_doc([np.diag([1.0, 0.5])])
        with pytest.raises(ValidationError):
            load_spec(write_spec(tmp_path, bad))

    def test_constraint_dim_mismatch(self, tmp_path):
        doc = kraus_doc(
            [np.eye(2)],
            constraint={"F": encode_complex_matrix(np.diag([0.0, 1.0, 2.0])), "E": 1.0},
        )
        with pytest.raises(ValidationError):
            load_spec(write_spec(tmp_path, doc))


class TestCliCommands:
    def test_validate_ok(self):
        code, report, human = run("validate", f"{SPECS}/identity_qubit.json", {})
        assert code == 0
        assert report["status"] == "ok"
        assert "channel ok" in human

    def test_cea_bracket(self):
        code, report, _ = run("cea", f"{SPECS}/identity_qubit.json", {})
        assert code == 0
        res = report["results"]
        target = 2.0 * (-(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25)))
        assert res["value_bits"] - 1e-9 <= target <= res["upper_bound_bits"] + 1e-9

    def test_gaussian_classify(self):
        code, report, _ = run("gaussian-classify", f"{SPECS}/gaussian_attenuator.json", {})
        assert code == 0
        res = report["results"]
        assert res["valid"] and not res["cq"] and res["no_discrete_subchannel"]

    def test_gaussian_mi(self):
        code, report, _ = run("mi", f"{SPECS}/gaussian_attenuator.json", {"cutoff": 20})
        assert code == 0
        assert report["results"]["difference_bits"] <= 5e-3

    def test_gaussian_classify_fully_depolarizing(self, tmp_path):
        doc = {
            "schema_version": 1,
            "kind": "gaussian",
            "payload": {
                "K": [[0.0, 0.0], [0.0, 0.0]],
                "l": [0.0, 0.0],
                "alpha": [[0.5, 0.0], [0.0, 0.5]],
                "modes_in": 1,
                "modes_out": 1,
            },
        }
        code, report, _ = run("gaussian-classify", write_spec(tmp_path, doc), {})
        assert code == 0
        res = report["results"]
        assert res["cq"] and res["discrete_type"] and not res["no_discrete_subchannel"]

    def test_truncation_rows(self):
        code, report, _ = run("truncation", f"{SPECS}/cq_qutrit.json", {"ranks": "1,3"})
        assert code == 0
        rows = report["results"]["rows"]
        assert [r["rank"] for r in rows] == [1, 3]
        assert abs(rows[1]["value"] - report["results"]["full"]["value"]) <= 1e-6

    def test_exit_code_parse_failure(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["validate", str(bad)]) == 2
        assert "spec error" in capsys.readouterr().err

    def test_exit_code_invariant_failure(self, tmp_path, capsys):
        doc = kraus_doc([np.diag([1.0, 0.5])])
        path = write_spec(tmp_path, doc)
        assert main(["validate", path]) == 3
        assert "invariant violation" in capsys.readouterr().err

    def test_missing_command_spec(self):
        with pytest.raises(SpecFileError):
            run("cea", None, {})

    def test_entropy_command_defaults_to_maximally_mixed(self):
        code, report, _ = run("entropy", f"{SPECS}/identity_qubit.json", {})
        assert code == 0
        assert abs(report["results"]["input_entropy_bits"] - 1.0) <= 1e-12


class TestReports:
    def test_machine_report_deterministic(self, tmp_path):
        flags = {"seed": 1, "gap_tolerance": 1e-5}
        _, report_a, _ = run("cea", f"{SPECS}/identity_qubit.json", dict(flags))
        _, report_b, _ = run("cea", f"{SPECS}/identity_qubit.json", dict(flags))
        dump_a = json.dumps(report_a, sort_keys=True, indent=2)
        dump_b = json.dumps(report_b, sort_keys=True, indent=2)
        assert dump_a == dump_b

    def test_chi_report_deterministic(self):
        flags = {"seed": 3, "restarts": 2, "max_iterations": 40}
        _, report_a, _ = run("chi", f"{SPECS}/cq_qutrit.json", dict(flags))
        _, report_b, _ = run("chi", f"{SPECS}/cq_qutrit.json", dict(flags))
        assert json.dumps(report_a, sort_keys=True) == json.dumps(report_b, sort_keys=True)

    def test_report_file_written(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["validate", f"{SPECS}/identity_qubit.json", "--report", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["schema_version"] == 1
        assert doc["command"] == "validate"

    def test_report_echoes_inputs_and_seed(self):
        _, report, _ = run("validate", f"{SPECS}/cq_qutrit.json", {"seed": 9})
        assert report["seed"] == 9
        assert report["spec"]["kind"] == "cq"


class TestEnsembleSpec:
    def test_chi_of_given_ensemble(self, tmp_path):
        doc = {
            "schema_version": 1,
            "kind": "named",
            "payload": {"name": "identity", "params": {"dim": 2}},
            "ensemble": {
                "weights": [0.5, 0.5],
                "states": [
                    encode_complex_matrix(np.diag([1.0, 0.0])),
                    encode_complex_matrix(np.diag([0.0, 1.0])),
                ],
            },
        }
        path = write_spec(tmp_path, doc)
        code, report, _ = run("chi", path, {})
        assert code == 0
        assert abs(report["results"]["chi_of_ensemble_bits"] - 1.0) <= 1e-9

    def test_ensemble_dimension_checked(self, tmp_path):
        doc = {
            "schema_version": 1,
            "kind": "named",
            "payload": {"name": "identity", "params": {"dim": 2}},
            "ensemble": {
                "weights": [1.0],
                "states": [encode_complex_matrix(np.eye(3) / 3)],
            },
        }
        with pytest.raises(ValidationError):
            load_spec(write_spec(tmp_path, doc))


class TestSuiteCommand:
    def test_suite_subset_passes(self):
        from entrocap.suite import run_suite

        results = run_suite(seed=0, names=["partial-trace-tensor", "heisenberg-duality", "cq-detection"])
        assert all(ok for _, ok, _ in results)

    def test_full_registry_passes(self):
        from entrocap.suite import run_suite

        results = run_suite(seed=0)
        failures = [(name, detail) for name, ok, detail in results if not ok]
        assert not failures, failures

    def test_suite_failure_exits_nonzero(self, monkeypatch, capsys):
        import entrocap.suite as suite_mod

        broken = dict(suite_mod.PROPERTIES)
        broken["always-fails"] = lambda seed=0: (False, "intentional failure")
        monkeypatch.setattr(suite_mod, "PROPERTIES", {"always-fails": broken["always-fails"]})
        assert main(["suite"]) == 3
        out = capsys.readouterr().out
        assert "FAIL always-fails" in out
