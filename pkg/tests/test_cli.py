"""배치 front end 테스트: 종료 코드, 리포트, 결정성"""

import json

import pytest

from recollement_verifier.cli import main, run, run_spec_text
from recollement_verifier.core.glue import GLUE_OPERATIONS
from recollement_verifier.report import JobStatus, Verdict
from recollement_verifier.utils.fixtures import job_spec_text
from recollement_verifier.utils.spec_parser import TASKS

BOTH_EXACT_TASKS = {
    "glue_wakamatsu": {"X_A": "proj", "X_C": "proj"},
    "glue_weak_tau": {"Z_A": "all", "Z_C": "all"},
    "glue_support_tau": {"Z_A": "proj", "Z_C": "all"},
    "glue_contravariantly_finite": {"Z_A": "all", "Z_C": "all"},
    "glue_triple": {"T_A": "phi(proj)", "T_C": "phi(all)"},
    "restrict_weak_tau": {"Y": "proj"},
    "restrict_support_tau": {"Y": "proj"},
    "restrict_contravariantly_finite": {"Y": "all"},
    "restrict_triple": {"T": "phi(proj)"},
}

I_SHRIEK_TASKS = {
    "restrict_wakamatsu": {"Y": "proj"},
    "restrict_self_orthogonal": {"Y": "proj"},
}

DETERMINISM_TASKS = {
    "check_axioms": {},
    "functor_exactness": {},
    "ext_adjunction_check": {},
    "canonical_ses": {"object": "all"},
    "enumerate_indecomposables": {},
    "enumerate_support_tau_tilting": {},
    "is_wakamatsu_tilting": {"W": "proj"},
    "is_weak_support_tau_tilting": {"M": "proj"},
    "is_support_tau_tilting": {"M": "proj"},
    "is_tau_cotorsion_torsion_triple": {"T": "phi(proj)"},
    **BOTH_EXACT_TASKS,
    **I_SHRIEK_TASKS,
}


def test_check_axioms_passes():
    report = run_spec_text(job_spec_text("A2", "check_axioms", E=["2"]))
    assert report.status == JobStatus.OK
    assert report.exit_code() == 0
    assert set(report.universe) == {"B", "A", "C"}
    assert [h.name for h in report.hypotheses] == ["i* exact", "i^! exact", "j_! exact", "j_* exact"]
    assert report.result["recollement"]["E"] == ["2"]


def test_gate_refusal_exit_code():
    text = job_spec_text("A2", "glue_weak_tau", E=["1"], Z_A="all", Z_C="all")
    report = run_spec_text(text)
    assert report.status == JobStatus.REFUSED
    assert report.exit_code() == 2
    assert "glued" not in report.result

    forced = run_spec_text(text, force=True)
    assert forced.status == JobStatus.UNSOUND
    assert forced.exit_code() == 1
    assert forced.run["parameters"]["force"] is True
    assert forced.result["filters"] == ["i^!", "j*"]


def _assert_refused(report, failed):
    assert report.status == JobStatus.REFUSED
    assert report.exit_code() == 2
    assert failed in [h.name for h in report.hypotheses if h.verdict != Verdict.PASS]
    assert not set(report.result) - {"filters"}
    assert report.verification == []


def test_gated_operations_cover_glue_operations():
    assert set(BOTH_EXACT_TASKS) | set(I_SHRIEK_TASKS) == set(GLUE_OPERATIONS)


@pytest.mark.parametrize("E, failed", [(["1"], "i* exact"), (["2"], "i^! exact")])
@pytest.mark.parametrize("task", sorted(BOTH_EXACT_TASKS))
def test_both_exact_operations_refused(task, E, failed):
    report = run_spec_text(job_spec_text("A2", task, E=E, **BOTH_EXACT_TASKS[task]))
    _assert_refused(report, failed)


@pytest.mark.parametrize("E, failed", [(["1"], "j_*j*(Y) ⊆ Y"), (["2"], "i^! exact")])
@pytest.mark.parametrize("task", sorted(I_SHRIEK_TASKS))
def test_restrict_by_i_shriek_refused(task, E, failed):
    report = run_spec_text(job_spec_text("A2", task, E=E, **I_SHRIEK_TASKS[task]))
    _assert_refused(report, failed)


@pytest.mark.parametrize("name, dmax, size", [
    ("A2", 2, 3), ("A2", 3, 3), ("LOOP2", 3, 2), ("A3", 3, 6), ("PROD", 3, 4),
])
def test_enumerate_indecomposables(name, dmax, size):
    report = run_spec_text(job_spec_text(name, "enumerate_indecomposables", dmax=dmax))
    assert report.exit_code() == 0
    assert report.result["size"] == size
    assert report.universe["B"].size == size


def test_enumerate_support_tau_tilting():
    report = run_spec_text(job_spec_text("A2", "enumerate_support_tau_tilting"))
    assert report.exit_code() == 0
    assert report.result["count"] == 5
    assert [] in report.result["subcats"]
    assert any("empty subcategory" in note for note in report.notes)


def test_membership_tasks():
    report = run_spec_text(job_spec_text("A2", "is_wakamatsu_tilting", W="proj"))
    assert report.result["holds"] is True
    assert report.exit_code() == 0

    report = run_spec_text(job_spec_text("A2", "is_support_tau_tilting", M=["D0.1#0", "D1.0#0"]))
    assert report.result["holds"] is False
    assert report.exit_code() == 1


def test_canonical_ses_task():
    refused = run_spec_text(job_spec_text("A2", "canonical_ses", E=["1"], object="all"))
    assert refused.exit_code() == 2
    assert refused.notes == ["refused: i* exact is FAIL"]

    report = run_spec_text(job_spec_text("A2", "canonical_ses", E=["1"], object="all", side="right"))
    assert report.exit_code() == 0
    assert len(report.result["sequences"]) == 3


def test_glue_triple_task():
    report = run_spec_text(job_spec_text("PROD", "glue_triple", E=["3"], T_A="phi(proj)", T_C="phi(all)"))
    assert report.exit_code() == 0
    assert report.result["Z"] == ["D0.0.1#0", "D0.1.0#0", "D1.1.0#0"]


def test_determinism_covers_every_task():
    assert set(DETERMINISM_TASKS) == set(TASKS)


@pytest.mark.parametrize("task", sorted(DETERMINISM_TASKS))
def test_determinism(task):
    E = ["3"] if TASKS[task].needs_recollement else None
    text = job_spec_text("PROD", task, E=E, **DETERMINISM_TASKS[task])
    first, second = run_spec_text(text), run_spec_text(text)
    assert first.status != JobStatus.ERROR
    assert first.comparable() == second.comparable()
    assert "run" not in first.comparable()


def test_errors_become_reports():
    report = run_spec_text(job_spec_text("ALG_CYCLE", "enumerate_indecomposables"))
    assert report.status == JobStatus.ERROR
    assert report.exit_code() == 1

    report = run_spec_text("[task]\nname = check_axioms\n")
    assert report.status == JobStatus.ERROR
    assert report.notes


def test_run_writes_report(tmp_path):
    spec = tmp_path / "job.spec"
    spec.write_text(job_spec_text("A2", "check_axioms", E=["2"]), encoding="utf-8")
    out = tmp_path / "report.json"

    assert run(str(spec), str(out)) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["task"] == "check_axioms"
    assert payload["run"]["parameters"]["dmax"] == 3


def test_run_missing_file(tmp_path):
    assert run(str(tmp_path / "missing.spec")) == 1


def test_main_exit_code(tmp_path, capsys):
    spec = tmp_path / "job.spec"
    spec.write_text(job_spec_text("A2", "glue_weak_tau", E=["1"], Z_A="all", Z_C="all"), encoding="utf-8")
    with pytest.raises(SystemExit) as info:
        main(["--spec", str(spec), "--summary"])
    assert info.value.code == 2
    captured = capsys.readouterr()
    assert json.loads(captured.out)["status"] == "REFUSED"
    assert "REFUSED" in captured.err
