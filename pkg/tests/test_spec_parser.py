"""job spec 파서 테스트"""

import pytest

from recollement_verifier.core.errors import SpecParseError
from recollement_verifier.utils.fixtures import job_spec_text
from recollement_verifier.utils.spec_parser import parse_job_spec, resolve_subcat, resolve_triple

SPEC = """\
# A2 위의 support τ-tilting gluing
[algebra]
name = A2
p = 2
vertices = 1, 2
a: 1 -> 2

[recollement]
E = 2

[task]
name = glue_support_tau
dmax = 2
Z_A = D1#0   # 유일한 단순 모듈
Z_C = proj
"""


def test_parse_full_spec():
    spec = parse_job_spec(SPEC)
    assert spec.algebra.name == "A2"
    assert spec.recollement.E == ["2"]
    assert spec.task.name == "glue_support_tau"
    assert spec.task.dmax == 2
    assert spec.task.force is False
    assert spec.task.args["Z_A"].names == ["D1#0"]
    assert spec.task.args["Z_A"].role == "A"
    assert spec.task.args["Z_C"].keyword == "proj"
    assert spec.task.args["Z_C"].role == "C"
    assert spec.build_algebra().dim == 3


def test_fixture_spec_text():
    text = job_spec_text("PROD", "restrict_triple", E=["3"], **{"T": "phi(proj)"})
    spec = parse_job_spec(text)
    assert spec.task.args["T"].via_phi
    assert spec.task.args["T"].role == "B"


def test_resolve_names_and_keywords(universe):
    U = universe("A2")
    spec = parse_job_spec(job_spec_text("A2", "is_support_tau_tilting", M=["D1.0#0", "D1.1#0"]))
    assert resolve_subcat(spec.task.args["M"], U).names() == ["D1.0#0", "D1.1#0"]

    spec = parse_job_spec(job_spec_text("A2", "is_support_tau_tilting", M="none"))
    assert resolve_subcat(spec.task.args["M"], U).names() == []


def test_resolve_triple(universe):
    U = universe("A2")
    spec = parse_job_spec(job_spec_text(
        "A2", "is_tau_cotorsion_torsion_triple",
        **{"T.L": "all", "T.D": "D1.0#0", "T.F": "D0.1#0, D1.1#0"},
    ))
    T = resolve_triple(spec.task.args, "T", U)
    assert T.names() == {"L": ["D0.1#0", "D1.0#0", "D1.1#0"], "D": ["D1.0#0"], "F": ["D0.1#0", "D1.1#0"]}


def test_unknown_name_reports_position(universe):
    spec = parse_job_spec(job_spec_text("A2", "is_wakamatsu_tilting", W="D9.9#0"))
    with pytest.raises(SpecParseError) as info:
        resolve_subcat(spec.task.args["W"], universe("A2"))
    assert info.value.column == 5


@pytest.mark.parametrize("text, line", [
    ("[algebra]\nname = A2\n[task]\nname = no_such_task\n", 4),
    ("[algebra]\nname = A2\n[task]\nname = glue_weak_tau\nZ_A = all\nZ_C = all\n", 4),
    ("[algebra]\nname = A2\n[task]\nname = is_wakamatsu_tilting\n", 4),
    ("[algebra]\nname = A2\n[task]\nname = is_wakamatsu_tilting\nW = proj, D1#0\n", 5),
    ("[algebra]\nname = A2\n[task]\nname = enumerate_indecomposables\ndmax = zero\n", 5),
    ("[algebra]\nname = A2\n[bogus]\n", 3),
    ("stray line\n[algebra]\n", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(SpecParseError) as info:
        parse_job_spec(text)
    assert info.value.line == line


def test_triple_requires_all_parts():
    text = job_spec_text("A2", "is_tau_cotorsion_torsion_triple", **{"T.L": "all", "T.D": "all"})
    with pytest.raises(SpecParseError, match="F"):
        parse_job_spec(text)
