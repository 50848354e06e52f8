"""glue / restrict 연산과 gate 테스트"""

import pytest

from recollement_verifier.core.errors import DomainMismatchError
from recollement_verifier.core.glue import (
    GLUE_OPERATIONS,
    coresolution_certificate,
    glue_by_membership,
    glue_contravariantly_finite,
    glue_support_tau,
    glue_triple,
    glue_wakamatsu,
    glue_weak_tau,
    restrict_contravariantly_finite,
    restrict_self_orthogonal,
    restrict_support_tau,
    restrict_triple,
    restrict_wakamatsu,
    restrict_weak_tau,
    WAKAMATSU_FILTERS,
)
from recollement_verifier.core.subcat import Subcat
from recollement_verifier.core.tilt import enumerate_support_tau_tilting, phi
from recollement_verifier.report import JobStatus, Verdict

# PROD = A2 × k, E = {3}
S3, S2, S1, P1 = "D0.0.1#0", "D0.1.0#0", "D1.0.0#0", "D1.1.0#0"


@pytest.fixture
def prod(recollement):
    return recollement("PROD", "3")


def test_operation_registry():
    assert len(GLUE_OPERATIONS) == 11
    assert GLUE_OPERATIONS["glue_wakamatsu"] is glue_wakamatsu


def test_glue_support_tau_projectives(prod):
    R, U = prod
    job = glue_support_tau(R, U, Subcat.projectives(U.A), Subcat.whole(U.C))
    assert job.status == JobStatus.OK
    assert job.result["glued"] == [S3, S2, P1]
    assert job.result["coincides_with_i_shriek_j_class"]
    assert job.verdict == Verdict.PASS


def test_support_tau_round_trip(prod):
    R, U = prod
    found = enumerate_support_tau_tilting(U.B)
    assert len(found) == 10
    for M in found:
        restricted = restrict_support_tau(R, U, M)
        assert restricted.status == JobStatus.OK, restricted.failed_hypotheses
        M_A, M_C = restricted.output
        glued = glue_support_tau(R, U, M_A, M_C)
        assert glued.output.members == M.members


def test_triple_round_trip(prod):
    R, U = prod
    for M in enumerate_support_tau_tilting(U.B):
        T = phi(M)
        restricted = restrict_triple(R, U, T)
        assert restricted.status == JobStatus.OK
        T_A, T_C = restricted.output
        glued = glue_triple(R, U, T_A, T_C)
        assert glued.result["Z"] == M.names()
        assert glued.output.names() == T.names()
        assert glued.verdict == Verdict.PASS


def test_glue_wakamatsu_with_coresolutions(prod):
    R, U = prod
    X_A, X_C = Subcat.projectives(U.A), Subcat.projectives(U.C)
    job = glue_wakamatsu(R, U, X_A, X_C)
    assert job.result["glued"] == [S3, S2, P1]
    assert job.verdict == Verdict.PASS
    kinds = {c.kind for c in job.certificates}
    assert "coresolution" in kinds

    cert = coresolution_certificate(R, U, U.B[U.B.index(P1)], X_A, X_C, job.output)
    assert cert.status == "VALID"
    assert cert.closure == "finite"
    assert cert.split


def test_glue_by_membership_checks_universes(prod):
    R, U = prod
    with pytest.raises(DomainMismatchError):
        glue_by_membership(R, U, Subcat.whole(U.C), Subcat.whole(U.C), WAKAMATSU_FILTERS)


def test_glue_contravariantly_finite(prod):
    R, U = prod
    job = glue_contravariantly_finite(R, U, Subcat.whole(U.A), Subcat.whole(U.C))
    assert job.result["glued"] == [S3, S2, S1, P1]
    assert job.verdict == Verdict.PASS


def test_restrict_wakamatsu(prod):
    R, U = prod
    job = restrict_wakamatsu(R, U, Subcat.projectives(U.B))
    assert job.status == JobStatus.OK
    assert job.result == {"A": ["D0.1#0", "D1.1#0"], "C": ["D1#0"]}
    assert job.verdict == Verdict.PASS


def test_weak_tau_refused_without_exactness(recollement):
    R, U = recollement("A2", "1")
    job = glue_weak_tau(R, U, Subcat.whole(U.A), Subcat.whole(U.C))
    assert job.refused
    assert job.output is None
    assert job.verification == []
    assert [h.name for h in job.failed_hypotheses] == ["i* exact"]


def test_forced_job_is_unsound(recollement):
    R, U = recollement("A2", "1")
    job = glue_weak_tau(R, U, Subcat.whole(U.A), Subcat.whole(U.C), force=True)
    assert job.status == JobStatus.UNSOUND
    assert job.output is not None
    assert any(note.startswith("forced past failed hypotheses") for note in job.notes)


def test_restrict_wakamatsu_closure_refusal(recollement):
    R, U = recollement("A2", "1")
    job = restrict_wakamatsu(R, U, Subcat.projectives(U.B))
    assert job.refused
    by_name = {h.name: h.verdict for h in job.hypotheses}
    assert by_name["i^! exact"] == Verdict.PASS
    assert by_name["Y is Wakamatsu tilting"] == Verdict.PASS
    assert by_name["j_*j*(Y) ⊆ Y"] == Verdict.FAIL


def _support_tau_pairs(U):
    return [(Z_A, Z_C) for Z_A in enumerate_support_tau_tilting(U.A) for Z_C in enumerate_support_tau_tilting(U.C)]


def test_weak_tau_glue_then_restrict(prod):
    R, U = prod
    pairs = _support_tau_pairs(U)
    assert len(pairs) == 10
    for Z_A, Z_C in pairs:
        glued = glue_weak_tau(R, U, Z_A, Z_C)
        assert glued.status == JobStatus.OK, glued.failed_hypotheses
        assert glued.verdict == Verdict.PASS
        restricted = restrict_weak_tau(R, U, glued.output)
        assert restricted.status == JobStatus.OK, restricted.failed_hypotheses
        Y_A, Y_C = restricted.output
        assert (Y_A.members, Y_C.members) == (Z_A.members, Z_C.members)


def test_weak_tau_restrict_then_glue(prod):
    R, U = prod
    for M in enumerate_support_tau_tilting(U.B):
        restricted = restrict_weak_tau(R, U, M)
        assert restricted.status == JobStatus.OK, restricted.failed_hypotheses
        assert restricted.verdict == Verdict.PASS
        glued = glue_weak_tau(R, U, *restricted.output)
        assert glued.output.members == M.members


def test_weak_tau_agrees_with_support_tau_on_product(prod):
    R, U = prod
    for Z_A, Z_C in _support_tau_pairs(U):
        weak = glue_weak_tau(R, U, Z_A, Z_C)
        strong = glue_support_tau(R, U, Z_A, Z_C)
        assert weak.output.members == strong.output.members


def test_restrict_weak_tau_projectives(prod):
    R, U = prod
    job = restrict_weak_tau(R, U, Subcat.projectives(U.B))
    assert job.result == {"A": ["D0.1#0", "D1.1#0"], "C": ["D1#0"]}
    assert job.verdict == Verdict.PASS


def test_restrict_self_orthogonal(prod):
    R, U = prod
    job = restrict_self_orthogonal(R, U, Subcat.projectives(U.B))
    assert job.status == JobStatus.OK
    assert [h.verdict for h in job.hypotheses] == [Verdict.PASS] * 4
    assert job.result == {"A": ["D0.1#0", "D1.1#0"], "C": ["D1#0"]}
    assert job.verdict == Verdict.PASS


def test_restrict_self_orthogonal_rejects_non_orthogonal(prod):
    R, U = prod
    Y = Subcat.from_names(U.B, [S1, S2])
    job = restrict_self_orthogonal(R, U, Y)
    assert job.refused
    assert [h.name for h in job.failed_hypotheses] == ["Y is self-orthogonal"]


def test_restrict_contravariantly_finite(prod):
    R, U = prod
    job = restrict_contravariantly_finite(R, U, Subcat.whole(U.B))
    assert job.status == JobStatus.OK
    assert job.result == {"A": ["D0.1#0", "D1.0#0", "D1.1#0"], "C": ["D1#0"]}
    assert job.verdict == Verdict.PASS

    glued = glue_contravariantly_finite(R, U, *job.output)
    assert glued.output.members == Subcat.whole(U.B).members
