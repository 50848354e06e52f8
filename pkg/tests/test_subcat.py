"""부분범주 테스트: Fac, 직교, 근사, torsion pair"""

import pytest

from recollement_verifier.core.errors import DomainMismatchError
from recollement_verifier.core.modcat import direct_sum, projectives
from recollement_verifier.core.subcat import (
    PerpKind,
    Side,
    Subcat,
    approximation,
    fac,
    is_functorially_finite,
    is_torsion_pair,
    make_subcat,
    perp,
)
from recollement_verifier.report import Verdict

S2, S1, P1 = "D0.1#0", "D1.0#0", "D1.1#0"


@pytest.fixture
def U(universe):
    return universe("A2")


def test_projectives_keyword(U):
    assert Subcat.projectives(U).names() == [S2, P1]
    assert Subcat.whole(U).names() == [S2, S1, P1]
    assert Subcat.empty(U).names() == []


def test_make_subcat_uses_summands(U, algebra):
    P1_, P2_ = projectives(algebra("A2"))
    S = make_subcat(U, [direct_sum([P1_, P2_]).module])
    assert S.names() == [S2, P1]


def test_set_operations(U, universe):
    a = Subcat.from_names(U, [S1])
    b = Subcat.from_names(U, [S1, P1])
    assert a.union(b).names() == [S1, P1]
    assert a.intersection(b).names() == [S1]
    assert a.issubset(b)
    with pytest.raises(DomainMismatchError):
        a.union(Subcat.whole(universe("A3")))


def test_fac(U):
    assert fac(Subcat.from_names(U, [P1])).names() == [S1, P1]
    assert fac(Subcat.from_names(U, [S2])).names() == [S2]


def test_perp(U):
    hom_right = perp(Subcat.from_names(U, [S1]), PerpKind.ZERO, Side.RIGHT)
    assert hom_right.subcat.names() == [S2, P1]

    ext_left = perp(Subcat.from_names(U, [S2]), PerpKind.ALL, Side.LEFT)
    assert ext_left.subcat.names() == [S2, P1]
    assert not ext_left.is_flagged

    ext1_left = perp(Subcat.from_names(U, [S2]), PerpKind.ONE, Side.LEFT)
    assert ext1_left.subcat.names() == [S2, P1]


def test_right_approximation_of_simple(U):
    cert = approximation(U[U.index(S1)], Subcat.projectives(U), Side.RIGHT)
    assert cert.verified
    assert cert.labels == [P1]
    assert cert.map.is_surjective()


def test_left_approximation_can_be_trivial(U):
    cert = approximation(U[U.index(S1)], Subcat.from_names(U, [S2]), Side.LEFT)
    assert cert.trivial
    assert cert.verified


def test_functorial_finiteness(U):
    assert is_functorially_finite(Subcat.projectives(U), Side.RIGHT).verdict == Verdict.PASS
    empty = is_functorially_finite(Subcat.empty(U), Side.RIGHT)
    assert empty.verdict == Verdict.PASS
    assert any(e.verdict == Verdict.FLAGGED and not e.asserted for e in empty.entries)


def test_torsion_pairs(U):
    assert is_torsion_pair(Subcat.from_names(U, [S1, P1]), Subcat.from_names(U, [S2])).holds
    assert is_torsion_pair(Subcat.from_names(U, [S2]), Subcat.from_names(U, [S1])).holds

    broken = is_torsion_pair(Subcat.from_names(U, [P1]), Subcat.from_names(U, [S2]))
    assert broken.verdict == Verdict.FAIL
    assert any(e.subject == S1 and e.verdict == Verdict.FAIL for e in broken.entries)
