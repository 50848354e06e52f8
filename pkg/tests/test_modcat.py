"""모듈 범주 테스트: Hom, Ext, 분해, universe 열거"""

from collections import Counter

import numpy as np
import pytest

from recollement_verifier.core.errors import CapExceededError, DomainMismatchError
from recollement_verifier.core.modcat import (
    ExtVerdict,
    check_module_identities,
    decompose,
    direct_sum,
    enumerate_indecomposables,
    euler_form,
    ext_dim,
    ext_vanishes_all,
    hom_dim,
    is_isomorphic,
    is_projective,
    projective_cover,
    projectives,
    quotient,
    simples,
    submodule,
    syzygy,
)
from recollement_verifier.report import Verdict


@pytest.fixture
def a2(algebra):
    A = algebra("A2")
    (S1, S2), (P1, P2) = simples(A), projectives(A)
    return A, S1, S2, P1, P2


def test_hom_dimensions(a2):
    _, S1, S2, P1, P2 = a2
    assert hom_dim(P1, S1) == 1
    assert hom_dim(S2, P1) == 1
    assert hom_dim(S1, P1) == 0
    assert hom_dim(P1, P1) == 1


def test_hom_across_algebras_is_rejected(a2, algebra):
    _, S1, *_ = a2
    with pytest.raises(DomainMismatchError):
        hom_dim(S1, simples(algebra("A3"))[0])


def test_projective_cover_and_syzygy(a2):
    _, S1, S2, P1, P2 = a2
    cover = projective_cover(S1)
    assert cover.module.dim_vector == (1, 1)
    assert cover.epi.is_surjective()
    assert is_isomorphic(syzygy(S1), S2) is not None
    assert syzygy(P1).is_zero
    assert is_projective(P1) and is_projective(P2)
    assert not is_projective(S1)


def test_ext_dimensions(a2):
    _, S1, S2, P1, _ = a2
    assert ext_dim(S1, S2, 1) == 1
    assert ext_dim(S2, S1, 1) == 0
    assert ext_dim(S1, S2, 2) == 0
    assert ext_dim(S1, P1, 0) == 0


def test_ext_certificates(a2, universe, algebra):
    _, S1, S2, _, _ = a2
    cert = ext_vanishes_all(S1, S2)
    assert cert.verdict == ExtVerdict.NONZERO
    assert cert.first_nonzero == 1
    assert ext_vanishes_all(S1, S1).verdict == ExtVerdict.VANISHES_ALL

    U = universe("LOOP2")
    S = simples(algebra("LOOP2"))[0]
    loop = ext_vanishes_all(S, S, universe=U)
    assert loop.verdict == ExtVerdict.NONZERO
    assert loop.period == 1


def test_decompose_groups_isomorphic_summands(a2):
    _, _, S2, P1, _ = a2
    M = direct_sum([P1, S2, S2]).module
    parts = sorted((X.dim_vector, m) for X, m in decompose(M))
    assert parts == [((0, 1), 2), ((1, 1), 1)]


@pytest.mark.parametrize("name, size", [("A2", 3), ("A3", 6), ("LOOP2", 2), ("PROD", 4)])
def test_universe_sizes(universe, name, size):
    assert len(universe(name)) == size


def test_universe_canonical_names(universe):
    assert universe("A2").names == ("D0.1#0", "D1.0#0", "D1.1#0")
    assert universe("PROD").names == ("D0.0.1#0", "D0.1.0#0", "D1.0.0#0", "D1.1.0#0")


def test_universe_classify(universe, algebra):
    U = universe("A2")
    _, (P1, P2) = simples(algebra("A2")), projectives(algebra("A2"))
    counts = U.classify(direct_sum([P1, P2, P2]).module)
    assert counts == {U.index("D1.1#0"): 1, U.index("D0.1#0"): 2}
    assert U.projective_indices() == frozenset({U.index("D1.1#0"), U.index("D0.1#0")})


def test_universe_is_deterministic(algebra):
    first = enumerate_indecomposables(algebra("A3"), 3)
    second = enumerate_indecomposables(algebra("A3"), 3)
    assert first.describe() == second.describe()


def test_enumeration_cap(algebra):
    with pytest.raises(CapExceededError):
        enumerate_indecomposables(algebra("A3"), 3, cap=10)


def test_subquotients_of_simple_with_zero_vertex(a2):
    _, S1, S2, P1, _ = a2
    sub = submodule(S1, {"1": np.zeros((1, 0), dtype=np.int64)})
    assert sub.module.is_zero
    q = quotient(S1, {})
    assert q.module.dim_vector == (1, 0)
    assert q.projection.is_isomorphism()
    assert quotient(P1, {"1": np.eye(1, dtype=np.int64), "2": np.eye(1, dtype=np.int64)}).module.is_zero
    assert projective_cover(S2).module.dim_vector == (0, 1)
    assert syzygy(S2).is_zero


HEREDITARY = ["A2", "A3", "PROD"]
ALL_FIXTURES = HEREDITARY + ["LOOP2"]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_hom_from_projective_is_vertex_dimension(universe, algebra, name):
    A = algebra(name)
    for M in universe(name):
        for v, P in zip(A.vertices, projectives(A)):
            assert hom_dim(P, M) == M.dims[v]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_ext_from_projective_vanishes(universe, algebra, name):
    A = algebra(name)
    for M in universe(name):
        for P in projectives(A):
            assert [ext_dim(P, M, i) for i in (1, 2, 3)] == [0, 0, 0]


def test_euler_form_values(algebra):
    A = algebra("A2")
    assert euler_form(A, (1, 0), (0, 1)) == -1
    assert euler_form(A, (0, 1), (1, 0)) == 0
    assert euler_form(A, (1, 1), (1, 1)) == 1


@pytest.mark.parametrize("name", HEREDITARY)
def test_euler_form_on_hereditary(universe, algebra, name):
    A = algebra(name)
    for M in universe(name):
        for N in universe(name):
            assert hom_dim(M, N) - ext_dim(M, N, 1) == euler_form(A, M.dim_vector, N.dim_vector)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_dimension_shift(universe, name):
    U = universe(name)
    for M in U:
        omega = syzygy(M)
        for N in U:
            for i in (2, 3):
                assert ext_dim(M, N, i) == ext_dim(omega, N, i - 1)


def _classes(U, M):
    counts = Counter()
    for X, m in decompose(M):
        (i,) = U.classify(X)
        counts[i] += m
    return counts


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_decompose_is_additive(universe, algebra, name):
    U = universe(name)
    for X in U:
        for Y in U:
            summed = direct_sum([X, Y], algebra=algebra(name)).module
            assert _classes(U, summed) == _classes(U, X) + _classes(U, Y)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_module_identities_pass_on_universe(universe, name):
    result = check_module_identities(universe(name))
    assert result.verdict == Verdict.PASS
    asserted = {e.condition for e in result.entries if e.asserted}
    assert "dim Ext^i(M, N) = dim Ext^{i-1}(ΩM, N)" in asserted
    assert ("dim Hom − dim Ext¹ = Euler form" in asserted) == (name != "LOOP2")


def test_module_identities_count_pairs(universe):
    U = universe("A2")
    result = check_module_identities(U)
    euler = [e for e in result.entries if e.condition == "dim Hom − dim Ext¹ = Euler form"]
    assert len(euler) == len(U) ** 2
    assert {e.subject for e in euler} >= {"(D1.0#0, D0.1#0)"}
