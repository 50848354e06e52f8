"""Bound quiver 대수 테스트"""

import pytest

from recollement_verifier.core.errors import InfiniteDimensionalError, NonAdmissibleError, SpecParseError
from recollement_verifier.core.quivalg import (
    Path,
    build_algebra,
    corner_presentation,
    idempotent_quotient,
    injective_module,
    opposite,
    projective_module,
    simple_module,
)
from recollement_verifier.utils.fixtures import algebra_text, fixture_algebra


@pytest.mark.parametrize("name, dim", [("A2", 3), ("A3", 6), ("LOOP2", 2), ("PROD", 4)])
def test_fixture_dimensions(name, dim):
    assert fixture_algebra(name).dim == dim


def test_cycle_without_relations_is_rejected():
    with pytest.raises(InfiniteDimensionalError):
        fixture_algebra("ALG_CYCLE")


def test_non_homogeneous_relation_is_rejected():
    text = "p = 2\nvertices = 1, 2\na: 1 -> 2\nb: 2 -> 2\nc: 2 -> 2\nrel: a*b - a*b*c"
    with pytest.raises(NonAdmissibleError):
        build_algebra(text)


def test_parse_errors_carry_position():
    with pytest.raises(SpecParseError) as info:
        build_algebra("p = 2\nvertices = 1\nnot an arrow")
    assert info.value.line == 3

    with pytest.raises(SpecParseError):
        build_algebra("vertices = 1, 2\na: 1 -> 2")


def test_relation_kills_paths():
    A = fixture_algebra("LOOP2")
    x = A.quiver.arrow_path("x")
    assert A.multiply(x, x) == {}
    assert [str(p) for p in A.basis] == ["e1", "x"]


def test_path_product_in_a3():
    A = fixture_algebra("A3")
    a, b = A.quiver.arrow_path("a"), A.quiver.arrow_path("b")
    ab = A.multiply(a, b)
    assert len(ab) == 1
    (index, coeff), = ab.items()
    assert A.basis[index] == Path("1", ("a", "b"), "3") and coeff == 1
    assert A.multiply(b, a) == {}


def test_standard_modules_of_a2():
    A = fixture_algebra("A2")
    assert projective_module(A, "1").dim_vector == (1, 1)
    assert projective_module(A, "2").dim_vector == (0, 1)
    assert simple_module(A, "1").dim_vector == (1, 0)
    assert injective_module(A, "1").dim_vector == (1, 0)
    assert injective_module(A, "2").dim_vector == (1, 1)


def test_idempotent_quotient_and_corner():
    A = fixture_algebra("A3")
    Q = idempotent_quotient(A, ["2"])
    assert Q.vertices == ("1", "3")
    assert Q.dim == 2

    C, images = corner_presentation(A, ["1", "3"])
    assert C.vertices == ("1", "3")
    assert C.dim == 3
    assert [(a.source, a.target, a.weight) for a in C.arrows] == [("1", "3", 2)]
    assert images[C.arrows[0].name] == Path("1", ("a", "b"), "3")


def test_degenerate_quotient_is_zero_algebra():
    A = fixture_algebra("A2")
    assert idempotent_quotient(A, ["1", "2"]).is_zero


def test_opposite_reverses_arrows():
    A = fixture_algebra("A2")
    op = opposite(A)
    assert [(a.source, a.target) for a in op.arrows] == [("2", "1")]
    assert op.dim == A.dim


def test_hash_is_stable():
    assert build_algebra(algebra_text("A2")).hash == fixture_algebra("A2").hash
