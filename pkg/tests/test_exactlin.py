"""GF(p) 선형대수 테스트"""

import numpy as np
import pytest

from recollement_verifier.core.errors import DimensionMismatchError
from recollement_verifier.core.exactlin import (
    FieldSpec,
    as_columns,
    invert,
    mat_mul,
    mat_power,
    nullspace,
    quotient_maps,
    rank,
    rref,
    rref_solve,
    solve,
)


def test_field_rejects_composite_modulus():
    with pytest.raises(ValueError):
        FieldSpec(4)
    assert FieldSpec(3).inv(2) == 2


def test_rref_over_gf2():
    r, pivots = rref(np.array([[1, 1, 0], [1, 0, 1]]), 2)
    assert pivots == [0, 1]
    assert r.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_nullspace_is_annihilated():
    a = np.array([[1, 2, 0], [0, 1, 1]])
    k = nullspace(a, 3)
    assert k.shape == (3, 1)
    assert not np.any(mat_mul(a, k, 3))


def test_rank_of_empty_and_full():
    assert rank(np.zeros((0, 3), dtype=np.int64), 2) == 0
    assert rank(np.eye(3, dtype=np.int64), 5) == 3


def test_rref_solve_consistent_and_inconsistent():
    a = np.array([[1, 1], [0, 1]])
    result = rref_solve(a, np.array([1, 0]), 2)
    assert result.rank == 2
    assert result.kernel_basis == []
    assert mat_mul(a, result.particular, 2).ravel().tolist() == [1, 0]

    singular = np.array([[1, 1], [1, 1]])
    assert solve(singular, np.array([[1], [0]]), 2) is None
    assert len(rref_solve(singular, p=2).kernel_basis) == 1


def test_rref_solve_rejects_wrong_rhs():
    with pytest.raises(DimensionMismatchError):
        rref_solve(np.eye(2, dtype=np.int64), np.array([1, 0, 0]), 2)


def test_invert():
    a = np.array([[1, 1], [0, 1]])
    inv = invert(a, 2)
    assert mat_mul(a, inv, 2).tolist() == [[1, 0], [0, 1]]
    assert invert(np.array([[1, 1], [1, 1]]), 2) is None
    with pytest.raises(DimensionMismatchError):
        invert(np.zeros((2, 3), dtype=np.int64), 2)


def test_mat_power_nilpotent():
    x = np.array([[0, 0], [1, 0]])
    assert not np.any(mat_power(x, 2, 2))
    assert mat_power(x, 0, 2).tolist() == [[1, 0], [0, 1]]


def test_quotient_maps_kill_subspace():
    u = np.array([[1], [1], [0]])
    proj, section = quotient_maps(u, 3, 2)
    assert proj.shape == (2, 3)
    assert not np.any(mat_mul(proj, u, 2))
    assert mat_mul(proj, section, 2).tolist() == [[1, 0], [0, 1]]


def test_as_columns_accepts_empty_spaces():
    assert as_columns(np.zeros((0, 1), dtype=np.int64), 0).shape == (0, 1)
    assert as_columns(np.zeros(0, dtype=np.int64), 3).shape == (3, 0)
    assert as_columns([1, 0, 1], 3).tolist() == [[1], [0], [1]]
    with pytest.raises(DimensionMismatchError):
        as_columns([1, 0], 3)


def test_quotient_maps_of_zero_dimensional_space():
    proj, section = quotient_maps(np.zeros((0, 1), dtype=np.int64), 0, 2)
    assert proj.shape == (0, 0)
    assert section.shape == (0, 0)

    proj, section = quotient_maps(np.zeros((2, 0), dtype=np.int64), 2, 2)
    assert mat_mul(proj, section, 2).tolist() == [[1, 0], [0, 1]]
