"""GF(p) 위의 정확한 dense 선형대수

Hom 공간, 해소(resolution), Ext 계산의 기반입니다. 행렬은 dtype int64 의
numpy 배열이며 모든 성분은 [0, p) 범위의 잉여류로 유지됩니다.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError

logger = logging.getLogger(__name__)

# 행렬 타입 (dtype int64, 성분은 [0, p))
Mat = np.ndarray


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """소수체 GF(p)

    Args:
        p (int): 소수 법 (2, 3, 5 등 작은 값)
    """
    p: int

    def __post_init__(self):
        if not _is_prime(int(self.p)):
            raise ValueError(f"p 는 소수여야 합니다: {self.p}")

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)

    def mat(self, data, shape: Optional[Tuple[int, int]] = None) -> Mat:
        a = np.array(data, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        return a % self.p

    def zeros(self, rows: int, cols: int) -> Mat:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> Mat:
        return np.eye(n, dtype=np.int64)

    def vectors(self, k: int) -> Iterator[Tuple[int, ...]]:
        """GF(p)^k 의 모든 계수 벡터 (사전순)"""
        return itertools.product(range(self.p), repeat=k)


@dataclass(frozen=True)
class SolveResult:
    """rref_solve 결과

    kernel_basis 의 각 원소와 particular 는 (cols × 1) 열벡터입니다.
    """
    rank: int
    kernel_basis: List[Mat] = field(default_factory=list)
    particular: Optional[Mat] = None


def as_mat(a, p: int) -> Mat:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim != 2:
        raise DimensionMismatchError(f"2차원 행렬이 필요합니다: shape={m.shape}")
    return m % p


def as_columns(u, n: int) -> Mat:
    """열벡터 모음을 (n × k) 행렬로 맞춥니다.

    numpy 는 크기 0 배열에 -1 reshape 를 허용하지 않으므로 k 를 직접 계산합니다.
    """
    a = np.asarray(u, dtype=np.int64)
    if a.size == 0:
        cols = a.shape[1] if a.ndim == 2 and a.shape[0] == n else 0
        return np.zeros((n, cols), dtype=np.int64)
    if n == 0 or a.size % n:
        raise DimensionMismatchError(f"{a.shape} 를 {n}행 행렬로 볼 수 없습니다")
    return a.reshape(n, a.size // n)


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"곱셈 차원 불일치: {a.shape} x {b.shape}")
    return (a @ b) % p


def mat_power(a: Mat, k: int, p: int) -> Mat:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while k:
        if k & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        k >>= 1
    return result


def rref(a: Mat, p: int) -> Tuple[Mat, List[int]]:
    """기약 행사다리꼴과 pivot 열 목록을 반환합니다."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            m[others] = (m[others] - np.outer(col[others], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def _kernel_from_rref(r: Mat, pivots: Sequence[int], cols: int, p: int) -> Mat:
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def nullspace(a: Mat, p: int) -> Mat:
    """{x : Ax = 0} 의 기저를 열로 갖는 (cols × k) 행렬"""
    a = as_mat(a, p)
    r, pivots = rref(a, p)
    return _kernel_from_rref(r, pivots, a.shape[1], p)


def rank(a: Mat, p: int) -> int:
    a = as_mat(a, p)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def rref_solve(a: Mat, b: Optional[Mat] = None, p: int = 2) -> SolveResult:
    """Ax = b 를 풀고 핵의 기저를 함께 반환합니다.

    Args:
        a (Mat): 계수 행렬
        b (Optional[Mat]): 우변 (열벡터 또는 여러 열). 없으면 핵만 계산
        p (int): 법

    Returns:
        SolveResult: rank, kernel_basis, particular (해가 없으면 None)
    """
    a = as_mat(a, p)
    rows, cols = a.shape
    if b is None:
        r, pivots = rref(a, p)
        kernel = _kernel_from_rref(r, pivots, cols, p)
        return SolveResult(
            rank=len(pivots),
            kernel_basis=[kernel[:, [j]] for j in range(kernel.shape[1])],
        )

    b = np.asarray(b, dtype=np.int64)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if b.shape[0] != rows:
        raise DimensionMismatchError(f"우변 차원 불일치: A {a.shape}, b {b.shape}")
    b = b % p

    aug = np.hstack([a, b])
    r, pivots = rref(aug, p)
    a_pivots = [c for c in pivots if c < cols]
    kernel = _kernel_from_rref(r, a_pivots, cols, p)

    particular = None
    if len(a_pivots) == len(pivots):
        particular = np.zeros((cols, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(a_pivots):
            particular[pc] = r[i, cols:]

    return SolveResult(
        rank=len(a_pivots),
        kernel_basis=[kernel[:, [j]] for j in range(kernel.shape[1])],
        particular=particular,
    )


def solve(a: Mat, b: Mat, p: int) -> Optional[Mat]:
    """AX = B 의 한 해를 반환합니다. 해가 없으면 None"""
    if a.shape[1] == 0:
        return np.zeros((0, b.shape[1]), dtype=np.int64) if not np.any(b % p) else None
    return rref_solve(a, b, p).particular


def invert(a: Mat, p: int) -> Optional[Mat]:
    """역행렬. 특이행렬이면 None

    Raises:
        DimensionMismatchError: 정사각행렬이 아닌 경우
    """
    a = as_mat(a, p)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"정사각행렬이 아닙니다: {a.shape}")
    n = a.shape[0]
    if n == 0:
        return a.copy()
    r, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        return None
    return r[:, n:].copy()


def column_basis(a: Mat, p: int) -> Mat:
    """열공간의 기저 (a 의 pivot 열들)"""
    a = as_mat(a, p)
    if a.shape[1] == 0:
        return a.copy()
    _, pivots = rref(a, p)
    return a[:, pivots].copy()


def span_contains(basis: Mat, v: Mat, p: int) -> bool:
    return solve(basis, v, p) is not None


def quotient_maps(u: Mat, n: int, p: int) -> Tuple[Mat, Mat]:
    """F^n / span(u) 의 사영과 단면

    u 의 열들이 생성하는 부분공간에 대해, u^T 의 RREF 에서 pivot 이 아닌
    좌표를 몫공간의 좌표로 택합니다.

    Returns:
        Tuple[Mat, Mat]: (proj: q×n, section: n×q), proj @ section = I_q
    """
    u = as_columns(u, n) % p
    eye = np.eye(n, dtype=np.int64)
    if u.shape[1] == 0 or n == 0:
        return eye.copy(), eye.copy()
    r, pivots = rref(u.T, p)
    rows = r[:len(pivots)]
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    reduce = (eye - rows.T @ eye[pivots]) % p
    return reduce[free, :].copy(), eye[:, free].copy()


def is_injective(a: Mat, p: int) -> bool:
    return rank(a, p) == a.shape[1]


def is_surjective(a: Mat, p: int) -> bool:
    return rank(a, p) == a.shape[0]


def block_diag(blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
