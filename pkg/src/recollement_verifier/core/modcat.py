"""유한차원 오른쪽 모듈의 범주

Hom 공간, (여)핵, 직합 분해, 사영 덮개와 syzygy, Ext 차원, 모든 차수에
대한 Ext 소멸 인증서, 그리고 직분해 불가능 모듈의 전수 열거(Universe).
"""

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..config import ENUM_CAP, ISO_SEARCH_CAP
from ..report import CheckResult, Verdict, VerificationEntry, verdict_of
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    DomainMismatchError,
    MorphismError,
    OutsideUniverseError,
    RelationViolationError,
    UndecidedError,
)
from .exactlin import (
    Mat,
    as_columns,
    block_diag,
    column_basis,
    invert,
    mat_power,
    nullspace,
    quotient_maps,
    rank,
    solve,
)
from .quivalg import BoundQuiverAlgebra, Path, projective_module, simple_module

logger = logging.getLogger(__name__)


def _zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def _frozen(m: Mat) -> Mat:
    m.setflags(write=False)
    return m


def _path_matrix(algebra: BoundQuiverAlgebra, dims: Dict[str, int], maps: Dict[str, Mat], path: Path) -> Mat:
    p = algebra.p
    result = np.eye(dims[path.start], dtype=np.int64)
    for name in path.arrows:
        result = (maps[name] @ result) % p
    return result


def satisfies_relations(algebra: BoundQuiverAlgebra, dims: Dict[str, int], maps: Dict[str, Mat]) -> bool:
    p = algebra.p
    for rel in algebra.relations:
        start, end = rel[0][1].start, rel[0][1].end
        total = _zeros(dims[end], dims[start])
        for c, path in rel:
            total = (total + c * _path_matrix(algebra, dims, maps, path)) % p
        if total.any():
            return False
    return True


# ============================================================
# Module / ModuleMap
# ============================================================

@dataclass(frozen=True, eq=False)
class Module:
    """오른쪽 A-모듈 (quiver 표현)

    같음과 해시는 (대수, 차원, arrow 행렬)로 정해지며 name 은 표시용입니다.
    """
    algebra: BoundQuiverAlgebra
    dims: Dict[str, int]
    arrow_maps: Dict[str, Mat]
    name: str = ""

    def __post_init__(self):
        A = self.algebra
        unknown = set(self.dims) - set(A.vertices)
        if unknown:
            raise DimensionMismatchError(f"선언되지 않은 vertex: {sorted(unknown)}")
        unknown = set(self.arrow_maps) - set(A.quiver.arrow_by_name)
        if unknown:
            raise DimensionMismatchError(f"선언되지 않은 arrow: {sorted(unknown)}")

        dims = {v: int(self.dims.get(v, 0)) for v in A.vertices}
        maps = {}
        for a in A.arrows:
            shape = (dims[a.target], dims[a.source])
            m = self.arrow_maps.get(a.name)
            if m is None:
                m = _zeros(*shape)
            else:
                m = np.asarray(m, dtype=np.int64)
                if m.size == 0 and shape[0] * shape[1] == 0:
                    m = _zeros(*shape)
                elif m.shape != shape:
                    raise DimensionMismatchError(f"arrow {a.name}: 행렬 shape {m.shape} != {shape}")
                m = m % A.p
            maps[a.name] = _frozen(m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "arrow_maps", maps)

        if not satisfies_relations(A, dims, maps):
            raise RelationViolationError(f"모듈 {self.name or self.dim_vector} 이 관계식을 만족하지 않습니다")

    @cached_property
    def key(self) -> tuple:
        A = self.algebra
        return (
            id(A),
            self.dim_vector,
            tuple(self.arrow_maps[a.name].tobytes() for a in A.arrows),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Module) and other.algebra is self.algebra and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Module({self.name or '?'}, dims={self.dim_vector})"

    @property
    def p(self) -> int:
        return self.algebra.p

    @cached_property
    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dim_vector)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Path) -> Mat:
        return _path_matrix(self.algebra, self.dims, self.arrow_maps, path)

    def renamed(self, name: str) -> "Module":
        return replace(self, name=name)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: Module
    target: Module
    vertex_maps: Dict[str, Mat]

    def __post_init__(self):
        if self.source.algebra is not self.target.algebra:
            raise DomainMismatchError("서로 다른 대수 위의 모듈 사이의 사상입니다")
        A = self.source.algebra
        p = A.p
        maps = {}
        for v in A.vertices:
            shape = (self.target.dims[v], self.source.dims[v])
            m = self.vertex_maps.get(v)
            if m is None or (np.asarray(m).size == 0 and shape[0] * shape[1] == 0):
                m = _zeros(*shape)
            else:
                m = np.asarray(m, dtype=np.int64) % p
                if m.shape != shape:
                    raise DimensionMismatchError(f"vertex {v}: 사상 shape {m.shape} != {shape}")
            maps[v] = _frozen(m)
        object.__setattr__(self, "vertex_maps", maps)
        for a in A.arrows:
            lhs = (self.target.arrow_maps[a.name] @ maps[a.source]) % p
            rhs = (maps[a.target] @ self.source.arrow_maps[a.name]) % p
            if not np.array_equal(lhs, rhs):
                raise MorphismError(f"arrow {a.name} 에서 교환하지 않습니다")

    @property
    def algebra(self) -> BoundQuiverAlgebra:
        return self.source.algebra

    @property
    def p(self) -> int:
        return self.source.algebra.p

    @classmethod
    def identity(cls, M: Module) -> "ModuleMap":
        return cls(M, M, {v: np.eye(d, dtype=np.int64) for v, d in M.dims.items()})

    @classmethod
    def zero(cls, M: Module, N: Module) -> "ModuleMap":
        return cls(M, N, {})

    @classmethod
    def from_flat(cls, M: Module, N: Module, vec: Mat) -> "ModuleMap":
        vec = np.asarray(vec, dtype=np.int64).reshape(-1)
        maps, off = {}, 0
        for v in M.algebra.vertices:
            r, c = N.dims[v], M.dims[v]
            maps[v] = vec[off:off + r * c].reshape(r, c)
            off += r * c
        return cls(M, N, maps)

    def flat(self) -> Mat:
        parts = [self.vertex_maps[v].reshape(-1) for v in self.algebra.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other"""
        if other.target != self.source:
            raise DomainMismatchError("합성할 수 없는 사상입니다 (정의역/공역 불일치)")
        return ModuleMap(other.source, self.target, {
            v: (self.vertex_maps[v] @ other.vertex_maps[v]) % self.p for v in self.algebra.vertices
        })

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, {
            v: (self.vertex_maps[v] + other.vertex_maps[v]) % self.p for v in self.algebra.vertices
        })

    def scaled(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, {
            v: (c * m) % self.p for v, m in self.vertex_maps.items()
        })

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        return not any(m.any() for m in self.vertex_maps.values())

    def is_injective(self) -> bool:
        return all(rank(m, self.p) == m.shape[1] for m in self.vertex_maps.values())

    def is_surjective(self) -> bool:
        return all(rank(m, self.p) == m.shape[0] for m in self.vertex_maps.values())

    def is_isomorphism(self) -> bool:
        return self.source.dim_vector == self.target.dim_vector and self.is_injective()

    def inverse(self) -> "ModuleMap":
        if not self.is_isomorphism():
            raise MorphismError("동형사상이 아닙니다")
        return ModuleMap(self.target, self.source, {
            v: invert(m, self.p) for v, m in self.vertex_maps.items()
        })


def zero_module(A: BoundQuiverAlgebra) -> Module:
    return Module(A, {}, {}, name="0")


@lru_cache(maxsize=None)
def projectives(A: BoundQuiverAlgebra) -> Tuple[Module, ...]:
    return tuple(projective_module(A, v) for v in A.vertices)


@lru_cache(maxsize=None)
def simples(A: BoundQuiverAlgebra) -> Tuple[Module, ...]:
    return tuple(simple_module(A, v) for v in A.vertices)


# ============================================================
# Hom
# ============================================================

@lru_cache(maxsize=8192)
def hom_basis(M: Module, N: Module) -> Tuple[ModuleMap, ...]:
    """교환 사각형 연립방정식의 해공간 기저

    vec 는 row-major 이므로 vec(N_a f_u) = (N_a ⊗ I) vec(f_u),
    vec(f_v M_a) = (I ⊗ M_a^T) vec(f_v) 입니다.
    """
    if M.algebra is not N.algebra:
        raise DomainMismatchError("Hom: 서로 다른 대수 위의 모듈입니다")
    A = M.algebra
    p = A.p
    offsets, total = {}, 0
    for v in A.vertices:
        offsets[v] = total
        total += N.dims[v] * M.dims[v]
    if total == 0:
        return ()

    blocks = []
    for a in A.arrows:
        u, v = a.source, a.target
        rows = N.dims[v] * M.dims[u]
        if rows == 0:
            continue
        c = _zeros(rows, total)
        su, sv = N.dims[u] * M.dims[u], N.dims[v] * M.dims[v]
        c[:, offsets[u]:offsets[u] + su] += np.kron(N.arrow_maps[a.name], np.eye(M.dims[u], dtype=np.int64))
        c[:, offsets[v]:offsets[v] + sv] -= np.kron(np.eye(N.dims[v], dtype=np.int64), M.arrow_maps[a.name].T)
        blocks.append(c % p)

    kernel = nullspace(np.vstack(blocks), p) if blocks else np.eye(total, dtype=np.int64)
    return tuple(ModuleMap.from_flat(M, N, kernel[:, k]) for k in range(kernel.shape[1]))


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_basis(M, N))


def _span_solve(maps: Sequence[ModuleMap], target: ModuleMap) -> Optional[Mat]:
    """target 을 maps 의 일차결합으로 나타내는 계수 (없으면 None)"""
    p = target.p
    n = target.flat().shape[0]
    if not maps:
        return np.zeros(0, dtype=np.int64) if not target.flat().any() else None
    cols = np.stack([f.flat() for f in maps], axis=1) if n else _zeros(0, len(maps))
    x = solve(cols, target.flat().reshape(-1, 1), p)
    return None if x is None else x.reshape(-1)


def _combine(basis: Sequence[ModuleMap], coeffs, M: Module, N: Module) -> ModuleMap:
    p = M.p
    vec = np.zeros(sum(N.dims[v] * M.dims[v] for v in M.algebra.vertices), dtype=np.int64)
    for c, f in zip(coeffs, basis):
        if c:
            vec = (vec + int(c) * f.flat()) % p
    return ModuleMap.from_flat(M, N, vec)


def factor_through_epi(e: ModuleMap, h: ModuleMap) -> Optional[ModuleMap]:
    """e: B→C, h: X→C 에 대해 e∘g = h 인 g: X→B"""
    basis = hom_basis(h.source, e.source)
    coeffs = _span_solve([e.compose(g) for g in basis], h)
    return None if coeffs is None else _combine(basis, coeffs, h.source, e.source)


def extend_along_mono(f: ModuleMap, a: ModuleMap) -> Optional[ModuleMap]:
    """f: X→Y, a: X→Z 에 대해 t∘f = a 인 t: Y→Z"""
    basis = hom_basis(f.target, a.target)
    coeffs = _span_solve([t.compose(f) for t in basis], a)
    return None if coeffs is None else _combine(basis, coeffs, f.target, a.target)


def in_span(maps: Sequence[ModuleMap], target: ModuleMap) -> bool:
    return _span_solve(maps, target) is not None


# ============================================================
# 부분모듈, 몫, 핵/여핵, 직합
# ============================================================

@dataclass(frozen=True)
class Submodule:
    module: Module
    inclusion: ModuleMap


@dataclass(frozen=True)
class Quotient:
    module: Module
    projection: ModuleMap
    sections: Dict[str, Mat]


@dataclass(frozen=True)
class KernelCokernel:
    kernel: Module
    inclusion: ModuleMap
    cokernel: Module
    projection: ModuleMap


@dataclass(frozen=True)
class DirectSum:
    module: Module
    inclusions: Tuple[ModuleMap, ...]
    projections: Tuple[ModuleMap, ...]


def submodule(M: Module, spaces: Dict[str, Mat], name: str = "") -> Submodule:
    """vertex 별 부분공간(열 기저)으로 부분모듈을 만듭니다."""
    A, p = M.algebra, M.p
    bases = {
        v: column_basis(as_columns(spaces.get(v, _zeros(M.dims[v], 0)), M.dims[v]), p)
        for v in A.vertices
    }
    maps = {}
    for a in A.arrows:
        u, v = a.source, a.target
        img = (M.arrow_maps[a.name] @ bases[u]) % p
        x = solve(bases[v], img, p) if bases[u].shape[1] else _zeros(bases[v].shape[1], 0)
        if x is None:
            raise MorphismError(f"arrow {a.name} 에 대해 닫혀 있지 않은 부분공간입니다")
        maps[a.name] = x
    sub = Module(A, {v: b.shape[1] for v, b in bases.items()}, maps, name=name)
    return Submodule(sub, ModuleMap(sub, M, bases))


def quotient(M: Module, spaces: Dict[str, Mat], name: str = "") -> Quotient:
    A, p = M.algebra, M.p
    proj, sec = {}, {}
    for v in A.vertices:
        space = as_columns(spaces.get(v, _zeros(M.dims[v], 0)), M.dims[v])
        proj[v], sec[v] = quotient_maps(space, M.dims[v], p)
    maps = {
        a.name: (proj[a.target] @ M.arrow_maps[a.name] @ sec[a.source]) % p
        for a in A.arrows
    }
    Q = Module(A, {v: proj[v].shape[0] for v in A.vertices}, maps, name=name)
    return Quotient(Q, ModuleMap(M, Q, proj), sec)


def generated_spaces(M: Module, spaces: Dict[str, Mat]) -> Dict[str, Mat]:
    """주어진 부분공간들이 생성하는 부분모듈의 vertex 별 기저"""
    A, p = M.algebra, M.p
    current = {
        v: column_basis(as_columns(spaces.get(v, _zeros(M.dims[v], 0)), M.dims[v]), p)
        for v in A.vertices
    }
    changed = True
    while changed:
        changed = False
        for a in A.arrows:
            u, v = a.source, a.target
            if not current[u].shape[1]:
                continue
            merged = column_basis(np.hstack([current[v], (M.arrow_maps[a.name] @ current[u]) % p]), p)
            if merged.shape[1] > current[v].shape[1]:
                current[v] = merged
                changed = True
    return current


def kernel_cokernel(f: ModuleMap) -> KernelCokernel:
    p = f.p
    sub = submodule(f.source, {v: nullspace(m, p) for v, m in f.vertex_maps.items()})
    quot = quotient(f.target, dict(f.vertex_maps))
    return KernelCokernel(sub.module, sub.inclusion, quot.module, quot.projection)


def image(f: ModuleMap) -> Submodule:
    return submodule(f.target, dict(f.vertex_maps))


def direct_sum(modules: Sequence[Module], algebra: Optional[BoundQuiverAlgebra] = None) -> DirectSum:
    if not modules:
        if algebra is None:
            raise DomainMismatchError("빈 직합에는 대수를 지정해야 합니다")
        return DirectSum(zero_module(algebra), (), ())
    A = modules[0].algebra
    if any(M.algebra is not A for M in modules):
        raise DomainMismatchError("직합: 서로 다른 대수 위의 모듈입니다")
    dims = {v: sum(M.dims[v] for M in modules) for v in A.vertices}
    maps = {a.name: block_diag([M.arrow_maps[a.name] for M in modules]) for a in A.arrows}
    S = Module(A, dims, maps, name="+".join(M.name or "?" for M in modules))

    inclusions, projections = [], []
    offsets = {v: 0 for v in A.vertices}
    for M in modules:
        inc, prj = {}, {}
        for v in A.vertices:
            e = _zeros(dims[v], M.dims[v])
            e[offsets[v]:offsets[v] + M.dims[v], :] = np.eye(M.dims[v], dtype=np.int64)
            inc[v], prj[v] = e, e.T.copy()
            offsets[v] += M.dims[v]
        inclusions.append(ModuleMap(M, S, inc))
        projections.append(ModuleMap(S, M, prj))
    return DirectSum(S, tuple(inclusions), tuple(projections))


# ============================================================
# 동형 판정과 분해
# ============================================================

def _is_invertible_flat(vec: Mat, M: Module) -> bool:
    off = 0
    for v in M.algebra.vertices:
        d = M.dims[v]
        if d and rank(vec[off:off + d * d].reshape(d, d), M.p) < d:
            return False
        off += d * d
    return True


def is_isomorphic(M: Module, N: Module, cap: int = ISO_SEARCH_CAP) -> Optional[ModuleMap]:
    """동형사상 witness. 동형이 아니면 None

    Raises:
        UndecidedError: 탐색 공간이 cap 을 넘는 경우
    """
    if M.algebra is not N.algebra:
        raise DomainMismatchError("동형 판정: 서로 다른 대수 위의 모듈입니다")
    if M.dim_vector != N.dim_vector:
        return None
    if M == N:
        return ModuleMap(M, N, ModuleMap.identity(M).vertex_maps)
    basis = hom_basis(M, N)
    if not basis or hom_dim(M, M) != len(basis) or hom_dim(N, N) != len(basis):
        return None
    for f in basis:
        if f.is_isomorphism():
            return f
    h, p = len(basis), M.p
    if p ** h > cap:
        raise UndecidedError(f"동형 탐색 공간 {p}^{h} 이 상한 {cap} 을 넘습니다")
    flats = np.stack([f.flat() for f in basis])
    for coeffs in itertools.product(range(p), repeat=h):
        vec = (np.array(coeffs, dtype=np.int64) @ flats) % p
        if _is_invertible_flat(vec, M):
            return ModuleMap.from_flat(M, N, vec)
    return None


def _endomorphism_candidates(M: Module, end: Tuple[ModuleMap, ...], cap: int) -> Iterator[ModuleMap]:
    p = M.p
    ident = ModuleMap.identity(M)
    yield from end
    for f in end:
        for lam in range(1, p):
            yield f - ident.scaled(lam)
    if p ** len(end) > cap:
        raise UndecidedError(f"분해 탐색 공간 {p}^{len(end)} 이 상한 {cap} 을 넘습니다")
    flats = np.stack([f.flat() for f in end])
    for coeffs in itertools.product(range(p), repeat=len(end)):
        yield ModuleMap.from_flat(M, M, (np.array(coeffs, dtype=np.int64) @ flats) % p)


def _fitting_split(M: Module, cap: int = ISO_SEARCH_CAP) -> Optional[Tuple[Module, Module]]:
    """ker(ψ^n) ⊕ im(ψ^n) 로 갈라지는 자기사상 ψ 를 찾습니다."""
    end = hom_basis(M, M)
    if len(end) <= 1:
        return None
    n = max(M.dim_vector)
    total = M.total_dim
    for psi in _endomorphism_candidates(M, end, cap):
        powers = {v: mat_power(m, n, M.p) for v, m in psi.vertex_maps.items()}
        kernels = {v: nullspace(m, M.p) for v, m in powers.items()}
        k = sum(b.shape[1] for b in kernels.values())
        if 0 < k < total:
            images = {v: column_basis(m, M.p) for v, m in powers.items()}
            return submodule(M, kernels).module, submodule(M, images).module
    return None


@lru_cache(maxsize=4096)
def indecomposable_summands(M: Module) -> Tuple[Module, ...]:
    if M.is_zero:
        return ()
    split = _fitting_split(M)
    if split is None:
        return (M,)
    return indecomposable_summands(split[0]) + indecomposable_summands(split[1])


def is_indecomposable(M: Module) -> bool:
    return not M.is_zero and _fitting_split(M) is None


def decompose(M: Module) -> List[Tuple[Module, int]]:
    """직분해 불가능 성분과 중복도 (동형류로 묶음)"""
    groups: List[List] = []
    for X in indecomposable_summands(M):
        for g in groups:
            if is_isomorphic(g[0], X) is not None:
                g[1] += 1
                break
        else:
            groups.append([X, 1])
    return [(X, m) for X, m in groups]


# ============================================================
# 사영 덮개, syzygy, Ext
# ============================================================

@dataclass(frozen=True)
class ProjectiveCover:
    module: Module
    epi: ModuleMap
    tops: Dict[str, int]


def top_vectors(M: Module) -> Dict[str, Mat]:
    """vertex 별 top(M) 대표 벡터 (rad M 의 여공간 기저)"""
    A, p = M.algebra, M.p
    result = {}
    for v in A.vertices:
        incoming = [M.arrow_maps[a.name] for a in A.arrows if a.target == v]
        rad = np.hstack(incoming) if incoming else _zeros(M.dims[v], 0)
        _, sec = quotient_maps(rad, M.dims[v], p)
        result[v] = sec
    return result


@lru_cache(maxsize=4096)
def projective_cover(M: Module) -> ProjectiveCover:
    A, p = M.algebra, M.p
    tops = top_vectors(M)
    proj = projectives(A)
    summands, generators = [], []
    for v, P in zip(A.vertices, proj):
        for k in range(tops[v].shape[1]):
            summands.append(P)
            generators.append((v, tops[v][:, k]))
    ds = direct_sum(summands, algebra=A)

    maps = {}
    for w in A.vertices:
        cols = []
        for v, t in generators:
            for _, x in A.basis_paths(start=v, end=w):
                cols.append((M.path_matrix(x) @ t) % p)
        maps[w] = np.stack(cols, axis=1) if cols else _zeros(M.dims[w], 0)
    epi = ModuleMap(ds.module, M, maps)
    return ProjectiveCover(ds.module, epi, {v: tops[v].shape[1] for v in A.vertices})


@lru_cache(maxsize=4096)
def syzygy(M: Module) -> Module:
    cover = projective_cover(M)
    return kernel_cokernel(cover.epi).kernel


def is_projective(M: Module) -> bool:
    return projective_cover(M).module.total_dim == M.total_dim


def _ext1_dim(X: Module, N: Module) -> int:
    cover = projective_cover(X)
    hom_pn = sum(cover.tops[v] * N.dims[v] for v in X.algebra.vertices)
    return hom_dim(syzygy(X), N) - hom_pn + hom_dim(X, N)


def ext_dim(M: Module, N: Module, i: int) -> int:
    """dim Ext^i(M, N). i = 0 이면 dim Hom"""
    if M.algebra is not N.algebra:
        raise DomainMismatchError("Ext: 서로 다른 대수 위의 모듈입니다")
    if i < 0:
        raise ValueError(f"i 는 0 이상이어야 합니다: {i}")
    if i == 0:
        return hom_dim(M, N)
    X = M
    for _ in range(i - 1):
        X = syzygy(X)
    return _ext1_dim(X, N)


class ExtVerdict(str, Enum):
    VANISHES_ALL = "VANISHES_ALL"
    NONZERO = "NONZERO"
    BOUNDED_ONLY = "BOUNDED_ONLY"


@dataclass
class ExtCertificate:
    """Ext^i(M, N), i ≥ 1 의 소멸 인증서

    table[i-1] = dim Ext^i. preperiod/period 는 syzygy 성분 집합 수열의
    주기이며, 닫히지 않았으면 None 입니다.
    """
    source: str
    target: str
    verdict: ExtVerdict
    table: List[int] = field(default_factory=list)
    first_nonzero: Optional[int] = None
    preperiod: Optional[int] = None
    period: Optional[int] = None
    bound: Optional[int] = None

    @property
    def cert_id(self) -> str:
        return f"ext:{self.source}|{self.target}"

    @property
    def vanishes(self) -> bool:
        return self.verdict == ExtVerdict.VANISHES_ALL

    def to_dict(self) -> dict:
        return {
            "pair": [self.source, self.target],
            "verdict": self.verdict.value,
            "table": list(self.table),
            "first_nonzero": self.first_nonzero,
            "preperiod": self.preperiod,
            "period": self.period,
            "bound": self.bound,
        }


def _ext_bounded(M: Module, N: Module, bound: int, names: Tuple[str, str]) -> ExtCertificate:
    table = []
    X = M
    for i in range(bound):
        table.append(_ext1_dim(X, N))
        if table[-1]:
            return ExtCertificate(*names, ExtVerdict.NONZERO, table, first_nonzero=i + 1, bound=bound)
        X = syzygy(X)
        if X.is_zero:
            # 유한 사영 해소: 이후 차수는 모두 0
            return ExtCertificate(*names, ExtVerdict.VANISHES_ALL, table, preperiod=i + 1, period=1, bound=bound)
    return ExtCertificate(*names, ExtVerdict.BOUNDED_ONLY, table, bound=bound)


def _ext_orbit(M: Module, N: Module, universe: "Universe", bound: int, names: Tuple[str, str]) -> ExtCertificate:
    layer = universe.classify(M)
    layers = [layer]
    supports = [frozenset(layer)]
    while True:
        nxt: Counter = Counter()
        for idx, m in layer.items():
            for j, k in universe.omega(idx).items():
                nxt[j] += m * k
        support = frozenset(nxt)
        if support in supports:
            preperiod = supports.index(support)
            period = len(supports) - preperiod
            break
        if len(supports) > bound:
            raise OutsideUniverseError("syzygy 궤도가 bound 안에서 닫히지 않습니다")
        supports.append(support)
        layers.append(nxt)
        layer = nxt

    table = [sum(m * universe.ext1_to(idx, N) for idx, m in sorted(L.items())) for L in layers]
    nonzero = next((i for i, d in enumerate(table) if d), None)
    if nonzero is not None:
        return ExtCertificate(*names, ExtVerdict.NONZERO, table, first_nonzero=nonzero + 1,
                              preperiod=preperiod, period=period, bound=bound)
    return ExtCertificate(*names, ExtVerdict.VANISHES_ALL, table, preperiod=preperiod, period=period, bound=bound)


def ext_vanishes_all(M: Module, N: Module, universe: Optional["Universe"] = None,
                     bound: Optional[int] = None) -> ExtCertificate:
    """모든 i ≥ 1 에 대해 Ext^i(M, N) = 0 인지 syzygy 궤도로 판정합니다.

    Ω 의 직합 성분이 모두 universe 안에 있으면 성분 집합의 수열이
    결정적으로 순환하므로 판정은 완전합니다. 그렇지 않으면 bound 차수까지
    직접 계산하고 BOUNDED_ONLY 를 반환합니다.
    """
    if M.algebra is not N.algebra:
        raise DomainMismatchError("Ext: 서로 다른 대수 위의 모듈입니다")
    if bound is None:
        bound = 2 * len(universe) + 2 if universe is not None else 8
    names = (M.name or str(M.dim_vector), N.name or str(N.dim_vector))
    if universe is not None:
        try:
            return _ext_orbit(M, N, universe, bound, names)
        except OutsideUniverseError as e:
            logger.debug(f"syzygy 궤도가 universe 밖으로 나감 ({names[0]}): {e}")
    return _ext_bounded(M, N, bound, names)


# ============================================================
# Universe
# ============================================================

class Universe:
    """dmax 이하의 직분해 불가능 모듈 동형류 (정규 순서)

    이름은 D<차원벡터>#<같은 차원벡터 안에서의 순번> 입니다 (예: D1.1#0).
    Hom/Ext 결과는 한 번만 기록되는 memo 에 보관됩니다.
    """

    def __init__(self, algebra: BoundQuiverAlgebra, dmax: int, modules: Sequence[Module]):
        self.algebra = algebra
        self.dmax = dmax
        counters: Dict[Tuple[int, ...], int] = defaultdict(int)
        named = []
        for M in modules:
            k = counters[M.dim_vector]
            counters[M.dim_vector] += 1
            named.append(M.renamed(f"D{'.'.join(map(str, M.dim_vector))}#{k}"))
        self.modules: Tuple[Module, ...] = tuple(named)
        self.names: Tuple[str, ...] = tuple(M.name for M in named)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._by_dims: Dict[Tuple[int, ...], List[int]] = defaultdict(list)
        for i, M in enumerate(self.modules):
            self._by_dims[M.dim_vector].append(i)
        self._classify: Dict[Module, Counter] = {}
        self._omega: Dict[int, Counter] = {}
        self._ext1: Dict[Tuple[int, Module], int] = {}
        self._ext_all: Dict[Tuple[int, int], ExtCertificate] = {}

    def __len__(self) -> int:
        return len(self.modules)

    def __iter__(self) -> Iterator[Module]:
        return iter(self.modules)

    def __getitem__(self, i: int) -> Module:
        return self.modules[i]

    def __repr__(self) -> str:
        return f"Universe({self.algebra.name}, dmax={self.dmax}, size={len(self)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{self.algebra.name} 의 universe 에 없는 모듈 이름: {name}") from None

    def name(self, i: int) -> str:
        return self.names[i]

    def _find(self, X: Module) -> int:
        for i in self._by_dims.get(X.dim_vector, []):
            if is_isomorphic(self.modules[i], X) is not None:
                return i
        raise OutsideUniverseError(
            f"{self.algebra.name}: 직합 성분 {X.dim_vector} 가 universe (dmax={self.dmax}) 밖에 있습니다. dmax 를 늘리세요"
        )

    def classify(self, M: Module) -> Counter:
        """M 의 직합 성분을 universe index 의 중복도로 나타냅니다."""
        if M.algebra is not self.algebra:
            raise DomainMismatchError(f"{self.algebra.name} 위의 모듈이 아닙니다")
        cached = self._classify.get(M)
        if cached is not None:
            return Counter(cached)
        result: Counter = Counter()
        for X in indecomposable_summands(M):
            result[self._find(X)] += 1
        self._classify.setdefault(M, result)
        return Counter(result)

    def support(self, M: Module) -> frozenset:
        return frozenset(self.classify(M))

    def omega(self, i: int) -> Counter:
        if i not in self._omega:
            self._omega.setdefault(i, self.classify(syzygy(self.modules[i])))
        return self._omega[i]

    def hom_dim(self, i: int, j: int) -> int:
        return hom_dim(self.modules[i], self.modules[j])

    def ext1(self, i: int, j: int) -> int:
        return self.ext1_to(i, self.modules[j])

    def ext1_to(self, i: int, N: Module) -> int:
        key = (i, N)
        if key not in self._ext1:
            self._ext1.setdefault(key, _ext1_dim(self.modules[i], N))
        return self._ext1[key]

    def ext_all(self, i: int, j: int) -> ExtCertificate:
        if (i, j) not in self._ext_all:
            cert = ext_vanishes_all(self.modules[i], self.modules[j], universe=self)
            self._ext_all.setdefault((i, j), cert)
        return self._ext_all[(i, j)]

    def projective_indices(self) -> frozenset:
        return frozenset().union(*(self.support(P) for P in projectives(self.algebra)))

    def describe(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "algebra_hash": self.algebra.hash,
            "p": self.algebra.p,
            "dmax": self.dmax,
            "size": len(self),
            "names": list(self.names),
        }


def all_matrices(rows: int, cols: int, p: int) -> Iterator[Mat]:
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def enumerate_indecomposables(A: BoundQuiverAlgebra, dmax: int, cap: int = ENUM_CAP) -> Universe:
    """총 차원 dmax 이하의 모든 표현을 전수 조사해 직분해 불가능 동형류를 모읍니다.

    Raises:
        CapExceededError: 조사할 표현 수가 cap 을 넘는 경우
    """
    if dmax < 1:
        raise ValueError(f"dmax 는 1 이상이어야 합니다: {dmax}")
    verts = A.vertices
    vidx = {v: k for k, v in enumerate(verts)}
    p = A.p
    dimvecs = sorted(
        (dv for dv in itertools.product(range(dmax + 1), repeat=len(verts)) if 1 <= sum(dv) <= dmax),
        key=lambda dv: (sum(dv), dv),
    )
    count = sum(
        p ** sum(dv[vidx[a.target]] * dv[vidx[a.source]] for a in A.arrows) for dv in dimvecs
    )
    if count > cap:
        raise CapExceededError(
            f"{A.name}: 표현 {count}개가 열거 상한 {cap} 을 넘습니다. 더 작은 dmax 또는 p 를 사용하세요"
        )

    found: List[Module] = []
    for dv in dimvecs:
        dims = dict(zip(verts, dv))
        same: List[Module] = []
        choices = [list(all_matrices(dims[a.target], dims[a.source], p)) for a in A.arrows]
        for mats in itertools.product(*choices):
            maps = {a.name: m for a, m in zip(A.arrows, mats)}
            if not satisfies_relations(A, dims, maps):
                continue
            M = Module(A, dims, maps)
            if not is_indecomposable(M):
                continue
            if any(is_isomorphic(X, M) is not None for X in same):
                continue
            same.append(M)
        found.extend(same)

    universe = Universe(A, dmax, found)
    logger.info(f"universe 열거 완료: {A.name} dmax={dmax} → {len(universe)}개 ({', '.join(universe.names)})")
    return universe


# ============================================================
# 항등식 검사 (universe 전체)
# ============================================================

def is_hereditary(A: BoundQuiverAlgebra) -> bool:
    """관계식 없는 경로 대수"""
    return not A.relations


def euler_form(A: BoundQuiverAlgebra, x: Sequence[int], y: Sequence[int]) -> int:
    """quiver 의 Euler form ⟨x, y⟩ = Σ x_v y_v − Σ_{a: u→v} x_u y_v"""
    pos = {v: k for k, v in enumerate(A.vertices)}
    value = sum(x[k] * y[k] for k in range(len(A.vertices)))
    return value - sum(x[pos[a.source]] * y[pos[a.target]] for a in A.arrows)


def _check(condition: str, subject: str, ok: bool, witness: str = "") -> VerificationEntry:
    return VerificationEntry(condition=condition, subject=subject, verdict=verdict_of(ok),
                             witness="" if ok else witness)


def check_module_identities(U: Universe, i_max: int = 3) -> CheckResult:
    """Hom/Ext 계산의 기본 항등식을 universe 전체에서 확인합니다.

    - dim Hom(P_v, M) = dim M_v
    - Ext^i(P, M) = 0 (1 ≤ i ≤ i_max)
    - dim Ext^i(M, N) = Σ dim Ext^{i-1}(ΩM 의 성분, N) (차원 이동, universe 분류로 계산)
    - decompose(X ⊕ Y) = decompose(X) ⊎ decompose(Y)
    - 관계식 없는 경우 dim Hom − dim Ext¹ = Euler form
    """
    A = U.algebra
    entries: List[VerificationEntry] = []
    proj = projectives(A)

    for M in U:
        for v, P in zip(A.vertices, proj):
            lhs = hom_dim(P, M)
            entries.append(_check("dim Hom(P_v, M) = dim M_v", f"(P{v}, {M.name})",
                                  lhs == M.dims[v], f"{lhs} ≠ {M.dims[v]}"))
        for v, P in zip(A.vertices, proj):
            nonzero = [i for i in range(1, i_max + 1) if ext_dim(P, M, i)]
            entries.append(_check("Ext^i(P, M) = 0", f"(P{v}, {M.name})", not nonzero,
                                  f"Ext^{nonzero[0]} ≠ 0" if nonzero else ""))

    for k, M in enumerate(U):
        try:
            omega = U.omega(k)
        except OutsideUniverseError as e:
            entries.append(VerificationEntry(condition="dimension shift", subject=M.name,
                                             verdict=Verdict.UNKNOWN, witness=str(e)))
            continue
        for N in U:
            for i in range(2, i_max + 1):
                lhs = ext_dim(M, N, i)
                rhs = sum(m * ext_dim(U[j], N, i - 1) for j, m in omega.items())
                entries.append(_check("dim Ext^i(M, N) = dim Ext^{i-1}(ΩM, N)", f"({M.name}, {N.name}, i={i})",
                                      lhs == rhs, f"{lhs} ≠ {rhs}"))

    for X in U:
        for Y in U:
            summed = U.classify(direct_sum([X, Y], algebra=A).module)
            parts = U.classify(X) + U.classify(Y)
            entries.append(_check("decompose(X ⊕ Y) = decompose(X) ⊎ decompose(Y)", f"({X.name}, {Y.name})",
                                  summed == parts, f"{dict(summed)} ≠ {dict(parts)}"))

    if is_hereditary(A):
        for M in U:
            for N in U:
                lhs = hom_dim(M, N) - ext_dim(M, N, 1)
                rhs = euler_form(A, M.dim_vector, N.dim_vector)
                entries.append(_check("dim Hom − dim Ext¹ = Euler form", f"({M.name}, {N.name})",
                                      lhs == rhs, f"{lhs} ≠ {rhs}"))
    else:
        entries.append(VerificationEntry(condition="dim Hom − dim Ext¹ = Euler form", verdict=Verdict.SKIPPED,
                                         witness=f"{A.name} 에 관계식이 있습니다", asserted=False))

    result = CheckResult.build(entries)
    logger.info(f"모듈 항등식 검사 {A.name}: {result.verdict.value} ({len(entries)} 항목)")
    return result
