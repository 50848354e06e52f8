"""Vertex idempotent 로 유도된 recollement

    Mod-A/AeA  --i_*-->  Mod-B  --j*-->  Mod-eAe
               <--i*--          <--j_!--
               <--i^!--         <--j_*--

여섯 functor 는 닫힌 공식으로 구현합니다.
    i*(M) = M / M·BeB,  i_* = 팽창,  i^!(M) = {m : m·BeB = 0}
    j*(M) = Me,  j_!(N) = N ⊗_{eBe} eB,  j_*(N) = Hom_{eBe}(Be, N)
adjunction 항등식과 단위/여단위 동형은 정의가 아니라 검사 대상입니다.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..report import CertificateEntry, CheckResult, Verdict, VerificationEntry, verdict_of
from .errors import DomainMismatchError, HypothesisError, RecollementError
from .exactlin import Mat, block_diag, nullspace, quotient_maps, solve
from .modcat import (
    DirectSum,
    Module,
    ModuleMap,
    Universe,
    check_module_identities,
    direct_sum,
    enumerate_indecomposables,
    ext_dim,
    extend_along_mono,
    generated_spaces,
    hom_basis,
    hom_dim,
    is_projective,
    kernel_cokernel,
    projective_cover,
    projectives,
    quotient,
    simples,
    submodule,
)
from .quivalg import BoundQuiverAlgebra, Path, VertexIdempotent, corner_presentation, idempotent_quotient, opposite

logger = logging.getLogger(__name__)

Object = Union[Module, ModuleMap]


class Functor(str, Enum):
    I_UPPER = "i*"
    I_LOWER = "i_*"
    I_SHRIEK = "i^!"
    J_SHRIEK = "j_!"
    J_UPPER = "j*"
    J_LOWER = "j_*"


class RecollementUniverses(NamedTuple):
    B: Universe
    A: Universe
    C: Universe


def _zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def _label(M: Module) -> str:
    return M.name or "D" + ".".join(map(str, M.dim_vector))


# ============================================================
# functor 계산용 중간 자료
# ============================================================

@dataclass(frozen=True)
class _IUpperData:
    module: Module
    proj: Dict[str, Mat]
    sec: Dict[str, Mat]


@dataclass(frozen=True)
class _IShriekData:
    module: Module
    basis: Dict[str, Mat]


@dataclass(frozen=True)
class _JShriekData:
    """j_!(N): 생성자 (경로 x: u→w, N_u 의 기저 k) 의 몫"""
    module: Module
    index: Dict[str, Dict[Tuple[int, int], int]]
    proj: Dict[str, Mat]
    sec: Dict[str, Mat]


@dataclass(frozen=True)
class _JLowerData:
    """j_*(N): 경로 x: w→E 마다 φ(x) ∈ N_{end x} 인 미지수 공간 V_w 의 부분공간 K_w"""
    module: Module
    offsets: Dict[str, Dict[int, int]]
    kernels: Dict[str, Mat]


# ============================================================
# Recollement
# ============================================================

class Recollement:
    """(Mod-B/BeB, Mod-B, Mod-eBe)

    Args:
        B (BoundQuiverAlgebra): 가운데 대수
        E (Iterable[str]): idempotent e = Σ_{v∈E} e_v 의 vertex 집합
        decide_exactness (bool): 생성 시 functor_exactness 를 실행할지 여부
    """

    def __init__(self, B: BoundQuiverAlgebra, E: Iterable[str], decide_exactness: bool = True):
        self.B = B
        self.idempotent = VertexIdempotent(B, frozenset(str(v) for v in E))
        self.inside: List[str] = self.idempotent.ordered
        self.outside: List[str] = self.idempotent.complement
        self.A = idempotent_quotient(B, self.idempotent)
        self.C, self.arrow_images = corner_presentation(B, self.idempotent)
        self.exactness: Dict[str, Verdict] = {}
        self.exactness_witness: Dict[str, str] = {}
        if decide_exactness:
            decide_functor_exactness(self)
        logger.info(
            f"recollement 구성: B={B.name}, E={{{','.join(self.inside)}}}, "
            f"A={self.A.name}(dim {self.A.dim}), C={self.C.name}(dim {self.C.dim}), "
            f"exactness={ {k: v.value for k, v in self.exactness.items()} }"
        )

    def __repr__(self) -> str:
        return f"Recollement({self.B.name}, E={{{','.join(self.inside)}}})"

    @property
    def is_degenerate(self) -> bool:
        return self.idempotent.is_degenerate

    @cached_property
    def opposite(self) -> "Recollement":
        return Recollement(opposite(self.B), self.inside, decide_exactness=False)

    def exact(self, functor: Union[str, Functor]) -> bool:
        return self.exactness.get(Functor(functor).value) == Verdict.PASS

    def describe(self) -> dict:
        return {
            "B": self.B.name,
            "E": list(self.inside),
            "A": self.A.name,
            "C": self.C.name,
            "corner_arrows": {name: str(path) for name, path in sorted(self.arrow_images.items())},
            "exactness": {k: v.value for k, v in sorted(self.exactness.items())},
        }

    # ---------- 정의역 검사 ----------

    def _expect(self, x: Object, algebra: BoundQuiverAlgebra, functor: str):
        if x.algebra is not algebra:
            raise DomainMismatchError(f"{functor}: {algebra.name} 위의 대상이 아닙니다 ({x.algebra.name})")

    # ---------- i_* ----------

    def i_lower(self, x: Object) -> Object:
        self._expect(x, self.A, "i_*")
        if isinstance(x, ModuleMap):
            return ModuleMap(self.i_lower(x.source), self.i_lower(x.target), dict(x.vertex_maps))
        dims = {v: x.dims.get(v, 0) for v in self.B.vertices}
        return Module(self.B, dims, dict(x.arrow_maps), name=f"i_*({_label(x)})")

    # ---------- i* ----------

    def i_upper(self, x: Object) -> Object:
        self._expect(x, self.B, "i*")
        if isinstance(x, ModuleMap):
            src, tgt = _i_upper_data(self, x.source), _i_upper_data(self, x.target)
            return ModuleMap(src.module, tgt.module, {
                v: (tgt.proj[v] @ x.vertex_maps[v] @ src.sec[v]) % self.B.p for v in self.outside
            })
        return _i_upper_data(self, x).module

    # ---------- i^! ----------

    def i_shriek(self, x: Object) -> Object:
        self._expect(x, self.B, "i^!")
        if isinstance(x, ModuleMap):
            src, tgt = _i_shriek_data(self, x.source), _i_shriek_data(self, x.target)
            return ModuleMap(src.module, tgt.module, {
                v: _solve_exact(tgt.basis[v], (x.vertex_maps[v] @ src.basis[v]) % self.B.p, self.B.p)
                for v in self.outside
            })
        return _i_shriek_data(self, x).module

    # ---------- j* ----------

    def j_upper(self, x: Object) -> Object:
        self._expect(x, self.B, "j*")
        if isinstance(x, ModuleMap):
            return ModuleMap(self.j_upper(x.source), self.j_upper(x.target), {
                u: x.vertex_maps[u] for u in self.inside
            })
        dims = {u: x.dims[u] for u in self.inside}
        maps = {name: x.path_matrix(path) for name, path in self.arrow_images.items()}
        return Module(self.C, dims, maps, name=f"j*({_label(x)})")

    # ---------- j_! ----------

    def j_shriek(self, x: Object) -> Object:
        self._expect(x, self.C, "j_!")
        if isinstance(x, ModuleMap):
            return _j_shriek_map(self, x)
        return _j_shriek_data(self, x).module

    # ---------- j_* ----------

    def j_lower(self, x: Object) -> Object:
        self._expect(x, self.C, "j_*")
        if isinstance(x, ModuleMap):
            return _j_lower_map(self, x)
        return _j_lower_data(self, x).module

    # ---------- 단위 / 여단위 ----------

    def unit_i_upper(self, M: Module) -> ModuleMap:
        """M → i_*i*(M)"""
        data = _i_upper_data(self, M)
        return ModuleMap(M, self.i_lower(data.module), {v: data.proj[v] for v in self.outside})

    def counit_i_upper(self, N: Module) -> ModuleMap:
        """i*i_*(N) → N"""
        data = _i_upper_data(self, self.i_lower(N))
        return ModuleMap(data.module, N, {v: data.sec[v] for v in self.outside})

    def unit_i_shriek(self, N: Module) -> ModuleMap:
        """N → i^!i_*(N)"""
        data = _i_shriek_data(self, self.i_lower(N))
        return ModuleMap(N, data.module, {
            v: _solve_exact(data.basis[v], np.eye(N.dims[v], dtype=np.int64), self.B.p) for v in self.outside
        })

    def counit_i_shriek(self, M: Module) -> ModuleMap:
        """i_*i^!(M) → M"""
        data = _i_shriek_data(self, M)
        return ModuleMap(self.i_lower(data.module), M, {v: data.basis[v] for v in self.outside})

    def unit_j_shriek(self, N: Module) -> ModuleMap:
        """N → j*j_!(N)"""
        data = _j_shriek_data(self, N)
        target = self.j_upper(data.module)
        maps = {}
        for u in self.inside:
            e = self.B.index[Path.trivial(u)]
            cols = [data.index[u][(e, k)] for k in range(N.dims[u])]
            maps[u] = data.proj[u][:, cols]
        return ModuleMap(N, target, maps)

    def counit_j_shriek(self, M: Module) -> ModuleMap:
        """j_!j*(M) → M, (x, m) ↦ m·x"""
        data = _j_shriek_data(self, self.j_upper(M))
        maps = {}
        for w in self.B.vertices:
            h = _zeros(M.dims[w], len(data.index[w]))
            for (g, k), col in data.index[w].items():
                h[:, col] = M.path_matrix(self.B.basis[g])[:, k]
            maps[w] = (h @ data.sec[w]) % self.B.p
        return ModuleMap(data.module, M, maps)

    def unit_j_lower(self, M: Module) -> ModuleMap:
        """M → j_*j*(M), m ↦ (x ↦ m·x)"""
        data = _j_lower_data(self, self.j_upper(M))
        maps = {}
        for w in self.B.vertices:
            paths = _paths_into(self, w)
            rows = [M.path_matrix(x) for _, x in paths]
            h = np.vstack(rows) if rows else _zeros(0, M.dims[w])
            maps[w] = _solve_exact(data.kernels[w], h % self.B.p, self.B.p)
        return ModuleMap(M, data.module, maps)

    def counit_j_lower(self, N: Module) -> ModuleMap:
        """j*j_*(N) → N, φ ↦ φ(e_u)"""
        data = _j_lower_data(self, N)
        source = self.j_upper(data.module)
        maps = {}
        for u in self.inside:
            e = self.B.index[Path.trivial(u)]
            off = data.offsets[u][e]
            maps[u] = data.kernels[u][off:off + N.dims[u], :]
        return ModuleMap(source, N, maps)

    # ---------- 합성 ----------

    def composite(self, name: str, M: Module) -> Module:
        """B 위의 합성 functor (i_*i^!, i_*i*, j_!j*, j_*j*)"""
        if name == "i_*i^!":
            return self.i_lower(self.i_shriek(M))
        if name == "i_*i*":
            return self.i_lower(self.i_upper(M))
        if name == "j_!j*":
            return self.j_shriek(self.j_upper(M))
        if name == "j_*j*":
            return self.j_lower(self.j_upper(M))
        raise ValueError(f"알 수 없는 합성 functor: {name}")


def build_recollement(B: BoundQuiverAlgebra, E: Iterable[str]) -> Recollement:
    return Recollement(B, E)


def apply_functor(R: Recollement, which: Union[str, Functor], x: Object) -> Object:
    dispatch: Dict[Functor, Callable[[Object], Object]] = {
        Functor.I_UPPER: R.i_upper,
        Functor.I_LOWER: R.i_lower,
        Functor.I_SHRIEK: R.i_shriek,
        Functor.J_SHRIEK: R.j_shriek,
        Functor.J_UPPER: R.j_upper,
        Functor.J_LOWER: R.j_lower,
    }
    return dispatch[Functor(which)](x)


def build_universes(R: Recollement, dmax: int) -> RecollementUniverses:
    return RecollementUniverses(
        B=enumerate_indecomposables(R.B, dmax),
        A=enumerate_indecomposables(R.A, dmax),
        C=enumerate_indecomposables(R.C, dmax),
    )


# ============================================================
# functor 구현 (캐시)
# ============================================================

def _solve_exact(a: Mat, b: Mat, p: int) -> Mat:
    x = solve(a, b, p)
    if x is None:
        raise RecollementError("내부 불일치: 부분공간 안에 있어야 할 벡터를 풀 수 없습니다")
    return x


@lru_cache(maxsize=4096)
def _i_upper_data(R: Recollement, M: Module) -> _IUpperData:
    B = R.B
    gen = generated_spaces(M, {u: np.eye(M.dims[u], dtype=np.int64) for u in R.inside})
    q = quotient(M, gen)
    Q = q.module
    N = Module(R.A, {v: Q.dims[v] for v in R.outside},
               {a.name: Q.arrow_maps[a.name] for a in R.A.arrows}, name=f"i*({_label(M)})")
    return _IUpperData(N, {v: q.projection.vertex_maps[v] for v in B.vertices}, dict(q.sections))


@lru_cache(maxsize=4096)
def _i_shriek_data(R: Recollement, M: Module) -> _IShriekData:
    B, p = R.B, R.B.p
    spaces = {}
    for v in B.vertices:
        rows = [M.path_matrix(x) for u in R.inside for _, x in B.basis_paths(start=v, end=u)]
        spaces[v] = nullspace(np.vstack(rows), p) if rows else np.eye(M.dims[v], dtype=np.int64)
    inc = submodule(M, spaces)
    sub = inc.module
    basis = dict(inc.inclusion.vertex_maps)
    N = Module(R.A, {v: sub.dims[v] for v in R.outside},
               {a.name: sub.arrow_maps[a.name] for a in R.A.arrows}, name=f"i^!({_label(M)})")
    return _IShriekData(N, basis)


@lru_cache(maxsize=4096)
def _j_shriek_data(R: Recollement, N: Module) -> _JShriekData:
    B, C, p = R.B, R.C, R.B.p
    index: Dict[str, Dict[Tuple[int, int], int]] = {}
    for w in B.vertices:
        gens = [(g, k) for u in R.inside for g, _ in B.basis_paths(start=u, end=w) for k in range(N.dims[u])]
        index[w] = {key: i for i, key in enumerate(gens)}

    proj, sec = {}, {}
    for w in B.vertices:
        rels = []
        for alpha in C.arrows:
            u_src, u_tgt = alpha.source, alpha.target
            y = R.arrow_images[alpha.name]
            n_alpha = N.arrow_maps[alpha.name]
            for g, x in B.basis_paths(start=u_tgt, end=w):
                for k_src in range(N.dims[u_src]):
                    vec = np.zeros(len(index[w]), dtype=np.int64)
                    for k, c in enumerate(n_alpha[:, k_src]):
                        if c:
                            vec[index[w][(g, k)]] += c
                    for g2, c in B.multiply(y, x).items():
                        vec[index[w][(g2, k_src)]] -= c
                    rels.append(vec % p)
        space = np.stack(rels, axis=1) if rels else _zeros(len(index[w]), 0)
        proj[w], sec[w] = quotient_maps(space, len(index[w]), p)

    maps = {}
    for b in B.arrows:
        w, w2 = b.source, b.target
        g_b = _zeros(len(index[w2]), len(index[w]))
        b_path = B.quiver.arrow_path(b.name)
        for (g, k), col in index[w].items():
            for g2, c in B.multiply(B.basis[g], b_path).items():
                g_b[index[w2][(g2, k)], col] += c
        maps[b.name] = (proj[w2] @ g_b @ sec[w]) % p
    module = Module(B, {w: proj[w].shape[0] for w in B.vertices}, maps, name=f"j_!({_label(N)})")
    return _JShriekData(module, index, proj, sec)


def _j_shriek_map(R: Recollement, f: ModuleMap) -> ModuleMap:
    src, tgt = _j_shriek_data(R, f.source), _j_shriek_data(R, f.target)
    B, p = R.B, R.B.p
    maps = {}
    for w in B.vertices:
        g_w = _zeros(len(tgt.index[w]), len(src.index[w]))
        for (g, k), col in src.index[w].items():
            u = B.basis[g].start
            for k2, c in enumerate(f.vertex_maps[u][:, k]):
                if c:
                    g_w[tgt.index[w][(g, k2)], col] += c
        maps[w] = (tgt.proj[w] @ g_w @ src.sec[w]) % p
    return ModuleMap(src.module, tgt.module, maps)


def _paths_into(R: Recollement, w: str) -> List[Tuple[int, Path]]:
    """w 에서 E 의 vertex 로 가는 기저 경로 (j_* 미지수의 순서)"""
    return [(g, x) for u in R.inside for g, x in R.B.basis_paths(start=w, end=u)]


@lru_cache(maxsize=4096)
def _j_lower_data(R: Recollement, N: Module) -> _JLowerData:
    B, C, p = R.B, R.C, R.B.p
    offsets: Dict[str, Dict[int, int]] = {}
    sizes: Dict[str, int] = {}
    for w in B.vertices:
        off, table = 0, {}
        for g, x in _paths_into(R, w):
            table[g] = off
            off += N.dims[x.end]
        offsets[w], sizes[w] = table, off

    kernels = {}
    for w in B.vertices:
        rows = []
        for g, x in _paths_into(R, w):
            for alpha in C.arrows:
                if alpha.source != x.end:
                    continue
                d_src, d_tgt = N.dims[alpha.source], N.dims[alpha.target]
                block = _zeros(d_tgt, sizes[w])
                for g2, c in B.multiply(x, R.arrow_images[alpha.name]).items():
                    o = offsets[w][g2]
                    block[:, o:o + d_tgt] += c * np.eye(d_tgt, dtype=np.int64)
                o = offsets[w][g]
                block[:, o:o + d_src] -= N.arrow_maps[alpha.name]
                rows.append(block % p)
        constraints = np.vstack(rows) if rows else _zeros(0, sizes[w])
        kernels[w] = nullspace(constraints, p) if rows else np.eye(sizes[w], dtype=np.int64)

    maps = {}
    for b in B.arrows:
        w, w2 = b.source, b.target
        v_b = _zeros(sizes[w2], sizes[w])
        b_path = B.quiver.arrow_path(b.name)
        for g2, z in _paths_into(R, w2):
            d = N.dims[z.end]
            o2 = offsets[w2][g2]
            for g, c in B.multiply(b_path, z).items():
                o = offsets[w][g]
                v_b[o2:o2 + d, o:o + d] += c * np.eye(d, dtype=np.int64)
        maps[b.name] = _solve_exact(kernels[w2], (v_b @ kernels[w]) % p, p)
    module = Module(B, {w: kernels[w].shape[1] for w in B.vertices}, maps, name=f"j_*({_label(N)})")
    return _JLowerData(module, offsets, kernels)


def _j_lower_map(R: Recollement, f: ModuleMap) -> ModuleMap:
    src, tgt = _j_lower_data(R, f.source), _j_lower_data(R, f.target)
    p = R.B.p
    maps = {}
    for w in R.B.vertices:
        blocks = [f.vertex_maps[x.end] for _, x in _paths_into(R, w)]
        g_w = block_diag(blocks) if blocks else _zeros(0, 0)
        maps[w] = _solve_exact(tgt.kernels[w], (g_w @ src.kernels[w]) % p, p)
    return ModuleMap(src.module, tgt.module, maps)


# ============================================================
# Exactness
# ============================================================

@dataclass(frozen=True)
class _RadicalSequence:
    """0 → rad P → P → top P → 0"""
    inclusion: ModuleMap
    projection: ModuleMap


def _radical_sequences(algebra: BoundQuiverAlgebra) -> List[_RadicalSequence]:
    result = []
    for S in simples(algebra):
        epi = projective_cover(S).epi
        result.append(_RadicalSequence(kernel_cokernel(epi).inclusion, epi))
    return result


def _is_short_exact(f: ModuleMap, g: ModuleMap) -> bool:
    return (
        f.is_injective()
        and g.is_surjective()
        and g.compose(f).is_zero()
        and f.target.total_dim == f.source.total_dim + g.target.total_dim
    )


def _all_projective(modules: Iterable[Module]) -> Tuple[bool, str]:
    for M in modules:
        if not is_projective(M):
            return False, f"{_label(M)} is not projective"
    return True, ""


def decide_functor_exactness(R: Recollement) -> Dict[str, Verdict]:
    """네 functor 의 exactness 를 사영성 판정으로 결정하고 R 에 저장합니다.

    i^! exact ⟺ B/BeB 가 오른쪽 사영 ⟺ 모든 i_*(P^A_v) 가 사영
    i*  exact ⟺ B/BeB 가 왼쪽 사영 (반대 대수에서 같은 판정)
    j_* exact ⟺ Be 가 오른쪽 eBe-사영 ⟺ 모든 j*(P^B_v) 가 사영
    j_! exact ⟺ eB 가 왼쪽 eBe-사영 (반대 대수에서 같은 판정)
    """
    op = R.opposite
    tests = {
        Functor.I_SHRIEK: lambda: _all_projective(R.i_lower(P) for P in projectives(R.A)),
        Functor.I_UPPER: lambda: _all_projective(op.i_lower(P) for P in projectives(op.A)),
        Functor.J_LOWER: lambda: _all_projective(R.j_upper(P) for P in projectives(R.B)),
        Functor.J_SHRIEK: lambda: _all_projective(op.j_upper(P) for P in projectives(op.B)),
    }
    for functor, test in tests.items():
        ok, witness = test()
        R.exactness[functor.value] = verdict_of(ok)
        R.exactness_witness[functor.value] = witness
    return dict(R.exactness)


_EXACTNESS_CRITERIA = {
    Functor.I_UPPER: "B/BeB projective as a left B-module",
    Functor.I_SHRIEK: "B/BeB projective as a right B-module",
    Functor.J_SHRIEK: "eB projective as a left eBe-module",
    Functor.J_LOWER: "Be projective as a right eBe-module",
}


def functor_exactness(R: Recollement) -> CheckResult:
    """exactness 판정과 교차 검사 (rad P → P → top P 위의 spot check, 함의 관계)"""
    if not R.exactness:
        decide_functor_exactness(R)
    entries: List[VerificationEntry] = []
    for functor, criterion in _EXACTNESS_CRITERIA.items():
        entries.append(VerificationEntry(
            condition=f"{functor.value} exact ⟺ {criterion}",
            verdict=R.exactness[functor.value],
            witness=R.exactness_witness.get(functor.value, ""),
            asserted=False,
        ))

    spot = {
        Functor.I_UPPER: (R.B, R.i_upper),
        Functor.I_SHRIEK: (R.B, R.i_shriek),
        Functor.J_SHRIEK: (R.C, R.j_shriek),
        Functor.J_LOWER: (R.C, R.j_lower),
    }
    for functor, (algebra, apply) in spot.items():
        exact = R.exact(functor)
        for seq in _radical_sequences(algebra):
            ok = _is_short_exact(apply(seq.inclusion), apply(seq.projection))
            subject = _label(seq.projection.source)
            if exact:
                verdict, asserted = verdict_of(ok), True
            else:
                verdict, asserted = (Verdict.PASS if ok else Verdict.FAIL), False
            entries.append(VerificationEntry(
                condition=f"{functor.value} preserves 0 → rad P → P → top P → 0",
                subject=subject,
                verdict=verdict,
                witness="" if ok else "image sequence is not short exact",
                asserted=asserted,
            ))

    for left, right in ((Functor.I_UPPER, Functor.J_SHRIEK), (Functor.I_SHRIEK, Functor.J_LOWER)):
        ok = (not R.exact(left)) or R.exact(right)
        entries.append(VerificationEntry(
            condition=f"{left.value} exact ⇒ {right.value} exact",
            verdict=verdict_of(ok),
        ))
    return CheckResult.build(entries)


# ============================================================
# Axiom suite
# ============================================================

def _entry(condition: str, subject: str, ok: bool, witness: str = "") -> VerificationEntry:
    return VerificationEntry(condition=condition, subject=subject, verdict=verdict_of(ok),
                             witness="" if ok else witness)


def _skipped(condition: str, hypothesis: str, R: Recollement) -> VerificationEntry:
    return VerificationEntry(
        condition=condition,
        verdict=Verdict.SKIPPED,
        witness=f"hypothesis '{hypothesis} exact' is {R.exactness.get(hypothesis, Verdict.UNKNOWN).value}",
        asserted=False,
    )


def _pairs(U1: Universe, U2: Universe):
    for X in U1:
        for Y in U2:
            yield X, Y


def _hom_adjunction_entries(R: Recollement, U: RecollementUniverses) -> List[VerificationEntry]:
    entries = []
    specs = [
        ("dim Hom(i*X, Y) = dim Hom(X, i_*Y)", U.B, U.A, lambda X, Y: (hom_dim(R.i_upper(X), Y), hom_dim(X, R.i_lower(Y)))),
        ("dim Hom(i_*X, Y) = dim Hom(X, i^!Y)", U.A, U.B, lambda X, Y: (hom_dim(R.i_lower(X), Y), hom_dim(X, R.i_shriek(Y)))),
        ("dim Hom(j_!X, Y) = dim Hom(X, j*Y)", U.C, U.B, lambda X, Y: (hom_dim(R.j_shriek(X), Y), hom_dim(X, R.j_upper(Y)))),
        ("dim Hom(j*X, Y) = dim Hom(X, j_*Y)", U.B, U.C, lambda X, Y: (hom_dim(R.j_upper(X), Y), hom_dim(X, R.j_lower(Y)))),
    ]
    for condition, U1, U2, dims in specs:
        for X, Y in _pairs(U1, U2):
            lhs, rhs = dims(X, Y)
            entries.append(_entry(condition, f"({X.name}, {Y.name})", lhs == rhs, f"{lhs} ≠ {rhs}"))
    return entries


def _composable_pairs(universe: Universe):
    for X in universe:
        for Y in universe:
            for Z in universe:
                for f in hom_basis(X, Y):
                    for g in hom_basis(Y, Z):
                        yield f, g


def functor_composition_check(R: Recollement, U: RecollementUniverses) -> CheckResult:
    """여섯 functor 가 항등사상과 합성을 보존하는지 universe 의 사상 쌍 전부로 확인합니다."""
    domains = {
        Functor.I_UPPER: U.B,
        Functor.I_LOWER: U.A,
        Functor.I_SHRIEK: U.B,
        Functor.J_SHRIEK: U.C,
        Functor.J_UPPER: U.B,
        Functor.J_LOWER: U.C,
    }
    entries = []
    for functor, universe in domains.items():
        failures = [
            M.name for M in universe
            if not (apply_functor(R, functor, ModuleMap.identity(M)) - ModuleMap.identity(apply_functor(R, functor, M))).is_zero()
        ]
        entries.append(_entry(f"{functor.value}(id) = id", universe.algebra.name, not failures,
                              f"실패: {', '.join(failures)}"))

        count, failed = 0, None
        for f, g in _composable_pairs(universe):
            count += 1
            lhs = apply_functor(R, functor, g.compose(f))
            rhs = apply_functor(R, functor, g).compose(apply_functor(R, functor, f))
            if not (lhs - rhs).is_zero():
                failed = f"{f.source.name} → {f.target.name} → {g.target.name}"
                break
        entries.append(_entry(f"{functor.value}(g∘f) = {functor.value}(g)∘{functor.value}(f)",
                              f"{universe.algebra.name} ({count} 쌍)", failed is None, failed or ""))
    return CheckResult.build(entries)


def _dimension_sum_entries(R: Recollement, U: RecollementUniverses) -> List[VerificationEntry]:
    condition = "dim B = dim j_!j*(B) + dim i_*i*(B)"
    missing = [f for f in (Functor.I_UPPER, Functor.I_SHRIEK) if not R.exact(f)]
    if missing:
        return [_skipped(condition, missing[0].value, R)]
    entries = []
    for X in U.B:
        left = R.composite("j_!j*", X).total_dim
        right = R.composite("i_*i*", X).total_dim
        entries.append(_entry(condition, X.name, X.total_dim == left + right,
                              f"{X.total_dim} ≠ {left} + {right}"))
    return entries


def check_axioms(R: Recollement, U: RecollementUniverses) -> CheckResult:
    """adjunction, 단위/여단위 동형, 소멸 항등식, 사영 보존, 충실충만성, 표준 완전열"""
    entries: List[VerificationEntry] = []
    certs: List[CertificateEntry] = []
    entries.extend(_hom_adjunction_entries(R, U))

    for Y in U.A:
        entries.append(_entry("counit i*i_* → Id is an isomorphism", Y.name, R.counit_i_upper(Y).is_isomorphism()))
        entries.append(_entry("unit Id → i^!i_* is an isomorphism", Y.name, R.unit_i_shriek(Y).is_isomorphism()))
        entries.append(_entry("j*i_* = 0", Y.name, R.j_upper(R.i_lower(Y)).is_zero))
    for Z in U.C:
        entries.append(_entry("unit Id → j*j_! is an isomorphism", Z.name, R.unit_j_shriek(Z).is_isomorphism()))
        entries.append(_entry("counit j*j_* → Id is an isomorphism", Z.name, R.counit_j_lower(Z).is_isomorphism()))
        entries.append(_entry("i*j_! = 0", Z.name, R.i_upper(R.j_shriek(Z)).is_zero))
        entries.append(_entry("i^!j_* = 0", Z.name, R.i_shriek(R.j_lower(Z)).is_zero))
    for X in U.B:
        if R.j_upper(X).is_zero:
            entries.append(_entry("j*X = 0 ⇒ unit X → i_*i*X is an isomorphism", X.name,
                                  R.unit_i_upper(X).is_isomorphism()))

    gated = [
        ("i^!j_! = 0", Functor.I_UPPER, U.C, lambda Z: R.i_shriek(R.j_shriek(Z)).is_zero),
        ("i*j_* = 0", Functor.I_SHRIEK, U.C, lambda Z: R.i_upper(R.j_lower(Z)).is_zero),
    ]
    for condition, hypothesis, universe, test in gated:
        if not R.exact(hypothesis):
            entries.append(_skipped(condition, hypothesis.value, R))
            continue
        for Z in universe:
            entries.append(_entry(condition, Z.name, test(Z)))

    for P in projectives(R.B):
        entries.append(_entry("i* preserves projectives", P.name, is_projective(R.i_upper(P))))
    for P in projectives(R.C):
        entries.append(_entry("j_! preserves projectives", P.name, is_projective(R.j_shriek(P))))
    conditional = [
        ("i_* preserves projectives", Functor.I_SHRIEK, R.A, R.i_lower),
        ("j* preserves projectives", Functor.J_LOWER, R.B, R.j_upper),
    ]
    for condition, hypothesis, algebra, functor in conditional:
        if not R.exact(hypothesis):
            entries.append(_skipped(condition, hypothesis.value, R))
            continue
        for P in projectives(algebra):
            entries.append(_entry(condition, P.name, is_projective(functor(P))))

    faithful = [
        ("i_* fully faithful: dim Hom(i_*Y, i_*Y') = dim Hom(Y, Y')", U.A, R.i_lower),
        ("j_! fully faithful: dim Hom(j_!Z, j_!Z') = dim Hom(Z, Z')", U.C, R.j_shriek),
        ("j_* fully faithful: dim Hom(j_*Z, j_*Z') = dim Hom(Z, Z')", U.C, R.j_lower),
    ]
    for condition, universe, functor in faithful:
        for X, Y in _pairs(universe, universe):
            lhs, rhs = hom_dim(functor(X), functor(Y)), hom_dim(X, Y)
            entries.append(_entry(condition, f"({X.name}, {Y.name})", lhs == rhs, f"{lhs} ≠ {rhs}"))

    for side, hypothesis in (("left", Functor.I_UPPER), ("right", Functor.I_SHRIEK)):
        condition = f"canonical {side} sequence is short exact"
        if not R.exact(hypothesis):
            entries.append(_skipped(condition, hypothesis.value, R))
            continue
        for X in U.B:
            ses = canonical_ses(R, X, side)
            certs.append(ses.to_entry())
            entries.append(_entry(condition, X.name, ses.exact, ses.failed()))
    entries.extend(_dimension_sum_entries(R, U))
    entries.extend(functor_composition_check(R, U).entries)
    entries.extend(check_module_identities(U.B).entries)

    result = CheckResult.build(entries, certs)
    logger.info(f"axiom suite {R}: {result.verdict.value} ({len(entries)} 항목)")
    return result


def ext_adjunction_check(R: Recollement, U: RecollementUniverses, n_max: int = 4) -> CheckResult:
    """exactness 가정 아래 Ext 차원의 adjunction 등식 (1 ≤ n ≤ n_max)"""
    clauses = [
        ("dim Ext^n(i*X, Y) = dim Ext^n(X, i_*Y)", Functor.I_UPPER, U.B, U.A, R.i_upper, R.i_lower),
        ("dim Ext^n(i_*X, Y) = dim Ext^n(X, i^!Y)", Functor.I_SHRIEK, U.A, U.B, R.i_lower, R.i_shriek),
        ("dim Ext^n(j_!X, Y) = dim Ext^n(X, j*Y)", Functor.J_SHRIEK, U.C, U.B, R.j_shriek, R.j_upper),
        ("dim Ext^n(j*X, Y) = dim Ext^n(X, j_*Y)", Functor.J_LOWER, U.B, U.C, R.j_upper, R.j_lower),
    ]
    entries = []
    for condition, hypothesis, U1, U2, left, right in clauses:
        if not R.exact(hypothesis):
            entries.append(_skipped(condition, hypothesis.value, R))
            continue
        for X, Y in _pairs(U1, U2):
            FX, GY = left(X), right(Y)
            lhs = [ext_dim(FX, Y, n) for n in range(1, n_max + 1)]
            rhs = [ext_dim(X, GY, n) for n in range(1, n_max + 1)]
            entries.append(_entry(condition, f"({X.name}, {Y.name})", lhs == rhs, f"{lhs} ≠ {rhs}"))
    return CheckResult.build(entries)


# ============================================================
# 표준 짧은 완전열
# ============================================================

@dataclass
class CanonicalSES:
    """left: 0 → j_!j*B → B → i_*i*B → 0, right: 0 → i_*i^!B → B → j_*j*B → 0"""
    side: str
    first: ModuleMap
    second: ModuleMap
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def kernel(self) -> Module:
        return self.first.source

    @property
    def middle(self) -> Module:
        return self.first.target

    @property
    def cokernel(self) -> Module:
        return self.second.target

    @property
    def exact(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> str:
        return ", ".join(k for k, ok in self.checks.items() if not ok)

    @property
    def cert_id(self) -> str:
        return f"ses:{self.side}:{_label(self.middle)}"

    def to_entry(self) -> CertificateEntry:
        return CertificateEntry(id=self.cert_id, kind="ses", body={
            "side": self.side,
            "object": _label(self.middle),
            "dims": [list(self.kernel.dim_vector), list(self.middle.dim_vector), list(self.cokernel.dim_vector)],
            "checks": dict(self.checks),
        })


def canonical_ses(R: Recollement, M: Module, side: str = "left", force: bool = False) -> CanonicalSES:
    """Raises:
        HypothesisError: left 는 i* exact, right 는 i^! exact 가 필요 (force 면 검사만 생략)
    """
    hypothesis = Functor.I_UPPER if side == "left" else Functor.I_SHRIEK
    if side not in ("left", "right"):
        raise ValueError(f"side 는 left 또는 right 입니다: {side}")
    if not force and not R.exact(hypothesis):
        raise HypothesisError(f"{hypothesis.value} exact", R.exactness.get(hypothesis.value, Verdict.UNKNOWN).value)
    if side == "left":
        first, second = R.counit_j_shriek(M), R.unit_i_upper(M)
    else:
        first, second = R.counit_i_shriek(M), R.unit_j_lower(M)
    checks = {
        "first map injective": first.is_injective(),
        "second map surjective": second.is_surjective(),
        "composite is zero": second.compose(first).is_zero(),
        "dimensions add": M.total_dim == first.source.total_dim + second.target.total_dim,
    }
    return CanonicalSES(side, first, second, checks)


# ============================================================
# Horseshoe
# ============================================================

@dataclass
class HorseshoeStep:
    """0→X→Y→Z→0 위에 a: X→X₀, b: Z→Z₀ 를 얹어 만든 가운데 열 ε: Y → Z₀⊕X₀
    과 여핵들의 유도된 열 0→X₁→Y₁→Z₁→0"""
    middle: Optional[DirectSum] = None
    eps: Optional[ModuleMap] = None
    f_next: Optional[ModuleMap] = None
    g_next: Optional[ModuleMap] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


def horseshoe_step(f: ModuleMap, g: ModuleMap, a: ModuleMap, b: ModuleMap) -> HorseshoeStep:
    """ã∘f = a 인 ã: Y → X₀ 가 있어야 합니다 (Ext¹(Z, X₀) = 0 이면 존재)."""
    step = HorseshoeStep()
    a_ext = extend_along_mono(f, a)
    step.checks["a extends along X → Y"] = a_ext is not None
    if a_ext is None:
        return step

    ds = direct_sum([b.target, a.target], algebra=f.algebra)
    inc_z, inc_x = ds.inclusions
    pr_z, _ = ds.projections
    eps = inc_z.compose(b.compose(g)) + inc_x.compose(a_ext)
    step.middle, step.eps = ds, eps

    pa = kernel_cokernel(a).projection
    pb = kernel_cokernel(b).projection
    pi = kernel_cokernel(eps).projection
    f_next = extend_along_mono(pa, pi.compose(inc_x))
    g_next = extend_along_mono(pi, pb.compose(pr_z))
    step.f_next, step.g_next = f_next, g_next

    step.checks.update({
        "left square commutes": (eps.compose(f) - inc_x.compose(a)).is_zero(),
        "right square commutes": (pr_z.compose(eps) - b.compose(g)).is_zero(),
        "middle map injective": eps.is_injective() or not (a.is_injective() and b.is_injective()),
        "induced left map exists": f_next is not None,
        "induced right map exists": g_next is not None,
    })
    if f_next is not None and g_next is not None:
        step.checks.update({
            "induced sequence is short exact": _is_short_exact(f_next, g_next),
        })
    return step


__all__ = [
    "CanonicalSES",
    "Functor",
    "HorseshoeStep",
    "Recollement",
    "RecollementUniverses",
    "apply_functor",
    "build_recollement",
    "build_universes",
    "canonical_ses",
    "check_axioms",
    "decide_functor_exactness",
    "ext_adjunction_check",
    "functor_exactness",
    "horseshoe_step",
]
