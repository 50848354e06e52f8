"""Bound quiver 대수

경로 기저, 곱셈, 표준 모듈(P_v, S_v, I_v)과 vertex idempotent e 에 대한
A/AeA, eAe 표현을 다룹니다.

규약: 오른쪽 모듈만 사용합니다. arrow a: u→v 는 M_u → M_v 선형사상이고
경로 a1*a2*...*ak 는 왼쪽에서 오른쪽으로 합성되므로 그 행렬은
M_ak ... M_a1 입니다.
"""

import hashlib
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import MAX_WEIGHT
from .errors import AlgebraError, InfiniteDimensionalError, NonAdmissibleError, SpecParseError
from .exactlin import FieldSpec, Mat, nullspace, quotient_maps, rank, rref

logger = logging.getLogger(__name__)

# 한 weight 에서 허용하는 경로 수 상한
MAX_PATHS_PER_WEIGHT = 4096


# ============================================================
# Quiver
# ============================================================

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    weight: int = 1


@dataclass(frozen=True, order=True)
class Path:
    """경로. arrows 가 비어 있으면 vertex start 의 자명한 경로 e_start"""
    start: str
    arrows: Tuple[str, ...]
    end: str

    @classmethod
    def trivial(cls, v: str) -> "Path":
        return cls(v, (), v)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return "*".join(self.arrows) if self.arrows else f"e{self.start}"


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError(f"중복된 vertex: {self.vertices}")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError(f"중복된 arrow 이름: {names}")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise AlgebraError(f"arrow {a.name}: 선언되지 않은 vertex ({a.source} -> {a.target})")
            if a.weight < 1:
                raise AlgebraError(f"arrow {a.name}: weight 는 1 이상이어야 합니다")

    @cached_property
    def arrow_by_name(self) -> Dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def max_weight(self) -> int:
        return max((a.weight for a in self.arrows), default=1)

    def arrow_path(self, name: str) -> Path:
        a = self.arrow_by_name[name]
        return Path(a.source, (a.name,), a.target)

    def weight(self, path: Path) -> int:
        return sum(self.arrow_by_name[n].weight for n in path.arrows)

    def path_vertices(self, path: Path) -> List[str]:
        return [path.start] + [self.arrow_by_name[n].target for n in path.arrows]

    def concat(self, p: Path, q: Path) -> Optional[Path]:
        if p.end != q.start:
            return None
        return Path(p.start, p.arrows + q.arrows, q.end)

    def make_path(self, names: Sequence[str]) -> Path:
        """arrow 이름 목록으로 경로를 만듭니다 (연결성 검사 포함)"""
        if not names:
            raise AlgebraError("빈 경로는 vertex 없이 만들 수 없습니다")
        arrows = []
        for n in names:
            if n not in self.arrow_by_name:
                raise AlgebraError(f"알 수 없는 arrow: {n}")
            arrows.append(self.arrow_by_name[n])
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise AlgebraError(f"연결되지 않는 경로: {'*'.join(names)} ({a.name} 다음 {b.name})")
        return Path(arrows[0].source, tuple(names), arrows[-1].target)

    def paths_by_weight(self, n: int, cache: Dict[int, List[Path]]) -> List[Path]:
        """weight 가 정확히 n 인 경로 (정렬됨). cache 는 호출자가 소유"""
        if n in cache:
            return cache[n]
        if n == 0:
            result = [Path.trivial(v) for v in self.vertices]
        else:
            found = set()
            for a in self.arrows:
                if a.weight > n:
                    continue
                for q in self.paths_by_weight(n - a.weight, cache):
                    if q.end == a.source:
                        found.add(Path(q.start, q.arrows + (a.name,), a.target))
            result = sorted(found)
        if len(result) > MAX_PATHS_PER_WEIGHT:
            raise InfiniteDimensionalError(
                f"weight {n} 경로가 {len(result)}개로 상한을 넘었습니다 (infinite-dimensional 의심)"
            )
        cache[n] = result
        return result


# 관계식: (계수, 경로) 항들의 튜플
Relation = Tuple[Tuple[int, Path], ...]


def _relation_str(rel: Relation) -> str:
    return " + ".join(f"{c}*{p}" if c != 1 else str(p) for c, p in rel)


# ============================================================
# BoundQuiverAlgebra
# ============================================================

class BoundQuiverAlgebra:
    """kQ/I (I 는 admissible, weight 에 대해 동차인 관계식으로 생성)

    생성 시 weight 별로 이데알 I_n 을 계산하고, pivot 이 아닌 경로들을
    표준 단항식으로 택해 경로 기저를 만듭니다. A_n 이 연속 max_weight 번
    0 이면 포화된 것으로 보고 멈추며, MAX_WEIGHT 를 넘으면 무한차원으로
    거부합니다.

    Args:
        quiver (Quiver): quiver
        field (FieldSpec): 계수체
        relations (Iterable[Relation]): 관계식 목록
        name (str): 표시용 이름
    """

    def __init__(self, quiver: Quiver, field: FieldSpec, relations: Iterable[Relation] = (),
                 name: str = "", max_weight: int = MAX_WEIGHT):
        self.quiver = quiver
        self.field = field
        self.name = name or "A"
        self.relations: Tuple[Relation, ...] = tuple(
            r for r in (self._normalize(rel) for rel in relations) if r
        )
        self._path_cache: Dict[int, List[Path]] = {}
        self._build(max_weight)
        logger.debug(f"대수 구성: {self.name} (dim={self.dim}, p={self.p})")

    # ---------- 구성 ----------

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> Tuple[Arrow, ...]:
        return self.quiver.arrows

    def _normalize(self, rel: Relation) -> Relation:
        coeffs: Dict[Path, int] = defaultdict(int)
        for c, path in rel:
            coeffs[path] = (coeffs[path] + int(c)) % self.p
        terms = tuple((c, path) for path, c in sorted(coeffs.items()) if c)
        if not terms:
            return terms
        starts = {t[1].start for t in terms}
        ends = {t[1].end for t in terms}
        if len(starts) > 1 or len(ends) > 1:
            raise NonAdmissibleError(f"평행하지 않은 항을 가진 관계식: {_relation_str(terms)}")
        if any(t[1].length < 2 for t in terms):
            raise NonAdmissibleError(f"arrow 제곱 이데알에 속하지 않는 관계식: {_relation_str(terms)}")
        weights = {self.quiver.weight(t[1]) for t in terms}
        if len(weights) > 1:
            raise NonAdmissibleError(f"동차가 아닌 관계식: {_relation_str(terms)}")
        return terms

    def _build(self, max_weight: int):
        q = self.quiver
        rel_by_weight: Dict[int, List[Relation]] = defaultdict(list)
        for rel in self.relations:
            rel_by_weight[q.weight(rel[0][1])].append(rel)

        self._ideal_rows: Dict[int, List[Dict[Path, int]]] = {}
        self._columns: Dict[int, List[Path]] = {}
        self._col_index: Dict[int, Dict[Path, int]] = {}
        self._proj: Dict[int, Mat] = {}
        self._local_basis: Dict[int, List[Path]] = {}

        wmax = q.max_weight
        n, zero_run, top = 0, 0, 0
        while True:
            if n > max_weight:
                raise InfiniteDimensionalError(
                    f"{self.name}: weight {max_weight} 까지 경로가 소멸하지 않습니다 (infinite-dimensional)"
                )
            basis_n = self._build_weight(n, rel_by_weight.get(n, []))
            if basis_n:
                top, zero_run = n, 0
            elif n > 0:
                zero_run += 1
            if n > 0 and zero_run >= wmax:
                break
            n += 1

        self.top_weight = top
        self.basis: List[Path] = sorted(
            (path for w in range(top + 1) for path in self._local_basis.get(w, [])),
            key=lambda path: (q.weight(path), path),
        )
        self.index: Dict[Path, int] = {path: i for i, path in enumerate(self.basis)}
        self._local_to_global: Dict[int, List[int]] = {
            w: [self.index[path] for path in paths] for w, paths in self._local_basis.items()
        }

    def _build_weight(self, n: int, relations: List[Relation]) -> List[Path]:
        q = self.quiver
        paths = q.paths_by_weight(n, self._path_cache)
        # 큰 경로가 pivot 이 되도록 역순으로 열을 배치 → 작은 경로가 기저로 남음
        columns = sorted(paths, reverse=True)
        col_index = {path: i for i, path in enumerate(columns)}

        vectors: List[Dict[Path, int]] = [dict((path, c) for c, path in rel) for rel in relations]
        for a in q.arrows:
            lower = n - a.weight
            if lower < 2:
                continue
            for row in self._ideal_rows.get(lower, []):
                left: Dict[Path, int] = {}
                right: Dict[Path, int] = {}
                for path, c in row.items():
                    if a.target == path.start:
                        left[Path(a.source, (a.name,) + path.arrows, path.end)] = c
                    if path.end == a.source:
                        right[Path(path.start, path.arrows + (a.name,), a.target)] = c
                for vec in (left, right):
                    if vec:
                        vectors.append(vec)

        m = len(columns)
        if vectors and m:
            mat = np.zeros((len(vectors), m), dtype=np.int64)
            for i, vec in enumerate(vectors):
                for path, c in vec.items():
                    mat[i, col_index[path]] = c % self.p
            r, pivots = rref(mat, self.p)
            ideal_rows = [
                {columns[j]: int(r[i, j]) for j in np.nonzero(r[i])[0]}
                for i in range(len(pivots))
            ]
            proj, _ = quotient_maps(r[:len(pivots)].T, m, self.p)
            pivot_set = set(pivots)
            free = [j for j in range(m) if j not in pivot_set]
        else:
            ideal_rows = []
            proj = np.eye(m, dtype=np.int64)
            free = list(range(m))

        basis_paths = [columns[j] for j in free]
        order = sorted(range(len(basis_paths)), key=lambda i: basis_paths[i])
        self._ideal_rows[n] = ideal_rows
        self._columns[n] = columns
        self._col_index[n] = col_index
        self._proj[n] = proj[order, :] if len(order) else proj[:0, :]
        self._local_basis[n] = [basis_paths[i] for i in order]
        return self._local_basis[n]

    # ---------- 기본 정보 ----------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.vertices

    def __repr__(self) -> str:
        return f"BoundQuiverAlgebra({self.name}, dim={self.dim}, p={self.p})"

    @cached_property
    def signature(self) -> str:
        """정규화된 정의 문자열 (리포트의 대수 해시 입력)"""
        lines = [f"p={self.p}", "vertices=" + ",".join(self.vertices)]
        lines += [f"{a.name}:{a.source}->{a.target}/{a.weight}" for a in self.arrows]
        lines += ["rel " + _relation_str(rel) for rel in self.relations]
        return "\n".join(lines)

    @cached_property
    def hash(self) -> str:
        return hashlib.sha256(self.signature.encode("utf-8")).hexdigest()[:16]

    def weight(self, path: Path) -> int:
        return self.quiver.weight(path)

    def basis_paths(self, start: Optional[str] = None, end: Optional[str] = None) -> List[Tuple[int, Path]]:
        return [
            (i, path) for i, path in enumerate(self.basis)
            if (start is None or path.start == start) and (end is None or path.end == end)
        ]

    # ---------- 곱셈 ----------

    def path_coords(self, path: Path) -> Dict[int, int]:
        """kQ 의 경로를 표준형으로 환원한 좌표 {기저 index: 계수}"""
        n = self.weight(path)
        if n > self.top_weight or n not in self._proj:
            return {}
        col = self._col_index[n].get(path)
        if col is None:
            return {}
        column = self._proj[n][:, col]
        glob = self._local_to_global[n]
        return {glob[i]: int(c) for i, c in enumerate(column) if c}

    def multiply(self, x: Path, y: Path) -> Dict[int, int]:
        path = self.quiver.concat(x, y)
        if path is None:
            return {}
        return self.path_coords(path)

    def multiply_vec(self, vec: Dict[int, int], y: Path, left: bool = False) -> Dict[int, int]:
        """기저 좌표 벡터 vec 에 경로 y 를 오른쪽(기본) 또는 왼쪽에서 곱합니다."""
        out: Dict[int, int] = defaultdict(int)
        for i, c in vec.items():
            prod = self.multiply(y, self.basis[i]) if left else self.multiply(self.basis[i], y)
            for j, d in prod.items():
                out[j] = (out[j] + c * d) % self.p
        return {j: c for j, c in out.items() if c}

    def mult_table(self) -> Dict[Tuple[int, int], Dict[int, int]]:
        return {
            (i, j): self.multiply(x, y)
            for i, x in enumerate(self.basis)
            for j, y in enumerate(self.basis)
        }

    def relation_holds(self, rel: Relation) -> bool:
        total: Dict[int, int] = defaultdict(int)
        for c, path in rel:
            for i, d in self.path_coords(path).items():
                total[i] = (total[i] + c * d) % self.p
        return not any(total.values())


# ============================================================
# 표준 모듈
# ============================================================

def _regular_action(A: BoundQuiverAlgebra, v: str, arrow: Arrow,
                    local: Dict[str, Dict[int, int]]) -> Mat:
    """P_v = e_v A 에서 arrow b 의 오른쪽 곱 행렬"""
    src = A.basis_paths(start=v, end=arrow.source)
    tgt_dim = len(local[arrow.target])
    m = np.zeros((tgt_dim, len(src)), dtype=np.int64)
    b = A.quiver.arrow_path(arrow.name)
    for j, (_, x) in enumerate(src):
        for g, c in A.multiply(x, b).items():
            m[local[arrow.target][g], j] = c
    return m


def projective_module(A: BoundQuiverAlgebra, v: str):
    from .modcat import Module

    local = {w: {g: k for k, (g, _) in enumerate(A.basis_paths(start=v, end=w))} for w in A.vertices}
    dims = {w: len(local[w]) for w in A.vertices}
    maps = {a.name: _regular_action(A, v, a, local) for a in A.arrows}
    return Module(A, dims, maps, name=f"P{v}")


def simple_module(A: BoundQuiverAlgebra, v: str):
    from .modcat import Module

    dims = {w: int(w == v) for w in A.vertices}
    return Module(A, dims, {}, name=f"S{v}")


def injective_module(A: BoundQuiverAlgebra, v: str):
    """I_v = D(A e_v). (I_v)_w = D(e_w A e_v), M_b = L_b^T"""
    from .modcat import Module

    cols = {w: A.basis_paths(start=w, end=v) for w in A.vertices}
    dims = {w: len(cols[w]) for w in A.vertices}
    maps = {}
    for a in A.arrows:
        u, w = a.source, a.target
        pos_u = {g: k for k, (g, _) in enumerate(cols[u])}
        b = A.quiver.arrow_path(a.name)
        # L_b: e_w A e_v → e_u A e_v, y ↦ b·y
        lb = np.zeros((dims[u], dims[w]), dtype=np.int64)
        for j, (_, y) in enumerate(cols[w]):
            for g, c in A.multiply(b, y).items():
                lb[pos_u[g], j] = c
        maps[a.name] = lb.T.copy()
    return Module(A, dims, maps, name=f"I{v}")


def standard_modules(A: BoundQuiverAlgebra):
    """(simples, projectives, injectives) 를 vertex 순서대로 반환합니다."""
    simples = [simple_module(A, v) for v in A.vertices]
    projectives = [projective_module(A, v) for v in A.vertices]
    injectives = [injective_module(A, v) for v in A.vertices]
    return simples, projectives, injectives


# ============================================================
# Vertex idempotent 와 유도 대수
# ============================================================

@dataclass(frozen=True)
class VertexIdempotent:
    """e = Σ_{v∈E} e_v"""
    algebra: BoundQuiverAlgebra
    vertices: frozenset

    def __post_init__(self):
        if not self.vertices:
            raise AlgebraError("E 는 비어 있을 수 없습니다")
        unknown = set(self.vertices) - set(self.algebra.vertices)
        if unknown:
            raise AlgebraError(f"E 에 선언되지 않은 vertex: {sorted(unknown)}")

    @property
    def ordered(self) -> List[str]:
        return [v for v in self.algebra.vertices if v in self.vertices]

    @property
    def complement(self) -> List[str]:
        return [v for v in self.algebra.vertices if v not in self.vertices]

    @property
    def is_degenerate(self) -> bool:
        return not self.complement


def _as_vertex_set(A: BoundQuiverAlgebra, E) -> VertexIdempotent:
    if isinstance(E, VertexIdempotent):
        return E
    return VertexIdempotent(A, frozenset(str(v) for v in E))


def idempotent_quotient(A: BoundQuiverAlgebra, E) -> BoundQuiverAlgebra:
    """A/AeA 를 E 밖의 vertex 위의 bound quiver 대수로 표현합니다.

    E 를 지나는 항은 AeA 에 속하므로 관계식에서 지우고, 남는 것이 없는
    관계식은 버립니다. E 가 전체이면 영대수입니다.
    """
    e = _as_vertex_set(A, E)
    keep = e.complement
    q = A.quiver
    arrows = tuple(a for a in q.arrows if a.source in keep and a.target in keep)
    relations = []
    for rel in A.relations:
        terms = tuple((c, path) for c, path in rel if not set(q.path_vertices(path)) & e.vertices)
        if terms:
            relations.append(terms)
    if not keep:
        logger.warning(f"{A.name}: E 가 모든 vertex 이므로 A/AeA 는 영대수입니다")
    return BoundQuiverAlgebra(
        Quiver(tuple(keep), arrows), A.field, relations, name=f"{A.name}/AeA",
    )


def corner_presentation(A: BoundQuiverAlgebra, E) -> Tuple[BoundQuiverAlgebra, Dict[str, Path]]:
    """eAe 의 bound quiver 표현과 각 arrow 가 나타내는 A 의 경로

    arrow 는 weight 별로 r² 의 여공간을 이루는 단항식이고, weight 는 A 에서의
    weight 를 그대로 씁니다. 관계식은 weight 별 핵에서 이미 생성된 부분을
    뺀 나머지입니다.

    Returns:
        Tuple[BoundQuiverAlgebra, Dict[str, Path]]: (eAe, arrow 이름 → A 경로)
    """
    e = _as_vertex_set(A, E)
    p = A.p
    corner = [(i, path) for i, path in enumerate(A.basis) if path.start in e.vertices and path.end in e.vertices]
    nontrivial = [(i, path) for i, path in corner if path.length > 0]

    by_weight: Dict[int, List[Tuple[int, Path]]] = defaultdict(list)
    for i, path in nontrivial:
        by_weight[A.weight(path)].append((i, path))

    # r² 의 weight 별 성분
    r2: Dict[int, List[Dict[int, int]]] = defaultdict(list)
    for _, x in nontrivial:
        for _, y in nontrivial:
            prod = A.multiply(x, y)
            if prod:
                r2[A.weight(x) + A.weight(y)].append(prod)

    arrows: List[Arrow] = []
    images: Dict[str, Path] = {}
    for n in sorted(by_weight):
        elems = by_weight[n]
        # 큰 단항식이 pivot 이 되도록 역순 배치
        columns = list(reversed(elems))
        pos = {g: k for k, (g, _) in enumerate(columns)}
        free = list(range(len(columns)))
        if r2.get(n):
            mat = np.zeros((len(r2[n]), len(columns)), dtype=np.int64)
            for r, vec in enumerate(r2[n]):
                for g, c in vec.items():
                    mat[r, pos[g]] = c
            _, pivots = rref(mat, p)
            free = [k for k in free if k not in set(pivots)]
        for k in sorted(free, key=lambda k: columns[k][1]):
            path = columns[k][1]
            name = path.arrows[0] if path.length == 1 else ".".join(path.arrows)
            arrows.append(Arrow(name, path.start, path.end, n))
            images[name] = path

    cq = Quiver(tuple(e.ordered), tuple(arrows))
    relations = _corner_relations(A, cq, images, corner)
    C = BoundQuiverAlgebra(cq, A.field, relations, name=f"e{A.name}e")
    if C.dim != len(corner):
        raise AlgebraError(f"eAe 표현 차원 불일치: {C.dim} != {len(corner)}")
    return C, images


def _corner_relations(A: BoundQuiverAlgebra, cq: Quiver, images: Dict[str, Path],
                      corner: List[Tuple[int, Path]]) -> List[Relation]:
    p = A.p
    if not cq.arrows:
        return []
    top = max((A.weight(path) for _, path in corner), default=0)
    cache: Dict[int, List[Path]] = {}
    kernels: Dict[int, List[Dict[Path, int]]] = {}
    relations: List[Relation] = []

    for n in range(2, top + cq.max_weight + 1):
        paths = [path for path in cq.paths_by_weight(n, cache) if path.length >= 2]
        if not paths:
            kernels[n] = []
            continue
        # 각 경로의 A 에서의 상
        targets = [g for g, path in corner if A.weight(path) == n]
        tpos = {g: k for k, g in enumerate(targets)}
        image = np.zeros((len(targets), len(paths)), dtype=np.int64)
        for j, path in enumerate(paths):
            vec = A.path_coords(images[path.arrows[0]])
            for name in path.arrows[1:]:
                vec = A.multiply_vec(vec, images[name])
            for g, c in vec.items():
                image[tpos[g], j] = c
        kern = nullspace(image, p)
        kernels[n] = [
            {paths[i]: int(kern[i, k]) for i in np.nonzero(kern[:, k])[0]}
            for k in range(kern.shape[1])
        ]

        # 낮은 weight 핵에서 생성된 부분
        ppos = {path: i for i, path in enumerate(paths)}
        generated: List[np.ndarray] = []
        for a in cq.arrows:
            for vec in kernels.get(n - a.weight, []):
                left = np.zeros(len(paths), dtype=np.int64)
                right = np.zeros(len(paths), dtype=np.int64)
                for path, c in vec.items():
                    if a.target == path.start:
                        left[ppos[Path(a.source, (a.name,) + path.arrows, path.end)]] = c
                    if path.end == a.source:
                        right[ppos[Path(path.start, path.arrows + (a.name,), a.target)]] = c
                generated.extend(v for v in (left, right) if v.any())

        span = [g % p for g in generated]
        current = rank(np.array(span), p) if span else 0
        for vec in kernels[n]:
            row = np.zeros(len(paths), dtype=np.int64)
            for path, c in vec.items():
                row[ppos[path]] = c
            trial = span + [row]
            r = rank(np.array(trial), p)
            if r > current:
                span, current = trial, r
                relations.append(tuple((c, path) for path, c in sorted(vec.items())))
    return relations


def corner(A: BoundQuiverAlgebra, E) -> BoundQuiverAlgebra:
    return corner_presentation(A, E)[0]


def opposite(A: BoundQuiverAlgebra) -> BoundQuiverAlgebra:
    """A^op: arrow 방향과 관계식의 단어를 뒤집습니다."""
    q = A.quiver
    arrows = tuple(Arrow(a.name, a.target, a.source, a.weight) for a in q.arrows)
    relations = [
        tuple((c, Path(path.end, tuple(reversed(path.arrows)), path.start)) for c, path in rel)
        for rel in A.relations
    ]
    return BoundQuiverAlgebra(Quiver(q.vertices, arrows), A.field, relations, name=f"{A.name}^op")


# ============================================================
# 텍스트 정의 파싱
# ============================================================

_ARROW_RE = re.compile(r"^(?:arrow\s+)?([A-Za-z_]\w*)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")
_TERM_RE = re.compile(r"^(\d+)?\s*\*?\s*([A-Za-z_]\w*(?:\s*\*\s*[A-Za-z_]\w*)*)$")


def _parse_relation(q: Quiver, text: str, line: int, column: int) -> Relation:
    normalized = text.replace("-", "+-")
    terms = []
    for piece in normalized.split("+"):
        piece = piece.strip()
        if not piece:
            continue
        sign = 1
        if piece.startswith("-"):
            sign, piece = -1, piece[1:].strip()
        m = _TERM_RE.match(piece)
        if not m:
            raise SpecParseError(f"관계식 항을 해석할 수 없습니다: '{piece}'", line, column)
        coeff = int(m.group(1)) if m.group(1) else 1
        names = [n.strip() for n in m.group(2).split("*")]
        try:
            path = q.make_path(names)
        except AlgebraError as e:
            raise SpecParseError(str(e), line, column) from e
        terms.append((sign * coeff, path))
    if not terms:
        raise SpecParseError("빈 관계식", line, column)
    return tuple(terms)


def parse_algebra_lines(lines: Sequence[Tuple[int, str]], name: str = "") -> BoundQuiverAlgebra:
    """[algebra] 섹션의 (줄 번호, 내용) 목록으로 대수를 만듭니다.

    지원 형식::

        name = A2
        p = 2
        vertices = 1, 2
        a: 1 -> 2
        rel: a*b - 2 c*d
    """
    p: Optional[int] = None
    vertices: List[str] = []
    arrows: List[Arrow] = []
    raw_relations: List[Tuple[int, int, str]] = []

    for lineno, raw in lines:
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        column = len(raw) - len(raw.lstrip()) + 1
        key, _, value = text.partition("=")
        key = key.strip().lower()
        if key in ("p", "field") and value:
            try:
                p = int(value.strip().removeprefix("GF(").removesuffix(")"))
            except ValueError as e:
                raise SpecParseError(f"p 값을 해석할 수 없습니다: {value.strip()}", lineno, column) from e
        elif key == "name" and value:
            name = value.strip()
        elif key == "vertices" and value:
            vertices = [v for v in re.split(r"[,\s]+", value.strip()) if v]
        elif text.startswith(("rel:", "relation:", "rel ", "relation ")):
            body = re.split(r"[:\s]", text, maxsplit=1)[1].lstrip(": ").strip()
            raw_relations.append((lineno, column, body))
        else:
            m = _ARROW_RE.match(text)
            if not m:
                raise SpecParseError(f"해석할 수 없는 줄: '{text}'", lineno, column)
            arrows.append(Arrow(m.group(1), m.group(2), m.group(3)))

    if p is None:
        raise SpecParseError("[algebra] 에 p 가 없습니다", lines[0][0] if lines else 0, 1)
    if not vertices:
        raise SpecParseError("[algebra] 에 vertices 가 없습니다", lines[0][0] if lines else 0, 1)
    try:
        field = FieldSpec(p)
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except (ValueError, AlgebraError) as e:
        raise SpecParseError(str(e), lines[0][0] if lines else 0, 1) from e

    relations = [_parse_relation(quiver, body, ln, col) for ln, col, body in raw_relations]
    algebra = BoundQuiverAlgebra(quiver, field, relations, name=name)
    logger.info(f"대수 구성 완료: {algebra.name} (vertices={len(vertices)}, dim={algebra.dim}, p={p})")
    return algebra


def build_algebra(text: str, name: str = "") -> BoundQuiverAlgebra:
    """텍스트 정의로부터 대수를 만듭니다. 섹션 헤더 `[algebra]` 는 있어도 되고 없어도 됩니다."""
    lines = [
        (i, line) for i, line in enumerate(text.splitlines(), start=1)
        if line.strip() and line.strip().lower() != "[algebra]"
    ]
    return parse_algebra_lines(lines, name=name)
