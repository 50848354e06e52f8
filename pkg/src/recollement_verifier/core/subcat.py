"""유한 부분범주 계산

부분범주는 Universe 의 직분해 불가능 동형류 index 집합이며 add(members)
(동형, 유한 직합, 영모듈에 대해 닫힘)를 나타냅니다. "모든 대상" 에 대한
양화는 열거된 universe 위에서 해석됩니다.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..report import CertificateEntry, CheckResult, Verdict, VerificationEntry, verdict_of
from .errors import DomainMismatchError
from .exactlin import Mat, column_basis
from .modcat import (
    ExtCertificate,
    ExtVerdict,
    Module,
    ModuleMap,
    Universe,
    direct_sum,
    hom_basis,
    in_span,
    quotient,
    submodule,
)

logger = logging.getLogger(__name__)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class PerpKind(str, Enum):
    ALL = "all"     # 모든 i ≥ 1
    ONE = "1"
    ZERO = "0"


def module_label(M: Module) -> str:
    return M.name or "D" + ".".join(map(str, M.dim_vector))


# ============================================================
# Subcat
# ============================================================

@dataclass(frozen=True)
class Subcat:
    universe: Universe
    members: FrozenSet[int] = frozenset()

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        bad = [i for i in members if not 0 <= i < len(self.universe)]
        if bad:
            raise IndexError(f"universe 밖의 index: {sorted(bad)}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_names(cls, universe: Universe, names: Iterable[str]) -> "Subcat":
        return cls(universe, frozenset(universe.index(n) for n in names))

    @classmethod
    def whole(cls, universe: Universe) -> "Subcat":
        return cls(universe, frozenset(range(len(universe))))

    @classmethod
    def empty(cls, universe: Universe) -> "Subcat":
        return cls(universe)

    @classmethod
    def projectives(cls, universe: Universe) -> "Subcat":
        return cls(universe, universe.projective_indices())

    @property
    def algebra(self):
        return self.universe.algebra

    @property
    def indices(self) -> List[int]:
        return sorted(self.members)

    def names(self) -> List[str]:
        return [self.universe.name(i) for i in self.indices]

    def modules(self) -> List[Module]:
        return [self.universe[i] for i in self.indices]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __repr__(self) -> str:
        return f"Subcat({self.algebra.name}: {{{', '.join(self.names())}}})"

    def contains(self, M: Module) -> bool:
        """M ∈ add(members). 영모듈은 항상 포함"""
        return self.universe.support(M) <= self.members

    def _same(self, other: "Subcat"):
        if other.universe is not self.universe:
            raise DomainMismatchError("서로 다른 universe 의 부분범주입니다")

    def union(self, other: "Subcat") -> "Subcat":
        self._same(other)
        return Subcat(self.universe, self.members | other.members)

    def intersection(self, other: "Subcat") -> "Subcat":
        self._same(other)
        return Subcat(self.universe, self.members & other.members)

    def issubset(self, other: "Subcat") -> bool:
        self._same(other)
        return self.members <= other.members


def make_subcat(universe: Universe, generators: Sequence[Module]) -> Subcat:
    """생성자들의 직합 성분으로 additive closure 를 만듭니다.

    Raises:
        OutsideUniverseError: 성분이 universe 밖에 있는 경우
    """
    members = set()
    for M in generators:
        members |= universe.support(M)
    return Subcat(universe, frozenset(members))


# ============================================================
# Fac, trace
# ============================================================

def trace_spaces(S: Subcat, X: Module) -> Dict[str, Mat]:
    """tX = Σ_{T∈S} Σ_{g: T→X} im g 의 vertex 별 기저"""
    A, p = X.algebra, X.p
    cols: Dict[str, List[Mat]] = {v: [] for v in A.vertices}
    for T in S.modules():
        for g in hom_basis(T, X):
            for v in A.vertices:
                cols[v].append(g.vertex_maps[v])
    return {
        v: column_basis(np.hstack(cs), p) if cs else np.zeros((X.dims[v], 0), dtype=np.int64)
        for v, cs in cols.items()
    }


def trace_dim(S: Subcat, X: Module) -> int:
    return sum(b.shape[1] for b in trace_spaces(S, X).values())


def fac(S: Subcat) -> Subcat:
    """Fac(S): add(S) 의 대상에서 전사사상을 받는 universe 원소

    C ∈ Fac(add S) 와 trace_S(C) = C 는 동치입니다.
    """
    U = S.universe
    members = frozenset(i for i, C in enumerate(U) if trace_dim(S, C) == C.total_dim)
    return Subcat(U, members)


# ============================================================
# 직교 부분범주
# ============================================================

@dataclass
class PerpResult:
    subcat: Subcat
    flagged: List[str] = field(default_factory=list)
    certificates: List[ExtCertificate] = field(default_factory=list)

    @property
    def is_flagged(self) -> bool:
        return bool(self.flagged)


def _vanishes(U: Universe, i: int, j: int, kind: PerpKind) -> Tuple[bool, Optional[ExtCertificate]]:
    if kind == PerpKind.ZERO:
        return U.hom_dim(i, j) == 0, None
    if kind == PerpKind.ONE:
        return U.ext1(i, j) == 0, None
    cert = U.ext_all(i, j)
    return cert.verdict != ExtVerdict.NONZERO, cert


def perp(S: Subcat, kind: PerpKind = PerpKind.ALL, side: Side = Side.LEFT) -> PerpResult:
    """직교 부분범주

    left: {X : Ext^k(X, S) = 0}, right: {X : Ext^k(S, X) = 0}.
    kind=all 에서 BOUNDED_ONLY 인증서는 포함하되 flagged 로 남깁니다.
    """
    kind, side = PerpKind(kind), Side(side)
    U = S.universe
    members, flagged, certs = set(), [], []
    for x in range(len(U)):
        ok, bounded = True, False
        for t in S.indices:
            i, j = (x, t) if side == Side.LEFT else (t, x)
            vanish, cert = _vanishes(U, i, j, kind)
            if cert is not None:
                certs.append(cert)
                bounded = bounded or cert.verdict == ExtVerdict.BOUNDED_ONLY
            if not vanish:
                ok = False
                break
        if ok:
            members.add(x)
            if bounded:
                flagged.append(U.name(x))
    if flagged:
        logger.warning(f"{side.value}-perp({kind.value}): 유계 검증만 된 원소 {flagged}")
    return PerpResult(Subcat(U, frozenset(members)), flagged, certs)


# ============================================================
# 근사 (approximation)
# ============================================================

@dataclass
class ApproxCertificate:
    """X → ⊕T (left) 또는 ⊕T → X (right) 근사와 인수분해 검증 결과"""
    obj: str
    subcat: List[str]
    direction: Side
    map: ModuleMap
    components: List[Tuple[int, ModuleMap]]
    labels: List[str] = field(default_factory=list)
    status: str = "EXISTS"
    trivial: bool = False
    verified: Optional[bool] = None
    failures: List[str] = field(default_factory=list)

    @property
    def cert_id(self) -> str:
        return f"approx:{self.direction.value}:{self.obj}|{','.join(self.subcat) or '0'}"

    @property
    def target(self) -> Module:
        return self.map.target if self.direction == Side.LEFT else self.map.source

    def to_dict(self) -> dict:
        return {
            "object": self.obj,
            "subcat": list(self.subcat),
            "direction": self.direction.value,
            "status": self.status,
            "trivial": self.trivial,
            "approximation": list(self.labels),
            "verified": self.verified,
            "failures": list(self.failures),
        }

    def to_entry(self) -> CertificateEntry:
        return CertificateEntry(id=self.cert_id, kind="approx", body=self.to_dict())


def approximation(X: Module, S: Subcat, direction: Side = Side.LEFT,
                  verify: bool = True) -> ApproxCertificate:
    """Hom 기저를 모은 보편 근사

    left: X → ⊕_{T∈S} T^{dim Hom(X,T)}, right: ⊕_{T∈S} T^{dim Hom(T,X)} → X.
    S 가 비어 있으면 영모듈과의 영사상을 돌려주고 status NONE 으로 표시합니다.
    """
    direction = Side(direction)
    U = S.universe
    if X.algebra is not U.algebra:
        raise DomainMismatchError("근사: 대상이 universe 의 대수 위에 있지 않습니다")
    A = X.algebra
    components: List[Tuple[int, ModuleMap]] = []
    for idx in S.indices:
        T = U[idx]
        maps = hom_basis(X, T) if direction == Side.LEFT else hom_basis(T, X)
        components.extend((idx, g) for g in maps)

    ds = direct_sum([U[idx] for idx, _ in components], algebra=A)
    vertex_maps = {}
    for v in A.vertices:
        blocks = [g.vertex_maps[v] for _, g in components]
        if direction == Side.LEFT:
            vertex_maps[v] = np.vstack(blocks) if blocks else np.zeros((0, X.dims[v]), dtype=np.int64)
        else:
            vertex_maps[v] = np.hstack(blocks) if blocks else np.zeros((X.dims[v], 0), dtype=np.int64)
    f = ModuleMap(X, ds.module, vertex_maps) if direction == Side.LEFT else ModuleMap(ds.module, X, vertex_maps)

    cert = ApproxCertificate(
        obj=module_label(X),
        subcat=S.names(),
        direction=direction,
        map=f,
        components=components,
        labels=[U.name(i) for i, _ in components],
        status="EXISTS" if S.members else "NONE",
        trivial=not components,
    )
    if verify:
        cert.failures = factorization_failures(cert, S)
        cert.verified = not cert.failures
    return cert


def factorization_failures(cert: ApproxCertificate, check: Subcat) -> List[str]:
    """check 의 모든 원소 T 와 모든 사상에 대해 근사를 통한 인수분해를 검사합니다."""
    f = cert.map
    failures = []
    for idx in check.indices:
        T = check.universe[idx]
        if cert.direction == Side.LEFT:
            through = [psi.compose(f) for psi in hom_basis(f.target, T)]
            maps = hom_basis(f.source, T)
        else:
            through = [f.compose(psi) for psi in hom_basis(T, f.source)]
            maps = hom_basis(T, f.target)
        for k, g in enumerate(maps):
            if not in_span(through, g):
                failures.append(f"{check.universe.name(idx)}[{k}]")
    return failures


def is_functorially_finite(S: Subcat, direction: Side = Side.RIGHT) -> CheckResult:
    """universe 의 모든 X 에 대해 근사를 만들고 인수분해를 검증합니다.

    빈 부분범주는 영사상으로 참이 되며 DEGENERATE 로 표시합니다 (asserted 아님).
    """
    direction = Side(direction)
    U = S.universe
    kind = "covariantly" if direction == Side.LEFT else "contravariantly"
    entries, certs = [], []
    for X in U:
        cert = approximation(X, S, direction)
        certs.append(cert.to_entry())
        entries.append(VerificationEntry(
            condition=f"{direction.value} approximation factors ({kind} finite)",
            subject=X.name,
            verdict=verdict_of(bool(cert.verified)),
            witness=", ".join(cert.failures),
            certificate=cert.cert_id,
        ))
    if not S.members:
        entries.append(VerificationEntry(
            condition=f"{kind} finite: empty subcategory",
            verdict=Verdict.FLAGGED,
            witness="DEGENERATE: zero maps to the zero module",
            asserted=False,
        ))
    return CheckResult.build(entries, certs)


# ============================================================
# Torsion pair
# ============================================================

def trace_sequence(D: Subcat, X: Module):
    """0 → tX → X → X/tX → 0"""
    spaces = trace_spaces(D, X)
    sub = submodule(X, spaces, name=f"t({module_label(X)})")
    quot = quotient(X, spaces, name=f"{module_label(X)}/t")
    return sub, quot


def is_torsion_pair(D: Subcat, F: Subcat) -> CheckResult:
    """Hom(D, F) = 0 이고 모든 X 의 trace 열 0→tX→X→X/tX→0 이 D, F 에 놓이는지"""
    D._same(F)
    U = D.universe
    entries, certs = [], []

    bad = [f"Hom({U.name(i)}, {U.name(j)}) ≠ 0" for i in D.indices for j in F.indices if U.hom_dim(i, j)]
    entries.append(VerificationEntry(
        condition="Hom(D, F) = 0",
        verdict=verdict_of(not bad),
        witness="; ".join(bad[:3]),
    ))

    for X in U:
        sub, quot = trace_sequence(D, X)
        t_classes = U.classify(sub.module)
        q_classes = U.classify(quot.module)
        ok_t = set(t_classes) <= D.members
        ok_q = set(q_classes) <= F.members
        cert_id = f"trace:{X.name}|{','.join(D.names()) or '0'}"
        certs.append(CertificateEntry(id=cert_id, kind="trace", body={
            "object": X.name,
            "torsion": _class_names(U, t_classes),
            "torsion_free": _class_names(U, q_classes),
            "dims": [sub.module.total_dim, X.total_dim, quot.module.total_dim],
        }))
        entries.append(VerificationEntry(
            condition="tX ∈ add D and X/tX ∈ add F",
            subject=X.name,
            verdict=verdict_of(ok_t and ok_q),
            witness="" if ok_t and ok_q else
            f"tX={_class_names(U, t_classes)}, X/tX={_class_names(U, q_classes)}",
            certificate=cert_id,
        ))
    return CheckResult.build(entries, certs)


def _class_names(U: Universe, classes) -> List[str]:
    return [f"{U.name(i)}^{m}" if m > 1 else U.name(i) for i, m in sorted(classes.items())]



__all__ = [
    "ApproxCertificate",
    "PerpKind",
    "PerpResult",
    "Side",
    "Subcat",
    "approximation",
    "fac",
    "factorization_failures",
    "is_functorially_finite",
    "is_torsion_pair",
    "make_subcat",
    "module_label",
    "perp",
    "trace_dim",
    "trace_sequence",
    "trace_spaces",
]
