"""Tilting 이론 검사기

Wakamatsu tilting, (weak) support τ-tilting, τ-cotorsion torsion triple 의
판정과 Φ/Ψ 대응, 그리고 부분집합 전수 조사 열거기.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional

from ..config import SUBSET_CAP
from ..report import CertificateEntry, CheckResult, Verdict, VerificationEntry, verdict_of
from .errors import CapExceededError, OutsideUniverseError
from .modcat import ExtVerdict, Module, Universe, ext_vanishes_all, kernel_cokernel
from .subcat import (
    PerpKind,
    Side,
    Subcat,
    approximation,
    fac,
    factorization_failures,
    is_functorially_finite,
    is_torsion_pair,
    module_label,
    perp,
)

logger = logging.getLogger(__name__)

_EXT_VERDICT = {
    ExtVerdict.VANISHES_ALL: Verdict.PASS,
    ExtVerdict.NONZERO: Verdict.FAIL,
    ExtVerdict.BOUNDED_ONLY: Verdict.FLAGGED,
}


def _class_names(U: Universe, classes) -> List[str]:
    return [f"{U.name(i)}^{m}" if m > 1 else U.name(i) for i, m in sorted(classes.items())]


def projective_objects(U: Universe) -> List[Module]:
    """universe 안의 직분해 불가능 사영 모듈 (정규 순서)"""
    return [U[i] for i in sorted(U.projective_indices())]


# ============================================================
# Self-orthogonality
# ============================================================

def is_self_orthogonal(S: Subcat) -> CheckResult:
    U = S.universe
    entries, certs = [], []
    for i in S.indices:
        for j in S.indices:
            cert = U.ext_all(i, j)
            certs.append(CertificateEntry(id=cert.cert_id, kind="ext", body=cert.to_dict()))
            entries.append(VerificationEntry(
                condition="Ext^i(M, N) = 0 for all i ≥ 1",
                subject=f"({U.name(i)}, {U.name(j)})",
                verdict=_EXT_VERDICT[cert.verdict],
                witness=f"Ext^{cert.first_nonzero} ≠ 0" if cert.first_nonzero else "",
                certificate=cert.cert_id,
            ))
    return CheckResult.build(entries, certs)


# ============================================================
# X_W 소속 판정
# ============================================================

class XWStatus(str, Enum):
    MEMBER = "MEMBER"
    NON_MEMBER = "NON_MEMBER"
    UNKNOWN = "UNKNOWN"


@dataclass
class XWCertificate:
    """0 → M → W₀ → W₁ → … 의 W-여해소 인증서

    steps 의 각 원소는 현재 대상, 근사 대상, 단사 여부, 여핵의 동형류입니다.
    """
    obj: str
    subcat: List[str]
    status: XWStatus = XWStatus.UNKNOWN
    reason: str = ""
    closure: Optional[str] = None
    depth: int = 0
    steps: List[dict] = field(default_factory=list)
    ext_certificates: List[str] = field(default_factory=list)

    @property
    def cert_id(self) -> str:
        return f"xw:{self.obj}|{','.join(self.subcat) or '0'}"

    @property
    def verdict(self) -> Verdict:
        return {
            XWStatus.MEMBER: Verdict.PASS,
            XWStatus.NON_MEMBER: Verdict.FAIL,
            XWStatus.UNKNOWN: Verdict.UNKNOWN,
        }[self.status]

    def to_dict(self) -> dict:
        return {
            "object": self.obj,
            "subcat": list(self.subcat),
            "status": self.status.value,
            "reason": self.reason,
            "closure": self.closure,
            "depth": self.depth,
            "steps": list(self.steps),
            "ext": list(self.ext_certificates),
        }

    def to_entry(self) -> CertificateEntry:
        return CertificateEntry(id=self.cert_id, kind="xw", body=self.to_dict())


def _left_perp_status(X: Module, W: Subcat, cert: XWCertificate) -> ExtVerdict:
    """X ∈ ⊥W 판정. 유계 검증만 된 경우 BOUNDED_ONLY"""
    U = W.universe
    result = ExtVerdict.VANISHES_ALL
    for w in W.indices:
        ext = ext_vanishes_all(X, U[w], universe=U)
        cert.ext_certificates.append(f"{ext.verdict.value}:{ext.cert_id}")
        if ext.verdict == ExtVerdict.NONZERO:
            return ExtVerdict.NONZERO
        if ext.verdict == ExtVerdict.BOUNDED_ONLY:
            result = ExtVerdict.BOUNDED_ONLY
    return result


def x_w_membership(M: Module, W: Subcat, depth: Optional[int] = None) -> XWCertificate:
    """M ∈ X_W 를 왼쪽 W-근사의 반복으로 판정합니다.

    근사가 단사가 아니면 NON_MEMBER 입니다. W 의 원소로 가는 단사 근사가
    하나라도 있으면 보편 근사도 단사이므로 유한 universe 에서는 이 판정이
    맞습니다. 여핵이 0 이 되거나 여핵 동형류가 반복되면 MEMBER 입니다.
    """
    U = W.universe
    if depth is None:
        depth = 2 * len(U) + 2
    label = module_label(M)
    cert = XWCertificate(obj=label, subcat=W.names(), depth=depth)

    status = _left_perp_status(M, W, cert)
    if status == ExtVerdict.NONZERO:
        cert.status, cert.reason = XWStatus.NON_MEMBER, f"{label} ∉ ⊥W"
        return cert
    bounded = status == ExtVerdict.BOUNDED_ONLY

    X = M
    seen = set()
    for step in range(depth):
        if X.is_zero:
            cert.status, cert.closure = XWStatus.MEMBER, "finite"
            break
        approx = approximation(X.renamed(f"{label}>{step}"), W, Side.LEFT, verify=False)
        f = approx.map
        injective = f.is_injective()
        record = {"step": step, "approximation": approx.labels, "injective": injective}
        cert.steps.append(record)
        if not injective:
            cert.status = XWStatus.NON_MEMBER
            cert.reason = f"step {step}: left W-approximation is not injective"
            break
        coker = kernel_cokernel(f).cokernel.renamed(f"{label}>{step + 1}")
        try:
            classes = U.classify(coker)
        except OutsideUniverseError as e:
            cert.status, cert.reason = XWStatus.UNKNOWN, str(e)
            break
        record["cokernel"] = _class_names(U, classes)
        if coker.is_zero:
            cert.status, cert.closure = XWStatus.MEMBER, "finite"
            break
        status = _left_perp_status(coker, W, cert)
        if status == ExtVerdict.NONZERO:
            cert.status = XWStatus.NON_MEMBER
            cert.reason = f"step {step}: image {record['cokernel']} ∉ ⊥W"
            break
        bounded = bounded or status == ExtVerdict.BOUNDED_ONLY
        signature = tuple(sorted(classes.items()))
        if signature in seen:
            cert.status, cert.closure = XWStatus.MEMBER, "periodic"
            break
        seen.add(signature)
        X = coker
    else:
        cert.status, cert.reason = XWStatus.UNKNOWN, f"depth {depth} exhausted"

    if cert.status == XWStatus.MEMBER and bounded:
        cert.status, cert.reason = XWStatus.UNKNOWN, "Ext vanishing verified only up to a bound"
    logger.debug(f"X_W 판정: {label} in {cert.subcat} → {cert.status.value} {cert.reason}")
    return cert


# ============================================================
# Wakamatsu tilting
# ============================================================

def is_wakamatsu_tilting(W: Subcat, depth: Optional[int] = None) -> CheckResult:
    """자기직교이고 모든 직분해 불가능 사영 모듈이 X_W 에 속하는지"""
    U = W.universe
    ortho = is_self_orthogonal(W)
    entries = list(ortho.entries)
    certs = list(ortho.certificates)
    for P in projective_objects(U):
        xw = x_w_membership(P, W, depth)
        certs.append(xw.to_entry())
        entries.append(VerificationEntry(
            condition="projective P ∈ X_W",
            subject=P.name,
            verdict=xw.verdict,
            witness=xw.reason,
            certificate=xw.cert_id,
        ))
    return CheckResult.build(entries, certs)


# ============================================================
# (weak) support τ-tilting
# ============================================================

def _ext1_against_fac(M: Subcat) -> VerificationEntry:
    U = M.universe
    F = fac(M)
    bad = [f"({U.name(i)}, {U.name(j)})" for i in M.indices for j in F.indices if U.ext1(i, j)]
    return VerificationEntry(
        condition="Ext¹(M, Fac M) = 0",
        subject=",".join(M.names()) or "0",
        verdict=verdict_of(not bad),
        witness="nonzero on " + "; ".join(bad[:3]) if bad else "",
    )


def _presentation_entry(P: Module, M: Subcat, certs: List[CertificateEntry]) -> VerificationEntry:
    """P → M₀ → M₁ → 0, M₀ → 의 사상이 왼쪽 M-근사이고 M₁ = coker ∈ add M"""
    U = M.universe
    approx = approximation(P, M, Side.LEFT)
    certs.append(approx.to_entry())
    condition = "P → M₀ → M₁ → 0 with left M-approximation, M₁ ∈ add M"
    coker = kernel_cokernel(approx.map).cokernel
    try:
        classes = U.classify(coker)
    except OutsideUniverseError as e:
        return VerificationEntry(condition=condition, subject=P.name, verdict=Verdict.UNKNOWN,
                                 witness=str(e), certificate=approx.cert_id)
    outside = [U.name(i) for i in sorted(classes) if i not in M.members]
    ok = bool(approx.verified) and not outside
    return VerificationEntry(
        condition=condition,
        subject=P.name,
        verdict=verdict_of(ok),
        witness=f"cokernel summands {outside} ∉ M" if outside else ", ".join(approx.failures),
        certificate=approx.cert_id,
    )


def is_weak_support_tau_tilting(M: Subcat) -> CheckResult:
    entries = [_ext1_against_fac(M)]
    certs: List[CertificateEntry] = []
    for P in projective_objects(M.universe):
        entries.append(_presentation_entry(P, M, certs))
    return CheckResult.build(entries, certs)


def is_support_tau_tilting(M: Subcat, exhaustive: bool = True) -> CheckResult:
    """weak support τ-tilting 이고 contravariantly finite 인지

    exhaustive=False 이면 weak 조건이 실패할 때 유한성 인증서를 만들지 않습니다.
    """
    weak = is_weak_support_tau_tilting(M)
    if not exhaustive and weak.verdict == Verdict.FAIL:
        return weak
    finite = is_functorially_finite(M, Side.RIGHT)
    return CheckResult.build(weak.entries + finite.entries, weak.certificates + finite.certificates)


# ============================================================
# τ-cotorsion torsion triple, Φ / Ψ
# ============================================================

@dataclass(frozen=True)
class TauTriple:
    L: Subcat
    D: Subcat
    F: Subcat

    def names(self) -> Dict[str, List[str]]:
        return {"L": self.L.names(), "D": self.D.names(), "F": self.F.names()}

    def __repr__(self) -> str:
        return f"TauTriple(L={self.L.names()}, D={self.D.names()}, F={self.F.names()})"


def phi(M: Subcat) -> TauTriple:
    """M ↦ (⊥₁ Fac M, Fac M, M^⊥₀)"""
    D = fac(M)
    L = perp(D, PerpKind.ONE, Side.LEFT).subcat
    F = perp(M, PerpKind.ZERO, Side.RIGHT).subcat
    return TauTriple(L, D, F)


def psi(T: TauTriple) -> Subcat:
    """(L, D, F) ↦ L ∩ D"""
    return T.L.intersection(T.D)


def is_tau_cotorsion_torsion_triple(T: TauTriple) -> CheckResult:
    U = T.D.universe
    entries: List[VerificationEntry] = []
    certs: List[CertificateEntry] = []

    expected = perp(T.D, PerpKind.ONE, Side.LEFT).subcat
    diff = sorted((expected.members ^ T.L.members))
    entries.append(VerificationEntry(
        condition="L = ⊥₁D",
        subject=",".join(T.L.names()) or "0",
        verdict=verdict_of(not diff),
        witness=f"differs on {[U.name(i) for i in diff]}" if diff else "",
    ))

    LD = psi(T)
    for P in projective_objects(U):
        approx = approximation(P, LD, Side.LEFT, verify=False)
        approx.failures = factorization_failures(approx, T.D)
        approx.verified = not approx.failures
        certs.append(approx.to_entry())
        coker = kernel_cokernel(approx.map).cokernel
        condition = "P → D′ → C → 0, D′ ∈ L∩D left D-approximation, C ∈ L"
        try:
            outside = sorted(i for i in U.support(coker) if i not in T.L.members)
        except OutsideUniverseError as e:
            entries.append(VerificationEntry(condition=condition, subject=P.name, verdict=Verdict.UNKNOWN,
                                             witness=str(e), certificate=approx.cert_id))
            continue
        ok = approx.verified and not outside
        witness = ""
        if approx.failures:
            witness = f"not a left D-approximation: {approx.failures}"
        elif outside:
            witness = f"cokernel summands {[U.name(i) for i in outside]} ∉ L"
        entries.append(VerificationEntry(condition=condition, subject=P.name, verdict=verdict_of(ok),
                                         witness=witness, certificate=approx.cert_id))

    finite = is_functorially_finite(LD, Side.RIGHT)
    entries.extend(e.model_copy(update={"condition": "L∩D: " + e.condition}) for e in finite.entries)
    certs.extend(finite.certificates)

    torsion = is_torsion_pair(T.D, T.F)
    entries.extend(torsion.entries)
    certs.extend(torsion.certificates)
    return CheckResult.build(entries, certs)


# ============================================================
# 전수 조사 열거
# ============================================================

def subsets(U: Universe, cap: int = SUBSET_CAP) -> Iterator[Subcat]:
    """모든 부분집합을 (크기, 조합) 순서로. 2^|U| 가 cap 을 넘으면 거부"""
    n = len(U)
    if 2 ** n > cap:
        raise CapExceededError(
            f"{U.algebra.name}: 부분집합 {2 ** n}개가 상한 {cap} 을 넘습니다. 더 작은 dmax 또는 p 를 사용하세요"
        )
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            yield Subcat(U, frozenset(combo))


def _filter_subsets(U: Universe, check: Callable[[Subcat], CheckResult], jobs: int, cap: int) -> List[Subcat]:
    candidates = list(subsets(U, cap))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(lambda S: check(S).verdict, candidates))
    else:
        verdicts = [check(S).verdict for S in candidates]
    return [S for S, v in zip(candidates, verdicts) if v == Verdict.PASS]


def enumerate_support_tau_tilting(U: Universe, jobs: int = 1, cap: int = SUBSET_CAP) -> List[Subcat]:
    found = _filter_subsets(U, lambda S: is_support_tau_tilting(S, exhaustive=False), jobs, cap)
    logger.info(f"support τ-tilting 열거: {U.algebra.name} → {len(found)}개")
    return found


def enumerate_wakamatsu_tilting(U: Universe, jobs: int = 1, cap: int = SUBSET_CAP) -> List[Subcat]:
    found = _filter_subsets(U, is_wakamatsu_tilting, jobs, cap)
    logger.info(f"Wakamatsu tilting 열거: {U.algebra.name} → {len(found)}개")
    return found


def enumerate_tau_triples(U: Universe, cap: int = SUBSET_CAP) -> List[TauTriple]:
    """(D, F) 쌍을 전수 조사합니다. L 은 조건 L = ⊥₁D 로 정해집니다."""
    if 4 ** len(U) > cap:
        raise CapExceededError(
            f"{U.algebra.name}: 부분집합 쌍 {4 ** len(U)}개가 상한 {cap} 을 넘습니다"
        )
    all_subsets = list(subsets(U, cap))
    found = []
    for D in all_subsets:
        L = perp(D, PerpKind.ONE, Side.LEFT).subcat
        for F in all_subsets:
            if any(U.hom_dim(i, j) for i in D.indices for j in F.indices):
                continue
            T = TauTriple(L, D, F)
            if is_tau_cotorsion_torsion_triple(T).verdict == Verdict.PASS:
                found.append(T)
    logger.info(f"τ-cotorsion torsion triple 열거: {U.algebra.name} → {len(found)}개")
    return found
