"""Recollement 을 따라 부분범주를 붙이고(glue) 제한(restrict)합니다.

모든 연산은 가설 gate 를 먼저 평가합니다. gate 가 하나라도 PASS 가 아니면
force 없이는 REFUSED, force 가 있으면 UNSOUND 로 표시하고 계속합니다.
결론은 tilt/subcat 검사기로 다시 검증합니다.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..report import (
    CertificateEntry,
    CheckResult,
    HypothesisEntry,
    JobStatus,
    Verdict,
    VerificationEntry,
    dedupe_certificates,
    verdict_of,
)
from .errors import DomainMismatchError, OutsideUniverseError
from .modcat import ExtVerdict, Module, ModuleMap, Universe, ext_vanishes_all, factor_through_epi, kernel_cokernel
from .recol import Functor, Recollement, RecollementUniverses, apply_functor, horseshoe_step
from .subcat import PerpKind, Side, Subcat, approximation, is_functorially_finite, perp
from .tilt import (
    TauTriple,
    is_self_orthogonal,
    is_support_tau_tilting,
    is_tau_cotorsion_torsion_triple,
    is_wakamatsu_tilting,
    is_weak_support_tau_tilting,
    phi,
    projective_objects,
    psi,
)

logger = logging.getLogger(__name__)

WAKAMATSU_FILTERS = (Functor.I_SHRIEK, Functor.J_UPPER)
FINITE_FILTERS = (Functor.I_UPPER, Functor.J_UPPER)
SUPPORT_TAU_FILTERS = (Functor.I_UPPER, Functor.I_SHRIEK, Functor.J_UPPER)

BOTH_EXACT = (Functor.I_UPPER, Functor.I_SHRIEK)


# ============================================================
# GlueJob
# ============================================================

@dataclass
class GlueJob:
    """glue/restrict 연산 한 건의 입력, gate, 결과, 검증"""
    operation: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    filters: Tuple[str, ...] = ()
    hypotheses: List[HypothesisEntry] = field(default_factory=list)
    status: JobStatus = JobStatus.OK
    result: Dict[str, Any] = field(default_factory=dict)
    verification: List[VerificationEntry] = field(default_factory=list)
    certificates: List[CertificateEntry] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    output: Any = None

    @property
    def refused(self) -> bool:
        return self.status == JobStatus.REFUSED

    @property
    def failed_hypotheses(self) -> List[HypothesisEntry]:
        return [h for h in self.hypotheses if h.verdict != Verdict.PASS]

    @property
    def verdict(self) -> Verdict:
        return CheckResult.build(self.verification).verdict

    def add_check(self, result: CheckResult, prefix: str = ""):
        if prefix:
            self.verification.extend(
                e.model_copy(update={"condition": f"{prefix}: {e.condition}"}) for e in result.entries
            )
        else:
            self.verification.extend(result.entries)
        self.certificates.extend(result.certificates)
        self.notes.extend(result.notes)

    def open_gate(self, force: bool) -> bool:
        """gate 판정. False 이면 결과를 만들지 않습니다."""
        failed = self.failed_hypotheses
        if not failed:
            return True
        summary = "; ".join(f"{h.name} ({h.verdict.value})" for h in failed)
        if force:
            self.status = JobStatus.UNSOUND
            self.notes.append(f"forced past failed hypotheses: {summary}")
            logger.warning(f"{self.operation}: 가설 불충족에도 --force 로 진행 (UNSOUND): {summary}")
            return True
        self.status = JobStatus.REFUSED
        logger.warning(f"{self.operation} 거부: {summary}")
        return False


# ============================================================
# Gate 평가
# ============================================================

def exactness_hypotheses(R: Recollement, functors: Sequence[Functor]) -> List[HypothesisEntry]:
    return [
        HypothesisEntry(
            name=f"{Functor(f).value} exact",
            verdict=R.exactness.get(Functor(f).value, Verdict.UNKNOWN),
            witness=R.exactness_witness.get(Functor(f).value, ""),
        )
        for f in functors
    ]


def input_hypothesis(name: str, result: CheckResult) -> HypothesisEntry:
    bad = next((e for e in result.entries if e.asserted and e.verdict not in (Verdict.PASS, Verdict.SKIPPED)), None)
    witness = ""
    if bad is not None:
        witness = f"{bad.condition} [{bad.subject}]" + (f": {bad.witness}" if bad.witness else "")
    return HypothesisEntry(name=name, verdict=result.verdict, witness=witness)


def closure_hypothesis(R: Recollement, composite: str, source: Subcat, Y: Subcat,
                       source_label: str = "Y", target_label: str = "Y") -> HypothesisEntry:
    """composite(source) ⊆ Y. 첫 반례 모듈을 witness 로 남깁니다."""
    U = Y.universe
    name = f"{composite}({source_label}) ⊆ {target_label}"
    for M in source.modules():
        image = R.composite(composite, M)
        try:
            support = U.support(image)
        except OutsideUniverseError as e:
            return HypothesisEntry(name=name, verdict=Verdict.UNKNOWN, witness=f"{composite}({M.name}): {e}")
        outside = sorted(support - Y.members)
        if outside:
            return HypothesisEntry(
                name=name,
                verdict=Verdict.FAIL,
                witness=f"{composite}({M.name}) has summand {U.name(outside[0])} ∉ {target_label}",
            )
    return HypothesisEntry(name=name, verdict=Verdict.PASS)


def image_subcat(R: Recollement, functor: Functor, Y: Subcat, target: Universe) -> Subcat:
    """functor(Y) 의 직합 성분들이 생성하는 target 의 부분범주. 영 image 는 버립니다."""
    members = set()
    for M in Y.modules():
        members |= target.support(apply_functor(R, functor, M))
    return Subcat(target, frozenset(members))


def _expect_universe(S: Subcat, U: Universe, role: str):
    if S.universe is not U:
        raise DomainMismatchError(f"{role}: {U.algebra.name} universe 의 부분범주가 아닙니다")


# ============================================================
# 붙이기
# ============================================================

def glue_by_membership(R: Recollement, U: RecollementUniverses, S_A: Subcat, S_C: Subcat,
                       filters: Sequence[Functor]) -> Subcat:
    """B-universe 에서 모든 functor image 가 지정된 부분범주에 놓이는 원소

    Raises:
        OutsideUniverseError: functor image 의 성분이 universe 밖인 경우
    """
    _expect_universe(S_A, U.A, "S_A")
    _expect_universe(S_C, U.C, "S_C")
    filters = [Functor(f) for f in filters]
    targets = {Functor.I_UPPER: S_A, Functor.I_SHRIEK: S_A, Functor.J_UPPER: S_C}
    members = set()
    for idx, Z in enumerate(U.B):
        if all(targets[f].contains(apply_functor(R, f, Z)) for f in filters):
            members.add(idx)
    glued = Subcat(U.B, frozenset(members))
    logger.debug(f"glue_by_membership {[f.value for f in filters]}: {glued.names()}")
    return glued


def _new_job(operation: str, filters: Sequence[Functor] = (), **inputs) -> GlueJob:
    return GlueJob(operation=operation, inputs=inputs, filters=tuple(Functor(f).value for f in filters))


def _finish(job: GlueJob) -> GlueJob:
    logger.info(f"{job.operation}: status={job.status.value}, verdict={job.verdict.value}")
    return job


def glue_wakamatsu(R: Recollement, U: RecollementUniverses, X_A: Subcat, X_C: Subcat,
                   force: bool = False, depth: Optional[int] = None) -> GlueJob:
    """X = {X ∈ B | i^!(X) ∈ X_A, j*(X) ∈ X_C}"""
    job = _new_job("glue_wakamatsu", WAKAMATSU_FILTERS, X_A=X_A.names(), X_C=X_C.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("X_A is Wakamatsu tilting", is_wakamatsu_tilting(X_A, depth)))
    job.hypotheses.append(input_hypothesis("X_C is Wakamatsu tilting", is_wakamatsu_tilting(X_C, depth)))
    if not job.open_gate(force):
        return _finish(job)

    glued = glue_by_membership(R, U, X_A, X_C, WAKAMATSU_FILTERS)
    job.output = glued
    job.result = {"glued": glued.names()}
    job.add_check(is_wakamatsu_tilting(glued, depth))
    for P in projective_objects(U.B):
        cert = coresolution_certificate(R, U, P, X_A, X_C, glued, depth)
        job.certificates.append(cert.to_entry())
        job.verification.append(VerificationEntry(
            condition="glued coresolution of projective is exact with images in ⊥X",
            subject=P.name,
            verdict=cert.verdict,
            witness=cert.reason,
            certificate=cert.cert_id,
        ))
    return _finish(job)


def glue_weak_tau(R: Recollement, U: RecollementUniverses, Z_A: Subcat, Z_C: Subcat,
                  force: bool = False) -> GlueJob:
    job = _new_job("glue_weak_tau", WAKAMATSU_FILTERS, Z_A=Z_A.names(), Z_C=Z_C.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Z_A is weak support τ-tilting", is_weak_support_tau_tilting(Z_A)))
    job.hypotheses.append(input_hypothesis("Z_C is weak support τ-tilting", is_weak_support_tau_tilting(Z_C)))
    if not job.open_gate(force):
        return _finish(job)

    glued = glue_by_membership(R, U, Z_A, Z_C, WAKAMATSU_FILTERS)
    job.output = glued
    job.result = {"glued": glued.names()}
    job.add_check(is_weak_support_tau_tilting(glued))
    return _finish(job)


def glue_support_tau(R: Recollement, U: RecollementUniverses, Z_A: Subcat, Z_C: Subcat,
                     force: bool = False) -> GlueJob:
    job = _new_job("glue_support_tau", SUPPORT_TAU_FILTERS, Z_A=Z_A.names(), Z_C=Z_C.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Z_A is support τ-tilting", is_support_tau_tilting(Z_A)))
    job.hypotheses.append(input_hypothesis("Z_C is support τ-tilting", is_support_tau_tilting(Z_C)))
    if not job.open_gate(force):
        return _finish(job)

    glued = glue_by_membership(R, U, Z_A, Z_C, SUPPORT_TAU_FILTERS)
    job.output = glued
    job.result = {"glued": glued.names()}
    job.add_check(is_support_tau_tilting(glued))

    narrow = glue_by_membership(R, U, Z_A, Z_C, WAKAMATSU_FILTERS)
    same = narrow.members == glued.members
    job.result["coincides_with_i_shriek_j_class"] = same
    job.verification.append(VerificationEntry(
        condition="{i^!, j*} class coincides with {i*, i^!, j*} class",
        verdict=verdict_of(same),
        witness="" if same else f"{{i^!, j*}} class = {narrow.names()}",
        asserted=False,
    ))
    return _finish(job)


def glue_contravariantly_finite(R: Recollement, U: RecollementUniverses, Z_A: Subcat, Z_C: Subcat,
                                force: bool = False) -> GlueJob:
    """Z = {Z ∈ B | i*(Z) ∈ Z_A, j*(Z) ∈ Z_C} 의 contravariant finiteness"""
    job = _new_job("glue_contravariantly_finite", FINITE_FILTERS, Z_A=Z_A.names(), Z_C=Z_C.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Z_A is contravariantly finite", is_functorially_finite(Z_A, Side.RIGHT)))
    job.hypotheses.append(input_hypothesis("Z_C is contravariantly finite", is_functorially_finite(Z_C, Side.RIGHT)))
    if not job.open_gate(force):
        return _finish(job)

    glued = glue_by_membership(R, U, Z_A, Z_C, FINITE_FILTERS)
    job.output = glued
    job.result = {"glued": glued.names()}
    job.add_check(is_functorially_finite(glued, Side.RIGHT))
    for functor, target, S, label in ((Functor.I_UPPER, U.A, Z_A, "Z_A"), (Functor.J_UPPER, U.C, Z_C, "Z_C")):
        image = image_subcat(R, functor, glued, target)
        outside = sorted(image.members - S.members)
        job.verification.append(VerificationEntry(
            condition=f"{functor.value}(Z) ⊆ {label}",
            verdict=verdict_of(not outside),
            witness=f"{[target.name(i) for i in outside]} ∉ {label}" if outside else "",
        ))
    return _finish(job)


def glue_triple(R: Recollement, U: RecollementUniverses, T_A: TauTriple, T_C: TauTriple,
                force: bool = False) -> GlueJob:
    """Z = {Z | i*(Z), i^!(Z) ∈ L_A∩D_A, j*(Z) ∈ L_C∩D_C} 를 만들고 phi(Z) 를 돌려줍니다."""
    job = _new_job("glue_triple", SUPPORT_TAU_FILTERS, T_A=T_A.names(), T_C=T_C.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("T_A is a τ-cotorsion torsion triple", is_tau_cotorsion_torsion_triple(T_A)))
    job.hypotheses.append(input_hypothesis("T_C is a τ-cotorsion torsion triple", is_tau_cotorsion_torsion_triple(T_C)))
    if not job.open_gate(force):
        return _finish(job)

    Z = glue_by_membership(R, U, psi(T_A), psi(T_C), SUPPORT_TAU_FILTERS)
    triple = phi(Z)
    job.output = triple
    job.result = {"Z": Z.names(), "glued": triple.names()}
    job.add_check(is_tau_cotorsion_torsion_triple(triple))
    return _finish(job)


# ============================================================
# 제한
# ============================================================

def _restricted(job: GlueJob, R: Recollement, U: RecollementUniverses, Y: Subcat,
                left: Functor) -> Tuple[Subcat, Subcat]:
    Y_A = image_subcat(R, left, Y, U.A)
    Y_C = image_subcat(R, Functor.J_UPPER, Y, U.C)
    job.output = (Y_A, Y_C)
    job.result = {"A": Y_A.names(), "C": Y_C.names()}
    return Y_A, Y_C


def restrict_wakamatsu(R: Recollement, U: RecollementUniverses, Y: Subcat,
                       force: bool = False, depth: Optional[int] = None) -> GlueJob:
    """(i^!(Y), j*(Y)). 닫힘 조건은 ⊥Y 위에서 i_*i^!, Y 위에서 j_*j* 로 봅니다."""
    _expect_universe(Y, U.B, "Y")
    job = _new_job("restrict_wakamatsu", Y=Y.names())
    job.hypotheses = exactness_hypotheses(R, (Functor.I_SHRIEK,))
    job.hypotheses.append(input_hypothesis("Y is Wakamatsu tilting", is_wakamatsu_tilting(Y, depth)))
    left_perp = perp(Y, PerpKind.ALL, Side.LEFT)
    job.hypotheses.append(closure_hypothesis(R, "i_*i^!", left_perp.subcat, Y, source_label="⊥Y"))
    job.hypotheses.append(closure_hypothesis(R, "j_*j*", Y, Y))
    if left_perp.is_flagged:
        job.notes.append(f"⊥Y membership bounded only for {left_perp.flagged}")
    if not job.open_gate(force):
        return _finish(job)

    Y_A, Y_C = _restricted(job, R, U, Y, Functor.I_SHRIEK)
    job.add_check(is_wakamatsu_tilting(Y_A, depth), "A")
    job.add_check(is_wakamatsu_tilting(Y_C, depth), "C")
    job.add_check(is_self_orthogonal(Y_A), "A")
    job.add_check(is_self_orthogonal(Y_C), "C")
    job.certificates = dedupe_certificates(job.certificates)
    return _finish(job)


def restrict_self_orthogonal(R: Recollement, U: RecollementUniverses, Y: Subcat,
                             force: bool = False) -> GlueJob:
    _expect_universe(Y, U.B, "Y")
    job = _new_job("restrict_self_orthogonal", Y=Y.names())
    job.hypotheses = exactness_hypotheses(R, (Functor.I_SHRIEK,))
    job.hypotheses.append(input_hypothesis("Y is self-orthogonal", is_self_orthogonal(Y)))
    job.hypotheses.append(closure_hypothesis(R, "i_*i^!", Y, Y))
    job.hypotheses.append(closure_hypothesis(R, "j_*j*", Y, Y))
    if not job.open_gate(force):
        return _finish(job)

    Y_A, Y_C = _restricted(job, R, U, Y, Functor.I_SHRIEK)
    job.add_check(is_self_orthogonal(Y_A), "A")
    job.add_check(is_self_orthogonal(Y_C), "C")
    return _finish(job)


def restrict_weak_tau(R: Recollement, U: RecollementUniverses, Y: Subcat,
                      force: bool = False) -> GlueJob:
    _expect_universe(Y, U.B, "Y")
    job = _new_job("restrict_weak_tau", Y=Y.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Y is weak support τ-tilting", is_weak_support_tau_tilting(Y)))
    job.hypotheses.append(closure_hypothesis(R, "i_*i*", Y, Y))
    job.hypotheses.append(closure_hypothesis(R, "j_*j*", Y, Y))
    if not job.open_gate(force):
        return _finish(job)

    Y_A, Y_C = _restricted(job, R, U, Y, Functor.I_UPPER)
    job.add_check(is_weak_support_tau_tilting(Y_A), "A")
    job.add_check(is_weak_support_tau_tilting(Y_C), "C")
    return _finish(job)


_ALL_CLOSURES = ("i_*i^!", "i_*i*", "j_!j*", "j_*j*")


def restrict_support_tau(R: Recollement, U: RecollementUniverses, Y: Subcat,
                         force: bool = False) -> GlueJob:
    _expect_universe(Y, U.B, "Y")
    job = _new_job("restrict_support_tau", Y=Y.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Y is support τ-tilting", is_support_tau_tilting(Y)))
    job.hypotheses.extend(closure_hypothesis(R, c, Y, Y) for c in _ALL_CLOSURES)
    if not job.open_gate(force):
        return _finish(job)

    Y_A, Y_C = _restricted(job, R, U, Y, Functor.I_UPPER)
    job.add_check(is_support_tau_tilting(Y_A), "A")
    job.add_check(is_support_tau_tilting(Y_C), "C")
    return _finish(job)


def restrict_contravariantly_finite(R: Recollement, U: RecollementUniverses, Y: Subcat,
                                    force: bool = False) -> GlueJob:
    _expect_universe(Y, U.B, "Y")
    job = _new_job("restrict_contravariantly_finite", Y=Y.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("Y is contravariantly finite", is_functorially_finite(Y, Side.RIGHT)))
    job.hypotheses.extend(closure_hypothesis(R, c, Y, Y) for c in ("i_*i^!", "i_*i*", "j_!j*"))
    if not job.open_gate(force):
        return _finish(job)

    Y_A, Y_C = _restricted(job, R, U, Y, Functor.I_UPPER)
    job.add_check(is_functorially_finite(Y_A, Side.RIGHT), "A")
    job.add_check(is_functorially_finite(Y_C, Side.RIGHT), "C")
    return _finish(job)


def restrict_triple(R: Recollement, U: RecollementUniverses, T: TauTriple,
                    force: bool = False) -> GlueJob:
    """(phi(i*(L∩D)), phi(j*(L∩D)))"""
    _expect_universe(T.D, U.B, "T")
    job = _new_job("restrict_triple", T=T.names())
    job.hypotheses = exactness_hypotheses(R, BOTH_EXACT)
    job.hypotheses.append(input_hypothesis("T is a τ-cotorsion torsion triple", is_tau_cotorsion_torsion_triple(T)))
    LD = psi(T)
    job.hypotheses.extend(closure_hypothesis(R, c, LD, LD, "L∩D", "L∩D") for c in _ALL_CLOSURES)
    if not job.open_gate(force):
        return _finish(job)

    T_A = phi(image_subcat(R, Functor.I_UPPER, LD, U.A))
    T_C = phi(image_subcat(R, Functor.J_UPPER, LD, U.C))
    job.output = (T_A, T_C)
    job.result = {"A": T_A.names(), "C": T_C.names()}
    job.add_check(is_tau_cotorsion_torsion_triple(T_A), "A")
    job.add_check(is_tau_cotorsion_torsion_triple(T_C), "C")
    return _finish(job)


# ============================================================
# 붙인 여해소 인증서
# ============================================================

@dataclass
class CoresolutionCertificate:
    """P → i_*(T₀)⊕j_!(Q₀) → i_*(T₁)⊕j_!(Q₁) → … 의 사다리 인증서"""
    obj: str
    glued: List[str]
    status: str = "UNKNOWN"
    reason: str = ""
    split: Optional[bool] = None
    closure: Optional[str] = None
    steps: List[dict] = field(default_factory=list)

    @property
    def cert_id(self) -> str:
        return f"coresolution:{self.obj}|{','.join(self.glued) or '0'}"

    @property
    def verdict(self) -> Verdict:
        return {"VALID": Verdict.PASS, "INVALID": Verdict.FAIL}.get(self.status, Verdict.UNKNOWN)

    def to_entry(self) -> CertificateEntry:
        return CertificateEntry(id=self.cert_id, kind="coresolution", body={
            "object": self.obj,
            "glued": list(self.glued),
            "status": self.status,
            "reason": self.reason,
            "split": self.split,
            "closure": self.closure,
            "steps": list(self.steps),
        })


def _in_left_perp(Y: Module, X: Subcat) -> Tuple[Verdict, List[str]]:
    U = X.universe
    verdict, notes = Verdict.PASS, []
    for idx in X.indices:
        ext = ext_vanishes_all(Y, U[idx], universe=U)
        notes.append(f"{ext.verdict.value}:{ext.cert_id}")
        if ext.verdict == ExtVerdict.NONZERO:
            return Verdict.FAIL, notes
        if ext.verdict == ExtVerdict.BOUNDED_ONLY:
            verdict = Verdict.UNKNOWN
    return verdict, notes


def _invalid(cert: CoresolutionCertificate, reason: str) -> CoresolutionCertificate:
    cert.status, cert.reason = "INVALID", reason
    logger.error(f"coresolution 인증서 무효 ({cert.obj}): {reason}")
    return cert


def coresolution_certificate(R: Recollement, U: RecollementUniverses, P: Module,
                             X_A: Subcat, X_C: Subcat, glued: Subcat,
                             depth: Optional[int] = None) -> CoresolutionCertificate:
    """0 → j_!j*P → P → i_*i*P → 0 위에 양쪽의 근사 여해소를 horseshoe 로 붙입니다.

    각 단계에서 가운데 항 i_*(T_k)⊕j_!(Q_k) 가 glued 에 속하는지, 새 여핵이
    ⊥glued 에 속하는지 검사합니다. (i*Z_k, j*X_k) 의 동형류가 반복되면
    주기적으로 닫힌 것으로 봅니다.
    """
    cert = CoresolutionCertificate(obj=P.name or str(P.dim_vector), glued=glued.names())
    if depth is None:
        depth = 2 * len(U.B) + 2
    f, g = R.counit_j_shriek(P), R.unit_i_upper(P)

    section = factor_through_epi(g, ModuleMap.identity(g.target))
    cert.split = section is not None
    if section is None:
        return _invalid(cert, "0 → j_!j*P → P → i_*i*P → 0 does not split")

    seen = []
    for k in range(depth):
        X, Z = f.source, g.target
        try:
            sig = (tuple(sorted(U.C.classify(R.j_upper(X)).items())),
                   tuple(sorted(U.A.classify(R.i_upper(Z)).items())))
        except OutsideUniverseError as e:
            cert.reason = str(e)
            return cert
        if not sig[0] and not sig[1]:
            cert.status, cert.closure = "VALID", "finite"
            return cert
        if sig in seen:
            cert.status, cert.closure = "VALID", f"periodic from step {seen.index(sig)}"
            return cert
        seen.append(sig)

        counit = R.counit_j_shriek(X)
        if not counit.is_isomorphism() or not R.unit_i_upper(Z).is_isomorphism():
            return _invalid(cert, f"step {k}: left term not in the image of j_! or right term not in the image of i_*")
        approx_C = approximation(R.j_upper(X), X_C, Side.LEFT, verify=False)
        approx_A = approximation(R.i_upper(Z), X_A, Side.LEFT, verify=False)
        a = R.j_shriek(approx_C.map).compose(counit.inverse())
        b = R.i_lower(approx_A.map).compose(R.unit_i_upper(Z))
        step = horseshoe_step(f, g, a, b)

        if step.eps is not None:
            step.checks["coresolution map injective"] = step.eps.is_injective()
        record = {
            "step": k,
            "T": approx_A.labels,
            "Q": approx_C.labels,
            "checks": dict(step.checks),
        }
        cert.steps.append(record)
        if not step.valid:
            failed = [name for name, ok in step.checks.items() if not ok]
            return _invalid(cert, f"step {k}: {', '.join(failed)}")

        middle = step.middle.module
        try:
            in_glued = glued.contains(middle)
        except OutsideUniverseError as e:
            cert.reason = str(e)
            return cert
        record["middle_in_glued"] = in_glued
        if not in_glued:
            return _invalid(cert, f"step {k}: i_*T⊕j_!Q ∉ glued class")

        image = kernel_cokernel(step.eps).cokernel
        perp_verdict, ext_notes = _in_left_perp(image, glued)
        record["image_dims"] = list(image.dim_vector)
        record["image_in_left_perp"] = perp_verdict.value
        record["ext"] = ext_notes
        if perp_verdict == Verdict.FAIL:
            return _invalid(cert, f"step {k}: image ∉ ⊥X")
        if perp_verdict == Verdict.UNKNOWN:
            cert.reason = f"step {k}: ⊥X membership bounded only"
            return cert
        f, g = step.f_next, step.g_next

    cert.reason = f"depth {depth} exhausted"
    return cert


GLUE_OPERATIONS: Dict[str, Callable[..., GlueJob]] = {
    "glue_wakamatsu": glue_wakamatsu,
    "restrict_wakamatsu": restrict_wakamatsu,
    "restrict_self_orthogonal": restrict_self_orthogonal,
    "glue_weak_tau": glue_weak_tau,
    "restrict_weak_tau": restrict_weak_tau,
    "glue_support_tau": glue_support_tau,
    "restrict_support_tau": restrict_support_tau,
    "glue_contravariantly_finite": glue_contravariantly_finite,
    "restrict_contravariantly_finite": restrict_contravariantly_finite,
    "glue_triple": glue_triple,
    "restrict_triple": restrict_triple,
}


__all__ = [
    "CoresolutionCertificate",
    "GLUE_OPERATIONS",
    "GlueJob",
    "closure_hypothesis",
    "coresolution_certificate",
    "exactness_hypotheses",
    "glue_by_membership",
    "glue_contravariantly_finite",
    "glue_support_tau",
    "glue_triple",
    "glue_wakamatsu",
    "glue_weak_tau",
    "image_subcat",
    "input_hypothesis",
    "restrict_contravariantly_finite",
    "restrict_self_orthogonal",
    "restrict_support_tau",
    "restrict_triple",
    "restrict_wakamatsu",
    "restrict_weak_tau",
]
