"""검증 리포트 스키마

리포트는 결정적이어야 하므로 모든 목록은 정규 순서로 채워지고,
타임스탬프 등 실행 정보는 `run` 필드에만 들어갑니다.
"""

from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, Field


# ============================================================================
# Verdict / Status
# ============================================================================

class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNKNOWN = "UNKNOWN"
    SKIPPED = "SKIPPED"
    FLAGGED = "FLAGGED"


class JobStatus(str, Enum):
    OK = "OK"
    REFUSED = "REFUSED"
    UNSOUND = "UNSOUND"
    ERROR = "ERROR"


def verdict_of(ok: bool) -> Verdict:
    return Verdict.PASS if ok else Verdict.FAIL


# ============================================================================
# Pydantic Models
# ============================================================================

class HypothesisEntry(BaseModel):
    """정리의 가설 한 건"""
    name: str = Field(description="가설 이름 (예: 'i* exact', 'j_*j*(Y) ⊆ Y')")
    verdict: Verdict = Field(description="가설 판정")
    witness: str = Field(default="", description="판정 근거 또는 반례")


class VerificationEntry(BaseModel):
    """검증 조건 한 건"""
    condition: str = Field(description="검증한 조건")
    subject: str = Field(default="", description="조건을 적용한 대상 (모듈 이름, 쌍 등)")
    verdict: Verdict = Field(description="판정")
    witness: str = Field(default="", description="근거 또는 반례")
    certificate: Optional[str] = Field(default=None, description="참조하는 인증서 id")
    asserted: bool = Field(default=True, description="False 이면 보고만 하고 종료 코드에 반영하지 않음")


class CertificateEntry(BaseModel):
    """기계 검증 가능한 인증서"""
    id: str = Field(description="리포트 안에서 유일한 인증서 id")
    kind: str = Field(description="인증서 종류 (ext, approx, xw, trace, ses, coresolution)")
    body: Dict[str, Any] = Field(default_factory=dict, description="인증서 내용")


class UniverseInfo(BaseModel):
    """열거된 universe 설명"""
    algebra: str = Field(description="대수 이름")
    algebra_hash: str = Field(description="정규화된 대수 정의의 해시")
    p: int = Field(description="계수체 GF(p)")
    dmax: int = Field(description="열거한 최대 총 차원")
    size: int = Field(description="직분해 불가능 동형류 수")
    names: List[str] = Field(default_factory=list, description="정규 이름 목록")


class CheckResult(BaseModel):
    """검사 함수 하나의 결과 (조건 목록 + 인증서)"""
    verdict: Verdict = Field(description="종합 판정")
    entries: List[VerificationEntry] = Field(default_factory=list)
    certificates: List[CertificateEntry] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.PASS

    @classmethod
    def build(cls, entries: Iterable[VerificationEntry],
              certificates: Iterable[CertificateEntry] = (),
              notes: Iterable[str] = ()) -> "CheckResult":
        entries = list(entries)
        return cls(
            verdict=aggregate(entries),
            entries=entries,
            certificates=dedupe_certificates(certificates),
            notes=list(notes),
        )


class Report(BaseModel):
    """CLI/MCP 가 내보내는 단일 JSON 문서"""
    task: str = Field(description="실행한 task 이름")
    status: JobStatus = Field(description="OK / REFUSED / UNSOUND / ERROR")
    universe: Dict[str, UniverseInfo] = Field(default_factory=dict, description="역할(B, A, C)별 universe")
    hypotheses: List[HypothesisEntry] = Field(default_factory=list)
    result: Dict[str, Any] = Field(default_factory=dict)
    verification: List[VerificationEntry] = Field(default_factory=list)
    certificates: List[CertificateEntry] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    run: Dict[str, Any] = Field(default_factory=dict, description="실행 메타데이터 (비교 대상 아님)")

    def comparable(self) -> Dict[str, Any]:
        """결정성 비교용 본문 (run 제외)"""
        return self.model_dump(mode="json", exclude={"run"})

    def exit_code(self) -> int:
        if self.status == JobStatus.REFUSED:
            return 2
        if self.status in (JobStatus.ERROR, JobStatus.UNSOUND):
            return 1
        return 0 if aggregate(self.verification) == Verdict.PASS else 1


# ============================================================================
# 유틸
# ============================================================================

def aggregate(entries: Iterable[VerificationEntry]) -> Verdict:
    """asserted 항목만으로 종합 판정. SKIPPED 는 무시, FLAGGED 는 PASS 가 아님"""
    verdicts = [e.verdict for e in entries if e.asserted and e.verdict != Verdict.SKIPPED]
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.UNKNOWN in verdicts or Verdict.FLAGGED in verdicts:
        return Verdict.UNKNOWN
    return Verdict.PASS


def dedupe_certificates(certificates: Iterable[CertificateEntry]) -> List[CertificateEntry]:
    seen, result = set(), []
    for cert in certificates:
        if cert.id not in seen:
            seen.add(cert.id)
            result.append(cert)
    return result
