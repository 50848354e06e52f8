"""배치 front end

spec 파일 → 대수 → universe 열거 → recollement → task 실행 → 검증 리포트(JSON).
종료 코드는 모든 asserted 판정이 PASS 이면 0, 오류/FAIL 이면 1, gate 거부면 2 입니다.
"""

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from . import __version__
from .config import LOG_DIR, LOG_LEVEL
from .core.errors import HypothesisError, RecollementError
from .core.glue import GLUE_OPERATIONS, GlueJob
from .core.modcat import Universe, enumerate_indecomposables, projectives
from .core.recol import (
    Functor,
    Recollement,
    RecollementUniverses,
    build_universes,
    canonical_ses,
    check_axioms,
    ext_adjunction_check,
    functor_exactness,
)
from .core.subcat import Subcat
from .core.tilt import (
    enumerate_support_tau_tilting,
    is_support_tau_tilting,
    is_tau_cotorsion_torsion_triple,
    is_wakamatsu_tilting,
    is_weak_support_tau_tilting,
    phi,
    psi,
)
from .logging_config import setup_logging
from .report import (
    CheckResult,
    HypothesisEntry,
    JobStatus,
    Report,
    UniverseInfo,
    VerificationEntry,
    Verdict,
    dedupe_certificates,
    verdict_of,
)
from .utils.formatter import MarkdownFormat
from .utils.spec_parser import JobSpec, TASKS, TaskSpec, parse_job_spec, resolve_subcat, resolve_triple

logger = logging.getLogger(__name__)

_WAKAMATSU_DEPTH = ("glue_wakamatsu", "restrict_wakamatsu")


# ============================================================================
# 실행 컨텍스트
# ============================================================================

class _Context:
    """한 job 의 대수, universe, recollement"""

    def __init__(self, spec: JobSpec, task: TaskSpec):
        self.spec = spec
        self.task = task
        self.B = spec.build_algebra()
        logger.info(f"대수 생성: {self.B.name} (p={self.B.p}, vertices={list(self.B.vertices)})")
        self.R: Optional[Recollement] = None
        self.U: Optional[RecollementUniverses] = None
        if spec.recollement is not None:
            self.R = Recollement(self.B, spec.recollement.E)
            self.U = build_universes(self.R, task.dmax)
            self.universe_B = self.U.B
        else:
            self.universe_B = enumerate_indecomposables(self.B, task.dmax)

    def universe(self, role: str) -> Universe:
        if role == "B":
            return self.universe_B
        if self.U is None:
            raise RecollementError(f"{role} 역할의 인자에는 [recollement] 섹션이 필요합니다")
        return self.U.A if role == "A" else self.U.C

    def subcat(self, key: str) -> Subcat:
        arg = self.task.args[key]
        return resolve_subcat(arg, self.universe(arg.role))

    def triple(self, key: str):
        role = "A" if key.endswith("_A") else "C" if key.endswith("_C") else "B"
        return resolve_triple(self.task.args, key, self.universe(role))

    def universes(self) -> Dict[str, UniverseInfo]:
        described = {"B": self.universe_B}
        if self.U is not None:
            described.update(A=self.U.A, C=self.U.C)
        return {role: UniverseInfo(**U.describe()) for role, U in described.items()}

    def exactness_ledger(self) -> List[HypothesisEntry]:
        if self.R is None:
            return []
        return [
            HypothesisEntry(
                name=f"{f.value} exact",
                verdict=self.R.exactness.get(f.value, Verdict.UNKNOWN),
                witness=self.R.exactness_witness.get(f.value, ""),
            )
            for f in (Functor.I_UPPER, Functor.I_SHRIEK, Functor.J_SHRIEK, Functor.J_LOWER)
        ]


class _Outcome:
    """task 실행 결과 (리포트 조립 전)"""

    def __init__(self, result: Optional[Dict[str, Any]] = None, check: Optional[CheckResult] = None,
                 hypotheses: Optional[List[HypothesisEntry]] = None, status: JobStatus = JobStatus.OK):
        self.result = result or {}
        self.verification = list(check.entries) if check else []
        self.certificates = list(check.certificates) if check else []
        self.notes = list(check.notes) if check else []
        self.hypotheses = hypotheses
        self.status = status

    @classmethod
    def from_job(cls, job: GlueJob) -> "_Outcome":
        outcome = cls(result=dict(job.result), hypotheses=list(job.hypotheses), status=job.status)
        outcome.verification = list(job.verification)
        outcome.certificates = list(job.certificates)
        outcome.notes = list(job.notes)
        return outcome


# ============================================================================
# Task 별 실행
# ============================================================================

def _run_check_axioms(ctx: _Context) -> _Outcome:
    return _Outcome({"recollement": ctx.R.describe()}, check_axioms(ctx.R, ctx.U))


def _run_functor_exactness(ctx: _Context) -> _Outcome:
    return _Outcome({"exactness": {k: v.value for k, v in ctx.R.exactness.items()}}, functor_exactness(ctx.R))


def _run_ext_adjunction(ctx: _Context) -> _Outcome:
    return _Outcome({"n_max": ctx.task.n_max}, ext_adjunction_check(ctx.R, ctx.U, ctx.task.n_max))


def _run_canonical_ses(ctx: _Context) -> _Outcome:
    side, force = ctx.task.side, ctx.task.force
    objects = ctx.subcat("object")
    entries, certs, sequences = [], [], []
    try:
        for M in objects.modules():
            ses = canonical_ses(ctx.R, M, side, force=force)
            sequences.append(ses.cert_id)
            certs.append(ses.to_entry())
            entries.append(VerificationEntry(
                condition=f"canonical {side} sequence is short exact",
                subject=M.name,
                verdict=verdict_of(ses.exact),
                witness="" if ses.exact else ses.failed(),
                certificate=ses.cert_id,
            ))
    except HypothesisError as e:
        logger.warning(f"canonical_ses 거부: {e}")
        outcome = _Outcome(hypotheses=ctx.exactness_ledger(), status=JobStatus.REFUSED)
        outcome.notes.append(f"refused: {e.hypothesis} is {e.verdict}")
        return outcome

    outcome = _Outcome({"side": side, "sequences": sequences}, CheckResult.build(entries, certs))
    gating = Functor.I_UPPER if side == "left" else Functor.I_SHRIEK
    if force and not ctx.R.exact(gating):
        outcome.status = JobStatus.UNSOUND
        outcome.notes.append(f"forced past failed hypothesis: {gating.value} exact")
    return outcome


def _run_enumerate_indecomposables(ctx: _Context) -> _Outcome:
    U = ctx.universe_B
    entries = []
    for P in projectives(ctx.B):
        within = P.total_dim <= U.dmax
        entries.append(VerificationEntry(
            condition="indecomposable projective lies in the universe",
            subject=P.name or str(P.dim_vector),
            verdict=verdict_of(bool(U.support(P))) if within else Verdict.SKIPPED,
            witness="" if within else f"total dimension {P.total_dim} > dmax {U.dmax}",
        ))
    return _Outcome({"size": len(U), "names": list(U.names)}, CheckResult.build(entries))


def _run_enumerate_support_tau(ctx: _Context) -> _Outcome:
    found = enumerate_support_tau_tilting(ctx.universe_B, jobs=ctx.task.jobs)
    entries = []
    for M in found:
        triple = phi(M)
        back = psi(triple)
        entries.append(VerificationEntry(
            condition="psi(phi(M)) = M",
            subject=",".join(M.names()) or "0",
            verdict=verdict_of(back.members == M.members),
            witness="" if back.members == M.members else f"psi(phi(M)) = {back.names()}",
        ))
        triple_check = is_tau_cotorsion_torsion_triple(triple)
        entries.append(VerificationEntry(
            condition="phi(M) is a τ-cotorsion torsion triple",
            subject=",".join(M.names()) or "0",
            verdict=triple_check.verdict,
        ))
    notes = []
    if any(len(M) == 0 for M in found):
        notes.append("empty subcategory included (degenerate support τ-tilting class)")
    result = {"count": len(found), "subcats": [M.names() for M in found]}
    return _Outcome(result, CheckResult.build(entries, notes=notes))


def _membership_task(check: Callable[[Subcat], CheckResult], key: str) -> Callable[[_Context], _Outcome]:
    def run_task(ctx: _Context) -> _Outcome:
        S = ctx.subcat(key)
        result = check(S)
        return _Outcome({key: S.names(), "holds": result.holds}, result)
    return run_task


def _run_is_wakamatsu(ctx: _Context) -> _Outcome:
    return _membership_task(lambda W: is_wakamatsu_tilting(W, ctx.task.depth), "W")(ctx)


def _run_is_triple(ctx: _Context) -> _Outcome:
    T = ctx.triple("T")
    check = is_tau_cotorsion_torsion_triple(T)
    return _Outcome({"T": T.names(), "holds": check.holds}, check)


def _run_glue_operation(ctx: _Context) -> _Outcome:
    name = ctx.task.name
    signature = TASKS[name]
    inputs = [ctx.subcat(k) for k in signature.subcats] + [ctx.triple(k) for k in signature.triples]
    kwargs: Dict[str, Any] = {"force": ctx.task.force}
    if name in _WAKAMATSU_DEPTH:
        kwargs["depth"] = ctx.task.depth
    job = GLUE_OPERATIONS[name](ctx.R, ctx.U, *inputs, **kwargs)
    outcome = _Outcome.from_job(job)
    outcome.result.setdefault("filters", list(job.filters))
    return outcome


_DISPATCH: Dict[str, Callable[[_Context], _Outcome]] = {
    "check_axioms": _run_check_axioms,
    "functor_exactness": _run_functor_exactness,
    "ext_adjunction_check": _run_ext_adjunction,
    "canonical_ses": _run_canonical_ses,
    "enumerate_indecomposables": _run_enumerate_indecomposables,
    "enumerate_support_tau_tilting": _run_enumerate_support_tau,
    "is_wakamatsu_tilting": _run_is_wakamatsu,
    "is_weak_support_tau_tilting": _membership_task(is_weak_support_tau_tilting, "M"),
    "is_support_tau_tilting": _membership_task(is_support_tau_tilting, "M"),
    "is_tau_cotorsion_torsion_triple": _run_is_triple,
    **{name: _run_glue_operation for name in GLUE_OPERATIONS},
}


# ============================================================================
# 파이프라인
# ============================================================================

def execute_job(spec: JobSpec, **overrides) -> Report:
    """파싱된 job 을 실행하고 리포트를 조립합니다.

    Args:
        spec (JobSpec): 파싱된 spec
        **overrides: dmax, depth, n_max, force, jobs (None 이면 spec 값 사용)

    Raises:
        RecollementError: 입력 오류, 상한 초과, 내부 불일치
    """
    started = datetime.now(timezone.utc)
    clock = time.perf_counter()
    task = spec.task.model_copy(update={k: v for k, v in overrides.items() if v is not None})

    ctx = _Context(spec, task)
    outcome = _DISPATCH[task.name](ctx)
    hypotheses = outcome.hypotheses if outcome.hypotheses is not None else ctx.exactness_ledger()

    report = Report(
        task=task.name,
        status=outcome.status,
        universe=ctx.universes(),
        hypotheses=hypotheses,
        result=outcome.result,
        verification=outcome.verification,
        certificates=dedupe_certificates(outcome.certificates),
        notes=outcome.notes,
        run={
            "version": __version__,
            "started": started.isoformat(),
            "wall_time_s": round(time.perf_counter() - clock, 3),
            "parameters": {
                "dmax": task.dmax,
                "depth": task.depth,
                "n_max": task.n_max,
                "p": ctx.B.p,
                "force": task.force,
                "jobs": task.jobs,
            },
        },
    )
    logger.info(f"{task.name} 완료: status={report.status.value}, exit={report.exit_code()}")
    return report


def run_spec_text(text: str, **overrides) -> Report:
    """spec 텍스트 → 리포트. 오류는 status=ERROR 리포트로 돌려줍니다."""
    try:
        return execute_job(parse_job_spec(text), **overrides)
    except RecollementError as e:
        logger.error(f"job 실패: {e}")
        return Report(task="?", status=JobStatus.ERROR, notes=[str(e)])
    except Exception as e:
        logger.error(f"예기치 않은 오류: {e}", exc_info=True)
        return Report(task="?", status=JobStatus.ERROR, notes=[f"internal error: {e}"])


def report_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), ensure_ascii=False, indent=2)


def run(spec_path: str, out_path: Optional[str] = None, summary: bool = False, **overrides) -> int:
    """spec 파일을 실행하고 리포트를 씁니다.

    Returns:
        int: 종료 코드 (0 PASS, 1 오류/FAIL, 2 REFUSED)
    """
    try:
        text = Path(spec_path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"spec 파일을 읽을 수 없습니다: {e}")
        return 1

    report = run_spec_text(text, **overrides)
    payload = report_json(report)
    if out_path:
        Path(out_path).write_text(payload + "\n", encoding="utf-8")
        logger.info(f"리포트 저장: {out_path}")
    else:
        print(payload)
    if summary:
        print(MarkdownFormat.report_summary(report.model_dump(mode="json")), file=sys.stderr)
    return report.exit_code()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recollement_verifier",
        description="idempotent recollement 위의 gluing/restriction 검증",
    )
    parser.add_argument("--spec", required=True, help="job spec 파일")
    parser.add_argument("--out", help="리포트 JSON 경로 (없으면 stdout)")
    parser.add_argument("--dmax", type=int, help="universe 최대 총 차원")
    parser.add_argument("--depth", type=int, help="여해소 탐색 깊이")
    parser.add_argument("--n-max", dest="n_max", type=int, help="Ext adjunction 최대 차수")
    parser.add_argument("--force", action="store_true", default=None, help="가설 gate 실패에도 진행 (UNSOUND)")
    parser.add_argument("--jobs", type=int, help="병렬도")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="로깅 레벨")
    parser.add_argument("--summary", action="store_true", help="Markdown 요약을 stderr 로 출력")
    return parser


def main(argv: Optional[List[str]] = None):
    args = build_parser().parse_args(argv)
    setup_logging(LOG_DIR, args.log_level)
    code = run(
        args.spec,
        args.out,
        summary=args.summary,
        dmax=args.dmax,
        depth=args.depth,
        n_max=args.n_max,
        force=args.force,
        jobs=args.jobs,
    )
    sys.exit(code)


if __name__ == "__main__":
    main()
