"""Job spec 파일 파싱

형식은 줄 단위 섹션 `[algebra]`, `[recollement]`, `[task]` 입니다::

    [algebra]
    name = A2
    p = 2
    vertices = 1, 2
    a: 1 -> 2

    [recollement]
    E = 2

    [task]
    name = glue_support_tau
    dmax = 3
    Z_A = D1.0#0
    Z_C = proj

부분범주 인자는 정규 이름 목록 또는 키워드 proj / all / none 입니다.
이름은 인자의 역할로 정해진 universe 에서 찾습니다 (접미사 _A 는 A/AeA,
_C 는 eAe, 그 외는 가운데 대수). triple 은 `T.L`, `T.D`, `T.F` 세 줄 또는
`T = phi(...)` 로 줍니다.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..config import DEFAULT_DMAX, DEFAULT_N_MAX
from ..core.errors import SpecParseError
from ..core.modcat import Universe
from ..core.quivalg import BoundQuiverAlgebra, parse_algebra_lines
from ..core.subcat import Subcat
from ..core.tilt import TauTriple, phi

logger = logging.getLogger(__name__)

KEYWORDS = ("proj", "all", "none")
TRIPLE_PARTS = ("L", "D", "F")


@dataclass(frozen=True)
class TaskSignature:
    """task 가 요구하는 인자"""
    subcats: Tuple[str, ...] = ()
    triples: Tuple[str, ...] = ()
    needs_recollement: bool = False


TASKS: Dict[str, TaskSignature] = {
    "check_axioms": TaskSignature(needs_recollement=True),
    "functor_exactness": TaskSignature(needs_recollement=True),
    "ext_adjunction_check": TaskSignature(needs_recollement=True),
    "canonical_ses": TaskSignature(subcats=("object",), needs_recollement=True),
    "enumerate_indecomposables": TaskSignature(),
    "enumerate_support_tau_tilting": TaskSignature(),
    "is_wakamatsu_tilting": TaskSignature(subcats=("W",)),
    "is_weak_support_tau_tilting": TaskSignature(subcats=("M",)),
    "is_support_tau_tilting": TaskSignature(subcats=("M",)),
    "is_tau_cotorsion_torsion_triple": TaskSignature(triples=("T",)),
    "glue_wakamatsu": TaskSignature(subcats=("X_A", "X_C"), needs_recollement=True),
    "restrict_wakamatsu": TaskSignature(subcats=("Y",), needs_recollement=True),
    "restrict_self_orthogonal": TaskSignature(subcats=("Y",), needs_recollement=True),
    "glue_weak_tau": TaskSignature(subcats=("Z_A", "Z_C"), needs_recollement=True),
    "restrict_weak_tau": TaskSignature(subcats=("Y",), needs_recollement=True),
    "glue_support_tau": TaskSignature(subcats=("Z_A", "Z_C"), needs_recollement=True),
    "restrict_support_tau": TaskSignature(subcats=("Y",), needs_recollement=True),
    "glue_contravariantly_finite": TaskSignature(subcats=("Z_A", "Z_C"), needs_recollement=True),
    "restrict_contravariantly_finite": TaskSignature(subcats=("Y",), needs_recollement=True),
    "glue_triple": TaskSignature(triples=("T_A", "T_C"), needs_recollement=True),
    "restrict_triple": TaskSignature(triples=("T",), needs_recollement=True),
}


# ============================================================================
# Pydantic Models
# ============================================================================

class SubcatArg(BaseModel):
    """부분범주 인자 (이름 목록 또는 키워드)"""
    key: str = Field(description="인자 이름 (예: Z_A, Y, T.D)")
    keyword: Optional[str] = Field(default=None, description="proj / all / none")
    names: List[str] = Field(default_factory=list, description="정규 모듈 이름 목록")
    via_phi: bool = Field(default=False, description="phi(...) 로 감싼 triple 인자")
    line: int = Field(default=0, description="정의된 줄")
    column: int = Field(default=0, description="값이 시작하는 열")

    @property
    def role(self) -> str:
        """'A', 'C' 또는 'B'"""
        base = self.key.split(".", 1)[0]
        if base.endswith("_A"):
            return "A"
        if base.endswith("_C"):
            return "C"
        return "B"


class AlgebraSpec(BaseModel):
    name: str = Field(default="", description="대수 이름")
    lines: List[Tuple[int, str]] = Field(default_factory=list, description="[algebra] 섹션의 (줄 번호, 원문)")


class RecollementSpec(BaseModel):
    E: List[str] = Field(default_factory=list, description="idempotent 의 vertex 집합")
    line: int = Field(default=0)


class TaskSpec(BaseModel):
    name: str = Field(description="task 이름 (고정 어휘)")
    dmax: int = Field(default=DEFAULT_DMAX, description="universe 최대 총 차원")
    depth: Optional[int] = Field(default=None, description="X_W 여해소 탐색 깊이 (없으면 2|U|+2)")
    n_max: int = Field(default=DEFAULT_N_MAX, description="Ext adjunction 검사 최대 차수")
    force: bool = Field(default=False, description="가설 gate 실패에도 진행 (UNSOUND)")
    jobs: int = Field(default=1, description="병렬도")
    side: str = Field(default="left", description="canonical_ses 의 방향")
    args: Dict[str, SubcatArg] = Field(default_factory=dict, description="부분범주/triple 인자")
    line: int = Field(default=0)


class JobSpec(BaseModel):
    algebra: AlgebraSpec
    recollement: Optional[RecollementSpec] = None
    task: TaskSpec

    def build_algebra(self) -> BoundQuiverAlgebra:
        return parse_algebra_lines(self.algebra.lines, name=self.algebra.name)


# ============================================================================
# 파싱
# ============================================================================

_SECTION_RE = re.compile(r"^\[(\w+)\]\s*$")
_PHI_RE = re.compile(r"^phi\s*\((.*)\)\s*$")
_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _split_sections(text: str) -> Dict[str, List[Tuple[int, str]]]:
    sections: Dict[str, List[Tuple[int, str]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.strip().startswith(("#", ";")):
            continue
        m = _SECTION_RE.match(raw.strip())
        if m:
            current = m.group(1).lower()
            if current not in ("algebra", "recollement", "task"):
                raise SpecParseError(f"알 수 없는 섹션: [{current}]", lineno, 1)
            if current in sections:
                raise SpecParseError(f"중복된 섹션: [{current}]", lineno, 1)
            sections[current] = []
            continue
        if current is None:
            raise SpecParseError("섹션 헤더 이전의 내용", lineno, 1)
        sections[current].append((lineno, raw))
    return sections


def _key_value(lineno: int, raw: str) -> Tuple[str, str, int]:
    key, sep, value = raw.partition("=")
    if not sep:
        raise SpecParseError(f"'key = value' 형식이 아닙니다: '{raw.strip()}'", lineno, 1)
    column = len(key) + 2 + (len(value) - len(value.lstrip()))
    return key.strip(), value.strip(), column


def _strip_comment(value: str) -> str:
    # 모듈 이름에 '#' 이 들어가므로 공백 뒤의 '#' 만 주석으로 봅니다
    return re.split(r"\s#", value, maxsplit=1)[0].strip()


def _parse_subcat_value(key: str, value: str, lineno: int, column: int) -> SubcatArg:
    via_phi = False
    m = _PHI_RE.match(value)
    if m:
        via_phi, value = True, m.group(1).strip()
    items = [v for v in re.split(r"[,\s]+", value) if v]
    lowered = [v.lower() for v in items]
    if len(items) == 1 and lowered[0] in KEYWORDS:
        return SubcatArg(key=key, keyword=lowered[0], via_phi=via_phi, line=lineno, column=column)
    if any(v in KEYWORDS for v in lowered):
        raise SpecParseError(f"{key}: 키워드는 이름과 함께 쓸 수 없습니다", lineno, column)
    return SubcatArg(key=key, names=items, via_phi=via_phi, line=lineno, column=column)


def _parse_int(key: str, value: str, lineno: int, column: int, minimum: int = 0) -> int:
    try:
        n = int(value)
    except ValueError:
        raise SpecParseError(f"{key}: 정수가 아닙니다: '{value}'", lineno, column) from None
    if n < minimum:
        raise SpecParseError(f"{key}: {minimum} 이상이어야 합니다", lineno, column)
    return n


def _parse_task(lines: List[Tuple[int, str]]) -> TaskSpec:
    fields: Dict[str, object] = {}
    args: Dict[str, SubcatArg] = {}
    first = lines[0][0] if lines else 0
    for lineno, raw in lines:
        key, value, column = _key_value(lineno, raw)
        value = _strip_comment(value)
        lowered = key.lower()
        if lowered in ("name", "task"):
            if value not in TASKS:
                raise SpecParseError(f"알 수 없는 task: '{value}'", lineno, column)
            fields["name"] = value
        elif lowered == "dmax":
            fields["dmax"] = _parse_int(key, value, lineno, column, minimum=1)
        elif lowered == "depth":
            fields["depth"] = _parse_int(key, value, lineno, column, minimum=1)
        elif lowered in ("n_max", "n-max"):
            fields["n_max"] = _parse_int(key, value, lineno, column, minimum=1)
        elif lowered == "jobs":
            fields["jobs"] = _parse_int(key, value, lineno, column, minimum=1)
        elif lowered == "force":
            if value.lower() not in _BOOL:
                raise SpecParseError(f"force: true/false 가 아닙니다: '{value}'", lineno, column)
            fields["force"] = _BOOL[value.lower()]
        elif lowered == "side":
            if value.lower() not in ("left", "right"):
                raise SpecParseError(f"side 는 left 또는 right 입니다: '{value}'", lineno, column)
            fields["side"] = value.lower()
        else:
            if key in args:
                raise SpecParseError(f"중복된 인자: {key}", lineno, 1)
            args[key] = _parse_subcat_value(key, value, lineno, column)
    if "name" not in fields:
        raise SpecParseError("[task] 에 name 이 없습니다", first, 1)

    task = TaskSpec(args=args, line=first, **fields)
    _check_arguments(task)
    return task


def _check_arguments(task: TaskSpec):
    sig = TASKS[task.name]
    for key in sig.subcats:
        if key not in task.args:
            raise SpecParseError(f"{task.name}: 인자 '{key}' 가 없습니다", task.line, 1)
    for key in sig.triples:
        if key in task.args:
            if not task.args[key].via_phi:
                raise SpecParseError(f"{key}: triple 은 phi(...) 또는 {key}.L/.D/.F 로 주어야 합니다",
                                     task.args[key].line, task.args[key].column)
            continue
        missing = [part for part in TRIPLE_PARTS if f"{key}.{part}" not in task.args]
        if missing:
            raise SpecParseError(f"{task.name}: triple '{key}' 의 {missing} 가 없습니다", task.line, 1)
    for key, arg in task.args.items():
        base = key.split(".", 1)[0]
        if base not in sig.subcats and base not in sig.triples:
            raise SpecParseError(f"{task.name}: 알 수 없는 인자 '{key}'", arg.line, 1)
        if arg.via_phi and base not in sig.triples:
            raise SpecParseError(f"{key}: phi(...) 는 triple 인자에만 쓸 수 있습니다", arg.line, arg.column)


def _parse_recollement(lines: List[Tuple[int, str]]) -> RecollementSpec:
    E: List[str] = []
    first = lines[0][0] if lines else 0
    for lineno, raw in lines:
        key, value, column = _key_value(lineno, raw)
        if key.strip().upper() not in ("E", "IDEMPOTENT"):
            raise SpecParseError(f"[recollement] 의 알 수 없는 키: '{key}'", lineno, 1)
        E = [v for v in re.split(r"[,\s{}]+", _strip_comment(value)) if v]
    if not E:
        raise SpecParseError("[recollement] 에 E 가 없습니다", first, 1)
    return RecollementSpec(E=E, line=first)


def parse_job_spec(text: str) -> JobSpec:
    """spec 텍스트를 JobSpec 으로 파싱합니다.

    Raises:
        SpecParseError: 줄/열 위치를 포함한 파싱 오류
    """
    sections = _split_sections(text)
    if "algebra" not in sections:
        raise SpecParseError("[algebra] 섹션이 없습니다", 1, 1)
    if "task" not in sections:
        raise SpecParseError("[task] 섹션이 없습니다", 1, 1)

    name = ""
    for _, raw in sections["algebra"]:
        key, sep, value = raw.partition("=")
        if sep and key.strip().lower() == "name":
            name = value.strip()
    algebra = AlgebraSpec(name=name, lines=sections["algebra"])
    recollement = _parse_recollement(sections["recollement"]) if "recollement" in sections else None
    task = _parse_task(sections["task"])

    if TASKS[task.name].needs_recollement and recollement is None:
        raise SpecParseError(f"{task.name}: [recollement] 섹션이 필요합니다", task.line, 1)
    spec = JobSpec(algebra=algebra, recollement=recollement, task=task)
    logger.info(f"spec 파싱 완료: task={task.name}, algebra={name or '?'}, E={recollement.E if recollement else None}")
    return spec


# ============================================================================
# universe 안에서의 해석
# ============================================================================

def resolve_subcat(arg: SubcatArg, universe: Universe) -> Subcat:
    """이름/키워드를 universe 의 부분범주로 바꿉니다.

    Raises:
        SpecParseError: universe 에 없는 이름
    """
    if arg.keyword == "proj":
        return Subcat.projectives(universe)
    if arg.keyword == "all":
        return Subcat.whole(universe)
    if arg.keyword == "none":
        return Subcat.empty(universe)
    unknown = [n for n in arg.names if n not in universe.names]
    if unknown:
        raise SpecParseError(
            f"{arg.key}: {universe.algebra.name} universe (dmax={universe.dmax}) 에 없는 이름 {unknown}",
            arg.line, arg.column,
        )
    return Subcat.from_names(universe, arg.names)


def resolve_triple(args: Dict[str, SubcatArg], key: str, universe: Universe) -> TauTriple:
    if key in args:
        return phi(resolve_subcat(args[key], universe))
    L, D, F = (resolve_subcat(args[f"{key}.{part}"], universe) for part in TRIPLE_PARTS)
    return TauTriple(L, D, F)


__all__ = [
    "AlgebraSpec",
    "JobSpec",
    "RecollementSpec",
    "SubcatArg",
    "TASKS",
    "TaskSignature",
    "TaskSpec",
    "parse_job_spec",
    "resolve_subcat",
    "resolve_triple",
]
