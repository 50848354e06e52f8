"""번들 fixture 대수 로더"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from ..core.quivalg import BoundQuiverAlgebra, build_algebra

logger = logging.getLogger(__name__)


# ============================================================================
# 데이터 로드
# ============================================================================

def load_fixtures() -> Dict:
    """fixture 데이터 로드

    Returns:
        Dict: fixture 이름 → 정의
    """
    data_path = Path(__file__).parent.parent / "data" / "fixtures.json"

    try:
        with open(data_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        logger.error(f"fixture 데이터 파일을 찾을 수 없습니다: {data_path}")
        return {}
    except json.JSONDecodeError as e:
        logger.error(f"JSON 파싱 실패: {e}", exc_info=True)
        return {}


FIXTURES = load_fixtures()


# ============================================================================
# 조회
# ============================================================================

def list_fixture_names() -> List[str]:
    return list(FIXTURES.keys())


def get_fixture(name: str) -> Optional[Dict]:
    return FIXTURES.get(name)


def algebra_text(name: str) -> str:
    """[algebra] 섹션 본문

    Raises:
        KeyError: 없는 fixture
    """
    fixture = FIXTURES.get(name)
    if fixture is None:
        raise KeyError(f"알 수 없는 fixture: {name}")
    return "\n".join(fixture["algebra"])


def fixture_algebra(name: str) -> BoundQuiverAlgebra:
    return build_algebra(algebra_text(name))


def job_spec_text(fixture: str, task: str, E: Optional[Iterable[str]] = None, **args) -> str:
    """fixture 위의 job spec 텍스트를 만듭니다.

    Args:
        fixture (str): fixture 이름
        task (str): task 이름
        E (Optional[Iterable[str]]): idempotent vertex (없으면 [recollement] 생략)
        **args: [task] 섹션의 나머지 키 (예: Z_A="D1.0#0", dmax=3).
            triple 부분은 T_L 대신 "T.L" 키를 dict 로 넘깁니다.
    """
    lines = ["[algebra]", algebra_text(fixture), ""]
    if E is not None:
        lines += ["[recollement]", "E = " + ", ".join(str(v) for v in E), ""]
    lines += ["[task]", f"name = {task}"]
    for key, value in args.items():
        if isinstance(value, bool):
            value = str(value).lower()
        elif isinstance(value, (list, tuple)):
            value = ", ".join(value) if value else "none"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
