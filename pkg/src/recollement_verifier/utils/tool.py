import asyncio
import logging

from typing import Any, List, Optional
from mcp.server.fastmcp import FastMCP

from ..cli import run_spec_text
from ..config import LOG_DIR, LOG_LEVEL
from ..logging_config import setup_logging
from .fixtures import get_fixture as lookup_fixture
from .fixtures import list_fixture_names

ERROR_MESSAGE = "검증 작업을 실행하지 못했습니다. 로그를 확인해주세요."

TOOLS_INFO = [
    {
        "name": "run_verification",
        "description": "job spec 텍스트([algebra]/[recollement]/[task])를 실행하고 검증 리포트를 돌려줍니다.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "spec_text": {
                    "type": "string",
                    "description": "job spec 전체 텍스트"
                },
                "dmax": {
                    "type": "integer",
                    "description": "(선택사항) universe 최대 총 차원"
                },
                "force": {
                    "type": "boolean",
                    "description": "(선택사항) 가설 gate 실패에도 진행 (UNSOUND 로 표시)"
                }
            },
            "required": ["spec_text"]
        }
    },
    {
        "name": "list_fixtures",
        "description": "번들 fixture 대수 이름 목록을 제공합니다.",
        "inputSchema": {
            "type": "object",
            "properties": {}
        }
    },
    {
        "name": "get_fixture",
        "description": "fixture 대수의 정의, idempotent 후보, 설명을 제공합니다.",
        "inputSchema": {
            "type": "object",
            "properties": {
                "name": {
                    "type": "string",
                    "description": "fixture 이름 (예: A2, PROD)"
                }
            },
            "required": ["name"]
        }
    }
]

# 로깅 설정
setup_logging(LOG_DIR, LOG_LEVEL)
logger = logging.getLogger(__name__)

# FastMCP 서버 초기화
mcp = FastMCP("recollement-verifier")


# ============================================================================
# MCP Tools
# ============================================================================

@mcp.tool(name="run_verification", description="job spec 텍스트를 실행하고 검증 리포트를 돌려줍니다.")
async def run_verification(spec_text: str, dmax: Optional[int] = None,
                           force: Optional[bool] = None) -> Any:
    """
    배치 파이프라인(대수 → universe → recollement → task → 검증)을 한 번 실행합니다.

    Args:
        spec_text: job spec 텍스트
        dmax: spec 의 dmax 대신 쓸 값
        force: 가설 gate 실패에도 진행

    Returns:
        리포트 딕셔너리 (exit_code 포함). 입력 오류는 status=ERROR 리포트로 돌아옵니다.
    """
    logger.info("검증 작업 시작")
    try:
        # CPU 작업은 스레드에서
        report = await asyncio.to_thread(run_spec_text, spec_text, dmax=dmax, force=force)
        payload = report.model_dump(mode="json")
        payload["exit_code"] = report.exit_code()
        logger.info(f"검증 작업 완료: {report.task} → {report.status.value}")
        return payload
    except Exception:
        logger.error("검증 작업 중 오류 발생", exc_info=True)
        return ERROR_MESSAGE


@mcp.tool(name="list_fixtures", description="번들 fixture 대수 이름 목록을 제공합니다.")
async def list_fixtures() -> List[str]:
    return list_fixture_names()


@mcp.tool(name="get_fixture", description="fixture 대수의 정의, idempotent 후보, 설명을 제공합니다.")
async def get_fixture(name: str) -> Optional[dict]:
    fixture = lookup_fixture(name)
    if fixture is None:
        logger.warning(f"fixture 조회 실패: {name}")
    return fixture


def main():
    """MCP 서버 실행 (stdio)"""
    logger.info("Recollement Verifier MCP Server 시작")
    try:
        mcp.run(transport="stdio")
    except KeyboardInterrupt:
        logger.info("서버 종료 (사용자 인터럽트)")
    except Exception:
        logger.error("서버 실행 중 오류 발생", exc_info=True)
        raise


if __name__ == "__main__":
    main()
