"""환경 변수 기반 기본 설정

모든 값은 선택 사항입니다. 결과에 영향을 주는 값(dmax, depth 등)은
spec 파일과 CLI 플래그가 항상 우선합니다.
"""

import os

from dotenv import load_dotenv

# 환경변수 로드 (.env 가 없으면 무시)
load_dotenv()

LOG_DIR = os.getenv("RECOLLEMENT_LOG_DIR", "logs")
LOG_LEVEL = os.getenv("RECOLLEMENT_LOG_LEVEL", "INFO")

# 탐색 상한
ISO_SEARCH_CAP = int(os.getenv("RECOLLEMENT_ISO_CAP", 2**20))
ENUM_CAP = int(os.getenv("RECOLLEMENT_ENUM_CAP", 2**16))
SUBSET_CAP = int(os.getenv("RECOLLEMENT_SUBSET_CAP", 2**12))
MAX_WEIGHT = int(os.getenv("RECOLLEMENT_MAX_WEIGHT", 64))

# 기본 실행 파라미터
DEFAULT_DMAX = 3
DEFAULT_N_MAX = 4

# 서버
SERVER_PORT = int(os.getenv("SERVER_PORT", 8000))
ALLOWED_ORIGINS = os.getenv("ALLOWED_ORIGINS", "*").split(",")
