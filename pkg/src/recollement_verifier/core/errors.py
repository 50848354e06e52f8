"""도메인 예외 계층

검증 실패(FAIL)는 예외가 아니라 리포트 항목입니다. 예외는 잘못된 입력,
탐색 상한 초과, 내부 불일치에만 사용합니다.
"""


class RecollementError(Exception):
    """모든 도메인 예외의 기반 클래스"""


class DimensionMismatchError(RecollementError, ValueError):
    """행렬/모듈 차원 불일치"""


class AlgebraError(RecollementError, ValueError):
    """대수 정의 오류"""


class InfiniteDimensionalError(AlgebraError):
    """관계식으로 잘리지 않는 cycle 이 있어 무한차원"""


class NonAdmissibleError(AlgebraError):
    """admissible 하지 않은 관계식"""


class RelationViolationError(RecollementError, ValueError):
    """모듈의 arrow 행렬이 관계식을 만족하지 않음"""


class MorphismError(RecollementError, ValueError):
    """vertex 사상들이 arrow 와 교환하지 않음 (모듈 준동형이 아님)"""


class DomainMismatchError(RecollementError, ValueError):
    """모듈이 functor 의 정의역 대수 위에 있지 않음"""


class UndecidedError(RecollementError):
    """동형/분해 탐색이 상한을 넘어 판정 불가"""


class CapExceededError(RecollementError):
    """열거 상한 초과"""


class OutsideUniverseError(RecollementError):
    """직합 성분이 열거된 universe 밖에 있음"""


class HypothesisError(RecollementError):
    """정리의 가설이 성립하지 않아 구성을 거부함"""

    def __init__(self, hypothesis: str, verdict: str):
        super().__init__(f"가설 불충족: {hypothesis} ({verdict})")
        self.hypothesis = hypothesis
        self.verdict = verdict


class SpecParseError(RecollementError, ValueError):
    """spec 파일 파싱 오류 (줄/열 위치 포함)"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
