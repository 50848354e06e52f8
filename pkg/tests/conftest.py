"""공용 fixture

대수, universe, recollement 은 계산 비용이 있으므로 세션 단위로 한 번만 만듭니다.
모듈의 같음은 대수 객체의 동일성에 의존하므로 한 테스트 안에서는 같은
factory 에서 나온 대상끼리만 비교해야 합니다.
"""

import pytest

from recollement_verifier.core.modcat import enumerate_indecomposables
from recollement_verifier.core.recol import Recollement, build_universes
from recollement_verifier.utils.fixtures import fixture_algebra


@pytest.fixture(scope="session")
def algebra():
    cache = {}

    def build(name: str):
        if name not in cache:
            cache[name] = fixture_algebra(name)
        return cache[name]

    return build


@pytest.fixture(scope="session")
def universe(algebra):
    cache = {}

    def build(name: str, dmax: int = 3):
        key = (name, dmax)
        if key not in cache:
            cache[key] = enumerate_indecomposables(algebra(name), dmax)
        return cache[key]

    return build


@pytest.fixture(scope="session")
def recollement():
    """(이름, E) → (Recollement, RecollementUniverses)"""
    cache = {}

    def build(name: str, *E: str, dmax: int = 3):
        key = (name, E, dmax)
        if key not in cache:
            R = Recollement(fixture_algebra(name), E)
            cache[key] = (R, build_universes(R, dmax))
        return cache[key]

    return build
