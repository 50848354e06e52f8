"""Recollement Verifier

idempotent recollement (Mod-A/AeA, Mod-A, Mod-eAe) 위에서 Wakamatsu tilting,
(weak) support τ-tilting, contravariantly finite 부분범주와 τ-cotorsion torsion
triple 의 gluing/restriction 을 유한체 위 전수 계산으로 검증합니다.
"""

__version__ = "0.1.0"
