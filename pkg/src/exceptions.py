"""
例外クラス
ライブラリ層は例外を送出し、終了コードへの変換はアプリケーション層で行う
"""

from typing import Any, Optional


class AdrgError(Exception):
    """adrg の全例外の基底クラス"""

    exit_code = 1

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness


class GraphFormatError(AdrgError):
    """graph6 / JSON 入力の解析エラー（バイトオフセット付き）"""

    exit_code = 2

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (offset {offset})"
        super().__init__(message)
        self.offset = offset


class PreconditionError(AdrgError):
    """前提条件違反（非連結、範囲外の頂点、サイズ上限超過など）"""

    exit_code = 3


class IsomorphismBudgetExceeded(PreconditionError):
    """同型判定の探索ノード数が上限を超えた"""


class InvariantViolation(AdrgError):
    """内部不変条件の違反（経路間の不一致、厳密恒等式の不成立）"""

    exit_code = 4


class DomainRefusal(AdrgError):
    """数学的に意味のある拒否（h-punctually cospectral でない等）"""

    exit_code = 5
