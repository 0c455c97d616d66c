"""
解析設定管理クラス
許容誤差・探索上限などの設定値を管理し、検証を行う
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .utils import ANALYSIS_DEFAULTS, THREADS_ENV


def _threads_from_env() -> int:
    """ADRG_THREADS から並列度を取得"""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        return ANALYSIS_DEFAULTS['threads']
    return value if value >= 1 else ANALYSIS_DEFAULTS['threads']


@dataclass
class AnalysisSettings:
    """解析設定を格納するデータクラス"""

    # 固有値クラスタリング
    cluster_tol_scale: float = ANALYSIS_DEFAULTS['cluster_tol_scale']
    ambiguity_factor: float = ANALYSIS_DEFAULTS['ambiguity_factor']

    # 浮動小数点比較
    crossed_tol: float = ANALYSIS_DEFAULTS['crossed_tol']
    reconcile_band: float = ANALYSIS_DEFAULTS['reconcile_band']
    identity_tol: float = ANALYSIS_DEFAULTS['identity_tol']

    # 探索上限
    iso_node_budget: int = ANALYSIS_DEFAULTS['iso_node_budget']
    iso_max_vertices: int = ANALYSIS_DEFAULTS['iso_max_vertices']
    exhaustive_max_set: int = ANALYSIS_DEFAULTS['exhaustive_max_set']
    pair_reduction_check_max: int = ANALYSIS_DEFAULTS['pair_reduction_check_max']
    permutation_search_max: int = ANALYSIS_DEFAULTS['permutation_search_max']
    max_vertices: int = ANALYSIS_DEFAULTS['max_vertices']

    # 並列度
    threads: int = field(default_factory=_threads_from_env)

    def __post_init__(self):
        """初期化後の検証"""
        self.validate()

    def validate(self) -> bool:
        """設定値の検証（範囲外の値はデフォルト値に修正）"""
        logger = logging.getLogger(__name__)
        try:
            for name in ('cluster_tol_scale', 'crossed_tol', 'reconcile_band', 'identity_tol'):
                value = getattr(self, name)
                if not isinstance(value, (int, float)) or not (0 < value < 1):
                    setattr(self, name, ANALYSIS_DEFAULTS[name])
                    logger.warning(f"無効な許容誤差を修正: {name}={value}")

            if not isinstance(self.ambiguity_factor, (int, float)) or self.ambiguity_factor <= 1:
                logger.warning(f"無効な曖昧性係数を修正: {self.ambiguity_factor}")
                self.ambiguity_factor = ANALYSIS_DEFAULTS['ambiguity_factor']

            # 照合帯は判定許容誤差より広くなければ意味がない
            if self.reconcile_band <= self.crossed_tol:
                logger.warning(
                    f"照合帯が許容誤差以下のため修正: {self.reconcile_band} <= {self.crossed_tol}"
                )
                self.reconcile_band = max(ANALYSIS_DEFAULTS['reconcile_band'], self.crossed_tol * 100)

            for name in ('iso_node_budget', 'iso_max_vertices', 'exhaustive_max_set',
                         'pair_reduction_check_max', 'permutation_search_max', 'max_vertices'):
                value = getattr(self, name)
                if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                    setattr(self, name, ANALYSIS_DEFAULTS[name])
                    logger.warning(f"無効な上限値を修正: {name}={value}")

            if not isinstance(self.threads, int) or self.threads < 1:
                logger.warning(f"無効な並列度を修正: {self.threads}")
                self.threads = ANALYSIS_DEFAULTS['threads']

            return True

        except Exception as e:
            logger.error(f"解析設定検証エラー: {e}")
            return False

    def cluster_tolerance(self, spectral_radius: float) -> float:
        """固有値クラスタリングの許容誤差（スペクトル半径でスケール）"""
        return self.cluster_tol_scale * max(1.0, abs(spectral_radius))

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            'cluster_tol_scale': self.cluster_tol_scale,
            'ambiguity_factor': self.ambiguity_factor,
            'crossed_tol': self.crossed_tol,
            'reconcile_band': self.reconcile_band,
            'identity_tol': self.identity_tol,
            'iso_node_budget': self.iso_node_budget,
            'iso_max_vertices': self.iso_max_vertices,
            'exhaustive_max_set': self.exhaustive_max_set,
            'pair_reduction_check_max': self.pair_reduction_check_max,
            'permutation_search_max': self.permutation_search_max,
            'max_vertices': self.max_vertices,
            'threads': self.threads,
        }

    @classmethod
    def from_cli_values(
        cls,
        tol: Optional[float] = None,
        crossed_tol: Optional[float] = None,
        identity_tol: Optional[float] = None,
        iso_budget: Optional[int] = None,
    ) -> "AnalysisSettings":
        """CLI 値から AnalysisSettings を作成（未指定はデフォルト）"""
        values: Dict[str, Any] = {}
        if tol is not None:
            values['cluster_tol_scale'] = tol
        if crossed_tol is not None:
            values['crossed_tol'] = crossed_tol
        if identity_tol is not None:
            values['identity_tol'] = identity_tol
        if iso_budget is not None:
            values['iso_node_budget'] = iso_budget
        return cls(**values)


class AnalysisConfigManager:
    """解析設定管理クラス"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._current_settings = AnalysisSettings()

    @property
    def current_settings(self) -> AnalysisSettings:
        """現在の設定を取得"""
        return self._current_settings

    def update_settings(self, new_settings: AnalysisSettings) -> bool:
        """設定を更新"""
        try:
            if new_settings.validate():
                self._current_settings = new_settings
                self.logger.info("解析設定を更新しました")
                return True
            self.logger.error("解析設定の更新に失敗しました")
            return False
        except Exception as e:
            self.logger.error(f"解析設定更新エラー: {e}")
            return False

    def reset_to_defaults(self):
        """設定をデフォルト値にリセット"""
        self._current_settings = AnalysisSettings()
        self.logger.info("解析設定をデフォルト値にリセットしました")


# グローバルな設定管理インスタンス
analysis_config_manager = AnalysisConfigManager()


def get_analysis_config_manager() -> AnalysisConfigManager:
    """解析設定管理インスタンスを取得"""
    return analysis_config_manager


def current_settings() -> AnalysisSettings:
    """現在有効な解析設定を取得"""
    return analysis_config_manager.current_settings
