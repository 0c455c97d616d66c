"""
解析設定管理のテスト
"""

import pytest

from src.analysis_config import (
    AnalysisConfigManager,
    AnalysisSettings,
    current_settings,
    get_analysis_config_manager,
)
from src.utils import ANALYSIS_DEFAULTS


class TestAnalysisSettings:
    """AnalysisSettingsクラスのテスト"""

    def test_default_initialization(self, monkeypatch):
        """デフォルト初期化のテスト"""
        monkeypatch.delenv("ADRG_THREADS", raising=False)
        settings = AnalysisSettings()

        assert settings.cluster_tol_scale == ANALYSIS_DEFAULTS['cluster_tol_scale']
        assert settings.crossed_tol == ANALYSIS_DEFAULTS['crossed_tol']
        assert settings.reconcile_band == ANALYSIS_DEFAULTS['reconcile_band']
        assert settings.identity_tol == ANALYSIS_DEFAULTS['identity_tol']
        assert settings.iso_node_budget == ANALYSIS_DEFAULTS['iso_node_budget']
        assert settings.exhaustive_max_set == ANALYSIS_DEFAULTS['exhaustive_max_set']
        assert settings.threads == 1

    @pytest.mark.parametrize("name", ['cluster_tol_scale', 'crossed_tol', 'identity_tol'])
    @pytest.mark.parametrize("value", [0.0, -1e-3, 2.0, "abc"])
    def test_validation_invalid_tolerance(self, name, value):
        """無効な許容誤差はデフォルト値に修正される"""
        settings = AnalysisSettings(**{name: value})
        assert getattr(settings, name) == ANALYSIS_DEFAULTS[name]

    def test_validation_reconcile_band_widened(self):
        """照合帯は判定許容誤差より広く保たれる"""
        settings = AnalysisSettings(crossed_tol=1e-3, reconcile_band=1e-4)
        assert settings.reconcile_band > settings.crossed_tol

    @pytest.mark.parametrize("name", ['iso_node_budget', 'exhaustive_max_set', 'permutation_search_max'])
    def test_validation_invalid_limits(self, name):
        settings = AnalysisSettings(**{name: 0})
        assert getattr(settings, name) == ANALYSIS_DEFAULTS[name]
        settings = AnalysisSettings(**{name: True})
        assert getattr(settings, name) == ANALYSIS_DEFAULTS[name]

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("ADRG_THREADS", "4")
        assert AnalysisSettings().threads == 4
        monkeypatch.setenv("ADRG_THREADS", "many")
        assert AnalysisSettings().threads == ANALYSIS_DEFAULTS['threads']
        monkeypatch.setenv("ADRG_THREADS", "0")
        assert AnalysisSettings().threads == ANALYSIS_DEFAULTS['threads']

    def test_cluster_tolerance_scales_with_radius(self):
        settings = AnalysisSettings(cluster_tol_scale=1e-9)
        assert settings.cluster_tolerance(0.5) == pytest.approx(1e-9)
        assert settings.cluster_tolerance(-30.0) == pytest.approx(3e-8)

    def test_from_cli_values(self):
        settings = AnalysisSettings.from_cli_values(tol=1e-8, crossed_tol=1e-6, iso_budget=500)
        assert settings.cluster_tol_scale == 1e-8
        assert settings.crossed_tol == 1e-6
        assert settings.identity_tol == ANALYSIS_DEFAULTS['identity_tol']
        assert settings.iso_node_budget == 500

    def test_to_dict(self):
        data = AnalysisSettings().to_dict()
        assert set(data) == set(ANALYSIS_DEFAULTS)


class TestAnalysisConfigManager:
    """AnalysisConfigManagerクラスのテスト"""

    def test_update_and_reset(self):
        manager = AnalysisConfigManager()
        assert manager.update_settings(AnalysisSettings(identity_tol=1e-6))
        assert manager.current_settings.identity_tol == 1e-6

        manager.reset_to_defaults()
        assert manager.current_settings.identity_tol == ANALYSIS_DEFAULTS['identity_tol']

    def test_global_manager(self):
        """グローバル設定は current_settings から参照できる"""
        get_analysis_config_manager().update_settings(AnalysisSettings(crossed_tol=1e-6))
        assert current_settings().crossed_tol == 1e-6
