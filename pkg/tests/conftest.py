"""
pytest 共通フィクスチャーと hypothesis プロファイル
"""

import os

import pytest
from hypothesis import HealthCheck, settings

from src.analysis_config import get_analysis_config_manager


settings.register_profile(
    "default",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
if "CI" in os.environ:
    # CI では例数を増やす
    settings.register_profile(
        "ci",
        max_examples=100,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    )
    settings.load_profile("ci")
else:
    settings.load_profile("default")


@pytest.fixture(autouse=True)
def reset_analysis_settings():
    """テストごとに解析設定をデフォルトへ戻す"""
    yield
    get_analysis_config_manager().reset_to_defaults()


@pytest.fixture
def app_home(tmp_path, monkeypatch):
    """ADRG_HOME を一時ディレクトリへ向ける"""
    monkeypatch.setenv("ADRG_HOME", str(tmp_path / "home"))
    return tmp_path / "home"
