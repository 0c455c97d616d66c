"""
adrg テストパッケージ
テスト用の共通設定とユーティリティ
"""

import sys
from pathlib import Path

# テスト実行時にプロジェクトルートをPythonパスに追加
test_dir = Path(__file__).parent
project_root = test_dir.parent

if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))


def assert_file_exists(file_path):
    """
    ファイルの存在をアサート

    Args:
        file_path: ファイルパス
    """
    path = Path(file_path)
    assert path.exists(), f"ファイルが存在しません: {file_path}"
    assert path.is_file(), f"指定されたパスはファイルではありません: {file_path}"


def random_corpus(count=200, n_max=10, p=0.4, seed=0):
    """
    乱択連結グラフのコーパス（頂点数 3..n_max を巡回）

    Args:
        count: グラフ数
        n_max: 最大頂点数
        p: 辺の確率
        seed: 先頭の乱数シード
    """
    from src.graph_core import random_connected_graph

    return [random_connected_graph(3 + i % (n_max - 2), p, seed + i) for i in range(count)]
