"""
共通ユーティリティ関数
ログ設定、出力パス検証、リソース管理、検証レコードなどの共通機能
"""

import logging
import os
import sys
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union


# 解析関連の共通定数
ANALYSIS_DEFAULTS = {
    'cluster_tol_scale': 1e-9,
    'ambiguity_factor': 10.0,
    'crossed_tol': 1e-7,
    'reconcile_band': 1e-5,
    'identity_tol': 1e-8,
    'iso_node_budget': 10_000_000,
    'iso_max_vertices': 64,
    'exhaustive_max_set': 12,
    'pair_reduction_check_max': 8,
    'permutation_search_max': 6,
    'max_vertices': 512,
    'threads': 1,
}

# 出力形式と拡張子
OUTPUT_FORMATS = {
    'graph6': '.g6',
    'json': '.json',
    'dot': '.dot',
}

# 出力形式名のリスト（CLIでの表示順）
OUTPUT_FORMAT_NAMES = ['graph6', 'json', 'dot']

# 数値恒等式の標本点の個数
SAMPLE_POINT_COUNT = 5

# アプリケーションデータディレクトリの環境変数
APP_HOME_ENV = 'ADRG_HOME'
THREADS_ENV = 'ADRG_THREADS'


@dataclass
class VerificationRecord:
    """恒等式・定理チェックの結果を格納するデータクラス"""

    name: str
    passed: bool
    max_residual: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            'name': self.name,
            'passed': self.passed,
            'max_residual': self.max_residual,
            'details': _jsonable(self.details),
        }


def _jsonable(value: Any) -> Any:
    """JSON 化できない値（numpy 型、タプルキーなど）を変換"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if hasattr(value, 'item'):
        return value.item()
    return value


def dump_json(data: Any) -> str:
    """決定的な JSON 文字列を生成（キー順固定）"""
    return json.dumps(_jsonable(data), ensure_ascii=False, indent=2, sort_keys=True)


def validate_and_prepare_output_path(
    output_path: Union[str, Path],
    output_format: Optional[str] = None
) -> Tuple[bool, Path, str]:
    """
    出力パスを検証・準備する

    Args:
        output_path: 出力パス
        output_format: 出力形式（'graph6', 'json', 'dot'）、None の場合は拡張子を変更しない

    Returns:
        (success, normalized_path, error_message)
    """
    try:
        path = Path(output_path)

        if not path.is_absolute():
            path = Path.cwd() / path
        path = path.resolve()

        # 拡張子をチェック・追加
        if output_format is not None:
            suffix = OUTPUT_FORMATS.get(output_format)
            if suffix is None:
                return False, path, f"未知の出力形式です: {output_format}"
            if path.suffix.lower() != suffix:
                path = path.with_suffix(suffix)

        parent_dir = path.parent
        if not parent_dir.exists():
            try:
                parent_dir.mkdir(parents=True, exist_ok=True)
            except PermissionError:
                return False, path, f"ディレクトリ作成権限がありません: {parent_dir}"
            except OSError as e:
                return False, path, f"ディレクトリ作成エラー: {e}"

        if not os.access(parent_dir, os.W_OK):
            return False, path, f"書き込み権限がありません: {parent_dir}"

        if not path.stem:
            return False, path, "有効なファイル名を指定してください"

        return True, path, ""

    except Exception as e:
        return False, Path(output_path), f"パス検証エラー: {e}"


def setup_logging(log_file_path: Path, level: int = logging.INFO, console: Optional[bool] = None) -> None:
    """
    ログ設定を初期化

    Args:
        log_file_path: ログファイルのパス
        level: ログレベル
        console: コンソール出力の有無（None の場合は --debug 引数で判定）
    """
    log_file_path.parent.mkdir(parents=True, exist_ok=True)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # 既存のハンドラーをクリア
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    file_handler = logging.FileHandler(log_file_path, encoding='utf-8')
    file_handler.setFormatter(formatter)
    root_logger.addHandler(file_handler)

    # コンソールハンドラー（デバッグ時のみ、標準エラーへ）
    if console is None:
        console = '--debug' in sys.argv
    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)


def get_app_data_dir() -> Path:
    """
    アプリケーションデータディレクトリを取得（ADRG_HOME で上書き可能）

    Returns:
        ログ・設定を置くディレクトリ
    """
    override = os.environ.get(APP_HOME_ENV)
    base = Path(override) if override else Path.home() / ".adrg"
    base.mkdir(parents=True, exist_ok=True)
    return base


def get_resource_path(relative_path: str) -> Path:
    """
    リソースファイルの絶対パスを取得

    Args:
        relative_path: リソースファイルの相対パス

    Returns:
        リソースファイルの絶対パス
    """
    return Path(__file__).parent.parent / relative_path


def get_schema_path(name: str) -> Path:
    """同梱 JSON スキーマのパスを取得"""
    return get_resource_path(f"resources/schemas/{name}.schema.json")


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    """同梱 JSON スキーマを読み込み（名前ごとにキャッシュ）"""
    return json.loads(get_schema_path(name).read_text(encoding="utf-8"))


def sanitize_filename(filename: str) -> str:
    """
    ファイル名をサニタイズ

    Args:
        filename: 元のファイル名

    Returns:
        サニタイズされたファイル名
    """
    invalid_chars = '<>:"/\\|?*, '
    for char in invalid_chars:
        filename = filename.replace(char, '_')

    # 制御文字を削除
    filename = ''.join(char for char in filename if ord(char) >= 32)

    if len(filename) > 200:
        filename = filename[:200]

    return filename or "graph"


def parse_vertex_list(text: str) -> List[int]:
    """
    "0,3,7" 形式の頂点リストを解析

    Args:
        text: カンマ区切りの頂点番号

    Returns:
        頂点番号のリスト
    """
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',')]
    except ValueError:
        raise ValueError(f"頂点リストを解析できません: {text!r}")


def format_seconds(seconds: float) -> str:
    """経過時間を人間が読みやすい形式にフォーマット"""
    if seconds < 1.0:
        return f"{seconds * 1000:.1f} ms"
    return f"{seconds:.2f} s"
