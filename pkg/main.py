#!/usr/bin/env python3
"""
adrg - 摂動グラフの共スペクトル性による準距離正則グラフ解析ツール
コマンドラインアプリケーション

License: MIT
"""

import sys
import logging
from typing import Optional, Sequence

try:
    # アプリケーション内部モジュール
    from src import __appname__, __version__
    from src.cli import run
    from src.utils import setup_logging, get_app_data_dir

except ImportError as e:
    print(f"必要なライブラリがインストールされていません: {e}", file=sys.stderr)
    print("pip install -r requirements.txt を実行してください", file=sys.stderr)
    sys.exit(1)


class AdrgApplication:
    """adrg アプリケーションクラス"""

    def __init__(self, argv: Optional[Sequence[str]] = None):
        """アプリケーションの初期化"""
        self.argv = list(sys.argv[1:] if argv is None else argv)

    def setup_directories(self):
        """必要なディレクトリの作成"""
        app_data_dir = get_app_data_dir()

        # ログディレクトリ
        log_dir = app_data_dir / "logs"
        log_dir.mkdir(exist_ok=True)

        return app_data_dir

    def run(self) -> int:
        """アプリケーションの実行"""
        debug = "--debug" in self.argv
        try:
            # ログ設定
            app_data_dir = self.setup_directories()
            setup_logging(
                app_data_dir / "logs" / "adrg.log",
                level=logging.DEBUG if debug else logging.INFO,
                console=debug,
            )
        except OSError as e:
            print(f"ログを初期化できません: {e}", file=sys.stderr)

        logging.info(f"{__appname__} {__version__} 開始: {' '.join(self.argv)}")
        try:
            code = run(self.argv)
        except Exception as e:
            # AdrgError 以外の例外は内部エラー
            logging.exception(f"アプリケーション実行エラー: {e}")
            print(f"内部エラー: {e}", file=sys.stderr)
            return 4
        logging.info(f"{__appname__} 終了 (exit {code})")
        return code


def main() -> None:
    """エントリーポイント"""
    sys.exit(AdrgApplication().run())


if __name__ == "__main__":
    main()
