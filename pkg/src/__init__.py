"""
adrg Package
摂動グラフの共スペクトル性による準距離正則グラフ解析ツール

License: MIT
Version: 1.0.0
"""

__appname__ = "adrg"
__version__ = "1.0.0"
__author__ = "K4zuki T."
__license__ = "MIT"
__description__ = "摂動グラフの共スペクトル性による準距離正則グラフ解析ツール"

# ログ設定（パッケージレベル）
import logging

# メインクラス・関数のインポート
from .exceptions import (
    AdrgError,
    GraphFormatError,
    PreconditionError,
    IsomorphismBudgetExceeded,
    InvariantViolation,
    DomainRefusal,
)
from .graph_core import (
    Graph,
    DistanceMatrix,
    distances,
    parse_graph6,
    emit_graph6,
    are_isomorphic,
    random_connected_graph,
)
from .catalog import catalog, list_catalog, load_graph, twisted_desargues
from .exact_poly import IntPoly, charpoly, cospectral, cofactor_poly
from .spectral import SpectralData, decompose, crossed_multiplicity, walk_count
from .perturb import PerturbationKind, PerturbationOp, parse_descriptor, apply_op, verify_identity
from .classify import (
    is_walk_regular,
    punctual_walk_regular,
    punctual_spectrum_regular,
    punctual_cospectral,
    punctual_isospectral,
    profile,
    is_m_level,
    is_distance_regular,
)
from .cospectral_sets import (
    SetCorrespondence,
    is_removal_cospectral,
    is_isometric,
    godsil_pair_reduction,
    schwenk_walk_check,
    perturb_cospectral_check,
    generate_mates,
)
from .utils import setup_logging, get_resource_path

# パブリックAPI
__all__ = [
    # 例外
    'AdrgError',
    'GraphFormatError',
    'PreconditionError',
    'IsomorphismBudgetExceeded',
    'InvariantViolation',
    'DomainRefusal',

    # グラフ
    'Graph',
    'DistanceMatrix',
    'distances',
    'parse_graph6',
    'emit_graph6',
    'are_isomorphic',
    'random_connected_graph',
    'catalog',
    'list_catalog',
    'load_graph',
    'twisted_desargues',

    # スペクトル
    'IntPoly',
    'charpoly',
    'cospectral',
    'cofactor_poly',
    'SpectralData',
    'decompose',
    'crossed_multiplicity',
    'walk_count',

    # 摂動と判定
    'PerturbationKind',
    'PerturbationOp',
    'parse_descriptor',
    'apply_op',
    'verify_identity',
    'is_walk_regular',
    'punctual_walk_regular',
    'punctual_spectrum_regular',
    'punctual_cospectral',
    'punctual_isospectral',
    'profile',
    'is_m_level',
    'is_distance_regular',

    # 頂点集合
    'SetCorrespondence',
    'is_removal_cospectral',
    'is_isometric',
    'godsil_pair_reduction',
    'schwenk_walk_check',
    'perturb_cospectral_check',
    'generate_mates',

    # ユーティリティ関数
    'setup_logging',
    'get_resource_path',

    # メタデータ
    '__appname__',
    '__version__',
    '__author__',
    '__license__',
    '__description__'
]

# パッケージレベルのロガー設定
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())  # デフォルトではログを出力しない


def get_version_info():
    """
    バージョン情報を取得

    Returns:
        dict: バージョン情報の辞書
    """
    return {
        'appname': __appname__,
        'version': __version__,
        'author': __author__,
        'license': __license__,
        'description': __description__
    }
