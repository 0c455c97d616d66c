"""
名前付きグラフのカタログ
頂点順は各構成関数の docstring に記載した決定的な順序
"""

import logging
import re
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Callable, Dict, List, Tuple, Union

import networkx as nx

from .exceptions import InvariantViolation, PreconditionError
from .graph_core import Graph, are_isomorphic, load_graph_file

logger = logging.getLogger(__name__)

# 添字付きの族（cycle_7 など）
_FAMILY_PATTERN = re.compile(r"^(cycle|path|complete|empty)_(\d+)$")


def generalized_petersen(n: int, k: int) -> Graph:
    """
    一般化ピーターセングラフ GP(n,k)

    外周 0..n-1（i ~ i+1）、スポーク i ~ n+i、内周 n+i ~ n+(i+k) mod n
    """
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return Graph.from_edges(2 * n, edges)


def kneser_graph(n: int, k: int) -> Graph:
    """
    Kneser グラフ K(n,k)

    頂点は {0..n-1} の k 部分集合を辞書式順に並べたもの、互いに素なら隣接
    """
    subsets = list(combinations(range(n), k))
    edges = [
        (i, j) for i, j in combinations(range(len(subsets)), 2)
        if not set(subsets[i]) & set(subsets[j])
    ]
    labels = ["".join(str(x) for x in s) for s in subsets]
    return Graph.from_edges(len(subsets), edges, labels)


def petersen() -> Graph:
    """ピーターセングラフ（GP(5,2) の頂点順）"""
    return generalized_petersen(5, 2)


def desargues() -> Graph:
    """デザルググラフ（GP(10,3) の頂点順）"""
    return generalized_petersen(10, 3)


def cube() -> Graph:
    """3次元超立方体（頂点 i はビット列 i）"""
    graph = nx.hypercube_graph(3)
    nodes = sorted(graph.nodes())
    index = {node: int("".join(str(b) for b in node), 2) for node in nodes}
    return Graph.from_edges(8, ((index[a], index[b]) for a, b in graph.edges()))


def cycle(k: int) -> Graph:
    """閉路 C_k（i ~ i+1 mod k）"""
    if k < 3:
        raise PreconditionError(f"閉路の長さは 3 以上である必要があります: {k}")
    return Graph.from_networkx(nx.cycle_graph(k))


def path(k: int) -> Graph:
    """k 頂点の道 P_k"""
    if k < 1:
        raise PreconditionError(f"道の頂点数は 1 以上である必要があります: {k}")
    return Graph.from_networkx(nx.path_graph(k))


def complete(k: int) -> Graph:
    """完全グラフ K_k"""
    if k < 1:
        raise PreconditionError(f"完全グラフの頂点数は 1 以上である必要があります: {k}")
    return Graph.from_networkx(nx.complete_graph(k))


def empty(k: int) -> Graph:
    """辺のない k 頂点グラフ"""
    if k < 0:
        raise PreconditionError(f"頂点数が負です: {k}")
    return Graph.empty(k)


# --- Godsil-McKay スイッチング ---

def is_switching_set(g: Graph, subset: Tuple[int, ...]) -> bool:
    """
    subset が Godsil-McKay スイッチング集合か判定

    誘導部分グラフが正則で、外部の各頂点の subset 内の隣接数が 0, |C|/2, |C| のいずれか。
    少なくとも1頂点が |C|/2 でなければスイッチングは恒等になる。
    """
    size = len(subset)
    if size % 2 or size == 0:
        return False
    inside = set(subset)
    if len({sum(g.adj[u][v] for v in subset) for u in subset}) != 1:
        return False
    half_seen = False
    for w in range(g.n):
        if w in inside:
            continue
        count = sum(g.adj[w][c] for c in subset)
        if count == size // 2:
            half_seen = True
        elif count not in (0, size):
            return False
    return half_seen


def godsil_mckay_switch(g: Graph, subset: Tuple[int, ...]) -> Graph:
    """隣接数が |C|/2 の外部頂点について subset との隣接を反転（スペクトル保存）"""
    if not is_switching_set(g, subset):
        raise PreconditionError(f"スイッチング集合ではありません: {subset}")
    half = len(subset) // 2
    rows = [list(row) for row in g.adj]
    inside = set(subset)
    for w in range(g.n):
        if w in inside or sum(g.adj[w][c] for c in subset) != half:
            continue
        for c in subset:
            rows[w][c] = rows[c][w] = 1 - g.adj[w][c]
    return Graph.from_matrix(rows)


@lru_cache(maxsize=1)
def _twisted_desargues_search() -> Tuple[Graph, Tuple[int, ...]]:
    """デザルググラフの4頂点スイッチング集合を辞書式順に探索し、最初の有効な結果を返す"""
    from .exact_poly import charpoly

    base = desargues()
    target = charpoly(base)
    examined = 0
    for subset in combinations(range(base.n), 4):
        if not is_switching_set(base, subset):
            continue
        examined += 1
        switched = godsil_mckay_switch(base, subset)
        if len(set(switched.degrees())) != 1 or switched.degrees()[0] != 3:
            continue
        if not switched.is_connected() or not switched.is_bipartite():
            continue
        if charpoly(switched) != target:
            raise InvariantViolation(
                f"スイッチング後の特性多項式が一致しません: {subset}", witness=subset
            )
        if are_isomorphic(base, switched):
            continue
        logger.info(f"ねじれデザルググラフを構成しました: スイッチング集合 {subset}（候補 {examined} 個目）")
        return switched, subset
    raise InvariantViolation("ねじれデザルググラフのスイッチング集合が見つかりません")


def twisted_desargues() -> Graph:
    """
    ねじれデザルググラフ

    デザルググラフの4頂点 Godsil-McKay スイッチングで得られる、
    デザルググラフと共スペクトルかつ非同型な3正則2部グラフ。
    頂点順はデザルググラフの頂点順をそのまま引き継ぐ。
    """
    return _twisted_desargues_search()[0]


def twisted_desargues_switching_set() -> Tuple[int, ...]:
    """ねじれデザルググラフの構成に用いたスイッチング集合"""
    return _twisted_desargues_search()[1]


# --- カタログ ---

class GraphCatalog:
    """名前付きグラフの登録と解決"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._builders: Dict[str, Callable[[], Graph]] = {
            "petersen": petersen,
            "kneser_5_2": lambda: kneser_graph(5, 2),
            "petersen_complement": lambda: petersen().complement(),
            "desargues": desargues,
            "twisted_desargues": twisted_desargues,
            "cube": cube,
            "k2": lambda: complete(2),
            "k4": lambda: complete(4),
            "c5": lambda: cycle(5),
            "c6": lambda: cycle(6),
        }
        self._families: Dict[str, Callable[[int], Graph]] = {
            "cycle": cycle,
            "path": path,
            "complete": complete,
            "empty": empty,
        }

    def names(self) -> List[str]:
        """登録名の一覧（族は cycle_k などの形で表示）"""
        return sorted(self._builders) + [f"{family}_k" for family in sorted(self._families)]

    def has(self, name: str) -> bool:
        if name in self._builders:
            return True
        match = _FAMILY_PATTERN.match(name)
        return match is not None

    def get(self, name: str) -> Graph:
        """
        名前からグラフを構成

        Raises:
            PreconditionError: 未知の名前（利用可能な名前の一覧付き）
        """
        key = name.strip().lower()
        self.logger.debug(f"カタログ参照: {key}")
        if key in self._builders:
            return self._builders[key]()
        match = _FAMILY_PATTERN.match(key)
        if match:
            return self._families[match.group(1)](int(match.group(2)))
        available = ", ".join(self.names())
        raise PreconditionError(f"未知のグラフ名です: {name}（利用可能: {available}）")


_catalog = GraphCatalog()


def catalog(name: str) -> Graph:
    """名前付きグラフを取得"""
    return _catalog.get(name)


def list_catalog() -> List[str]:
    """利用可能なグラフ名の一覧"""
    return _catalog.names()


def load_graph(source: Union[str, Path]) -> Tuple[Graph, str]:
    """
    カタログ名・.g6・.json ファイルからグラフを読み込み

    Returns:
        (グラフ, 識別名)
    """
    text = str(source)
    path_obj = Path(text)
    if path_obj.exists():
        graph = load_graph_file(path_obj)
        logger.info(f"ファイルからグラフを読み込みました: {path_obj} (n={graph.n})")
        return graph, path_obj.name
    if _catalog.has(text.strip().lower()) or not path_obj.suffix:
        return catalog(text), text.strip().lower()
    # 存在しないファイル名は読み込みエラーとして報告
    return load_graph_file(path_obj), path_obj.name

