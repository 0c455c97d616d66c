"""
グラフ表現と入出力
隣接表（ループ・多重辺を許す）、距離行列、graph6 / JSON / DOT 形式、同型判定
"""

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import jsonschema
import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from .analysis_config import current_settings
from .exceptions import GraphFormatError, InvariantViolation, IsomorphismBudgetExceeded, PreconditionError
from .utils import load_schema

logger = logging.getLogger(__name__)

# 非連結な頂点対の距離
INFINITE = -1

GRAPH6_HEADER = ">>graph6<<"


@dataclass(frozen=True)
class Graph:
    """
    対称な非負整数隣接表で表したグラフ

    adj[u][u] はループの本数（ループ1本で対角成分は1）、
    adj[u][v] は u,v 間の辺の本数。
    """

    n: int
    adj: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if len(self.adj) != self.n or any(len(row) != self.n for row in self.adj):
            raise PreconditionError(f"隣接表の大きさが頂点数 {self.n} と一致しません")
        for u in range(self.n):
            for v in range(u, self.n):
                a = self.adj[u][v]
                if a < 0:
                    raise PreconditionError(f"負の隣接成分があります: adj[{u}][{v}]={a}")
                if a != self.adj[v][u]:
                    raise PreconditionError(f"隣接表が対称ではありません: ({u},{v})")
        if self.labels is not None and len(self.labels) != self.n:
            raise PreconditionError("ラベル数が頂点数と一致しません")

    # --- 構築 ---

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> "Graph":
        """行のリスト（numpy 配列可）からグラフを作成"""
        adj = tuple(tuple(int(a) for a in row) for row in rows)
        return cls(len(adj), adj, tuple(labels) if labels is not None else None)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]],
                   labels: Optional[Sequence[str]] = None) -> "Graph":
        """辺リストから単純グラフを作成（重複辺は1本として扱う）"""
        rows = [[0] * n for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"辺リストにループがあります: {u}")
            rows[u][v] = rows[v][u] = 1
        return cls.from_matrix(rows, labels)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        """辺のない n 頂点グラフ"""
        return cls.from_matrix([[0] * n for _ in range(n)])

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """networkx グラフから作成（頂点は反復順に 0..n-1 へ対応）"""
        nodes = list(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[a], index[b]) for a, b in graph.edges() if a != b))

    # --- 基本情報 ---

    def matrix(self) -> np.ndarray:
        """int64 の隣接行列"""
        return np.array(self.adj, dtype=np.int64).reshape(self.n, self.n)

    def object_matrix(self) -> np.ndarray:
        """Python 整数（多倍長）の隣接行列"""
        m = np.empty((self.n, self.n), dtype=object)
        for u in range(self.n):
            for v in range(self.n):
                m[u, v] = self.adj[u][v]
        return m

    def is_simple(self) -> bool:
        """ループ・多重辺を含まないか"""
        return all(
            self.adj[u][v] in (0, 1) and self.adj[u][u] == 0
            for u in range(self.n) for v in range(self.n)
        )

    def non_simple_entry(self) -> Optional[Tuple[int, int, int]]:
        """単純でない最初の成分 (u, v, 値)、単純なら None"""
        for u in range(self.n):
            if self.adj[u][u] != 0:
                return (u, u, self.adj[u][u])
            for v in range(u + 1, self.n):
                if self.adj[u][v] > 1:
                    return (u, v, self.adj[u][v])
        return None

    def neighbors(self, u: int) -> List[int]:
        """u に隣接する頂点（ループは除く）"""
        return [v for v in range(self.n) if v != u and self.adj[u][v] > 0]

    def degrees(self) -> List[int]:
        """行和（ループは1、多重辺は本数で数える）"""
        return [sum(row) for row in self.adj]

    def edge_count(self) -> int:
        """辺の本数（多重度込み、ループ含む）"""
        off = sum(self.adj[u][v] for u in range(self.n) for v in range(u + 1, self.n))
        return off + sum(self.adj[u][u] for u in range(self.n))

    def trace(self) -> int:
        return sum(self.adj[u][u] for u in range(self.n))

    def max_row_sum(self) -> int:
        return max(self.degrees(), default=0)

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return nx.is_connected(self.support())

    def is_bipartite(self) -> bool:
        return self.trace() == 0 and nx.is_bipartite(self.support())

    def check_vertex(self, u: int) -> None:
        """頂点番号の範囲チェック"""
        if not isinstance(u, (int, np.integer)) or not 0 <= u < self.n:
            raise PreconditionError(f"頂点番号が範囲外です: {u} (n={self.n})")

    # --- 変換 ---

    def support(self) -> nx.Graph:
        """辺の有無だけを残した単純グラフ（ループは無視）"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(
            (u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.adj[u][v] > 0
        )
        return graph

    def to_networkx(self) -> nx.Graph:
        """ループ本数を頂点属性 loops、多重度を辺属性 mult に持つ networkx グラフ"""
        graph = nx.Graph()
        for u in range(self.n):
            graph.add_node(u, loops=self.adj[u][u])
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if self.adj[u][v] > 0:
                    graph.add_edge(u, v, mult=self.adj[u][v])
        return graph

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """頂点 u を perm[u] へ移したグラフ"""
        if sorted(perm) != list(range(self.n)):
            raise PreconditionError("置換が頂点集合の全単射ではありません")
        rows = [[0] * self.n for _ in range(self.n)]
        for u in range(self.n):
            for v in range(self.n):
                rows[perm[u]][perm[v]] = self.adj[u][v]
        labels = None
        if self.labels is not None:
            new_labels = [""] * self.n
            for u in range(self.n):
                new_labels[perm[u]] = self.labels[u]
            labels = new_labels
        return Graph.from_matrix(rows, labels)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """指定頂点（この順序）の誘導部分グラフ"""
        for u in vertices:
            self.check_vertex(u)
        rows = [[self.adj[u][v] for v in vertices] for u in vertices]
        labels = [self.labels[u] for u in vertices] if self.labels is not None else None
        return Graph.from_matrix(rows, labels)

    def complement(self) -> "Graph":
        """補グラフ（単純グラフのみ）"""
        if not self.is_simple():
            raise PreconditionError("補グラフは単純グラフに対してのみ定義されます")
        return Graph.from_matrix(
            [[0 if u == v else 1 - self.adj[u][v] for v in range(self.n)] for u in range(self.n)]
        )

    def disjoint_union(self, other: "Graph") -> "Graph":
        """非交和（other の頂点は後ろに並ぶ）"""
        n = self.n + other.n
        rows = [[0] * n for _ in range(n)]
        for u in range(self.n):
            for v in range(self.n):
                rows[u][v] = self.adj[u][v]
        for u in range(other.n):
            for v in range(other.n):
                rows[self.n + u][self.n + v] = other.adj[u][v]
        return Graph.from_matrix(rows)

    def label(self, u: int) -> str:
        """頂点ラベル（未設定なら番号）"""
        if self.labels is None:
            return str(u)
        return self.labels[u]


@dataclass(frozen=True)
class DistanceMatrix:
    """全頂点対の距離（非連結な対は INFINITE）"""

    dist: Tuple[Tuple[int, ...], ...]
    diameter: int

    def __getitem__(self, pair: Tuple[int, int]) -> int:
        u, v = pair
        return self.dist[u][v]

    @property
    def n(self) -> int:
        return len(self.dist)

    def is_connected(self) -> bool:
        return self.n > 0 and all(d != INFINITE for row in self.dist for d in row)

    def pairs_at(self, h: int) -> List[Tuple[int, int]]:
        """距離 h の頂点対 (u<v) を辞書式順で列挙（h=0 なら (u,u)）"""
        if h == 0:
            return [(u, u) for u in range(self.n)]
        return [(u, v) for u, v in combinations(range(self.n), 2) if self.dist[u][v] == h]


def distances(g: Graph) -> DistanceMatrix:
    """
    BFS による全点対距離（辺は adj>=1、ループは無視）

    Args:
        g: グラフ

    Returns:
        DistanceMatrix
    """
    rows = [[INFINITE] * g.n for _ in range(g.n)]
    for source, lengths in nx.all_pairs_shortest_path_length(g.support()):
        for target, length in lengths.items():
            rows[source][target] = length
    finite = [d for row in rows for d in row if d != INFINITE]
    return DistanceMatrix(tuple(tuple(row) for row in rows), max(finite, default=0))


def require_connected(g: Graph) -> None:
    """連結性の前提チェック"""
    if not g.is_connected():
        raise PreconditionError("入力グラフが連結ではありません")


def require_simple(g: Graph) -> None:
    """単純グラフの前提チェック"""
    entry = g.non_simple_entry()
    if entry is not None:
        u, v, a = entry
        raise PreconditionError(f"単純グラフではありません: adj[{u}][{v}]={a}")


# --- graph6 ---

def _graph6_size(data: bytes) -> Tuple[int, int]:
    """graph6 の頂点数部分を解析し (n, データ開始位置) を返す"""
    if not data:
        raise GraphFormatError("graph6 が空です", 0)
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphFormatError("graph6 の頂点数ヘッダが途中で切れています", len(data))
        n = 0
        for byte in data[2:8]:
            n = (n << 6) | (byte - 63)
        return n, 8
    if len(data) < 4:
        raise GraphFormatError("graph6 の頂点数ヘッダが途中で切れています", len(data))
    n = 0
    for byte in data[1:4]:
        n = (n << 6) | (byte - 63)
    return n, 4


def parse_graph6(text: Union[str, bytes]) -> Graph:
    """
    graph6 の1行を解析

    Args:
        text: graph6 文字列（末尾改行・>>graph6<< ヘッダ可）

    Returns:
        単純グラフ

    Raises:
        GraphFormatError: ヘッダ不正・ビット列の途中切れ・末尾の余分なデータ（オフセット付き）
    """
    if isinstance(text, str):
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as e:
            raise GraphFormatError(f"graph6 に ASCII 以外の文字があります: {text[e.start]!r}", e.start)
    else:
        data = bytes(text)
    data = data.rstrip(b"\r\n")
    base = 0
    if data.startswith(GRAPH6_HEADER.encode()):
        base = len(GRAPH6_HEADER)
        data = data[base:]

    for i, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise GraphFormatError(f"graph6 に不正な文字があります: {chr(byte)!r}", base + i)

    n, start = _graph6_size(data)
    limit = current_settings().max_vertices
    if n > limit:
        raise GraphFormatError(f"頂点数 {n} は上限 {limit} を超えています", base)

    expected = (n * (n - 1) // 2 + 5) // 6
    if len(data) < start + expected:
        raise GraphFormatError("graph6 のビット列が途中で切れています", base + len(data))
    if len(data) > start + expected:
        raise GraphFormatError("graph6 の末尾に余分なデータがあります", base + start + expected)

    graph = nx.from_graph6_bytes(data)
    rows = [[0] * n for _ in range(n)]
    for u, v in graph.edges():
        rows[u][v] = rows[v][u] = 1
    return Graph.from_matrix(rows)


def emit_graph6(g: Graph) -> str:
    """
    単純グラフを graph6 に符号化（頂点順はそのまま）

    Raises:
        PreconditionError: ループまたは多重辺がある場合（該当成分を示す）
    """
    require_simple(g)
    return nx.to_graph6_bytes(g.support(), header=False).decode("ascii").strip()


# --- JSON 擬グラフ形式 ---

def to_json_dict(g: Graph) -> Dict:
    """{"n": int, "adj": [[int]]} 形式へ変換"""
    data = {"n": g.n, "adj": [list(row) for row in g.adj]}
    if g.labels is not None:
        data["labels"] = list(g.labels)
    return data


def from_json_dict(data: Dict) -> Graph:
    """
    JSON 擬グラフ形式を検証して読み込み

    同梱の pseudograph スキーマで構造を検証した後、行列の形・対称性・ラベル数を検査する。

    Raises:
        GraphFormatError: スキーマ・対称性・値の検証に失敗した場合
    """
    try:
        jsonschema.validate(instance=data, schema=load_schema("pseudograph"))
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise GraphFormatError(f"JSON がスキーマに適合しません: {where}: {e.message}")

    n, adj = data["n"], data["adj"]
    if n > current_settings().max_vertices:
        raise GraphFormatError(f"頂点数 {n} は上限を超えています")
    if len(adj) != n or any(len(row) != n for row in adj):
        raise GraphFormatError("'adj' は n x n 行列である必要があります")
    for u, row in enumerate(adj):
        for v, a in enumerate(row):
            # スキーマの integer は 1.0 も通す
            if not isinstance(a, int):
                raise GraphFormatError(f"adj[{u}][{v}] が整数ではありません: {a!r}")
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u][v] != adj[v][u]:
                raise GraphFormatError(f"'adj' が対称ではありません: ({u},{v})")
    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise GraphFormatError("'labels' は n 個の文字列である必要があります")
    return Graph.from_matrix(adj, labels)


def dumps_graph(g: Graph) -> str:
    """単純なら graph6、そうでなければ JSON 擬グラフ形式の文字列"""
    if g.is_simple():
        return emit_graph6(g)
    return json.dumps(to_json_dict(g), ensure_ascii=False)


# --- DOT ---

def to_dot(g: Graph, name: str = "G") -> str:
    """DOT 形式（ループは自己辺、多重度は辺ラベル）"""
    lines = [f"graph {name} {{"]
    for u in range(g.n):
        if g.labels is not None:
            lines.append(f'  {u} [label="{g.labels[u]}"];')
        else:
            lines.append(f"  {u};")
    for u in range(g.n):
        for v in range(u, g.n):
            a = g.adj[u][v]
            if a == 0:
                continue
            attr = f' [label="{a}"]' if a > 1 else ""
            lines.append(f"  {u} -- {v}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- 読み込み ---

def load_graph_file(path: Union[str, Path]) -> Graph:
    """
    .g6 / .json ファイルからグラフを読み込み（.g6 は最初の空でない行）

    Raises:
        GraphFormatError: 解析失敗
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GraphFormatError(f"ファイルを読み込めません: {path} - {e}")

    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"JSON 解析エラー: {e.msg}", e.pos)
        return from_json_dict(data)

    for line in text.splitlines():
        if line.strip():
            return parse_graph6(line.strip())
    raise GraphFormatError(f"graph6 ファイルが空です: {path}", 0)


def random_connected_graph(n: int, p: float, seed: int) -> Graph:
    """G(n,p) を連結になるまで再抽選した乱択グラフ"""
    rng = random.Random(seed)
    while True:
        graph = nx.gnp_random_graph(n, p, seed=rng.randrange(2 ** 32))
        if n == 1 or nx.is_connected(graph):
            return Graph.from_networkx(graph)


# --- 同型判定 ---

@dataclass(frozen=True)
class IsomorphismResult:
    """同型判定の結果（同型なら頂点置換の証拠付き）"""

    isomorphic: bool
    permutation: Optional[Tuple[int, ...]] = None
    nodes_searched: int = 0

    def __bool__(self) -> bool:
        return self.isomorphic


class _BudgetedMatcher(GraphMatcher):
    """探索ノード数に上限を設けた VF2 マッチャ"""

    def __init__(self, g1, g2, budget: int, **kwargs):
        super().__init__(g1, g2, **kwargs)
        self.budget = budget
        self.nodes_searched = 0

    def syntactic_feasibility(self, G1_node, G2_node):
        self.nodes_searched += 1
        if self.nodes_searched > self.budget:
            raise IsomorphismBudgetExceeded(
                f"同型判定の探索ノード数が上限 {self.budget} を超えました"
            )
        return super().syntactic_feasibility(G1_node, G2_node)


def _walk_powers(g: Graph, upto: int) -> List[np.ndarray]:
    """A^1..A^upto（オーバーフローしない範囲では int64、超える場合は多倍長）"""
    bound = max(g.max_row_sum(), 1)
    if bound ** upto < 2 ** 62:
        a = g.matrix()
    else:
        a = g.object_matrix()
    powers = [a]
    for _ in range(upto - 1):
        powers.append(powers[-1] @ a)
    return powers


def vertex_invariants(g: Graph, walk_length: int = 8) -> List[str]:
    """
    頂点不変量（ループ数・次数・距離と歩道数の多重集合）を WL 反復で細分化した色

    Args:
        g: グラフ
        walk_length: 歩道数を数える最大長

    Returns:
        頂点ごとの色文字列
    """
    if g.n == 0:
        return []
    dm = distances(g)
    length = max(1, min(walk_length, g.n))
    powers = _walk_powers(g, length)
    degrees = g.degrees()
    graph = g.to_networkx()
    for u in range(g.n):
        profile = sorted(
            (dm.dist[u][w], tuple(int(p[u, w]) for p in powers)) for w in range(g.n)
        )
        graph.nodes[u]["inv"] = repr((g.adj[u][u], degrees[u], tuple(profile)))
    for u, v in graph.edges():
        graph.edges[u, v]["mult"] = str(g.adj[u][v])
    hashes = nx.weisfeiler_lehman_subgraph_hashes(
        graph, node_attr="inv", edge_attr="mult", iterations=3
    )
    return [graph.nodes[u]["inv"] + "|" + hashes[u][-1] if hashes[u] else graph.nodes[u]["inv"]
            for u in range(g.n)]


def are_isomorphic(g: Graph, h: Graph, budget: Optional[int] = None) -> IsomorphismResult:
    """
    隣接表（対角成分を含む）を保つ頂点全単射が存在するか判定

    不変量による分割細分化で候補を絞ってから VF2 でバックトラック探索する。

    Args:
        g, h: 比較するグラフ
        budget: 探索ノード数の上限（None なら設定値）

    Returns:
        IsomorphismResult（同型なら再検証済みの置換付き）

    Raises:
        PreconditionError: 頂点数が実用上限を超える場合
        IsomorphismBudgetExceeded: 探索が上限を超えた場合
    """
    settings = current_settings()
    if g.n != h.n:
        return IsomorphismResult(False)
    if g.n > settings.iso_max_vertices:
        raise PreconditionError(
            f"同型判定の頂点数上限 {settings.iso_max_vertices} を超えています: n={g.n}"
        )
    if g.n == 0:
        return IsomorphismResult(True, ())

    if sorted(g.degrees()) != sorted(h.degrees()) or g.edge_count() != h.edge_count():
        return IsomorphismResult(False)

    colors_g = vertex_invariants(g)
    colors_h = vertex_invariants(h)
    if Counter(colors_g) != Counter(colors_h):
        return IsomorphismResult(False)

    ng, nh = g.to_networkx(), h.to_networkx()
    for u in range(g.n):
        ng.nodes[u]["color"] = colors_g[u]
        nh.nodes[u]["color"] = colors_h[u]

    matcher = _BudgetedMatcher(
        ng, nh,
        budget=budget if budget is not None else settings.iso_node_budget,
        node_match=lambda a, b: a["color"] == b["color"] and a["loops"] == b["loops"],
        edge_match=lambda a, b: a["mult"] == b["mult"],
    )
    if not matcher.is_isomorphic():
        logger.debug(f"同型ではありません（探索ノード数 {matcher.nodes_searched}）")
        return IsomorphismResult(False, None, matcher.nodes_searched)

    perm = tuple(matcher.mapping[u] for u in range(g.n))
    # 証拠の置換を独立に再検証
    for u in range(g.n):
        for v in range(g.n):
            if g.adj[u][v] != h.adj[perm[u]][perm[v]]:
                raise InvariantViolation("同型写像の再検証に失敗しました")
    return IsomorphismResult(True, perm, matcher.nodes_searched)
