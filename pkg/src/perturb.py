"""
グラフの摂動 P1-P6 と特性多項式の恒等式検証
新しい頂点（ペンダント頂点・融合頂点・橋渡し頂点）は常に末尾に追加する
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .analysis_config import current_settings
from .exact_poly import (
    IntPoly,
    charpoly,
    cofactor_poly,
    delete_vertices,
    relative_residual,
    sample_points,
)
from .exceptions import GraphFormatError, PreconditionError
from .graph_core import Graph
from .spectral import SpectralData, decompose, vertex_deletion_identity
from .utils import VerificationRecord

logger = logging.getLogger(__name__)


class PerturbationKind(Enum):
    """摂動の種類（値は記述子のコード）"""

    DELETE_VERTEX = "P1"
    ADD_LOOP = "P2"
    ADD_PENDANT = "P3"
    FLIP_EDGE = "P4"
    AMALGAMATE = "P5"
    BRIDGE = "P6"

    @property
    def arity(self) -> int:
        return 1 if self.value in ("P1", "P2", "P3") else 2

    @property
    def adds_vertex(self) -> bool:
        return self in (PerturbationKind.ADD_PENDANT, PerturbationKind.BRIDGE)

    @classmethod
    def parse(cls, text: str) -> "PerturbationKind":
        """"P4" / "FlipEdge" / "flip_edge" などから種類を取得"""
        key = text.strip().replace("_", "").lower()
        for kind in cls:
            if key in (kind.value.lower(), kind.name.replace("_", "").lower()):
                return kind
        raise GraphFormatError(f"未知の摂動です: {text}")


_DESCRIPTOR = re.compile(r"^\s*(P[1-6])\s*:\s*(\d+)\s*(?:,\s*(\d+)\s*)?$", re.IGNORECASE)


@dataclass(frozen=True)
class PerturbationOp:
    """摂動の種類と頂点引数（P1-P3 は1頂点、P4-P6 は順序付き2頂点）"""

    kind: PerturbationKind
    args: Tuple[int, ...]

    def __post_init__(self):
        if len(self.args) != self.kind.arity:
            raise PreconditionError(
                f"{self.kind.value} の引数は {self.kind.arity} 個です: {self.args}"
            )
        if self.kind.arity == 2 and self.args[0] == self.args[1]:
            raise PreconditionError(f"{self.kind.value} には相異なる2頂点が必要です: {self.args}")

    @property
    def descriptor(self) -> str:
        """"P5:2,7" 形式の記述子"""
        return f"{self.kind.value}:{','.join(str(a) for a in self.args)}"

    def validate(self, g: Graph) -> None:
        for u in self.args:
            g.check_vertex(u)

    def remap(self, n: int) -> Tuple[List[Optional[int]], Optional[int]]:
        """
        摂動前の頂点番号から摂動後の番号への対応

        Returns:
            (mapping, new_vertex): mapping[w] は w の新しい番号（削除なら None）、
            new_vertex は追加された頂点の番号（なければ None）
        """
        if self.kind is PerturbationKind.DELETE_VERTEX:
            (u,) = self.args
            return [None if w == u else (w if w < u else w - 1) for w in range(n)], None
        if self.kind is PerturbationKind.AMALGAMATE:
            u, v = self.args
            mapping: List[Optional[int]] = []
            index = 0
            for w in range(n):
                if w in (u, v):
                    mapping.append(n - 2)
                else:
                    mapping.append(index)
                    index += 1
            return mapping, n - 2
        new_vertex = n if self.kind.adds_vertex else None
        return list(range(n)), new_vertex

    def translate(self, mapping: Sequence[int]) -> "PerturbationOp":
        """頂点引数を mapping で置き換えた摂動"""
        return PerturbationOp(self.kind, tuple(mapping[a] for a in self.args))


def parse_descriptor(text: str) -> PerturbationOp:
    """
    "P1:u" / "P4:u,v" 形式の記述子を解析

    Raises:
        GraphFormatError: 構文エラー
        PreconditionError: 引数の数が種類と合わない
    """
    match = _DESCRIPTOR.match(text)
    if not match:
        raise GraphFormatError(f"摂動の記述子を解析できません: {text!r}（例: P5:2,7）")
    kind = PerturbationKind(match.group(1).upper())
    args = tuple(int(a) for a in match.group(2, 3) if a is not None)
    return PerturbationOp(kind, args)


# --- 摂動 ---

def _labels(g: Graph) -> List[str]:
    return [g.label(u) for u in range(g.n)]


def _grow(g: Graph, extra: int) -> List[List[int]]:
    """末尾に extra 個の孤立頂点を加えた隣接表（可変）"""
    n = g.n + extra
    rows = [list(row) + [0] * extra for row in g.adj]
    rows.extend([0] * n for _ in range(extra))
    return rows


def delete_vertex(g: Graph, u: int) -> Graph:
    """P1: 頂点 u と接続する辺を除去（残りの頂点順は保存）"""
    g.check_vertex(u)
    return delete_vertices(g, [u])


def add_loop(g: Graph, u: int) -> Graph:
    """P2: u にループを1本追加（adj[u][u] を 1 増やす）"""
    g.check_vertex(u)
    rows = [list(row) for row in g.adj]
    rows[u][u] += 1
    return Graph.from_matrix(rows, g.labels)


def add_pendant(g: Graph, u: int) -> Graph:
    """P3: 新しい頂点を末尾に追加し u と1本の辺で結ぶ"""
    g.check_vertex(u)
    rows = _grow(g, 1)
    rows[u][g.n] = rows[g.n][u] = 1
    return Graph.from_matrix(rows, _labels(g) + [f"pendant-of-{g.label(u)}"])


def flip_edge(g: Graph, u: int, v: int) -> Graph:
    """
    P4: 辺 uv の有無を反転

    Raises:
        PreconditionError: u == v、または uv が多重辺
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise PreconditionError("辺の反転には相異なる2頂点が必要です")
    if g.adj[u][v] > 1:
        raise PreconditionError(f"多重辺は反転できません: adj[{u}][{v}]={g.adj[u][v]}")
    rows = [list(row) for row in g.adj]
    rows[u][v] = rows[v][u] = 1 - g.adj[u][v]
    return Graph.from_matrix(rows, g.labels)


def amalgamate(g: Graph, u: int, v: int) -> Graph:
    """
    P5: u と v を1頂点 u+v に融合（u+v は末尾）

    adj[u+v][w] = adj[u][w] + adj[v][w]、対角成分は adj[u][u] + adj[v][v] + adj[u][v]。
    辺 uv はループに、共通近傍への辺は多重辺になる。
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise PreconditionError("融合には相異なる2頂点が必要です")
    rest = [w for w in range(g.n) if w not in (u, v)]
    size = len(rest) + 1
    rows = [[0] * size for _ in range(size)]
    for i, a in enumerate(rest):
        for j, b in enumerate(rest):
            rows[i][j] = g.adj[a][b]
        rows[i][size - 1] = rows[size - 1][i] = g.adj[u][a] + g.adj[v][a]
    rows[size - 1][size - 1] = g.adj[u][u] + g.adj[v][v] + g.adj[u][v]
    labels = [g.label(w) for w in rest] + [f"amalgam-{g.label(u)}+{g.label(v)}"]
    return Graph.from_matrix(rows, labels)


def bridge(g: Graph, u: int, v: int) -> Graph:
    """P6: 新しい頂点を末尾に追加し u, v の両方と結ぶ（2-路 u-ū-v）"""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise PreconditionError("橋渡しには相異なる2頂点が必要です")
    rows = _grow(g, 1)
    for w in (u, v):
        rows[w][g.n] = rows[g.n][w] = 1
    return Graph.from_matrix(rows, _labels(g) + [f"bridge-{g.label(u)}-{g.label(v)}"])


def apply_set(g: Graph, kind: PerturbationKind, vertices: Iterable[int]) -> Graph:
    """
    頂点集合の各頂点に P1/P2/P3 を適用（G-U, G+UU, G+UŪ）

    集合として扱うため順序に依存しない。ペンダント頂点は頂点番号の昇順に末尾へ追加する。

    Raises:
        PreconditionError: 空集合、全頂点の削除、対象外の種類
    """
    subset = sorted(set(vertices))
    if not subset:
        raise PreconditionError("頂点集合が空です")
    for u in subset:
        g.check_vertex(u)
    if kind is PerturbationKind.DELETE_VERTEX:
        if len(subset) == g.n:
            raise PreconditionError("全頂点は削除できません")
        return delete_vertices(g, subset)
    if kind is PerturbationKind.ADD_LOOP:
        rows = [list(row) for row in g.adj]
        for u in subset:
            rows[u][u] += 1
        return Graph.from_matrix(rows, g.labels)
    if kind is PerturbationKind.ADD_PENDANT:
        rows = _grow(g, len(subset))
        for k, u in enumerate(subset):
            rows[u][g.n + k] = rows[g.n + k][u] = 1
        labels = _labels(g) + [f"pendant-of-{g.label(u)}" for u in subset]
        return Graph.from_matrix(rows, labels)
    raise PreconditionError(f"集合への適用は P1-P3 のみです: {kind.value}")


def apply_op(g: Graph, op: PerturbationOp) -> Graph:
    """PerturbationOp を適用"""
    op.validate(g)
    kind = op.kind
    if kind is PerturbationKind.DELETE_VERTEX:
        return delete_vertex(g, *op.args)
    if kind is PerturbationKind.ADD_LOOP:
        return add_loop(g, *op.args)
    if kind is PerturbationKind.ADD_PENDANT:
        return add_pendant(g, *op.args)
    if kind is PerturbationKind.FLIP_EDGE:
        return flip_edge(g, *op.args)
    if kind is PerturbationKind.AMALGAMATE:
        return amalgamate(g, *op.args)
    return bridge(g, *op.args)


# --- 恒等式 ---

def predicted_charpoly(g: Graph, op: PerturbationOp) -> Optional[IntPoly]:
    """
    摂動後の特性多項式を G とその部分グラフの多項式から予測（P1 は None）

    P2: φ - φ_{G-u}
    P3: xφ - φ_{G-u}
    P4: φ - φ_{G-u-v} ∓ 2Ψ_uv（追加は -、除去は +）
    P5: φ_{G-u} + φ_{G-v} - (x - a_uv)φ_{G-u-v} - 2Ψ_uv
    P6: xφ - φ_{G-u} - φ_{G-v} - 2Ψ_uv
    """
    x = IntPoly.x()
    phi = charpoly(g)
    kind = op.kind
    if kind is PerturbationKind.DELETE_VERTEX:
        return None
    u = op.args[0]
    phi_u = charpoly(delete_vertices(g, [u]))
    if kind is PerturbationKind.ADD_LOOP:
        return phi - phi_u
    if kind is PerturbationKind.ADD_PENDANT:
        return x * phi - phi_u
    v = op.args[1]
    psi = cofactor_poly(g, u, v)
    phi_uv = charpoly(delete_vertices(g, [u, v]))
    if kind is PerturbationKind.FLIP_EDGE:
        sign = -1 if g.adj[u][v] == 0 else 1
        return phi - phi_uv + psi * (2 * sign)
    phi_v = charpoly(delete_vertices(g, [v]))
    if kind is PerturbationKind.AMALGAMATE:
        return phi_u + phi_v - (x - g.adj[u][v]) * phi_uv - psi * 2
    return x * phi - phi_u - phi_v - psi * 2


def bridge_formula_residual(g: Graph, u: int, v: int,
                            spectral: Optional[SpectralData] = None) -> VerificationRecord:
    """
    橋渡し頂点の公式 φ_{G+uūv}(x) = φ_G(x)(x - Σ_i (m_uu + m_vv + 2m_uv)(λ_i)/(x-λ_i)) の数値照合

    歩道正則なグラフでは m_uu = m_vv = m_0i となり x - 2Σ(m_0i + m_uv)/(x-λ_i) に一致する。
    """
    s = spectral or decompose(g)
    phi = s.charpoly
    perturbed = charpoly(bridge(g, u, v))
    weights = [
        s.crossed_multiplicity(u, u, i) + s.crossed_multiplicity(v, v, i)
        + 2 * s.crossed_multiplicity(u, v, i)
        for i in range(s.d + 1)
    ]
    worst = 0.0
    for x in sample_points(g, s.distinct_eigenvalues):
        lhs = float(Fraction(perturbed(x), phi(x)))
        rhs = x - sum(w / (x - lam) for w, lam in zip(weights, s.distinct_eigenvalues))
        worst = max(worst, relative_residual(lhs, rhs))
    return VerificationRecord(
        name=f"bridge_formula({u},{v})",
        passed=worst < current_settings().identity_tol,
        max_residual=worst,
    )


def verify_identity(g: Graph, op: PerturbationOp) -> VerificationRecord:
    """
    摂動に対応する特性多項式の恒等式を検証

    P2-P6 は厳密な整数多項式の等式、P1 は頂点削除の数値恒等式、
    P6 はさらに交差局所重複度による数値公式も照合する。
    """
    op.validate(g)
    if op.kind is PerturbationKind.DELETE_VERTEX:
        return vertex_deletion_identity(g, op.args[0])

    actual = charpoly(apply_op(g, op))
    predicted = predicted_charpoly(g, op)
    exact = actual == predicted
    details = {"descriptor": op.descriptor, "actual": str(actual), "predicted": str(predicted)}
    worst = 0.0
    passed = exact
    if op.kind is PerturbationKind.BRIDGE:
        numeric = bridge_formula_residual(g, *op.args)
        details["numeric_residual"] = numeric.max_residual
        worst = numeric.max_residual
        passed = passed and numeric.passed
    if not exact:
        logger.error(f"恒等式が成り立ちません: {op.descriptor} 実際 {actual} / 予測 {predicted}")
    return VerificationRecord(
        name=f"identity[{op.descriptor}]",
        passed=passed,
        max_residual=worst,
        details=details,
    )
