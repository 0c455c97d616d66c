"""
浮動小数点の固有値分解と主冪等行列、交差局所重複度
クラスタリングした重複度は厳密な特性多項式で検証する
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .analysis_config import current_settings
from .exact_poly import IntPoly, charpoly, delete_vertices, evaluate_rational_trace, root_multiplicities
from .exceptions import InvariantViolation, PreconditionError
from .graph_core import Graph
from .utils import VerificationRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralData:
    """相異なる固有値（降順）、重複度、主冪等行列 E_i"""

    graph: Graph
    distinct_eigenvalues: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    idempotents: np.ndarray = field(repr=False)
    tolerance: float
    charpoly: IntPoly
    warnings: Tuple[str, ...] = ()

    @property
    def d(self) -> int:
        """相異なる固有値の個数 - 1"""
        return len(self.distinct_eigenvalues) - 1

    @property
    def spectral_radius(self) -> float:
        return max(abs(lam) for lam in self.distinct_eigenvalues)

    def crossed_multiplicity(self, u: int, v: int, i: int) -> float:
        """m_uv(λ_i) = (E_i)_uv"""
        return float(self.idempotents[i, u, v])

    def crossed_vector(self, u: int, v: int) -> np.ndarray:
        """(m_uv(λ_0), ..., m_uv(λ_d))"""
        return self.idempotents[:, u, v].copy()

    def to_dict(self, include_idempotents: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "eigenvalues": list(self.distinct_eigenvalues),
            "multiplicities": list(self.multiplicities),
            "tolerance": self.tolerance,
            "charpoly": self.charpoly.to_json(),
            "warnings": list(self.warnings),
        }
        if include_idempotents:
            data["idempotents"] = self.idempotents.tolist()
        return data


def _cluster(values: np.ndarray, tol: float, factor: float) -> Tuple[List[List[int]], List[str]]:
    """降順の固有値を隣接差 tol 以下でまとめる（(tol, factor*tol] の差は警告）"""
    clusters: List[List[int]] = [[0]] if len(values) else []
    warnings: List[str] = []
    for k in range(1, len(values)):
        gap = values[k - 1] - values[k]
        if gap <= tol:
            clusters[-1].append(k)
            continue
        if gap <= factor * tol:
            warnings.append(
                f"固有値 {values[k - 1]:.12g} と {values[k]:.12g} の差 {gap:.3g} が曖昧な範囲にあります"
            )
        clusters.append([k])
    return clusters, warnings


@lru_cache(maxsize=256)
def _decompose_cached(g: Graph, tol: Optional[float], certify: bool,
                      scale: float, ambiguity: float) -> SpectralData:
    # scale は現在の設定の cluster_tol_scale（キャッシュキー）
    values, vectors = np.linalg.eigh(g.matrix().astype(float))
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]

    radius = float(np.max(np.abs(values)))
    tolerance = tol if tol is not None else current_settings().cluster_tolerance(radius)
    clusters, warnings = _cluster(values, tolerance, ambiguity)
    for message in warnings:
        logger.warning(message)

    eigenvalues = tuple(float(np.mean(values[c])) for c in clusters)
    multiplicities = tuple(len(c) for c in clusters)
    idempotents = np.stack([vectors[:, c] @ vectors[:, c].T for c in clusters])
    idempotents.setflags(write=False)

    poly = charpoly(g)
    if certify:
        exact = root_multiplicities(poly, eigenvalues)
        if tuple(exact) != multiplicities:
            logger.error(f"クラスタ重複度 {multiplicities} が厳密な重複度 {tuple(exact)} と一致しません")
            raise InvariantViolation(
                "固有値クラスタの重複度が特性多項式の根の重複度と一致しません",
                witness={"clustered": list(multiplicities), "exact": exact},
            )

    logger.debug(f"固有値分解: n={g.n}, d={len(eigenvalues) - 1}, tol={tolerance:.3g}")
    return SpectralData(g, eigenvalues, multiplicities, idempotents, tolerance, poly, tuple(warnings))


def decompose(g: Graph, tol: Optional[float] = None, certify: bool = True) -> SpectralData:
    """
    対称固有値分解と固有値のクラスタリング

    Args:
        g: グラフ
        tol: クラスタリング許容誤差（None なら設定の cluster_tolerance(スペクトル半径)）
        certify: 厳密な特性多項式の根の重複度で検証するか

    Returns:
        SpectralData

    Raises:
        PreconditionError: 空グラフ、tol が正でない
        InvariantViolation: 重複度が厳密値と一致しない
    """
    if g.n == 0:
        raise PreconditionError("頂点のないグラフは分解できません")
    if tol is not None and tol <= 0:
        raise PreconditionError(f"許容誤差は正である必要があります: {tol}")
    settings = current_settings()
    return _decompose_cached(g, tol, certify, settings.cluster_tol_scale, settings.ambiguity_factor)


def crossed_multiplicity(s: SpectralData, u: int, v: int, i: int) -> float:
    """m_uv(λ_i)"""
    if not 0 <= i <= s.d:
        raise PreconditionError(f"固有値番号が範囲外です: {i}")
    s.graph.check_vertex(u)
    s.graph.check_vertex(v)
    return s.crossed_multiplicity(u, v, i)


def walk_count(g: Graph, u: int, v: int, ell: int) -> int:
    """長さ ell の u-v 歩道数 (A^ell)_uv を厳密整数で計算"""
    g.check_vertex(u)
    g.check_vertex(v)
    if ell < 0:
        raise PreconditionError(f"歩道の長さは非負である必要があります: {ell}")
    a = g.object_matrix()
    row = np.zeros(g.n, dtype=object)
    row[u] = 1
    for _ in range(ell):
        row = row.dot(a)
    return int(row[v])


def walk_matrices(g: Graph, upto: int) -> List[np.ndarray]:
    """A^0, ..., A^upto（多倍長整数の object 配列）"""
    a = g.object_matrix()
    identity = np.empty((g.n, g.n), dtype=object)
    for u in range(g.n):
        for v in range(g.n):
            identity[u, v] = 1 if u == v else 0
    powers = [identity]
    for _ in range(upto):
        powers.append(powers[-1].dot(a))
    return powers


def verify_lemma21(s: SpectralData, g: Graph) -> VerificationRecord:
    """
    交差局所重複度の3性質を全頂点対で検査

    (a) Σ_i m_uv(λ_i) = δ_uv
    (b) Σ_w m_uw(λ_i) a_wv = λ_i m_uv(λ_i)
    (c) (A^ℓ)_uv = Σ_i m_uv(λ_i) λ_i^ℓ（ℓ = 0..d、残差は max(1, ρ^ℓ) で正規化）
    """
    if s.graph != g:
        raise PreconditionError("SpectralData が別のグラフから計算されています")
    a = g.matrix().astype(float)
    e = s.idempotents
    lam = np.array(s.distinct_eigenvalues)

    residual_a = float(np.max(np.abs(e.sum(axis=0) - np.eye(g.n))))
    residual_b = max(
        float(np.max(np.abs(e[i] @ a - lam[i] * e[i]))) for i in range(s.d + 1)
    )
    residual_c = 0.0
    radius = max(1.0, s.spectral_radius)
    for ell, power in enumerate(walk_matrices(g, s.d)):
        predicted = np.tensordot(lam ** ell, e, axes=1)
        exact = power.astype(float)
        residual_c = max(residual_c, float(np.max(np.abs(exact - predicted))) / radius ** ell)

    worst = max(residual_a, residual_b, residual_c)
    return VerificationRecord(
        name="crossed_multiplicity_properties",
        passed=worst < current_settings().crossed_tol,
        max_residual=worst,
        details={"a": residual_a, "b": residual_b, "c": residual_c},
    )


def verify_idempotents(s: SpectralData) -> VerificationRecord:
    """完全性・直交冪等性・固有方程式（連結正則なら E_0 = J/n も）の残差"""
    g = s.graph
    e = s.idempotents
    a = g.matrix().astype(float)
    completeness = float(np.max(np.abs(e.sum(axis=0) - np.eye(g.n))))
    orthogonality = 0.0
    for i in range(s.d + 1):
        for j in range(s.d + 1):
            target = e[i] if i == j else 0.0
            orthogonality = max(orthogonality, float(np.max(np.abs(e[i] @ e[j] - target))))
    eigen = max(
        float(np.max(np.abs(a @ e[i] - s.distinct_eigenvalues[i] * e[i]))) for i in range(s.d + 1)
    )
    details = {"completeness": completeness, "orthogonality": orthogonality, "eigen": eigen}
    if g.is_regular() and g.is_connected():
        details["principal"] = float(np.max(np.abs(e[0] - np.full((g.n, g.n), 1.0 / g.n))))
    worst = max(details.values())
    return VerificationRecord(
        name="idempotents",
        passed=worst < current_settings().identity_tol,
        max_residual=worst,
        details=details,
    )


def vertex_deletion_identity(g: Graph, u: int, s: Optional[SpectralData] = None) -> VerificationRecord:
    """φ_{G-u}(x) = φ_G(x) Σ_i m_u(λ_i)/(x-λ_i) を標本点で照合"""
    g.check_vertex(u)
    s = s or decompose(g)
    record = evaluate_rational_trace(charpoly(delete_vertices(g, [u])), s, u, u)
    record.name = f"vertex_deletion({u})"
    return record


def format_eigenvalue(value: float) -> str:
    """整数に近い固有値は整数で、そうでなければ小数4桁で表示"""
    nearest = round(value)
    if abs(value - nearest) < 1e-6:
        return str(int(nearest))
    return f"{value:.4f}"


def spectrum_string(s: SpectralData) -> str:
    """{3^1, 1^5, -2^4} 形式のスペクトル表示"""
    parts = [f"{format_eigenvalue(lam)}^{m}" for lam, m in zip(s.distinct_eigenvalues, s.multiplicities)]
    return "{" + ", ".join(parts) + "}"
