"""
整数係数多項式と厳密な特性多項式・余因子多項式
共スペクトル性の判定はすべてこのモジュールの厳密演算に基づく
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import mpmath
import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)
from sympy.polys.densearith import dup_add, dup_mul, dup_mul_ground, dup_neg, dup_sub
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .analysis_config import current_settings
from .exceptions import GraphFormatError, InvariantViolation, PreconditionError
from .graph_core import Graph
from .utils import SAMPLE_POINT_COUNT, VerificationRecord

logger = logging.getLogger(__name__)

X = sympy.Symbol("x")

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class IntPoly:
    """
    整数係数の1変数多項式

    coeffs[k] は x^k の係数。最高次係数は非零（零多項式は空タプル）。
    """

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        values = [int(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    # --- 構築・変換 ---

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> "IntPoly":
        """最高次から並べた係数列から作成"""
        return cls(tuple(int(c) for c in reversed(list(coeffs))))

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    def _dup(self) -> List:
        """sympy の dense 表現（降順）"""
        return [ZZ(c) for c in reversed(self.coeffs)]

    @classmethod
    def _from_dup(cls, dup: Sequence) -> "IntPoly":
        return cls.from_descending(dup)

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], X, domain=ZZ)

    def to_json(self) -> List[int]:
        """JSON 用の整数配列（昇順）"""
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data: Sequence) -> "IntPoly":
        if not isinstance(data, (list, tuple)) or any(
            not isinstance(c, int) or isinstance(c, bool) for c in data
        ):
            raise GraphFormatError("多項式は整数配列である必要があります")
        return cls(tuple(data))

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """
        "x^3 - 3x - 2" 形式の文字列を解析

        Raises:
            GraphFormatError: 整数係数の x の多項式でない場合
        """
        transformations = standard_transformations + (
            implicit_multiplication_application, convert_xor,
        )
        try:
            expr = parse_expr(text, local_dict={"x": X}, transformations=transformations)
            poly = sympy.Poly(expr, X)
        except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as e:
            raise GraphFormatError(f"多項式を解析できません: {text!r} ({e})")
        coeffs = poly.all_coeffs()
        if any(not c.is_integer for c in coeffs):
            raise GraphFormatError(f"整数係数ではありません: {text!r}")
        return cls.from_descending([int(c) for c in coeffs])

    # --- 基本情報 ---

    @property
    def degree(self) -> int:
        """次数（零多項式は -1）"""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    # --- 演算 ---

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.constant(other)
        raise TypeError(f"IntPoly と演算できません: {type(other).__name__}")

    def __add__(self, other) -> "IntPoly":
        return IntPoly._from_dup(dup_add(self._dup(), self._coerce(other)._dup(), ZZ))

    __radd__ = __add__

    def __sub__(self, other) -> "IntPoly":
        return IntPoly._from_dup(dup_sub(self._dup(), self._coerce(other)._dup(), ZZ))

    def __rsub__(self, other) -> "IntPoly":
        return self._coerce(other) - self

    def __neg__(self) -> "IntPoly":
        return IntPoly._from_dup(dup_neg(self._dup(), ZZ))

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly._from_dup(dup_mul_ground(self._dup(), ZZ(other), ZZ))
        return IntPoly._from_dup(dup_mul(self._dup(), self._coerce(other)._dup(), ZZ))

    __rmul__ = __mul__

    # --- 評価 ---

    def evaluate(self, value: Number) -> Number:
        """Horner 法による評価（整数・分数なら厳密）"""
        result: Number = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    __call__ = evaluate

    def evaluate_mp(self, value) -> mpmath.mpf:
        """mpmath による浮動小数点評価（係数が float の範囲を超えても安全）"""
        if not self.coeffs:
            return mpmath.mpf(0)
        return mpmath.polyval([mpmath.mpf(c) for c in reversed(self.coeffs)], value)

    # --- 表示 ---

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "x" if k == 1 else f"x^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


# --- 特性多項式 ---

@lru_cache(maxsize=8192)
def _charpoly_of(adj: Tuple[Tuple[int, ...], ...]) -> IntPoly:
    n = len(adj)
    if n == 0:
        return IntPoly.constant(1)
    matrix = DomainMatrix([[ZZ(a) for a in row] for row in adj], (n, n), ZZ)
    return IntPoly.from_descending(matrix.charpoly())


def charpoly(g: Graph) -> IntPoly:
    """
    det(xI - A) を整数係数で厳密に計算（除算なしの Berkowitz 法）

    Args:
        g: グラフ（ループ・多重辺可）

    Returns:
        モニックな n 次の IntPoly
    """
    return _charpoly_of(g.adj)


def charpoly_batch(graphs: Sequence[Graph]) -> List[IntPoly]:
    """
    複数グラフの特性多項式（ADRG_THREADS > 1 ならプロセス並列、順序は入力順）
    """
    threads = current_settings().threads
    pending = [g.adj for g in graphs]
    if threads <= 1 or len(pending) < 2 * threads:
        return [_charpoly_of(adj) for adj in pending]
    unique = list(dict.fromkeys(pending))
    with ProcessPoolExecutor(max_workers=threads) as executor:
        computed = dict(zip(unique, executor.map(_charpoly_of, unique, chunksize=8)))
    logger.debug(f"特性多項式を並列計算しました: {len(unique)} 件（{threads} プロセス）")
    return [computed[adj] for adj in pending]


def cospectral(g: Graph, h: Graph) -> bool:
    """特性多項式が係数ごとに一致するか（頂点数の一致を含む）"""
    return g.n == h.n and charpoly(g) == charpoly(h)


def delete_vertices(g: Graph, vertices: Sequence[int]) -> Graph:
    """指定頂点を除いた誘導部分グラフ（残りの頂点順は保存）"""
    removed = set(vertices)
    for u in removed:
        g.check_vertex(u)
    return g.induced([w for w in range(g.n) if w not in removed])


# --- 余因子多項式 ---

@lru_cache(maxsize=4096)
def _walk_rows(adj: Tuple[Tuple[int, ...], ...], u: int) -> Tuple[Tuple[int, ...], ...]:
    """e_u A^i (i = 0..n-1) を厳密整数で計算"""
    n = len(adj)
    row = [0] * n
    row[u] = 1
    rows = [tuple(row)]
    for _ in range(n - 1):
        row = [sum(row[w] * adj[w][v] for w in range(n) if row[w]) for v in range(n)]
        rows.append(tuple(row))
    return tuple(rows)


def _cofactor_by_walks(g: Graph, u: int, v: int) -> IntPoly:
    """Cayley-Hamilton 展開 adj(xI-A) = sum_j x^j sum_i c_{i+j+1} A^i の (u,v) 成分"""
    c = charpoly(g).coeffs
    walks = [rows[v] for rows in _walk_rows(g.adj, u)]
    n = g.n
    coeffs = []
    for j in range(n):
        coeffs.append(sum(c[i + j + 1] * walks[i] for i in range(n - j)))
    return IntPoly(tuple(coeffs))


def _cofactor_by_bareiss(g: Graph, u: int, v: int) -> IntPoly:
    """ZZ[x] 上の分数なし消去による (u,v) 余因子"""
    ring = ZZ[X]
    x = ring.gens[0]
    keep_rows = [r for r in range(g.n) if r != u]
    keep_cols = [c for c in range(g.n) if c != v]
    entries = [
        [(x if r == c else ring(0)) - ring(g.adj[r][c]) for c in keep_cols]
        for r in keep_rows
    ]
    size = g.n - 1
    det = DomainMatrix(entries, (size, size), ring).det()
    poly = sympy.Poly(ring.to_sympy(det), X)
    sign = -1 if (u + v) % 2 else 1
    return IntPoly.from_descending([int(a) for a in poly.all_coeffs()]) * sign


def cofactor_poly(g: Graph, u: int, v: int, method: str = "walks") -> IntPoly:
    """
    xI - A の (u,v) 余因子 Ψ_uv(x)

    Args:
        g: グラフ
        u, v: 相異なる頂点
        method: "walks"（歩道数展開、既定）または "bareiss"（分数なし消去）

    Returns:
        次数 n-1-dist(u,v)、最高次係数は最短路の本数（非連結なら零多項式）

    Raises:
        PreconditionError: u == v、頂点範囲外、未知の method
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise PreconditionError(
            "u == v の余因子は G-u の特性多項式として計算してください"
        )
    if method == "walks":
        return _cofactor_by_walks(g, u, v)
    if method == "bareiss":
        return _cofactor_by_bareiss(g, u, v)
    raise PreconditionError(f"未知の余因子計算法です: {method}")


def jacobi_identity_holds(g: Graph, u: int, v: int) -> bool:
    """Ψ_uv^2 = φ_{G-u} φ_{G-v} - φ_G φ_{G-u-v} が厳密に成り立つか"""
    psi = cofactor_poly(g, u, v)
    lhs = psi * psi
    rhs = (charpoly(delete_vertices(g, [u])) * charpoly(delete_vertices(g, [v]))
           - charpoly(g) * charpoly(delete_vertices(g, [u, v])))
    return lhs == rhs


# --- 数値照合 ---

def sample_points(g: Graph, eigenvalues: Sequence[float] = ()) -> List[int]:
    """
    固有値から離れた整数の標本点 Δ+2, ..., Δ+6（Δ は最大行和）

    いずれかの固有値との距離が 1/2 未満なら、その点を先へずらす。
    """
    points: List[int] = []
    x = g.max_row_sum() + 2
    while len(points) < SAMPLE_POINT_COUNT:
        if all(abs(x - lam) >= 0.5 for lam in eigenvalues):
            points.append(x)
        x += 1
    return points


def relative_residual(lhs: float, rhs: float) -> float:
    """max(1, |lhs|) で正規化した差"""
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def evaluate_rational_trace(p: IntPoly, spectral, u: int, v: int) -> VerificationRecord:
    """
    Ψ_uv(x) = φ_G(x) Σ_i m_uv(λ_i)/(x-λ_i) を標本点で照合

    両辺を φ_G(x) で割った値（左辺は厳密な整数比）を比較する。

    Args:
        p: 余因子多項式 Ψ_uv（u == v のときは φ_{G-u}）
        spectral: 同じグラフの SpectralData
        u, v: 頂点

    Returns:
        VerificationRecord（max_residual は正規化残差の最大値）
    """
    phi = spectral.charpoly
    crossed = [spectral.crossed_multiplicity(u, v, i) for i in range(len(spectral.distinct_eigenvalues))]
    tol = current_settings().identity_tol
    worst = 0.0
    samples: Dict[int, Dict[str, float]] = {}
    for x in sample_points(spectral.graph, spectral.distinct_eigenvalues):
        lhs = float(Fraction(p(x), phi(x)))
        rhs = sum(m / (x - lam) for m, lam in zip(crossed, spectral.distinct_eigenvalues))
        residual = relative_residual(lhs, rhs)
        worst = max(worst, residual)
        samples[x] = {"lhs": lhs, "rhs": rhs}
    return VerificationRecord(
        name=f"rational_trace({u},{v})",
        passed=worst < tol,
        max_residual=worst,
        details={"samples": samples},
    )


# --- 根の重複度 ---

def root_multiplicities(p: IntPoly, values: Sequence[float], tolerance: float = 1e-6) -> List[int]:
    """
    浮動小数点の固有値（相異なるクラスタ代表値）の厳密な重複度

    p を無平方分解 p = Π g_k^k し、各値を正規化残差 |g_k(λ)| が最小の因子へ割り当てる。
    重複度はその k。各因子へ割り当てられた値の数は因子の次数と一致しなければならない。

    Raises:
        InvariantViolation: 残差が tolerance を超える、または割り当て数が次数と一致しない
    """
    _, factors = p.to_sympy().sqf_list()
    parts = [(IntPoly.from_descending([int(c) for c in f.all_coeffs()]), k) for f, k in factors]
    assigned = [0] * len(parts)
    result: List[int] = []
    for lam in values:
        lam_mp = mpmath.mpf(lam)
        best_index, best_residual = -1, mpmath.inf
        for index, (factor, _) in enumerate(parts):
            scale = sum(abs(mpmath.mpf(c)) * abs(lam_mp) ** k for k, c in enumerate(factor.coeffs))
            residual = abs(factor.evaluate_mp(lam_mp)) / max(scale, mpmath.mpf(1))
            if residual < best_residual:
                best_index, best_residual = index, residual
        if best_index < 0 or best_residual > tolerance:
            raise InvariantViolation(
                f"固有値 {lam} が特性多項式の根として確認できません（残差 {float(best_residual):.3g}）",
                witness={"eigenvalue": lam},
            )
        assigned[best_index] += 1
        result.append(parts[best_index][1])
    for (factor, k), count in zip(parts, assigned):
        if count != factor.degree:
            raise InvariantViolation(
                f"無平方因子 {factor}（重複度 {k}）への割り当て数 {count} が次数と一致しません",
                witness={"factor": str(factor), "assigned": count},
            )
    return result
