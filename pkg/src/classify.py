"""
正則性の分類
歩道正則性、h-点的な歩道正則・スペクトル正則・共スペクトル・同スペクトル、距離正則性
各判定は独立した複数の経路で計算し、経路間の一致を検査する
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .analysis_config import AnalysisSettings, current_settings
from .exact_poly import IntPoly, charpoly, charpoly_batch, delete_vertices, relative_residual, sample_points
from .exceptions import InvariantViolation, PreconditionError
from .graph_core import DistanceMatrix, Graph, distances, require_connected, require_simple
from .perturb import PerturbationKind, add_loop, add_pendant, amalgamate, apply_set, bridge, flip_edge
from .spectral import SpectralData, decompose, walk_matrices
from .utils import VerificationRecord

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

METHODS = ("walk_regular", "spectrum_regular", "cospectral", "isospectral")
METHOD_ALIASES = {
    "walk": "walk_regular",
    "spectrum": "spectrum_regular",
    "cospectral": "cospectral",
    "isospectral": "isospectral",
}

# 同スペクトル判定の部分経路（摂動の種類）
ISOSPECTRAL_ROUTES = ("P4", "P5", "P6")


@dataclass
class ClassifierResult:
    """1つの判定の結果（holds が None なら vacuous）"""

    name: str
    h: int
    holds: Optional[bool]
    routes: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    class_constants: Optional[List[float]] = None
    notes: List[str] = field(default_factory=list)
    spread: Optional[float] = None

    def __bool__(self) -> bool:
        return self.holds is True

    @property
    def status(self) -> str:
        if self.holds is None:
            return "vacuous"
        return "true" if self.holds else "false"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "h": self.h,
            "status": self.status,
            "routes": dict(self.routes),
            "witness": self.witness,
            "class_constants": self.class_constants,
            "notes": list(self.notes),
        }


def _vacuous(name: str, h: int, diameter: int) -> ClassifierResult:
    return ClassifierResult(name, h, None, notes=[f"距離 {h} の頂点対がありません（直径 {diameter}）"])


class GraphAnalysis:
    """
    1つの連結単純グラフに対する解析の共有状態

    距離、固有値分解、歩道行列、頂点対ごとの特性多項式をキャッシュする。
    """

    def __init__(self, g: Graph, settings: Optional[AnalysisSettings] = None):
        require_connected(g)
        require_simple(g)
        self.g = g
        self.settings = settings or current_settings()
        self.logger = logging.getLogger(__name__)
        self._pair_polys: Dict[Tuple[str, int], "OrderedDict[Pair, IntPoly]"] = {}
        self._walk_regular: Optional[ClassifierResult] = None

    @cached_property
    def dm(self) -> DistanceMatrix:
        return distances(self.g)

    @property
    def diameter(self) -> int:
        return self.dm.diameter

    @cached_property
    def spectral(self) -> SpectralData:
        return decompose(self.g)

    @property
    def d(self) -> int:
        return self.spectral.d

    @cached_property
    def walks(self) -> List[np.ndarray]:
        """A^0..A^d"""
        return walk_matrices(self.g, self.d)

    def pairs(self, h: int) -> List[Pair]:
        return self.dm.pairs_at(h)

    @cached_property
    def deletion_polys(self) -> List[IntPoly]:
        """φ_{G-u}（頂点順）"""
        return charpoly_batch([delete_vertices(self.g, [u]) for u in range(self.g.n)])

    def perturbed(self, kind: str, pair: Pair) -> Graph:
        """頂点対 (u,v) に対する摂動グラフ"""
        u, v = pair
        if kind == "delete":
            return delete_vertices(self.g, [u, v])
        if kind == "P4":
            return flip_edge(self.g, u, v)
        if kind == "P5":
            return amalgamate(self.g, u, v)
        if kind == "P6":
            return bridge(self.g, u, v)
        raise PreconditionError(f"未知の摂動経路です: {kind}")

    def pair_polys(self, kind: str, h: int) -> "OrderedDict[Pair, IntPoly]":
        """距離 h の各頂点対に対する摂動グラフの特性多項式（辞書式順）"""
        key = (kind, h)
        if key not in self._pair_polys:
            pairs = self.pairs(h)
            polys = charpoly_batch([self.perturbed(kind, p) for p in pairs])
            self._pair_polys[key] = OrderedDict(zip(pairs, polys))
            self.logger.debug(f"{kind} の特性多項式を計算: h={h}, {len(pairs)} 対")
        return self._pair_polys[key]

    def walk_regularity(self) -> ClassifierResult:
        if self._walk_regular is None:
            self._walk_regular = _walk_regular_routes(self)
        return self._walk_regular

    def require_walk_regular(self) -> None:
        result = self.walk_regularity()
        if not result:
            raise PreconditionError("歩道正則ではありません", witness=result.witness)


def _analysis(g: Union[Graph, GraphAnalysis]) -> GraphAnalysis:
    return g if isinstance(g, GraphAnalysis) else GraphAnalysis(g)


def reconcile_routes(name: str, exact: bool, floating: bool, spread: float,
                     settings: AnalysisSettings, witness: Optional[Dict] = None) -> None:
    """
    浮動小数点経路と厳密経路の照合

    不一致でも広がりが (crossed_tol, reconcile_band] にあれば厳密経路を採用して警告、
    それ以外の不一致は InvariantViolation。
    """
    if exact == floating:
        return
    if settings.crossed_tol < spread <= settings.reconcile_band:
        logger.warning(
            f"{name}: 浮動小数点経路が厳密経路と一致しません（広がり {spread:.3g}）、厳密経路を採用します"
        )
        return
    logger.error(f"{name}: 経路間の不一致（厳密 {exact}、浮動 {floating}、広がり {spread:.3g}）")
    raise InvariantViolation(
        f"{name}: 判定経路が一致しません", witness={"exact": exact, "floating": floating,
                                               "spread": spread, "detail": witness}
    )


def _group(polys: "OrderedDict[Any, IntPoly]") -> "OrderedDict[IntPoly, List[Any]]":
    """多項式ごとに対象をまとめる（出現順）"""
    classes: "OrderedDict[IntPoly, List[Any]]" = OrderedDict()
    for key, poly in polys.items():
        classes.setdefault(poly, []).append(key)
    return classes


def _poly_witness(classes: "OrderedDict[IntPoly, List[Any]]", label: str) -> Optional[Dict[str, Any]]:
    if len(classes) <= 1:
        return None
    (p, first), (q, second) = list(classes.items())[:2]
    return {
        label: [list(first[0]) if isinstance(first[0], tuple) else first[0],
                list(second[0]) if isinstance(second[0], tuple) else second[0]],
        "polynomials": [str(p), str(q)],
        "classes": len(classes),
    }


# --- h = 0 ---

def _walk_route(a: GraphAnalysis, pairs: Sequence[Pair]) -> Tuple[bool, Optional[Dict[str, Any]]]:
    """(A^ℓ)_uv が ℓ = 0..d で全対一致するか"""
    first = pairs[0]
    for ell, power in enumerate(a.walks):
        base = power[first]
        for pair in pairs[1:]:
            if power[pair] != base:
                return False, {"ell": ell, "pairs": [list(first), list(pair)],
                               "walks": [int(base), int(power[pair])]}
    return True, None


def _crossed_route(a: GraphAnalysis, pairs: Sequence[Pair]) -> Tuple[bool, float, Optional[Dict], List[float]]:
    """m_uv(λ_i) の全対での広がり（最大 - 最小）"""
    rows = np.array([a.spectral.idempotents[:, u, v] for u, v in pairs])
    spreads = rows.max(axis=0) - rows.min(axis=0)
    worst_index = int(np.argmax(spreads))
    spread = float(spreads[worst_index])
    holds = spread <= a.settings.crossed_tol
    witness = None
    if not holds:
        column = rows[:, worst_index]
        lo, hi = int(np.argmin(column)), int(np.argmax(column))
        witness = {"i": worst_index, "eigenvalue": a.spectral.distinct_eigenvalues[worst_index],
                   "pairs": [list(pairs[lo]), list(pairs[hi])],
                   "values": [float(column[lo]), float(column[hi])]}
    return holds, spread, witness, [float(x) for x in rows.mean(axis=0)]


def _walk_regular_routes(a: GraphAnalysis) -> ClassifierResult:
    diagonal = a.pairs(0)
    walks_holds, walks_witness = _walk_route(a, diagonal)
    crossed_holds, spread, crossed_witness, constants = _crossed_route(a, diagonal)

    polys = OrderedDict((u, p) for u, p in enumerate(a.deletion_polys))
    classes = _group(polys)
    deletion_holds = len(classes) == 1

    if walks_holds != deletion_holds:
        raise InvariantViolation(
            "歩道正則性: 歩道数経路と頂点削除経路が一致しません",
            witness={"walks": walks_witness, "deletion": _poly_witness(classes, "vertices")},
        )
    reconcile_routes("歩道正則性", deletion_holds, crossed_holds, spread, a.settings, crossed_witness)

    witness = None
    if not deletion_holds:
        witness = {"walks": walks_witness, "deletion": _poly_witness(classes, "vertices"),
                   "crossed": crossed_witness}
    return ClassifierResult(
        name="walk_regular", h=0, holds=deletion_holds,
        routes={"walks": walks_holds, "crossed": crossed_holds, "deletion": deletion_holds},
        witness=witness,
        class_constants=constants if deletion_holds else None,
    )


def is_walk_regular(g: Union[Graph, GraphAnalysis]) -> ClassifierResult:
    """
    歩道正則性を3経路で判定

    (i) diag(A^ℓ) が ℓ = 0..d で一定（厳密）、(ii) m_uu(λ_i) が一定（浮動）、
    (iii) φ_{G-u} が全頂点で一致（厳密）。判定は (iii)。

    Raises:
        PreconditionError: 非連結・非単純
        InvariantViolation: 経路の不一致
    """
    return _analysis(g).walk_regularity()


def walk_regularity_conditions(g: Union[Graph, GraphAnalysis]) -> Dict[str, bool]:
    """
    歩道正則性の同値な5条件

    a: 歩道数、b: 局所重複度、c: sp(G-u) 一致、d: sp(G+uu) 一致、e: sp(G+uū) 一致
    """
    a = _analysis(g)
    result = a.walk_regularity()
    loops = charpoly_batch([add_loop(a.g, u) for u in range(a.g.n)])
    pendants = charpoly_batch([add_pendant(a.g, u) for u in range(a.g.n)])
    return {
        "a": result.routes["walks"],
        "b": result.routes["crossed"],
        "c": result.routes["deletion"],
        "d": len(set(loops)) == 1,
        "e": len(set(pendants)) == 1,
    }


def _isospectral_at_zero(a: GraphAnalysis) -> ClassifierResult:
    """h = 0 の同スペクトル性（G+uu と G+uū の特性多項式が全頂点で一致）"""
    conditions = walk_regularity_conditions(a)
    routes = {"P2": conditions["d"], "P3": conditions["e"]}
    holds = conditions["c"]
    if any(value != holds for value in routes.values()):
        raise InvariantViolation("h=0: 摂動経路と頂点削除経路が一致しません", witness=conditions)
    return ClassifierResult("isospectral", 0, holds, routes=routes,
                            witness=None if holds else {"conditions": conditions})


def _level_zero(a: GraphAnalysis, name: str) -> ClassifierResult:
    base = a.walk_regularity()
    if name == "walk_regular":
        return ClassifierResult(name, 0, base.routes["walks"], {"walks": base.routes["walks"]},
                                base.witness)
    if name == "spectrum_regular":
        return ClassifierResult(name, 0, base.holds, {"crossed": base.routes["crossed"]},
                                base.witness, base.class_constants)
    if name == "cospectral":
        return ClassifierResult(name, 0, base.routes["deletion"], {"deletion": base.routes["deletion"]},
                                base.witness)
    return _isospectral_at_zero(a)


# --- h >= 1 ---

def _prepare(g: Union[Graph, GraphAnalysis], h: int, name: str,
             require_walk_regular: bool = True) -> Tuple[GraphAnalysis, Optional[ClassifierResult]]:
    a = _analysis(g)
    if h < 0:
        raise PreconditionError(f"距離は非負である必要があります: {h}")
    if require_walk_regular:
        a.require_walk_regular()
    if h > a.diameter:
        return a, _vacuous(name, h, a.diameter)
    if h == 0:
        return a, _level_zero(a, name)
    return a, None


def punctual_walk_regular(g: Union[Graph, GraphAnalysis], h: int) -> ClassifierResult:
    """距離 h の全頂点対で歩道数 (A^ℓ)_uv（ℓ = 0..d）が一致するか"""
    a, early = _prepare(g, h, "walk_regular")
    if early is not None:
        return early
    holds, witness = _walk_route(a, a.pairs(h))
    return ClassifierResult("walk_regular", h, holds, {"walks": holds}, witness)


def punctual_spectrum_regular(g: Union[Graph, GraphAnalysis], h: int) -> ClassifierResult:
    """距離 h の全頂点対で m_uv(λ_i) が一致するか（一致すれば m_{h0..hd} を返す）"""
    a, early = _prepare(g, h, "spectrum_regular")
    if early is not None:
        return early
    holds, spread, witness, constants = _crossed_route(a, a.pairs(h))
    return ClassifierResult("spectrum_regular", h, holds, {"crossed": holds}, witness,
                            constants if holds else None, spread=spread)


def punctual_cospectral(g: Union[Graph, GraphAnalysis], h: int) -> ClassifierResult:
    """距離 h の全頂点対で φ_{G-u-v} が一致するか（多項式で頂点対を分類して代表を比較）"""
    a, early = _prepare(g, h, "cospectral")
    if early is not None:
        return early
    classes = _group(a.pair_polys("delete", h))
    holds = len(classes) == 1
    return ClassifierResult("cospectral", h, holds, {"deletion": holds},
                            _poly_witness(classes, "pairs"))


def punctual_isospectral(g: Union[Graph, GraphAnalysis], h: int) -> ClassifierResult:
    """
    距離 h の全頂点対で P4・P5・P6 摂動グラフの特性多項式がそれぞれ一致するか

    Raises:
        InvariantViolation: 3つの部分経路が一致しない
    """
    a, early = _prepare(g, h, "isospectral")
    if early is not None:
        return early
    routes: Dict[str, bool] = {}
    witnesses: Dict[str, Any] = {}
    for kind in ISOSPECTRAL_ROUTES:
        classes = _group(a.pair_polys(kind, h))
        routes[kind] = len(classes) == 1
        if not routes[kind]:
            witnesses[kind] = _poly_witness(classes, "pairs")
    if len(set(routes.values())) != 1:
        logger.error(f"h={h}: 同スペクトル性の部分経路が一致しません {routes}")
        raise InvariantViolation(f"h={h}: P4/P5/P6 の判定が一致しません", witness=witnesses)
    holds = routes["P4"]
    return ClassifierResult("isospectral", h, holds, routes, witnesses or None)


_CLASSIFIERS: Dict[str, Callable[[Union[Graph, GraphAnalysis], int], ClassifierResult]] = {
    "walk_regular": punctual_walk_regular,
    "spectrum_regular": punctual_spectrum_regular,
    "cospectral": punctual_cospectral,
    "isospectral": punctual_isospectral,
}


# --- プロファイル ---

@dataclass
class LevelVerdict:
    """距離 h における4判定"""

    h: int
    results: Dict[str, ClassifierResult]

    def holds(self, method: str) -> Optional[bool]:
        return self.results[method].holds

    @property
    def agreed(self) -> Optional[bool]:
        values = {r.holds for r in self.results.values()}
        return values.pop() if len(values) == 1 else None

    def to_dict(self) -> Dict[str, Any]:
        spectrum = self.results["spectrum_regular"]
        return {
            "h": self.h,
            "verdicts": {m: self.results[m].status for m in METHODS},
            "witnesses": {m: self.results[m].witness for m in METHODS if self.results[m].witness},
            "class_constants": spectrum.class_constants,
        }


@dataclass
class PunctualProfile:
    """距離ごとの h-点的判定の表"""

    diameter: int
    walk_regular: bool
    levels: List[LevelVerdict]
    restricted: bool = False
    explanation: str = ""

    def verdict(self, h: int, method: str = "cospectral") -> Optional[bool]:
        for level in self.levels:
            if level.h == h:
                return level.holds(method)
        raise PreconditionError(f"距離 {h} はプロファイルに含まれません")

    def failing_levels(self) -> List[int]:
        return [level.h for level in self.levels if level.agreed is False]

    def max_level(self, method: str = "cospectral") -> int:
        """0..m で判定が真となる最大の m（h=0 が偽なら -1）"""
        m = -1
        for level in self.levels:
            if level.holds(method) is not True:
                break
            m = level.h
        return m

    def to_dict(self) -> Dict[str, Any]:
        return {
            "diameter": self.diameter,
            "walk_regular": self.walk_regular,
            "restricted": self.restricted,
            "explanation": self.explanation,
            "levels": [level.to_dict() for level in self.levels],
        }


def profile(g: Union[Graph, GraphAnalysis], max_h: Optional[int] = None) -> PunctualProfile:
    """
    h = 0..D の4判定をまとめて計算し、判定間の一致を検査

    歩道正則でない入力は h = 0 のみに制限する（以降の同値性は歩道正則性を前提とする）。

    Raises:
        InvariantViolation: 歩道正則なグラフで判定が一致しない
    """
    a = _analysis(g)
    base = a.walk_regularity()
    zero = LevelVerdict(0, {m: _level_zero(a, m) for m in METHODS})
    if not base:
        return PunctualProfile(
            a.diameter, False, [zero], restricted=True,
            explanation="歩道正則でないため h=0 のみを判定しました",
        )

    top = a.diameter if max_h is None else min(max_h, a.diameter)
    levels = [zero]
    for h in range(1, top + 1):
        results = {m: _CLASSIFIERS[m](a, h) for m in METHODS}
        walk = results["walk_regular"].holds
        if results["cospectral"].holds != walk or results["isospectral"].holds != walk:
            raise InvariantViolation(
                f"h={h}: 厳密な判定が一致しません",
                witness={m: results[m].to_dict() for m in METHODS},
            )
        reconcile_routes(f"h={h} スペクトル正則性", walk, bool(results["spectrum_regular"].holds),
                   results["spectrum_regular"].spread, a.settings, results["spectrum_regular"].witness)
        if results["spectrum_regular"].holds != walk:
            results["spectrum_regular"].holds = walk
            results["spectrum_regular"].notes.append("厳密経路を採用")
        levels.append(LevelVerdict(h, results))
        logger.debug(f"h={h}: {'true' if walk else 'false'}")

    logger.info(f"プロファイルを計算しました: n={a.g.n}, D={a.diameter}")
    return PunctualProfile(a.diameter, True, levels)


def is_m_level(g: Union[Graph, GraphAnalysis], m: int, which: str = "cospectral") -> bool:
    """
    i = 0..m の全てで指定の判定が真か（i = 0 は歩道正則性）

    Raises:
        PreconditionError: m > D、未知の判定名
    """
    a = _analysis(g)
    method = METHOD_ALIASES.get(which, which)
    if method not in METHODS:
        raise PreconditionError(f"未知の判定です: {which}")
    if m < 0 or m > a.diameter:
        raise PreconditionError(f"m は 0..D の範囲である必要があります: m={m}, D={a.diameter}")
    if not a.walk_regularity():
        return False
    return all(_CLASSIFIERS[method](a, i).holds for i in range(1, m + 1))


# --- 距離正則性 ---

def format_intersection_array(array: Tuple[Sequence[int], Sequence[int]]) -> str:
    """{b_0,...,b_{D-1};c_1,...,c_D}"""
    b, c = array
    return "{" + ",".join(str(x) for x in b) + ";" + ",".join(str(x) for x in c) + "}"


def intersection_array(g: Union[Graph, GraphAnalysis]) -> Tuple[Optional[Tuple[List[int], List[int]]],
                                                                Optional[Dict[str, Any]]]:
    """
    全頂点対で交差数 b_i(u,v), c_i(u,v) を数え、i のみに依存するか判定

    Returns:
        (交差配列 (b, c) または None, 反例)
    """
    a = _analysis(g)
    dist = a.dm.dist
    n = a.g.n
    neighbors = [a.g.neighbors(v) for v in range(n)]
    b_values: Dict[int, Tuple[int, Pair]] = {}
    c_values: Dict[int, Tuple[int, Pair]] = {}
    for u in range(n):
        for v in range(n):
            i = dist[u][v]
            b = sum(1 for w in neighbors[v] if dist[u][w] == i + 1)
            c = sum(1 for w in neighbors[v] if dist[u][w] == i - 1)
            for table, value, name in ((b_values, b, "b"), (c_values, c, "c")):
                if i not in table:
                    table[i] = (value, (u, v))
                elif table[i][0] != value:
                    return None, {"number": f"{name}_{i}", "pairs": [list(table[i][1]), [u, v]],
                                  "values": [table[i][0], value]}
    diameter = a.diameter
    return ([b_values[i][0] for i in range(diameter)],
            [c_values[i][0] for i in range(1, diameter + 1)]), None


@dataclass
class DistanceRegularity:
    """距離正則性の判定（組合せ経路とスペクトル経路）"""

    holds: bool
    routes: Dict[str, bool]
    array: Optional[Tuple[List[int], List[int]]] = None
    witness: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.holds

    @property
    def array_string(self) -> Optional[str]:
        return format_intersection_array(self.array) if self.array else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "routes": dict(self.routes),
            "intersection_array": self.array_string,
            "witness": self.witness,
        }


def is_distance_regular(g: Union[Graph, GraphAnalysis]) -> DistanceRegularity:
    """
    (i) 交差数の数え上げ と (ii) 歩道正則かつ D-共スペクトル の2経路で判定

    Raises:
        InvariantViolation: 経路の不一致
    """
    a = _analysis(g)
    array, witness = intersection_array(a)
    combinatorial = array is not None
    spectral = bool(a.walk_regularity()) and is_m_level(a, a.diameter, "cospectral")
    if combinatorial != spectral:
        logger.error(f"距離正則性の経路が一致しません: 組合せ {combinatorial}, スペクトル {spectral}")
        raise InvariantViolation("距離正則性: 組合せ経路とスペクトル経路が一致しません",
                                 witness={"combinatorial": witness})
    return DistanceRegularity(combinatorial, {"combinatorial": combinatorial, "spectral": spectral},
                              array, witness)


def strongly_regular_parameters(g: Graph) -> Optional[Tuple[int, int, int, int]]:
    """強正則なら (n, k, λ, μ)、そうでなければ None"""
    if not g.is_simple() or not g.is_regular() or g.n < 2:
        return None
    k = g.degrees()[0]
    if k == 0 or k == g.n - 1:
        return None
    common: Dict[int, set] = {0: set(), 1: set()}
    neighbor_sets = [set(g.neighbors(u)) for u in range(g.n)]
    for u in range(g.n):
        for v in range(u + 1, g.n):
            common[g.adj[u][v]].add(len(neighbor_sets[u] & neighbor_sets[v]))
    if len(common[1]) != 1 or len(common[0]) != 1:
        return None
    return g.n, k, common[1].pop(), common[0].pop()


def strongly_regular_pair_check(g: Graph) -> VerificationRecord:
    """
    強正則グラフで φ_{G-u-v} が隣接・非隣接の2通りの値しかとらないことを検査

    Raises:
        PreconditionError: 強正則でない入力
    """
    parameters = strongly_regular_parameters(g)
    if parameters is None:
        raise PreconditionError("強正則グラフではありません")
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    polys = charpoly_batch([delete_vertices(g, [u, v]) for u, v in pairs])
    adjacent = {p for (u, v), p in zip(pairs, polys) if g.adj[u][v]}
    nonadjacent = {p for (u, v), p in zip(pairs, polys) if not g.adj[u][v]}
    passed = len(adjacent) == 1 and len(nonadjacent) == 1
    return VerificationRecord(
        name="strongly_regular_pairs",
        passed=passed,
        details={
            "parameters": list(parameters),
            "adjacent": sorted(str(p) for p in adjacent),
            "nonadjacent": sorted(str(p) for p in nonadjacent),
            "distinct": passed and adjacent != nonadjacent,
        },
    )


# --- 補助的な定理チェック ---

def pair_deletion_conditions(g: Graph, first: Pair, second: Pair) -> Dict[str, bool]:
    """
    2つの頂点対について
    a: sp(G-u-v) = sp(G-w-z)、b: sp(G+uu+vv) = sp(G+ww+zz)、c: sp(G+uū+vv̄) = sp(G+wū+zū)
    """
    results = {}
    for key, kind in (("a", PerturbationKind.DELETE_VERTEX), ("b", PerturbationKind.ADD_LOOP),
                      ("c", PerturbationKind.ADD_PENDANT)):
        results[key] = charpoly(apply_set(g, kind, first)) == charpoly(apply_set(g, kind, second))
    return results


def pair_deletion_residual(g: Graph, u: int, v: int, spectral: Optional[SpectralData] = None) -> VerificationRecord:
    """
    φ_{G-u-v} = φ_G [(Σ m_uu/(x-λ))(Σ m_vv/(x-λ)) - (Σ m_uv/(x-λ))^2] の数値照合

    歩道正則なグラフでは m_uu = m_vv = m_0i となり2乗の差の形になる。
    """
    if u == v:
        raise PreconditionError("相異なる2頂点が必要です")
    s = spectral or decompose(g)
    target = charpoly(delete_vertices(g, [u, v]))
    worst = 0.0
    for x in sample_points(g, s.distinct_eigenvalues):
        terms = [1.0 / (x - lam) for lam in s.distinct_eigenvalues]
        su = sum(s.crossed_multiplicity(u, u, i) * t for i, t in enumerate(terms))
        sv = sum(s.crossed_multiplicity(v, v, i) * t for i, t in enumerate(terms))
        suv = sum(s.crossed_multiplicity(u, v, i) * t for i, t in enumerate(terms))
        lhs = float(Fraction(target(x), s.charpoly(x)))
        worst = max(worst, relative_residual(lhs, su * sv - suv * suv))
    return VerificationRecord(
        name=f"doubly_deleted({u},{v})",
        passed=worst < current_settings().identity_tol,
        max_residual=worst,
    )
