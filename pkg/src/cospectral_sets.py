"""
除去共スペクトル集合・等長集合と共スペクトルな非同型グラフの生成
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .analysis_config import current_settings
from .classify import GraphAnalysis, is_distance_regular, punctual_cospectral, reconcile_routes
from .exact_poly import IntPoly, charpoly, cospectral, delete_vertices
from .exceptions import DomainRefusal, InvariantViolation, PreconditionError
from .graph_core import Graph, are_isomorphic, distances
from .perturb import (
    PerturbationKind,
    PerturbationOp,
    add_loop,
    add_pendant,
    amalgamate,
    apply_op,
    bridge,
    flip_edge,
)
from .spectral import decompose, walk_matrices
from .utils import VerificationRecord

logger = logging.getLogger(__name__)

MATE_OPERATIONS = ("delete", "P2", "P3", "P4", "P5", "P6")


@dataclass(frozen=True)
class SetCorrespondence:
    """U[i] と U_prime[i] を対応させる全単射"""

    U: Tuple[int, ...]
    U_prime: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(int(u) for u in self.U))
        object.__setattr__(self, "U_prime", tuple(int(u) for u in self.U_prime))
        if len(self.U) != len(self.U_prime):
            raise PreconditionError(f"集合の大きさが一致しません: {len(self.U)} != {len(self.U_prime)}")
        if len(set(self.U)) != len(self.U) or len(set(self.U_prime)) != len(self.U_prime):
            raise PreconditionError("集合に重複した頂点があります")

    @classmethod
    def identity(cls, vertices: Sequence[int]) -> "SetCorrespondence":
        return cls(tuple(vertices), tuple(vertices))

    @property
    def bijection(self) -> Dict[int, int]:
        return dict(zip(self.U, self.U_prime))

    def __len__(self) -> int:
        return len(self.U)

    def restrict(self, positions: Iterable[int]) -> Tuple[List[int], List[int]]:
        """位置の部分集合に対応する (W, W')"""
        positions = list(positions)
        return [self.U[i] for i in positions], [self.U_prime[i] for i in positions]

    def validate(self, g: Graph, g_prime: Graph) -> None:
        for u in self.U:
            g.check_vertex(u)
        for u in self.U_prime:
            g_prime.check_vertex(u)

    def to_dict(self) -> Dict[str, Any]:
        return {"U": list(self.U), "U_prime": list(self.U_prime)}


@dataclass
class SetCheckResult:
    """集合の判定結果（反例の部分集合付き）"""

    holds: bool
    method: str
    routes: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    max_difference: float = 0.0

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        return {"holds": self.holds, "method": self.method, "routes": dict(self.routes),
                "witness": self.witness, "max_difference": self.max_difference}


# --- 除去共スペクトル性 ---

def _require_cospectral(g: Graph, g_prime: Graph) -> None:
    if not cospectral(g, g_prime):
        raise PreconditionError(
            "2つのグラフが共スペクトルではありません",
            witness={"G": str(charpoly(g)), "G'": str(charpoly(g_prime))},
        )


def _multiplicity_route(g: Graph, g_prime: Graph, c: SetCorrespondence) -> Tuple[bool, float, Optional[Dict]]:
    """全ての u,v ∈ U と i で m_uv(λ_i) = m'_{u'v'}(λ_i) か"""
    if len(c) == 0:
        return True, 0.0, None
    s, t = decompose(g), decompose(g_prime)
    if s.multiplicities != t.multiplicities:
        raise InvariantViolation("共スペクトルなグラフの固有値クラスタが一致しません")
    left = s.idempotents[:, list(c.U)][:, :, list(c.U)]
    right = t.idempotents[:, list(c.U_prime)][:, :, list(c.U_prime)]
    diff = np.abs(left - right)
    worst = float(diff.max())
    witness = None
    if worst > current_settings().crossed_tol:
        i, a, b = (int(x) for x in np.unravel_index(int(np.argmax(diff)), diff.shape))
        witness = {"i": i, "pair": [c.U[a], c.U[b]], "pair_prime": [c.U_prime[a], c.U_prime[b]],
                   "values": [float(left[i, a, b]), float(right[i, a, b])]}
    return witness is None, worst, witness


def _subset_route(g: Graph, g_prime: Graph, c: SetCorrespondence,
                  max_size: Optional[int] = None) -> Tuple[bool, Optional[Dict]]:
    """大きさ max_size 以下の全部分集合 W で φ_{G-W} = φ_{G'-W'} か（厳密）"""
    top = len(c) if max_size is None else min(max_size, len(c))
    for size in range(1, top + 1):
        for positions in combinations(range(len(c)), size):
            w, w_prime = c.restrict(positions)
            p = charpoly(delete_vertices(g, w))
            q = charpoly(delete_vertices(g_prime, w_prime))
            if p != q:
                return False, {"W": w, "W_prime": w_prime, "polynomials": [str(p), str(q)]}
    return True, None


def _exhaustive_route(g: Graph, g_prime: Graph, c: SetCorrespondence) -> Tuple[bool, Optional[Dict]]:
    limit = current_settings().exhaustive_max_set
    if len(c) > limit:
        raise PreconditionError(f"全部分集合の検査は |U| <= {limit} に限られます: |U|={len(c)}")
    return _subset_route(g, g_prime, c)


def is_removal_cospectral(g: Graph, g_prime: Graph, c: SetCorrespondence,
                          method: str = "multiplicity") -> SetCheckResult:
    """
    U, U' が除去共スペクトル集合か判定

    multiplicity: 交差局所重複度の一致、exhaustive: 全部分集合の除去で共スペクトル。
    |U| が小さければ両経路を計算して一致を検査する。

    Raises:
        PreconditionError: G, G' が共スペクトルでない、exhaustive の大きさ上限超過
        InvariantViolation: 経路の不一致
    """
    if method not in ("multiplicity", "exhaustive"):
        raise PreconditionError(f"未知の判定法です: {method}")
    c.validate(g, g_prime)
    _require_cospectral(g, g_prime)

    floating, worst, m_witness = _multiplicity_route(g, g_prime, c)
    routes = {"multiplicity": floating}
    witness = m_witness
    holds = floating

    cross_check = len(c) <= current_settings().pair_reduction_check_max
    if method == "exhaustive" or cross_check:
        exact, e_witness = _exhaustive_route(g, g_prime, c)
        routes["exhaustive"] = exact
        reconcile_routes("除去共スペクトル性", exact, floating, worst, current_settings(),
                         {"multiplicity": m_witness, "exhaustive": e_witness})
        holds = exact
        witness = e_witness or m_witness
    return SetCheckResult(holds, method, routes, None if holds else witness, worst)


def is_isometric(g: Graph, g_prime: Graph, c: SetCorrespondence) -> bool:
    """対応する全ての頂点対で距離が等しいか"""
    c.validate(g, g_prime)
    d, e = distances(g).dist, distances(g_prime).dist
    return all(
        d[c.U[a]][c.U[b]] == e[c.U_prime[a]][c.U_prime[b]]
        for a in range(len(c)) for b in range(a + 1, len(c))
    )


def godsil_pair_reduction(g: Graph, g_prime: Graph, c: SetCorrespondence) -> SetCheckResult:
    """
    大きさ2以下の部分集合だけで除去共スペクトル性を判定

    |U| が小さいときは全部分集合の判定と一致することを検査する。
    """
    c.validate(g, g_prime)
    _require_cospectral(g, g_prime)
    reduced, witness = _subset_route(g, g_prime, c, max_size=2)
    routes = {"pairs": reduced}
    if len(c) <= current_settings().pair_reduction_check_max:
        full, full_witness = _exhaustive_route(g, g_prime, c)
        routes["exhaustive"] = full
        if full != reduced:
            raise InvariantViolation(
                "2点以下の部分集合による判定が全部分集合の判定と一致しません",
                witness={"pairs": witness, "exhaustive": full_witness},
            )
    return SetCheckResult(reduced, "pairs", routes, witness)


def schwenk_walk_check(g: Graph, g_prime: Graph, c: SetCorrespondence,
                       ell_max: Optional[int] = None) -> VerificationRecord:
    """除去共スペクトル集合で a_uv^(ℓ) = a'_{u'v'}^(ℓ)（ℓ <= ell_max、既定は d）を厳密に検査"""
    c.validate(g, g_prime)
    if ell_max is None:
        ell_max = decompose(g).d
    left, right = walk_matrices(g, ell_max), walk_matrices(g_prime, ell_max)
    failure = None
    for ell in range(ell_max + 1):
        for a in range(len(c)):
            for b in range(a, len(c)):
                x = left[ell][c.U[a], c.U[b]]
                y = right[ell][c.U_prime[a], c.U_prime[b]]
                if x != y and failure is None:
                    failure = {"ell": ell, "pair": [c.U[a], c.U[b]],
                               "pair_prime": [c.U_prime[a], c.U_prime[b]], "walks": [int(x), int(y)]}
    if failure:
        logger.error(f"歩道数が一致しません: {failure}")
    return VerificationRecord(
        name="walk_counts_on_sets",
        passed=failure is None,
        details={"ell_max": ell_max, "failure": failure},
    )


# --- 摂動の下での不変性 ---

def evolve_set(vertices: Sequence[int], op: PerturbationOp, n: int) -> Tuple[int, ...]:
    """
    摂動後の追跡集合

    P1 では削除した頂点が外れ、P5 では u+v が最初に現れた位置に入り、P3/P6 では新頂点が末尾に加わる。
    """
    mapping, new_vertex = op.remap(n)
    result: List[int] = []
    for w in vertices:
        target = mapping[w]
        if target is not None and target not in result:
            result.append(target)
    if op.kind.adds_vertex:
        result.append(new_vertex)
    return tuple(result)


def perturb_cospectral_check(g: Graph, g_prime: Graph, c: SetCorrespondence,
                             ops: Sequence[PerturbationOp]) -> SetCheckResult:
    """
    (G,U), (G',U') に同じ摂動列を並行に適用し、共スペクトル性と除去共スペクトル性が保たれるか

    各摂動の頂点は G 側の追跡集合から選び、G' 側へは対応で移す。

    Raises:
        PreconditionError: 摂動の頂点が追跡集合の外にある
    """
    c.validate(g, g_prime)
    current, current_prime, corr = g, g_prime, c
    history: List[str] = []
    for op in ops:
        bijection = corr.bijection
        outside = [a for a in op.args if a not in bijection]
        if outside:
            raise PreconditionError(f"摂動の頂点が追跡集合にありません: {outside}", witness=op.descriptor)
        op_prime = op.translate(bijection)
        new_u = evolve_set(corr.U, op, current.n)
        new_u_prime = evolve_set(corr.U_prime, op_prime, current_prime.n)
        current = apply_op(current, op)
        current_prime = apply_op(current_prime, op_prime)
        if len(new_u) != len(new_u_prime):
            raise InvariantViolation("摂動後の集合の大きさが一致しません",
                                     witness={"U": new_u, "U_prime": new_u_prime})
        corr = SetCorrespondence(new_u, new_u_prime)
        history.append(f"{op.descriptor} / {op_prime.descriptor}")

    if not cospectral(current, current_prime):
        witness = {"ops": history, "polynomials": [str(charpoly(current)), str(charpoly(current_prime))]}
        return SetCheckResult(False, "perturbation", {"cospectral": False}, witness)
    floating, worst, witness = _multiplicity_route(current, current_prime, corr)
    routes = {"cospectral": True, "multiplicity": floating}
    if not floating:
        witness = {"ops": history, "multiplicity": witness}
    logger.debug(f"摂動列 {history}: {floating}")
    return SetCheckResult(floating, "perturbation", routes, witness, worst)


def random_op_sequence(g: Graph, c: SetCorrespondence, length: int, seed: int) -> List[PerturbationOp]:
    """追跡集合から頂点を選ぶ乱択摂動列（G 側で集合の変化を模擬する）"""
    rng = random.Random(seed)
    ops: List[PerturbationOp] = []
    current, tracked = g, c.U
    for _ in range(length):
        kinds = [PerturbationKind.ADD_LOOP, PerturbationKind.ADD_PENDANT]
        if len(tracked) >= 2:
            kinds += [PerturbationKind.FLIP_EDGE, PerturbationKind.AMALGAMATE, PerturbationKind.BRIDGE]
        if len(tracked) >= 1 and current.n > 1:
            kinds.append(PerturbationKind.DELETE_VERTEX)
        if not tracked:
            break
        kind = rng.choice(kinds)
        if kind.arity == 1:
            op = PerturbationOp(kind, (rng.choice(tracked),))
        else:
            u, v = rng.sample(list(tracked), 2)
            if kind is PerturbationKind.FLIP_EDGE and current.adj[u][v] > 1:
                kind = PerturbationKind.BRIDGE
            op = PerturbationOp(kind, (u, v))
        tracked = evolve_set(tracked, op, current.n)
        current = apply_op(current, op)
        ops.append(op)
    return ops


def matching_vertices(g: Graph, g_prime: Graph, u: int) -> List[int]:
    """G の頂点 u と局所重複度 m_u(λ_i) が一致する G' の頂点"""
    _require_cospectral(g, g_prime)
    s, t = decompose(g), decompose(g_prime)
    target = s.idempotents[:, u, u]
    tol = current_settings().crossed_tol
    return [w for w in range(g_prime.n) if float(np.max(np.abs(t.idempotents[:, w, w] - target))) <= tol]


def find_correspondence(g: Graph, g_prime: Graph, U: Sequence[int],
                        U_prime: Sequence[int]) -> Optional[SetCorrespondence]:
    """
    U -> U' の全単射のうち除去共スペクトルなものを探索（等長性で枝刈り）

    Raises:
        PreconditionError: |U| が探索上限を超える
    """
    limit = current_settings().permutation_search_max
    if len(U) != len(U_prime):
        return None
    if len(U) > limit:
        raise PreconditionError(f"対応の探索は |U| <= {limit} に限られます")
    _require_cospectral(g, g_prime)
    d, e = distances(g).dist, distances(g_prime).dist
    for perm in permutations(U_prime):
        if any(d[U[a]][U[b]] != e[perm[a]][perm[b]] for a in range(len(U)) for b in range(a + 1, len(U))):
            continue
        candidate = SetCorrespondence(tuple(U), tuple(perm))
        holds, _, _ = _multiplicity_route(g, g_prime, candidate)
        if holds:
            return candidate
    return None


def verify_isometric_sets(g: Graph, max_size: int = 4) -> VerificationRecord:
    """
    距離正則グラフで、大きさ max_size 以下の等長な対応が全て除去共スペクトルであることを検査

    順序付き頂点組を距離行列でまとめ、各組の全部分集合の除去多項式と交差局所重複度を
    組の代表と比較する（一致は推移的なので全ての対応を網羅する）。

    Raises:
        PreconditionError: 距離正則でない、n > 12
    """
    if g.n > 12:
        raise PreconditionError(f"等長対応の網羅は n <= 12 に限られます: n={g.n}")
    if not is_distance_regular(g):
        raise PreconditionError("距離正則グラフではありません")
    dist = distances(g).dist
    s = decompose(g)
    deletion_cache: Dict[frozenset, IntPoly] = {}

    def deletion_poly(vertices: Iterable[int]) -> IntPoly:
        key = frozenset(vertices)
        if key not in deletion_cache:
            deletion_cache[key] = charpoly(delete_vertices(g, sorted(key)))
        return deletion_cache[key]

    checked = 0
    failures: List[Dict[str, Any]] = []
    for size in range(1, min(max_size, g.n) + 1):
        groups: Dict[Tuple, List[Tuple[int, ...]]] = {}
        for subset in combinations(range(g.n), size):
            for ordered in permutations(subset):
                key = tuple(dist[ordered[a]][ordered[b]] for a in range(size) for b in range(a + 1, size))
                groups.setdefault(key, []).append(ordered)
        subsets = [pos for k in range(1, size + 1) for pos in combinations(range(size), k)]
        for members in groups.values():
            first = members[0]
            reference = [deletion_poly(first[i] for i in pos) for pos in subsets]
            ref_mult = s.idempotents[:, list(first)][:, :, list(first)]
            for other in members[1:]:
                checked += 1
                polys = [deletion_poly(other[i] for i in pos) for pos in subsets]
                mult = s.idempotents[:, list(other)][:, :, list(other)]
                if polys != reference or float(np.max(np.abs(mult - ref_mult))) > current_settings().crossed_tol:
                    failures.append({"U": list(first), "U_prime": list(other)})
    logger.info(f"等長対応を {checked} 件検査しました（失敗 {len(failures)} 件）")
    return VerificationRecord(
        name="isometric_sets_are_removal_cospectral",
        passed=not failures,
        details={"checked": checked, "failures": failures[:10], "max_size": max_size},
    )


# --- 共スペクトルな非同型グラフの生成 ---

@dataclass
class MateClass:
    """同型類の代表と、その類に属する頂点対（または頂点集合）"""

    representative: Tuple[int, ...]
    graph: Graph
    members: List[Tuple[int, ...]]

    def to_dict(self) -> Dict[str, Any]:
        return {"representative": list(self.representative),
                "members": [list(m) for m in self.members]}


@dataclass
class MateFamily:
    """互いに共スペクトルで、類ごとに非同型なグラフの族"""

    source: str
    h: Optional[int]
    operation: str
    charpoly: IntPoly
    classes: List[MateClass]
    certificates: List[Dict[str, Any]] = field(default_factory=list)

    def graphs(self) -> List[Graph]:
        return [cls.graph for cls in self.classes]

    def pairs(self) -> List[Tuple[Graph, Graph]]:
        """代表グラフの全ての組"""
        return [(a.graph, b.graph) for a, b in combinations(self.classes, 2)]

    def to_manifest(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "h": self.h,
            "operation": self.operation,
            "charpoly": str(self.charpoly),
            "charpoly_coeffs": self.charpoly.to_json(),
            "classes": [cls.to_dict() for cls in self.classes],
            "certificates": self.certificates,
        }


def _perturb_for_mates(g: Graph, operation: str, key: Tuple[int, ...]) -> Graph:
    if operation == "delete":
        return delete_vertices(g, list(key))
    if operation == "clique":
        rows = [list(row) for row in g.adj]
        for u, v in combinations(key, 2):
            if u != v:
                rows[u][v] = rows[v][u] = 1
        return Graph.from_matrix(rows, g.labels)
    if operation == "P2":
        return add_loop(g, key[0])
    if operation == "P3":
        return add_pendant(g, key[0])
    u, v = key
    if operation == "P4":
        return flip_edge(g, u, v)
    if operation == "P5":
        return amalgamate(g, u, v)
    return bridge(g, u, v)


def _classify_into_mates(g: Graph, keys: Sequence[Tuple[int, ...]], operation: str,
                         source: str, h: Optional[int]) -> MateFamily:
    """摂動グラフを特性多項式と同型類で分類し、類ごとに代表を1つ残す"""
    classes: List[MateClass] = []
    shared: Optional[IntPoly] = None
    for key in keys:
        perturbed = _perturb_for_mates(g, operation, key)
        poly = charpoly(perturbed)
        if shared is None:
            shared = poly
        elif poly != shared:
            raise DomainRefusal(
                "摂動グラフが共スペクトルではありません",
                witness={"first": list(keys[0]), "other": list(key),
                         "polynomials": [str(shared), str(poly)]},
            )
        for cls in classes:
            if are_isomorphic(cls.graph, perturbed):
                cls.members.append(key)
                break
        else:
            classes.append(MateClass(key, perturbed, [key]))

    certificates = []
    for (i, a), (j, b) in combinations(enumerate(classes), 2):
        result = are_isomorphic(a.graph, b.graph)
        if result:
            raise InvariantViolation("異なる類の代表が同型です", witness=[i, j])
        certificates.append({"classes": [i, j], "isomorphic": False,
                             "nodes_searched": result.nodes_searched})
    logger.info(f"{source}: {operation} で {len(classes)} 個の同型類を得ました")
    return MateFamily(source, h, operation, shared or charpoly(g), classes, certificates)


def generate_mates(g: Graph, h: int, op_kind: str = "P4", source: str = "graph") -> MateFamily:
    """
    距離 h の頂点対への摂動で、互いに共スペクトルな非同型グラフを生成

    h = 0 では delete は1頂点の削除、P2/P3 は1頂点への摂動になる。

    Raises:
        PreconditionError: h が範囲外、h と摂動の組合せが不正
        DomainRefusal: 歩道正則でない、h-点的共スペクトルでない（反例付き）
    """
    operation = {"deleteboth": "delete", "delete": "delete"}.get(op_kind.lower(), op_kind.upper())
    if operation not in MATE_OPERATIONS:
        raise PreconditionError(f"未知の摂動です: {op_kind}（利用可能: {', '.join(MATE_OPERATIONS)}）")
    analysis = GraphAnalysis(g)
    walk_regular = analysis.walk_regularity()
    if not walk_regular:
        raise DomainRefusal("歩道正則ではありません", witness=walk_regular.witness)
    if h < 0 or h > analysis.diameter:
        raise PreconditionError(f"h は 0..D の範囲である必要があります: h={h}, D={analysis.diameter}")
    if h == 0 and operation not in ("delete", "P2", "P3"):
        raise PreconditionError(f"h=0 では delete / P2 / P3 のみ使えます: {operation}")
    if h > 0 and operation in ("P2", "P3"):
        raise PreconditionError(f"{operation} は h=0 でのみ使えます")

    verdict = punctual_cospectral(analysis, h)
    if not verdict:
        raise DomainRefusal(f"{h}-点的共スペクトルではありません", witness=verdict.witness)

    if h == 0:
        keys = [(u,) for u in range(g.n)]
    else:
        keys = analysis.pairs(h)
    return _classify_into_mates(g, keys, operation, source, h)


def cocliques(g: Graph, size: int) -> List[Tuple[int, ...]]:
    """大きさ size の独立集合（辞書式順）"""
    return [
        subset for subset in combinations(range(g.n), size)
        if all(g.adj[u][v] == 0 for u, v in combinations(subset, 2))
    ]


def set_mates(g: Graph, subsets: Sequence[Tuple[int, ...]], mode: str = "delete",
              source: str = "graph") -> MateFamily:
    """
    頂点集合ごとに G-U（delete）または U 内の辺を全て加えたグラフ（clique）を作り同型類に分ける

    Raises:
        DomainRefusal: 結果が共スペクトルでない
    """
    if mode not in ("delete", "clique"):
        raise PreconditionError(f"未知のモードです: {mode}")
    if not subsets:
        raise PreconditionError("頂点集合がありません")
    return _classify_into_mates(g, [tuple(s) for s in subsets], mode, source, None)
