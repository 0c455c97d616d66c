"""
コマンドラインインターフェース
解析レポート、摂動の適用、共スペクトル判定、共スペクトルな非同型グラフの生成
"""

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

from . import __appname__, __version__, get_version_info
from .analysis_config import AnalysisSettings, get_analysis_config_manager
from .catalog import list_catalog, load_graph
from .classify import (
    METHODS,
    GraphAnalysis,
    PunctualProfile,
    pair_deletion_residual,
    is_distance_regular,
    profile,
)
from .cospectral_sets import (
    MATE_OPERATIONS,
    SetCorrespondence,
    generate_mates,
    godsil_pair_reduction,
    is_isometric,
    is_removal_cospectral,
    schwenk_walk_check,
)
from .exact_poly import charpoly, cofactor_poly, jacobi_identity_holds
from .exceptions import AdrgError, InvariantViolation, PreconditionError
from .graph_core import Graph, dumps_graph, emit_graph6, to_dot, to_json_dict
from .perturb import PerturbationKind, PerturbationOp, apply_op, parse_descriptor, verify_identity
from .spectral import decompose, spectrum_string, verify_idempotents, verify_lemma21
from .utils import (
    OUTPUT_FORMAT_NAMES,
    VerificationRecord,
    dump_json,
    format_seconds,
    parse_vertex_list,
    sanitize_filename,
    validate_and_prepare_output_path,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1

_MARKS = {"true": "✓", "false": "✗", "vacuous": "-"}


@dataclass
class AnalysisReport:
    """analyze コマンドの出力"""

    graph: str
    n: int
    diameter: int
    charpoly: str
    charpoly_coeffs: List[int]
    spectrum: Dict[str, Any]
    regular: bool
    bipartite: bool
    profile: PunctualProfile
    distance_regular: Dict[str, Any]
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "graph": self.graph,
            "n": self.n,
            "diameter": self.diameter,
            "charpoly": self.charpoly,
            "charpoly_coeffs": self.charpoly_coeffs,
            "spectrum": self.spectrum,
            "regular": self.regular,
            "bipartite": self.bipartite,
            "profile": self.profile.to_dict(),
            "distance_regular": self.distance_regular,
        }
        if self.timings:
            data["timings"] = self.timings
        return data


def graph_identity(name: str, g: Graph) -> str:
    """カタログ名、なければ内容のハッシュ"""
    digest = hashlib.sha256(dumps_graph(g).encode("utf-8")).hexdigest()[:12]
    return f"{name} ({digest})"


class _Stopwatch:
    def __init__(self):
        self.timings: Dict[str, float] = {}

    def run(self, stage: str, func: Callable[[], Any]) -> Any:
        start = time.perf_counter()
        result = func()
        self.timings[stage] = time.perf_counter() - start
        logger.debug(f"{stage}: {format_seconds(self.timings[stage])}")
        return result


def build_report(g: Graph, name: str, max_h: Optional[int] = None,
                 with_timings: bool = False) -> AnalysisReport:
    """グラフ1つの解析レポートを作成"""
    watch = _Stopwatch()
    analysis = GraphAnalysis(g)
    spectral = watch.run("spectrum", lambda: analysis.spectral)
    prof = watch.run("profile", lambda: profile(analysis, max_h))
    regularity = watch.run("distance_regular", lambda: is_distance_regular(analysis))
    if prof.diameter != analysis.diameter or sum(spectral.multiplicities) != g.n:
        raise InvariantViolation("レポートの内部整合性が崩れています")
    return AnalysisReport(
        graph=graph_identity(name, g),
        n=g.n,
        diameter=analysis.diameter,
        charpoly=str(spectral.charpoly),
        charpoly_coeffs=spectral.charpoly.to_json(),
        spectrum={
            "eigenvalues": list(spectral.distinct_eigenvalues),
            "multiplicities": list(spectral.multiplicities),
            "display": spectrum_string(spectral),
            "warnings": list(spectral.warnings),
        },
        regular=g.is_regular(),
        bipartite=g.is_bipartite(),
        profile=prof,
        distance_regular=regularity.to_dict(),
        timings=watch.timings if with_timings else {},
    )


def render_profile(prof: PunctualProfile, out: TextIO) -> None:
    """h ごとの表（✓ / ✗ / -）"""
    header = ["h"] + list(METHODS)
    out.write("  ".join(f"{col:>16}" for col in header) + "\n")
    for level in prof.levels:
        cells = [str(level.h)] + [_MARKS[level.results[m].status] for m in METHODS]
        out.write("  ".join(f"{cell:>16}" for cell in cells) + "\n")
        for method in METHODS:
            witness = level.results[method].witness
            if witness:
                out.write(f"    {method}: {json.dumps(witness, ensure_ascii=False, default=str)}\n")
    if prof.restricted:
        out.write(f"注意: {prof.explanation}\n")


def render_report(report: AnalysisReport, out: TextIO) -> None:
    out.write(f"グラフ: {report.graph}\n")
    out.write(f"頂点数: {report.n}  直径: {report.diameter}\n")
    out.write(f"特性多項式: {report.charpoly}\n")
    out.write(f"スペクトル: {report.spectrum['display']}\n")
    out.write(f"正則: {report.regular}  二部: {report.bipartite}\n")
    out.write(f"歩道正則: {report.profile.walk_regular}\n")
    regular = report.distance_regular
    array = regular.get("intersection_array")
    out.write(f"距離正則: {regular['holds']}" + (f"  {array}" if array else "") + "\n")
    render_profile(report.profile, out)
    for stage, seconds in report.timings.items():
        out.write(f"{stage}: {format_seconds(seconds)}\n")


def _emit(data: Any, as_json: bool, out: TextIO, render: Optional[Callable[[Any, TextIO], None]] = None) -> None:
    if as_json or render is None:
        out.write(dump_json(data) + "\n")
    else:
        render(data, out)


def _write_graph(g: Graph, path: Optional[str], out: TextIO) -> Optional[Path]:
    """単純グラフは graph6、そうでなければ JSON 擬グラフとして出力"""
    fmt = "graph6" if g.is_simple() else "json"
    text = emit_graph6(g) if fmt == "graph6" else dumps_graph(g)
    if path is None:
        out.write(text + "\n")
        return None
    ok, target, error = validate_and_prepare_output_path(path, fmt)
    if not ok:
        raise PreconditionError(error)
    target.write_text(text + "\n", encoding="utf-8")
    logger.info(f"グラフを書き出しました: {target}")
    return target


def _write_record(record: VerificationRecord, out: TextIO) -> None:
    mark = _MARKS["true" if record.passed else "false"]
    out.write(f"{mark} {record.name}  (残差 {record.max_residual:.3g})\n")


# --- 各コマンド ---

def cmd_analyze(args: argparse.Namespace, out: TextIO) -> int:
    g, name = load_graph(args.input)
    report = build_report(g, name, args.max_h, args.timings)
    if args.json:
        out.write(dump_json(report.to_dict()) + "\n")
    else:
        render_report(report, out)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace, out: TextIO) -> int:
    g, _ = load_graph(args.input)
    prof = profile(g, args.max_h)
    if args.json:
        out.write(dump_json(prof.to_dict()) + "\n")
    else:
        render_profile(prof, out)
    return EXIT_OK


def cmd_perturb(args: argparse.Namespace, out: TextIO) -> int:
    g, _ = load_graph(args.input)
    ops = [parse_descriptor(text) for text in args.ops]
    current = g
    records: List[VerificationRecord] = []
    for op in ops:
        record = verify_identity(current, op)
        records.append(record)
        if not record.passed:
            raise InvariantViolation(f"{op.descriptor}: 恒等式が成り立ちません", witness=record.to_dict())
        current = apply_op(current, op)
    target = None
    if args.out or not args.json:
        target = _write_graph(current, args.out, out)
    if args.json:
        out.write(dump_json({
            "ops": [op.descriptor for op in ops],
            "identities": [r.to_dict() for r in records],
            "output": str(target) if target else None,
            "graph": to_json_dict(current),
        }) + "\n")
    else:
        for record in records:
            _write_record(record, out)
    return EXIT_OK


def cmd_cospectral(args: argparse.Namespace, out: TextIO) -> int:
    g1, name1 = load_graph(args.first)
    g2, name2 = load_graph(args.second)
    p, q = charpoly(g1), charpoly(g2)
    same = p == q
    if args.json:
        out.write(dump_json({"cospectral": same, "charpolys": {name1: str(p), name2: str(q)}}) + "\n")
    elif same:
        out.write(f"共スペクトル: {p}\n")
    else:
        out.write("共スペクトルではありません\n")
        out.write(f"  {name1}: {p}\n")
        out.write(f"  {name2}: {q}\n")
    return EXIT_OK if same else EXIT_FALSE


def cmd_mates(args: argparse.Namespace, out: TextIO) -> int:
    g, name = load_graph(args.input)
    family = generate_mates(g, args.h, args.op, source=name)
    manifest = family.to_manifest()
    files: List[Optional[str]] = []
    if args.out_dir:
        stem = sanitize_filename(f"{Path(name).stem}_h{args.h}_{family.operation}")
        directory = Path(args.out_dir)
        for index, cls in enumerate(family.classes):
            target = _write_graph(cls.graph, str(directory / f"{stem}_{index}"), out)
            files.append(str(target))
        ok, manifest_path, error = validate_and_prepare_output_path(directory / f"{stem}_manifest", "json")
        if not ok:
            raise PreconditionError(error)
        manifest["files"] = files
        manifest_path.write_text(dump_json(manifest) + "\n", encoding="utf-8")
        logger.info(f"マニフェストを書き出しました: {manifest_path}")
    if args.json:
        out.write(dump_json(manifest) + "\n")
    else:
        out.write(f"{name}: h={args.h} {family.operation} で {len(family.classes)} 個の同型類\n")
        out.write(f"共通の特性多項式: {family.charpoly}\n")
        for index, cls in enumerate(family.classes):
            out.write(f"  [{index}] 代表 {list(cls.representative)}  ({len(cls.members)} 組)\n")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace, out: TextIO) -> int:
    if not args.name:
        names = list_catalog()
        _emit(names, args.json, out, lambda data, stream: stream.write("\n".join(data) + "\n"))
        return EXIT_OK
    g, _ = load_graph(args.name)
    if args.format == "dot":
        out.write(to_dot(g, sanitize_filename(args.name)))
    elif args.format == "json" or args.json:
        out.write(dump_json(to_json_dict(g)) + "\n")
    else:
        out.write(emit_graph6(g) + "\n")
    return EXIT_OK


def cmd_sets(args: argparse.Namespace, out: TextIO) -> int:
    g, _ = load_graph(args.input)
    g2 = load_graph(args.other)[0] if args.other else g
    try:
        c = SetCorrespondence(tuple(parse_vertex_list(args.U)), tuple(parse_vertex_list(args.U_prime)))
    except ValueError as e:
        raise PreconditionError(str(e))
    result: Dict[str, Any] = {"correspondence": c.to_dict(), "isometric": is_isometric(g, g2, c)}
    removal = is_removal_cospectral(g, g2, c, args.method)
    result["removal_cospectral"] = removal.to_dict()
    if len(c) <= 8:
        result["pair_reduction"] = godsil_pair_reduction(g, g2, c).to_dict()
    if removal:
        result["walk_counts"] = schwenk_walk_check(g, g2, c).to_dict()
    if args.json:
        out.write(dump_json(result) + "\n")
    else:
        out.write(f"U={list(c.U)}  U'={list(c.U_prime)}\n")
        out.write(f"等長: {result['isometric']}\n")
        out.write(f"除去共スペクトル: {removal.holds}  ({', '.join(f'{k}={v}' for k, v in removal.routes.items())})\n")
        if removal.witness:
            out.write(f"  反例: {json.dumps(removal.witness, ensure_ascii=False, default=str)}\n")
    return EXIT_OK if removal else EXIT_FALSE


def identity_suite(g: Graph) -> List[VerificationRecord]:
    """厳密恒等式と数値恒等式の一式"""
    records: List[VerificationRecord] = []
    s = decompose(g)
    records.append(verify_lemma21(s, g))
    records.append(verify_idempotents(s))
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)][:10]
    jacobi = all(jacobi_identity_holds(g, u, v) for u, v in pairs)
    records.append(VerificationRecord("jacobi", jacobi, details={"pairs": len(pairs)}))
    agree = all(cofactor_poly(g, u, v, "walks") == cofactor_poly(g, u, v, "bareiss") for u, v in pairs)
    records.append(VerificationRecord("cofactor_routes", agree, details={"pairs": len(pairs)}))
    for u in range(min(g.n, 3)):
        for kind in (PerturbationKind.DELETE_VERTEX, PerturbationKind.ADD_LOOP, PerturbationKind.ADD_PENDANT):
            if kind is PerturbationKind.DELETE_VERTEX and g.n == 1:
                continue
            records.append(verify_identity(g, PerturbationOp(kind, (u,))))
    for u, v in pairs[:3]:
        for kind in (PerturbationKind.FLIP_EDGE, PerturbationKind.AMALGAMATE, PerturbationKind.BRIDGE):
            if kind is PerturbationKind.FLIP_EDGE and g.adj[u][v] > 1:
                continue
            records.append(verify_identity(g, PerturbationOp(kind, (u, v))))
        records.append(pair_deletion_residual(g, u, v, s))
    return records


def cmd_identities(args: argparse.Namespace, out: TextIO) -> int:
    g, _ = load_graph(args.input)
    records = identity_suite(g)
    failed = [r for r in records if not r.passed]
    if args.json:
        out.write(dump_json([r.to_dict() for r in records]) + "\n")
    else:
        for record in records:
            _write_record(record, out)
    if failed:
        raise InvariantViolation(f"{len(failed)} 件の恒等式が成り立ちません",
                                 witness=[r.name for r in failed])
    return EXIT_OK


def cmd_version(args: argparse.Namespace, out: TextIO) -> int:
    if args.json:
        out.write(dump_json(get_version_info()) + "\n")
        return EXIT_OK
    out.write(f"{__appname__} {__version__}\n")
    return EXIT_OK


# --- 引数解析 ---

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON で出力")
    common.add_argument("--tol", type=float, default=None,
                        help="固有値クラスタリングの相対許容誤差")
    common.add_argument("--crossed-tol", type=float, default=None,
                        help="交差局所重複度の比較許容誤差")
    common.add_argument("--identity-tol", type=float, default=None,
                        help="数値恒等式の相対残差の許容誤差")
    common.add_argument("--iso-budget", type=int, default=None,
                        help="同型判定の探索ノード数の上限")
    common.add_argument("--debug", action="store_true", help="ログを標準エラーにも出力")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog=__appname__,
        description="摂動グラフの共スペクトル性による準距離正則グラフ解析ツール",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="解析レポート")
    p.add_argument("input", help="カタログ名、.g6 または .json ファイル")
    p.add_argument("--max-h", type=int, default=None)
    p.add_argument("--timings", action="store_true", help="段階ごとの所要時間を含める")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("profile", parents=[common], help="h-点的判定の表")
    p.add_argument("input")
    p.add_argument("--max-h", type=int, default=None)
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("perturb", parents=[common], help="摂動の適用（例: P5:2,7）")
    p.add_argument("input")
    p.add_argument("ops", nargs="+", help="摂動の記述子（左から順に適用）")
    p.add_argument("--out", default=None, help="出力ファイル（省略時は標準出力）")
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser("cospectral", parents=[common], help="2つのグラフの共スペクトル判定")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_cospectral)

    p = sub.add_parser("mates", parents=[common], help="共スペクトルな非同型グラフの生成")
    p.add_argument("input")
    p.add_argument("--h", type=int, required=True, help="頂点対の距離")
    p.add_argument("--op", default="P4", choices=MATE_OPERATIONS, help="摂動の種類")
    p.add_argument("--out-dir", default=None, help="同型類ごとのファイルとマニフェストの出力先")
    p.set_defaults(handler=cmd_mates)

    p = sub.add_parser("catalog", parents=[common], help="名前付きグラフの一覧・出力")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--format", choices=OUTPUT_FORMAT_NAMES, default="graph6")
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("sets", parents=[common], help="頂点集合の除去共スペクトル性")
    p.add_argument("input")
    p.add_argument("U", help="頂点リスト（例: 0,3,7）")
    p.add_argument("U_prime", help="対応する頂点リスト")
    p.add_argument("--other", default=None, help="U' 側のグラフ（省略時は同じグラフ）")
    p.add_argument("--method", choices=["multiplicity", "exhaustive"], default="multiplicity")
    p.set_defaults(handler=cmd_sets)

    p = sub.add_parser("identities", parents=[common], help="恒等式の検証")
    p.add_argument("input")
    p.set_defaults(handler=cmd_identities)

    p = sub.add_parser("version", parents=[common], help="バージョン表示")
    p.set_defaults(handler=cmd_version)
    return parser


def apply_settings(args: argparse.Namespace) -> AnalysisSettings:
    """許容誤差フラグを解析設定へ反映"""
    settings = AnalysisSettings.from_cli_values(
        tol=args.tol,
        crossed_tol=args.crossed_tol,
        identity_tol=args.identity_tol,
        iso_budget=args.iso_budget,
    )
    get_analysis_config_manager().update_settings(settings)
    return settings


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
        err: Optional[TextIO] = None) -> int:
    """
    コマンドを実行して終了コードを返す

    0 成功/真、1 偽、2 入力解析、3 前提条件、4 内部不変条件、5 数学的な拒否
    """
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse の使用法エラーは入力解析エラーとして扱う
        return 2 if e.code else 0
    try:
        apply_settings(args)
        return args.handler(args, out)
    except AdrgError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        err.write(f"エラー: {e}\n")
        if e.witness is not None:
            err.write(f"反例: {dump_json(e.witness)}\n")
        return e.exit_code
    finally:
        get_analysis_config_manager().reset_to_defaults()
