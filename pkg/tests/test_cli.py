"""
コマンドラインインターフェースのテスト
終了コード・JSON 出力・ファイル出力を検証
"""

import io
import json

import jsonschema
import pytest

from src import __version__
from src.analysis_config import current_settings
from src.catalog import generalized_petersen, petersen
from src.cli import build_report, graph_identity, run
from src.graph_core import emit_graph6
from src.utils import ANALYSIS_DEFAULTS, load_schema
from tests import assert_file_exists


def invoke(*argv):
    """run を呼んで (終了コード, 標準出力, 標準エラー) を返す"""
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestAnalyze:
    """analyze / profile コマンド"""

    def test_json_report_matches_schema(self):
        code, stdout, _ = invoke("analyze", "petersen", "--json")
        assert code == 0
        data = json.loads(stdout)
        jsonschema.validate(data, load_schema("analysis_report"))
        jsonschema.validate(data["profile"], load_schema("punctual_profile"))
        assert data["n"] == 10
        assert data["diameter"] == 2
        assert data["spectrum"]["display"] == "{3^1, 1^5, -2^4}"
        assert data["distance_regular"]["intersection_array"] == "{3,2;1,1}"
        assert "timings" not in data

    def test_timings(self):
        code, stdout, _ = invoke("analyze", "c6", "--json", "--timings")
        assert code == 0
        assert set(json.loads(stdout)["timings"]) == {"spectrum", "profile", "distance_regular"}

    def test_text_report(self):
        code, stdout, _ = invoke("analyze", "cube")
        assert code == 0
        assert "{3,2,1;1,2,3}" in stdout
        assert "✓" in stdout

    def test_disconnected_input(self):
        code, _, stderr = invoke("analyze", "empty_2")
        assert code == 3
        assert "エラー" in stderr

    def test_profile_of_non_walk_regular_graph(self):
        code, stdout, _ = invoke("profile", "path_4", "--json")
        assert code == 0
        data = json.loads(stdout)
        jsonschema.validate(data, load_schema("punctual_profile"))
        assert data["restricted"] is True
        assert len(data["levels"]) == 1

    def test_graph_identity(self):
        g = petersen()
        assert graph_identity("petersen", g).startswith("petersen (")
        assert graph_identity("petersen", g) == build_report(g, "petersen").graph


class TestPerturb:
    """perturb コマンド"""

    def test_loop_on_single_vertex(self):
        code, stdout, _ = invoke("perturb", "complete_1", "P2:0", "--json")
        assert code == 0
        data = json.loads(stdout)
        assert data["graph"]["adj"] == [[1]]
        assert data["output"] is None
        assert data["identities"][0]["passed"]

    def test_bridge_on_k2_prints_graph6_and_identity(self):
        code, stdout, _ = invoke("perturb", "k2", "P6:0,1")
        assert code == 0
        lines = stdout.splitlines()
        assert lines[0] == "Bw"
        assert lines[1].startswith("✓ identity[P6:0,1]")
        assert "残差" in lines[1]

    def test_sequence_written_to_file(self, tmp_path):
        target = tmp_path / "out" / "petersen_p4"
        code, stdout, _ = invoke("perturb", "petersen", "P4:0,7", "P1:3", "--out", str(target))
        assert code == 0
        assert [line.split()[1] for line in stdout.splitlines()] == ["identity[P4:0,7]", "identity[P1:3]"]
        assert_file_exists(target.with_suffix(".g6"))

    def test_pseudograph_written_as_json(self, tmp_path):
        target = tmp_path / "amalgam"
        code, _, _ = invoke("perturb", "c5", "P5:0,1", "--out", str(target))
        assert code == 0
        data = json.loads(target.with_suffix(".json").read_text(encoding="utf-8"))
        jsonschema.validate(data, load_schema("pseudograph"))
        assert data["n"] == 4

    def test_bad_descriptor(self):
        code, _, _ = invoke("perturb", "k2", "Q1:0")
        assert code == 2

    def test_vertex_out_of_range(self):
        code, _, _ = invoke("perturb", "k2", "P2:5")
        assert code == 3


class TestCospectral:

    def test_desargues_pair(self):
        code, stdout, _ = invoke("cospectral", "desargues", "twisted_desargues")
        assert code == 0
        assert "共スペクトル" in stdout

    def test_not_cospectral(self):
        code, stdout, _ = invoke("cospectral", "k2", "empty_2", "--json")
        assert code == 1
        assert json.loads(stdout)["cospectral"] is False


class TestMates:
    """mates コマンド"""

    def test_writes_classes_and_manifest(self, tmp_path):
        code, stdout, _ = invoke("mates", "petersen", "--h", "1", "--op", "P4",
                                 "--out-dir", str(tmp_path), "--json")
        assert code == 0
        manifest_path = tmp_path / "petersen_h1_P4_manifest.json"
        assert_file_exists(manifest_path)
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        jsonschema.validate(manifest, load_schema("mate_manifest"))
        assert len(manifest["classes"]) == 1
        assert_file_exists(manifest["files"][0])
        assert json.loads(stdout)["files"] == manifest["files"]

    def test_not_punctually_cospectral(self, tmp_path):
        source = tmp_path / "prism.g6"
        source.write_text(emit_graph6(generalized_petersen(3, 1)) + "\n", encoding="utf-8")
        code, _, stderr = invoke("mates", str(source), "--h", "1")
        assert code == 5
        assert "反例" in stderr

    def test_not_walk_regular(self):
        code, _, stderr = invoke("mates", "path_4", "--h", "1")
        assert code == 5
        assert "歩道正則ではありません" in stderr
        assert "反例" in stderr

    def test_operation_choices(self):
        code, _, _ = invoke("mates", "petersen", "--h", "1", "--op", "P9")
        assert code == 2


class TestSets:
    """sets コマンド"""

    def test_removal_cospectral(self):
        code, stdout, _ = invoke("sets", "petersen", "0,2,6", "0,2,8", "--json")
        assert code == 0
        data = json.loads(stdout)
        assert data["isometric"] is True
        assert data["removal_cospectral"]["holds"] is True
        assert data["walk_counts"]["passed"] is True

    def test_not_removal_cospectral(self):
        code, stdout, _ = invoke("sets", "petersen", "0,2,6", "0,1,2")
        assert code == 1
        assert "反例" in stdout

    def test_bad_vertex_list(self):
        code, _, _ = invoke("sets", "petersen", "0,x", "1,2")
        assert code == 3


class TestMisc:

    def test_catalog_list(self):
        code, stdout, _ = invoke("catalog", "--json")
        assert code == 0
        assert "petersen" in json.loads(stdout)

    @pytest.mark.parametrize("fmt,expected", [
        ("graph6", "Bw"),
        ("dot", "0 -- 1;"),
        ("json", '"n": 3'),
    ])
    def test_catalog_formats(self, fmt, expected):
        code, stdout, _ = invoke("catalog", "complete_3", "--format", fmt)
        assert code == 0
        assert expected in stdout

    def test_identities(self):
        code, stdout, _ = invoke("identities", "petersen")
        assert code == 0
        assert "✗" not in stdout

    def test_version(self):
        code, stdout, _ = invoke("version")
        assert code == 0
        assert __version__ in stdout

    def test_version_json(self):
        code, stdout, _ = invoke("version", "--json")
        assert code == 0
        info = json.loads(stdout)
        assert info["appname"] == "adrg"
        assert info["version"] == __version__

    def test_unknown_command(self):
        code, _, _ = invoke("draw", "petersen")
        assert code == 2

    def test_settings_reset_after_run(self):
        code, _, _ = invoke("analyze", "c5", "--crossed-tol", "1e-6")
        assert code == 0
        assert current_settings().crossed_tol == ANALYSIS_DEFAULTS["crossed_tol"]
