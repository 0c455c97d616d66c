"""
グラフ表現・入出力・同型判定のテスト
"""

import json

import pytest
from hypothesis import given, strategies as st

from src.catalog import petersen, cycle, complete, path, cube
from src.cospectral_sets import cocliques
from src.exceptions import (
    GraphFormatError,
    IsomorphismBudgetExceeded,
    PreconditionError,
)
from src.graph_core import (
    INFINITE,
    Graph,
    are_isomorphic,
    distances,
    dumps_graph,
    emit_graph6,
    from_json_dict,
    load_graph_file,
    parse_graph6,
    random_connected_graph,
    to_dot,
    to_json_dict,
)
from src.perturb import add_loop


class TestGraph:
    """Graph クラスのテスト"""

    def test_from_edges(self):
        """辺リストからの構築"""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        assert g.n == 3
        assert g.adj == ((0, 1, 0), (1, 0, 1), (0, 1, 0))
        assert g.is_simple()
        assert g.degrees() == [1, 2, 1]
        assert g.edge_count() == 2

    def test_asymmetric_matrix_rejected(self):
        """非対称な隣接表は拒否"""
        with pytest.raises(PreconditionError):
            Graph.from_matrix([[0, 1], [0, 0]])

    def test_negative_entry_rejected(self):
        with pytest.raises(PreconditionError):
            Graph.from_matrix([[0, -1], [-1, 0]])

    def test_loops_and_multi_edges(self):
        """ループ・多重辺を含む擬グラフ"""
        g = Graph.from_matrix([[1, 2], [2, 0]])
        assert not g.is_simple()
        assert g.non_simple_entry() == (0, 0, 1)
        assert g.trace() == 1
        assert g.edge_count() == 3
        assert g.degrees() == [3, 2]

    def test_check_vertex(self):
        g = complete(3)
        g.check_vertex(2)
        with pytest.raises(PreconditionError):
            g.check_vertex(3)
        with pytest.raises(PreconditionError):
            g.check_vertex(-1)

    def test_relabel_moves_vertices(self):
        """relabel は頂点 u を perm[u] へ移す"""
        g = path(3)
        h = g.relabel([1, 0, 2])
        assert h.adj[1][2] == 0
        assert h.adj[0][2] == 1
        assert h.degrees() == [2, 1, 1]

    def test_relabel_rejects_non_permutation(self):
        with pytest.raises(PreconditionError):
            path(3).relabel([0, 0, 1])

    def test_complement_of_petersen(self):
        """ピーターセングラフの補グラフは6正則"""
        comp = petersen().complement()
        assert comp.is_regular()
        assert comp.degrees()[0] == 6

    def test_complement_requires_simple(self):
        with pytest.raises(PreconditionError):
            add_loop(complete(2), 0).complement()

    def test_connectivity_and_bipartiteness(self):
        assert cycle(6).is_connected()
        assert cycle(6).is_bipartite()
        assert not cycle(5).is_bipartite()
        assert not Graph.empty(2).is_connected()
        assert not complete(2).disjoint_union(complete(2)).is_connected()


class TestDistances:
    """距離行列のテスト"""

    def test_petersen_diameter(self):
        dm = distances(petersen())
        assert dm.diameter == 2
        assert dm.is_connected()
        assert len(dm.pairs_at(1)) == 15
        assert len(dm.pairs_at(2)) == 30

    def test_pairs_at_zero_are_diagonal(self):
        dm = distances(cycle(5))
        assert dm.pairs_at(0) == [(u, u) for u in range(5)]

    def test_pairs_are_lexicographic(self):
        pairs = distances(cycle(6)).pairs_at(3)
        assert pairs == [(0, 3), (1, 4), (2, 5)]

    def test_disconnected_pairs_are_infinite(self):
        g = Graph.empty(2)
        dm = distances(g)
        assert dm[(0, 1)] == INFINITE
        assert not dm.is_connected()

    def test_loops_ignored(self):
        g = add_loop(path(3), 1)
        assert distances(g)[(0, 2)] == 2


class TestGraph6:
    """graph6 形式のテスト"""

    @pytest.mark.parametrize("text,n,edges", [
        ("@", 1, 0),
        ("A_", 2, 1),
        ("D??", 5, 0),
        ("Bw", 3, 3),
    ])
    def test_parse_known_strings(self, text, n, edges):
        g = parse_graph6(text)
        assert g.n == n
        assert g.edge_count() == edges

    def test_emit_known_strings(self):
        assert emit_graph6(complete(2)) == "A_"
        assert emit_graph6(complete(3)) == "Bw"
        assert emit_graph6(Graph.empty(5)) == "D??"

    def test_header_and_newline_accepted(self):
        g = parse_graph6(">>graph6<<A_\n")
        assert g == complete(2)

    def test_invalid_character_offset(self):
        with pytest.raises(GraphFormatError) as excinfo:
            parse_graph6("A ")
        assert excinfo.value.offset == 1

    @pytest.mark.parametrize("text,offset", [("D?\u00e9", 2), (">>graph6<<A\u00e9", 11)])
    def test_non_ascii_rejected(self, text, offset):
        with pytest.raises(GraphFormatError) as excinfo:
            parse_graph6(text)
        assert excinfo.value.offset == offset

    def test_truncated_bits(self):
        with pytest.raises(GraphFormatError) as excinfo:
            parse_graph6("D?")
        assert excinfo.value.offset == 2

    def test_trailing_data(self):
        with pytest.raises(GraphFormatError) as excinfo:
            parse_graph6("A_?")
        assert excinfo.value.offset == 2

    def test_empty_input(self):
        with pytest.raises(GraphFormatError):
            parse_graph6("")

    def test_emit_rejects_loops(self):
        with pytest.raises(PreconditionError):
            emit_graph6(add_loop(complete(2), 0))

    @given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=10_000))
    def test_round_trip_random_graphs(self, n, seed):
        """乱択グラフの graph6 往復"""
        g = random_connected_graph(n, 0.4, seed)
        assert parse_graph6(emit_graph6(g)) == g


class TestJsonFormat:
    """JSON 擬グラフ形式のテスト"""

    def test_pseudograph_round_trip(self):
        g = Graph.from_matrix([[1, 2], [2, 0]], ["a", "b"])
        assert from_json_dict(to_json_dict(g)) == g

    def test_dumps_graph_uses_graph6_for_simple(self):
        assert dumps_graph(complete(2)) == "A_"
        loop = add_loop(Graph.empty(1), 0)
        assert json.loads(dumps_graph(loop)) == {"n": 1, "adj": [[1]]}

    @pytest.mark.parametrize("data", [
        {"adj": []},
        {"n": 2, "adj": [[0, 1]]},
        {"n": 2, "adj": [[0, 1], [0, 0]]},
        {"n": 1, "adj": [[-1]]},
        {"n": 1, "adj": [[0.5]]},
        {"n": 1, "adj": [[0]], "labels": ["a", "b"]},
        {"n": 1, "adj": [[0]], "extra": 1},
        {"n": 1, "adj": [[0]], "labels": [7]},
        {"n": 1, "adj": [[True]]},
        {"n": 1, "adj": [[1.0]]},
        {"n": True, "adj": [[0]]},
        [[0]],
    ])
    def test_invalid_documents(self, data):
        with pytest.raises(GraphFormatError):
            from_json_dict(data)

    def test_load_graph_file(self, tmp_path):
        g6 = tmp_path / "k3.g6"
        g6.write_text("\nBw\n", encoding="utf-8")
        assert load_graph_file(g6) == complete(3)

        js = tmp_path / "loop.json"
        js.write_text('{"n": 1, "adj": [[2]]}', encoding="utf-8")
        assert load_graph_file(js).adj == ((2,),)

    def test_load_graph_file_errors(self, tmp_path):
        with pytest.raises(GraphFormatError):
            load_graph_file(tmp_path / "missing.g6")
        broken = tmp_path / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        with pytest.raises(GraphFormatError):
            load_graph_file(broken)

    def test_dot_output(self):
        dot = to_dot(Graph.from_matrix([[1, 2], [2, 0]]), "X")
        assert dot.startswith("graph X {")
        assert "0 -- 0;" in dot
        assert '0 -- 1 [label="2"];' in dot


class TestIsomorphism:
    """同型判定のテスト"""

    def test_relabelled_petersen(self):
        g = petersen()
        perm = [3, 7, 1, 0, 9, 2, 5, 4, 8, 6]
        result = are_isomorphic(g, g.relabel(perm))
        assert result
        mapped = result.permutation
        for u in range(g.n):
            for v in range(g.n):
                assert g.adj[u][v] == g.relabel(perm).adj[mapped[u]][mapped[v]]

    def test_same_degrees_not_isomorphic(self):
        """頂点数・次数が同じでも非同型"""
        assert not are_isomorphic(cycle(6), complete(3).disjoint_union(complete(3)))

    def test_petersen_coclique_deletions_not_isomorphic(self):
        """共通近傍を持つ 3-独立集合と持たないものを除いた7頂点グラフ"""
        g = petersen()
        sets = cocliques(g, 3)
        with_common = next(s for s in sets if any(all(g.adj[w][u] for u in s) for w in range(g.n)))
        without = next(s for s in sets if not any(all(g.adj[w][u] for u in s) for w in range(g.n)))
        first = g.induced([u for u in range(g.n) if u not in with_common])
        second = g.induced([u for u in range(g.n) if u not in without])
        assert not are_isomorphic(first, second)

    def test_loops_respected(self):
        g = add_loop(path(3), 0)
        h = add_loop(path(3), 1)
        assert not are_isomorphic(g, h)
        assert are_isomorphic(g, add_loop(path(3), 2))

    def test_different_sizes(self):
        assert not are_isomorphic(complete(2), complete(3))

    def test_budget_exceeded(self):
        """探索ノード数の上限"""
        g = cube()
        with pytest.raises(IsomorphismBudgetExceeded):
            are_isomorphic(g, g.relabel([7, 6, 5, 4, 3, 2, 1, 0]), budget=1)

    @given(st.integers(min_value=3, max_value=10), st.integers(min_value=0, max_value=10_000),
           st.randoms(use_true_random=False))
    def test_random_relabel_is_isomorphic(self, n, seed, rnd):
        g = random_connected_graph(n, 0.5, seed)
        perm = list(range(n))
        rnd.shuffle(perm)
        assert are_isomorphic(g, g.relabel(perm))
