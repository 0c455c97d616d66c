"""
名前付きグラフカタログのテスト
"""

import pytest

from src.catalog import (
    GraphCatalog,
    catalog,
    cube,
    desargues,
    generalized_petersen,
    godsil_mckay_switch,
    is_switching_set,
    kneser_graph,
    list_catalog,
    load_graph,
    petersen,
    twisted_desargues,
    twisted_desargues_switching_set,
)
from src.exact_poly import IntPoly, charpoly
from src.exceptions import PreconditionError
from src.graph_core import are_isomorphic, distances

X = IntPoly.x()


def product(factors):
    result = IntPoly.constant(1)
    for factor, power in factors:
        for _ in range(power):
            result = result * factor
    return result


DESARGUES_CHARPOLY = product([
    (X * X - 9, 1),
    (X * X - 4, 4),
    (X * X - 1, 5),
])


class TestConstructions:
    """構成関数のテスト"""

    def test_generalized_petersen_order(self):
        g = generalized_petersen(5, 2)
        assert g.adj[0][1] == 1
        assert g.adj[0][5] == 1
        assert g.adj[5][7] == 1
        assert g.adj[5][6] == 0

    def test_petersen(self):
        g = petersen()
        assert g.n == 10
        assert g.edge_count() == 15
        assert g.is_regular() and g.degrees()[0] == 3
        assert distances(g).diameter == 2

    def test_kneser_is_petersen(self):
        k = kneser_graph(5, 2)
        assert k.labels[0] == "01"
        assert k.labels[-1] == "34"
        assert are_isomorphic(k, petersen())

    def test_desargues(self):
        g = desargues()
        assert g.n == 20
        assert g.is_bipartite()
        assert distances(g).diameter == 5
        assert charpoly(g) == DESARGUES_CHARPOLY

    def test_cube_bit_order(self):
        g = cube()
        assert g.neighbors(0) == [1, 2, 4]
        assert g.neighbors(7) == [3, 5, 6]

    def test_petersen_complement(self):
        comp = catalog("petersen_complement")
        assert comp.degrees()[0] == 6


class TestSwitching:
    """Godsil-McKay スイッチングのテスト"""

    def test_non_switching_set_rejected(self):
        g = petersen()
        assert not is_switching_set(g, (0, 1, 2))
        with pytest.raises(PreconditionError):
            godsil_mckay_switch(g, (0, 1, 2))

    def test_twisted_desargues(self):
        """デザルググラフと共スペクトルで非同型な3正則2部グラフ"""
        g = twisted_desargues()
        assert g.n == 20
        assert g.is_regular() and g.degrees()[0] == 3
        assert g.is_bipartite()
        assert charpoly(g) == DESARGUES_CHARPOLY
        assert distances(g).diameter == 5
        assert not are_isomorphic(g, desargues())

    def test_switching_set_is_recorded(self):
        subset = twisted_desargues_switching_set()
        assert len(subset) == 4
        assert is_switching_set(desargues(), subset)
        assert godsil_mckay_switch(desargues(), subset) == twisted_desargues()


class TestCatalog:
    """カタログ参照のテスト"""

    def test_names(self):
        names = list_catalog()
        assert "petersen" in names
        assert "twisted_desargues" in names
        assert "cycle_k" in names

    @pytest.mark.parametrize("name,n", [
        ("cycle_7", 7),
        ("path_4", 4),
        ("complete_5", 5),
        ("empty_3", 3),
        ("K4", 4),
        (" Petersen ", 10),
    ])
    def test_get(self, name, n):
        assert catalog(name).n == n

    def test_unknown_name_lists_available(self):
        with pytest.raises(PreconditionError) as excinfo:
            catalog("heawood")
        assert "petersen" in str(excinfo.value)

    def test_family_bounds(self):
        with pytest.raises(PreconditionError):
            catalog("cycle_2")

    def test_has(self):
        registry = GraphCatalog()
        assert registry.has("desargues")
        assert registry.has("path_3")
        assert not registry.has("heawood")

    def test_load_graph_from_name_and_file(self, tmp_path):
        g, name = load_graph("petersen")
        assert name == "petersen"
        assert g == petersen()

        target = tmp_path / "k3.g6"
        target.write_text("Bw\n", encoding="utf-8")
        h, file_name = load_graph(str(target))
        assert file_name == "k3.g6"
        assert h.n == 3
