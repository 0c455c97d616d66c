"""
歩道正則性・h-点的判定・距離正則性のテスト
"""

import pytest
from hypothesis import given, strategies as st

from src.catalog import (
    catalog,
    complete,
    cube,
    cycle,
    desargues,
    generalized_petersen,
    path,
    petersen,
    twisted_desargues,
)
from src.analysis_config import AnalysisSettings
from src.classify import (
    METHODS,
    GraphAnalysis,
    format_intersection_array,
    intersection_array,
    is_distance_regular,
    is_m_level,
    is_walk_regular,
    pair_deletion_conditions,
    pair_deletion_residual,
    profile,
    punctual_cospectral,
    punctual_isospectral,
    punctual_spectrum_regular,
    punctual_walk_regular,
    reconcile_routes,
    strongly_regular_pair_check,
    strongly_regular_parameters,
    walk_regularity_conditions,
)
from src.exceptions import InvariantViolation, PreconditionError
from src.graph_core import random_connected_graph
from src.perturb import add_loop


def prism():
    """三角柱 GP(3,1)"""
    return generalized_petersen(3, 1)


class TestGraphAnalysis:
    """前提条件"""

    def test_rejects_disconnected(self):
        with pytest.raises(PreconditionError):
            GraphAnalysis(complete(2).disjoint_union(complete(2)))

    def test_rejects_pseudograph(self):
        with pytest.raises(PreconditionError):
            GraphAnalysis(add_loop(cycle(4), 0))

    def test_pair_polys_cached_in_order(self):
        a = GraphAnalysis(cycle(6))
        polys = a.pair_polys("delete", 3)
        assert list(polys) == [(0, 3), (1, 4), (2, 5)]
        assert a.pair_polys("delete", 3) is polys

    def test_unknown_perturbation(self):
        with pytest.raises(PreconditionError):
            GraphAnalysis(cycle(6)).perturbed("P9", (0, 1))


class TestWalkRegular:
    """歩道正則性"""

    @pytest.mark.parametrize("graph", [petersen(), cycle(5), cube(), prism(), complete(4)])
    def test_walk_regular_graphs(self, graph):
        result = is_walk_regular(graph)
        assert result
        assert result.routes == {"walks": True, "crossed": True, "deletion": True}

    def test_path_is_not_walk_regular(self):
        result = is_walk_regular(path(3))
        assert not result
        assert result.witness["walks"]["ell"] == 2
        assert result.witness["deletion"]["classes"] == 2

    def test_local_multiplicities_as_constants(self):
        result = is_walk_regular(petersen())
        assert result.class_constants == pytest.approx([0.1, 0.5, 0.4])

    def test_equivalent_conditions(self):
        assert walk_regularity_conditions(petersen()) == dict.fromkeys("abcde", True)
        assert walk_regularity_conditions(path(4)) == dict.fromkeys("abcde", False)

    @given(st.integers(min_value=3, max_value=9), st.integers(min_value=0, max_value=5000))
    def test_equivalent_conditions_random(self, n, seed):
        conditions = walk_regularity_conditions(random_connected_graph(n, 0.5, seed))
        assert len(set(conditions.values())) == 1


class TestPunctual:
    """h-点的判定"""

    def test_petersen_all_levels(self):
        for h in (1, 2):
            assert punctual_walk_regular(petersen(), h)
            assert punctual_spectrum_regular(petersen(), h)
            assert punctual_cospectral(petersen(), h)
            assert punctual_isospectral(petersen(), h)

    def test_prism_fails_at_distance_one(self):
        g = prism()
        result = punctual_cospectral(g, 1)
        assert not result
        assert result.witness["classes"] == 2
        assert not punctual_walk_regular(g, 1)
        assert not punctual_isospectral(g, 1)
        assert punctual_cospectral(g, 2)

    def test_spectrum_regular_constants(self):
        """隣接対の m_uv の和は 0、λ による1次モーメントは 1"""
        result = punctual_spectrum_regular(petersen(), 1)
        assert sum(result.class_constants) == pytest.approx(0.0, abs=1e-9)
        assert 3 * result.class_constants[0] + result.class_constants[1] \
            - 2 * result.class_constants[2] == pytest.approx(1.0)

    def test_beyond_diameter_is_vacuous(self):
        result = punctual_cospectral(petersen(), 3)
        assert result.holds is None
        assert result.status == "vacuous"
        assert not result

    def test_negative_distance(self):
        with pytest.raises(PreconditionError):
            punctual_cospectral(petersen(), -1)

    def test_requires_walk_regular(self):
        with pytest.raises(PreconditionError):
            punctual_cospectral(path(4), 1)

    def test_level_zero_matches_walk_regularity(self):
        for method in (punctual_walk_regular, punctual_spectrum_regular,
                       punctual_cospectral, punctual_isospectral):
            assert method(cube(), 0)


class TestProfile:
    """プロファイル"""

    def test_petersen(self):
        prof = profile(petersen())
        assert prof.diameter == 2
        assert prof.walk_regular
        assert [level.h for level in prof.levels] == [0, 1, 2]
        assert all(level.agreed for level in prof.levels)
        assert prof.failing_levels() == []
        assert prof.max_level() == 2

    def test_prism(self):
        prof = profile(prism())
        assert prof.failing_levels() == [1]
        assert prof.max_level() == 0
        assert prof.verdict(2) is True
        for method in METHODS:
            assert prof.verdict(1, method) is False

    def test_non_walk_regular_is_restricted(self):
        prof = profile(path(3))
        assert prof.restricted
        assert not prof.walk_regular
        assert len(prof.levels) == 1
        assert prof.verdict(0) is False
        with pytest.raises(PreconditionError):
            prof.verdict(1)

    def test_max_h(self):
        prof = profile(cycle(8), max_h=2)
        assert [level.h for level in prof.levels] == [0, 1, 2]

    def test_to_dict(self):
        data = profile(prism()).to_dict()
        assert data["levels"][1]["verdicts"] == dict.fromkeys(METHODS, "false")
        assert "cospectral" in data["levels"][1]["witnesses"]

    @pytest.mark.slow
    def test_twisted_desargues(self):
        """h = 3 のみ偽"""
        prof = profile(twisted_desargues())
        assert prof.diameter == 5
        assert prof.failing_levels() == [3]
        assert prof.max_level() == 2

    @pytest.mark.slow
    def test_desargues(self):
        prof = profile(desargues())
        assert prof.failing_levels() == []
        assert prof.max_level() == 5


class TestMLevel:

    def test_petersen(self):
        assert is_m_level(petersen(), 2)
        assert is_m_level(petersen(), 1, "spectrum")

    def test_prism(self):
        assert is_m_level(prism(), 0)
        assert not is_m_level(prism(), 1)

    def test_not_walk_regular(self):
        assert not is_m_level(path(3), 0)

    def test_bounds(self):
        with pytest.raises(PreconditionError):
            is_m_level(petersen(), 3)
        with pytest.raises(PreconditionError):
            is_m_level(petersen(), 1, "unknown")


class TestDistanceRegular:
    """距離正則性"""

    @pytest.mark.parametrize("graph,array", [
        (petersen(), "{3,2;1,1}"),
        (cube(), "{3,2,1;1,2,3}"),
        (cycle(6), "{2,1,1;1,1,2}"),
        (complete(4), "{3;1}"),
        (desargues(), "{3,2,2,1,1;1,1,2,2,3}"),
    ])
    def test_distance_regular(self, graph, array):
        result = is_distance_regular(graph)
        assert result
        assert result.array_string == array
        assert result.routes == {"combinatorial": True, "spectral": True}

    def test_prism_is_not(self):
        result = is_distance_regular(prism())
        assert not result
        assert result.array is None
        assert result.witness is not None

    def test_path_is_not(self):
        assert not is_distance_regular(path(4))

    def test_intersection_array(self):
        array, witness = intersection_array(petersen())
        assert array == ([3, 2], [1, 1])
        assert witness is None
        assert format_intersection_array(array) == "{3,2;1,1}"

    @pytest.mark.slow
    def test_twisted_desargues_is_not(self):
        assert not is_distance_regular(twisted_desargues())


class TestStronglyRegular:

    def test_parameters(self):
        assert strongly_regular_parameters(petersen()) == (10, 3, 0, 1)
        assert strongly_regular_parameters(cycle(5)) == (5, 2, 0, 1)
        assert strongly_regular_parameters(cube()) is None
        assert strongly_regular_parameters(complete(4)) is None

    def test_pair_check(self):
        record = strongly_regular_pair_check(petersen())
        assert record.passed
        assert record.details["distinct"]
        assert record.details["parameters"] == [10, 3, 0, 1]

    @pytest.mark.parametrize("name", ["petersen_complement", "c5"])
    def test_pair_check_other_graphs(self, name):
        record = strongly_regular_pair_check(catalog(name))
        assert record.passed
        assert record.details["distinct"]

    def test_pair_check_rejects(self):
        with pytest.raises(PreconditionError):
            strongly_regular_pair_check(cube())


class TestPairConditions:

    def test_equivalent_pair_conditions(self):
        g = petersen()
        assert pair_deletion_conditions(g, (0, 1), (2, 3)) == {"a": True, "b": True, "c": True}
        different = pair_deletion_conditions(g, (0, 1), (0, 7))
        assert different["a"] is False
        assert different["a"] == different["b"] == different["c"]

    def test_doubly_deleted_identity(self):
        g = petersen()
        assert pair_deletion_residual(g, 0, 1).passed
        assert pair_deletion_residual(g, 0, 7).passed
        assert pair_deletion_residual(path(5), 0, 3).passed

    def test_doubly_deleted_requires_distinct(self):
        with pytest.raises(PreconditionError):
            pair_deletion_residual(petersen(), 2, 2)


class TestReconcileRoutes:
    """浮動小数点経路と厳密経路の照合"""

    def test_agreement(self):
        reconcile_routes("x", True, True, 1.0, AnalysisSettings())

    def test_inside_band_keeps_exact(self):
        reconcile_routes("x", False, True, 5e-6, AnalysisSettings())

    @pytest.mark.parametrize("spread", [0.0, 1e-8, 1e-3])
    def test_outside_band_raises(self, spread):
        with pytest.raises(InvariantViolation) as excinfo:
            reconcile_routes("x", False, True, spread, AnalysisSettings())
        assert excinfo.value.witness["spread"] == spread
