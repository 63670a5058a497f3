"""Instance construction, validation, and serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given

from centrum import (
    MetricInstance,
    build_from_graph,
    build_from_matrix,
    build_from_points,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    validate_metric,
)
from centrum.errors import (
    AsymmetricCross,
    BadParams,
    CrossMismatch,
    DimensionMismatch,
    DisconnectedGraph,
    MissingCrossDistances,
    NegativeDistance,
    NonFinite,
    NonPositiveWeight,
    NonzeroDiagonal,
    TriangleViolation,
)

from conftest import graph_instances, point_instances


class TestBuildFromMatrix:
    def test_minimal_instance(self):
        inst = build_from_matrix([[0.0]])
        assert inst.n_clients == 1
        assert inst.m_facilities == 1
        assert not inst.metric_verified

    def test_default_labels(self):
        inst = build_from_matrix([[1.0, 2.0], [3.0, 4.0]])
        assert inst.client_labels == ("c0", "c1")
        assert inst.facility_labels == ("f0", "f1")

    def test_negative_entry_rejected(self):
        with pytest.raises(NegativeDistance):
            build_from_matrix([[1.0, -0.5]])

    def test_nan_rejected(self):
        with pytest.raises(NonFinite):
            build_from_matrix([[float("nan")]])

    def test_inf_rejected(self):
        with pytest.raises(NonFinite):
            build_from_matrix([[float("inf")]])

    def test_ragged_rejected(self):
        with pytest.raises(BadParams):
            build_from_matrix([[1.0, 2.0], [3.0]])

    def test_label_count_mismatch(self):
        with pytest.raises(BadParams):
            build_from_matrix([[1.0]], client_labels=("a", "b"))

    def test_triangle_violation_in_cross(self):
        # d(x,z) = 5 but d(x,y) + d(y,z) = 2
        cross = [
            [0.0, 1.0, 5.0],
            [1.0, 0.0, 1.0],
            [5.0, 1.0, 0.0],
        ]
        with pytest.raises(TriangleViolation):
            build_from_matrix([[5.0], [1.0]], cross=cross)

    def test_asymmetric_cross_rejected(self):
        cross = [
            [0.0, 1.0, 1.0],
            [2.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
        ]
        with pytest.raises(AsymmetricCross):
            MetricInstance(dist=np.array([[1.0], [1.0]]), cross=np.array(cross))

    def test_nonzero_diagonal_rejected(self):
        cross = np.ones((3, 3))
        with pytest.raises(NonzeroDiagonal):
            MetricInstance(dist=np.ones((2, 1)), cross=cross)

    def test_cross_block_must_match_dist(self):
        cross = np.array([
            [0.0, 1.0, 1.0],
            [1.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
        ])
        with pytest.raises(CrossMismatch):
            MetricInstance(dist=np.array([[9.0], [1.0]]), cross=cross)

    def test_cross_shape_checked(self):
        with pytest.raises(DimensionMismatch):
            MetricInstance(dist=np.ones((2, 1)), cross=np.zeros((4, 4)))

    def test_dist_is_readonly(self):
        inst = build_from_matrix([[1.0]])
        with pytest.raises(ValueError):
            inst.dist[0, 0] = 2.0


class TestBuildFromPoints:
    def test_single_pair_on_line(self):
        inst = build_from_points([[0.0]], [[3.0]])
        assert inst.dist[0, 0] == 3.0
        assert inst.metric_verified

    def test_euclidean_example(self):
        inst = build_from_points([[0.0, 0.0], [1.0, 0.0]], [[0.0, 1.0]])
        assert inst.dist[0, 0] == pytest.approx(1.0, abs=1e-15)
        assert inst.dist[1, 0] == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_l1_example(self):
        inst = build_from_points([[0.0, 0.0]], [[1.0, 1.0]], norm=1)
        assert inst.dist[0, 0] == 2.0

    def test_linf_example(self):
        inst = build_from_points([[3.0, 4.0]], [[0.0, 0.0]], norm=float("inf"))
        assert inst.dist[0, 0] == 4.0

    def test_flat_vectors_accepted(self):
        inst = build_from_points([0.0, 2.0], [1.0])
        assert inst.dist.shape == (2, 1)
        assert inst.dist.tolist() == [[1.0], [1.0]]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            build_from_points([[0.0, 0.0]], [[1.0]])

    def test_bad_norm(self):
        with pytest.raises(BadParams):
            build_from_points([[0.0]], [[1.0]], norm=3)

    def test_nonfinite_coordinates(self):
        with pytest.raises(NonFinite):
            build_from_points([[float("nan")]], [[1.0]])

    @given(point_instances())
    def test_always_a_metric(self, inst):
        assert validate_metric(inst) == []


class TestBuildFromGraph:
    def test_path_graph(self):
        inst = build_from_graph(
            ["a", "b", "c"],
            [("a", "b", 1.0), ("b", "c", 1.0)],
            ["a", "c"],
            ["b"],
        )
        assert inst.dist[0, 0] == 1.0
        assert inst.dist[1, 0] == 1.0
        # shortest path a-c goes through b
        assert inst.cross[0, 1] == 2.0

    def test_single_vertex(self):
        inst = build_from_graph(["v"], [], ["v"], ["v"])
        assert inst.dist.tolist() == [[0.0]]

    def test_parallel_edges_keep_minimum(self):
        inst = build_from_graph(
            ["a", "b"],
            [("a", "b", 5.0), ("a", "b", 2.0)],
            ["a"],
            ["b"],
        )
        assert inst.dist[0, 0] == 2.0

    def test_shortcut_wins_over_direct_edge(self):
        inst = build_from_graph(
            ["a", "b", "c"],
            [("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 10.0)],
            ["a"],
            ["c"],
        )
        assert inst.dist[0, 0] == 2.0

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraph):
            build_from_graph(["a", "b"], [], ["a"], ["b"])

    def test_unreferenced_component_tolerated(self):
        inst = build_from_graph(
            ["a", "b", "x"],
            [("a", "b", 1.0)],
            ["a"],
            ["b"],
        )
        assert inst.dist[0, 0] == 1.0

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(NonPositiveWeight):
            build_from_graph(["a", "b"], [("a", "b", 0.0)], ["a"], ["b"])

    def test_unknown_vertex_rejected(self):
        with pytest.raises(BadParams):
            build_from_graph(["a"], [("a", "zz", 1.0)], ["a"], ["a"])
        with pytest.raises(BadParams):
            build_from_graph(["a"], [], ["a"], ["zz"])

    def test_duplicate_vertex_ids_rejected(self):
        with pytest.raises(BadParams):
            build_from_graph(["a", "a"], [], ["a"], ["a"])

    def test_repeated_client_vertices(self):
        inst = build_from_graph(
            ["a", "b"],
            [("a", "b", 1.5)],
            ["a", "a", "b"],
            ["b"],
        )
        assert inst.n_clients == 3
        assert inst.dist[:, 0].tolist() == [1.5, 1.5, 0.0]

    def test_closure_matches_floyd_warshall(self):
        # independent all-pairs oracle on a fixed random graph
        rng = np.random.Generator(np.random.Philox(42))
        nv = 8
        edges = []
        for v in range(1, nv):
            u = int(rng.integers(0, v))
            edges.append((u, v, float(rng.uniform(0.2, 2.0))))
        for u in range(nv):
            for v in range(u + 1, nv):
                if rng.random() < 0.4:
                    edges.append((u, v, float(rng.uniform(0.2, 2.0))))
        dist = np.full((nv, nv), np.inf)
        np.fill_diagonal(dist, 0.0)
        for u, v, w in edges:
            dist[u, v] = min(dist[u, v], w)
            dist[v, u] = min(dist[v, u], w)
        for mid in range(nv):
            for i in range(nv):
                for j in range(nv):
                    through = dist[i, mid] + dist[mid, j]
                    if through < dist[i, j]:
                        dist[i, j] = through
        inst = build_from_graph(
            list(range(nv)), edges, list(range(nv)), list(range(nv))
        )
        assert np.allclose(inst.cross[:nv, :nv], dist, atol=1e-12)

    @given(graph_instances())
    def test_always_a_metric(self, inst):
        assert validate_metric(inst) == []


class TestValidateMetric:
    def test_equilateral_passes(self):
        cross = np.ones((3, 3)) - np.eye(3)
        inst = MetricInstance(dist=cross[:2, 2:].copy(), cross=cross)
        assert validate_metric(inst) == []

    def test_near_violation_reported(self):
        # 2.001 > 1 + 1 by about 1e-3
        cross = np.array([
            [0.0, 1.0, 2.001],
            [1.0, 0.0, 1.0],
            [2.001, 1.0, 0.0],
        ])
        inst = MetricInstance(dist=cross[:2, 2:].copy(), cross=cross)
        violations = validate_metric(inst, tol=1e-9)
        assert len(violations) == 1
        assert violations[0].kind == "triangle"
        assert violations[0].slack == pytest.approx(1e-3, rel=1e-6)

    def test_tolerance_scales_with_distances(self):
        # same relative wiggle at a much larger scale still passes
        big = 1e12
        cross = np.array([
            [0.0, big, 2 * big + 1.0],
            [big, 0.0, big],
            [2 * big + 1.0, big, 0.0],
        ])
        inst = MetricInstance(dist=cross[:2, 2:].copy(), cross=cross)
        assert validate_metric(inst, tol=1e-9) == []
        assert len(validate_metric(inst, tol=1e-15)) == 1

    def test_requires_cross(self):
        inst = build_from_matrix([[1.0]])
        with pytest.raises(MissingCrossDistances):
            validate_metric(inst)


class TestSerialization:
    def test_json_round_trip(self, tmp_path):
        inst = build_from_points([[0.0, 0.0], [1.0, 2.0]], [[3.0, 1.0]])
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        again = load_instance(path)
        assert np.allclose(again.dist, inst.dist)
        assert np.allclose(again.cross, inst.cross)
        assert again.client_labels == inst.client_labels

    def test_load_point_cloud_document(self, tmp_path):
        path = tmp_path / "pts.json"
        path.write_text(json.dumps({
            "client_points": [[0.0, 0.0], [1.0, 0.0]],
            "facility_points": [[0.0, 1.0]],
            "norm": 2,
        }))
        inst = load_instance(path)
        assert inst.dist[1, 0] == pytest.approx(math.sqrt(2.0))

    def test_load_graph_document(self, tmp_path):
        path = tmp_path / "graph.json"
        path.write_text(json.dumps({
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b", 1.0], ["b", "c", 2.0]],
            "clients": ["a", "c"],
            "facilities": ["b"],
        }))
        inst = load_instance(path)
        assert inst.dist.tolist() == [[1.0], [2.0]]

    def test_load_csv(self, tmp_path):
        path = tmp_path / "dist.csv"
        path.write_text("fA,fB\n1.0,2.0\n3.5,0.5\n")
        inst = load_instance(path)
        assert inst.facility_labels == ("fA", "fB")
        assert inst.dist.tolist() == [[1.0, 2.0], [3.5, 0.5]]
        assert not inst.metric_verified

    def test_load_csv_bad_cell(self, tmp_path):
        path = tmp_path / "dist.csv"
        path.write_text("fA\nnot-a-number\n")
        with pytest.raises(BadParams):
            load_instance(path)

    def test_labels_block_accepted(self):
        inst = instance_from_dict({
            "dist": [[1.0]],
            "labels": {"clients": ["house"], "facilities": ["depot"]},
        })
        assert inst.client_labels == ("house",)
        assert inst.facility_labels == ("depot",)

    def test_unknown_document_shape(self):
        with pytest.raises(BadParams):
            instance_from_dict({"something": 1})
        with pytest.raises(BadParams):
            instance_from_dict([1, 2])

    def test_to_dict_includes_provenance(self):
        inst = build_from_matrix([[1.0]], provenance={"family": "unit-test"})
        doc = instance_to_dict(inst)
        assert doc["schema"] == 1
        assert doc["provenance"] == {"family": "unit-test"}

    @given(point_instances())
    def test_dict_round_trip_preserves_distances(self, inst):
        doc = instance_to_dict(inst)
        doc = json.loads(json.dumps({
            k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in doc.items()
        }))
        again = instance_from_dict(doc)
        assert np.array_equal(again.dist, inst.dist)
        assert np.array_equal(again.cross, inst.cross)
