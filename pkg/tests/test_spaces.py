import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracdim import (
    MetricView,
    PointCloud,
    ResourceLimitError,
    SierpinskiTreeParams,
    WeightedNetwork,
    cantor_set,
    derive_seed,
    diameter,
    epsilon_neighbourhood,
    euclidean_metric,
    line_network,
    rescale,
    shortest_path_metric,
    sierpinski_tree,
    sierpinski_triangle,
    subsample,
)
from oracles import point_in_triangle

TRI = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]


class TestSierpinskiTriangle:
    def test_level0_is_centroid(self):
        cloud = sierpinski_triangle(0)
        assert cloud.n == 1
        np.testing.assert_allclose(cloud.points[0], [0.5, math.sqrt(3) / 6])

    def test_level7_count_and_containment(self):
        cloud = sierpinski_triangle(7)
        assert cloud.n == 3**7
        assert all(point_in_triangle(p, *TRI, tol=1e-9) for p in cloud.points)

    def test_points_distinct(self):
        cloud = sierpinski_triangle(5)
        assert len(np.unique(cloud.points, axis=0)) == cloud.n

    def test_deterministic(self):
        assert sierpinski_triangle(4) == sierpinski_triangle(4)

    def test_level_cap(self):
        with pytest.raises(ResourceLimitError):
            sierpinski_triangle(13)


class TestCantorSet:
    def test_level0(self):
        assert cantor_set(0).points.tolist() == [[0.0]]

    def test_level2_endpoints(self):
        np.testing.assert_allclose(
            cantor_set(2).points.ravel(), [0.0, 2 / 9, 2 / 3, 8 / 9]
        )

    def test_level2_matches_ifs_enumeration(self):
        # middle-thirds IFS images of 0: x/3 and x/3 + 2/3, twice
        expected = sorted(
            f2(f1(0.0))
            for f1 in (lambda x: x / 3, lambda x: x / 3 + 2 / 3)
            for f2 in (lambda x: x / 3, lambda x: x / 3 + 2 / 3)
        )
        np.testing.assert_allclose(cantor_set(2).points.ravel(), expected)

    def test_count(self):
        assert cantor_set(10).n == 1024

    def test_level_cap(self):
        with pytest.raises(ResourceLimitError):
            cantor_set(21)


class TestSierpinskiTree:
    def test_single_application(self):
        net = sierpinski_tree(SierpinskiTreeParams(3, 0.5, 1))
        assert net.node_count == 4
        assert net.edge_count == 3
        assert all(w == 1.0 for _, _, w in net.edges)

    def test_level5_counts(self):
        net = sierpinski_tree(SierpinskiTreeParams(3, 0.5, 5))
        assert net.node_count == 364
        assert net.edge_count == 363

    def test_level2_weight_range(self):
        weights = [w for _, _, w in sierpinski_tree(SierpinskiTreeParams(3, 0.5, 2)).edges]
        assert min(weights) == 0.5
        assert max(weights) == 1.0

    @pytest.mark.parametrize("levels", range(7))
    def test_always_a_tree(self, levels):
        net = sierpinski_tree(SierpinskiTreeParams(3, 0.5, levels))
        assert net.edge_count == net.node_count - 1
        if net.node_count > 1:
            assert math.isfinite(diameter(shortest_path_metric(net)))

    @pytest.mark.parametrize("levels", [1, 2, 3, 4])
    def test_self_similarity_witness(self, levels):
        """Removing the newest hub leaves 3 copies of the previous level, weights halved."""
        prev = sierpinski_tree(SierpinskiTreeParams(3, 0.5, levels - 1))
        cur = sierpinski_tree(SierpinskiTreeParams(3, 0.5, levels))
        hub = cur.node_count - 1
        n_prev = prev.node_count
        remaining = [e for e in cur.edges if hub not in (e[0], e[1])]
        for c in range(3):
            off = c * n_prev
            copy = sorted(
                (u - off, v - off, w) for u, v, w in remaining if off <= u and v < off + n_prev
            )
            expected = sorted((u, v, w * 0.5) for u, v, w in prev.edges)
            assert copy == expected
        assert len(remaining) == 3 * prev.edge_count

    def test_param_validation(self):
        with pytest.raises(ValueError):
            SierpinskiTreeParams(1, 0.5, 2)
        with pytest.raises(ValueError):
            SierpinskiTreeParams(3, 1.0, 2)
        with pytest.raises(ValueError):
            SierpinskiTreeParams(3, 0.5, -1)


class TestLineNetwork:
    def test_single_node(self):
        net = line_network(1)
        assert net.node_count == 1
        assert net.edges == ()

    def test_five_nodes(self):
        net = line_network(5)
        assert net.edges == ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0))


class TestShortestPathMetric:
    def test_fig7_weight3_edge_bypassed(self, fig7_left):
        metric = shortest_path_metric(fig7_left)
        assert metric.dist[0, 1] == 2.0

    def test_fig7_networks_same_metric(self, fig7_left, fig7_right):
        a = shortest_path_metric(fig7_left)
        b = shortest_path_metric(fig7_right)
        assert np.array_equal(a.dist, b.dist)

    def test_line_endpoints(self):
        metric = shortest_path_metric(line_network(4))
        assert metric.dist[0, 3] == 3.0

    def test_disconnected_inf(self):
        net = WeightedNetwork(4, ((0, 1, 1.0), (2, 3, 1.0)))
        metric = shortest_path_metric(net)
        assert math.isinf(metric.dist[0, 2])
        assert diameter(metric) == math.inf

    def test_triangle_inequality_exact(self, fig7_left):
        shortest_path_metric(fig7_left).validate_triangle(tol=0.0)

    def test_triangle_inequality_on_tree(self):
        net = sierpinski_tree(SierpinskiTreeParams(3, 0.5, 4))
        shortest_path_metric(net).validate_triangle(tol=0.0)


class TestNeighbourhood:
    def test_eps_zero(self, fig7_left):
        metric = shortest_path_metric(fig7_left)
        assert epsilon_neighbourhood(metric, 2, 0.0) == {2}

    def test_line_example(self):
        metric = shortest_path_metric(line_network(7))
        assert epsilon_neighbourhood(metric, 3, 2.0) == {1, 2, 3, 4, 5}

    def test_eps_at_diameter_covers_all(self, fig7_left):
        metric = shortest_path_metric(fig7_left)
        assert epsilon_neighbourhood(metric, 0, diameter(metric)) == {0, 1, 2, 3}

    @given(
        eps=st.floats(0, 5),
        eps2=st.floats(0, 5),
        x=st.integers(0, 6),
    )
    def test_monotone_in_eps(self, eps, eps2, x):
        metric = shortest_path_metric(line_network(7))
        lo, hi = min(eps, eps2), max(eps, eps2)
        assert epsilon_neighbourhood(metric, x, lo) <= epsilon_neighbourhood(metric, x, hi)


class TestMetricOps:
    def test_rescale_identity(self):
        m = euclidean_metric(PointCloud(np.array([[0.0], [1.0]])))
        assert np.array_equal(rescale(m, 1.0).dist, m.dist)

    def test_rescale_two_points(self):
        m = euclidean_metric(PointCloud(np.array([[0.0], [1.0]])))
        assert rescale(m, 3.0).dist[0, 1] == 3.0

    def test_rescale_composes(self):
        m = euclidean_metric(PointCloud(np.array([[0.0], [1.0], [2.5]])))
        a = rescale(rescale(m, 2.0), 3.0)
        b = rescale(m, 6.0)
        assert np.array_equal(a.dist, b.dist)
        assert a.scale == b.scale

    def test_diameter_line5(self):
        assert diameter(shortest_path_metric(line_network(5))) == 4.0

    def test_invalid_scale(self):
        m = euclidean_metric(PointCloud(np.array([[0.0], [1.0]])))
        with pytest.raises(ValueError):
            rescale(m, 0.0)

    def test_metric_validation(self):
        with pytest.raises(ValueError):
            MetricView(np.array([[0.0, 1.0], [2.0, 0.0]]))  # asymmetric
        with pytest.raises(ValueError):
            MetricView(np.array([[1.0]]))  # nonzero diagonal


class TestSubsample:
    def test_full_size_returns_cloud_in_order(self, random_cloud):
        cloud = random_cloud(20)
        assert subsample(cloud, 20, 9) == cloud

    def test_deterministic(self, random_cloud):
        cloud = random_cloud(50)
        assert subsample(cloud, 10, 123) == subsample(cloud, 10, 123)

    def test_out_of_range(self, random_cloud):
        cloud = random_cloud(5)
        with pytest.raises(ValueError):
            subsample(cloud, 6, 0)
        with pytest.raises(ValueError):
            subsample(cloud, 0, 0)

    def test_points_are_distinct_rows_of_input(self, random_cloud):
        cloud = random_cloud(30)
        sub = subsample(cloud, 12, 5)
        rows = {tuple(r) for r in cloud.points}
        assert len({tuple(r) for r in sub.points}) == 12
        assert all(tuple(r) in rows for r in sub.points)

    def test_single_point_frequencies_uniform(self, random_cloud):
        # chi-square style sanity: each of 10 points drawn with freq 0.1 +- 0.01
        cloud = random_cloud(10)
        counts = np.zeros(10)
        for rep in range(10000):
            sub = subsample(cloud, 1, derive_seed(7, rep))
            idx = int(np.nonzero((cloud.points == sub.points[0]).all(axis=1))[0][0])
            counts[idx] += 1
        freqs = counts / 10000
        assert np.all(np.abs(freqs - 0.1) <= 0.01)

    @given(seed=st.integers(0, 2**63 - 1), n=st.integers(1, 15))
    @settings(max_examples=25)
    def test_determinism_property(self, seed, n):
        cloud = PointCloud(np.arange(30, dtype=float).reshape(15, 2))
        assert subsample(cloud, n, seed) == subsample(cloud, n, seed)


class TestValidation:
    def test_pointcloud_rejects_nan(self):
        with pytest.raises(ValueError):
            PointCloud(np.array([[0.0, np.nan]]))

    def test_network_rejects_self_loop(self):
        with pytest.raises(ValueError):
            WeightedNetwork(2, ((0, 0, 1.0),))

    def test_network_rejects_duplicate(self):
        with pytest.raises(ValueError):
            WeightedNetwork(2, ((0, 1, 1.0), (1, 0, 2.0)))

    def test_network_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            WeightedNetwork(2, ((0, 1, 0.0),))

    def test_network_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            WeightedNetwork(2, ((0, 2, 1.0),))
