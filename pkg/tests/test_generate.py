"""Tests for the seeded benchmark generators and the problem text format."""

import itertools

import networkx as nx
import numpy as np
import pytest

from isingsim.generate import (
    WeightSpec,
    gen_barabasi_albert,
    gen_erdos_renyi,
    gen_power_law_cluster,
    gen_random_3sat,
    problem_from_text,
    problem_to_text,
)
from isingsim.model import graph_density


def to_nx(problem):
    g = nx.Graph()
    g.add_nodes_from(range(problem.n))
    g.add_edges_from(problem.J.keys())
    return g


class TestErdosRenyi:
    def test_p_zero_empty(self):
        assert gen_erdos_renyi(20, 0.0, seed=1).J == {}

    def test_p_one_complete(self):
        p = gen_erdos_renyi(10, 1.0, seed=1)
        assert p.num_couplings == 45

    def test_mean_density_concentrates(self):
        densities = [
            gen_erdos_renyi(50, 0.24, seed=s).density() for s in range(200)
        ]
        assert abs(np.mean(densities) - 0.24) < 0.03

    def test_deterministic(self):
        a = gen_erdos_renyi(30, 0.2, seed=42)
        b = gen_erdos_renyi(30, 0.2, seed=42)
        assert a.J == b.J

    def test_no_zero_weights(self):
        p = gen_erdos_renyi(30, 0.5, seed=3)
        assert all(v != 0.0 for v in p.J.values())


class TestBarabasiAlbert:
    def test_m1_is_connected_tree(self):
        p = gen_barabasi_albert(50, 1, seed=5)
        assert p.num_couplings == 49
        assert nx.is_connected(to_nx(p))

    def test_edge_count_m8(self):
        assert gen_barabasi_albert(50, 8, seed=5).num_couplings == (50 - 8) * 8

    def test_heavy_tail(self):
        ratios = []
        for s in range(100):
            p = gen_barabasi_albert(50, 2, seed=s)
            degrees = np.zeros(50)
            for i, j in p.J:
                degrees[i] += 1
                degrees[j] += 1
            ratios.append(degrees.max() / np.median(degrees))
        assert np.mean(ratios) > 3.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            gen_barabasi_albert(10, 0, seed=1)
        with pytest.raises(ValueError):
            gen_barabasi_albert(10, 10, seed=1)


class TestPowerLawCluster:
    def test_p_zero_matches_ba_edge_count(self):
        p = gen_power_law_cluster(50, 4, 0.0, seed=7)
        assert p.num_couplings == (50 - 4) * 4

    def test_edge_count_with_triangles(self):
        p = gen_power_law_cluster(50, 4, 0.5, seed=7)
        assert p.num_couplings == (50 - 4) * 4

    def test_clusters_more_than_ba(self):
        # networkx average_clustering is the independent oracle here
        pow_cc = np.mean(
            [nx.average_clustering(to_nx(gen_power_law_cluster(50, 4, 0.5, seed=s)))
             for s in range(100)]
        )
        ba_cc = np.mean(
            [nx.average_clustering(to_nx(gen_barabasi_albert(50, 4, seed=s)))
             for s in range(100)]
        )
        assert pow_cc > ba_cc

    def test_deterministic(self):
        a = gen_power_law_cluster(40, 3, 0.5, seed=11)
        b = gen_power_law_cluster(40, 3, 0.5, seed=11)
        assert a.J == b.J


class TestRandom3Sat:
    def test_clause_count(self):
        cnf = gen_random_3sat(50, 2.0, seed=13)
        assert cnf.num_clauses == 100

    def test_three_distinct_vars(self):
        cnf = gen_random_3sat(30, 4.0, seed=17)
        for clause in cnf.clauses:
            assert len({v for v, _ in clause}) == 3

    def test_low_alpha_mostly_satisfiable(self):
        # below the hardness transition nearly everything is satisfiable;
        # exhaustive check at a size small enough to enumerate
        n = 12
        sat_count = 0
        for s in range(100):
            cnf = gen_random_3sat(n, 1.0, seed=s)
            for bits in itertools.product([0, 1], repeat=n):
                if all(any((bits[v] == 1) == pos for v, pos in c) for c in cnf.clauses):
                    sat_count += 1
                    break
        assert sat_count >= 95

    def test_deterministic(self):
        assert gen_random_3sat(20, 3.0, seed=23) == gen_random_3sat(20, 3.0, seed=23)


class TestWeightSpec:
    def test_uniform_int_range_and_nonzero(self):
        rng = np.random.default_rng(1)
        w = WeightSpec().draw(rng, 500)
        assert np.all(w != 0) and np.all(np.abs(w) <= 7)
        assert np.all(w == np.round(w))

    def test_constant(self):
        w = WeightSpec(kind="constant", high=2.5).draw(np.random.default_rng(1), 5)
        assert np.all(w == 2.5)


class TestTextFormat:
    def test_roundtrip(self):
        p = gen_erdos_renyi(20, 0.3, seed=29)
        q = problem_from_text(problem_to_text(p))
        assert q.n == p.n and q.J == p.J and q.offset == p.offset
        assert np.array_equal(q.h, p.h)

    def test_roundtrip_with_fields(self):
        from isingsim.model import IsingProblem

        p = IsingProblem(n=3, h=[0.5, 0.0, -1.25], J={(0, 2): 1.5}, offset=3.75)
        q = problem_from_text(problem_to_text(p))
        assert np.array_equal(q.h, p.h) and q.J == p.J and q.offset == p.offset

    def test_header_mismatch_rejected(self):
        with pytest.raises(ValueError):
            problem_from_text("ising 2 2\nJ 0 1 1.0\n")

    def test_density_example(self):
        p = gen_erdos_renyi(50, 1.0, seed=1)
        assert graph_density(p.J.keys(), 50) == 1.0
