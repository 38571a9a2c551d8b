"""Adjacency search: removal soundness, sepset minimality, query budget."""

import itertools
import random

import pytest

from fciplus import CausalDag, DsepOracle, pc_adjacency_search


def random_sufficient_dag(n, density, seed):
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return CausalDag(n, edges, observed=range(n))


class TestPcSearch:
    def test_empty_graph_all_marginal_sepsets(self):
        dag = CausalDag(4, [], observed=range(4))
        skel, seps = pc_adjacency_search(DsepOracle(dag), 4)
        assert skel.n_edges == 0
        for x, y in itertools.combinations(range(4), 2):
            assert seps.get(x, y) == frozenset()
            assert seps.level(x, y) == 0

    def test_chain_unique_separator_at_level_one(self):
        dag = CausalDag(3, [(0, 1), (1, 2)], observed=range(3))
        skel, seps = pc_adjacency_search(DsepOracle(dag), 3)
        assert skel.edge_pairs() == [(0, 1), (1, 2)]
        assert seps.get(0, 2) == frozenset({1})
        assert seps.level(0, 2) == 1

    def test_all_marks_are_circles(self):
        dag = CausalDag(3, [(0, 1), (1, 2)], observed=range(3))
        skel, _ = pc_adjacency_search(DsepOracle(dag), 3)
        from fciplus import CIRCLE
        assert all(ma == CIRCLE and mb == CIRCLE
                   for _, _, ma, mb in skel.edges())

    @pytest.mark.parametrize("seed", range(12))
    def test_sufficient_dag_recovers_true_skeleton(self, seed):
        n = 6 + seed % 5  # up to 10
        dag = random_sufficient_dag(n, 0.3, seed)
        skel, _ = pc_adjacency_search(DsepOracle(dag), n)
        assert sorted(skel.edge_pairs()) == dag.skeleton_pairs()

    @pytest.mark.parametrize("seed", range(8))
    def test_removals_sound_and_sets_minimal(self, seed):
        n = 7
        dag = random_sufficient_dag(n, 0.35, seed + 40)
        oracle = DsepOracle(dag)
        _, seps = pc_adjacency_search(oracle, n)
        for (x, y), zs, level in seps.items():
            assert oracle.query(x, y, zs), "stored set must separate"
            assert len(zs) == level
            for w in zs:
                assert not oracle.query(x, y, zs - {w}), \
                    "stored set must be minimal"

    def test_degree_cap_limits_level(self):
        # star dag: center 0 with many leaves, plus pairwise-independent leaves
        dag = CausalDag(5, [(0, i) for i in range(1, 5)], observed=range(5))
        oracle = DsepOracle(dag)
        _, seps = pc_adjacency_search(oracle, 5, k=1)
        assert oracle.stats.stages["pc_search"].max_cond_size <= 1
        for x, y in itertools.combinations(range(1, 5), 2):
            assert seps.get(x, y) == frozenset({0})

    @pytest.mark.parametrize("seed", range(6))
    def test_query_budget(self, seed):
        from fciplus import random_sparse_dag
        n, k = 8, 3
        dag = random_sparse_dag(n, k, n_latent=seed % 3, edge_density=0.2,
                                seed=seed + 7)
        oracle = DsepOracle(dag)
        pc_adjacency_search(oracle, k=k)
        assert oracle.stats.stages["pc_search"].queries <= 4 * n ** (k + 2)

    def test_deterministic_given_same_oracle_model(self):
        dag = random_sufficient_dag(8, 0.3, 5)
        a = pc_adjacency_search(DsepOracle(dag), 8)
        b = pc_adjacency_search(DsepOracle(dag), 8)
        assert a[0] == b[0]
        assert a[1].items() == b[1].items()

    def test_degenerate_k_zero_removes_marginal_independencies_only(self):
        # 0 -> 1 and an isolated pair {2, 3}: at k=0 only marginally
        # independent pairs go
        dag = CausalDag(4, [(0, 1), (2, 3)], observed=range(4))
        oracle = DsepOracle(dag)
        skel, seps = pc_adjacency_search(oracle, k=0)
        assert sorted(skel.edge_pairs()) == [(0, 1), (2, 3)]
        assert all(zs == frozenset() and lvl == 0 for _, zs, lvl in seps.items())
        assert oracle.stats.stages["pc_search"].max_cond_size == 0
