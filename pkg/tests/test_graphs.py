"""Graph core: ancestry, separation criteria, latent projection, I/O."""

import itertools
import json
import random

import pytest

from fciplus import (
    ARROW, CIRCLE, TAIL, CausalDag, GraphError, MixedGraph, ancestors,
    d_separated, latent_project, m_separated,
)
from fciplus.graphs import ModelViolationError

from .brute import bf_d_separated, bf_m_separated, bf_mag_adjacent


def chain3():
    return CausalDag(3, [(0, 1), (1, 2)], observed=[0, 1, 2],
                     names=["A", "B", "C"])


def random_dag(n, density, seed, n_latent=0, n_selection=0):
    rng = random.Random(seed)
    total = n + n_latent + n_selection
    order = list(range(total))
    rng.shuffle(order)
    edges = []
    for i in range(total):
        for j in range(i + 1, total):
            if rng.random() < density:
                edges.append((order[i], order[j]))
    # selection variables must be childless for a well-formed example
    special = rng.sample(range(total), n_latent + n_selection)
    latent, selection = special[:n_latent], special[n_latent:]
    edges = [(u, v) for u, v in edges if u not in selection]
    observed = [v for v in range(total) if v not in special]
    return CausalDag(total, edges, observed, latent, selection)


class TestAncestors:
    def test_chain_transitive_closure(self):
        assert ancestors(chain3(), [2]) == {0, 1, 2}

    def test_empty_seed(self):
        assert ancestors(chain3(), []) == frozenset()

    def test_collider_has_no_ancestors_beyond_itself(self):
        dag = CausalDag(3, [(0, 2), (1, 2)], observed=[0, 1, 2])
        assert ancestors(dag, [0]) == {0}

    def test_unknown_id_rejected(self):
        with pytest.raises(GraphError):
            ancestors(chain3(), [7])

    @pytest.mark.parametrize("seed", range(5))
    def test_monotone_and_idempotent(self, seed):
        dag = random_dag(7, 0.3, seed)
        rng = random.Random(seed)
        xs = set(rng.sample(range(7), 2))
        ys = xs | {rng.randrange(7)}
        assert dag.ancestors(xs) <= dag.ancestors(ys)
        assert dag.ancestors(dag.ancestors(xs)) == dag.ancestors(xs)

    def test_mixed_graph_directed_paths_only(self):
        g = MixedGraph(3, [(0, 1, TAIL, ARROW), (1, 2, ARROW, ARROW)])
        assert g.ancestors([1]) == {0, 1}
        assert g.ancestors([2]) == {2}


class TestDSeparation:
    def test_blocked_chain(self):
        dag = chain3()
        assert d_separated(dag, 0, 2, {1})
        assert not d_separated(dag, 0, 2, set())

    def test_collider_opens_under_conditioning(self):
        dag = CausalDag(3, [(0, 2), (1, 2)], observed=[0, 1, 2])
        assert d_separated(dag, 0, 1, set())
        assert not d_separated(dag, 0, 1, {2})

    def test_descendant_of_collider_opens(self):
        dag = CausalDag(4, [(0, 2), (1, 2), (2, 3)], observed=[0, 1, 2, 3])
        assert not d_separated(dag, 0, 1, {3})

    def test_input_validation(self):
        dag = chain3()
        with pytest.raises(GraphError):
            d_separated(dag, 0, 0, set())
        with pytest.raises(GraphError):
            d_separated(dag, 0, 2, {0})
        with pytest.raises(GraphError):
            d_separated(dag, 0, 9, set())

    @pytest.mark.parametrize("seed", range(8))
    def test_agrees_with_path_enumeration_all_triples(self, seed):
        n = 5 + seed % 4  # up to 8 nodes
        dag = random_dag(n, 0.35, seed)
        rest = list(range(n))
        for x, y in itertools.combinations(range(n), 2):
            others = [v for v in rest if v not in (x, y)]
            for r in range(len(others) + 1):
                for zs in itertools.combinations(others, r):
                    assert d_separated(dag, x, y, set(zs)) == \
                        bf_d_separated(dag, x, y, set(zs)), (x, y, zs)

    @pytest.mark.parametrize("seed", range(6))
    def test_symmetry(self, seed):
        dag = random_dag(7, 0.3, seed)
        rng = random.Random(seed + 100)
        for _ in range(30):
            x, y = rng.sample(range(7), 2)
            zs = {v for v in range(7) if v not in (x, y) and rng.random() < 0.3}
            assert d_separated(dag, x, y, zs) == d_separated(dag, y, x, zs)


class TestMSeparation:
    def test_adjacent_never_separated(self):
        g = MixedGraph(2, [(0, 1, ARROW, ARROW)])
        assert not m_separated(g, 0, 1, set())

    def test_bidirected_chain_collider(self):
        g = MixedGraph(3, [(0, 2, ARROW, ARROW), (1, 2, ARROW, ARROW)])
        assert m_separated(g, 0, 1, set())
        assert not m_separated(g, 0, 1, {2})

    def test_rejects_non_mag(self):
        g = MixedGraph(2, [(0, 1, CIRCLE, CIRCLE)])
        with pytest.raises(GraphError):
            m_separated(g, 0, 1, set())
        bad = MixedGraph(2, [(0, 1, ARROW, TAIL)])  # 1 -> 0 is fine
        assert m_separated is not None and bad.is_ancestral()
        cyc = MixedGraph(3, [(0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW),
                             (0, 2, ARROW, TAIL)])
        with pytest.raises(GraphError):
            m_separated(cyc, 0, 1, set())

    @pytest.mark.parametrize("seed", range(10))
    def test_projection_consistency_exhaustive(self, seed):
        # m-separation in the projected MAG == d-separation (plus selection)
        # in the dag, for every observed triple; up to 8 observed nodes
        rng = random.Random(seed)
        n = rng.choice([4, 5, 6])
        dag = random_dag(n, 0.3, seed, n_latent=rng.choice([1, 2]),
                         n_selection=rng.choice([0, 1]))
        mag = latent_project(dag)
        obs = dag.observed
        sel = set(dag.selection)
        for x, y in itertools.combinations(range(len(obs)), 2):
            others = [v for v in range(len(obs)) if v not in (x, y)]
            for r in range(len(others) + 1):
                for zs in itertools.combinations(others, r):
                    want = d_separated(dag, obs[x], obs[y],
                                       {obs[v] for v in zs} | sel)
                    assert m_separated(mag, x, y, set(zs)) == want

    @pytest.mark.parametrize("seed", range(6))
    def test_agrees_with_path_enumeration(self, seed):
        rng = random.Random(seed)
        dag = random_dag(5, 0.35, seed, n_latent=1)
        mag = latent_project(dag)
        for x, y in itertools.combinations(range(mag.n), 2):
            others = [v for v in range(mag.n) if v not in (x, y)]
            for r in range(len(others) + 1):
                for zs in itertools.combinations(others, r):
                    assert m_separated(mag, x, y, set(zs)) == \
                        bf_m_separated(mag, x, y, set(zs))


class TestLatentProjection:
    def test_sufficient_dag_projects_to_itself(self):
        dag = chain3()
        mag = latent_project(dag)
        assert mag.edges() == [(0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW)]

    def test_confounder_yields_bidirected(self):
        dag = CausalDag(3, [(2, 0), (2, 1)], observed=[0, 1], latent=[2])
        assert latent_project(dag).edges() == [(0, 1, ARROW, ARROW)]

    def test_selection_yields_undirected(self):
        dag = CausalDag(3, [(0, 2), (1, 2)], observed=[0, 1], selection=[2])
        assert latent_project(dag).edges() == [(0, 1, TAIL, TAIL)]

    @pytest.mark.parametrize("seed", range(12))
    def test_adjacency_matches_subset_exhaustive_definition(self, seed):
        rng = random.Random(seed)
        n = rng.choice([4, 5, 6])
        dag = random_dag(n, 0.3, seed + 50, n_latent=rng.choice([0, 1, 2]),
                         n_selection=rng.choice([0, 1]))
        mag = latent_project(dag)
        obs = dag.observed
        for i, j in itertools.combinations(range(len(obs)), 2):
            assert mag.has_edge(i, j) == bf_mag_adjacent(dag, obs[i], obs[j])

    @pytest.mark.parametrize("seed", range(12))
    def test_marks_follow_ancestry_and_result_is_mag(self, seed):
        rng = random.Random(seed)
        dag = random_dag(6, 0.3, seed + 90, n_latent=rng.choice([1, 2]),
                         n_selection=rng.choice([0, 1]))
        mag = latent_project(dag)
        mag.require_mag()
        obs = dag.observed
        sel = list(dag.selection)
        for a, b, ma, mb in mag.edges():
            assert (ma == TAIL) == (obs[a] in dag.ancestors([obs[b]] + sel))
            assert (mb == TAIL) == (obs[b] in dag.ancestors([obs[a]] + sel))


class TestGraphValues:
    def test_edits_produce_new_graphs(self):
        g = MixedGraph(2, [(0, 1, CIRCLE, CIRCLE)])
        g2 = g.without_edge(0, 1)
        assert g.has_edge(0, 1) and not g2.has_edge(0, 1)

    def test_builder_conflict_raises(self):
        g = MixedGraph(2, [(0, 1, TAIL, ARROW)])
        b = g.builder()
        with pytest.raises(ModelViolationError):
            b.set_mark(0, 1, ARROW)
        assert b.set_mark(0, 1, TAIL) is False  # no-op

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphError):
            MixedGraph(2, [(0, 1, TAIL, ARROW), (1, 0, TAIL, ARROW)])

    def test_dag_cycle_rejected(self):
        with pytest.raises(GraphError):
            CausalDag(2, [(0, 1), (1, 0)], observed=[0, 1])

    def test_partition_must_be_exhaustive(self):
        with pytest.raises(GraphError):
            CausalDag(3, [], observed=[0, 1])

    def test_mixed_graph_json_round_trip(self):
        g = MixedGraph(3, [(0, 1, TAIL, ARROW), (1, 2, ARROW, CIRCLE)],
                       names=["a", "b", "c"])
        assert MixedGraph.from_json(g.to_json()) == g

    def test_dag_json_round_trip(self):
        dag = CausalDag(4, [(0, 1), (2, 1)], observed=[0, 1], latent=[2],
                        selection=[3], names=["w", "x", "l", "s"])
        assert CausalDag.from_json(dag.to_json()) == dag

    def test_json_schema_fields(self):
        d = json.loads(chain3().to_json())
        assert set(d) == {"n", "names", "observed", "latent", "selection", "edges"}
        assert d["edges"][0] == {"a": 0, "b": 1, "mark_a": "tail", "mark_b": "arrow"}

    def test_dot_export_marks(self):
        g = MixedGraph(2, [(0, 1, CIRCLE, ARROW)])
        dot = g.to_dot()
        assert "arrowtail=odot" in dot and "arrowhead=normal" in dot
        und = MixedGraph(2, [(0, 1, TAIL, TAIL)]).to_dot()
        assert "arrowtail=none" in und and "arrowhead=none" in und

    def test_edge_iteration_is_lexicographic(self):
        g = MixedGraph(4, [(2, 3, CIRCLE, CIRCLE), (0, 3, CIRCLE, CIRCLE),
                           (0, 1, CIRCLE, CIRCLE)])
        assert g.edge_pairs() == [(0, 1), (0, 3), (2, 3)]
