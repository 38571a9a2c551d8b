"""Correctness oracles: classic FCI with the reachability superset search,
and a fully exhaustive skeleton search.

Both are exponential in the worst case; they exist to verify the
query-efficient pipeline, not to replace it.
"""

from collections import deque
from itertools import combinations

from .graphs import ARROW, CIRCLE, MixedGraph
from .orientation import apply_fci_rules, orient_v_structures
from .pc import pc_adjacency_search
from .sepsets import SepsetMap


class CapExceededError(ValueError):
    """Brute force requested above the configured size cap."""


def possible_dsep(g, a, b):
    """Nodes reachable from a along paths whose every intermediate vertex is
    a collider or sits in a triangle with its path neighbors.

    This is a guaranteed superset of the ancestral separating set that can
    always separate a nonadjacent pair. Computed by reachability over
    ordered adjacent-vertex pairs; excludes a and b.
    """
    reach = set()
    seen = set()
    queue = deque((a, w) for w in sorted(g.adj(a)))
    while queue:
        u, v = queue.popleft()
        if (u, v) in seen:
            continue
        seen.add((u, v))
        reach.add(v)
        for w in sorted(g.adj(v)):
            if w == u:
                continue
            collider = g.mark(v, u) == ARROW and g.mark(v, w) == ARROW
            triangle = g.has_edge(u, w)
            if collider or triangle:
                queue.append((v, w))
    return frozenset(reach - {a, b})


def exhaustive_skeleton(oracle, n_vars=None, cap=14):
    """Ground-truth skeleton: a pair is adjacent iff no subset of the other
    observed variables separates it. Tests all subsets per pair, sizes
    ascending, so stored sets are minimal. Refuses above the cap."""
    if n_vars is None:
        n_vars = oracle.n_vars
    if n_vars > cap:
        raise CapExceededError(
            "exhaustive search over %d variables exceeds the cap %d" % (n_vars, cap))
    sepsets = SepsetMap()
    edges = []
    with oracle.stage("reference"):
        for x, y in combinations(range(n_vars), 2):
            rest = [v for v in range(n_vars) if v != x and v != y]
            found = None
            for size in range(len(rest) + 1):
                for zs in combinations(rest, size):
                    if oracle.query(x, y, frozenset(zs)):
                        found = (frozenset(zs), size)
                        break
                if found:
                    break
            if found:
                sepsets.set(x, y, found[0], found[1])
            else:
                edges.append((x, y, CIRCLE, CIRCLE))
    names = oracle.names if oracle.names is not None else None
    return MixedGraph(n_vars, edges, names=names), sepsets


def _pdsep_stage(pi0, sepsets, oracle):
    """Remove every edge separable by a subset of its reachability superset;
    subsets are tested sizes ascending, both endpoints' sets tried."""
    removed = []
    with oracle.stage("reference"):
        for a, b in pi0.edge_pairs():
            pd_a = sorted(possible_dsep(pi0, a, b) - {b})
            pd_b = sorted(possible_dsep(pi0, b, a) - {a})
            found = None
            tested = set()
            for size in range(max(len(pd_a), len(pd_b)) + 1):
                for side in (pd_a, pd_b):
                    if len(side) < size:
                        continue
                    for zs in combinations(side, size):
                        fz = frozenset(zs)
                        if fz in tested:
                            continue
                        tested.add(fz)
                        if oracle.query(a, b, fz):
                            found = (fz, size)
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                sepsets.set(a, b, found[0], found[1])
                removed.append((a, b))
    return removed


def fci_reference(oracle, n_vars=None, k=None):
    """Classic two-stage constraint-based search: adjacency search, collider
    orientation, exhaustive subset search over the reachability supersets,
    then re-orientation from scratch and the complete rule set.

    Returns (pag, skeleton, sepsets, edges_removed_per_stage).
    """
    if n_vars is None:
        n_vars = oracle.n_vars
    skeleton, sepsets = pc_adjacency_search(oracle, n_vars, k)
    pi0 = orient_v_structures(skeleton, sepsets)
    removed = _pdsep_stage(pi0, sepsets, oracle)
    builder = skeleton.builder()
    for a, b in removed:
        builder.remove_edge(a, b)
    final_skeleton = builder.build()
    pag = orient_v_structures(final_skeleton, sepsets)
    with oracle.stage("orientation"):
        pag = apply_fci_rules(pag, sepsets)
    stage_removals = {
        "pc_search": n_vars * (n_vars - 1) // 2 - skeleton.n_edges,
        "reference": len(removed),
    }
    return pag, final_skeleton, sepsets, stage_removals
