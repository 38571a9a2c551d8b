"""Mixed graphs, causal DAGs, separation criteria, and latent projection.

Variables are dense integer ids 0..n-1; iteration is always in ascending id
order so that every run is reproducible. Graphs are immutable values: edits
go through MixedGraphBuilder or the with_*/without_* helpers, which return
new graphs.

Edge mark conventions: an edge {a, b} carries one mark per endpoint. A
directed edge a -> b has TAIL at a and ARROW at b; a <-> b has ARROW at both
ends; a -- b has TAIL at both ends. An arrowhead at a on the edge to b reads
"a is not an ancestor of b (or of the selection set)".
"""

from collections import deque
from itertools import combinations
import json

TAIL = "tail"
ARROW = "arrow"
CIRCLE = "circle"
MARKS = (TAIL, ARROW, CIRCLE)


class GraphError(ValueError):
    """Invalid graph input or construction."""


class ModelViolationError(GraphError):
    """An orientation step tried to overwrite a committed edge mark.

    Impossible under a faithful exact oracle; signals inconsistent input.
    """


def _pair(a, b):
    return (a, b) if a < b else (b, a)


def _check_var(v, n):
    if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
        raise GraphError("unknown variable id %r (graph has %d variables)" % (v, n))


def default_names(n, prefix="X"):
    return tuple("%s%d" % (prefix, i) for i in range(n))


class MixedGraph:
    """Immutable graph with per-endpoint marks (tail / arrow / circle).

    Represents skeletons, augmented skeletons, MAGs and PAGs. At most one
    edge per pair, no self loops. `edges` is an iterable of tuples
    (a, b, mark_at_a, mark_at_b).
    """

    __slots__ = ("n", "names", "_marks", "_adj", "_hash", "_cache")

    def __init__(self, n, edges=(), names=None):
        if n < 0:
            raise GraphError("variable count must be >= 0")
        self.n = n
        self.names = tuple(names) if names is not None else default_names(n)
        if len(self.names) != n:
            raise GraphError("expected %d names, got %d" % (n, len(self.names)))
        marks = {}
        adj = [set() for _ in range(n)]
        for a, b, ma, mb in edges:
            _check_var(a, n)
            _check_var(b, n)
            if a == b:
                raise GraphError("self loop at %d" % a)
            if ma not in MARKS or mb not in MARKS:
                raise GraphError("bad endpoint mark %r/%r" % (ma, mb))
            if a > b:
                a, b, ma, mb = b, a, mb, ma
            if (a, b) in marks:
                raise GraphError("duplicate edge {%d,%d}" % (a, b))
            marks[(a, b)] = (ma, mb)
            adj[a].add(b)
            adj[b].add(a)
        self._marks = marks
        self._adj = tuple(frozenset(s) for s in adj)
        self._hash = None
        self._cache = {}

    # -- basic queries ----------------------------------------------------

    def edges(self):
        """Sorted list of (a, b, mark_at_a, mark_at_b) with a < b."""
        return [(a, b) + self._marks[(a, b)] for a, b in sorted(self._marks)]

    def edge_pairs(self):
        return sorted(self._marks)

    @property
    def n_edges(self):
        return len(self._marks)

    def adj(self, x):
        _check_var(x, self.n)
        return self._adj[x]

    def degree(self, x):
        return len(self.adj(x))

    def max_degree(self):
        return max((len(s) for s in self._adj), default=0)

    def has_edge(self, x, y):
        _check_var(x, self.n)
        _check_var(y, self.n)
        return _pair(x, y) in self._marks

    def mark(self, x, y):
        """Mark at x on the edge {x, y}."""
        key = _pair(x, y)
        if key not in self._marks:
            raise GraphError("no edge {%d,%d}" % (x, y))
        ma, mb = self._marks[key]
        return ma if x == key[0] else mb

    def is_directed_edge(self, x, y):
        """True iff the edge x -> y exists (tail at x, arrow at y)."""
        key = _pair(x, y)
        if key not in self._marks:
            return False
        return self.mark(x, y) == TAIL and self.mark(y, x) == ARROW

    def is_bidirected(self, x, y):
        key = _pair(x, y)
        if key not in self._marks:
            return False
        return self._marks[key] == (ARROW, ARROW)

    def parents(self, x):
        return frozenset(v for v in self.adj(x) if self.is_directed_edge(v, x))

    def children(self, x):
        return frozenset(v for v in self.adj(x) if self.is_directed_edge(x, v))

    # -- ancestry ----------------------------------------------------------

    def ancestors(self, xs):
        """xs plus every node with a directed path into some member of xs.

        Directed path means every edge is traversed tail-at-source,
        arrowhead-at-target.
        """
        seed = set()
        for v in xs:
            _check_var(v, self.n)
            seed.add(v)
        out = set(seed)
        stack = list(seed)
        while stack:
            v = stack.pop()
            for p in self.adj(v):
                if p not in out and self.is_directed_edge(p, v):
                    out.add(p)
                    stack.append(p)
        return frozenset(out)

    def descendants(self, xs):
        seed = set()
        for v in xs:
            _check_var(v, self.n)
            seed.add(v)
        out = set(seed)
        stack = list(seed)
        while stack:
            v = stack.pop()
            for c in self.adj(v):
                if c not in out and self.is_directed_edge(v, c):
                    out.add(c)
                    stack.append(c)
        return frozenset(out)

    # -- ancestral / MAG checks ---------------------------------------------

    def is_ancestral(self):
        """Arrowhead at x on an edge to y implies x is not an ancestor of y,
        and no arrowhead points at a node with an undirected edge."""
        if "ancestral" not in self._cache:
            self._cache["ancestral"] = self._compute_ancestral()
        return self._cache["ancestral"]

    def _compute_ancestral(self):
        undirected_nodes = set()
        for (a, b), (ma, mb) in self._marks.items():
            if ma == TAIL and mb == TAIL:
                undirected_nodes.add(a)
                undirected_nodes.add(b)
        for (a, b), (ma, mb) in self._marks.items():
            if ma == ARROW and (a in self.ancestors([b]) - {b} or a in undirected_nodes):
                return False
            if mb == ARROW and (b in self.ancestors([a]) - {a} or b in undirected_nodes):
                return False
        return True

    def has_circles(self):
        return any(CIRCLE in ms for ms in self._marks.values())

    def require_mag(self):
        if self.has_circles():
            raise GraphError("graph has circle marks, not a MAG")
        if not self.is_ancestral():
            raise GraphError("graph is not ancestral")

    # -- copies and edits ---------------------------------------------------

    def builder(self):
        return MixedGraphBuilder(self)

    def with_edge(self, a, b, ma, mb):
        b_ = self.builder()
        b_.add_edge(a, b, ma, mb)
        return b_.build()

    def without_edge(self, a, b):
        b_ = self.builder()
        b_.remove_edge(a, b)
        return b_.build()

    # -- serialization ------------------------------------------------------

    def to_json_dict(self):
        return {
            "n": self.n,
            "names": list(self.names),
            "observed": list(range(self.n)),
            "latent": [],
            "selection": [],
            "edges": [
                {"a": a, "b": b, "mark_a": ma, "mark_b": mb}
                for a, b, ma, mb in self.edges()
            ],
        }

    @classmethod
    def from_json_dict(cls, d):
        edges = [(e["a"], e["b"], e["mark_a"], e["mark_b"]) for e in d["edges"]]
        return cls(d["n"], edges, names=d.get("names"))

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s):
        return cls.from_json_dict(json.loads(s))

    def to_dot(self, graph_name="g"):
        """DOT export: arrowhead -> "normal", tail -> "none", circle -> "odot"."""
        shape = {ARROW: "normal", TAIL: "none", CIRCLE: "odot"}
        lines = ["digraph %s {" % graph_name, "  edge [dir=both];"]
        for i, name in enumerate(self.names):
            lines.append('  n%d [label="%s"];' % (i, name))
        for a, b, ma, mb in self.edges():
            lines.append(
                "  n%d -> n%d [arrowtail=%s, arrowhead=%s];"
                % (a, b, shape[ma], shape[mb])
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.names == other.names
            and self._marks == other._marks
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.names, frozenset(self._marks.items())))
        return self._hash

    def __repr__(self):
        return "MixedGraph(n=%d, edges=%d)" % (self.n, self.n_edges)


class MixedGraphBuilder:
    """Mutable editor producing new MixedGraph values.

    Mark updates are monotone: CIRCLE may become ARROW or TAIL; overwriting
    a committed ARROW with TAIL (or vice versa) raises ModelViolationError.
    """

    def __init__(self, graph=None, n=None, names=None):
        if graph is not None:
            self.n = graph.n
            self.names = graph.names
            self._marks = dict(graph._marks)
        else:
            self.n = n
            self.names = tuple(names) if names is not None else default_names(n)
            self._marks = {}

    def has_edge(self, x, y):
        return _pair(x, y) in self._marks

    def mark(self, x, y):
        key = _pair(x, y)
        ma, mb = self._marks[key]
        return ma if x == key[0] else mb

    def add_edge(self, a, b, ma, mb):
        if a > b:
            a, b, ma, mb = b, a, mb, ma
        if (a, b) in self._marks:
            raise GraphError("edge {%d,%d} already present" % (a, b))
        self._marks[(a, b)] = (ma, mb)

    def remove_edge(self, a, b):
        key = _pair(a, b)
        if key not in self._marks:
            raise GraphError("no edge {%d,%d} to remove" % (a, b))
        del self._marks[key]

    def set_mark(self, x, y, new_mark):
        """Set the mark at x on edge {x, y}; returns True if it changed."""
        key = _pair(x, y)
        if key not in self._marks:
            raise GraphError("no edge {%d,%d}" % (x, y))
        ma, mb = self._marks[key]
        cur = ma if x == key[0] else mb
        if cur == new_mark:
            return False
        if cur != CIRCLE:
            raise ModelViolationError(
                "mark conflict at %d on edge {%d,%d}: %s -> %s"
                % (x, key[0], key[1], cur, new_mark)
            )
        if x == key[0]:
            self._marks[key] = (new_mark, mb)
        else:
            self._marks[key] = (ma, new_mark)
        return True

    def build(self):
        return MixedGraph(
            self.n,
            [(a, b, ma, mb) for (a, b), (ma, mb) in self._marks.items()],
            names=self.names,
        )


def complete_circle_graph(n, names=None):
    """Fully connected graph with circle marks at every endpoint."""
    edges = [(a, b, CIRCLE, CIRCLE) for a, b in combinations(range(n), 2)]
    return MixedGraph(n, edges, names=names)


class CausalDag:
    """Ground-truth directed acyclic graph over observed + latent + selection
    variables. Edges are (parent, child) pairs."""

    __slots__ = (
        "n", "names", "edges", "observed", "latent", "selection",
        "_parents", "_children", "_an_single", "_an_selection",
    )

    def __init__(self, n, edges, observed, latent=(), selection=(), names=None):
        self.n = n
        self.names = tuple(names) if names is not None else default_names(n)
        if len(self.names) != n:
            raise GraphError("expected %d names, got %d" % (n, len(self.names)))
        obs, lat, sel = set(observed), set(latent), set(selection)
        for v in obs | lat | sel:
            _check_var(v, n)
        if obs & lat or obs & sel or lat & sel:
            raise GraphError("observed/latent/selection sets overlap")
        if obs | lat | sel != set(range(n)):
            raise GraphError("observed/latent/selection must partition all variables")
        self.observed = tuple(sorted(obs))
        self.latent = tuple(sorted(lat))
        self.selection = tuple(sorted(sel))

        parents = [[] for _ in range(n)]
        children = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            _check_var(u, n)
            _check_var(v, n)
            if u == v:
                raise GraphError("self loop at %d" % u)
            if (u, v) in seen:
                raise GraphError("duplicate edge %d -> %d" % (u, v))
            if (v, u) in seen:
                raise GraphError("both %d -> %d and %d -> %d present" % (u, v, v, u))
            seen.add((u, v))
            parents[v].append(u)
            children[u].append(v)
        self.edges = frozenset(seen)
        self._parents = tuple(tuple(sorted(p)) for p in parents)
        self._children = tuple(tuple(sorted(c)) for c in children)
        self._check_acyclic()
        self._an_single = [None] * n
        self._an_selection = None

    def _check_acyclic(self):
        state = [0] * self.n  # 0 unvisited, 1 on stack, 2 done
        for root in range(self.n):
            if state[root]:
                continue
            stack = [(root, 0)]
            state[root] = 1
            while stack:
                v, i = stack[-1]
                if i < len(self._children[v]):
                    stack[-1] = (v, i + 1)
                    c = self._children[v][i]
                    if state[c] == 1:
                        raise GraphError("directed cycle through %d" % c)
                    if state[c] == 0:
                        state[c] = 1
                        stack.append((c, 0))
                else:
                    state[v] = 2
                    stack.pop()

    def parents(self, v):
        _check_var(v, self.n)
        return self._parents[v]

    def children(self, v):
        _check_var(v, self.n)
        return self._children[v]

    def _ancestors_of(self, v):
        if self._an_single[v] is None:
            out = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for p in self._parents[u]:
                    if p not in out:
                        out.add(p)
                        stack.append(p)
            self._an_single[v] = frozenset(out)
        return self._an_single[v]

    def ancestors(self, xs):
        """xs plus all nodes with a directed path into some member of xs."""
        out = set()
        for v in xs:
            _check_var(v, self.n)
            out |= self._ancestors_of(v)
        return frozenset(out)

    def selection_ancestors(self):
        if self._an_selection is None:
            self._an_selection = self.ancestors(self.selection)
        return self._an_selection

    def descendants(self, xs):
        out = set()
        stack = []
        for v in xs:
            _check_var(v, self.n)
            out.add(v)
            stack.append(v)
        while stack:
            u = stack.pop()
            for c in self._children[u]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return frozenset(out)

    def skeleton_pairs(self):
        return sorted(_pair(u, v) for u, v in self.edges)

    def to_mixed(self):
        """The same graph as a MixedGraph (tail at parent, arrow at child)."""
        return MixedGraph(
            self.n,
            [(u, v, TAIL, ARROW) for u, v in sorted(self.edges)],
            names=self.names,
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        return {
            "n": self.n,
            "names": list(self.names),
            "observed": list(self.observed),
            "latent": list(self.latent),
            "selection": list(self.selection),
            "edges": [
                {"a": u, "b": v, "mark_a": TAIL, "mark_b": ARROW}
                for u, v in sorted(self.edges)
            ],
        }

    @classmethod
    def from_json_dict(cls, d):
        edges = []
        for e in d["edges"]:
            if e["mark_a"] != TAIL or e["mark_b"] != ARROW:
                raise GraphError("causal DAG edges must be directed a -> b")
            edges.append((e["a"], e["b"]))
        return cls(
            d["n"], edges, d["observed"], d.get("latent", ()),
            d.get("selection", ()), names=d.get("names"),
        )

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s):
        return cls.from_json_dict(json.loads(s))

    def to_dot(self, graph_name="g"):
        lines = ["digraph %s {" % graph_name]
        lat, sel = set(self.latent), set(self.selection)
        for i, name in enumerate(self.names):
            style = ""
            if i in lat:
                style = ", style=dashed"
            elif i in sel:
                style = ", shape=doublecircle"
            lines.append('  n%d [label="%s"%s];' % (i, name, style))
        for u, v in sorted(self.edges):
            lines.append("  n%d -> n%d;" % (u, v))
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, CausalDag):
            return NotImplemented
        return (
            self.n == other.n
            and self.names == other.names
            and self.edges == other.edges
            and self.observed == other.observed
            and self.latent == other.latent
            and self.selection == other.selection
        )

    def __hash__(self):
        return hash((self.n, self.names, self.edges, self.observed,
                     self.latent, self.selection))

    def __repr__(self):
        return "CausalDag(n=%d, edges=%d, observed=%d, latent=%d, selection=%d)" % (
            self.n, len(self.edges), len(self.observed),
            len(self.latent), len(self.selection),
        )


def ancestors(g, xs):
    """An(xs) in a MixedGraph or CausalDag (directed-path closure)."""
    return g.ancestors(xs)


def d_separated(dag, x, y, z):
    """True iff every path between x and y in the DAG is blocked by z.

    A path is blocked when some noncollider on it is in z, or some collider
    on it has no descendant in z. Reachability implementation (linear in the
    number of edges per query); z may contain any variables of the dag.
    """
    _check_var(x, dag.n)
    _check_var(y, dag.n)
    z = frozenset(z)
    for v in z:
        _check_var(v, dag.n)
    if x == y:
        raise GraphError("x and y must differ")
    if x in z or y in z:
        raise GraphError("x and y must not be in the conditioning set")

    parents = dag._parents
    children = dag._children
    n = dag.n

    # ancestors of z, for collider openings
    anz = bytearray(n)
    stack = []
    for v in z:
        anz[v] = 1
        stack.append(v)
    while stack:
        v = stack.pop()
        for p in parents[v]:
            if not anz[p]:
                anz[p] = 1
                stack.append(p)
    inz = bytearray(n)
    for v in z:
        inz[v] = 1

    # active-trail reachability from x; state 2v+1 = arrived moving up
    visited = bytearray(2 * n)
    stack = [2 * x + 1]
    visited[2 * x + 1] = 1
    while stack:
        code = stack.pop()
        v, up = code >> 1, code & 1
        if v == y:
            return False
        if up:
            if not inz[v]:
                for p in parents[v]:
                    if not visited[2 * p + 1]:
                        visited[2 * p + 1] = 1
                        stack.append(2 * p + 1)
                for c in children[v]:
                    if not visited[2 * c]:
                        visited[2 * c] = 1
                        stack.append(2 * c)
        else:
            if not inz[v]:
                for c in children[v]:
                    if not visited[2 * c]:
                        visited[2 * c] = 1
                        stack.append(2 * c)
            if anz[v]:
                for p in parents[v]:
                    if not visited[2 * p + 1]:
                        visited[2 * p + 1] = 1
                        stack.append(2 * p + 1)
    return True


def m_separated(mag, x, y, z):
    """True iff no m-connecting path joins x and y given z in the MAG.

    A path m-connects when every noncollider on it is outside z and every
    collider on it is an ancestor of z. Reachability over (node, entry-mark)
    states; the input must satisfy the MAG invariants.
    """
    mag.require_mag()
    _check_var(x, mag.n)
    _check_var(y, mag.n)
    z = frozenset(z)
    for v in z:
        _check_var(v, mag.n)
    if x == y:
        raise GraphError("x and y must differ")
    if x in z or y in z:
        raise GraphError("x and y must not be in the conditioning set")

    anz = mag.ancestors(z)
    visited = set()
    queue = deque()
    for w in mag.adj(x):
        queue.append((w, mag.mark(w, x)))
    while queue:
        v, entry = queue.popleft()
        if v == y:
            return False
        if (v, entry) in visited:
            continue
        visited.add((v, entry))
        for w in mag.adj(v):
            out = mag.mark(v, w)
            collider = entry == ARROW and out == ARROW
            if collider:
                if v not in anz:
                    continue
            elif v in z:
                continue
            queue.append((w, mag.mark(w, v)))
    return True


def latent_project(dag):
    """Project a causal DAG onto its observed variables, yielding the MAG.

    Output ids are 0..|observed|-1 in ascending order of the dag's observed
    ids. Two observed variables are adjacent iff no subset of the remaining
    observed variables (together with the selection set) d-separates them;
    equivalently iff conditioning on their joint observed ancestors fails to
    separate them. The mark at a on edge {a, b} is TAIL iff a is an ancestor
    of {b} union the selection set, else ARROW.
    """
    obs = dag.observed
    obs_set = frozenset(obs)
    sel = frozenset(dag.selection)
    an_sel = dag.selection_ancestors()
    edges = []
    for i, a in enumerate(obs):
        an_a = dag.ancestors([a])
        for j in range(i + 1, len(obs)):
            b = obs[j]
            canonical = ((an_a | dag.ancestors([b]) | an_sel) & obs_set) - {a, b}
            if d_separated(dag, a, b, canonical | sel):
                continue
            ma = TAIL if a in dag.ancestors([b]) | an_sel else ARROW
            mb = TAIL if b in an_a | an_sel else ARROW
            edges.append((i, j, ma, mb))
    mag = MixedGraph(len(obs), edges, names=[dag.names[o] for o in obs])
    if not mag.is_ancestral():
        raise RuntimeError("latent projection produced a non-ancestral graph; "
                           "this is a bug")
    return mag
