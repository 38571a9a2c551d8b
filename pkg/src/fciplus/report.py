"""Per-run records and structural comparison of outputs.

A RunReport captures everything needed to audit and replay a run: the
output graph, per-stage query counters, stage timings, the candidate-link
log, and the results of the built-in invariant checks. Reports serialize to
one JSON object per line; replaying the same seed and configuration must
reproduce the report bit-identically up to the timing fields.
"""

from dataclasses import dataclass, field
import hashlib
import json

from .graphs import MixedGraph


def graph_hash(graph):
    """Stable hex digest of a graph's canonical JSON (MixedGraph or
    CausalDag)."""
    return hashlib.sha256(graph.to_json().encode()).hexdigest()[:16]


@dataclass
class RunReport:
    algorithm: str
    n: int
    names: list
    pag: MixedGraph
    stats: dict
    config: dict = field(default_factory=dict)
    seed: int = None
    input_hash: str = None
    timings: dict = field(default_factory=dict)
    dsep_log: dict = None
    checks: dict = field(default_factory=dict)
    edges_removed: dict = field(default_factory=dict)

    def checks_ok(self):
        return all(c.get("ok", True) for c in self.checks.values())

    def to_json_dict(self):
        return {
            "algorithm": self.algorithm,
            "n": self.n,
            "names": list(self.names),
            "pag": self.pag.to_json_dict(),
            "stats": self.stats,
            "config": self.config,
            "seed": self.seed,
            "input_hash": self.input_hash,
            "timings": self.timings,
            "dsep_log": self.dsep_log,
            "checks": self.checks,
            "edges_removed": self.edges_removed,
        }

    def to_json_line(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d):
        return cls(
            algorithm=d["algorithm"], n=d["n"], names=d["names"],
            pag=MixedGraph.from_json_dict(d["pag"]), stats=d["stats"],
            config=d.get("config", {}), seed=d.get("seed"),
            input_hash=d.get("input_hash"), timings=d.get("timings", {}),
            dsep_log=d.get("dsep_log"), checks=d.get("checks", {}),
            edges_removed=d.get("edges_removed", {}),
        )

    @classmethod
    def from_json_line(cls, line):
        return cls.from_json_dict(json.loads(line))

    def replay_key(self):
        """Everything that must be bit-identical across replays."""
        d = self.to_json_dict()
        d.pop("timings")
        return json.dumps(d, sort_keys=True)


def diff_graphs(a, b):
    """Structural diff of two graphs over the same variable table: edges
    present on one side only, plus per-endpoint mark differences."""
    if a.n != b.n or a.names != b.names:
        raise ValueError("graphs have different variable tables")
    pa, pb = set(a.edge_pairs()), set(b.edge_pairs())
    only_a = sorted(pa - pb)
    only_b = sorted(pb - pa)
    mark_diffs = []
    for x, y in sorted(pa & pb):
        ma = (a.mark(x, y), a.mark(y, x))
        mb = (b.mark(x, y), b.mark(y, x))
        if ma != mb:
            mark_diffs.append((x, y, ma, mb))
    return {"only_a": only_a, "only_b": only_b, "mark_diffs": mark_diffs}


def compare_runs(a, b):
    """Diff two reports; identical PAGs yield an empty diff.

    Returns a dict with the structural diff, per-stage query deltas, and an
    `identical` flag for the graphs.
    """
    d = diff_graphs(a.pag, b.pag)
    identical = not (d["only_a"] or d["only_b"] or d["mark_diffs"])
    stats_delta = {}
    for stage in set(a.stats) | set(b.stats):
        qa = a.stats.get(stage, {}).get("queries", 0)
        qb = b.stats.get(stage, {}).get("queries", 0)
        if qa or qb:
            stats_delta[stage] = qb - qa
    return {
        "identical": identical,
        "edges_only_in_a": d["only_a"],
        "edges_only_in_b": d["only_b"],
        "mark_diffs": d["mark_diffs"],
        "stats_delta": stats_delta,
    }


def format_diff(diff, names):
    lines = []
    for x, y in diff["edges_only_in_a"]:
        lines.append("edge only in a: %s - %s" % (names[x], names[y]))
    for x, y in diff["edges_only_in_b"]:
        lines.append("edge only in b: %s - %s" % (names[x], names[y]))
    for x, y, ma, mb in diff["mark_diffs"]:
        lines.append("marks differ on %s - %s: a=%s/%s b=%s/%s"
                     % (names[x], names[y], ma[0], ma[1], mb[0], mb[1]))
    return "\n".join(lines)
