"""Conditional-independence oracles and per-stage query accounting.

Every search stage runs its queries under a named stage so the counters can
be partitioned afterwards; `query` answers True for independence. DsepOracle
answers from d-separation on a ground-truth causal DAG (conditioning on the
selection set is implicit). GaussOracle answers from partial correlations of
Gaussian samples via the Fisher z transform.
"""

from contextlib import contextmanager
from math import log, sqrt
from statistics import NormalDist
import warnings

import numpy as np

from .graphs import d_separated

STAGES = ("pc_search", "augment", "dsep_search", "minimal_dsep",
          "orientation", "reference")
_PHI_INV = NormalDist().inv_cdf


class OracleError(ValueError):
    """Invalid oracle input or query."""


class StageStats:
    __slots__ = ("queries", "distinct", "max_cond_size")

    def __init__(self):
        self.queries = 0
        self.distinct = 0
        self.max_cond_size = 0

    def to_dict(self):
        return {"queries": self.queries, "distinct": self.distinct,
                "max_cond_size": self.max_cond_size}


class OracleStats:
    """Counters of independence queries, partitioned by pipeline stage.

    `queries` counts every call (memoized hits included); `distinct` counts
    keys not previously queried within the same stage.
    """

    def __init__(self):
        self.stages = {s: StageStats() for s in STAGES}
        self._stage_keys = {s: set() for s in STAGES}

    def record(self, stage, key, cond_size):
        st = self.stages[stage]
        st.queries += 1
        if cond_size > st.max_cond_size:
            st.max_cond_size = cond_size
        seen = self._stage_keys[stage]
        if key not in seen:
            seen.add(key)
            st.distinct += 1

    def total_queries(self):
        return sum(st.queries for st in self.stages.values())

    def total_distinct(self):
        return len(set().union(*self._stage_keys.values()))

    def max_cond_size(self):
        return max(st.max_cond_size for st in self.stages.values())

    def to_dict(self):
        return {s: st.to_dict() for s, st in self.stages.items()}

    def snapshot(self):
        return self.to_dict()


class IndependenceOracle:
    """Base class: deterministic, symmetric-in-(x, y) independence queries.

    Subclasses implement _decide(x, y, zkey) for x < y and zkey a frozenset.
    """

    def __init__(self, n_vars, names=None, memo=True):
        self.n_vars = n_vars
        self.names = tuple(names) if names is not None else None
        self.memo_enabled = memo
        self._memo = {}
        self.stats = OracleStats()
        self._stage = "reference"

    @contextmanager
    def stage(self, name):
        if name not in STAGES:
            raise OracleError("unknown stage %r" % name)
        prev = self._stage
        self._stage = name
        try:
            yield self
        finally:
            self._stage = prev

    @property
    def current_stage(self):
        return self._stage

    def query(self, x, y, z):
        """True iff x is independent of y given z under the backing model."""
        zkey = frozenset(z)
        self._validate(x, y, zkey)
        if x > y:
            x, y = y, x
        key = (x, y, zkey)
        self.stats.record(self._stage, key, len(zkey))
        if self.memo_enabled:
            if key not in self._memo:
                self._memo[key] = self._decide(x, y, zkey)
            return self._memo[key]
        return self._decide(x, y, zkey)

    def _validate(self, x, y, zkey):
        for v in (x, y, *zkey):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < self.n_vars:
                raise OracleError("variable id %r out of range 0..%d"
                                  % (v, self.n_vars - 1))
        if x == y:
            raise OracleError("x and y must differ")
        if x in zkey or y in zkey:
            raise OracleError("x and y must not appear in the conditioning set")

    def _decide(self, x, y, zkey):
        raise NotImplementedError


class DsepOracle(IndependenceOracle):
    """Exact oracle backed by d-separation on a causal DAG.

    Queries are over the observed variables only, reindexed to 0..N-1 in
    ascending order of their dag ids; the selection set is added to every
    conditioning set implicitly.
    """

    def __init__(self, dag, memo=True):
        self.dag = dag
        self._obs = dag.observed
        self._sel = frozenset(dag.selection)
        names = tuple(dag.names[o] for o in self._obs)
        super().__init__(len(self._obs), names=names, memo=memo)

    def _decide(self, x, y, zkey):
        zdag = frozenset(self._obs[v] for v in zkey) | self._sel
        return d_separated(self.dag, self._obs[x], self._obs[y], zdag)


def fisher_z_test(cov, n_samples, x, y, z, alpha):
    """Partial-correlation independence test for Gaussian data.

    Computes the partial correlation of x and y given z by inverting the
    covariance submatrix over {x, y} | z, then compares the Fisher
    z statistic sqrt(n-|z|-3) * |atanh(rho)| against the normal quantile
    Phi^-1(1 - alpha/2). Returns True for independence. A singular
    submatrix is reported as a warning and treated as dependent.
    """
    z = sorted(z)
    if n_samples <= len(z) + 3:
        raise OracleError("need more than |z|+3 samples (got %d for |z|=%d)"
                          % (n_samples, len(z)))
    idx = [x, y] + z
    sub = np.asarray(cov)[np.ix_(idx, idx)]
    try:
        prec = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        warnings.warn("singular covariance submatrix for (%d, %d | %r); "
                      "treating as dependent" % (x, y, z))
        return False
    denom = prec[0, 0] * prec[1, 1]
    if denom <= 0:
        warnings.warn("ill-conditioned covariance submatrix for (%d, %d | %r); "
                      "treating as dependent" % (x, y, z))
        return False
    rho = -prec[0, 1] / sqrt(denom)
    if not np.isfinite(rho) or abs(rho) >= 1.0:
        return False
    stat = sqrt(n_samples - len(z) - 3) * abs(0.5 * log((1 + rho) / (1 - rho)))
    return stat <= _PHI_INV(1 - alpha / 2)


class GaussOracle(IndependenceOracle):
    """Sample-data oracle: Fisher z test on a sample covariance matrix.

    Provided for running the pipelines on real data; no exactness guarantee.
    Constant columns are rejected at load time.
    """

    def __init__(self, data, names=None, alpha=0.01, memo=True):
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] < 2:
            raise OracleError("data must be a 2-d array with at least 2 rows")
        spans = data.max(axis=0) - data.min(axis=0)
        dead = [int(i) for i in np.nonzero(spans == 0)[0]]
        if dead:
            raise OracleError("constant columns %r cannot be tested" % dead)
        self.n_samples = data.shape[0]
        self.cov = np.cov(data, rowvar=False)
        self.alpha = alpha
        self.n_test_errors = 0
        super().__init__(data.shape[1], names=names, memo=memo)

    @classmethod
    def from_csv(cls, path, alpha=0.01, memo=True):
        """Load a CSV with a header row of variable names and numeric rows."""
        with open(path) as fh:
            header = fh.readline().strip()
            names = [c.strip() for c in header.split(",")]
            try:
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
            except ValueError as exc:
                raise OracleError("non-numeric data in %s: %s" % (path, exc))
        if data.shape[1] != len(names):
            raise OracleError("header has %d columns but data has %d"
                              % (len(names), data.shape[1]))
        return cls(data, names=names, alpha=alpha, memo=memo)

    def _decide(self, x, y, zkey):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = fisher_z_test(self.cov, self.n_samples, x, y,
                                   sorted(zkey), self.alpha)
        if caught:
            self.n_test_errors += len(caught)
        return result
