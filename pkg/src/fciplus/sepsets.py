"""Storage for one minimal separating set per eliminated pair."""


class SepsetMap:
    """Partial map from unordered pairs {x, y} to a stored separating set.

    Each entry also records the search level at which the set was found
    (the set size, for entries inserted after the level-wise search). The
    invariant maintained by the callers: an entry exists iff the pair is
    nonadjacent in the current working graph, and the stored set separates
    the pair minimally.
    """

    def __init__(self):
        self._sets = {}

    @staticmethod
    def _key(x, y):
        if x == y:
            raise ValueError("sepset pairs must have distinct endpoints")
        return (x, y) if x < y else (y, x)

    def set(self, x, y, zs, level):
        self._sets[self._key(x, y)] = (frozenset(zs), level)

    def has(self, x, y):
        return self._key(x, y) in self._sets

    def get(self, x, y):
        """The stored separating set, or None if the pair has no entry."""
        entry = self._sets.get(self._key(x, y))
        return entry[0] if entry is not None else None

    def level(self, x, y):
        entry = self._sets.get(self._key(x, y))
        return entry[1] if entry is not None else None

    def pairs(self):
        return sorted(self._sets)

    def items(self):
        """Sorted (pair, set, level) triples."""
        return [(p, self._sets[p][0], self._sets[p][1]) for p in sorted(self._sets)]

    def copy(self):
        out = SepsetMap()
        out._sets = dict(self._sets)
        return out

    def __len__(self):
        return len(self._sets)

    def __contains__(self, pair):
        return self._key(*pair) in self._sets

    def to_json_dict(self):
        return [
            {"a": a, "b": b, "sepset": sorted(zs), "level": lvl}
            for (a, b), zs, lvl in self.items()
        ]

    @classmethod
    def from_json_dict(cls, entries):
        out = cls()
        for e in entries:
            out.set(e["a"], e["b"], e["sepset"], e["level"])
        return out

    def __repr__(self):
        return "SepsetMap(%d pairs)" % len(self._sets)
