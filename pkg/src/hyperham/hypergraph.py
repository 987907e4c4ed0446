"""k-uniform hypergraphs on dense integer vertices.

Vertices are 0..n-1.  Edges are kept as sorted k-tuples in a frozenset;
for n <= 24 a colex-rank bitset is also built so the exact solvers get
O(1) membership in their inner loops.  Set-valued arguments are validated
here, at the API boundary, never inside hot loops.

Instances are immutable from the caller's perspective.  The lazy
co-degree index is built under a lock, so a single instance can be shared
read-only across parallel search workers.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

Edge = tuple[int, ...]
VertexSet = frozenset[int]

BITSET_MAX_N = 24


def colex_rank(edge: Sequence[int]) -> int:
    """Rank of a strictly increasing vertex tuple in colex order."""
    return sum(comb(v, i + 1) for i, v in enumerate(edge))


def colex_unrank(rank: int, k: int) -> Edge:
    """Strictly increasing k-tuple with the given colex rank."""
    out = []
    for i in range(k, 0, -1):
        v = i - 1
        while comb(v + 1, i) <= rank:
            v += 1
        out.append(v)
        rank -= comb(v, i)
    return tuple(reversed(out))


def validate_partite(parts: Sequence[frozenset[int]]) -> None:
    """Require pairwise-disjoint parts."""
    seen: set[int] = set()
    for i, p in enumerate(parts):
        if seen & p:
            raise ValueError(f"parts are not pairwise disjoint (part {i})")
        seen |= p


class Hypergraph:
    """A k-uniform hypergraph with degree and density queries."""

    __slots__ = ("n", "k", "edges", "_bitset", "_codegree_index", "_within_cache", "_lock")

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]]):
        if k < 2:
            raise ValueError("uniformity k must be >= 2")
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        canon: set[Edge] = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != k or len(set(t)) != k:
                raise ValueError(f"edge {t} does not have exactly {k} distinct vertices")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"edge {t} out of vertex range 0..{n - 1}")
            canon.add(t)
        self.n = n
        self.k = k
        self.edges: frozenset[Edge] = frozenset(canon)
        self._bitset: int | None = None
        if n <= BITSET_MAX_N:
            bits = 0
            for t in canon:
                bits |= 1 << colex_rank(t)
            self._bitset = bits
        self._codegree_index: dict[Edge, int] | None = None
        self._within_cache: dict = {}
        self._lock = threading.Lock()

    # -- basic queries ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, vs: Iterable[int]) -> bool:
        t = tuple(sorted(vs))
        if len(t) != self.k:
            return False
        if self._bitset is not None:
            return bool(self._bitset >> colex_rank(t) & 1)
        return t in self.edges

    def _check_vertex_set(self, S: Iterable[int]) -> frozenset[int]:
        fs = frozenset(S)
        for v in fs:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range 0..{self.n - 1}")
        return fs

    def degree(self, S: Iterable[int]) -> int:
        """Number of (k-|S|)-sets Y with S united Y an edge.  Needs |S| < k."""
        fs = self._check_vertex_set(S)
        if len(fs) >= self.k:
            raise ValueError(f"degree query needs |S| < k, got |S|={len(fs)}")
        if len(fs) == self.k - 1:
            return self.codegree(fs)
        return sum(1 for e in self.edges if fs <= set(e))

    def codegree(self, S: Iterable[int]) -> int:
        """Degree of a (k-1)-set, served from the lazy co-degree index."""
        t = tuple(sorted(S))
        if len(t) != self.k - 1:
            raise ValueError("codegree is defined for (k-1)-sets")
        idx = self._codegree_index
        if idx is None:
            idx = self._build_codegree_index()
        return idx.get(t, 0)

    def _build_codegree_index(self) -> dict[Edge, int]:
        with self._lock:
            if self._codegree_index is None:
                idx: dict[Edge, int] = {}
                for e in self.edges:
                    for t in combinations(e, self.k - 1):
                        idx[t] = idx.get(t, 0) + 1
                self._codegree_index = idx
        return self._codegree_index

    def min_ell_degree(self, ell: int) -> int:
        """Minimum of degree(S) over all ell-sets S.  For ell=k-1 this is
        the minimum co-degree."""
        if not 1 <= ell < self.k:
            raise ValueError(f"need 1 <= ell < k, got ell={ell}")
        if self.n < ell:
            raise ValueError("fewer vertices than ell")
        counts: dict[Edge, int] = {}
        for e in self.edges:
            for t in combinations(e, ell):
                counts[t] = counts.get(t, 0) + 1
        if len(counts) < comb(self.n, ell):
            return 0
        return min(counts.values())

    def induced_edge_count(self, A: Iterable[int]) -> int:
        """Number of edges fully contained in A."""
        fs = self._check_vertex_set(A)
        return sum(1 for e in self.edges if fs.issuperset(e))

    def density(self, parts: Sequence[frozenset[int]]) -> Fraction:
        """Crossing-edge count over the product of part sizes, exact."""
        if len(parts) != self.k:
            raise ValueError(f"need exactly k={self.k} parts")
        for p in parts:
            self._check_vertex_set(p)
            if not p:
                raise ValueError("density needs nonempty parts")
        validate_partite(parts)
        crossing = self.crossing_edge_count(parts)
        denom = 1
        for p in parts:
            denom *= len(p)
        return Fraction(crossing, denom)

    def crossing_edge_count(self, parts: Sequence[frozenset[int]]) -> int:
        """Edges with exactly one vertex in each part."""
        where: dict[int, int] = {}
        for i, p in enumerate(parts):
            for v in p:
                where[v] = i
        count = 0
        for e in self.edges:
            hit = 0
            ok = True
            for v in e:
                i = where.get(v)
                if i is None:
                    ok = False
                    break
                bit = 1 << i
                if hit & bit:
                    ok = False
                    break
                hit |= bit
            if ok:
                count += 1
        return count

    def degree_into(self, S: Iterable[int], pattern: Sequence[tuple[frozenset[int], int]]) -> int:
        """Edges containing S whose remaining k-|S| vertices realize the
        pattern: exactly count_i of them inside set_i.

        Pattern sets must be pairwise disjoint and disjoint from S, and the
        counts must sum to k-|S|.
        """
        fs = self._check_vertex_set(S)
        sets = [frozenset(p) for p, _ in pattern]
        counts = [c for _, c in pattern]
        validate_partite(sets)
        for p in sets:
            if p & fs:
                raise ValueError("pattern sets must be disjoint from S")
        if any(c < 0 for c in counts) or sum(counts) != self.k - len(fs):
            raise ValueError("pattern counts must be >= 0 and sum to k - |S|")
        total = 0
        for e in self.edges:
            rest = set(e) - fs
            if len(rest) != self.k - len(fs):
                continue
            got = [len(rest & p) for p in sets]
            if got == counts and sum(got) == len(rest):
                total += 1
        return total

    def pattern_total(self, S: Iterable[int], pattern: Sequence[tuple[frozenset[int], int]]) -> int:
        """Binomial total of pattern-conforming k-sets containing S; the
        complementary non-edge count is this minus degree_into."""
        fs = self._check_vertex_set(S)
        out = 1
        for p, c in pattern:
            out *= comb(len(frozenset(p) - fs), c)
        return out

    def degree_within(self, L: frozenset[int], B: frozenset[int]) -> int:
        """Number of (k-|L|)-sets Y inside B with L united Y an edge.
        Memoized; the goodness predicates hammer this query."""
        key = (L, B)
        cached = self._within_cache.get(key)
        if cached is not None:
            return cached
        count = 0
        for e in self.edges:
            se = set(e)
            if L <= se and se - L <= B:
                count += 1
        self._within_cache[key] = count
        return count

    def link(self, v: int) -> list[Edge]:
        """(k-1)-sets completing v to an edge."""
        self._check_vertex_set([v])
        return sorted(tuple(w for w in e if w != v) for e in self.edges if v in e)

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        """A new instance with extra edges; lazy indexes are not carried over."""
        return Hypergraph(self.n, self.k, list(self.edges) + [tuple(e) for e in extra])

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Hypergraph":
        return cls(int(obj["n"]), int(obj["k"]), [tuple(e) for e in obj["edges"]])

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines += [" ".join(map(str, e)) for e in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Hypergraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty edge-list text")
        n, k = map(int, lines[0].split())
        edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
        return cls(n, k, edges)

    def save(self, path: str | Path) -> None:
        p = Path(path)
        if p.suffix == ".json":
            p.write_text(json.dumps(self.to_json_obj(), sort_keys=True, indent=1) + "\n")
        else:
            p.write_text(self.to_edge_list())

    @classmethod
    def load(cls, path: str | Path) -> "Hypergraph":
        p = Path(path)
        text = p.read_text()
        if p.suffix == ".json" or text.lstrip().startswith("{"):
            return cls.from_json_obj(json.loads(text))
        return cls.from_edge_list(text)

    def __getstate__(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": sorted(self.edges)}

    def __setstate__(self, state: dict) -> None:
        self.__init__(state["n"], state["k"], state["edges"])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.n == other.n
            and self.k == other.k
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, m={self.edge_count})"
