"""Seeded instance generators.

The tightness construction (space barrier) has a small core A* with every
edge meeting the core, so its minimum co-degree sits exactly one below
n / (s(k-ell)) while no Hamilton ell-cycle exists: a Hamilton ell-cycle
has n/(k-ell) edges, each core vertex lies in at most s of them, and
s * |A*| < n/(k-ell).  The generator emits that counting certificate in
its manifest so the non-Hamiltonicity reason is machine-checkable without
an exhaustive search.

Random models sample by colex-rank iteration rather than rejection, so a
spec plus a seed always reproduces the identical edge set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import ceil, comb

from .hypergraph import Hypergraph, colex_unrank
from .paths import seg_count

FAMILIES = ("complete", "empty", "space_barrier", "barrier_plus_slack",
            "random_uniform", "kpartite_random")


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    from itertools import combinations

    return Hypergraph(n, k, combinations(range(n), k))


def empty_hypergraph(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k, [])


def barrier_core_size(n: int, k: int, ell: int) -> int:
    return ceil(n / (seg_count(k, ell) * (k - ell))) - 1


def space_barrier(n: int, k: int, ell: int) -> Hypergraph:
    """Core A* = {0..c-1} with c = ceil(n/(s(k-ell))) - 1; edges are all
    k-sets meeting the core.  delta_{k-1} = |A*|."""
    s = seg_count(k, ell)
    if n % (k - ell) != 0:
        raise ValueError(f"(k-ell)={k - ell} must divide n={n}")
    if n < s * (k - ell):
        raise ValueError("n/(s(k-ell)) must be at least 1")
    return barrier_plus_slack(n, k, ell, 0)


def barrier_plus_slack(n: int, k: int, ell: int, extra_core: int) -> Hypergraph:
    """Space barrier with the core enlarged by extra_core vertices, so
    delta_{k-1} = ceil(n/(s(k-ell))) - 1 + extra_core."""
    if extra_core < 0:
        raise ValueError("extra_core must be >= 0")
    if n % (k - ell) != 0:
        raise ValueError(f"(k-ell)={k - ell} must divide n={n}")
    core = barrier_core_size(n, k, ell) + extra_core
    if core > n - k + 1:
        raise ValueError("core too large for the co-degree identity")
    from itertools import combinations

    edges = [e for e in combinations(range(n), k) if e[0] < core]
    return Hypergraph(n, k, edges)


def random_codegree_model(n: int, k: int, base: Hypergraph, add_p: float, seed: int) -> Hypergraph:
    """Base plus each absent k-set independently with probability add_p,
    by deterministic rank iteration."""
    if not 0 <= add_p <= 1:
        raise ValueError("add_p must lie in [0, 1]")
    if (base.n, base.k) != (n, k):
        raise ValueError("base must live on the same (n, k)")
    rng = random.Random(seed)
    extra = []
    for rank in range(comb(n, k)):
        t = colex_unrank(rank, k)
        u = rng.random()
        if t not in base.edges and u < add_p:
            extra.append(t)
    return base.with_edges(extra)


def random_uniform(n: int, k: int, p: float, seed: int) -> Hypergraph:
    return random_codegree_model(n, k, empty_hypergraph(n, k), p, seed)


def regular_tuple_sizes(m: int, k: int, ell: int) -> list[int]:
    """Part sizes (sk-s*ell-1)m for parts 1..k-1 and (k-1)m for part k."""
    s = seg_count(k, ell)
    a = (s * k - s * ell - 1) * m
    return [a] * (k - 1) + [(k - 1) * m]


def regular_tuple(m: int, k: int, ell: int, d: float, seed: int) -> tuple[Hypergraph, list[frozenset[int]]]:
    """k-partite instance with the balanced-tiling part sizes and crossing
    edges sampled at density d (rank iteration over crossing tuples)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    sizes = regular_tuple_sizes(m, k, ell)
    bounds = [0]
    for sz in sizes:
        bounds.append(bounds[-1] + sz)
    n = bounds[-1]
    parts = [frozenset(range(bounds[i], bounds[i + 1])) for i in range(k)]
    rng = random.Random(seed)
    edges = []
    from itertools import product

    for combo in product(*(sorted(p) for p in parts)):
        u = rng.random()
        if u < d or d == 1:
            edges.append(tuple(combo))
    return Hypergraph(n, k, edges), parts


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible description of an instance."""

    family: str
    n: int = 0
    k: int = 0
    ell: int = 0
    p: float = 0.0
    slack: int = 0
    m: int = 0
    seed: int = 0
    base: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.family in ("random_uniform", "kpartite_random") and self.seed is None:
            raise ValueError("random families need a seed")

    def to_json_obj(self) -> dict:
        return {
            "family": self.family, "n": self.n, "k": self.k, "ell": self.ell,
            "p": self.p, "slack": self.slack, "m": self.m, "seed": self.seed,
        }


def build(spec: GeneratorSpec) -> Hypergraph:
    if spec.family == "complete":
        return complete_hypergraph(spec.n, spec.k)
    if spec.family == "empty":
        return empty_hypergraph(spec.n, spec.k)
    if spec.family == "space_barrier":
        return space_barrier(spec.n, spec.k, spec.ell)
    if spec.family == "barrier_plus_slack":
        return barrier_plus_slack(spec.n, spec.k, spec.ell, spec.slack)
    if spec.family == "random_uniform":
        return random_uniform(spec.n, spec.k, spec.p, spec.seed)
    if spec.family == "kpartite_random":
        H, _ = regular_tuple(spec.m, spec.k, spec.ell, spec.p, spec.seed)
        return H
    raise AssertionError(spec.family)


def manifest(spec: GeneratorSpec, H: Hypergraph) -> dict:
    """Manifest with the asserted minimum co-degree; for barrier families
    it also carries the counting reason that rules out a Hamilton cycle."""
    out: dict = {"spec": spec.to_json_obj(), "n": H.n, "k": H.k, "edges": H.edge_count}
    if H.n >= H.k:
        delta = H.min_ell_degree(H.k - 1)
        out["delta_codegree"] = delta
        if spec.family in ("space_barrier", "barrier_plus_slack"):
            core = barrier_core_size(spec.n, spec.k, spec.ell) + (
                spec.slack if spec.family == "barrier_plus_slack" else 0
            )
            assert delta == core, "co-degree identity violated"
            s = seg_count(spec.k, spec.ell)
            need = spec.n // (spec.k - spec.ell)
            out["core_size"] = core
            out["cycle_edges_needed"] = need
            out["core_edge_capacity"] = s * core
            out["hamilton_excluded_by_counting"] = s * core < need
    return out
