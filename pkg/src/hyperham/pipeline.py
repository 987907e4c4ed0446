"""Constructive extremal pipeline.

Stages: minimize e(B), classify, build sq disjoint short paths with
linkable ends, grow one short cover path Q through the atypical vertices
with the balance identity |B1| = (sk - s*ell - 1)|A1| + ell, then span
A1 union B1 by a Hamilton ell-path between Q's ends and close the cycle.

Every probabilistic existence step becomes seeded sampling with a retry
cap followed by bounded exhaustive backtracking, and every produced path
or cycle is re-verified by the independent checkers.  Asymptotic side
conditions (the avoid-set cap n/(2s(k-ell)), the completion degree
hypotheses) are computed and reported, not enforced: desk-scale instances
violate them while the constructions still succeed and are certified by
the checkers.  Failures abort with the identity of the failing stage.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

from .extremal import (
    Classification,
    GoodnessParams,
    LinkableEnd,
    classify,
    has_bad_subset,
    is_delta_extremal,
    is_linkable,
    link_suffixes,
)
from .hypergraph import Hypergraph
from .lll import CompletionCertificate, completion_certificate
from .paths import (
    OrderedCycle,
    OrderedPath,
    check_ell_path,
    check_hamilton_ell_cycle,
    concat_paths,
    normalize_cycle,
    seg_count,
)
from .search import SearchBudget, find_hamilton_ell_cycle, find_tight_path_in_link, \
    find_matching_avoiding, min_link_path_edges


class PipelineStageError(Exception):
    """Raised when a pipeline sub-step cannot complete; carries the step
    identity so failures stay diagnosable."""

    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


DEFAULT_FILL_NODES = 400_000
RESTART_NODES = 4_000
DEFAULT_RETRIES = 64


def _fill_nodes(budget: SearchBudget | None) -> int:
    if budget is not None and budget.node_limit is not None:
        return budget.node_limit
    return DEFAULT_FILL_NODES


def _dfs_fill(H: Hypergraph, ell: int, template: list, free_order: list[int],
              candidates: dict[int, list[int]], node_cap: int,
              rng: random.Random | None = None, accept=None) -> list[int] | None:
    """Complete a partially fixed ell-path template by backtracking.

    Window membership is checked as soon as a window fills; `accept` can
    reject a full assignment (e.g. a non-linkable new end), in which case
    the search continues.  With rng the candidate lists are shuffled, so
    the same routine serves both the seeded sampling rounds and the
    deterministic exhaustive fallback.
    """
    k = H.k
    d = k - ell
    T = len(template)
    seq = list(template)
    used = {v for v in seq if v is not None}
    wins = [list(range(st, st + k)) for st in range(0, T - k + 1, d)]
    missing = []
    wins_with: dict[int, list[int]] = {q: [] for q in free_order}
    for wi, w in enumerate(wins):
        miss = 0
        for q in w:
            if seq[q] is None:
                miss += 1
                wins_with[q].append(wi)
        missing.append(miss)
    for wi, w in enumerate(wins):
        if missing[wi] == 0 and not H.has_edge(seq[q] for q in w):
            return None
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(free_order):
            return accept is None or accept(seq)
        q = free_order[i]
        cand = candidates[q]
        if rng is not None:
            cand = cand[:]
            rng.shuffle(cand)
        for v in cand:
            if v in used:
                continue
            nodes += 1
            if nodes > node_cap:
                return False
            seq[q] = v
            used.add(v)
            ok = True
            touched = []
            for wi in wins_with[q]:
                missing[wi] -= 1
                touched.append(wi)
                if ok and missing[wi] == 0 and not H.has_edge(seq[x] for x in wins[wi]):
                    ok = False
            if ok and rec(i + 1):
                return True
            for wi in touched:
                missing[wi] += 1
            seq[q] = None
            used.discard(v)
            if nodes > node_cap:
                return False
        return False

    return seq if rec(0) else None


def _fill_with_restarts(H: Hypergraph, ell: int, template: list, free_order: list[int],
                        candidates: dict[int, list[int]], rng: random.Random,
                        budget: SearchBudget | None, accept=None,
                        retries: int = DEFAULT_RETRIES) -> list[int] | None:
    for _ in range(retries):
        out = _dfs_fill(H, ell, template, free_order, candidates,
                        RESTART_NODES, rng=rng, accept=accept)
        if out is not None:
            return out
    return _dfs_fill(H, ell, template, free_order, candidates,
                     _fill_nodes(budget), rng=None, accept=accept)


def _require_linkable(H: Hypergraph, tup, params: GoodnessParams,
                      B: frozenset[int], stage: str) -> LinkableEnd:
    end, fail = is_linkable(H, tup, params, B)
    if end is None:
        raise PipelineStageError(stage, f"end {tup} not linkable (suffix {fail})")
    return end


def avoid_cap(params: GoodnessParams, n: int) -> Fraction:
    return Fraction(n, 2 * params.s * (params.k - params.ell))


# -- connectors ---------------------------------------------------------------


def connect_ends(H: Hypergraph, cls: Classification, params: GoodnessParams,
                 L0: LinkableEnd, L1: LinkableEnd, U: frozenset[int],
                 rng: random.Random | None = None,
                 budget: SearchBudget | None = None) -> OrderedPath | None:
    """Length-2s connector spanning L0, L1, two fresh A'-vertices and a
    fresh (2sk - (2s+1)ell - 2)-set from B'.

    The template starts with L0 in order and finishes with L1 reversed, so
    existing paths whose tail block reads L0 and whose head block reads
    reversed(L1) concatenate with it directly.  The avoid-set cap
    n/(2s(k-ell)) is a reported hypothesis, not a gate.
    """
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    rng = rng or random.Random(0)
    t0, t1 = tuple(L0.vertices), tuple(L1.vertices)
    if set(t0) & set(t1):
        raise ValueError("ends must be disjoint")
    if not (set(t0) <= cls.b_prime and set(t1) <= cls.b_prime):
        raise ValueError("ends must lie inside B'")
    T = ell + 2 * s * d
    template: list = [None] * T
    template[:ell] = list(t0)
    template[T - ell:] = list(reversed(t1))
    x_idx, y_idx = k - 1, (2 * s - 1) * d
    fixed = set(t0) | set(t1)
    a_pool = sorted(cls.a_prime - U - fixed)
    b_pool = sorted(cls.b_prime - U - fixed)
    free_order = [q for q in range(ell, T - ell)]
    candidates = {q: (a_pool if q in (x_idx, y_idx) else b_pool) for q in free_order}
    if len(a_pool) < 2 or len(b_pool) < len(free_order) - 2:
        return None
    seq = _fill_with_restarts(H, ell, template, free_order, candidates, rng, budget)
    if seq is None:
        return None
    P = OrderedPath(k, ell, tuple(seq))
    assert check_ell_path(H, P).ok
    return P


def extend_end(H: Hypergraph, cls: Classification, params: GoodnessParams,
               L: LinkableEnd, U: frozenset[int],
               rng: random.Random | None = None,
               budget: SearchBudget | None = None) -> OrderedPath | None:
    """Length-(s-1) extension from a linkable end: one fresh A'-vertex
    right after the end, (s-1)(k-ell)-1 fresh B'-vertices, and a new end
    that is again linkable."""
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    rng = rng or random.Random(0)
    t = tuple(L.vertices)
    T = ell + (s - 1) * d
    template: list = [None] * T
    template[:ell] = list(t)
    a_pool = sorted(cls.a_prime - U - set(t))
    b_pool = sorted(cls.b_prime - U - set(t))
    if not a_pool:
        return None
    free_order = list(range(ell, T))
    candidates = {q: (a_pool if q == ell else b_pool) for q in free_order}

    B = cls.partition.B

    def accept(seq: list[int]) -> bool:
        new_end = tuple(seq[T - ell:])
        return is_linkable(H, new_end, params, B)[0] is not None

    seq = _fill_with_restarts(H, ell, template, free_order, candidates, rng, budget,
                              accept=accept)
    if seq is None:
        return None
    P = OrderedPath(k, ell, tuple(seq))
    assert check_ell_path(H, P).ok
    return P


# -- the cover path -----------------------------------------------------------


@dataclass(frozen=True)
class CoverPathResult:
    path: OrderedPath
    a1: frozenset[int]
    b1: frozenset[int]
    extensions: int
    report: dict = field(default_factory=dict)


def _cover_vertex_path(H: Hypergraph, cls: Classification, params: GoodnessParams,
                       x: int, used: set[int], budget: SearchBudget | None) -> OrderedPath:
    """Length-s path through x whose other vertices come from B', built
    from a tight path in the link of x avoiding bad subsets, so both ends
    are linkable."""
    k, ell = params.k, params.ell
    B = cls.partition.B
    allowed = cls.b_prime - used

    def edge_ok(e) -> bool:
        rest = frozenset(e) - {x}
        return rest <= allowed and not has_bad_subset(H, rest, params.eps1, B, ell)

    forbidden = frozenset(range(H.n)) - allowed - {x}
    P = find_tight_path_in_link(H, ell, x, forbidden, min_link_path_edges(k, ell),
                                edge_ok=edge_ok, budget=budget)
    if P is None:
        raise PipelineStageError(f"cover-vertex:{x}", "no linkable path through vertex")
    _require_linkable(H, P.head_link(), params, B, f"cover-vertex:{x}")
    _require_linkable(H, P.tail_link(), params, B, f"cover-vertex:{x}")
    return P


def _base_path_plan(params: GoodnessParams, n_ap: int, n_bp: int) -> tuple[int, int]:
    """Choose the base a'-path length L (edges) and the extension count r
    so the balance identity can close: w0(L) = ell + r(k-ell), r >= 0,
    with enough A' and B' vertices left.  Prefers the longest feasible L."""
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    l_min = ceil((ell + 1) / d)
    for L in range(s, l_min - 1, -1):
        size = ell + L * d
        w0 = (s * d - 1) * (n_ap - 1) - (n_bp - (size - 1))
        if w0 < ell or (w0 - ell) % d != 0:
            continue
        r = (w0 - ell) // d
        a_used = 1 + r
        b_used = (size - 1) + r * ((s - 1) * d - 1)
        if a_used <= n_ap - 1 and b_used <= n_bp:
            return L, r
    raise PipelineStageError("base-path", "no feasible base length closes the balance identity")


def _build_base_path(H: Hypergraph, cls: Classification, params: GoodnessParams,
                     L: int, rng: random.Random, budget: SearchBudget | None) -> OrderedPath:
    """Length-L path through one A'-vertex, all other vertices in B', the
    A'-vertex inside every edge and outside both ends, both ends linkable."""
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    T = ell + L * d
    lo = max((L - 1) * d + 1, ell + 1)
    hi = min(k, L * d)
    B = cls.partition.B

    def accept(seq: list[int]) -> bool:
        return (is_linkable(H, tuple(reversed(seq[:ell])), params, B)[0] is not None
                and is_linkable(H, tuple(seq[T - ell:]), params, B)[0] is not None)

    for a in sorted(cls.a_prime):
        for p_star in range(lo, hi + 1):
            template: list = [None] * T
            template[p_star - 1] = a
            free_order = [q for q in range(T) if q != p_star - 1]
            b_pool = sorted(cls.b_prime)
            candidates = {q: b_pool for q in free_order}
            seq = _fill_with_restarts(H, ell, template, free_order, candidates, rng,
                                      budget, accept=accept)
            if seq is not None:
                P = OrderedPath(k, ell, tuple(seq))
                assert check_ell_path(H, P).ok
                return P
    raise PipelineStageError("base-path", "no base path found")


def build_cover_path(H: Hypergraph, cls: Classification, params: GoodnessParams,
                     seed_paths: list[OrderedPath], seed: int = 0,
                     budget: SearchBudget | None = None,
                     s_star: int | None = None) -> CoverPathResult:
    """Grow the single short path Q: cover every atypical vertex, join all
    pieces with connectors, then rebalance with extensions until
    |B1| = (sk - s*ell - 1)|A1| + ell holds exactly."""
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    rng = random.Random(seed)
    B = cls.partition.B
    paths = list(seed_paths)
    used: set[int] = set()
    for p in paths:
        used |= set(p.vertices)

    for x in sorted(cls.v0):
        p = _cover_vertex_path(H, cls, params, x, used, budget)
        paths.append(p)
        used |= set(p.vertices)

    if not paths:
        L, _ = _base_path_plan(params, len(cls.a_prime), len(cls.b_prime))
        p = _build_base_path(H, cls, params, L, rng, budget)
        paths.append(p)
        used |= set(p.vertices)

    while len(paths) > 1:
        P, R = paths[0], paths[1]
        L0 = _require_linkable(H, P.tail_link(), params, B, "connect")
        L1 = _require_linkable(H, R.head_link(), params, B, "connect")
        conn = connect_ends(H, cls, params, L0, L1, frozenset(used), rng, budget)
        if conn is None:
            raise PipelineStageError("connect", f"no connector between {L0.vertices} and {L1.vertices}")
        merged = concat_paths(concat_paths(P, conn), R)
        assert check_ell_path(H, merged).ok
        used |= set(conn.vertices)
        paths = [merged] + paths[2:]

    Q = paths[0]
    w = (s * d - 1) * len(cls.a_prime - set(Q.vertices)) - len(cls.b_prime - set(Q.vertices))
    if w < ell or (w - ell) % d != 0:
        raise PipelineStageError("balance", f"defect w={w} cannot reach ell={ell} in steps of {d}")
    rounds = (w - ell) // d
    for _ in range(rounds):
        L = _require_linkable(H, Q.tail_link(), params, B, "extend")
        ext = extend_end(H, cls, params, L, frozenset(used), rng, budget)
        if ext is None:
            raise PipelineStageError("extend", "no extension available")
        Q = concat_paths(Q, ext)
        assert check_ell_path(H, Q).ok
        used |= set(ext.vertices)

    head, tail = set(Q.vertices[:ell]), set(Q.vertices[-ell:])
    a1 = cls.a_prime - set(Q.vertices)
    b1 = (cls.b_prime - set(Q.vertices)) | head | tail
    if len(b1) != (s * d - 1) * len(a1) + ell:
        raise PipelineStageError("balance", f"identity violated: |B1|={len(b1)}, |A1|={len(a1)}")
    _require_linkable(H, Q.head_link(), params, B, "cover-final")
    _require_linkable(H, Q.tail_link(), params, B, "cover-final")
    s_eff = s_star if s_star is not None else max([s] + [p.length for p in seed_paths])
    size_bound = (2 * s * s_eff + 6 * s * s) * k * params.eps2 * len(B)
    report = {
        "v0_covered": sorted(cls.v0),
        "extensions": rounds,
        "size": len(Q.vertices),
        "size_bound": str(size_bound),
        "size_ok": Fraction(len(Q.vertices)) <= size_bound,
        "avoid_cap": str(avoid_cap(params, H.n)),
    }
    return CoverPathResult(Q, a1, b1, rounds, report)


# -- disjoint short paths under the co-degree hypotheses ----------------------


def _linkify_side(H: Hypergraph, cls: Classification, params: GoodnessParams,
                  P: OrderedPath, avoid: set[int], max_rounds: int,
                  budget: SearchBudget | None) -> OrderedPath | None:
    """Extend the tail of P inside B' until its end is linkable, at most
    max_rounds extra edges, by bounded DFS.  Candidate blocks without bad
    subsets are tried first."""
    k, ell = params.k, params.ell
    d = k - ell
    B = cls.partition.B
    from itertools import combinations, permutations

    nodes = 0
    cap = _fill_nodes(budget)

    def rec(cur: OrderedPath, rounds: int) -> OrderedPath | None:
        nonlocal nodes
        if is_linkable(H, cur.tail_link(), params, B)[0] is not None:
            return cur
        if rounds == max_rounds:
            return None
        pool = sorted(cls.b_prime - avoid - set(cur.vertices))
        end = cur.vertices[-ell:]
        scored = sorted(combinations(pool, d), key=lambda sub: (
            has_bad_subset(H, frozenset(sub), params.eps1 ** 2 / 3, B, ell), sub))
        for sub in scored:
            for order in permutations(sub):
                if not H.has_edge(end + order):
                    continue
                nodes += 1
                if nodes > cap:
                    return None
                ext = rec(OrderedPath(k, ell, cur.vertices + order), rounds + 1)
                if ext is not None:
                    return ext
        return None

    return rec(P, 0)


def _linkify_both_sides(H: Hypergraph, cls: Classification, params: GoodnessParams,
                        base: OrderedPath, avoid: set[int], max_rounds: int,
                        budget: SearchBudget | None) -> OrderedPath | None:
    grown = _linkify_side(H, cls, params, base, avoid, max_rounds, budget)
    if grown is None:
        return None
    rev = _linkify_side(H, cls, params, grown.reversed(), avoid, max_rounds, budget)
    if rev is None:
        return None
    return rev.reversed()


def disjoint_paths_34(H: Hypergraph, cls: Classification, params: GoodnessParams,
                      q: int, budget: SearchBudget | None = None) -> list[OrderedPath]:
    """sq vertex-disjoint paths in B' of length at most seven with two
    linkable ends: a matching whose edges each carry a pivot vertex u with
    no small-bad subset in the rest, then up to three extension rounds per
    side.  The caller vouches for the co-degree hypothesis."""
    if q <= 0:
        return []
    k, ell, s = params.k, params.ell, params.s
    B = cls.partition.B
    beta = params.eps1 ** 2 / 3
    bp = cls.b_prime

    def edge_filter(e) -> bool:
        se = set(e)
        return se <= bp and any(
            not has_bad_subset(H, frozenset(se - {u}), beta, B, ell) for u in e)

    matching = find_matching_avoiding(H, s * q, frozenset(), edge_filter, budget)
    if matching is None:
        raise PipelineStageError("disjoint-paths", f"no pivot matching of size {s * q}")
    reserved: set[int] = set()
    for e in matching:
        reserved |= set(e)
    paths: list[OrderedPath] = []
    used: set[int] = set()
    for i, e in enumerate(matching):
        pivots = [u for u in e if not has_bad_subset(H, frozenset(set(e) - {u}), beta, B, ell)]
        u = pivots[0]
        others = sorted(set(e) - {u})
        mid = ceil(k / 2)
        seq = tuple(others[: mid - 1]) + (u,) + tuple(others[mid - 1:])
        base = OrderedPath(k, ell, seq)
        avoid = used | (reserved - set(e))
        grown = _linkify_both_sides(H, cls, params, base, avoid, 3, budget)
        if grown is None:
            raise PipelineStageError("disjoint-paths", f"path {i} has no linkable extension")
        if grown.length > 7:
            raise PipelineStageError("disjoint-paths", f"path {i} longer than seven edges")
        paths.append(grown)
        used |= set(grown.vertices)
    return paths


def disjoint_paths_general(H: Hypergraph, cls: Classification, params: GoodnessParams,
                           q: int, budget: SearchBudget | None = None) -> list[OrderedPath]:
    """sq vertex-disjoint length-<=s paths in B' via pivot stars: all bad
    subsets of a star's edges contain the center, which sits mid-path so
    both ends are linkable.  Needs the +k^2/2 co-degree slack from the
    caller.  Includes the two-pivot single-edge shortcut."""
    if q <= 0:
        return []
    k, ell, s = params.k, params.ell, params.s
    B = cls.partition.B
    bp = cls.b_prime

    def nobad(S: frozenset[int]) -> bool:
        return not has_bad_subset(H, S, params.eps1, B, ell)

    paths: list[OrderedPath] = []
    used: set[int] = set()
    for i in range(s * q):
        avail = bp - used
        shortcut = None
        for e in sorted(H.edges):
            if not set(e) <= avail:
                continue
            ws = [w for w in e if nobad(frozenset(set(e) - {w}))]
            if len(ws) >= 2:
                u, v = ws[0], ws[-1]
                seq = (u,) + tuple(sorted(set(e) - {u, v})) + (v,)
                cand = OrderedPath(k, ell, seq)
                if (is_linkable(H, cand.head_link(), params, B)[0] is not None
                        and is_linkable(H, cand.tail_link(), params, B)[0] is not None):
                    shortcut = cand
                    break
        if shortcut is not None:
            paths.append(shortcut)
            used |= set(shortcut.vertices)
            continue
        counts: dict[int, int] = {}
        for e in H.edges:
            se = set(e)
            if se <= avail:
                for u in e:
                    if nobad(frozenset(se - {u})):
                        counts[u] = counts.get(u, 0) + 1
        if not counts:
            raise PipelineStageError("disjoint-paths", f"path {i}: no pivot star available")
        u = min(counts, key=lambda v: (-counts[v], v))

        def edge_ok(e) -> bool:
            rest = frozenset(e) - {u}
            return rest <= avail and nobad(rest)

        forbidden = frozenset(range(H.n)) - avail
        P = find_tight_path_in_link(H, ell, u, forbidden - {u},
                                    min_link_path_edges(k, ell), edge_ok, budget)
        if P is None:
            raise PipelineStageError("disjoint-paths", f"path {i}: star at {u} has no tight path")
        _require_linkable(H, P.head_link(), params, B, "disjoint-paths")
        _require_linkable(H, P.tail_link(), params, B, "disjoint-paths")
        paths.append(P)
        used |= set(P.vertices)
    return paths


# -- completion between prescribed ends ---------------------------------------


@dataclass(frozen=True)
class CompletionReport:
    hypothesis_margins: dict
    certificate: CompletionCertificate
    screening_fallback: bool
    attempts: int

    def to_json_obj(self) -> dict:
        return {
            "hypothesis_margins": self.hypothesis_margins,
            "certificate": self.certificate.to_json_obj(),
            "screening_fallback": self.screening_fallback,
            "attempts": self.attempts,
        }


def _bar_deg_cross(H: Hypergraph, L: frozenset[int], X: frozenset[int],
                   Y: frozenset[int]) -> int:
    """Non-edges among X^1 Y^{k-1} sets containing L (L inside X or Y)."""
    lx, ly = len(L & X), len(L & Y)
    pattern = [(X - L, 1 - lx), (Y - L, H.k - 1 - ly)]
    return H.pattern_total(L, pattern) - H.degree_into(L, pattern)


def complete_hamilton_path(H: Hypergraph, params: GoodnessParams,
                           X: frozenset[int], Y: frozenset[int],
                           L0: LinkableEnd, L1: LinkableEnd,
                           rho=None, seed: int = 0,
                           budget: SearchBudget | None = None,
                           retries: int = 400) -> tuple[OrderedPath | None, CompletionReport]:
    """Hamilton ell-path on X union Y starting with L0 in order and ending
    with L1 reversed, X-vertices at the template positions (i-1)s(k-ell)+k.

    Requires |Y| = (sk - s*ell - 1)|X| + ell exactly; the two degree
    hypotheses are measured and reported.  The template's special end
    vertices are picked by excess screening, the interior injection is
    seeded sampling with exhaustive fallback, and the closed-form
    local-lemma certificate is reported alongside the empirical search.
    """
    k, ell, s = params.k, params.ell, params.s
    d = k - ell
    rng = random.Random(seed)
    t = len(X)
    if len(Y) != (s * d - 1) * t + ell:
        raise ValueError(f"|Y|={len(Y)} must equal (sk-s*ell-1)|X|+ell={(s * d - 1) * t + ell}")
    if t < 1:
        raise ValueError("X must be nonempty")
    if X & Y:
        raise ValueError("X and Y must be disjoint")
    t0, t1 = tuple(L0.vertices), tuple(L1.vertices)
    if not (set(t0) <= Y and set(t1) <= Y) or set(t0) & set(t1):
        raise ValueError("prescribed ends must be disjoint subsets of Y")
    rho = Fraction(rho) if rho is not None else (2 * s + 1) * k * params.eps1

    ycap = comb(len(Y), k - 1)
    margins = {
        "x_bar_deg_ok": all(
            Fraction(comb(len(Y), k - 1) - H.degree_into(frozenset({v}), [(Y, k - 1)]))
            <= rho * ycap for v in X),
        "y_bar_deg_ok": all(
            Fraction(t * comb(len(Y) - 1, k - 2)
                     - H.degree_into(frozenset({v}), [(X, 1), (Y - {v}, k - 2)]))
            <= rho * ycap for v in Y),
    }
    end_ok = True
    for tup in (t0, t1):
        for i, suf in enumerate([()] + link_suffixes(tup, k, ell)):
            L = frozenset(suf)
            bar = _bar_deg_cross(H, L, X, Y)
            if Fraction(bar) > rho * comb(len(Y), k - len(L)):
                end_ok = False
    margins["end_bar_deg_ok"] = end_ok

    M = ell + s * t * d
    template: list = [None] * M
    template[:ell] = list(t0)
    template[M - ell:] = list(reversed(t1))
    x_idx = [i * s * d + (k - 1) for i in range(t)]

    rho_caps = {}
    for li in range(0, ell + 1):
        rho_caps[li] = 2 * s * s * rho * comb(len(Y), k - li - 1)

    def screen(x: int, tups: list[tuple[int, ...]]) -> Fraction:
        worst = Fraction(0)
        for suf in tups:
            L = frozenset(suf) | {x}
            bar = _bar_deg_cross(H, L, X, Y)
            cap = rho_caps[len(suf)]
            ratio = Fraction(bar) / cap if cap > 0 else Fraction(bar)
            worst = max(worst, ratio)
        return worst

    suffix0 = [()] + link_suffixes(t0, k, ell)
    suffix1 = [()] + link_suffixes(t1, k, ell)
    fallback = False
    if t == 1:
        tups = suffix0 + suffix1
        scored = sorted(X, key=lambda x: (screen(x, tups), x))
        x_first = scored[0]
        fallback = screen(x_first, tups) > 1
        assignment = {x_idx[0]: x_first}
    else:
        scored0 = sorted(X, key=lambda x: (screen(x, suffix0), x))
        x_first = scored0[0]
        fallback = screen(x_first, suffix0) > 1
        rest = sorted(X - {x_first})
        scored1 = sorted(rest, key=lambda x: (screen(x, suffix1), x))
        x_last = scored1[0]
        fallback = fallback or screen(x_last, suffix1) > 1
        mids = sorted(set(rest) - {x_last})
        assignment = {x_idx[0]: x_first, x_idx[-1]: x_last}
        for j, x in zip(x_idx[1:-1], mids):
            assignment[j] = x
    for j, x in assignment.items():
        template[j] = x

    pool = sorted(Y - set(t0) - set(t1))
    free = [q for q in range(M) if template[q] is None]
    assert len(pool) == len(free)
    wins = [tuple(range(st, st + k)) for st in range(0, M - k + 1, d)]

    def verify(seq: list[int]) -> bool:
        return all(H.has_edge(seq[q] for q in w) for w in wins)

    attempts = 0
    found: list[int] | None = None
    for _ in range(retries):
        attempts += 1
        perm = pool[:]
        rng.shuffle(perm)
        seq = template[:]
        for q, v in zip(free, perm):
            seq[q] = v
        if verify(seq):
            found = seq
            break
    if found is None:
        candidates = {q: pool for q in free}
        found = _dfs_fill(H, ell, template, free, candidates, _fill_nodes(budget))
    cert = completion_certificate(k, s, rho, t, len(Y))
    report = CompletionReport(margins, cert, fallback, attempts)
    if found is None:
        return None, report
    P = OrderedPath(k, ell, tuple(found))
    assert check_ell_path(H, P).ok
    assert set(P.vertices) == X | Y
    return P, report


# -- full assembly -------------------------------------------------------------


@dataclass(frozen=True)
class StageRecord:
    stage: str
    verdict: str
    detail: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {"stage": self.stage, "verdict": self.verdict, "detail": self.detail}


@dataclass(frozen=True)
class AssemblyResult:
    verdict: str
    cycle: OrderedCycle | None
    stages: tuple[StageRecord, ...]

    @property
    def ok(self) -> bool:
        return self.verdict == "found"

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "cycle": None if self.cycle is None else self.cycle.to_json_obj(),
            "stages": [st.to_json_obj() for st in self.stages],
        }


def assemble_hamilton_cycle(H: Hypergraph, ell: int,
                            params: GoodnessParams | None = None,
                            budget: SearchBudget | None = None,
                            seed: int = 0, workers: int = 1) -> AssemblyResult:
    """Full extremal pipeline with staged diagnosis.

    Degenerate classifications (B' too small to host path machinery, as on
    near-complete instances) short-circuit to the exact solver; that
    fallback is part of the contract.  Any stage failure is reported with
    the stage identity, never silently.
    """
    k = H.k
    params = params or GoodnessParams.desk_default(k, ell)
    if params.ell != ell or params.k != k:
        raise ValueError("params disagree with (k, ell)")
    s = params.s
    d = k - ell
    stages: list[StageRecord] = []

    def fail(stage: str, reason: str) -> AssemblyResult:
        stages.append(StageRecord(stage, "failed", {"reason": reason}))
        return AssemblyResult("stage-failed", None, tuple(stages))

    if H.n % d != 0:
        stages.append(StageRecord("divisibility", "no-cycle",
                                  {"reason": f"(k-ell)={d} does not divide n={H.n}"}))
        return AssemblyResult("no-cycle", None, tuple(stages))
    stages.append(StageRecord("divisibility", "ok", {}))

    ok, part, ereport = is_delta_extremal(H, params, seed=seed)
    stages.append(StageRecord("minimize-eB", "ok", ereport))
    if not ok:
        return fail("extremal", f"e(B)={part.e_B} exceeds the extremal bound")
    stages.append(StageRecord("extremal", "ok", {}))

    cls = classify(H, part, params)
    stages.append(StageRecord("classify", "ok", cls.to_json_obj()))

    if len(cls.b_prime) < 2 * ell + 1:
        out = find_hamilton_ell_cycle(H, ell, budget=budget, workers=workers)
        stages.append(StageRecord("fallback-solver", out.verdict, out.stats.to_json_obj()))
        if out.verdict == "found":
            return AssemblyResult("found", out.certificate, tuple(stages))
        if out.verdict == "exhausted-no":
            return AssemblyResult("no-cycle", None, tuple(stages))
        return AssemblyResult("budget", None, tuple(stages))

    delta_cod = H.min_ell_degree(k - 1) if H.n <= 24 else None
    route_34 = 2 * ell > k and 4 * ell < 3 * k
    s_star = 7 if route_34 else s
    seeds: list[OrderedPath] = []
    if cls.q > 0:
        hyp = {
            "delta_codegree": delta_cod,
            "threshold": str(params.threshold(H.n)),
            "slack_needed": str(params.threshold(H.n) + Fraction(k * k, 2)),
            "route": "short-extensions" if route_34 else "pivot-star",
        }
        try:
            if route_34:
                seeds = disjoint_paths_34(H, cls, params, cls.q, budget)
            else:
                seeds = disjoint_paths_general(H, cls, params, cls.q, budget)
        except PipelineStageError as exc:
            stages.append(StageRecord("disjoint-paths", "failed", {**hyp, "reason": exc.reason}))
            return AssemblyResult("stage-failed", None, tuple(stages))
        hyp["paths"] = [list(p.vertices) for p in seeds]
        stages.append(StageRecord("disjoint-paths", "ok", hyp))

    try:
        cover = build_cover_path(H, cls, params, seeds, seed=seed, budget=budget,
                                 s_star=s_star if cls.q > 0 else None)
    except PipelineStageError as exc:
        return fail(f"cover-path/{exc.stage}", exc.reason)
    stages.append(StageRecord("cover-path", "ok",
                              {**cover.report, "Q": list(cover.path.vertices)}))

    Q = cover.path
    B = cls.partition.B
    try:
        L0 = _require_linkable(H, Q.tail_link(), params, B, "complete")
        L1 = _require_linkable(H, Q.head_link(), params, B, "complete")
        hp, creport = complete_hamilton_path(H, params, cover.a1, cover.b1, L0, L1,
                                             seed=seed, budget=budget)
    except (PipelineStageError, ValueError) as exc:
        return fail("complete", str(exc))
    stages.append(StageRecord("complete", "ok" if hp is not None else "failed",
                              creport.to_json_obj()))
    if hp is None:
        if creport.certificate.ok:
            return fail("complete", "sampling exhausted though the certificate holds")
        return AssemblyResult("budget", None, tuple(stages))

    M = len(hp.vertices)
    cycle_seq = Q.vertices + hp.vertices[ell: M - ell]
    cycle = normalize_cycle(OrderedCycle(k, ell, cycle_seq))
    verdict = check_hamilton_ell_cycle(H, cycle)
    if not verdict.ok:
        return fail("close-cycle", f"certificate rejected: {verdict.reason}")
    stages.append(StageRecord("close-cycle", "ok", {}))
    return AssemblyResult("found", cycle, tuple(stages))
