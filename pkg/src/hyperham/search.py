"""Ground-truth searches: exact Hamilton ell-cycle decision, brute-force
Turan numbers for tight paths, and the small matching / link-path finders
used by the extremal pipeline.

Symmetry breaking in the cycle solver: rotations by multiples of (k-ell)
map valid representations to valid representations, so some rotation puts
vertex 0 inside the first (k-ell)-block.  The solver branches over vertex
0's offset within that block and over the first free position's vertex;
those top-level branches are independent subtrees, searched sequentially
or in parallel and merged by "first found wins" with a deterministic
tie-break on branch index, so verdict, certificate and node counts do not
depend on worker count or completion order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb

from .hypergraph import Hypergraph
from .paths import (
    OrderedCycle,
    OrderedPath,
    check_ell_path,
    check_hamilton_ell_cycle,
    normalize_cycle,
    seg_count,
)

FOUND = "found"
EXHAUSTED = "exhausted-no"
BUDGET = "budget-exceeded"


@dataclass(frozen=True)
class SearchBudget:
    """Optional caps.  node_limit is deterministic; time_limit is honest
    wall-clock and therefore not replay-stable."""

    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")

    def deadline(self) -> float | None:
        return None if self.time_limit is None else time.monotonic() + self.time_limit


@dataclass(frozen=True)
class SearchStats:
    nodes: int = 0
    depth: int = 0
    seconds: float = 0.0

    def to_json_obj(self) -> dict:
        return {"nodes": self.nodes, "depth": self.depth, "seconds": self.seconds}


@dataclass(frozen=True)
class SearchOutcome:
    verdict: str
    certificate: OrderedCycle | OrderedPath | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": None if self.certificate is None else self.certificate.to_json_obj(),
            "stats": self.stats.to_json_obj(),
        }


@dataclass(frozen=True)
class _BranchResult:
    found: tuple[int, ...] | None
    nodes: int
    depth: int
    budget_hit: bool


def _cycle_windows(n: int, k: int, d: int) -> list[tuple[int, ...]]:
    return [tuple((w + t) % n for t in range(k)) for w in range(0, n, d)]


def _search_branch(H: Hypergraph, ell: int, offset: int, first_vertex: int,
                   node_cap: int | None, deadline: float | None) -> _BranchResult:
    """Exhaust the subtree with vertex 0 at position `offset` and
    `first_vertex` at the first free position."""
    n, k = H.n, H.k
    d = k - ell
    es = H.edges
    wins = _cycle_windows(n, k, d)

    def fill_rank(p: int) -> int:
        if p == offset:
            return 0
        return p + 1 if p < offset else p

    complete_at: dict[int, list[tuple[int, ...]]] = {p: [] for p in range(n)}
    for w in wins:
        last = max(w, key=fill_rank)
        complete_at[last].append(w)

    order = [p for p in range(n) if p != offset]
    pos = [-1] * n
    pos[offset] = 0
    used = [False] * n
    used[0] = True
    codeg = H._build_codegree_index() if n >= k else {}

    nodes = 0
    best_depth = 0
    budget_hit = False
    found: tuple[int, ...] | None = None

    def windows_ok(p: int) -> bool:
        for w in complete_at[p]:
            e = tuple(sorted(pos[q] for q in w))
            if e not in es:
                return False
        return True

    def candidates(i: int) -> list[int]:
        p = order[i]
        cand = [v for v in range(n) if not used[v]]
        if p >= k - 2 and all(pos[q] >= 0 for q in range(p - k + 2, p)):
            tail = [pos[q] for q in range(p - k + 2, p)]

            def key(v: int) -> tuple[int, int]:
                t = tuple(sorted(tail + [v]))
                return (codeg.get(t, 0), v)

            cand.sort(key=key)
        return cand

    def place(i: int) -> bool:
        nonlocal nodes, best_depth, budget_hit, found
        if i == len(order):
            cyc = OrderedCycle(k, ell, tuple(pos))
            if check_hamilton_ell_cycle(H, cyc).ok:
                found = cyc.vertices
                return True
            return False
        p = order[i]
        cand = candidates(i) if i > 0 else [first_vertex]
        for v in cand:
            if used[v]:
                continue
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                budget_hit = True
                return False
            if deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline:
                budget_hit = True
                return False
            pos[p] = v
            used[v] = True
            best_depth = max(best_depth, i + 1)
            if windows_ok(p) and place(i + 1):
                return True
            pos[p] = -1
            used[v] = False
            if budget_hit:
                return False
        return False

    place(0)
    return _BranchResult(found, nodes, best_depth, budget_hit)


def _branch_indices(n: int, d: int) -> list[tuple[int, int]]:
    return [(o, v) for o in range(d) for v in range(1, n)]


def _merge_branches(results: list[_BranchResult], node_limit: int | None,
                    k: int, ell: int) -> SearchOutcome:
    """Replay the branch results in index order with the global budget, so
    the outcome equals a sequential left-to-right search."""
    total = 0
    depth = 0
    for br in results:
        remaining = None if node_limit is None else node_limit - total
        if remaining is not None and remaining <= 0:
            return SearchOutcome(BUDGET, None, SearchStats(total, depth))
        depth_here = max(depth, br.depth)
        if br.found is not None and (remaining is None or br.nodes <= remaining):
            cert = normalize_cycle(OrderedCycle(k, ell, br.found))
            return SearchOutcome(FOUND, cert, SearchStats(total + br.nodes, depth_here))
        if br.budget_hit or (remaining is not None and br.nodes >= remaining):
            capped = total + br.nodes if remaining is None else node_limit
            return SearchOutcome(BUDGET, None, SearchStats(capped, depth_here))
        total += br.nodes
        depth = depth_here
    return SearchOutcome(EXHAUSTED, None, SearchStats(total, depth))


def find_hamilton_ell_cycle(H: Hypergraph, ell: int,
                            budget: SearchBudget | None = None,
                            workers: int = 1) -> SearchOutcome:
    """Exact decision by backtracking over cyclic sequences in steps of
    (k-ell); exhausted-no only after full exploration of the symmetry-
    reduced space.  Any certificate passes check_hamilton_ell_cycle."""
    k, n = H.k, H.n
    if not 1 <= ell < k:
        raise ValueError(f"need 1 <= ell < k, got ell={ell}")
    start = time.monotonic()
    budget = budget or SearchBudget()
    d = k - ell
    if n % d != 0 or n < k or not H.edges:
        return SearchOutcome(EXHAUSTED, None, SearchStats(0, 0, time.monotonic() - start))
    deadline = budget.deadline()
    branches = _branch_indices(n, d)
    if workers <= 1:
        results: list[_BranchResult] = []
        consumed = 0
        for (o, v) in branches:
            cap = None if budget.node_limit is None else max(budget.node_limit - consumed, 0)
            br = _search_branch(H, ell, o, v, cap, deadline)
            results.append(br)
            consumed += br.nodes
            if br.found is not None or br.budget_hit:
                break
        out = _merge_branches(results, budget.node_limit, k, ell)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_search_branch, H, ell, o, v, budget.node_limit, deadline)
                    for (o, v) in branches]
            results = []
            stop_at = len(futs)
            for i, f in enumerate(futs):
                if i >= stop_at:
                    f.cancel()
                    continue
                br = f.result()
                results.append(br)
                if br.found is not None or br.budget_hit:
                    stop_at = min(stop_at, i + 1)
        out = _merge_branches(results, budget.node_limit, k, ell)
    elapsed = time.monotonic() - start
    return SearchOutcome(out.verdict, out.certificate,
                         SearchStats(out.stats.nodes, out.stats.depth, elapsed))


def hamilton_cycle_bruteforce(H: Hypergraph, ell: int) -> bool:
    """Naive oracle: enumerate every permutation of the vertex set, no
    symmetry reasoning, and test the cyclic windows.  Only for tiny n."""
    k, n = H.k, H.n
    d = k - ell
    if n % d != 0 or n < k:
        return False
    wins = _cycle_windows(n, k, d)
    es = H.edges
    needs_overlap_check = n < k + d
    for perm in permutations(range(n)):
        ok = True
        for w in wins:
            e = tuple(sorted(perm[q] for q in w))
            if e not in es:
                ok = False
                break
        if ok and needs_overlap_check:
            sets = [frozenset(perm[q] for q in w) for w in wins]
            m = len(sets)
            ok = all(len(sets[j] & sets[(j + 1) % m]) == ell for j in range(m))
        if ok:
            return True
    return False


# -- Turan numbers of tight paths -------------------------------------------


def turan_bound(n: int, k: int, r: int) -> Fraction:
    """Closed-form upper bound for the max edge count of an n-vertex
    k-graph with no tight path of r edges."""
    if n < 1 or k < 2 or r < 1:
        raise ValueError("need n >= 1, k >= 2, r >= 1")
    if k % 2 == 0:
        return Fraction(r - 1, 2) * comb(n, k - 1)
    return Fraction(r + (r - 1) // k, 2) * comb(n, k - 1)


@dataclass(frozen=True)
class TuranOutcome:
    value: int
    exact: bool
    nodes: int

    def to_json_obj(self) -> dict:
        return {"value": self.value, "exact": self.exact, "nodes": self.nodes}


def _tight_path_constraints(n: int, k: int, r: int) -> list[frozenset[tuple[int, ...]]]:
    """Edge sets of all tight r-edge paths on n labelled vertices, one per
    unordered traversal direction."""
    span = r + k - 1
    out: set[frozenset[tuple[int, ...]]] = set()
    for seq in permutations(range(n), span):
        if seq > seq[::-1]:
            continue
        edges = frozenset(tuple(sorted(seq[i : i + k])) for i in range(r))
        out.add(edges)
    return sorted(out, key=sorted)


def turan_bruteforce(n: int, k: int, r: int,
                     budget: SearchBudget | None = None) -> TuranOutcome:
    """Exact max edge count avoiding the r-edge tight path, by max-edge
    backtracking over edge subsets.  Exponential; small n only."""
    if n < 1 or k < 2 or r < 1:
        raise ValueError("need n >= 1, k >= 2, r >= 1")
    budget = budget or SearchBudget()
    if r + k - 1 > n:
        return TuranOutcome(comb(n, k), True, 0)
    edges = list(combinations(range(n), k))
    m = len(edges)
    idx = {e: i for i, e in enumerate(edges)}
    cons_masks: list[int] = []
    for cset in _tight_path_constraints(n, k, r):
        mask = 0
        for e in cset:
            mask |= 1 << idx[e]
        cons_masks.append(mask)
    cons_of: list[list[int]] = [[] for _ in range(m)]
    for mask in cons_masks:
        mm = mask
        while mm:
            low = mm & -mm
            cons_of[low.bit_length() - 1].append(mask)
            mm ^= low

    def legal(i: int, included: int) -> bool:
        nxt = included | (1 << i)
        for mask in cons_of[i]:
            if mask & ~nxt == 0:
                return False
        return True

    best = 0
    cur = 0
    for i in range(m):
        if legal(i, cur):
            cur |= 1 << i
            best += 1

    cap = turan_bound(n, k, r)
    cap_floor = int(cap) if cap.denominator == 1 else int(cap)
    nodes = 0
    node_cap = budget.node_limit
    deadline = budget.deadline()
    exact = True

    def dfs(i: int, included: int, count: int) -> None:
        nonlocal best, nodes, exact
        if not exact:
            return
        if count + (m - i) <= best or best >= cap_floor:
            return
        if i == m:
            best = max(best, count)
            return
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            exact = False
            return
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            exact = False
            return
        if legal(i, included):
            dfs(i + 1, included | (1 << i), count + 1)
        dfs(i + 1, included, count)

    dfs(0, 0, 0)
    return TuranOutcome(best, exact, nodes)


# -- small structure finders -------------------------------------------------


def find_matching_avoiding(H: Hypergraph, size: int, avoid: frozenset[int],
                           edge_filter=None,
                           budget: SearchBudget | None = None) -> list[tuple[int, ...]] | None:
    """`size` pairwise-disjoint edges, disjoint from `avoid`, each passing
    edge_filter.  Exhaustive backtracking within budget; absence is None."""
    if size < 0:
        raise ValueError("size must be >= 0")
    if size == 0:
        return []
    budget = budget or SearchBudget()
    cand = sorted(e for e in H.edges
                  if not (set(e) & avoid) and (edge_filter is None or edge_filter(e)))
    nodes = 0
    node_cap = budget.node_limit
    deadline = budget.deadline()

    chosen: list[tuple[int, ...]] = []
    used: set[int] = set()

    def dfs(start: int) -> bool:
        nonlocal nodes
        if len(chosen) == size:
            return True
        if len(cand) - start < size - len(chosen):
            return False
        for j in range(start, len(cand)):
            e = cand[j]
            if used & set(e):
                continue
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                return False
            if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
                return False
            chosen.append(e)
            used.update(e)
            if dfs(j + 1):
                return True
            chosen.pop()
            used.difference_update(e)
        return False

    return list(chosen) if dfs(0) else None


def min_link_path_edges(k: int, ell: int) -> int:
    """Shortest tight link path whose lift hosts an ell-path of length s."""
    s = seg_count(k, ell)
    return (s - 1) * (k - ell) + 1


def find_tight_path_in_link(H: Hypergraph, ell: int, u: int, forbidden: frozenset[int],
                            r: int, edge_ok=None,
                            budget: SearchBudget | None = None) -> OrderedPath | None:
    """Find a (k-1)-uniform tight path of length r in the link of u that
    avoids `forbidden`, lift it with u to a k-uniform tight path, and
    return the contained ell-path of length s with u inside every edge
    and outside both ends.  Absence is None."""
    k = H.k
    s = seg_count(k, ell)
    if u in forbidden:
        raise ValueError("u must not be forbidden")
    if r < min_link_path_edges(k, ell):
        raise ValueError(f"need r >= {min_link_path_edges(k, ell)} to host the lifted path")
    budget = budget or SearchBudget()
    link: set[tuple[int, ...]] = set()
    for e in H.edges:
        if u in e and not (set(e) & forbidden) and (edge_ok is None or edge_ok(e)):
            link.add(tuple(sorted(w for w in e if w != u)))
    if not link:
        return None
    verts = sorted({v for e in link for v in e})
    span = r + k - 2
    nodes = 0
    node_cap = budget.node_limit
    deadline = budget.deadline()
    seq: list[int] = []
    in_seq: set[int] = set()

    def dfs() -> bool:
        nonlocal nodes
        if len(seq) == span:
            return True
        for v in verts:
            if v in in_seq:
                continue
            nodes += 1
            if node_cap is not None and nodes > node_cap:
                return False
            if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
                return False
            seq.append(v)
            in_seq.add(v)
            ok = True
            if len(seq) >= k - 1:
                w = tuple(sorted(seq[-(k - 1):]))
                ok = w in link
            if ok and dfs():
                return True
            seq.pop()
            in_seq.remove(v)
        return False

    if not dfs():
        return None
    lifted = tuple(seq[: k - 1]) + (u,) + tuple(seq[k - 1:])
    m = ell + s * (k - ell)
    P = OrderedPath(k, ell, lifted[:m])
    verdict = check_ell_path(H, P)
    if not verdict.ok:
        return None
    return P
