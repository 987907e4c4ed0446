"""Experiment orchestration: threshold sweeps, counting-bound censuses,
and record-store reports, with delimited output plus rendered figures.

Sweeps bracket the co-degree threshold cell by cell: the tightness
construction must come out non-Hamiltonian and the slack variant
Hamiltonian, both by exhaustive search.  The census enumerates the two
bad-set counting bounds exactly.  All outputs are byte-stable given a
fixed tool version; wall time lives in side channels only.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path

from .extremal import (
    GoodnessParams,
    bad_set_count,
    count_sets_without_bad_subset,
)
from .generators import GeneratorSpec, build, manifest
from .hypergraph import Hypergraph
from .paths import seg_count
from .records import ExperimentRecord, canonical_json, instance_hash
from .search import SearchBudget, find_hamilton_ell_cycle


def _figure_style() -> dict:
    return {
        "figure.figsize": (6.0, 3.6),
        "figure.dpi": 110,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 9,
    }


# -- sweep ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    n: int
    k: int
    ell: int
    family: str
    delta: int | None
    verdict: str
    nodes: int

    def to_json_obj(self) -> dict:
        return {"n": self.n, "k": self.k, "ell": self.ell, "family": self.family,
                "delta": self.delta, "verdict": self.verdict, "nodes": self.nodes}


def run_sweep(grid: list[tuple[int, int, int]], budget: SearchBudget | None = None,
              workers: int = 1) -> list[SweepRow]:
    """For each (n, k, ell): solve the barrier (expected no) and the
    slack-one variant (expected yes); inapplicable cells are marked."""
    rows: list[SweepRow] = []
    for (n, k, ell) in grid:
        if not 1 <= ell < k or n % (k - ell) != 0 or n < seg_count(k, ell) * (k - ell):
            rows.append(SweepRow(n, k, ell, "barrier", None, "not-applicable", 0))
            continue
        for family, slack in (("barrier", 0), ("barrier+slack", 1)):
            spec = GeneratorSpec("barrier_plus_slack", n=n, k=k, ell=ell, slack=slack)
            H = build(spec)
            delta = H.min_ell_degree(k - 1)
            out = find_hamilton_ell_cycle(H, ell, budget=budget, workers=workers)
            rows.append(SweepRow(n, k, ell, family, delta, out.verdict, out.stats.nodes))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "ell", "family", "delta", "verdict", "nodes"])
    for r in rows:
        w.writerow([r.n, r.k, r.ell, r.family,
                    "" if r.delta is None else r.delta, r.verdict, r.nodes])
    return buf.getvalue()


def sweep_figure(rows: list[SweepRow], path: str | Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cells = sorted({(r.n, r.k, r.ell) for r in rows if r.verdict != "not-applicable"})
    with plt.rc_context(_figure_style()):
        fig, ax = plt.subplots()
        for i, cell in enumerate(cells):
            n, k, ell = cell
            thr = Fraction(n, seg_count(k, ell) * (k - ell))
            ax.axhline(float(thr), color="gray", lw=0.8, ls="--",
                       xmin=(i + 0.15) / max(len(cells), 1), xmax=(i + 0.85) / max(len(cells), 1))
            for r in rows:
                if (r.n, r.k, r.ell) != cell or r.delta is None:
                    continue
                found = r.verdict == "found"
                ax.scatter([i], [r.delta],
                           marker="o" if found else "x",
                           color="tab:green" if found else "tab:red", s=60, zorder=3)
        ax.set_xticks(range(len(cells)))
        ax.set_xticklabels([f"n={n}\nk={k},l={ell}" for (n, k, ell) in cells])
        ax.set_ylabel("minimum co-degree")
        ax.set_title("threshold bracket: x = no Hamilton cycle, o = found")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


# -- census --------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    beta: str
    size: int
    kind: str  # "bad-count" | "no-bad-subset"
    observed: int
    bound: str
    ok: bool

    def to_json_obj(self) -> dict:
        return {"beta": self.beta, "size": self.size, "kind": self.kind,
                "observed": self.observed, "bound": self.bound, "ok": self.ok}


def run_census(H: Hypergraph, B: frozenset[int], params: GoodnessParams,
               betas: list[Fraction] | None = None) -> tuple[list[CensusRow], dict]:
    """Exhaustive bad-set counts against (eps0/beta) C(|B|, size) and
    no-bad-subset d-set counts against (1 - 2^d eps0/beta) C(|B|, d).

    The counting bounds assume e(B) <= eps0 C(|B|, k); that hypothesis is
    evaluated and reported, and rows are marked vacuous when it fails.
    """
    k, ell = params.k, params.ell
    e_b = H.induced_edge_count(B)
    hyp_ok = Fraction(e_b) <= params.eps0 * comb(len(B), k)
    if betas is None:
        betas = [params.eps1, params.eps2, params.eps1 ** 2 / 3]
    rows: list[CensusRow] = []
    for beta in betas:
        for size in range(0, ell + 1):
            observed = bad_set_count(H, B, beta, size)
            bound = (params.eps0 / beta) * comb(len(B), size)
            rows.append(CensusRow(str(beta), size, "bad-count", observed, str(bound),
                                  (not hyp_ok) or Fraction(observed) <= bound))
        for d in range(1, k):
            observed = count_sets_without_bad_subset(H, B, beta, d, ell)
            bound = (1 - 2**d * params.eps0 / beta) * comb(len(B), d)
            rows.append(CensusRow(str(beta), d, "no-bad-subset", observed, str(bound),
                                  (not hyp_ok) or Fraction(observed) >= bound))
    meta = {"e_B": e_b, "eps0_bound": str(params.eps0 * comb(len(B), k)),
            "hypothesis_ok": hyp_ok, "violations": sum(1 for r in rows if not r.ok)}
    return rows, meta


def census_csv(rows: list[CensusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "size", "kind", "observed", "bound", "ok"])
    for r in rows:
        w.writerow([r.beta, r.size, r.kind, r.observed, r.bound, r.ok])
    return buf.getvalue()


# -- report --------------------------------------------------------------------


def summarize_records(records: list[ExperimentRecord]) -> dict:
    """Aggregate pass rates, verdict counts and timings, stable ordering."""
    by_command: dict[str, dict] = {}
    for r in sorted(records, key=lambda r: (r.command, r.spec_hash, r.seed)):
        agg = by_command.setdefault(r.command, {"count": 0, "verdicts": {}, "wall_time": 0.0})
        agg["count"] += 1
        agg["wall_time"] = round(agg["wall_time"] + r.wall_time, 6)
        for key, v in sorted(r.verdicts.items()):
            tag = f"{key}={v}" if isinstance(v, (str, bool, int)) else key
            agg["verdicts"][tag] = agg["verdicts"].get(tag, 0) + 1
    return {"total": len(records), "commands": dict(sorted(by_command.items()))}


def report_figure(records: list[ExperimentRecord], path: str | Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts: dict[str, int] = {}
    times: dict[str, float] = {}
    for r in records:
        counts[r.command] = counts.get(r.command, 0) + 1
        times[r.command] = times.get(r.command, 0.0) + r.wall_time
    names = sorted(counts)
    with plt.rc_context(_figure_style()):
        fig, (ax1, ax2) = plt.subplots(1, 2)
        ax1.bar(range(len(names)), [counts[n] for n in names], color="tab:blue")
        ax1.set_xticks(range(len(names)))
        ax1.set_xticklabels(names, rotation=45, ha="right")
        ax1.set_ylabel("records")
        ax2.bar(range(len(names)), [times[n] for n in names], color="tab:orange")
        ax2.set_xticks(range(len(names)))
        ax2.set_xticklabels(names, rotation=45, ha="right")
        ax2.set_ylabel("total wall seconds")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


# -- record builders -----------------------------------------------------------


def solve_record(H: Hypergraph, ell: int, outcome, seed: int, wall: float,
                 extra_params: dict | None = None) -> ExperimentRecord:
    cert = outcome.certificate
    return ExperimentRecord(
        spec_hash=instance_hash(H),
        command="solve",
        seed=seed,
        params={"ell": ell, **(extra_params or {})},
        verdicts={"verdict": outcome.verdict, "nodes": outcome.stats.nodes,
                  "depth": outcome.stats.depth},
        certificates={} if cert is None else {"certificate": cert.to_json_obj()},
        wall_time=wall,
    )


def generic_record(command: str, spec_hash: str, seed: int, params: dict,
                   verdicts: dict, certificates: dict, wall: float) -> ExperimentRecord:
    return ExperimentRecord(spec_hash=spec_hash, command=command, seed=seed,
                            params=params, verdicts=verdicts,
                            certificates=certificates, wall_time=wall)
