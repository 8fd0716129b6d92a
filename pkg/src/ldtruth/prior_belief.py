"""Reliability prior over sources from endorsement structure.

A source pointed at by many well-endorsed sources earns a higher score,
in the damped PageRank style, except that the raw recurrence is kept
verbatim: no teleportation mass split across the graph and no
redistribution from sinks.  Scores are then min-max normalized so the
trust update can mix them with claim-level evidence on a shared scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph_model import SourceBeliefGraph


class EmptyGraphError(ValueError):
    """No vertices to score."""


@dataclass(frozen=True)
class PriorConfig:
    damping: float = 0.85
    tolerance: float = 1e-9
    max_sweeps: int = 200

    def __post_init__(self):
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must be in [0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


DEFAULT_PRIOR = PriorConfig()


@dataclass
class PriorBeliefs:
    br: dict
    nbr: dict
    sweeps_used: int
    residual: float
    converged: bool


def compute_prior(sbg: SourceBeliefGraph,
                  cfg: PriorConfig = DEFAULT_PRIOR) -> PriorBeliefs:
    """Iterate the endorsement recurrence to its fixed point.

    Synchronous sweeps from a unit start vector, stopping when the
    largest per-source change drops under the tolerance.  Hitting the
    sweep cap still returns the last vector, flagged as not converged.
    """
    if not sbg.vertices:
        raise EmptyGraphError("source belief graph has no vertices")
    order = sorted(sbg.vertices)
    index = {s: i for i, s in enumerate(order)}
    # incoming[j] holds (i, weight) with weight = multiplicity / out-degree
    incoming = [[] for _ in order]
    for (a, b), count in sbg.multiplicity.items():
        incoming[index[b]].append((index[a], count / sbg.out_degree[a]))
    for rows in incoming:
        rows.sort()

    d = cfg.damping
    base = 1.0 - d
    br = [1.0] * len(order)
    residual = float("inf")
    sweeps = 0
    converged = False
    while sweeps < cfg.max_sweeps:
        sweeps += 1
        nxt = []
        for j in range(len(order)):
            total = 0.0
            for i, weight in incoming[j]:
                total += br[i] * weight
            nxt.append(base + d * total)
        residual = max(abs(a - b) for a, b in zip(nxt, br))
        br = nxt
        if residual < cfg.tolerance:
            converged = True
            break
    scores = {s: br[index[s]] for s in order}
    return PriorBeliefs(br=scores, nbr=normalize_prior(scores),
                        sweeps_used=sweeps, residual=residual,
                        converged=converged)


def normalize_prior(br: dict) -> dict:
    """Min-max rescale to [0, 1]; a constant vector flattens to 0.5."""
    if not br:
        return {}
    low = min(br.values())
    high = max(br.values())
    spread = high - low
    if spread == 0.0:
        return {s: 0.5 for s in br}
    return {s: (v - low) / spread for s, v in br.items()}


def recurrence_residual(sbg: SourceBeliefGraph, br: dict,
                        damping: float = 0.85) -> float:
    """Largest gap between ``br`` and one application of the recurrence."""
    worst = 0.0
    for j in sbg.vertices:
        total = 0.0
        for i in sorted(sbg.in_neighbors.get(j, ())):
            total += br[i] * sbg.multiplicity[(i, j)] / sbg.out_degree[i]
        worst = max(worst, abs((1.0 - damping) + damping * total - br[j]))
    return worst
