"""Joint estimation of source trust and object truth.

The loop alternates two views of the same evidence.  Holding source
trust fixed, every conflict set becomes a small binary field whose unary
potentials come from the mean smoothed trust of each candidate's
supporters and whose couplings come from value similarity; propagation
turns that into a truth probability per candidate.  Holding those
probabilities fixed, each source is scored by the mean probability of
the candidates it backed, then blended half and half with its
structural prior.  Iteration stops when no candidate's probability
moves by more than the outer threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .mrf import MarkovField, loopy_bp
from .rdf_ingest import ClaimStore, ConflictSet
from .similarity import DEFAULT_SIMILARITY, SimilarityConfig, sim


@dataclass(frozen=True)
class EngineConfig:
    t0: float = 0.5
    outer_threshold: float = 1e-3
    outer_max: int = 20
    bp_damping: float = 0.3
    bp_tol: float = 1e-6
    bp_max: int = 100
    edge_threshold: float = 0.1
    coupling: float = 1.0
    dissimilar_false_factor: float = -0.5
    clamp: float = 1e-6
    track_sources: bool = False

    def __post_init__(self):
        if not 0.0 < self.t0 < 1.0:
            raise ValueError("t0 must be strictly between 0 and 1")
        if self.outer_threshold <= 0 or self.bp_tol <= 0:
            raise ValueError("thresholds must be positive")
        if self.outer_max < 1 or self.bp_max < 1:
            raise ValueError("iteration caps must be at least 1")
        if not 0.0 <= self.bp_damping < 1.0:
            raise ValueError("bp_damping must be in [0, 1)")
        if not 0.0 <= self.edge_threshold <= 1.0:
            raise ValueError("edge_threshold must be in [0, 1]")
        if self.coupling <= 0:
            raise ValueError("coupling must be positive")
        if not 0.0 < self.clamp < 0.5:
            raise ValueError("clamp must be in (0, 0.5)")


DEFAULT_ENGINE = EngineConfig()


@dataclass
class TraceRow:
    iteration: int
    mean_delta_tau: float
    max_delta_tau: float


@dataclass
class ConvergenceTrace:
    rows: list = field(default_factory=list)
    source_snapshots: list | None = None

    def record(self, iteration: int, deltas: list):
        mean = sum(deltas) / len(deltas) if deltas else 0.0
        peak = max(deltas) if deltas else 0.0
        self.rows.append(TraceRow(iteration, mean, peak))


@dataclass
class TrustState:
    t: dict
    t_smoothed: dict
    tau: dict
    tau_base: dict
    iteration: int


@dataclass(frozen=True)
class TruthDecision:
    entity: str
    predicate: str
    chosen: object
    tau_final: tuple
    support: frozenset
    trace: ConvergenceTrace


@dataclass
class ResolutionResult:
    decisions: list
    trust: TrustState
    trace: ConvergenceTrace
    iterations: int
    converged: bool
    bp_converged: bool


def source_trustworthiness(store: ClaimStore, tau: dict,
                           t0: float = 0.5) -> dict:
    """Mean truth probability of the conflict-set claims of each source.

    A source with no claim inside any conflict set keeps the starting
    trust; unanimous claims carry no signal about reliability here.
    """
    position = {}
    for key, cs in store.conflict_sets.items():
        position[key] = {obj.value: i for i, obj in enumerate(cs.objects)}
    trust = {}
    for source in sorted(store.sources):
        total = 0.0
        count = 0
        for claim in store.sources[source]:
            key = (claim.entity, claim.predicate)
            slots = position.get(key)
            if slots is None:
                continue
            total += tau[key][slots[claim.value]]
            count += 1
        trust[source] = total / count if count else t0
    return trust


def smooth_trust(t: dict, nbr: dict) -> dict:
    """Equal-weight blend of claim-driven trust and the structural prior."""
    return {s: (nbr.get(s, 0.5) + t[s]) / 2.0 for s in t}


def object_base_trust(cs: ConflictSet, t_smoothed: dict) -> list:
    """Mean smoothed supporter trust per candidate, in object order."""
    base = []
    for obj in cs.objects:
        total = 0.0
        for source in sorted(obj.sources):
            total += t_smoothed[source]
        base.append(total / len(obj.sources))
    return base


def pairwise_tables(values, cfg: EngineConfig = DEFAULT_ENGINE,
                    sim_cfg: SimilarityConfig = DEFAULT_SIMILARITY) -> list:
    """Coupling tables for every value pair above the similarity cutoff.

    Both-true is rewarded, mixed states are penalized, and both-false is
    damped by the dissimilar-false factor, so a pair of similar values
    pulls at least one of its members toward true.
    """
    edges = []
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            s = sim(values[i], values[j], sim_cfg)
            if s < cfg.edge_threshold:
                continue
            agree = math.exp(cfg.coupling * s)
            both_false = math.exp(cfg.coupling * s * cfg.dissimilar_false_factor)
            mixed = math.exp(-cfg.coupling * s)
            edges.append((i, j, ((both_false, mixed), (mixed, agree))))
    return edges


def build_field(cs: ConflictSet, tau_base: list,
                cfg: EngineConfig = DEFAULT_ENGINE,
                sim_cfg: SimilarityConfig = DEFAULT_SIMILARITY) -> MarkovField:
    """Field over one conflict set from its candidates' base trust."""
    edges = pairwise_tables([obj.value for obj in cs.objects], cfg, sim_cfg)
    return MarkovField(unary=_unary_from_base(tau_base, cfg), edges=edges)


def _unary_from_base(tau_base: list, cfg: EngineConfig) -> list:
    unary = []
    for value in tau_base:
        clamped = min(max(value, cfg.clamp), 1.0 - cfg.clamp)
        unary.append((1.0 - clamped, clamped))
    return unary


def select_truth(cs: ConflictSet, tau: list, t_smoothed: dict) -> int:
    """Index of the winning candidate.

    Highest truth probability wins; exact ties fall back to broader
    support, then to larger summed supporter trust, then to the smallest
    value in canonical order so the outcome never depends on input
    order.
    """
    best = 0
    for i in range(1, len(cs.objects)):
        if _beats(cs, tau, t_smoothed, i, best):
            best = i
    return best


def _beats(cs, tau, t_smoothed, i, best) -> bool:
    if tau[i] != tau[best]:
        return tau[i] > tau[best]
    a, b = cs.objects[i], cs.objects[best]
    if len(a.sources) != len(b.sources):
        return len(a.sources) > len(b.sources)
    sum_a = sum(t_smoothed.get(s, 0.5) for s in sorted(a.sources))
    sum_b = sum(t_smoothed.get(s, 0.5) for s in sorted(b.sources))
    if sum_a != sum_b:
        return sum_a > sum_b
    return a.value.sort_key() < b.value.sort_key()


def resolve_all(store: ClaimStore, priors=None,
                cfg: EngineConfig = DEFAULT_ENGINE,
                sim_cfg: SimilarityConfig = DEFAULT_SIMILARITY) -> ResolutionResult:
    """Run the alternating estimation over every conflict set.

    ``priors`` may be None when no identity structure exists; every
    source then sits at the neutral 0.5 prior, as do sources that have
    claims but never appear in the endorsement graph.
    """
    keys = sorted(store.conflict_sets)
    sets = [store.conflict_sets[k] for k in keys]
    cached_edges = [
        pairwise_tables([obj.value for obj in cs.objects], cfg, sim_cfg)
        for cs in sets
    ]
    nbr_map = priors.nbr if priors is not None else {}
    nbr = {s: nbr_map.get(s, 0.5) for s in store.sources}

    t = {s: cfg.t0 for s in sorted(store.sources)}
    t_smoothed = smooth_trust(t, nbr)
    tau = {k: [0.5] * len(cs.objects) for k, cs in zip(keys, sets)}

    trace = ConvergenceTrace(source_snapshots=[] if cfg.track_sources else None)
    converged = False
    bp_converged = True
    iteration = 0
    for iteration in range(1, cfg.outer_max + 1):
        deltas = []
        max_delta = 0.0
        for k, cs, edges in zip(keys, sets, cached_edges):
            base = object_base_trust(cs, t_smoothed)
            fld = MarkovField(unary=_unary_from_base(base, cfg), edges=edges)
            result = loopy_bp(fld, cfg.bp_damping, cfg.bp_tol, cfg.bp_max)
            bp_converged = bp_converged and result.converged
            previous = tau[k]
            for old, new in zip(previous, result.marginals):
                gap = abs(new - old)
                deltas.append(gap)
                if gap > max_delta:
                    max_delta = gap
            tau[k] = result.marginals
        trace.record(iteration, deltas)
        t = source_trustworthiness(store, tau, cfg.t0)
        t_smoothed = smooth_trust(t, nbr)
        if trace.source_snapshots is not None:
            trace.source_snapshots.append(dict(t_smoothed))
        if max_delta < cfg.outer_threshold:
            converged = True
            break

    tau_base = {k: object_base_trust(cs, t_smoothed)
                for k, cs in zip(keys, sets)}
    decisions = []
    for k, cs in zip(keys, sets):
        winner = select_truth(cs, tau[k], t_smoothed)
        decisions.append(TruthDecision(
            entity=cs.entity, predicate=cs.predicate,
            chosen=cs.objects[winner].value, tau_final=tuple(tau[k]),
            support=cs.objects[winner].sources, trace=trace))
    state = TrustState(t=t, t_smoothed=t_smoothed, tau=tau,
                       tau_base=tau_base, iteration=iteration)
    return ResolutionResult(decisions=decisions, trust=state, trace=trace,
                            iterations=iteration, converged=converged,
                            bp_converged=bp_converged)
