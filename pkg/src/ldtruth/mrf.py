"""Binary pairwise fields and loopy belief propagation.

Nodes carry a two-state potential, edges carry a 2x2 table stored once
from the lower-indexed endpoint's perspective.  Inference is synchronous
flooding with damping: every directed message is recomputed from the
previous round, normalized, then blended with its old value.  On a
cycle-free field the fixed point is the exact marginal; with cycles the
usual loopy approximation applies.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MarkovField:
    """``unary[i]`` is (phi(0), phi(1)); ``edges`` holds (i, j, psi) with
    i < j and ``psi[a][b]`` scoring state a at i against state b at j."""

    unary: list
    edges: list

    def __post_init__(self):
        n = len(self.unary)
        for p0, p1 in self.unary:
            if p0 <= 0.0 or p1 <= 0.0:
                raise ValueError("unary potentials must be positive")
        for i, j, psi in self.edges:
            if not 0 <= i < j < n:
                raise ValueError(f"bad edge endpoints ({i}, {j})")
            for row in psi:
                for entry in row:
                    if entry <= 0.0:
                        raise ValueError("edge potentials must be positive")

    @property
    def size(self) -> int:
        return len(self.unary)


@dataclass
class BpResult:
    marginals: list
    converged: bool
    rounds: int


def loopy_bp(field: MarkovField, damping: float = 0.3, tol: float = 1e-6,
             max_rounds: int = 100) -> BpResult:
    """Marginal probability of state 1 for every node.

    Messages start uniform.  A round recomputes all of them from the
    previous round's values; convergence is the largest componentwise
    message change falling under ``tol``.
    """
    if not 0.0 <= damping < 1.0:
        raise ValueError("damping must be in [0, 1)")
    n = field.size
    unary = field.unary
    # neighbors[i] lists (directed message slot of j->i, slot of i->j,
    # psi oriented as [state of i][state of j])
    neighbors = [[] for _ in range(n)]
    for e, (i, j, psi) in enumerate(field.edges):
        fwd = 2 * e        # i -> j
        back = 2 * e + 1   # j -> i
        transposed = ((psi[0][0], psi[1][0]), (psi[0][1], psi[1][1]))
        neighbors[i].append((back, fwd, psi))
        neighbors[j].append((fwd, back, transposed))

    slots = 2 * len(field.edges)
    messages = [(0.5, 0.5)] * slots
    rounds = 0
    converged = not field.edges
    while rounds < max_rounds and not converged:
        rounds += 1
        fresh = [None] * slots
        for i in range(n):
            local = neighbors[i]
            for _, out_slot, psi in local:
                p0, p1 = unary[i]
                for in_slot, other_out, _ in local:
                    if other_out == out_slot:
                        continue
                    m = messages[in_slot]
                    p0 *= m[0]
                    p1 *= m[1]
                out0 = p0 * psi[0][0] + p1 * psi[1][0]
                out1 = p0 * psi[0][1] + p1 * psi[1][1]
                total = out0 + out1
                if total > 0.0:
                    out0 /= total
                    out1 /= total
                else:
                    out0 = out1 = 0.5
                old = messages[out_slot]
                fresh[out_slot] = ((1.0 - damping) * out0 + damping * old[0],
                                   (1.0 - damping) * out1 + damping * old[1])
        delta = 0.0
        for slot in range(slots):
            old = messages[slot]
            new = fresh[slot]
            delta = max(delta, abs(new[0] - old[0]), abs(new[1] - old[1]))
        messages = fresh
        if delta < tol:
            converged = True

    marginals = []
    for i in range(n):
        b0, b1 = unary[i]
        for in_slot, _, _ in neighbors[i]:
            m = messages[in_slot]
            b0 *= m[0]
            b1 *= m[1]
        total = b0 + b1
        marginals.append(b1 / total if total > 0.0 else 0.5)
    return BpResult(marginals=marginals, converged=converged, rounds=rounds)
