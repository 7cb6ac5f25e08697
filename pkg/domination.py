"""
k-distance dominating sets: exact search, greedy baseline and the
random-rounding construction whose expected size is the probabilistic bound.

Everything runs on closed-ball bitmasks: bit u of cover[v] is set iff
d(u, v) <= k, i.e. cover[v] is v's closed neighborhood in G^k.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from operator import or_
from typing import Sequence

import numpy as np

from errors import (
    BudgetExhaustedError,
    DimensionMismatchError,
    InvalidProbabilityError,
    PreconditionError,
)
from graph_core import (
    Bipartition,
    Graph,
    VertexSet,
    closed_ball_masks,
    multi_source_cover,
    require_connected,
)
from utils import ceil_div, get_exact_config, get_thread_count

logger = logging.getLogger(__name__)

RNG_NAME = "numpy.random.PCG64"
EXACT_METHODS = ("auto", "exhaustive", "branch_and_bound")


@dataclass(frozen=True)
class DominatingSet:
    """A k-distance dominating set with the method that produced it."""

    members: VertexSet
    k: int
    method: str  # "exact", "greedy" or "randomized"

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "method": self.method,
            "size": self.size,
            "members": self.members.to_json(),
        }


@dataclass(frozen=True)
class TrialStats:
    """Aggregate sizes of repeated random-rounding runs."""

    trials: int
    mean_size: float
    stddev: float
    min_size: int
    max_size: int
    seed: int
    rng: str = field(default=RNG_NAME)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean_size": self.mean_size,
            "stddev": self.stddev,
            "min_size": self.min_size,
            "max_size": self.max_size,
            "seed": self.seed,
            "rng": self.rng,
        }


def make_rng(seed: int) -> np.random.Generator:
    """Seeded, platform-independent generator used for every random draw."""
    return np.random.Generator(np.random.PCG64(seed))


# --- Probability vectors ---

def _as_probabilities(g: Graph, p) -> np.ndarray:
    probs = np.asarray(p, dtype=float)
    if probs.ndim != 1 or probs.shape[0] != g.vertex_count:
        raise DimensionMismatchError(g.vertex_count, int(probs.size))
    bad = np.flatnonzero(~((probs >= 0.0) & (probs <= 1.0)))
    if bad.size:
        raise InvalidProbabilityError(float(probs[bad[0]]))
    return probs


def side_probabilities(b: Bipartition, p1: float, p2: float) -> np.ndarray:
    """p1 on every V1 vertex, p2 on every V2 vertex."""
    for value in (p1, p2):
        if not 0.0 <= value <= 1.0:
            raise InvalidProbabilityError(value)
    return np.where(np.asarray(b.side) == 1, p1, p2).astype(float)


def _ball_indices(g: Graph, k: int) -> list[np.ndarray]:
    return [np.fromiter(VertexSet(mask), dtype=np.intp) for mask in closed_ball_masks(g, k)]


def expected_size(g: Graph, k: int, p: Sequence[float] | np.ndarray) -> float:
    """
    Expected size of the random-rounding construction.

    Sum over i of p_i + (1 - p_i) * prod_{j in N_k(i)} (1 - p_j), which is
    p_i + prod over the closed ball N_k[i].
    """
    probs = _as_probabilities(g, p)
    q = 1.0 - probs
    total = float(probs.sum())
    for ball in _ball_indices(g, k):
        total += float(np.prod(q[ball]))
    return total


# --- Constructions ---

def _round_once(g: Graph, k: int, probs: np.ndarray, seed: int) -> VertexSet:
    drawn = make_rng(seed).random(g.vertex_count) < probs
    s1 = VertexSet.of(np.flatnonzero(drawn).tolist())
    covered = multi_source_cover(g, s1, k)
    s2 = VertexSet(VertexSet.full(g.vertex_count).mask & ~covered.mask)
    return s1 | s2


def random_round_construct(g: Graph, k: int, p, seed: int) -> DominatingSet:
    """Draw S1 with inclusion probabilities p, then add every undominated vertex."""
    probs = _as_probabilities(g, p)
    members = _round_once(g, k, probs, seed)
    logger.debug("Random rounding seed=%d: %d vertices", seed, len(members))
    return DominatingSet(members, k, "randomized")


def _greedy_cover(masks: list[int], full: int) -> list[int]:
    chosen = []
    uncovered = full
    while uncovered:
        best_v, best_gain = -1, 0
        for v, mask in enumerate(masks):
            gain = (mask & uncovered).bit_count()
            if gain > best_gain:
                best_v, best_gain = v, gain
        chosen.append(best_v)
        uncovered &= ~masks[best_v]
    return chosen


def greedy_construct(g: Graph, k: int) -> DominatingSet:
    """Pick the vertex covering the most uncovered vertices until done; ties go to the lowest index."""
    masks = closed_ball_masks(g, k)
    chosen = _greedy_cover(masks, VertexSet.full(g.vertex_count).mask)
    return DominatingSet(VertexSet.of(chosen), k, "greedy")


def trial_mean(g: Graph, k: int, p, trials: int, seed: int) -> TrialStats:
    """
    Run random rounding with seeds seed..seed+trials-1 and aggregate sizes.

    Trials fan out over utils.get_thread_count() threads; sizes are collected
    in seed order so the statistics match a sequential run.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    probs = _as_probabilities(g, p)
    seeds = range(seed, seed + trials)

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        sizes = np.fromiter(
            pool.map(lambda s: len(_round_once(g, k, probs, s)), seeds),
            dtype=np.int64,
            count=trials,
        )

    stddev = float(sizes.std(ddof=1)) if trials > 1 else 0.0
    stats = TrialStats(
        trials=trials,
        mean_size=float(sizes.mean()),
        stddev=stddev,
        min_size=int(sizes.min()),
        max_size=int(sizes.max()),
        seed=seed,
    )
    logger.info(
        "Random rounding over %d trials: mean=%.4f sd=%.4f range=[%d, %d]",
        trials, stats.mean_size, stats.stddev, stats.min_size, stats.max_size,
    )
    return stats


# --- Exact search ---

class _ExactSearch:
    """Shared node accounting for both exact engines."""

    def __init__(self, masks: list[int], vertex_count: int, node_budget: int):
        self.masks = masks
        self.full = (1 << vertex_count) - 1
        self.node_budget = node_budget
        self.nodes = 0
        self.best = _greedy_cover(masks, self.full)
        largest = max((m.bit_count() for m in masks), default=1)
        self.lower_bound = ceil_div(vertex_count, largest) if vertex_count else 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExhaustedError(self.node_budget, self.nodes, self.lower_bound, len(self.best))

    def exhaustive(self) -> list[int]:
        """Cardinality-ascending scan; the greedy set stands if nothing smaller covers."""
        n = len(self.masks)
        for size in range(self.lower_bound, len(self.best)):
            for combo in combinations(range(n), size):
                self._tick()
                if reduce(or_, (self.masks[v] for v in combo), 0) == self.full:
                    self.best = list(combo)
                    return self.best
            self.lower_bound = size + 1
        return self.best

    def branch_and_bound(self) -> list[int]:
        self._branch([], 0, 0)
        self.lower_bound = len(self.best)
        return self.best

    def _branch(self, chosen: list[int], covered: int, excluded: int) -> None:
        self._tick()
        if covered == self.full:
            if len(chosen) < len(self.best):
                self.best = list(chosen)
                logger.debug("Exact search: improved to %d after %d nodes", len(chosen), self.nodes)
            return

        uncovered = self.full & ~covered
        allowed = self.full & ~excluded
        max_gain = max(((self.masks[c] & uncovered).bit_count() for c in VertexSet(allowed)), default=0)
        if max_gain == 0:
            return
        if len(chosen) + ceil_div(uncovered.bit_count(), max_gain) >= len(self.best):
            return

        # balls are symmetric, so the coverers of u are exactly cover[u]
        pivot, fewest = -1, None
        for u in VertexSet(uncovered):
            count = (self.masks[u] & allowed).bit_count()
            if fewest is None or count < fewest:
                pivot, fewest = u, count
        if not fewest:
            return

        candidates = sorted(
            VertexSet(self.masks[pivot] & allowed),
            key=lambda c: (-(self.masks[c] & uncovered).bit_count(), c),
        )
        for c in candidates:
            chosen.append(c)
            self._branch(chosen, covered | self.masks[c], excluded)
            chosen.pop()
            excluded |= 1 << c


def gamma_k_exact(
    g: Graph,
    k: int,
    node_budget: int | None = None,
    method: str = "auto",
) -> tuple[int, DominatingSet]:
    """
    Exact k-distance domination number with a minimum witness.

    Solved as minimum dominating set on G^k. "auto" uses the exhaustive scan
    for graphs up to exact.exhaustive_max_vertices and branch-and-bound
    above that.

    Raises:
        DisconnectedGraphError: g is not connected
        BudgetExhaustedError: more than node_budget search nodes visited
    """
    if method not in EXACT_METHODS:
        raise PreconditionError(f"unknown exact method {method!r}; expected one of {EXACT_METHODS}")
    if k < 1:
        raise PreconditionError(f"radius must be >= 1, got {k}")
    require_connected(g)

    config = get_exact_config()
    if node_budget is None:
        node_budget = config["node_budget"]
    if method == "auto":
        method = "exhaustive" if g.vertex_count <= config["exhaustive_max_vertices"] else "branch_and_bound"

    search = _ExactSearch(closed_ball_masks(g, k), g.vertex_count, node_budget)
    best = search.exhaustive() if method == "exhaustive" else search.branch_and_bound()

    logger.info(
        "Exact search finished (%s): gamma_%d=%d after %d nodes",
        method, k, len(best), search.nodes,
    )
    return len(best), DominatingSet(VertexSet.of(best), k, "exact")
