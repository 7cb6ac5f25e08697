"""
Graph representation and distance primitives.

Vertices are 0-based integers. Graph and the result types are frozen; every
function here is pure, so they are safe to share across threads.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from errors import (
    DisconnectedGraphError,
    EdgeListParseError,
    GraphInvariantError,
    InvalidProfileError,
    IsolatedVertexError,
    NotBipartiteError,
    PreconditionError,
)
from utils import ceil_div

logger = logging.getLogger(__name__)


# --- Types ---

@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with sorted adjacency lists."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adjacency = tuple(tuple(sorted(nbrs)) for nbrs in self.adjacency)
        object.__setattr__(self, "adjacency", adjacency)
        if self.vertex_count < 0:
            raise GraphInvariantError(f"vertex_count must be >= 0, got {self.vertex_count}")
        if len(adjacency) != self.vertex_count:
            raise GraphInvariantError(
                f"{len(adjacency)} adjacency lists for {self.vertex_count} vertices"
            )
        neighbor_sets = [set(nbrs) for nbrs in adjacency]
        for v, nbrs in enumerate(adjacency):
            if len(neighbor_sets[v]) != len(nbrs):
                raise GraphInvariantError(f"duplicate edge at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.vertex_count:
                    raise GraphInvariantError(f"neighbor {u} of vertex {v} out of range")
                if u == v:
                    raise GraphInvariantError(f"self-loop at vertex {v}")
                if v not in neighbor_sets[u]:
                    raise GraphInvariantError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge iterable; duplicate edges collapse."""
        neighbor_sets: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if u == v:
                raise GraphInvariantError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphInvariantError(f"edge {u}-{v} out of range for {vertex_count} vertices")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        return cls(vertex_count, tuple(tuple(sorted(s)) for s in neighbor_sets))

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def to_edge_list(self) -> str:
        """Serialize in the edge-list input format, header included."""
        lines = [f"n {self.vertex_count}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexSet:
    """Vertex set stored as an int bitmask; bit i set means vertex i is a member."""

    mask: int = 0

    @classmethod
    def of(cls, members: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in members:
            if v < 0:
                raise GraphInvariantError(f"negative vertex index {v}")
            mask |= 1 << v
        return cls(mask)

    @classmethod
    def full(cls, vertex_count: int) -> "VertexSet":
        return cls((1 << vertex_count) - 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and bool(self.mask >> v & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def fits(self, vertex_count: int) -> bool:
        return self.mask >> vertex_count == 0

    def to_json(self) -> list[int]:
        return list(self)


@dataclass(frozen=True)
class Bipartition:
    """Side label (1 or 2) per vertex, with part sizes."""

    side: tuple[int, ...]
    v1_count: int
    v2_count: int

    @classmethod
    def from_sides(cls, side: Iterable[int]) -> "Bipartition":
        side = tuple(side)
        if any(s not in (1, 2) for s in side):
            raise GraphInvariantError("bipartition labels must be 1 or 2")
        v1 = sum(1 for s in side if s == 1)
        return cls(side, v1, len(side) - v1)

    def members(self, which: int) -> list[int]:
        return [v for v, s in enumerate(self.side) if s == which]

    def swapped(self) -> "Bipartition":
        return Bipartition(tuple(3 - s for s in self.side), self.v2_count, self.v1_count)

    def validate(self, g: Graph) -> None:
        """Raise NotBipartiteError on the first monochromatic edge."""
        if len(self.side) != g.vertex_count:
            raise GraphInvariantError(
                f"bipartition labels {len(self.side)} vertices, graph has {g.vertex_count}"
            )
        for u, v in g.edges():
            if self.side[u] == self.side[v]:
                raise NotBipartiteError(u)


@dataclass(frozen=True)
class BipartiteProfile:
    """(n1, n2, delta1, delta2, k): the inputs of every bound formula."""

    n1: int
    n2: int
    delta1: int
    delta2: int
    k: int

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise InvalidProfileError(f"part sizes must be >= 1, got n1={self.n1}, n2={self.n2}")
        if not 1 <= self.delta1 <= self.n2:
            raise InvalidProfileError(f"delta1={self.delta1} must lie in 1..n2={self.n2}")
        if not 1 <= self.delta2 <= self.n1:
            raise InvalidProfileError(f"delta2={self.delta2} must lie in 1..n1={self.n1}")
        if self.k < 1:
            raise InvalidProfileError(f"k must be >= 1, got {self.k}")

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def m_ceil(self) -> int:
        """M = ceil(k/6)."""
        return ceil_div(self.k, 6)

    def swapped(self) -> "BipartiteProfile":
        return BipartiteProfile(self.n2, self.n1, self.delta2, self.delta1, self.k)

    def to_dict(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "delta1": self.delta1, "delta2": self.delta2, "k": self.k}


@dataclass(frozen=True)
class DistanceLayers:
    """Vertices at exact distance 0..kmax from origin."""

    origin: int
    layers: tuple[tuple[int, ...], ...]
    exhausted: bool

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def within(self, k: int) -> list[int]:
        """N_k(origin): union of layers 1..k."""
        return [v for layer in self.layers[1:k + 1] for v in layer]


# --- Parsing ---

def _parse_int(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise EdgeListParseError(line_number, f"not an integer: {token!r}")


def parse_edge_list(text: str) -> Graph:
    """
    Parse "u v" lines into a Graph.

    '#' lines and blank lines are ignored. An optional "n <count>" header
    declares isolated trailing vertices. Duplicate edges collapse.

    Raises:
        EdgeListParseError: negative index, self-loop or bad token (with line number)
    """
    declared = None
    header_line = 0
    edges: set[tuple[int, int]] = set()
    max_index = -1

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2:
                raise EdgeListParseError(line_number, "header must be 'n <count>'")
            if declared is not None:
                raise EdgeListParseError(line_number, "duplicate 'n' header")
            declared = _parse_int(tokens[1], line_number)
            header_line = line_number
            if declared < 0:
                raise EdgeListParseError(line_number, f"negative vertex count {declared}")
            continue
        if len(tokens) != 2:
            raise EdgeListParseError(line_number, f"expected 2 tokens, got {len(tokens)}")
        u = _parse_int(tokens[0], line_number)
        v = _parse_int(tokens[1], line_number)
        if u < 0 or v < 0:
            raise EdgeListParseError(line_number, f"negative vertex index in '{line}'")
        if u == v:
            raise EdgeListParseError(line_number, f"self-loop at vertex {u}")
        edges.add((min(u, v), max(u, v)))
        max_index = max(max_index, u, v)

    vertex_count = max_index + 1
    if declared is not None:
        if declared < vertex_count:
            raise EdgeListParseError(
                header_line, f"header declares {declared} vertices but index {max_index} is used"
            )
        vertex_count = declared

    logger.debug("Parsed edge list: %d vertices, %d edges", vertex_count, len(edges))
    return Graph.from_edges(vertex_count, sorted(edges))


# --- Traversal ---

def _bfs_distances(g: Graph, sources: Iterable[int], limit: int | None = None) -> list[int]:
    """Multi-source BFS distances, -1 for unreached or beyond `limit`."""
    dist = [-1] * g.vertex_count
    queue = deque()
    for s in sources:
        if dist[s] == -1:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.adjacency[u]:
            if dist[w] == -1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _require_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.vertex_count:
        raise PreconditionError(f"vertex {v} out of range for {g.vertex_count} vertices")


def _require_radius(k: int, minimum: int = 1) -> None:
    if k < minimum:
        raise PreconditionError(f"radius must be >= {minimum}, got {k}")


def bfs_layers(g: Graph, v: int, kmax: int) -> DistanceLayers:
    """Distance layers X_0..X_kmax around v; exhausted iff N_kmax[v] is v's whole component."""
    _require_vertex(g, v)
    _require_radius(kmax, minimum=0)

    layers = [[v]]
    seen = {v}
    frontier = [v]
    for _ in range(kmax):
        nxt = []
        for u in frontier:
            for w in g.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        layers.append(sorted(nxt))
        frontier = nxt

    exhausted = all(w in seen for u in frontier for w in g.adjacency[u])
    return DistanceLayers(v, tuple(tuple(layer) for layer in layers), exhausted)


def multi_source_cover(g: Graph, sources: Iterable[int], k: int) -> VertexSet:
    """Vertices within distance k of some source."""
    _require_radius(k, minimum=0)
    sources = list(sources)
    for s in sources:
        _require_vertex(g, s)
    dist = _bfs_distances(g, sources, limit=k)
    return VertexSet.of(v for v, d in enumerate(dist) if d != -1)


def closed_ball_masks(g: Graph, k: int) -> list[int]:
    """Bitmask of N_k[v] for every vertex v."""
    masks = []
    for v in range(g.vertex_count):
        dist = _bfs_distances(g, [v], limit=k)
        masks.append(VertexSet.of(u for u, d in enumerate(dist) if d != -1).mask)
    return masks


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by lowest member."""
    seen = [False] * g.vertex_count
    components = []
    for start in range(g.vertex_count):
        if seen[start]:
            continue
        dist = _bfs_distances(g, [start])
        component = [v for v, d in enumerate(dist) if d != -1]
        for v in component:
            seen[v] = True
        components.append(component)
    return components


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def require_connected(g: Graph) -> None:
    components = connected_components(g)
    if len(components) > 1:
        raise DisconnectedGraphError(len(components))


def eccentricity(g: Graph, v: int) -> int:
    """Largest distance from v; the graph must be connected."""
    _require_vertex(g, v)
    dist = _bfs_distances(g, [v])
    if -1 in dist:
        raise DisconnectedGraphError(len(connected_components(g)))
    return max(dist)


def diameter(g: Graph) -> int:
    if g.vertex_count == 0:
        return 0
    return max(eccentricity(g, v) for v in range(g.vertex_count))


# --- Bipartite structure ---

def two_color(g: Graph) -> Bipartition:
    """
    2-color every component by BFS; the lowest-indexed vertex of each
    component gets side 1.

    Raises:
        NotBipartiteError: naming a vertex on an odd cycle
    """
    side = [0] * g.vertex_count
    for start in range(g.vertex_count):
        if side[start]:
            continue
        side[start] = 1
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not side[w]:
                    side[w] = 3 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    raise NotBipartiteError(u)
    return Bipartition.from_sides(side)


def k_neighborhood_split(g: Graph, b: Bipartition, v: int, k: int) -> tuple[int, int, bool]:
    """(|N_k(v) ∩ V1|, |N_k(v) ∩ V2|, N_k[v] == V)."""
    layers = bfs_layers(g, v, k)
    reached = layers.within(k)
    in_v1 = sum(1 for u in reached if b.side[u] == 1)
    return in_v1, len(reached) - in_v1, len(reached) + 1 == g.vertex_count


def power_graph(g: Graph, k: int) -> Graph:
    """G^k: u ~ w iff 0 < d(u, w) <= k."""
    _require_radius(k)
    adjacency = tuple(tuple(sorted(bfs_layers(g, v, k).within(k))) for v in range(g.vertex_count))
    return Graph(g.vertex_count, adjacency)


def is_k_dominating(g: Graph, s: VertexSet, k: int) -> bool:
    if not s.fits(g.vertex_count):
        raise GraphInvariantError(f"vertex set {s.to_json()} exceeds {g.vertex_count} vertices")
    return multi_source_cover(g, s, k).mask == VertexSet.full(g.vertex_count).mask


def profile(g: Graph, b: Bipartition, k: int) -> BipartiteProfile:
    """
    Bound inputs of (g, b): part sizes and per-side minimum degrees.

    Raises:
        IsolatedVertexError: some vertex has degree 0
    """
    for v in range(g.vertex_count):
        if g.degree(v) == 0:
            raise IsolatedVertexError(v)
    delta1 = min(g.degree(v) for v in b.members(1))
    delta2 = min(g.degree(v) for v in b.members(2))
    return BipartiteProfile(b.v1_count, b.v2_count, delta1, delta2, k)
