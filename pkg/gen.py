"""Deterministic generators for test graph families."""

import logging
from dataclasses import dataclass

import networkx as nx

from domination import make_rng
from errors import GenSpecError, GraphInvariantError, InfeasibleDegreeError
from graph_core import Graph, is_connected

logger = logging.getLogger(__name__)

# family -> parameter names
FAMILIES = {
    "path": ("n",),
    "cycle": ("n",),
    "complete_bipartite": ("a", "b"),
    "grid2d": ("rows", "cols"),
    "random_bipartite": ("n1", "n2", "d1", "d2", "extra"),
}


@dataclass(frozen=True)
class GenSpec:
    family: str
    parameters: tuple
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GenSpecError(f"unknown family {self.family!r}; expected one of {sorted(FAMILIES)}")
        names = FAMILIES[self.family]
        if len(self.parameters) != len(names):
            raise GenSpecError(
                f"{self.family} takes {len(names)} parameters ({', '.join(names)}), got {len(self.parameters)}"
            )
        integers = self.parameters[:4] if self.family == "random_bipartite" else self.parameters
        for name, value in zip(names, integers):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise GenSpecError(f"{self.family} parameter {name} must be a positive integer, got {value!r}")
        if self.family == "random_bipartite" and not 0.0 <= float(self.parameters[4]) <= 1.0:
            raise GenSpecError(f"extra probability must lie in [0, 1], got {self.parameters[4]!r}")
        if self.family == "cycle" and self.parameters[0] < 3:
            raise GenSpecError(f"cycle needs at least 3 vertices, got {self.parameters[0]}")

    @classmethod
    def from_dict(cls, data: dict) -> "GenSpec":
        try:
            return cls(data["family"], tuple(data["parameters"]), int(data.get("seed", 0)))
        except KeyError as e:
            raise GenSpecError(f"missing key {e.args[0]!r}")

    def to_dict(self) -> dict:
        return {"family": self.family, "parameters": list(self.parameters), "seed": self.seed}

    def to_text(self) -> str:
        return f"{self.family}:{','.join(str(p) for p in self.parameters)}"


def parse_gen_spec(text: str, seed: int = 0) -> GenSpec:
    """Parse "family:a,b,..." as given to --gen."""
    family, sep, args = text.partition(":")
    family = family.strip()
    if not sep or not args.strip():
        raise GenSpecError(f"expected 'family:args', got {text!r}")
    tokens = [t.strip() for t in args.split(",")]
    parameters = []
    for index, token in enumerate(tokens):
        try:
            if family == "random_bipartite" and index == 4:
                parameters.append(float(token))
            else:
                parameters.append(int(token))
        except ValueError:
            raise GenSpecError(f"bad parameter {token!r} in {text!r}")
    return GenSpec(family, tuple(parameters), seed)


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Relabel nodes 0..n-1 in sorted order and build a Graph."""
    relabeled = nx.convert_node_labels_to_integers(nx_graph, ordering="sorted")
    return Graph.from_edges(relabeled.number_of_nodes(), relabeled.edges())


def _random_bipartite(n1: int, n2: int, d1: int, d2: int, extra: float, seed: int) -> nx.Graph:
    """
    V1 = 0..n1-1, V2 = n1..n1+n2-1. Random spanning tree across the parts,
    degree top-up to the demands, then each remaining cross pair with
    probability `extra`.
    """
    if d1 > n2:
        raise InfeasibleDegreeError(1, d1, n2)
    if d2 > n1:
        raise InfeasibleDegreeError(2, d2, n1)

    rng = make_rng(seed)
    v1 = list(range(n1))
    v2 = list(range(n1, n1 + n2))
    g = nx.Graph()
    g.add_nodes_from(range(n1 + n2))

    # spanning tree: seed edge, then attach each vertex to a random tree vertex of the other side
    first1, first2 = int(rng.choice(v1)), int(rng.choice(v2))
    g.add_edge(first1, first2)
    in_tree = {1: [first1], 2: [first2]}
    for v in rng.permutation(n1 + n2).tolist():
        if v in (first1, first2):
            continue
        side, other = (1, 2) if v < n1 else (2, 1)
        g.add_edge(v, in_tree[other][int(rng.integers(len(in_tree[other])))])
        in_tree[side].append(v)

    for part, demand, opposite in ((v1, d1, v2), (v2, d2, v1)):
        for v in part:
            missing = demand - g.degree(v)
            if missing <= 0:
                continue
            candidates = [u for u in opposite if not g.has_edge(v, u)]
            for u in rng.choice(candidates, size=missing, replace=False).tolist():
                g.add_edge(v, u)

    if extra > 0:
        for u in v1:
            for w in v2:
                if not g.has_edge(u, w) and rng.random() < extra:
                    g.add_edge(u, w)
    return g


def generate(spec: GenSpec) -> Graph:
    """
    Build the graph a GenSpec names.

    Raises:
        InfeasibleDegreeError: random_bipartite degree demand exceeds the other part
    """
    params = spec.parameters
    if spec.family == "path":
        nx_graph = nx.path_graph(params[0])
    elif spec.family == "cycle":
        nx_graph = nx.cycle_graph(params[0])
    elif spec.family == "complete_bipartite":
        nx_graph = nx.complete_bipartite_graph(params[0], params[1])
    elif spec.family == "grid2d":
        nx_graph = nx.grid_2d_graph(params[0], params[1])
    else:
        nx_graph = _random_bipartite(*params[:4], float(params[4]), spec.seed)

    g = from_networkx(nx_graph)

    if spec.family == "random_bipartite":
        n1, _, d1, d2, _ = params
        if not is_connected(g):
            raise GraphInvariantError(f"{spec.to_text()} seed={spec.seed} produced a disconnected graph")
        short = [v for v in range(g.vertex_count) if g.degree(v) < (d1 if v < n1 else d2)]
        if short:
            raise GraphInvariantError(f"{spec.to_text()} seed={spec.seed}: vertex {short[0]} below degree demand")

    logger.debug("Generated %s: %d vertices, %d edges", spec.to_text(), g.vertex_count, g.edge_count)
    return g
