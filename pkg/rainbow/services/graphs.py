from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx

from ..exceptions import InvalidParameterError, VerificationError
from .colorings import Coloring
from .exact_linalg import IntVector, RationalMatrix, kernel_basis, rank
from .rainbow_search import find_rainbow
from .regularity import check_condition_iii, is_rainbow_regular

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class OrientedGraph:
    """Vertices are 0..vertex_count-1; each edge is (tail, head). Parallel edges are kept, loops are not."""

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise InvalidParameterError("vertex count must be non-negative")
        for index, (tail, head) in enumerate(self.edges):
            if not (0 <= tail < self.vertex_count and 0 <= head < self.vertex_count):
                raise InvalidParameterError(f"edge {index} has an endpoint outside 1..{self.vertex_count}")
            if tail == head:
                raise InvalidParameterError(f"edge {index} is a self-loop at vertex {tail + 1}")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence[Sequence[int]]) -> OrientedGraph:
        return cls(vertex_count=vertex_count, edges=tuple((int(t), int(h)) for t, h in edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> OrientedGraph:
        """Orient every edge from its smaller to its larger endpoint label."""
        labels = {node: index for index, node in enumerate(sorted(graph.nodes))}
        edges = sorted(tuple(sorted((labels[u], labels[v]))) for u, v in graph.edges())
        return cls(vertex_count=len(labels), edges=tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for index, (tail, head) in enumerate(self.edges):
            graph.add_edge(tail, head, key=index)
        return graph

    def reoriented(self, flips: Sequence[bool]) -> OrientedGraph:
        if len(flips) != self.edge_count:
            raise InvalidParameterError(f"{len(flips)} flips for {self.edge_count} edges")
        edges = tuple((h, t) if flip else (t, h) for (t, h), flip in zip(self.edges, flips))
        return OrientedGraph(vertex_count=self.vertex_count, edges=edges)

    def __str__(self) -> str:
        lines = [f"{self.vertex_count} {self.edge_count}"]
        lines.extend(f"{tail + 1} {head + 1}" for tail, head in self.edges)
        return "\n".join(lines)


@dataclass(frozen=True)
class Flow:
    values: IntVector
    orientation_flips: tuple[bool, ...] = field(default_factory=tuple)

    @property
    def is_positive(self) -> bool:
        return all(value >= 1 for value in self.values)

    @property
    def is_nowhere_zero(self) -> bool:
        return all(value != 0 for value in self.values)


@dataclass(frozen=True)
class CorollaryReport:
    three_edge_connected: bool
    rank_condition: bool
    positive_flow: Flow | None
    regular_after_reorientation: bool | None
    rank: int
    components: int

    @property
    def holds(self) -> bool:
        return self.three_edge_connected == (self.rank_condition and self.positive_flow is not None)


def incidence_matrix(graph: OrientedGraph) -> RationalMatrix:
    """+1 at the tail, -1 at the head, so the kernel is the circulation space."""
    rows = [[0] * graph.edge_count for _ in range(graph.vertex_count)]
    for index, (tail, head) in enumerate(graph.edges):
        rows[tail][index] = 1
        rows[head][index] = -1
    matrix = RationalMatrix.from_rows(rows, cols=graph.edge_count)
    components = nx.number_connected_components(graph.to_networkx()) if graph.vertex_count else 0
    if rank(matrix) != graph.vertex_count - components:
        raise VerificationError(
            f"incidence matrix has rank {rank(matrix)}, expected n - c = {graph.vertex_count - components}"
        )
    return matrix


def _without_edges(graph: nx.MultiGraph, keys: Sequence[int]) -> nx.MultiGraph:
    reduced = graph.copy()
    for u, v, key in list(reduced.edges(keys=True)):
        if key in keys:
            reduced.remove_edge(u, v, key=key)
    return reduced


def components_3_edge_connected(graph: OrientedGraph) -> bool:
    multigraph = graph.to_networkx()
    for nodes in nx.connected_components(multigraph):
        component = multigraph.subgraph(nodes)
        keys = [key for _, _, key in component.edges(keys=True)]
        removals = [(key,) for key in keys] + list(combinations(keys, 2))
        for removed in removals:
            if not nx.is_connected(_without_edges(component, removed)):
                logger.debug("removing edges %s disconnects the component of vertex %d", removed, min(nodes) + 1)
                return False
    return True


def _coefficient_order(bound: int) -> Iterator[int]:
    for magnitude in range(1, bound + 1):
        yield magnitude
        yield -magnitude


def positive_flow(graph: OrientedGraph, bound: int = 5) -> Flow | None:
    """Search the cycle space for a nowhere-zero flow with |φ| <= bound and flip its negative edges."""
    m = graph.edge_count
    if m == 0:
        return Flow(values=(), orientation_flips=())
    matrix = incidence_matrix(graph)
    cycles = kernel_basis(matrix).vectors
    last_cover = [max((k for k, cycle in enumerate(cycles) if cycle[e]), default=-1) for e in range(m)]
    if -1 in last_cover:
        logger.info("edge %d lies on no cycle; no nowhere-zero flow", last_cover.index(-1) + 1)
        return None
    settled = [[e for e in range(m) if last_cover[e] == k] for k in range(len(cycles))]
    values = [0] * m
    coefficients = list(_coefficient_order(bound))

    def assign(k: int) -> bool:
        if k == len(cycles):
            return True
        cycle = cycles[k]
        for coefficient in coefficients:
            for e in range(m):
                values[e] += coefficient * cycle[e]
            if all(0 < abs(values[e]) <= bound for e in settled[k]) and assign(k + 1):
                return True
            for e in range(m):
                values[e] -= coefficient * cycle[e]
        return False

    if not assign(0):
        return None
    if not matrix.annihilates(values):
        raise VerificationError(f"cycle-space search produced {values}, which violates Kirchhoff's law")
    flips = tuple(value < 0 for value in values)
    flow = Flow(values=tuple(abs(value) for value in values), orientation_flips=flips)
    if not incidence_matrix(graph.reoriented(flips)).annihilates(flow.values):
        raise VerificationError("reoriented flow violates Kirchhoff's law")
    return flow


def check_corollary(graph: OrientedGraph, bound: int = 5) -> CorollaryReport:
    matrix = incidence_matrix(graph)
    components = nx.number_connected_components(graph.to_networkx()) if graph.vertex_count else 0
    lhs = components_3_edge_connected(graph)
    rank_condition = graph.edge_count < 2 or check_condition_iii(matrix).passed
    flow = positive_flow(graph, bound)
    regular = None
    if lhs and flow is not None and graph.edge_count >= 2:
        regular = is_rainbow_regular(incidence_matrix(graph.reoriented(flow.orientation_flips))).regular
        if not regular:
            raise VerificationError("reoriented incidence matrix of a 3-edge-connected graph is not rainbow regular")
    report = CorollaryReport(
        three_edge_connected=lhs,
        rank_condition=rank_condition,
        positive_flow=flow,
        regular_after_reorientation=regular,
        rank=rank(matrix),
        components=components,
    )
    if not report.holds:
        raise VerificationError(
            f"3-edge-connected={lhs} but rank condition={rank_condition}, positive flow={flow is not None}"
        )
    return report


def rainbow_flow(graph: OrientedGraph, coloring: Coloring, reorient: bool = False) -> Flow | None:
    """A positive flow with values in 1..N whose edge values get pairwise distinct colours."""
    flips = (False,) * graph.edge_count
    if reorient:
        flow = positive_flow(graph)
        if flow is None:
            return None
        flips = flow.orientation_flips
    oriented = graph.reoriented(flips)
    result = find_rainbow(incidence_matrix(oriented), coloring)
    if not result.found:
        return None
    return Flow(values=result.witness, orientation_flips=flips)
