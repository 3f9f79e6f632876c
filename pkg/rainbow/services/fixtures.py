"""Named matrices and graphs used by the self-test and the test suite."""

from __future__ import annotations

import networkx as nx

from .exact_linalg import RationalMatrix
from .graphs import OrientedGraph
from .rainbow_number import fibonacci_matrix

ARITHMETIC_PROGRESSION = RationalMatrix.from_rows([[1, -2, 1]])
SIDON = RationalMatrix.from_rows([[1, 1, -1, -1]])
SCHUR = RationalMatrix.from_rows([[1, 1, -1]])
EQUAL_PAIR = RationalMatrix.from_rows([[1, -1, 0]])
RATIO_PAIR = RationalMatrix.from_rows([[2, -3, 0]])
THREE_BY_FIVE = RationalMatrix.from_rows(
    [
        [1, 0, 1, -1, 0],
        [0, 1, 1, 0, -1],
        [1, 0, 0, 1, -1],
    ]
)
ZERO_PAIR = RationalMatrix.zeros(1, 2)
DIAGONAL = RationalMatrix.from_rows([[1, -1]])

REGULAR_MATRICES = {
    "arithmetic_progression": ARITHMETIC_PROGRESSION,
    "sidon": SIDON,
    "schur": SCHUR,
    "zero_pair": ZERO_PAIR,
}

NOT_REGULAR_MATRICES = {
    "equal_pair": (EQUAL_PAIR, (0, 1)),
    "ratio_pair": (RATIO_PAIR, (0, 1)),
    "three_by_five": (THREE_BY_FIVE, (0, 1)),
}

EHRHART_MATRICES = {
    "zero_pair": ZERO_PAIR,
    "diagonal": DIAGONAL,
    "arithmetic_progression": ARITHMETIC_PROGRESSION,
    "schur": SCHUR,
    "fibonacci_4": fibonacci_matrix(4),
    "fibonacci_5": fibonacci_matrix(5),
}

COUNTING_MATRICES = {
    "arithmetic_progression": ARITHMETIC_PROGRESSION,
    "sidon": SIDON,
    "schur": SCHUR,
    "fibonacci_4": fibonacci_matrix(4),
    "fibonacci_5": fibonacci_matrix(5),
}


def nonzero_one_by_two() -> list[RationalMatrix]:
    return [
        RationalMatrix.from_rows([[p, q]])
        for p in range(-3, 4)
        for q in range(-3, 4)
        if (p, q) != (0, 0)
    ]


def _disjoint_k4s() -> nx.Graph:
    return nx.disjoint_union(nx.complete_graph(4), nx.complete_graph(4))


def _k5_minus_edge() -> nx.Graph:
    graph = nx.complete_graph(5)
    graph.remove_edge(0, 1)
    return graph


FIXTURE_GRAPHS = {
    "k4": OrientedGraph.from_networkx(nx.complete_graph(4)),
    "k5_minus_edge": OrientedGraph.from_networkx(_k5_minus_edge()),
    "prism": OrientedGraph.from_networkx(nx.circular_ladder_graph(3)),
    "c5": OrientedGraph.from_networkx(nx.cycle_graph(5)),
    "p4": OrientedGraph.from_networkx(nx.path_graph(4)),
    "two_k4": OrientedGraph.from_networkx(_disjoint_k4s()),
}

THREE_EDGE_CONNECTED = {"k4": True, "k5_minus_edge": True, "prism": True, "c5": False, "p4": False, "two_k4": True}


def small_connected_graphs(max_vertices: int = 5) -> list[OrientedGraph]:
    return [
        OrientedGraph.from_networkx(graph)
        for graph in nx.graph_atlas_g()
        if 0 < graph.number_of_nodes() <= max_vertices and nx.is_connected(graph)
    ]
