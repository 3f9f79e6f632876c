from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from django.core.serializers.json import DjangoJSONEncoder

from ..exceptions import InputFormatError, VerificationError
from .colorings import Coloring
from .exact_linalg import RationalMatrix
from .graphs import CorollaryReport, Flow, OrientedGraph, incidence_matrix
from .lattice_geometry import KernelPolytope, QuasiPolynomial
from .rainbow_number import FibonacciReport, RainbowNumberEstimate
from .rainbow_search import NonRainbowCount, RainbowReport, RobustReport, _is_rainbow, find_rainbow
from .regularity import ConjectureReport, RegularityVerdict


class RainbowJSONEncoder(DjangoJSONEncoder):
    """Fractions become "p/q" strings, everything else falls back to Django's encoder."""

    def default(self, o: Any) -> Any:
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        return super().default(o)


def render_report(report: dict[str, Any]) -> str:
    return json.dumps(report, cls=RainbowJSONEncoder, sort_keys=True, indent=2) + "\n"


def load_report(text: str) -> dict[str, Any]:
    try:
        report = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"report is not valid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(report, dict) or "command" not in report:
        raise InputFormatError("report has no 'command' field")
    return report


def envelope(command: str, inputs: dict[str, Any], result: dict[str, Any], exit_code: int) -> dict[str, Any]:
    return {"command": command, "inputs": inputs, "result": result, "exit_code": exit_code}


def matrix_payload(matrix: RationalMatrix) -> dict[str, Any]:
    return {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "entries": [[str(value) for value in matrix.row(i)] for i in range(matrix.rows)],
    }


def matrix_from_payload(payload: dict[str, Any]) -> RationalMatrix:
    return RationalMatrix.from_rows([[Fraction(v) for v in row] for row in payload["entries"]], cols=payload["cols"])


def coloring_payload(coloring: Coloring) -> dict[str, Any]:
    return {"N": coloring.size, "k": coloring.k, "assign": list(coloring.assign), "class_sizes": list(coloring.class_sizes)}


def coloring_from_payload(payload: dict[str, Any]) -> Coloring:
    return Coloring(size=payload["N"], k=payload["k"], assign=tuple(payload["assign"]))


def graph_payload(graph: OrientedGraph) -> dict[str, Any]:
    return {"n": graph.vertex_count, "edges": [[tail + 1, head + 1] for tail, head in graph.edges]}


def graph_from_payload(payload: dict[str, Any]) -> OrientedGraph:
    return OrientedGraph.from_edges(payload["n"], [(tail - 1, head - 1) for tail, head in payload["edges"]])


def _pair_rows(table: dict[tuple[int, int], Any], label: str) -> list[dict[str, Any]]:
    return [{"pair": list(pair), label: value} for pair, value in sorted(table.items())]


def verdict_result(verdict: RegularityVerdict) -> dict[str, Any]:
    return {
        "regular": verdict.regular,
        "rank": verdict.rank,
        "kernel_dim": verdict.kernel_dim,
        "positive_witness": verdict.positive_witness,
        "failing_pair": verdict.failing_pair,
        "vanishing_row": verdict.vanishing_row,
        "condition_iii": _pair_rows(verdict.condition_iii_table, "rank"),
        "condition_iv": _pair_rows(verdict.condition_iv_table, "separated"),
        "reason": verdict.reason,
    }


def conjecture_result(report: ConjectureReport) -> dict[str, Any]:
    return {
        "theorem_regular": report.theorem_regular,
        "rows_independent": report.rows_independent,
        "distinct_positive_vectors": report.distinct_positive_vectors,
        "conjecture_one": report.conjecture_one,
        "conjecture_two": report.conjecture_two,
        "refuted": report.refuted,
    }


def estimate_result(estimate: RainbowNumberEstimate) -> dict[str, Any]:
    return {
        "k_checked": estimate.k_checked,
        "n_max": estimate.n_max,
        "certificates": [
            {"k": k, "coloring": coloring_payload(c) if c is not None else None}
            for k, c in sorted(estimate.certificates.items())
        ],
        "proven_not_regular": estimate.proven_not_regular,
        "smallest_clean_k": estimate.smallest_clean_k,
        "skipped": [list(pair) for pair in estimate.skipped],
    }


def search_result(report: RainbowReport, counts: NonRainbowCount | None = None) -> dict[str, Any]:
    result: dict[str, Any] = {
        "found": report.found,
        "witness": report.witness,
        "solutions_scanned": report.solutions_scanned,
    }
    if counts is not None:
        result.update(
            non_rainbow=counts.count,
            rainbow=counts.rainbow,
            total=counts.total,
            bound=counts.bound,
            condition_iii=counts.condition_iii,
        )
    return result


def robust_result(report: RobustReport) -> dict[str, Any]:
    return {
        "k": report.k,
        "N": report.size,
        "epsilon": report.epsilon,
        "c_squared": report.c_squared,
        "c_decimal": report.c_decimal,
        "max_class_size": report.max_class_size,
        "trials": report.trials,
        "rainbow_found": report.rainbow_found,
        "failures": report.failures,
        "note": report.note,
    }


def ehrhart_result(
    polytope: KernelPolytope, qp: QuasiPolynomial, counts: list[dict[str, int]], nu: Fraction
) -> dict[str, Any]:
    return {
        "dim": polytope.dim,
        "period": qp.period,
        "vertices": polytope.vertices,
        "constituents": [
            {"residue": residue, "coefficients": coefficients} for residue, coefficients in enumerate(qp.coefficients)
        ],
        "leading_coefficient": nu,
        "counts": counts,
    }


def fibonacci_result(report: FibonacciReport) -> dict[str, Any]:
    return {
        "d": report.d,
        "vertices": report.vertices,
        "counts": report.counts,
        "lower_bound_k": report.lower_bound_k,
        "tight_witness": report.tight_witness,
        "below_fibonacci_witness": report.below_fibonacci_witness,
        "kernel_pair": report.kernel_pair,
        "upper_bound_margins": report.upper_bound_margins,
    }


def flow_payload(flow: Flow | None) -> dict[str, Any] | None:
    if flow is None:
        return None
    return {"values": flow.values, "orientation_flips": flow.orientation_flips}


def corollary_result(report: CorollaryReport, rainbow: Flow | None = None, colored: bool = False) -> dict[str, Any]:
    result = {
        "three_edge_connected": report.three_edge_connected,
        "rank_condition": report.rank_condition,
        "positive_flow": flow_payload(report.positive_flow),
        "regular_after_reorientation": report.regular_after_reorientation,
        "rank": report.rank,
        "components": report.components,
    }
    if colored:
        result["rainbow_flow"] = flow_payload(rainbow)
    return result


def verify_report(report: dict[str, Any]) -> None:
    """Re-check every witness a report carries against its echoed inputs."""
    command = report["command"]
    inputs, result = report.get("inputs", {}), report.get("result", {})
    if command == "check":
        matrix = matrix_from_payload(inputs["matrix"])
        witness = result.get("positive_witness")
        if witness is not None and (not matrix.annihilates(witness) or min(witness) < 1):
            raise VerificationError(f"positive witness {witness} does not re-verify")
        for vector in result.get("conjectures", {}).get("distinct_positive_vectors", []):
            if not matrix.annihilates(vector) or len(set(vector)) != len(vector) or min(vector) < 1:
                raise VerificationError(f"distinct positive vector {vector} does not re-verify")
    elif command == "search":
        matrix = matrix_from_payload(inputs["matrix"])
        coloring = coloring_from_payload(inputs["coloring"])
        witness = result.get("witness")
        if witness is not None and not (matrix.annihilates(witness) and _is_rainbow(tuple(witness), coloring.assign)):
            raise VerificationError(f"rainbow witness {witness} does not re-verify")
    elif command == "color":
        matrix = matrix_from_payload(inputs["matrix"])
        if result.get("coloring") is not None:
            coloring = coloring_from_payload(result["coloring"])
            if find_rainbow(matrix, coloring).found:
                raise VerificationError("anti-rainbow colouring admits a rainbow vector")
    elif command == "rainbow-number":
        matrix = matrix_from_payload(inputs["matrix"])
        for entry in result.get("certificates", []):
            if entry["coloring"] is not None:
                coloring = coloring_from_payload(entry["coloring"])
                if not coloring.is_equinumerous or find_rainbow(matrix, coloring).found:
                    raise VerificationError(f"certificate for k={entry['k']} does not re-verify")
    elif command == "graph":
        graph = graph_from_payload(inputs["graph"])
        for key in ("positive_flow", "rainbow_flow"):
            flow = result.get(key)
            if flow is None:
                continue
            oriented = graph.reoriented(flow["orientation_flips"] or [False] * graph.edge_count)
            if not incidence_matrix(oriented).annihilates(flow["values"]) or min(flow["values"], default=1) < 1:
                raise VerificationError(f"{key} {flow['values']} violates Kirchhoff's law")
