from __future__ import annotations

import argparse
import logging
import time
from typing import Any, Callable

from django import forms
from django.core.management.base import BaseCommand, CommandError

from ...exceptions import InputFormatError, InvalidParameterError, NotRainbowRegularError, VerificationError
from ...forms import (
    ColorForm,
    EhrhartForm,
    EnumerateForm,
    FibonacciForm,
    RainbowNumberForm,
    RobustExperimentForm,
    SelftestForm,
)
from ...services import reports
from ...services.colorings import LemmaCase, classify_one_by_two, enumerate_equinumerous, lemma_coloring, orbit_count
from ...services.graphs import check_corollary, rainbow_flow
from ...services.lattice_geometry import count_dilation, ehrhart, polytope, reciprocity_check
from ...services.rainbow_number import anti_rainbow_coloring, check_fibonacci_claims, estimate_rainbow_number
from ...services.rainbow_search import count_non_rainbow, find_rainbow, robust_experiment
from ...services.regularity import evaluate_conjectures, is_rainbow_regular, robust_constant
from ...services.selftest import run_selftest
from ...utils import format_coloring, rainbow_setting, read_coloring, read_graph, read_matrix, write_text

logger = logging.getLogger(__name__)


class NegativeVerdict(CommandError):
    """The report was written but the predicate it answers came out false."""

    def __init__(self, message: str) -> None:
        super().__init__(message, returncode=1)


class SubcommandParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise CommandError(f"Error: {message}", returncode=2)


def _validated(form_class: type[forms.Form], options: dict[str, Any], fields: tuple[str, ...]) -> dict[str, Any]:
    form = form_class(data={name: options[name] for name in fields if options.get(name) is not None})
    if not form.is_valid():
        problems = "; ".join(
            f"--{name.replace('_', '-')}: {' '.join(errors)}" if name != "__all__" else " ".join(errors)
            for name, errors in form.errors.items()
        )
        raise CommandError(problems, returncode=2)
    return form.cleaned_data


class Command(BaseCommand):
    help = "Decide rainbow regularity, search colourings and verify lattice-point claims."
    requires_system_checks: list[str] = []

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=SubcommandParser)

        def add(name: str, help_text: str, matrix: bool = True) -> argparse.ArgumentParser:
            sub = subparsers.add_parser(name, help=help_text)
            if matrix:
                sub.add_argument("matrix", help='matrix file: "m d" then m rows of rationals')
            sub.add_argument("--output", help="also write the JSON report to this file")
            sub.add_argument("--timing", action="store_true", help="include elapsed milliseconds in the report")
            return sub

        add("check", "decide rainbow regularity (exit 1 when not regular)")

        sub = add("rainbow-number", "search equinumerous colourings for non-regularity certificates")
        sub.add_argument("--kmax", required=True)
        sub.add_argument("--nmax", required=True)
        sub.add_argument("--jobs")

        sub = add("color", "build an anti-rainbow colouring for a matrix that is not regular")
        sub.add_argument("--N", dest="N", required=True)
        sub.add_argument("--k", required=True)
        sub.add_argument("--write-coloring", help="write the colouring in the 'N k' text format")

        sub = add("enumerate-colorings", "list canonical equinumerous colourings", matrix=False)
        sub.add_argument("--N", dest="N", required=True)
        sub.add_argument("--k", required=True)
        sub.add_argument("--limit")

        sub = add("search", "find a rainbow kernel vector under a colouring (exit 1 when none)")
        sub.add_argument("--coloring", required=True)

        sub = add("robust", "seeded bounded-colouring experiment (exit 1 when a trial fails)")
        sub.add_argument("--k", required=True)
        sub.add_argument("--N", dest="N", required=True)
        sub.add_argument("--eps")
        sub.add_argument("--eps-ratio", dest="eps_ratio")
        sub.add_argument("--trials", required=True)
        sub.add_argument("--seed")
        sub.add_argument("--jobs")

        sub = add("ehrhart", "Ehrhart quasi-polynomial of [0,1]^d ∩ ker(A)")
        sub.add_argument("--tmax")

        sub = add("fib", "verify the Fibonacci-matrix claims", matrix=False)
        sub.add_argument("--d", required=True)
        sub.add_argument("--tmax", required=True)

        sub = add("graph", "check the flow corollary on a graph (exit 1 when no rainbow flow can exist)", matrix=False)
        sub.add_argument("graph", help='graph file: "n m" then m lines "tail head"')
        sub.add_argument("--coloring")

        sub = add("selftest", "run the acceptance suite (exit 1 on any failure)", matrix=False)
        sub.add_argument("--quick", action="store_true")
        sub.add_argument("--seed")

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        handler: Callable[[dict[str, Any]], tuple[dict[str, Any], dict[str, Any], bool]] = getattr(
            self, "_" + subcommand.replace("-", "_")
        )
        started = time.perf_counter()
        try:
            inputs, result, positive = handler(options)
        except (InputFormatError, InvalidParameterError) as exc:
            raise CommandError(str(exc), returncode=2) from exc
        except NotRainbowRegularError as exc:
            raise NegativeVerdict(str(exc)) from exc
        except VerificationError as exc:
            logger.error("%s: internal cross-check failed: %s", subcommand, exc)
            raise NegativeVerdict(f"verification failed: {exc}") from exc
        elapsed = round((time.perf_counter() - started) * 1000)
        logger.info("%s finished in %d ms", subcommand, elapsed)

        report = reports.envelope(subcommand, inputs, result, 0 if positive else 1)
        if options.get("timing"):
            report["timing_ms"] = elapsed
        rendered = reports.render_report(report)
        if options.get("output"):
            write_text(options["output"], rendered)
        self.stdout.write(rendered, ending="")
        if not positive:
            raise NegativeVerdict(f"{subcommand}: negative verdict")

    def _check(self, options):
        matrix = read_matrix(options["matrix"])
        verdict = is_rainbow_regular(matrix)
        result = reports.verdict_result(verdict)
        result["conjectures"] = reports.conjecture_result(evaluate_conjectures(matrix))
        return {"matrix": reports.matrix_payload(matrix)}, result, verdict.regular

    def _rainbow_number(self, options):
        data = _validated(RainbowNumberForm, options, ("kmax", "nmax", "jobs"))
        matrix = read_matrix(options["matrix"])
        estimate = estimate_rainbow_number(
            matrix,
            data["kmax"],
            data["nmax"],
            jobs=data.get("jobs") or rainbow_setting("DEFAULT_JOBS"),
            budget=rainbow_setting("ORBIT_BUDGET"),
        )
        inputs = {"matrix": reports.matrix_payload(matrix), "kmax": data["kmax"], "nmax": data["nmax"]}
        return inputs, reports.estimate_result(estimate), True

    def _color(self, options):
        data = _validated(ColorForm, options, ("N", "k"))
        matrix = read_matrix(options["matrix"])
        size, k = data["N"], data["k"]
        if (matrix.rows, matrix.cols) == (1, 2) and classify_one_by_two(matrix).case is not LemmaCase.ZERO_MATRIX:
            coloring = lemma_coloring(matrix, size, k)
            if find_rainbow(matrix, coloring).found:
                raise VerificationError("multiplicative colouring admits a rainbow vector")
            method = "multiplicative" if classify_one_by_two(matrix).case is LemmaCase.MULTIPLICATIVE else "block"
        else:
            if size % k:
                raise InvalidParameterError(f"k={k} must divide N={size} for an equinumerous colouring")
            coloring = anti_rainbow_coloring(matrix, k, size // k)
            method = "failing_pair"
        if coloring is not None and options.get("write_coloring"):
            write_text(options["write_coloring"], format_coloring(coloring))
        inputs = {"matrix": reports.matrix_payload(matrix), "N": size, "k": k}
        result = {
            "method": method,
            "coloring": reports.coloring_payload(coloring) if coloring is not None else None,
            "equinumerous": coloring.is_equinumerous if coloring is not None else None,
        }
        return inputs, result, coloring is not None

    def _enumerate_colorings(self, options):
        data = _validated(EnumerateForm, options, ("N", "k", "limit"))
        size, k = data["N"], data["k"]
        limit = 10 if data.get("limit") is None else data["limit"]
        listed = []
        for coloring in enumerate_equinumerous(size, k):
            if len(listed) >= limit:
                break
            listed.append(list(coloring.assign))
        result = {"orbit_count": orbit_count(size, k), "colorings": listed}
        return {"N": size, "k": k, "limit": limit}, result, True

    def _search(self, options):
        matrix = read_matrix(options["matrix"])
        coloring = read_coloring(options["coloring"])
        found = find_rainbow(matrix, coloring)
        counts = count_non_rainbow(matrix, coloring)
        inputs = {"matrix": reports.matrix_payload(matrix), "coloring": reports.coloring_payload(coloring)}
        return inputs, reports.search_result(found, counts), found.found

    def _robust(self, options):
        data = _validated(RobustExperimentForm, options, ("k", "N", "eps", "eps_ratio", "trials", "seed", "jobs"))
        matrix = read_matrix(options["matrix"])
        seed = rainbow_setting("DEFAULT_SEED") if data.get("seed") is None else data["seed"]
        report = robust_experiment(
            matrix,
            data["k"],
            data["N"],
            data.get("eps"),
            data["trials"],
            seed,
            jobs=data.get("jobs") or rainbow_setting("DEFAULT_JOBS"),
            epsilon_ratio=data.get("eps_ratio"),
        )
        inputs = {
            "matrix": reports.matrix_payload(matrix),
            "k": data["k"],
            "N": data["N"],
            "eps": data.get("eps"),
            "eps_ratio": data.get("eps_ratio"),
            "trials": data["trials"],
            "seed": seed,
        }
        return inputs, reports.robust_result(report), not report.failures

    def _ehrhart(self, options):
        data = _validated(EhrhartForm, options, ("tmax",))
        matrix = read_matrix(options["matrix"])
        tmax = 6 if data.get("tmax") is None else data["tmax"]
        poly = polytope(matrix)
        qp = ehrhart(poly, rainbow_setting("EHRHART_EXTRA_SAMPLES"))
        counts = [
            {
                "t": t,
                "count": count_dilation(poly, t),
                "interior": count_dilation(poly, t, interior=True),
                "reciprocity": reciprocity_check(qp, poly, t) if t >= 1 else None,
            }
            for t in range(tmax + 1)
        ]
        result = reports.ehrhart_result(poly, qp, counts, qp.leading_coefficient)
        if matrix.cols >= 2 and is_rainbow_regular(matrix).regular:
            constant = robust_constant(matrix, rainbow_setting("EHRHART_EXTRA_SAMPLES"))
            result["robust_constant"] = {"c_squared": constant.c_squared, "c_decimal": constant.decimal()}
        return {"matrix": reports.matrix_payload(matrix), "tmax": tmax}, result, True

    def _fib(self, options):
        data = _validated(FibonacciForm, options, ("d", "tmax"))
        report = check_fibonacci_claims(data["d"], data["tmax"])
        return {"d": data["d"], "tmax": data["tmax"]}, reports.fibonacci_result(report), True

    def _graph(self, options):
        graph = read_graph(options["graph"])
        report = check_corollary(graph, rainbow_setting("FLOW_BOUND"))
        inputs: dict[str, Any] = {"graph": reports.graph_payload(graph)}
        rainbow = None
        positive = report.three_edge_connected
        if options.get("coloring"):
            coloring = read_coloring(options["coloring"])
            inputs["coloring"] = reports.coloring_payload(coloring)
            rainbow = rainbow_flow(graph, coloring, reorient=True)
            positive = rainbow is not None
        result = reports.corollary_result(report, rainbow, colored=bool(options.get("coloring")))
        return inputs, result, positive

    def _selftest(self, options):
        data = _validated(SelftestForm, options, ("seed",))
        seed = rainbow_setting("DEFAULT_SEED") if data.get("seed") is None else data["seed"]
        report = run_selftest(seed, quick=options.get("quick", False))
        result = {"criteria": [criterion.as_dict() for criterion in report.criteria], "passed": report.passed}
        return {"seed": seed, "quick": report.quick}, result, report.passed
