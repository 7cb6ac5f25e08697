#!/usr/bin/env python3
"""
Distance-domination command line.

Resolves a graph (edge-list file or generator spec) or a profile range, runs
one command, and writes a single JSON document (CSV rows for sweep) to
stdout. Diagnostics and the run summary go to stderr.

Usage:
    python scripts/distdom.py bounds --gen cycle:12 --k 5
    python scripts/distdom.py exact --input graph.txt --k 2
    python scripts/distdom.py construct --gen grid2d:4,5 --k 2 --trials 500 --seed 7
    python scripts/distdom.py verify-tables
    python scripts/distdom.py verify-all --gen random_bipartite:8,9,2,2,0.1 --seed 3 --k 2
    python scripts/distdom.py sweep --n1 20 --n2 30 --delta-max 4 --k-max 12 --format csv

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 exact-search budget exhausted.
"""

import argparse
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path
from typing import TextIO

# Ensure project root is on sys.path
PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import yaml  # noqa: E402
from dotenv import load_dotenv  # noqa: E402

from bounds import bound_report, numeric_min_h_star, profile_sweep  # noqa: E402
from domination import (  # noqa: E402
    expected_size,
    gamma_k_exact,
    greedy_construct,
    random_round_construct,
    side_probabilities,
    trial_mean,
)
from errors import BudgetExhaustedError, DistDomError, PreconditionError  # noqa: E402
from gen import generate, parse_gen_spec  # noqa: E402
from graph_core import Graph, diameter, parse_edge_list, profile, two_color  # noqa: E402
from run_log import RunLog  # noqa: E402
from utils import get_construct_config, get_exact_config, get_minimizer_config, get_sweep_config  # noqa: E402
from verify import (  # noqa: E402
    check_bound_chain,
    check_bound_vs_exact,
    check_example_family,
    check_improvement,
    check_lemma_vertexwise,
    check_power_equivalence,
    check_tables,
    merge_reports,
    run_checks,
)

logger = logging.getLogger(__name__)

COMMANDS = ("bounds", "exact", "construct", "verify-lemma", "verify-tables", "verify-all", "gen", "sweep")
GRAPH_COMMANDS = {"bounds", "exact", "construct", "verify-lemma", "gen"}
K_COMMANDS = {"bounds", "exact", "construct"}

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    gen: str | None = None
    k: int | None = None
    seed: int = 0
    trials: int = 1000
    budget: int = 10_000_000
    tol: float = 1e-12
    output_format: str = "json"
    method: str = "randomized"
    p: float | None = None
    n1: int = 50
    n2: int = 50
    delta_max: int = 10
    k_max: int = 20

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Fill unset flags from config/distdom.yaml."""
        construct = get_construct_config()
        sweep = get_sweep_config()
        output_format = args.format or ("csv" if args.command == "sweep" else "json")
        return cls(
            command=args.command,
            input_path=args.input,
            gen=args.gen,
            k=args.k,
            seed=construct["seed"] if args.seed is None else args.seed,
            trials=construct["trials"] if args.trials is None else args.trials,
            budget=get_exact_config()["node_budget"] if args.budget is None else args.budget,
            tol=get_minimizer_config()["tol"] if args.tol is None else args.tol,
            output_format=output_format,
            method=args.method,
            p=args.p,
            n1=sweep["n1"] if args.n1 is None else args.n1,
            n2=sweep["n2"] if args.n2 is None else args.n2,
            delta_max=sweep["delta_max"] if args.delta_max is None else args.delta_max,
            k_max=sweep["k_max"] if args.k_max is None else args.k_max,
        )

    def validate(self) -> None:
        if self.input_path and self.gen:
            raise PreconditionError("give either --input or --gen, not both")
        if self.command in GRAPH_COMMANDS and not (self.input_path or self.gen):
            raise PreconditionError(f"{self.command} needs a graph: --input FILE or --gen FAMILY:ARGS")
        if self.command in K_COMMANDS and self.k is None:
            raise PreconditionError(f"{self.command} needs --k")
        if self.k is not None and self.k < 1:
            raise PreconditionError(f"--k must be >= 1, got {self.k}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise PreconditionError(f"--p must lie in [0, 1], got {self.p}")
        if self.output_format == "csv" and self.command != "sweep":
            raise PreconditionError("csv output is only available for sweep")

    def inputs(self) -> dict:
        """Resolved inputs echoed into the output document."""
        data = asdict(self)
        data.pop("output_format")
        return data


# --- Graph resolution ---

def load_graph(config: RunConfig) -> Graph | None:
    if config.input_path:
        return parse_edge_list(Path(config.input_path).read_text(encoding="utf-8"))
    if config.gen:
        return generate(parse_gen_spec(config.gen, config.seed))
    return None


def _construct_probabilities(g: Graph, config: RunConfig) -> tuple[np.ndarray, dict]:
    """Uniform --p, else the per-side h* minimizer, else the configured fallback."""
    if config.p is not None:
        return np.full(g.vertex_count, config.p), {"source": "uniform", "p": config.p}
    try:
        b = two_color(g)
        best = numeric_min_h_star(profile(g, b, config.k), config.tol)
    except DistDomError as e:
        fallback = get_construct_config()["fallback_probability"]
        logger.info("Using uniform p=%s: %s", fallback, e.user_message)
        return np.full(g.vertex_count, fallback), {"source": "fallback", "p": fallback}
    return side_probabilities(b, best.p1, best.p2), {"source": "h_star_minimizer", "p1": best.p1, "p2": best.p2}


# --- Commands ---

def _cmd_bounds(g: Graph, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    """Bounds are always reported; an exhausted exact search leaves exact_gamma null and exits 3."""
    with run_log.stage("bounds"):
        report = bound_report(g, config.k, tol=config.tol)
    for lb in report.labelings:
        run_log.record_notes(lb.labeling, lb.notes)

    code = EXIT_OK
    try:
        with run_log.stage("exact"):
            report.exact_gamma, _ = gamma_k_exact(g, config.k, config.budget)
        bracket = [report.exact_gamma, report.exact_gamma]
    except BudgetExhaustedError as e:
        logger.warning("%s", e.user_message)
        run_log.error(e.user_message, detail=e.message)
        bracket = [e.lower_bound, e.upper_bound]
        code = e.exit_code
    run_log.set_metric("exact_gamma", report.exact_gamma)
    return {**report.to_dict(), "exact_bracket": bracket}, code


def _cmd_exact(g: Graph, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    with run_log.stage("exact"):
        gamma, witness = gamma_k_exact(g, config.k, config.budget)
    return {"gamma": gamma, "witness": witness.to_dict()}, EXIT_OK


def _cmd_construct(g: Graph, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    payload = {}
    with run_log.stage("construct"):
        if config.method == "exact":
            _, result = gamma_k_exact(g, config.k, config.budget)
        elif config.method == "greedy":
            result = greedy_construct(g, config.k)
        else:
            probs, source = _construct_probabilities(g, config)
            result = random_round_construct(g, config.k, probs, config.seed)
            payload["probabilities"] = source
            payload["expected_size"] = expected_size(g, config.k, probs)
            payload["trial_stats"] = trial_mean(g, config.k, probs, config.trials, config.seed).to_dict()
    payload["set"] = result.to_dict()
    return payload, EXIT_OK


def _lemma_report(g: Graph, config: RunConfig):
    b = two_color(g)
    radii = [config.k] if config.k is not None else list(range(1, diameter(g)))
    return merge_reports(
        [check_lemma_vertexwise(g, b, k) for k in radii], name="verify-lemma"
    ), radii


def _cmd_verify_lemma(g: Graph, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    with run_log.stage("verify-lemma"):
        report, radii = _lemma_report(g, config)
    run_log.record_verification(report)
    payload = {"radii": radii, **report.to_dict()}
    return payload, EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_verify_tables(g: Graph | None, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    with run_log.stage("verify-tables"):
        report = check_tables()
    run_log.record_verification(report)
    return report.to_dict(), EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_verify_all(g: Graph | None, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    jobs = [
        ("tables", check_tables),
        ("improvement", check_improvement),
        ("example_family", check_example_family),
    ]
    if g is not None:
        b = two_color(g)
        for k in range(1, diameter(g)):
            jobs.append((f"lemma_vertexwise k={k}", partial(check_lemma_vertexwise, g, b, k)))
        if config.k is not None:
            jobs.append(("bound_vs_exact", partial(check_bound_vs_exact, g, config.k, config.budget)))
            jobs.append(("power_equivalence", partial(check_power_equivalence, g, config.k, config.budget)))
            jobs.append(("bound_chain", partial(check_bound_chain, g, config.k)))
    with run_log.stage("verify-all"):
        report = run_checks(jobs, name="verify-all")
    run_log.record_verification(report)
    return report.to_dict(), EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_gen(g: Graph, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    return {
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "edges": [list(e) for e in g.edges()],
        "edge_list": g.to_edge_list(),
    }, EXIT_OK


def _cmd_sweep(g: Graph | None, config: RunConfig, run_log: RunLog) -> tuple[dict, int]:
    with run_log.stage("sweep"):
        rows = profile_sweep(config.n1, config.n2, config.delta_max, config.k_max, config.tol)
    run_log.set_metric("rows", len(rows))
    return {"rows": rows}, EXIT_OK


HANDLERS = {
    "bounds": _cmd_bounds,
    "exact": _cmd_exact,
    "construct": _cmd_construct,
    "verify-lemma": _cmd_verify_lemma,
    "verify-tables": _cmd_verify_tables,
    "verify-all": _cmd_verify_all,
    "gen": _cmd_gen,
    "sweep": _cmd_sweep,
}


def render(config: RunConfig, payload: dict) -> str:
    if config.output_format == "csv":
        buffer = io.StringIO()
        pd.DataFrame(payload["rows"]).to_csv(buffer, index=False)
        return buffer.getvalue()
    if config.output_format == "text":
        if config.command == "gen":
            return payload["edge_list"]
        return yaml.safe_dump(payload, sort_keys=True)
    document = {"command": config.command, "inputs": config.inputs(), "result": payload}
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def run(config: RunConfig, out: TextIO | None = None) -> int:
    """Execute one command; returns the process exit code."""
    out = out or sys.stdout
    run_log = RunLog(config.command)
    try:
        config.validate()
        with run_log.stage("load"):
            g = load_graph(config)
        if g is not None:
            run_log.set_metric("vertices", g.vertex_count)
            run_log.set_metric("edges", g.edge_count)
        payload, code = HANDLERS[config.command](g, config, run_log)
    except DistDomError as e:
        logger.error("%s", e.user_message)
        logger.debug("Detail: %s", e.message)
        run_log.error(e.user_message, detail=e.message)
        code = e.exit_code
        payload = None
    except OSError as e:
        logger.error("Cannot read input: %s", e)
        run_log.error("Cannot read input", detail=str(e))
        code = EXIT_USAGE
        payload = None

    if payload is not None:
        out.write(render(config, payload))
        out.flush()
    run_log.set_metric("exit_code", code)
    level = logging.WARNING if run_log.failed else logging.INFO
    logger.log(level, "Run summary: %s", json.dumps(run_log.to_summary(), sort_keys=True))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="k-distance domination of bipartite graphs")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", help="Edge-list file")
    source.add_argument("--gen", help="Generator spec FAMILY:ARGS, e.g. cycle:12")
    parser.add_argument("--k", type=int, help="Domination radius")
    parser.add_argument("--seed", type=int, help="Seed for generators and random rounding")
    parser.add_argument("--trials", type=int, help="Random-rounding trials")
    parser.add_argument("--budget", type=int, help="Exact-search node budget")
    parser.add_argument("--tol", type=float, help="Numeric minimizer tolerance")
    parser.add_argument("--format", choices=("json", "csv", "text"), help="Output format")
    parser.add_argument("--method", choices=("exact", "greedy", "randomized"), default="randomized",
                        help="Construction method for `construct`")
    parser.add_argument("--p", type=float, help="Uniform inclusion probability for random rounding")
    parser.add_argument("--n1", type=int, help="Sweep part size n1")
    parser.add_argument("--n2", type=int, help="Sweep part size n2")
    parser.add_argument("--delta-max", type=int, help="Sweep maximum degree")
    parser.add_argument("--k-max", type=int, help="Sweep maximum radius")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)

    # Logging
    level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )
    load_dotenv()

    try:
        config = RunConfig.from_args(args)
    except DistDomError as e:
        logger.error("%s", e.user_message)
        sys.exit(e.exit_code)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
