"""
Machine checks for the per-vertex neighborhood bounds, the case tables, coefficient
dominance, the probabilistic bound chain and bound soundness.

Every failure carries a re-runnable counterexample: a profile tuple or the
graph in edge-list form plus k. Mismatches against printed constants are
discrepancies, reported separately from failures.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from bounds import (
    coeff_new,
    coeff_old,
    corollary_min,
    example_family,
    h_old,
    h_star,
    h_star_polynomial,
    is_4perfect,
    is_perfect,
    numeric_min_h_old,
    numeric_min_h_star,
    odd_k_stationary,
)
from domination import expected_size, gamma_k_exact, side_probabilities
from graph_core import (
    BipartiteProfile,
    Bipartition,
    Graph,
    eccentricity,
    k_neighborhood_split,
    power_graph,
    profile,
    require_connected,
    two_color,
)
from utils import ceil_div, get_thread_count, get_tolerances, get_verify_config

logger = logging.getLogger(__name__)

# Published case tables, q = 1..12: (coefficient of delta, constant) per row.
SAME_SIDE_TABLE = {
    1: (0, 0), 2: (1, 1), 3: (1, 1), 4: (1, 0), 5: (1, 0), 6: (2, 1),
    7: (1, 2), 8: (1, 1), 9: (1, 1), 10: (2, 2), 11: (2, 2), 12: (2, 1),
}
CROSS_SIDE_TABLE = {
    1: (0, 0), 2: (0, 0), 3: (0, -1), 4: (0, -1), 5: (1, 0), 6: (1, 0),
    7: (0, 0), 8: (0, 0), 9: (1, 1), 10: (1, 1), 11: (1, 0), 12: (1, 0),
}
TABLE_NAMES = ("same_side_table", "cross_side_table")


@dataclass
class VerificationReport:
    name: str
    checks_run: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: int = 0
    discrepancies: list[dict] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    cells_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, condition: bool, check_name: str, params: dict) -> bool:
        self.checks_run += 1
        if not condition:
            self.failures.append({"check": check_name, "params": params})
            logger.error("Check %s failed: %s", check_name, params)
        return condition

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks_run": self.checks_run,
            "skipped": self.skipped,
            "cells_checked": self.cells_checked,
            "failures": self.failures,
            "discrepancies": self.discrepancies,
            "records": self.records,
        }


def merge_reports(reports: Iterable[VerificationReport], name: str = "merged") -> VerificationReport:
    """Combine reports ordered by check name; each keeps its parameter order."""
    merged = VerificationReport(name)
    for report in sorted(reports, key=lambda r: r.name):
        merged.checks_run += report.checks_run
        merged.skipped += report.skipped
        merged.cells_checked += report.cells_checked
        merged.failures.extend({"report": report.name, **f} for f in report.failures)
        merged.discrepancies.extend({"report": report.name, **d} for d in report.discrepancies)
        merged.records.extend({"report": report.name, **r} for r in report.records)
    return merged


def run_checks(
    jobs: list[tuple[str, Callable[[], VerificationReport]]],
    workers: int | None = None,
    name: str = "merged",
) -> VerificationReport:
    """Run independent checks on a thread pool and merge them deterministically."""
    workers = workers or get_thread_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda job: job[1](), jobs))
    for (job_name, _), report in zip(jobs, reports):
        logger.info(
            "%s: %d checks, %d failures, %d skipped", job_name, report.checks_run,
            len(report.failures), report.skipped,
        )
    return merge_reports(reports, name)


def _graph_params(g: Graph, k: int, **extra) -> dict:
    return {"graph": g.to_edge_list(), "k": k, **extra}


def printed_cross_bound(prof: BipartiteProfile) -> int:
    """Published form of the V2 cross-side bound; exceeds A21 by one when delta2 = 1."""
    k = prof.k
    return ceil_div(k, 4) * max(2, prof.delta2) + (k - 1) // 2 - 2 * ((k - 1) // 4)


# --- Neighborhood checks ---

def check_lemma_vertexwise(g: Graph, b: Bipartition, k: int) -> VerificationReport:
    """
    Compare every vertex's k-neighborhood split with the new and old
    per-side lower bounds. Vertices with N_k[v] = V are skipped.

    Raises:
        NotBipartiteError: b has a monochromatic edge
    """
    report = VerificationReport("lemma_vertexwise")
    b.validate(g)
    require_connected(g)
    prof = profile(g, b, k)
    new, old = coeff_new(prof), coeff_old(prof)
    printed = printed_cross_bound(prof)

    for v in range(g.vertex_count):
        in_v1, in_v2, closed_is_all = k_neighborhood_split(g, b, v, k)
        if closed_is_all:
            report.skipped += 1
            continue

        def params(bound: int, count: int) -> dict:
            return _graph_params(g, k, vertex=v, side=b.side[v], count=count, bound=bound)

        if b.side[v] == 1:
            report.check(in_v1 >= new.a11, "new_same_side_v1", params(new.a11, in_v1))
            report.check(in_v2 >= new.a12, "new_cross_side_v1", params(new.a12, in_v2))
            report.check(in_v1 >= old.a11, "old_same_side_v1", params(old.a11, in_v1))
            report.check(in_v2 >= old.a12, "old_cross_side_v1", params(old.a12, in_v2))
        else:
            holds = report.check(in_v1 >= new.a21, "new_cross_side_v2", params(new.a21, in_v1))
            report.check(in_v2 >= new.a22, "new_same_side_v2", params(new.a22, in_v2))
            report.check(in_v1 >= old.a21, "old_cross_side_v2", params(old.a21, in_v1))
            report.check(in_v2 >= old.a22, "old_same_side_v2", params(old.a22, in_v2))
            if holds and in_v1 < printed:
                report.discrepancies.append({"check": "cross_side_v2_printed_form", **params(printed, in_v1)})
                logger.warning(
                    "Vertex %d (k=%d) has %d V1 vertices within distance k: below printed bound %d, "
                    "meets %d", v, k, in_v1, printed, new.a21,
                )

    logger.info(
        "Neighborhood check k=%d: %d inequalities, %d vertices skipped", k, report.checks_run, report.skipped
    )
    return report


# --- Tables ---

def _table_rows(q: int) -> tuple[tuple[int, int], tuple[int, int]]:
    m = ceil_div(q, 6)
    table1 = (ceil_div(q - 1, 4) - m + 1, m - 1 - 2 * (q // 4) + q // 2)
    table2 = (ceil_div(q, 4) - m, m - 1 - (q - 1) // 2 + 2 * ((q - 1) // 4))
    return table1, table2


def check_tables(delta_max: int | None = None) -> VerificationReport:
    """Recompute both case tables and check coefficient*delta >= constant for delta in 2..delta_max."""
    if delta_max is None:
        delta_max = get_verify_config()["table_delta_max"]
    report = VerificationReport("tables")
    for q in range(1, 13):
        for table_name, computed, printed in zip(TABLE_NAMES, _table_rows(q), (SAME_SIDE_TABLE[q], CROSS_SIDE_TABLE[q])):
            report.cells_checked += 1
            if computed != printed:
                report.discrepancies.append(
                    {"check": table_name, "q": q, "computed": list(computed), "printed": list(printed)}
                )
                logger.warning("%s row q=%d: computed %s, printed %s", table_name, q, computed, printed)
            coefficient, constant = computed
            for delta in range(2, delta_max + 1):
                report.check(
                    coefficient * delta >= constant,
                    f"{table_name}_inequality",
                    {"q": q, "delta": delta, "lhs": coefficient * delta, "rhs": constant},
                )
    return report


# --- Dominance sweep ---

def check_improvement(
    delta_range: int | None = None,
    k_range: int | None = None,
    part_size: int | None = None,
    grid: int | None = None,
) -> VerificationReport:
    """
    New coefficients dominate old ones, the even-k identity holds, and
    h* <= h on a grid, over delta1, delta2 in 1..delta_range, k in 1..k_range.
    """
    config = get_verify_config()
    delta_range = delta_range or config["improvement_delta_range"]
    k_range = k_range or config["improvement_k_range"]
    part_size = part_size or config["improvement_part_size"]
    grid = grid or config["improvement_grid"]
    tol = get_tolerances()["identity_abs"]

    report = VerificationReport("improvement")
    axis = np.linspace(0.0, 1.0, grid)
    p1, p2 = np.meshgrid(axis, axis, indexing="ij")

    for d1 in range(1, delta_range + 1):
        for d2 in range(1, delta_range + 1):
            for k in range(1, k_range + 1):
                prof = BipartiteProfile(part_size, part_size, d1, d2, k)
                params = prof.to_dict()
                new, old = coeff_new(prof), coeff_old(prof)
                for label, a, b in zip(("11", "12", "21", "22"), new.as_tuple(), old.as_tuple()):
                    report.check(a >= b, f"dominance_{label}", {**params, "new": a, "old": b})

                if k % 2 == 0 and d1 >= 2 and d2 >= 2:
                    report.check(new.a11 + 1 == new.a21, "even_k_identity_21", {**params, **new.to_dict()})
                    report.check(new.a22 + 1 == new.a12, "even_k_identity_12", {**params, **new.to_dict()})

                gap = h_star(prof, p1, p2) - h_old(prof, p1, p2)
                worst = np.unravel_index(int(np.argmax(gap)), gap.shape)
                report.check(
                    bool(gap[worst] <= tol),
                    "h_star_below_h",
                    {**params, "p1": float(axis[worst[0]]), "p2": float(axis[worst[1]]), "gap": float(gap[worst])},
                )

                c = (2 * prof.m_ceil - 1) * (min(d1, d2) + 1)
                envelope = prof.n * axis + prof.n * np.exp(-c * axis)
                slack = h_old(prof, axis, axis) - envelope
                report.check(
                    bool(slack.max() <= tol),
                    "h_diagonal_envelope",
                    {**params, "p": float(axis[int(np.argmax(slack))]), "gap": float(slack.max())},
                )

    logger.info("Improvement sweep: %d checks, %d failures", report.checks_run, len(report.failures))
    return report


# --- Graph-level checks ---

def _has_center(g: Graph, k: int) -> bool:
    return any(eccentricity(g, v) <= k for v in range(g.vertex_count))


def check_bound_vs_exact(g: Graph, k: int, node_budget: int | None = None) -> VerificationReport:
    """
    gamma_k <= floor of both numeric minima, unless some vertex reaches
    everything within k (then gamma_k = 1 and the check is skipped).
    """
    report = VerificationReport("bound_vs_exact")
    require_connected(g)
    b = two_color(g)
    if _has_center(g, k):
        report.skipped += 1
        report.records.append(_graph_params(g, k, gamma=1, reason="vertex with eccentricity <= k"))
        return report

    gamma, witness = gamma_k_exact(g, k, node_budget)
    prof = profile(g, b, k)
    new_bound = numeric_min_h_star(prof).value
    old_bound = numeric_min_h_old(prof).value
    slack = get_tolerances()["identity_abs"]

    params = _graph_params(g, k, gamma=gamma, witness=witness.members.to_json(),
                           new_bound=new_bound, old_bound=old_bound)
    report.check(gamma <= math.floor(new_bound + slack), "gamma_below_new_bound", params)
    report.check(gamma <= math.floor(old_bound + slack), "gamma_below_old_bound", params)
    report.records.append({"k": k, "gamma": gamma, "new_bound": new_bound, "old_bound": old_bound})
    return report


def check_power_equivalence(g: Graph, k: int, node_budget: int | None = None) -> VerificationReport:
    """gamma_k(G) = gamma_1(G^k)."""
    report = VerificationReport("power_equivalence")
    direct, _ = gamma_k_exact(g, k, node_budget)
    via_power, _ = gamma_k_exact(power_graph(g, k), 1, node_budget)
    report.check(direct == via_power, "gamma_k_equals_power_gamma",
                 _graph_params(g, k, direct=direct, via_power=via_power))
    report.records.append({"k": k, "gamma": direct})
    return report


def check_bound_chain(g: Graph, k: int, grid: int | None = None) -> VerificationReport:
    """
    On an interior grid of (p1, p2): random-rounding expectation with side
    probabilities <= polynomial form of h* <= h*.
    """
    grid = grid or get_verify_config()["chain_grid"]
    tol = get_tolerances()["identity_abs"]
    report = VerificationReport("bound_chain")
    require_connected(g)
    b = two_color(g)
    if _has_center(g, k):
        report.skipped += 1
        report.records.append(_graph_params(g, k, reason="vertex with N_k[v] = V"))
        return report

    prof = profile(g, b, k)
    interior = np.linspace(0.0, 1.0, grid + 2)[1:-1]
    for p1 in interior:
        for p2 in interior:
            expected = expected_size(g, k, side_probabilities(b, float(p1), float(p2)))
            poly = h_star_polynomial(prof, p1, p2)
            exp_form = h_star(prof, p1, p2)
            params = _graph_params(g, k, p1=float(p1), p2=float(p2), expected=expected,
                                   polynomial=poly, h_star=exp_form)
            report.check(expected <= poly + tol, "expectation_below_polynomial", params)
            report.check(poly <= exp_form + tol, "polynomial_below_h_star", params)
    return report


# --- Symmetric family ---

def check_example_family(delta_max: int | None = None, m_max: int | None = None) -> VerificationReport:
    """The symmetric closed forms agree with the general machinery."""
    config = get_verify_config()
    delta_max = delta_max or config["example_delta_max"]
    m_max = m_max or config["example_m_max"]
    tol = get_tolerances()["identity_abs"]
    report = VerificationReport("example_family")

    for delta in range(2, delta_max + 1):
        for m in range(1, m_max + 1):
            fam = example_family(delta, m)
            part = 2 * delta
            prof = BipartiteProfile(part, part, delta, delta, fam.k)
            params = {**prof.to_dict(), "m": m}

            expected_coeffs = (fam.a_same, fam.a_cross, fam.a_cross, fam.a_same)
            report.check(coeff_new(prof).as_tuple() == expected_coeffs, "family_coefficients",
                         {**params, "coefficients": list(coeff_new(prof).as_tuple())})
            report.check(is_perfect(prof), "family_perfect", params)
            report.check(is_4perfect(prof), "family_4perfect", params)

            point = odd_k_stationary(prof)
            report.check(
                abs(point.e1 - fam.e) <= tol and abs(point.e2 - fam.e) <= tol,
                "family_exponentials", {**params, "e1": point.e1, "e2": point.e2, "expected": fam.e},
            )
            report.check(
                point.feasible and abs(point.p1_star - fam.p) <= tol and abs(point.p2_star - fam.p) <= tol,
                "family_stationary_point",
                {**params, "p1": point.p1_star, "p2": point.p2_star, "expected": fam.p},
            )
            value = corollary_min(prof)
            report.check(abs(value - prof.n * fam.per_vertex_min) <= tol, "family_minimum",
                         {**params, "value": value, "expected": prof.n * fam.per_vertex_min})

            old_per_vertex = (1 + math.log(fam.old_c)) / fam.old_c
            report.check(fam.refines and fam.per_vertex_min <= old_per_vertex + tol, "family_refinement",
                         {**params, "c": fam.c, "old_c": fam.old_c})
    return report
