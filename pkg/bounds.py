"""
Closed-form upper bounds for the k-distance domination number of a
connected bipartite graph.

Two families of neighborhood coefficients feed the same surface
    n1*p1 + n1*exp(-p1*(X11+1) - p2*X12) + n2*p2 + n2*exp(-p1*X21 - p2*(X22+1)):
the "old" ceil(k/6)-based coefficients give h, the sharper "new"
ceil(k/4)-based coefficients give h*. This module evaluates both surfaces,
their closed-form minima (even k, odd-k stationary point) and a numeric
minimizer that serves as fallback and oracle.

Integer formulas use exact integer arithmetic; surfaces use float64.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from domination import gamma_k_exact
from errors import (
    BoundConsistencyError,
    CorollaryInapplicableError,
    DegenerateProfileError,
    PreconditionError,
    SingularSystemError,
)
from graph_core import BipartiteProfile, Graph, eccentricity, profile, require_connected, two_color
from utils import ceil_div, get_minimizer_config, get_thread_count, get_tolerances

logger = logging.getLogger(__name__)


# --- Coefficients ---

@dataclass(frozen=True)
class BoundCoefficients:
    """Per-vertex neighborhood lower bounds; a_ij bounds |N_k(v) ∩ V_j| for v in V_i."""

    a11: int
    a12: int
    a21: int
    a22: int
    m_ceil: int
    flavor: str  # "new" or "old"

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a11, self.a12, self.a21, self.a22)

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "a11": self.a11,
            "a12": self.a12,
            "a21": self.a21,
            "a22": self.a22,
            "m_ceil": self.m_ceil,
        }


def coeff_new(prof: BipartiteProfile) -> BoundCoefficients:
    """A11..A22 from the ceil(k/4)-based neighborhood bounds."""
    k, d1, d2 = prof.k, prof.delta1, prof.delta2
    same_side = 2 * (k // 4) - k // 2
    cross_side = (k - 1) // 2 - 2 * ((k - 1) // 4)
    return BoundCoefficients(
        a11=ceil_div(k - 1, 4) * max(2, d2) + same_side,
        a12=d1 + (ceil_div(k, 4) - 1) * max(2, d1) + cross_side,
        a21=d2 + (ceil_div(k, 4) - 1) * max(2, d2) + cross_side,
        a22=ceil_div(k - 1, 4) * max(2, d1) + same_side,
        m_ceil=prof.m_ceil,
        flavor="new",
    )


def coeff_old(prof: BipartiteProfile) -> BoundCoefficients:
    """B11..B22 from the ceil(k/6)-based neighborhood bounds."""
    m, d1, d2 = prof.m_ceil, prof.delta1, prof.delta2
    return BoundCoefficients(
        a11=(m - 1) * (d2 + 1),
        a12=m * (d1 + 1) - 1,
        a21=m * (d2 + 1) - 1,
        a22=(m - 1) * (d1 + 1),
        m_ceil=m,
        flavor="old",
    )


# --- Surfaces ---

def _exponents(c: BoundCoefficients, p1, p2):
    first = np.exp(-p1 * (c.a11 + 1) - p2 * c.a12)
    second = np.exp(-p1 * c.a21 - p2 * (c.a22 + 1))
    return first, second


def _surface(prof: BipartiteProfile, c: BoundCoefficients, p1, p2):
    first, second = _exponents(c, p1, p2)
    value = prof.n1 * (p1 + first) + prof.n2 * (p2 + second)
    return float(value) if np.ndim(value) == 0 else value


def _surface_gradient(prof: BipartiteProfile, c: BoundCoefficients, p1: float, p2: float) -> tuple[float, float]:
    first, second = _exponents(c, p1, p2)
    d1 = prof.n1 - prof.n1 * (c.a11 + 1) * first - prof.n2 * c.a21 * second
    d2 = prof.n2 - prof.n1 * c.a12 * first - prof.n2 * (c.a22 + 1) * second
    return float(d1), float(d2)


def h_star(prof: BipartiteProfile, p1, p2):
    """h*(p1, p2); accepts scalars or broadcastable arrays."""
    return _surface(prof, coeff_new(prof), np.asarray(p1, dtype=float), np.asarray(p2, dtype=float))


def h_old(prof: BipartiteProfile, p1, p2):
    """h(p1, p2): the h* shape with the ceil(k/6) coefficients."""
    return _surface(prof, coeff_old(prof), np.asarray(p1, dtype=float), np.asarray(p2, dtype=float))


def h_star_gradient(prof: BipartiteProfile, p1: float, p2: float) -> tuple[float, float]:
    """(dh*/dp1, dh*/dp2)."""
    return _surface_gradient(prof, coeff_new(prof), p1, p2)


def h_star_polynomial(prof: BipartiteProfile, p1, p2):
    """
    h* before 1 - x <= exp(-x) is applied; never exceeds h*.

    n1[p1 + (1-p1)^(A11+1) (1-p2)^A12] + n2[p2 + (1-p1)^A21 (1-p2)^(A22+1)]
    """
    c = coeff_new(prof)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    q1, q2 = 1.0 - p1, 1.0 - p2
    value = (
        prof.n1 * (p1 + q1 ** (c.a11 + 1) * q2 ** c.a12)
        + prof.n2 * (p2 + q1 ** c.a21 * q2 ** (c.a22 + 1))
    )
    return float(value) if np.ndim(value) == 0 else value


# --- Numeric minimization on [0,1]^2 ---

class SurfaceMinimum(NamedTuple):
    p1: float
    p2: float
    value: float


def _minimize_on_square(fn, grad, tol: float) -> SurfaceMinimum:
    """Grid scan, L-BFGS-B polish, then bounded coordinate line searches."""
    config = get_minimizer_config()
    axis = np.linspace(0.0, 1.0, int(config["grid_steps"]) + 1)
    grid1, grid2 = np.meshgrid(axis, axis, indexing="ij")
    values = fn(grid1, grid2)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    best = np.array([axis[i], axis[j]])
    best_value = float(values[i, j])

    polished = minimize(
        lambda x: fn(x[0], x[1]),
        best,
        jac=lambda x: np.asarray(grad(x[0], x[1])),
        method="L-BFGS-B",
        bounds=[(0.0, 1.0), (0.0, 1.0)],
        options={"ftol": tol, "gtol": tol},
    )
    candidate = np.clip(polished.x, 0.0, 1.0)
    candidate_value = fn(candidate[0], candidate[1])
    if candidate_value < best_value:
        best, best_value = candidate, candidate_value

    sweep = 0
    for sweep in range(int(config["max_sweeps"])):
        before = best_value
        for index in (0, 1):
            def line(t, index=index):
                point = best.copy()
                point[index] = t
                return fn(point[0], point[1])

            result = minimize_scalar(line, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
            value, t = min((float(result.fun), float(result.x)), (line(0.0), 0.0), (line(1.0), 1.0))
            if value < best_value:
                best = best.copy()
                best[index] = t
                best_value = value
        if before - best_value < tol:
            break

    logger.debug("Surface minimum %.12f at (%.6f, %.6f) after %d sweeps", best_value, best[0], best[1], sweep + 1)
    return SurfaceMinimum(float(best[0]), float(best[1]), float(best_value))


def numeric_min_h_star(prof: BipartiteProfile, tol: float | None = None) -> SurfaceMinimum:
    """Deterministic minimum of h* over the closed unit square."""
    if tol is None:
        tol = get_minimizer_config()["tol"]
    if tol <= 0:
        raise PreconditionError(f"tol must be > 0, got {tol}")
    c = coeff_new(prof)
    return _minimize_on_square(
        lambda a, b: _surface(prof, c, a, b),
        lambda a, b: _surface_gradient(prof, c, a, b),
        tol,
    )


def numeric_min_h_old(prof: BipartiteProfile, tol: float | None = None) -> SurfaceMinimum:
    """Deterministic minimum of h over the closed unit square."""
    if tol is None:
        tol = get_minimizer_config()["tol"]
    if tol <= 0:
        raise PreconditionError(f"tol must be > 0, got {tol}")
    c = coeff_old(prof)
    return _minimize_on_square(
        lambda a, b: _surface(prof, c, a, b),
        lambda a, b: _surface_gradient(prof, c, a, b),
        tol,
    )


def h_old_diagonal_min(prof: BipartiteProfile) -> tuple[float, float]:
    """(p, h(p, p)) minimizing h on the diagonal of [0,1]^2."""
    result = minimize_scalar(lambda p: h_old(prof, p, p), bounds=(0.0, 1.0), method="bounded",
                             options={"xatol": 1e-12})
    value, p = min((float(result.fun), float(result.x)), (h_old(prof, 0.0, 0.0), 0.0), (h_old(prof, 1.0, 1.0), 1.0))
    return p, value


# --- Old closed forms ---

def is_perfect(prof: BipartiteProfile) -> bool:
    """
    Perfectness predicate in its defining form, cross-checked against the
    equivalent chain n1 - n2*d2 < M[n1(d1+1) - n2(d2+1)] < n1*d1 - n2.
    """
    n1, n2, d1, d2, m = prof.n1, prof.n2, prof.delta1, prof.delta2, prof.m_ceil
    defining = (
        d1 * d2 > 1
        and n1 * (m * (d1 + 1) - 1) > n2 * ((m - 1) * (d2 + 1) + 1)
        and n2 * (m * (d2 + 1) - 1) > n1 * ((m - 1) * (d1 + 1) + 1)
    )
    middle = m * (n1 * (d1 + 1) - n2 * (d2 + 1))
    chain = d1 * d2 > 1 and n1 - n2 * d2 < middle < n1 * d1 - n2
    if defining != chain:
        raise BoundConsistencyError("perfect predicate", defining, chain)
    return defining


def _finite_or_none(x: float) -> float | None:
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class TianXuPoint:
    """The (p1, p2, u, v) point of the ceil(k/6)-based bound."""

    p1: float
    p2: float
    u: float
    v: float
    valid: bool
    h_value: float
    clamped: bool

    def to_dict(self) -> dict:
        return {
            "p1": _finite_or_none(self.p1),
            "p2": _finite_or_none(self.p2),
            "u": self.u,
            "v": self.v,
            "valid": self.valid,
            "h_value": self.h_value,
            "clamped": self.clamped,
        }


def tian_xu_point(prof: BipartiteProfile) -> TianXuPoint:
    """
    Evaluate u, v, p1, p2 and h(p1, p2).

    When the point is invalid (u or v nonpositive, or p outside (0,1)), h is
    evaluated at the point clamped into [0,1]^2 with undefined coordinates
    set to 0.5, and the result is flagged as clamped.

    Raises:
        DegenerateProfileError: delta1 * delta2 == 1
    """
    n1, n2, d1, d2, m = prof.n1, prof.n2, prof.delta1, prof.delta2, prof.m_ceil
    scale = (2 * m - 1) * (d1 * d2 - 1)
    if scale == 0:
        raise DegenerateProfileError(d1, d2)

    inner1, outer1 = (m - 1) * (d1 + 1) + 1, m * (d1 + 1) - 1
    inner2, outer2 = (m - 1) * (d2 + 1) + 1, m * (d2 + 1) - 1
    u = (n2 * outer2 - n1 * inner1) / (n1 * scale)
    v = (n1 * outer1 - n2 * inner2) / (n2 * scale)

    if u > 0 and v > 0:
        log_u, log_v = math.log(u), math.log(v)
        p1 = (inner1 * log_u - outer1 * log_v) / scale
        p2 = (inner2 * log_v - outer2 * log_u) / scale
    else:
        p1 = p2 = math.nan

    valid = u > 0 and v > 0 and 0 < p1 < 1 and 0 < p2 < 1
    if valid:
        h_value = h_old(prof, p1, p2)
    else:
        at1 = 0.5 if math.isnan(p1) else min(max(p1, 0.0), 1.0)
        at2 = 0.5 if math.isnan(p2) else min(max(p2, 0.0), 1.0)
        h_value = h_old(prof, at1, at2)
        logger.warning(
            "Ceil(k/6) point invalid for %s (u=%.6g, v=%.6g); h evaluated at clamped (%.4f, %.4f)",
            prof, u, v, at1, at2,
        )
    return TianXuPoint(p1, p2, u, v, valid, h_value, clamped=not valid)


def tian_xu_closing_bound(n: int, delta: int, m: int) -> float:
    """n(1 + ln c)/c with c = (2M-1)(delta+1)."""
    c = (2 * m - 1) * (delta + 1)
    if c < 2:
        raise PreconditionError(f"(2M-1)(delta+1) must be >= 2, got {c}")
    return n * (1 + math.log(c)) / c


# --- Even k ---

@dataclass(frozen=True)
class EvenKMinimum:
    """Closed-form minimum of h* for even k, or case "none"."""

    value: float | None
    case_tag: str  # "i", "ii", "iii" or "none"
    T: float
    ratio_12: float
    ratio_21: float
    argmin: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "case": self.case_tag,
            "T": self.T,
            "ratio_12": self.ratio_12,
            "ratio_21": self.ratio_21,
            "argmin": self.argmin,
        }


def even_k_min(prof: BipartiteProfile) -> EvenKMinimum:
    """
    Minimum of h* on [0,1]^2 for even k with delta1, delta2 >= 2.

    With A11+1 = A21 and A22+1 = A12, h* = n1 p1 + n2 p2 + n exp(-p1 A21 - p2 A12).
    Ratios nA12/n2 and nA21/n1 are compared exactly as A12*n1 vs A21*n2.

    Raises:
        PreconditionError: k odd, or delta1 or delta2 below 2
    """
    if prof.k % 2:
        raise PreconditionError(f"even-k minimum needs even k, got k={prof.k}")
    if prof.delta1 < 2 or prof.delta2 < 2:
        raise PreconditionError(
            f"even-k minimum needs delta1, delta2 >= 2 (got {prof.delta1}, {prof.delta2}); "
            "use numeric_min_h_star"
        )
    c = coeff_new(prof)
    if c.a11 + 1 != c.a21 or c.a22 + 1 != c.a12:
        raise BoundConsistencyError("even-k coefficient identity", c.as_tuple(), (c.a21 - 1, c.a12 - 1))

    n, n1, n2 = prof.n, prof.n1, prof.n2
    ratio_12 = n * c.a12 / n2
    ratio_21 = n * c.a21 / n1
    T = max(ratio_12, ratio_21)
    left, right = c.a12 * n1, c.a21 * n2

    if left == right:
        case_tag = "i"
        ends = (math.log(T) / c.a21, math.log(T) / c.a12)
        # endpoint j equals (ln(n/n_j) + ln A)/A, capped by the peak of that curve
        caps = (log_ratio_peak(math.log(n / n1))[1], log_ratio_peak(math.log(n / n2))[1])
        for end, cap in zip(ends, caps):
            if end > cap + get_tolerances()["identity_abs"]:
                raise BoundConsistencyError("segment endpoint below log-ratio peak", end, cap)
        argmin = {
            "kind": "segment",
            "line": "p1*A21 + p2*A12 = ln T",
            "endpoints": [[ends[0], 0.0], [0.0, ends[1]]],
            "endpoint_caps": list(caps),
            "inside_square": min(ends) < 1,
        }
    elif left < right and math.log(ratio_21) / c.a21 < 1:
        case_tag = "ii"
        argmin = {"kind": "point", "p1": math.log(ratio_21) / c.a21, "p2": 0.0}
    elif left > right and math.log(ratio_12) / c.a12 < 1:
        case_tag = "iii"
        argmin = {"kind": "point", "p1": 0.0, "p2": math.log(ratio_12) / c.a12}
    else:
        logger.info("Even-k closed form does not apply to %s; numeric minimum only", prof)
        return EvenKMinimum(None, "none", T, ratio_12, ratio_21)

    value = n * (1 + math.log(T)) / T
    return EvenKMinimum(value, case_tag, T, ratio_12, ratio_21, argmin)


def log_ratio_peak(a: float) -> tuple[float, float, bool]:
    """Peak of f(x) = (a + ln x)/x: (x*, f(x*), a < 1)."""
    return math.exp(1 - a), math.exp(a - 1), a < 1


# --- Odd k ---

@dataclass(frozen=True)
class StationaryPoint:
    """Interior critical point of h* for odd k."""

    e1: float
    e2: float
    p1_star: float
    p2_star: float
    determinant: int
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "e1": self.e1,
            "e2": self.e2,
            "p1_star": _finite_or_none(self.p1_star),
            "p2_star": _finite_or_none(self.p2_star),
            "determinant": self.determinant,
            "feasible": self.feasible,
        }


def _require_odd(prof: BipartiteProfile) -> None:
    if prof.k % 2 == 0:
        raise PreconditionError(f"stationary analysis needs odd k, got k={prof.k}")


def _stationary_numerators(prof: BipartiteProfile, c: BoundCoefficients) -> tuple[int, int, int]:
    det = (c.a11 + 1) * (c.a22 + 1) - c.a12 * c.a21
    if det == 0:
        raise SingularSystemError(c.as_tuple())
    e1_num = prof.n2 * (c.a11 + 1) - prof.n1 * c.a12
    e2_num = prof.n1 * (c.a22 + 1) - prof.n2 * c.a21
    return det, e1_num, e2_num


def odd_k_stationary(prof: BipartiteProfile) -> StationaryPoint:
    """
    Solve grad h* = 0 for odd k.

    First n1(A11+1) x + n2 A21 y = n1, n1 A12 x + n2 (A22+1) y = n2 with
    x = E2, y = E1; then, when both are positive,
    (A11+1) P1 + A12 P2 = -ln E2, A21 P1 + (A22+1) P2 = -ln E1.

    Raises:
        PreconditionError: k even
        SingularSystemError: (A11+1)(A22+1) == A12*A21
    """
    _require_odd(prof)
    c = coeff_new(prof)
    det, e1_num, e2_num = _stationary_numerators(prof, c)
    e1 = e1_num / (prof.n2 * det)
    e2 = e2_num / (prof.n1 * det)

    system = np.array([
        [prof.n1 * (c.a11 + 1), prof.n2 * c.a21],
        [prof.n1 * c.a12, prof.n2 * (c.a22 + 1)],
    ], dtype=float)
    solved = np.linalg.solve(system, np.array([prof.n1, prof.n2], dtype=float))
    if not np.allclose(solved, [e2, e1], rtol=0.0, atol=get_tolerances()["identity_abs"]):
        raise BoundConsistencyError("stationary exponentials", (e2, e1), tuple(solved))

    # signs from integers so E = 0 never passes as a rounding residue
    positive = e1_num * det > 0 and e2_num * det > 0
    if not positive:
        return StationaryPoint(e1, e2, math.nan, math.nan, det, False)

    log_e1, log_e2 = math.log(e1), math.log(e2)
    p1 = ((c.a22 + 1) * log_e2 - c.a12 * log_e1) / (c.a12 * c.a21 - (c.a11 + 1) * (c.a22 + 1))
    p2 = (c.a21 * log_e2 - (c.a11 + 1) * log_e1) / det
    exponents = np.array([[c.a11 + 1, c.a12], [c.a21, c.a22 + 1]], dtype=float)
    solved = np.linalg.solve(exponents, np.array([-log_e2, -log_e1]))
    if not np.allclose(solved, [p1, p2], rtol=0.0, atol=get_tolerances()["identity_abs"]):
        raise BoundConsistencyError("stationary probabilities", (p1, p2), tuple(solved))

    feasible = 0 < p1 < 1 and 0 < p2 < 1
    if feasible:
        _check_stationarity(prof, p1, p2)
    return StationaryPoint(e1, e2, p1, p2, det, feasible)


def stationarity_residuals(
    prof: BipartiteProfile, p1: float, p2: float, step: float | None = None
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Analytic h* gradient at (p1, p2) and its central-difference estimate."""
    if step is None:
        step = get_tolerances()["finite_difference_step"]
    central = (
        (h_star(prof, p1 + step, p2) - h_star(prof, p1 - step, p2)) / (2 * step),
        (h_star(prof, p1, p2 + step) - h_star(prof, p1, p2 - step)) / (2 * step),
    )
    return h_star_gradient(prof, p1, p2), central


def _check_stationarity(prof: BipartiteProfile, p1: float, p2: float) -> None:
    tol = get_tolerances()["stationarity"]
    analytic, central = stationarity_residuals(prof, p1, p2)
    if max(abs(g) for g in analytic) > tol:
        logger.warning("h* gradient %s at stationary point of %s exceeds %.1e", analytic, prof, tol)
    # central differences: rounding grows with h*, held to tol * n
    if max(abs(g) for g in central) > tol * prof.n:
        logger.warning("Central differences %s at stationary point of %s exceed %.1e", central, prof, tol * prof.n)


def is_4perfect(prof: BipartiteProfile) -> bool:
    """E1 > 0 and E2 > 0 at the odd-k stationary point."""
    _require_odd(prof)
    det, e1_num, e2_num = _stationary_numerators(prof, coeff_new(prof))
    return e1_num * det > 0 and e2_num * det > 0


def corollary_min(prof: BipartiteProfile) -> float:
    """
    n1(E2 + P1) + n2(E1 + P2) at a feasible stationary point.

    Raises:
        CorollaryInapplicableError: stationary point outside (0,1)^2 or E <= 0
    """
    point = odd_k_stationary(prof)
    if not point.feasible:
        if point.e1 <= 0 or point.e2 <= 0:
            reason = f"not 4-perfect (E1={point.e1:.6g}, E2={point.e2:.6g})"
        else:
            reason = f"stationary point ({point.p1_star:.6g}, {point.p2_star:.6g}) outside (0,1)^2"
        raise CorollaryInapplicableError(reason)

    value = prof.n1 * (point.e2 + point.p1_star) + prof.n2 * (point.e1 + point.p2_star)
    direct = h_star(prof, point.p1_star, point.p2_star)
    if abs(value - direct) > get_tolerances()["identity_abs"]:
        raise BoundConsistencyError("corollary value", value, direct)
    return value


# --- Symmetric family ---

@dataclass(frozen=True)
class ExampleFamily:
    """Closed forms for n1 = n2, delta1 = delta2 = delta, k = 4m + 1."""

    delta: int
    m: int
    k: int
    a_same: int
    a_cross: int
    c: int
    e: float
    p: float
    per_vertex_min: float
    old_c: int

    @property
    def refines(self) -> bool:
        return self.c >= self.old_c

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "m": self.m,
            "k": self.k,
            "a_same": self.a_same,
            "a_cross": self.a_cross,
            "c": self.c,
            "e": self.e,
            "p": self.p,
            "per_vertex_min": self.per_vertex_min,
            "old_c": self.old_c,
            "refines": self.refines,
        }


def example_family(delta: int, m: int) -> ExampleFamily:
    if delta < 2 or m < 1:
        raise PreconditionError(f"symmetric family needs delta >= 2 and m >= 1, got {delta}, {m}")
    k = 4 * m + 1
    c = (2 * m + 1) * delta + 1
    return ExampleFamily(
        delta=delta,
        m=m,
        k=k,
        a_same=m * delta,
        a_cross=(m + 1) * delta,
        c=c,
        e=1 / c,
        p=math.log(c) / c,
        per_vertex_min=(1 + math.log(c)) / c,
        old_c=(2 * ceil_div(k, 6) - 1) * (delta + 1),
    )


# --- Reports ---

@dataclass
class LabelingBounds:
    """Every bound quantity for one part labeling."""

    labeling: str
    profile: BipartiteProfile
    coeff_new: BoundCoefficients
    coeff_old: BoundCoefficients
    perfect: bool
    numeric_new: SurfaceMinimum
    numeric_old: SurfaceMinimum
    diagonal_old: tuple[float, float]
    closing_bound: float
    method_tag: str
    closed_form: float | None = None
    tian_xu: TianXuPoint | None = None
    even_k: EvenKMinimum | None = None
    stationary: StationaryPoint | None = None
    four_perfect: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def new_min(self) -> float:
        if self.closed_form is None:
            return self.numeric_new.value
        return min(self.closed_form, self.numeric_new.value)

    @property
    def old_min(self) -> float:
        return self.numeric_old.value

    def to_dict(self) -> dict:
        return {
            "labeling": self.labeling,
            "profile": self.profile.to_dict(),
            "coefficients_new": self.coeff_new.to_dict(),
            "coefficients_old": self.coeff_old.to_dict(),
            "perfect": self.perfect,
            "four_perfect": self.four_perfect,
            "method_tag": self.method_tag,
            "closed_form": self.closed_form,
            "numeric_new": self.numeric_new._asdict(),
            "numeric_old": self.numeric_old._asdict(),
            "diagonal_old": {"p": self.diagonal_old[0], "value": self.diagonal_old[1]},
            "closing_bound": self.closing_bound,
            "tian_xu": self.tian_xu.to_dict() if self.tian_xu else None,
            "even_k": self.even_k.to_dict() if self.even_k else None,
            "stationary": self.stationary.to_dict() if self.stationary else None,
            "new_min": self.new_min,
            "old_min": self.old_min,
            "notes": list(self.notes),
        }


def profile_bounds(prof: BipartiteProfile, labeling: str = "canonical", tol: float | None = None) -> LabelingBounds:
    """Evaluate every applicable bound on one profile."""
    tolerances = get_tolerances()
    result = LabelingBounds(
        labeling=labeling,
        profile=prof,
        coeff_new=coeff_new(prof),
        coeff_old=coeff_old(prof),
        perfect=is_perfect(prof),
        numeric_new=numeric_min_h_star(prof, tol),
        numeric_old=numeric_min_h_old(prof, tol),
        diagonal_old=h_old_diagonal_min(prof),
        closing_bound=tian_xu_closing_bound(prof.n, min(prof.delta1, prof.delta2), prof.m_ceil),
        method_tag="numeric",
    )

    try:
        result.tian_xu = tian_xu_point(prof)
        if result.tian_xu.clamped:
            result.notes.append("ceil(k/6) point outside its hypotheses; h evaluated at clamped point")
    except DegenerateProfileError as e:
        result.notes.append(e.user_message)

    if prof.k % 2 == 0:
        try:
            result.even_k = even_k_min(prof)
        except PreconditionError as e:
            result.notes.append(e.user_message)
        else:
            if result.even_k.value is not None:
                result.closed_form = result.even_k.value
                result.method_tag = f"even_k_case_{result.even_k.case_tag}"
            else:
                result.method_tag = "even_k_none"
    else:
        try:
            result.stationary = odd_k_stationary(prof)
            result.four_perfect = result.stationary.e1 > 0 and result.stationary.e2 > 0
            result.closed_form = corollary_min(prof)
            result.method_tag = "odd_k_corollary"
        except CorollaryInapplicableError as e:
            result.notes.append(e.user_message)
        except SingularSystemError as e:
            result.notes.append(e.user_message)

    if result.closed_form is not None:
        gap = abs(result.closed_form - result.numeric_new.value)
        if gap > tolerances["minimizer_rel"] * max(1.0, abs(result.closed_form)):
            logger.warning(
                "Closed form %.10f and numeric minimum %.10f disagree on %s",
                result.closed_form, result.numeric_new.value, prof,
            )
            result.notes.append(f"closed form and numeric minimum differ by {gap:.3g}")
    return result


@dataclass
class BoundReport:
    """Bounds for both part labelings of one graph and radius."""

    profile: BipartiteProfile
    new_min: float
    old_min: float
    method_tags: dict[str, str]
    perfect: bool
    four_perfect: bool
    labelings: list[LabelingBounds]
    radius: int
    exact_gamma: int | None = None

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "new_min": self.new_min,
            "old_min": self.old_min,
            "method_tags": dict(self.method_tags),
            "perfect": self.perfect,
            "four_perfect": self.four_perfect,
            "radius": self.radius,
            "exact_gamma": self.exact_gamma,
            "labelings": [lb.to_dict() for lb in self.labelings],
        }


def bound_report(g: Graph, k: int, exact_budget: int | None = None, tol: float | None = None) -> BoundReport:
    """
    Bounds for the canonical and the swapped labeling of g.

    exact_budget=None skips the exact domination number.

    Raises:
        DisconnectedGraphError, NotBipartiteError, IsolatedVertexError
        BoundConsistencyError: new_min exceeds old_min beyond tolerance
        BudgetExhaustedError: from the optional exact search
    """
    require_connected(g)
    canonical = two_color(g)
    labelings = [
        profile_bounds(profile(g, canonical, k), "canonical", tol),
        profile_bounds(profile(g, canonical.swapped(), k), "swapped", tol),
    ]
    new_min = min(lb.new_min for lb in labelings)
    old_min = min(lb.old_min for lb in labelings)
    if new_min > old_min + get_tolerances()["identity_abs"]:
        raise BoundConsistencyError("new_min <= old_min", new_min, old_min)

    radius = min(eccentricity(g, v) for v in range(g.vertex_count))
    report = BoundReport(
        profile=labelings[0].profile,
        new_min=new_min,
        old_min=old_min,
        method_tags={lb.labeling: lb.method_tag for lb in labelings},
        perfect=labelings[0].perfect,
        four_perfect=bool(labelings[0].four_perfect),
        labelings=labelings,
        radius=radius,
    )
    if exact_budget is not None:
        report.exact_gamma, _ = gamma_k_exact(g, k, exact_budget)

    logger.info("Bound report k=%d: new_min=%.6f old_min=%.6f tags=%s", k, new_min, old_min, report.method_tags)
    return report


def profile_sweep(n1: int, n2: int, delta_max: int, k_max: int, tol: float | None = None) -> list[dict]:
    """One row per admissible (delta1, delta2, k); rows in parameter order."""
    profiles = [
        BipartiteProfile(n1, n2, d1, d2, k)
        for d1 in range(1, min(delta_max, n2) + 1)
        for d2 in range(1, min(delta_max, n1) + 1)
        for k in range(1, k_max + 1)
    ]

    def row(prof: BipartiteProfile) -> dict:
        lb = profile_bounds(prof, tol=tol)
        return {
            **prof.to_dict(),
            "m_ceil": prof.m_ceil,
            "new_min": lb.new_min,
            "old_min": lb.old_min,
            "closed_form": lb.closed_form,
            "method_tag": lb.method_tag,
            "perfect": lb.perfect,
            "four_perfect": lb.four_perfect,
            "closing_bound": lb.closing_bound,
        }

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        rows = list(pool.map(row, profiles))
    logger.info("Profile sweep: %d rows (n1=%d, n2=%d)", len(rows), n1, n2)
    return rows
