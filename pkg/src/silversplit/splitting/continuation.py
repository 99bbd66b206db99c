"""
Continuation of the four critical points along a log-uniform grid in eps.

Points are tracked from one grid value to the next by nearest-neighbour
matching on the theta torus. Anything that makes the count or identity of the
points uncertain (a failed solve, two points within MERGE_TOL, an ambiguous
match, a basin scan finding more or fewer than four roots) becomes a flag on
the row; the sweep itself never stops on such a finding.
"""

__all__ = ["ContinuationRow", "ContinuationReport", "log_grid", "point_entry", "solve_escalated", "continuation_sweep"]

import math

import attrs
import numpy as np

from silversplit.exceptions import DomainError, HypothesisError, ConvergenceError
from silversplit.messages import status_message, warning_message, debug_message
from silversplit.resonances import DEFAULT_PRECISION
from silversplit.phases import ZeroPhases, primary_defects, CRITICAL_DEFECT
from silversplit.splitting.model import build_model, transversality
from silversplit.splitting.solver import (
    ETA_FACTOR, solve_full_critical_points, min_eigenvalue_estimate, torus_distance,
)

NEAR_DEGENERATE_E = 0.02
ESCALATION_LN_ETA = math.log(1e-12)
ESCALATION_BITS = 64
PRECISION_TOL = 1e-9


@attrs.frozen
class ContinuationRow:
    eps: float
    n: int
    Q: float
    Q_tilde: float
    d_tau: float
    d_tau1: float
    E_plus: float
    E_minus: float
    E_star: float
    # per point: (theta1, theta2, det_scaled, ln_m_star, m_star ratio, flag)
    points: tuple
    flags: tuple

    @classmethod
    def from_points(cls, model, trans, found, flags=()):
        return cls(
            eps=model.eps, n=model.n, Q=model.Q, Q_tilde=model.Q_tilde,
            d_tau=model.d_tau, d_tau1=model.d_tau1,
            E_plus=trans.E_plus, E_minus=trans.E_minus, E_star=trans.E_star,
            points=tuple(point_entry(pt, model) for pt in found), flags=tuple(dict.fromkeys(flags)),
        )

    def as_row(self):
        row = {
            "eps": self.eps, "n": self.n, "Q": self.Q, "Qt": self.Q_tilde,
            "dtau": self.d_tau, "dtau1": self.d_tau1,
            "Eplus": self.E_plus, "Eminus": self.E_minus, "Estar": self.E_star,
        }
        for j in range(4):
            theta1, theta2, det, ln_m, _, flag = self.points[j] if j < len(self.points) else (math.nan,)*5 + ("missing",)
            row[f"theta1_{j+1}"] = theta1
            row[f"theta2_{j+1}"] = theta2
            row[f"det_{j+1}"] = det
            row[f"m_star_{j+1}"] = ln_m
            row[f"flag_{j+1}"] = flag
        return row


@attrs.frozen
class ContinuationReport:
    rows: tuple
    phase_violations: tuple

    @property
    def flag_count(self):
        return sum(len(r.flags) for r in self.rows)

    @property
    def min_E_star(self):
        return min(r.E_star for r in self.rows)

    @property
    def tracked_counts(self):
        return tuple(len(r.points) for r in self.rows)


def log_grid(eps_lo, eps_hi, points):
    if not 0 < eps_lo < eps_hi:
        raise DomainError(f"need 0 < eps_lo < eps_hi, got {eps_lo}, {eps_hi}")
    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    return np.exp(np.linspace(math.log(eps_lo), math.log(eps_hi), points))


def _match(previous, current):
    """Order current points like previous ones; None when the assignment is ambiguous."""
    order = []
    for p in previous:
        dists = [torus_distance(p, c) for c in current]
        best = int(np.argmin(dists))
        if best in order:
            return None
        order.append(best)
    return order


def point_entry(pt, model):
    """(theta1, theta2, det_scaled, ln_m_star, m_star ratio, flag) of one solved point."""
    try:
        estimate = min_eigenvalue_estimate(pt, model)
        ln_m, ratio = estimate.ln_m_star, estimate.ratio
    except ValueError:
        ln_m, ratio = -math.inf, 0.0
    flag = "ok" if pt.converged else "newton"
    return (float(pt.theta[0]), float(pt.theta[1]), pt.hess_det_scaled, ln_m, ratio, flag)


def solve_escalated(model, phases=None, c=ETA_FACTOR, scan_grid=64, precision_bits=DEFAULT_PRECISION):
    """
    Full critical points of a model built at precision_bits.

    Below eta = 1e-12 the model is rebuilt with ESCALATION_BITS more bits and
    its points are continued again from K4; the solution gets the flag
    "precision" when the two sets differ by more than PRECISION_TOL.
    """
    solution = solve_full_critical_points(model, c=c, scan_grid=scan_grid)
    if model.ln_eta >= ESCALATION_LN_ETA or not solution.points:
        return solution

    bits = precision_bits + ESCALATION_BITS
    finer = build_model(model.eps, mu=math.exp(model.ln_mu), rho=model.rho, phases=phases, precision_bits=bits)
    try:
        again = solve_full_critical_points(finer, c=c, scan_grid=0)
    except (HypothesisError, ConvergenceError) as e:
        debug_message(f"eps={model.eps:.6e}: no comparison at {bits} bits: {e}")
        return solution
    moved = len(again.points) != len(solution.points) or any(
        min(torus_distance(pt.theta, other.theta) for other in again.points) > PRECISION_TOL
        for pt in solution.points
    )
    if moved:
        debug_message(f"eps={model.eps:.6e}: critical points moved at {bits} bits")
        solution = attrs.evolve(solution, flags=solution.flags + ("precision",))
    return solution


def continuation_sweep(eps_lo, eps_hi, points, phases=None, rho=1.0, p=3.5,
                       c=ETA_FACTOR, scan_grid=64, grid=None, precision_bits=DEFAULT_PRECISION):
    phases = phases or ZeroPhases()
    eps_values = np.sort(np.asarray(grid, dtype=float)) if grid is not None else log_grid(eps_lo, eps_hi, points)

    first = build_model(float(eps_values[-1]), rho=rho, p=p, phases=phases, precision_bits=precision_bits)
    defects = primary_defects(phases, first.n + 8)
    violations = tuple(sorted(n for n, d in defects.items() if abs(d) >= CRITICAL_DEFECT))
    if violations:
        warning_message(f"phase condition |dtau_n| < 2pi/3 fails for n = {list(violations)}", cls="phases")

    rows = []
    previous = None
    status_message(f"Continuation over {len(eps_values)} values of eps in [{eps_values[0]:.4e}, {eps_values[-1]:.4e}].")
    for eps in eps_values[::-1]:
        eps = float(eps)
        model = build_model(eps, rho=rho, p=p, phases=phases, precision_bits=precision_bits)
        flags = []
        found = []
        try:
            solution = solve_escalated(model, phases, c=c, scan_grid=scan_grid, precision_bits=precision_bits)
        except HypothesisError as e:
            debug_message(str(e))
            flags.append("degenerate")
            solution = None
        except ConvergenceError as e:
            debug_message(str(e))
            flags.append("newton")
            solution = None

        if solution is not None:
            flags.extend(solution.flags)
            found = list(solution.points)
            if len(found) != 4:
                flags.append("count")
            # matched in the psi coordinates of the current interval, where points move slowly
            if previous is not None and len(previous) == len(found) == 4:
                order = _match([model.psi_of(th) for th in previous], [pt.psi for pt in found])
                if order is None:
                    flags.append("merge")
                else:
                    found = [found[i] for i in order]
            previous = [pt.theta for pt in found]
        else:
            previous = None

        rows.append(ContinuationRow.from_points(model, transversality(model), found, flags))

    rows.sort(key=lambda r: r.eps)
    # a dip of E* towards zero between grid values is a near-degeneracy even if no grid value hits it
    for i in range(1, len(rows) - 1):
        E = rows[i].E_star
        if E < NEAR_DEGENERATE_E and E <= rows[i-1].E_star and E <= rows[i+1].E_star and "degenerate" not in rows[i].flags:
            rows[i] = attrs.evolve(rows[i], flags=rows[i].flags + ("degenerate",))
    report = ContinuationReport(rows=tuple(rows), phase_violations=violations)
    if report.flag_count:
        warning_message(f"continuation raised {report.flag_count} flag(s)", cls="bifurcation")
    return report
