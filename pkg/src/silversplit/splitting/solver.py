"""
Critical points of the splitting potential.

The K4 points are found the way they are constructed analytically: for each
branch psi2 ~ 0 or psi2 ~ pi, sin psi2 = eta f(psi1, psi2) is solved by fixed
point iteration, then the remaining scalar equation in psi1 is bracketed
around alpha(+-) and alpha(+-) + pi. Newton on the full scaled gradient
polishes the result. The points of the full truncated potential are then
continued from the K4 points by Newton, and a grid of Newton runs over the
torus checks that no further critical points exist.
"""

__all__ = [
    "solve_sine_equation", "CriticalPoint", "FullSolution", "EigenvalueEstimate",
    "solve_model_critical_points", "solve_full_critical_points",
    "basin_scan", "min_eigenvalue_estimate",
]

import math

import attrs
import numpy as np
from scipy import optimize

from silversplit.exceptions import ConvergenceError, HypothesisError
from silversplit.messages import debug_message
from silversplit.splitting.model import transversality

TWO_PI = 2*math.pi
NEWTON_TOL = 1e-12
MERGE_TOL = 1e-6
DEGENERATE_E_STAR = 1e-6
DEGENERATE_DET = 1e-9
ETA_FACTOR = 10.0


def torus_distance(x, y):
    d = np.mod(np.asarray(x, dtype=float) - np.asarray(y, dtype=float) + math.pi, TWO_PI) - math.pi
    return float(np.linalg.norm(d))


def solve_sine_equation(F, dF=None, samples=256, tol=1e-15, max_iter=500):
    """
    The two solutions of sin x = F(x), one near 0 and one near pi.

    Requires F'(x)^2 + F(x)^2 < 1 on a sampling grid of the circle, which makes
    x -> arcsin F(x) and x -> pi - arcsin F(x) contractions.
    """
    if dF is None:
        def dF(x, h=1e-6):
            return (F(x + h) - F(x - h)) / (2*h)

    grid = np.linspace(0, TWO_PI, samples, endpoint=False)
    bound = max(dF(x)**2 + F(x)**2 for x in grid)
    if not bound < 1:
        raise ConvergenceError("sin x = F(x): fixed point map is not contractive", bound=bound)

    roots = []
    for base, sign in ((0.0, 1), (math.pi, -1)):
        x = base
        for _ in range(max_iter):
            x_new = base + sign*math.asin(F(x))
            if abs(x_new - x) <= tol:
                x = x_new
                break
            x = x_new
        else:
            raise ConvergenceError("sin x = F(x): fixed point iteration did not settle", start=base, last=x)
        # Newton polish on sin x - F(x)
        for _ in range(3):
            d = math.cos(x) - dF(x)
            if d == 0:
                break
            x -= (math.sin(x) - F(x)) / d
        roots.append(x)
    return tuple(roots)


@attrs.frozen
class CriticalPoint:
    index: int
    psi: np.ndarray = attrs.field(eq=False)
    theta: np.ndarray = attrs.field(eq=False)
    # det D^2 K / (B^2 eta); the true determinant is B^2 eta times this
    hess_det_scaled: float
    ln_abs_hess_det: float
    branch: str
    residual: float
    seed_distance: float = 0.0
    converged: bool = True


def _newton(potential, psi, tol=NEWTON_TOL, max_iter=50):
    psi = np.array(psi, dtype=float)
    for _ in range(max_iter):
        F = potential.gradient(psi)[0]
        if np.linalg.norm(F) < tol:
            return np.mod(psi, TWO_PI), float(np.linalg.norm(F)), True
        J = potential.jacobian(psi)[0]
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        psi = psi - step
    F = potential.gradient(psi)[0]
    residual = float(np.linalg.norm(F))
    return np.mod(psi, TWO_PI), residual, residual < tol


def _point(model, potential, index, psi, branch, residual, seed=None, converged=True):
    det_scaled = float(potential.hessian_det_scaled(psi))
    ln_det = 2*model.ln_B + model.ln_eta + math.log(abs(det_scaled)) if det_scaled else -math.inf
    return CriticalPoint(
        index=index, psi=np.asarray(psi), theta=model.theta_of(psi),
        hess_det_scaled=det_scaled, ln_abs_hess_det=ln_det, branch=branch, residual=residual,
        seed_distance=0.0 if seed is None else torus_distance(psi, seed), converged=converged,
    )


def _check_hypothesis(model, trans, ln_small, c, label):
    E = trans.E_star
    if not (E > 0 and ln_small + math.log(c) < math.log(E)):
        raise HypothesisError(
            f"{label} = {math.exp(ln_small):.3e} is not small against E* = {E:.3e} (c = {c}); "
            f"use the full solver with a basin scan instead"
        )


def solve_model_critical_points(model, c=ETA_FACTOR):
    """The four critical points of K4, ordered (alpha+, 0), (alpha+ + pi, 0), (alpha-, pi), (alpha- + pi, pi)."""
    trans = transversality(model)
    _check_hypothesis(model, trans, model.ln_eta, c, "eta")
    eta = model.eta
    Q, Qt, dt, dt1 = model.Q, model.Q_tilde, model.d_tau, model.d_tau1
    potential = model.k4_potential()

    def psi2_of(p1, branch):
        if eta == 0:
            return 0.0 if branch == "+" else math.pi

        def F(x):
            return -eta*(2*Q*math.sin(p1 + 2*x - dt) + Qt*math.sin(p1 + x - dt1))

        def dF(x):
            return -eta*(4*Q*math.cos(p1 + 2*x - dt) + Qt*math.cos(p1 + x - dt1))

        near_zero, near_pi = solve_sine_equation(F, dF)
        return near_zero if branch == "+" else near_pi

    def reduced(p1, branch):
        return model.k4_gradient((p1, psi2_of(p1, branch)))[0]

    points = []
    for branch, alpha, p2_seed in (("+", trans.alpha_plus, 0.0), ("-", trans.alpha_minus, math.pi)):
        for shift in (0.0, math.pi):
            centre = alpha + shift
            lo, hi = centre - math.pi/2, centre + math.pi/2
            p1 = optimize.brentq(reduced, lo, hi, xtol=1e-15, args=(branch,))
            psi = np.array([p1, psi2_of(p1, branch)])
            psi, residual, ok = _newton(potential, psi)
            seed = np.array([centre, p2_seed])
            point = _point(model, potential, len(points) + 1, psi, branch, residual, seed, ok)
            if not ok:
                raise ConvergenceError("Newton polish of K4 point failed", index=point.index, residual=residual)
            # psi = psi0 + O(eta)
            assert point.seed_distance <= 10*max(eta, 1e-12)/trans.E_star + 1e-9, \
                f"K4 point {point.index} drifted {point.seed_distance:.3e} from its seed"
            points.append(point)
    return points


def basin_scan(potential, grid=64, iterations=40, tol=1e-10):
    """
    Damped Newton from every node of a grid x grid lattice on the torus.
    Returns the distinct limits whose scaled gradient is below tol.
    """
    t = np.linspace(0, TWO_PI, grid, endpoint=False) + math.pi/grid
    psi = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1).reshape(-1, 2)
    for _ in range(iterations):
        F = potential.gradient(psi)
        J = potential.jacobian(psi)
        det = J[:, 0, 0]*J[:, 1, 1] - J[:, 0, 1]*J[:, 1, 0]
        safe = np.where(np.abs(det) > 1e-14, det, np.inf)
        step = np.stack([
            (J[:, 1, 1]*F[:, 0] - J[:, 0, 1]*F[:, 1]) / safe,
            (-J[:, 1, 0]*F[:, 0] + J[:, 0, 0]*F[:, 1]) / safe,
        ], axis=1)
        length = np.linalg.norm(step, axis=1, keepdims=True)
        step = np.where(length > 0.5, step*0.5/np.maximum(length, 1e-300), step)
        psi = np.mod(psi - step, TWO_PI)

    residual = np.linalg.norm(potential.gradient(psi), axis=1)
    roots = []
    for p in psi[residual < tol]:
        if all(torus_distance(p, r) > MERGE_TOL for r in roots):
            roots.append(p)
    return roots


@attrs.frozen
class FullSolution:
    points: tuple
    model_points: tuple
    basin_roots: int
    # False: the perturbation was not small against E*, points were seeded by the basin scan
    seeded_from_model: bool
    # "newton", "drift", "basin", "merge", "degenerate", "precision"
    flags: tuple

    @property
    def ok(self):
        return not self.flags


def _scan_points(model, potential, roots):
    """CriticalPoints from basin-scan roots, branch by the sign of cos psi2."""
    points = []
    ordered = sorted(roots, key=lambda r: (math.cos(r[1]) < 0, r[0]))
    for r in ordered:
        psi, residual, ok = _newton(potential, r)
        branch = "+" if math.cos(psi[1]) >= 0 else "-"
        points.append(_point(model, potential, len(points) + 1, psi, branch, residual, None, ok))
    return points


def solve_full_critical_points(model, c=ETA_FACTOR, scan_grid=64, radius=None):
    """
    Critical points of the full truncated K.

    When the perturbation size (eta_bar, or the tail weight if larger) times c
    is below E*, they are continued from the points of K4 and the
    basin scan only confirms the count. Otherwise (near the ends of the
    interval, where two primary harmonics are comparable) the basin scan roots
    are the seeds. Anomalies are reported as flags, not raised.
    """
    trans = transversality(model)
    potential = model.full_potential(radius)
    perturbation = math.exp(model.ln_perturbation)
    try:
        _check_hypothesis(model, trans, model.ln_perturbation, c, "perturbation")
        model_points = solve_model_critical_points(model, c)
    except (HypothesisError, ConvergenceError) as e:
        if not scan_grid:
            raise
        debug_message(f"eps={model.eps:.6e}: {e}")
        model_points = None

    flags = []
    roots = basin_scan(potential, grid=scan_grid) if scan_grid else []
    if model_points is None:
        points = _scan_points(model, potential, roots)
        if any(not p.converged for p in points):
            flags.append("newton")
    else:
        points = []
        for mp in model_points:
            psi, residual, ok = _newton(potential, mp.psi)
            point = _point(model, potential, mp.index, psi, mp.branch, residual, mp.psi, ok)
            if not ok:
                flags.append("newton")
            elif point.seed_distance > 10*max(perturbation, 1e-12)/trans.E_star + 1e-9:
                flags.append("drift")
            points.append(point)

    if trans.E_star < DEGENERATE_E_STAR or any(abs(p.hess_det_scaled) < DEGENERATE_DET for p in points):
        flags.append("degenerate")
    for i, p in enumerate(points):
        for q in points[i+1:]:
            if torus_distance(p.psi, q.psi) < MERGE_TOL:
                flags.append("merge")
    if scan_grid and len(roots) != 4:
        debug_message(f"basin scan at eps={model.eps:.6e} found {len(roots)} critical points")
        flags.append("basin")
    return FullSolution(
        points=tuple(points), model_points=tuple(model_points or ()), basin_roots=len(roots),
        seeded_from_model=model_points is not None, flags=tuple(dict.fromkeys(flags)),
    )


@attrs.frozen
class EigenvalueEstimate:
    ln_m_star: float
    ln_abs_trace: float
    ln_abs_det: float
    # m* / (sqrt(eps) calL_S2)
    ratio: float
    E_star: float
    c_lower: float
    c_upper: float

    @property
    def within_bracket(self):
        return self.c_lower*self.E_star <= self.ratio <= self.c_upper


def min_eigenvalue_estimate(point, model, c_lower=0.05, c_upper=20.0):
    """
    Smallest |eigenvalue| of D^2 calL(theta*) = A^T D^2 K(psi*) A, from its
    trace and determinant in log space (det A^2 = 1).
    """
    potential = model.full_potential()
    J = potential.jacobian(point.psi)[0]
    eta = model.eta
    # D^2 (K/B) = [[eta J00, eta J01], [eta J01, J11]]
    H = np.array([[eta*J[0, 0], eta*J[0, 1]], [eta*J[0, 1], J[1, 1]]])
    A = np.array(model.A, dtype=float)
    M = A.T @ H @ A
    trace = float(np.trace(M))
    det_scaled = J[0, 0]*J[1, 1] - eta*J[0, 1]**2
    ln_det = model.ln_eta + math.log(abs(det_scaled))
    ln_trace = math.log(abs(trace))
    if ln_det - 2*ln_trace < math.log(1e-8):
        ln_m = ln_det - ln_trace
    else:
        det = math.exp(ln_det)*math.copysign(1, det_scaled)
        disc = math.sqrt(max(trace*trace - 4*det, 0.0))
        ln_m = math.log(2*abs(det) / (abs(trace) + disc))

    ln_m_star = model.ln_B + ln_m
    # calL_S2: the largest harmonic after S1
    ln_S2 = model.ln_B + float(np.max(model.ln_r[1:]))
    ratio = math.exp(ln_m_star - 0.5*math.log(model.eps) - ln_S2)
    trans = transversality(model)
    return EigenvalueEstimate(
        ln_m_star=ln_m_star,
        ln_abs_trace=model.ln_B + ln_trace,
        ln_abs_det=2*model.ln_B + ln_det,
        ratio=ratio, E_star=trans.E_star, c_lower=c_lower, c_upper=c_upper,
    )
