"""
Harmonics of the Melnikov potential and their dominance as epsilon -> 0.

For the pendulum separatrix x0(t) = 4 arctan e^t the Melnikov potential is

    L(theta) = sum_k L_k cos(<k, theta> - sigma_k),
    L_k = 2 pi a_k e^{-rho|k|} / sinh(pi a_k / 2),   a_k = |<k, omega>| / sqrt(eps),

summed over the half lattice (k2 > 0, or k2 = 0 and k1 > 0). Writing
L_k ~ alpha_k e^{-beta_k}, the exponent beta_k equals C0 g_k(eps) / eps^(1/4)
with g_k(eps) = G(eps; eps_k, gamma_tilde_k), eps_k = D0 gamma_tilde_k^2 / |k|^4,
C0 = sqrt(pi rho), D0 = (pi / (4 rho))^2. Ordering harmonics by g_k yields the
dominant ones S1, S2, ... and the values h1 <= h2 <= ...

Everything that can underflow is kept in log space. Divisors <k, omega> come
from exact ring arithmetic; the exact sinh formula is used everywhere, the
alpha/beta split is only reported for diagnostics.
"""

__all__ = [
    "C0", "D0", "G_function", "eps_k", "g_k", "g_star", "star_data",
    "TransitionLadder", "transition_ladder", "interval_index",
    "HarmonicTerm", "harmonic", "log_harmonics", "candidate_harmonics",
    "RankedHarmonic", "DominanceProfile", "dominance_profile", "star_profile", "h_extrema",
    "half_lattice", "ln_tail_bound", "certified_radius",
    "SeriesValue", "melnikov_series", "separatrix_transform", "melnikov_quadrature",
]

import math
import functools

import attrs
import numpy as np
import mpmath
from scipy import integrate, optimize
from scipy.special import logsumexp

from silversplit.exceptions import DomainError, ConvergenceError
from silversplit.messages import debug_message
from silversplit.quadratic_field import SILVER, bracket, l1_norm
from silversplit.resonances import (
    DEFAULT_PRECISION, numerator_float, pell_vector, primitive_indices,
    resonant_vector, sequence_asymptotics,
)
from silversplit.phases import ZeroPhases

LAMBDA = 1 + math.sqrt(2)
LN_LAMBDA = math.log(LAMBDA)
OMEGA = math.sqrt(2) - 1
LN2 = math.log(2)
# gamma* = 1/2 for the silver number
GAMMA_STAR = 0.5
ESCALATION_NATS = 600


def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def C0(rho=1.0):
    _positive(rho=rho)
    return math.sqrt(math.pi * rho)


def D0(rho=1.0):
    _positive(rho=rho)
    return (math.pi / (4*rho))**2


def G_function(eps, X, Y):
    """(Y^(1/2) / 2) [(eps/X)^(1/4) + (X/eps)^(1/4)], minimal (= Y^(1/2)) at eps = X."""
    _positive(eps=eps, X=X, Y=Y)
    r = (eps / X)**0.25
    return 0.5 * math.sqrt(Y) * (r + 1/r)


def eps_k(k, rho=1.0):
    norm = l1_norm(k)
    if norm == 0:
        raise DomainError("eps_k of the zero vector")
    gamma_tilde = numerator_float((int(k[0]), int(k[1]))) / GAMMA_STAR
    return D0(rho) * gamma_tilde**2 / norm**4


def g_k(eps, k, rho=1.0):
    """Normalized exponent eps^(1/4) beta_k / C0 = G(eps; eps_k, gamma_tilde_k)."""
    _positive(eps=eps)
    e_k = eps_k(k, rho)
    gamma_tilde = numerator_float((int(k[0]), int(k[1]))) / GAMMA_STAR
    return G_function(eps, e_k, gamma_tilde)


@functools.lru_cache(maxsize=64)
def star_data(j):
    """(K_j, gamma_tilde*_j) of the primitive sequence j."""
    asym = sequence_asymptotics(j, N=24)
    return asym.K, asym.gamma_tilde_star


def g_star(eps, j, n, rho=1.0):
    """G(eps; eps*_{s(j,n)}, gamma_tilde*_j), eps* = D0 gamma_tilde*^2 / (K_j^4 lambda^(4n))."""
    _positive(eps=eps)
    if n < 0:
        raise DomainError(f"sequence index must be >= 0, got {n}")
    K, gt = star_data(j)
    eps_star = D0(rho) * gt**2 / (K**4 * LAMBDA**(4*n))
    return G_function(eps, eps_star, gt)


@attrs.frozen
class TransitionLadder:
    """
    eps_hat_n: transition value where s0(n) is most dominant (h1 = 1).
    eps_prime_n: geometric mean of eps_hat_{n-1} and eps_hat_n, where the
    first dominant harmonic changes from s0(n-1) to s0(n).
    """

    n: int
    eps_hat_n: float
    eps_prime_n: float
    C0: float
    D0: float
    rho: float = 1.0


def transition_ladder(n, rho=1.0):
    if n < 0:
        raise DomainError(f"transition index must be >= 0, got {n}")
    d0 = D0(rho)
    ladder = TransitionLadder(
        n=n,
        eps_hat_n=16*d0 / LAMBDA**(4*(n+1)),
        eps_prime_n=16*d0 / LAMBDA**(4*n + 2),
        C0=C0(rho), D0=d0, rho=rho,
    )
    return ladder


def interval_index(eps, rho=1.0):
    """n with eps in (eps'_{n+1}, eps'_n]."""
    _positive(eps=eps)
    x = (math.log(16*D0(rho)) - math.log(eps)) / (4*LN_LAMBDA)
    n = math.floor(x - 0.5)
    if n < 0:
        raise DomainError(f"eps={eps} lies above eps'_0 = {transition_ladder(0, rho).eps_prime_n}")
    return n


@attrs.frozen
class HarmonicTerm:
    k: tuple
    sigma: float
    # a = |<k, omega_eps>| = |<k, omega>| / sqrt(eps)
    a: float
    ln_alpha: float
    beta: float
    ln_L_exact: float
    ln_mu: float
    precision_bits: int

    @property
    def ln_calL(self):
        """ln of the first-order splitting harmonic mu L_k."""
        return self.ln_mu + self.ln_L_exact

    @property
    def neglected_bound(self):
        """Bound on the relative gap between L_k and alpha exp(-beta); valid for pi a >= ln 2."""
        return 2*math.exp(-math.pi*self.a)


def harmonic(eps, mu, k, sigma=0.0, rho=1.0, precision_bits=DEFAULT_PRECISION):
    _positive(eps=eps, mu=mu, rho=rho)
    k = (int(k[0]), int(k[1]))
    divisor = abs(bracket(k, SILVER))
    norm = l1_norm(k)

    # float estimate decides whether extra bits are needed
    beta_estimate = rho*norm + math.pi*float(divisor)/(2*math.sqrt(eps))
    bits = precision_bits
    if beta_estimate > ESCALATION_NATS:
        bits += 64
        debug_message(f"harmonic {k}: beta ~ {beta_estimate:.1f} nats, using {bits} bits")

    with mpmath.workprec(bits):
        a = divisor.to_mpf(bits) / mpmath.sqrt(mpmath.mpf(eps))
        x = mpmath.pi * a / 2
        ln_L = mpmath.log(2*mpmath.pi*a) - rho*norm - mpmath.log(mpmath.sinh(x))
        ln_alpha = mpmath.log(4*mpmath.pi*a)
        beta = rho*norm + x
        return HarmonicTerm(
            k=k, sigma=float(sigma), a=float(a),
            ln_alpha=float(ln_alpha), beta=float(beta), ln_L_exact=float(ln_L),
            ln_mu=math.log(mu), precision_bits=bits,
        )


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    big = x > 20
    small = np.log(np.sinh(np.minimum(x, 20)))
    large = x - LN2 + np.log1p(-np.exp(-2*x))
    return np.where(big, large, small)


def log_harmonics(eps, ks, rho=1.0):
    """Vectorized ln L_k (binary64) for an (N, 2) array of half-lattice vectors."""
    _positive(eps=eps)
    ks = np.asarray(ks, dtype=np.int64).reshape(-1, 2)
    norms = np.abs(ks).sum(axis=1)
    divisors = np.array([numerator_float(k) for k in map(tuple, ks.tolist())]) / norms
    a = divisors / math.sqrt(eps)
    return np.log(2*math.pi*a) - rho*norms - _log_sinh(math.pi*a/2)


def candidate_harmonics(eps, threshold, rho=1.0):
    """
    All half-lattice k with g_k(eps) <= threshold, and their g_k.

    g_k >= rho eps^(1/4) |k|_1 / C0 bounds |k|_1, and
    g_k >= pi |<k, omega>| / (2 C0 eps^(1/4)) confines k1 to a window around
    -k2 Omega, so the enumeration is exhaustive.
    """
    _positive(eps=eps, threshold=threshold)
    q = eps**0.25
    c0 = C0(rho)
    radius = int(threshold*c0 / (rho*q)) + 1
    width = 2*threshold*c0*q / math.pi + 1e-9

    k2 = np.arange(0, radius+1, dtype=np.int64)
    centre = -k2*OMEGA
    lo = np.ceil(centre - width).astype(np.int64)
    hi = np.floor(centre + width).astype(np.int64)
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())
    starts = np.cumsum(counts) - counts
    k2s = np.repeat(k2, counts)
    k1s = np.repeat(lo, counts) + (np.arange(total) - np.repeat(starts, counts))

    keep = ((k2s > 0) | (k1s > 0)) & (np.abs(k1s) + k2s <= radius)
    k1s, k2s = k1s[keep], k2s[keep]
    norms = np.abs(k1s) + k2s

    # float prefilter, then exact divisors for the survivors
    approx = q*(rho*norms + math.pi*np.abs(k1s + k2s*OMEGA)/(2*math.sqrt(eps))) / c0
    keep = approx <= threshold*(1 + 1e-6) + 1e-9
    ks = np.stack([k1s[keep], k2s[keep]], axis=1)
    if len(ks) == 0:
        return ks, np.zeros(0)
    norms = norms[keep]
    divisors = np.array([numerator_float(k) for k in map(tuple, ks.tolist())]) / norms
    g = q*(rho*norms + math.pi*divisors/(2*math.sqrt(eps))) / c0
    keep = g <= threshold
    return ks[keep], g[keep]


@attrs.frozen
class RankedHarmonic:
    k: tuple
    h: float
    ln_calL: float


@attrs.frozen
class DominanceProfile:

    eps: float
    ranked: tuple
    n_interval: int
    rho: float = 1.0

    def __attrs_post_init__(self):
        hs = self.h
        assert all(a <= b for a, b in zip(hs, hs[1:])), f"unsorted profile {hs}"
        assert len(set(self.S)) == len(self.S), "repeated harmonic in profile"

    @property
    def h(self):
        return tuple(r.h for r in self.ranked)

    @property
    def S(self):
        return tuple(r.k for r in self.ranked)

    @property
    def primary_consistent(self):
        """
        Whether S1 is the Pell vector s0(n) of the interval containing eps.

        At eps'_n the harmonics s0(n-1) and s0(n) tie, and within a relative band
        of about 1e-9 around it the float g_k decide the order. False there is a
        rounding artefact, not a change of the dominant harmonic.
        """
        return self.S[0] == pell_vector(self.n_interval)

    def as_row(self):
        row = {"eps": self.eps, "n": self.n_interval}
        for i, r in enumerate(self.ranked, start=1):
            row[f"h{i}"] = r.h
        for i, r in enumerate(self.ranked, start=1):
            row[f"S{i}"] = f"{r.k[0]},{r.k[1]}"
        for i, r in enumerate(self.ranked, start=1):
            row[f"ln_L_S{i}"] = r.ln_calL
        return row


def dominance_profile(eps, depth=5, rho=1.0, p=3.5, precision_bits=DEFAULT_PRECISION):
    """
    Brute-force ranking of the exact g_k over all half-lattice vectors.

    Ties are broken by smaller |k|_1, then lexicographically by k.
    """
    _positive(eps=eps)
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    n = interval_index(eps, rho)

    threshold = 1.2
    while True:
        ks, g = candidate_harmonics(eps, threshold, rho)
        if len(g) >= depth:
            break
        threshold *= 1.25
        if threshold > 64:
            raise ConvergenceError("candidate radius insufficient", eps=eps, depth=depth, found=len(g))

    norms = np.abs(ks).sum(axis=1)
    order = sorted(range(len(g)), key=lambda i: (g[i], norms[i], ks[i, 0], ks[i, 1]))[:depth]
    # every excluded vector has g > threshold >= the last ranked value
    assert g[order[-1]] <= threshold

    mu = eps**p
    ranked = []
    for i in order:
        k = (int(ks[i, 0]), int(ks[i, 1]))
        term = harmonic(eps, mu, k, rho=rho, precision_bits=precision_bits)
        ranked.append(RankedHarmonic(k=k, h=float(g[i]), ln_calL=term.ln_calL))
    return DominanceProfile(eps=eps, ranked=tuple(ranked), n_interval=n, rho=rho)


def star_profile(eps, depth=5, rho=1.0, j_max=10):
    """
    Ranking by the limit exponents g*_{s(j,n)}: list of (g*, j, n, s(j,n)).
    The h-values obtained this way are exactly 4 ln(lambda)-periodic in ln eps.
    """
    _positive(eps=eps)
    d0 = D0(rho)
    entries = []
    for j in primitive_indices(j_max):
        K, gt = star_data(j)
        centre = math.log(d0*gt**2 / (K**4 * eps)) / (4*LN_LAMBDA)
        for n in range(max(0, math.floor(centre) - 2), max(0, math.floor(centre) + 4)):
            entries.append((g_star(eps, j, n, rho), j, n))
    entries.sort()
    return [(g, j, n, resonant_vector(j, n)) for g, j, n in entries[:depth]]


def h_extrema(n=4, points=2001, rho=1.0, index=1, source="star"):
    """
    (min, max) of h_index over the period ln eps in [ln eps_hat_n - 2 ln lambda, ln eps_hat_n + 2 ln lambda],
    refined from the grid by bounded scalar minimization.
    """
    centre = math.log(transition_ladder(n, rho).eps_hat_n)

    def h_of(ln_eps):
        eps = math.exp(ln_eps)
        if source == "star":
            return star_profile(eps, depth=index, rho=rho)[index-1][0]
        return dominance_profile(eps, depth=index, rho=rho).h[index-1]

    lo, hi = centre - 2*LN_LAMBDA, centre + 2*LN_LAMBDA
    grid = np.linspace(lo, hi, points)
    values = np.array([h_of(x) for x in grid])
    step = grid[1] - grid[0]

    def refine(i, sign):
        a, b = max(lo, grid[i] - step), min(hi, grid[i] + step)
        res = optimize.minimize_scalar(lambda x: sign*h_of(x), bounds=(a, b), method="bounded",
                                       options={"xatol": 1e-12})
        return sign*min(sign*values[i], res.fun)

    return refine(int(values.argmin()), 1), refine(int(values.argmax()), -1)


def half_lattice(radius):
    """All half-lattice vectors with 0 < |k|_1 <= radius, as an (N, 2) int array."""
    k1, k2 = np.meshgrid(np.arange(-radius, radius+1), np.arange(0, radius+1), indexing="ij")
    k1, k2 = k1.ravel(), k2.ravel()
    keep = ((k2 > 0) | (k1 > 0)) & (np.abs(k1) + k2 <= radius)
    return np.stack([k1[keep], k2[keep]], axis=1).astype(np.int64)


def ln_tail_bound(radius, rho=1.0):
    """ln of sum_{|k|_1 > radius} |k|^2 L_k <= sum_{m > radius} 2m * m^2 * 4 e^{-rho m}."""
    m = np.arange(radius+1, radius+1 + int(200/rho) + 200, dtype=float)
    return float(logsumexp(math.log(8) + 3*np.log(m) - rho*m))


def _ln_weighted_scale(eps, radius, rho):
    ks = half_lattice(radius)
    ln_l = log_harmonics(eps, ks, rho)
    return float(logsumexp(ln_l + 2*np.log(np.linalg.norm(ks, axis=1))))


def certified_radius(eps, rho=1.0, tol=1e-12, start=8, limit=4000):
    """Smallest radius >= start whose tail bound is below tol times the retained |k|^2 L_k mass."""
    ln_scale = _ln_weighted_scale(eps, start, rho)
    radius = start
    while ln_tail_bound(radius, rho) > math.log(tol) + ln_scale:
        radius += 1
        if radius > limit:
            raise ConvergenceError("no certified truncation radius", eps=eps, tol=tol, limit=limit)
    return radius


@functools.lru_cache(maxsize=32)
def _series_terms(eps, radius, rho):
    ks = half_lattice(radius)
    return ks, log_harmonics(eps, ks, rho)


@attrs.frozen
class SeriesValue:
    """mu L and its derivatives, stored as exp(ln_scale) times O(1) scaled parts."""

    ln_scale: float
    value_scaled: float
    gradient_scaled: np.ndarray = attrs.field(eq=False)
    hessian_scaled: np.ndarray = attrs.field(eq=False)
    radius: int
    ln_tail: float

    @property
    def value(self):
        return math.exp(self.ln_scale) * self.value_scaled

    @property
    def gradient(self):
        return math.exp(self.ln_scale) * self.gradient_scaled

    @property
    def hessian(self):
        return math.exp(self.ln_scale) * self.hessian_scaled


def _resolve_radius(eps, rho, radius, tol):
    if radius is None:
        return certified_radius(eps, rho, tol)
    ln_tail = ln_tail_bound(radius, rho)
    ln_scale = _ln_weighted_scale(eps, radius, rho)
    if ln_tail > math.log(tol) + ln_scale:
        raise ConvergenceError("truncation tail bound violated", eps=eps, radius=radius,
                               ln_tail=ln_tail, ln_scale=ln_scale)
    return radius


def melnikov_series(theta, eps, mu, phases=None, radius=None, rho=1.0, tol=1e-12):
    _positive(eps=eps, mu=mu)
    phases = phases or ZeroPhases()
    radius = _resolve_radius(eps, rho, radius, tol)
    ks, ln_l = _series_terms(eps, radius, rho)

    top = float(ln_l.max())
    w = np.exp(ln_l - top)
    arg = ks @ np.asarray(theta, dtype=float) - phases.sigmas(ks)
    c, s = np.cos(arg), np.sin(arg)
    kf = ks.astype(float)
    return SeriesValue(
        ln_scale=math.log(mu) + top,
        value_scaled=float(w @ c),
        gradient_scaled=-(w*s) @ kf,
        hessian_scaled=-np.einsum("i,ij,ik->jk", w*c, kf, kf),
        radius=radius,
        ln_tail=ln_tail_bound(radius, rho),
    )


def separatrix_transform(a):
    """Integral over the real line of 2 sech^2(t) cos(a t), i.e. 2 pi a / sinh(pi a / 2)."""
    def integrand(t):
        return 4 / np.cosh(t)**2 if t < 350 else 0.0
    if a == 0:
        value, _ = integrate.quad(integrand, 0, np.inf)
    else:
        value, _ = integrate.quad(integrand, 0, np.inf, weight="cos", wvar=abs(a))
    return value


def melnikov_quadrature(theta, eps, tol=1e-10, radius=None, rho=1.0, phases=None, modes=None):
    """
    L(theta) as the integral of 2 sech^2(t) f(theta + omega t / sqrt(eps)) over t,
    with f = sum e^{-rho|k|} cos(<k, phi> - sigma_k) over the truncated half lattice
    (or over the given modes). Independent of the residue formula for L_k.
    """
    _positive(eps=eps, tol=tol)
    phases = phases or ZeroPhases()
    if modes is None:
        ks = half_lattice(_resolve_radius(eps, rho, radius, 1e-12))
    else:
        ks = np.asarray(modes, dtype=np.int64).reshape(-1, 2)
    if len(ks) == 0:
        raise DomainError("no modes to integrate")

    nu = np.array([float(bracket(tuple(k), SILVER)) for k in ks.tolist()]) / math.sqrt(eps)
    amplitude = np.exp(-rho*np.abs(ks).sum(axis=1))
    offset = ks @ np.asarray(theta, dtype=float) - phases.sigmas(ks)

    scale = float(np.exp(log_harmonics(eps, ks, rho)).sum())
    abs_tol = tol*scale
    # 2 sech^2 mass beyond T is 4/(1+e^{2T}) < 4 e^{-2T}
    T = 0.5*math.log(8*amplitude.sum() / abs_tol)
    edges = np.linspace(-T, T, 2*math.ceil(T) + 1)

    def integrand(t):
        return 2/math.cosh(t)**2 * float(amplitude @ np.cos(offset + nu*t))

    total, error = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        result = integrate.quad(integrand, a, b, epsabs=abs_tol/len(edges), epsrel=0, limit=200, full_output=1)
        if len(result) > 3:
            raise ConvergenceError("quadrature did not converge", interval=(a, b), message=result[3])
        total += result[0]
        error += result[1]
    if error > 10*abs_tol:
        raise ConvergenceError("quadrature error estimate too large", error=error, tolerance=abs_tol)
    return total
