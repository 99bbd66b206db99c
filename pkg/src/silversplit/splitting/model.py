"""
The splitting potential near a transition value, in the coordinates

    psi1 = <s0(n-1), theta> - tau_{s0(n-1)},   psi2 = <s0(n), theta> - tau_{s0(n)},

i.e. psi = A theta - b. Keeping the four most dominant harmonics gives

    K4(psi) = B cos psi2 + B eta (1-Q) cos psi1
              + B eta Q cos(psi1 + 2 psi2 - dtau) + B eta Qt cos(psi1 + psi2 - dtau1).

All other harmonics form the tail B eta eta' G(psi). B is exponentially small,
so the model stores ln B, ln eta and the log-ratios of every harmonic to B.
"""

__all__ = [
    "SplittingModel", "ScaledPotential", "build_model", "balance_point",
    "TransversalityData", "transversality", "DegeneracyLocus", "degeneracy_locus",
    "sufficient_phase_condition", "adversarial_phases", "splitting_size", "Q_TILDE_MAX",
]

import math

import attrs
import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from silversplit.exceptions import DomainError
from silversplit.melnikov import (
    C0, candidate_harmonics, g_k, harmonic, interval_index, log_harmonics, transition_ladder,
)
from silversplit.phases import ZeroPhases, TablePhases, reduce_angle, CRITICAL_DEFECT
from silversplit.quadratic_field import mat_vec, transpose, unimodular_inverse, det2
from silversplit.resonances import DEFAULT_PRECISION, pell_vector, main_secondary_vector

# log-ratio below ln(eta) at which tail harmonics are dropped
TAIL_MARGIN_NATS = 60
DEGENERATE_E = 1e-15
# with exact prefactors Qt peaks at 1/sqrt(2), where L_{s0(n-1)} = L_{s0(n+1)}
Q_TILDE_MAX = math.sqrt(0.5)


class ScaledPotential:
    """
    K / B = sum_i r_i cos(<k'_i, psi> - c_i) with r_i = exp(ln_r_i), k' = A^-T k.

    The gradient is returned as (F1, F2) = (d_psi1 (K/B) / eta, d_psi2 (K/B)):
    both components are O(1) however small eta is. Weights of psi1-dependent
    harmonics are formed as exp(ln_r - ln_eta) and never overflow.
    """

    def __init__(self, kp, ln_r, c, ln_eta):
        self.kp = np.asarray(kp, dtype=float).reshape(-1, 2)
        self.ln_r = np.asarray(ln_r, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.ln_eta = float(ln_eta)
        self.w2 = np.exp(self.ln_r)
        has_psi1 = self.kp[:, 0] != 0
        self.w1 = np.where(has_psi1, np.exp(np.minimum(self.ln_r - self.ln_eta, 700)), 0.0)

    def __len__(self):
        return len(self.ln_r)

    def _trig(self, psi):
        psi = np.atleast_2d(np.asarray(psi, dtype=float))
        arg = psi @ self.kp.T - self.c
        return np.cos(arg), np.sin(arg)

    def value(self, psi):
        cos, _ = self._trig(psi)
        return cos @ self.w2

    def gradient(self, psi):
        """(N, 2) scaled gradient for (N, 2) or (2,) input."""
        _, sin = self._trig(psi)
        F1 = -(sin * self.w1) @ self.kp[:, 0]
        F2 = -(sin * self.w2) @ self.kp[:, 1]
        return np.stack([F1, F2], axis=-1)

    def jacobian(self, psi):
        """(N, 2, 2) derivative of (F1, F2)."""
        cos, _ = self._trig(psi)
        k1, k2 = self.kp[:, 0], self.kp[:, 1]
        J = np.empty(cos.shape[:1] + (2, 2))
        J[:, 0, 0] = -(cos * self.w1) @ (k1*k1)
        J[:, 0, 1] = -(cos * self.w1) @ (k1*k2)
        J[:, 1, 0] = -(cos * self.w2) @ (k2*k1)
        J[:, 1, 1] = -(cos * self.w2) @ (k2*k2)
        return J

    def hessian_det_scaled(self, psi):
        """det D^2 K / (B^2 eta), free of eta underflow."""
        J = self.jacobian(psi)[0]
        eta = math.exp(self.ln_eta)
        return J[0, 0]*J[1, 1] - eta*J[0, 1]**2


@attrs.frozen
class SplittingModel:

    n: int
    eps: float
    ln_mu: float
    rho: float
    ln_B: float
    ln_eta: float
    Q: float
    Q_tilde: float
    d_tau: float
    d_tau1: float
    ln_eta_prime: float
    A: tuple
    b: tuple
    # S5: the largest harmonic outside the four of K4
    S5: tuple
    # all retained harmonics: vectors k, transformed k' = A^-T k, ln(L_k/B), offsets c_k
    ks: np.ndarray = attrs.field(eq=False, repr=False)
    kp: np.ndarray = attrs.field(eq=False, repr=False)
    ln_r: np.ndarray = attrs.field(eq=False, repr=False)
    offsets: np.ndarray = attrs.field(eq=False, repr=False)
    ln_tail_bound: float = -math.inf

    def __attrs_post_init__(self):
        assert abs(det2(self.A)) == 1
        # Q and Q_tilde round to 0 or 1 near the interval ends; ln_r keeps them exact
        assert 0 <= self.Q <= 1 and self.Q_tilde >= 0
        assert len(self.ln_r) >= 4 and self.ln_r[0] == 0

    @property
    def eta(self):
        return math.exp(self.ln_eta)

    @property
    def eta_prime(self):
        return math.exp(self.ln_eta_prime)

    @property
    def ln_eta_bar(self):
        """ln max(eta, eta eta' / eps)."""
        return max(self.ln_eta, self.ln_eta + self.ln_eta_prime - math.log(self.eps))

    @property
    def ln_tail_strength(self):
        """ln sum |k'|^2 L_k / (B eta) over the harmonics outside K4: their weight in the scaled Hessian."""
        if len(self.ln_r) <= 4:
            return -math.inf
        kp = self.kp[4:]
        return float(logsumexp(self.ln_r[4:] - self.ln_eta + np.log((kp**2).sum(axis=1))))

    @property
    def ln_perturbation(self):
        """ln of the size of everything the K4 point equations leave out."""
        return max(self.ln_eta_bar, self.ln_tail_strength)

    @property
    def guaranteed_transverse(self):
        return sufficient_phase_condition(self.d_tau, self.Q_tilde)

    @property
    def A_inverse(self):
        return unimodular_inverse(self.A)

    def theta_of(self, psi):
        """theta = A^-1 (psi + b) mod 2 pi."""
        v = mat_vec(self.A_inverse, (psi[0] + self.b[0], psi[1] + self.b[1]))
        return np.mod(np.array(v, dtype=float), 2*math.pi)

    def psi_of(self, theta):
        v = mat_vec(self.A, (theta[0], theta[1]))
        return np.mod(np.array([v[0] - self.b[0], v[1] - self.b[1]], dtype=float), 2*math.pi)

    def k4_potential(self):
        ln_eta = self.ln_eta
        return ScaledPotential(
            kp=[(0, 1), (1, 0), (1, 2), (1, 1)],
            ln_r=[float(x) for x in self.ln_r[:4]],
            c=[0.0, 0.0, self.d_tau, self.d_tau1],
            ln_eta=ln_eta,
        )

    def full_potential(self, radius=None):
        """The truncated K; with a radius, tail harmonics beyond max(|k1|, k2) > radius are dropped."""
        if radius is None:
            return ScaledPotential(self.kp, self.ln_r, self.offsets, self.ln_eta)
        keep = np.abs(self.ks).max(axis=1) <= radius
        keep[:4] = True
        return ScaledPotential(self.kp[keep], self.ln_r[keep], self.offsets[keep], self.ln_eta)

    def k4_gradient(self, psi):
        """Scaled gradient (F1, F2) of K4 written out term by term."""
        p1, p2 = psi
        Q, Qt, eta = self.Q, self.Q_tilde, self.eta
        s_a = math.sin(p1 + 2*p2 - self.d_tau)
        s_b = math.sin(p1 + p2 - self.d_tau1)
        F1 = -((1 - Q)*math.sin(p1) + Q*s_a + Qt*s_b)
        F2 = -math.sin(p2) - eta*(2*Q*s_a + Qt*s_b)
        return np.array([F1, F2])


def _transformed(A, k):
    return mat_vec(unimodular_inverse(transpose(A)), k)


def build_model(eps, mu=None, rho=1.0, phases=None, p=3.5, precision_bits=DEFAULT_PRECISION):
    """
    First-order model: calL_k = mu L_k and tau_k = sigma_k. mu defaults to eps^p.
    Requires eps in (eps'_{n+1}, eps'_n] with n >= 2.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    mu = eps**p if mu is None else mu
    phases = phases or ZeroPhases()
    n = interval_index(eps, rho)
    if n < 2:
        raise DomainError(f"eps={eps} lies in interval n={n}; the model needs n >= 2")

    prev, cur, nxt = pell_vector(n-1), pell_vector(n), pell_vector(n+1)
    sec = main_secondary_vector(n-1)
    main = [cur, prev, nxt, sec]
    ln_calL = {k: harmonic(eps, mu, k, rho=rho, precision_bits=precision_bits).ln_calL for k in main}
    tau = {k: phases.sigma(k) for k in main}

    ln_B = ln_calL[cur]
    ln_sum = float(np.logaddexp(ln_calL[prev], ln_calL[nxt]))
    ln_eta = ln_sum - ln_B
    Q = math.exp(ln_calL[nxt] - ln_sum)
    Q_tilde = math.exp(ln_calL[sec] - ln_sum)

    A = (prev, cur)
    b = (tau[prev], tau[cur])
    d_tau = reduce_angle(tau[nxt] - 2*tau[cur] - tau[prev])
    d_tau1 = reduce_angle(tau[sec] - tau[cur] - tau[prev])

    # tail: every harmonic whose weight relative to eta is above e^-margin
    h1 = g_k(eps, cur, rho)
    threshold = h1 + (TAIL_MARGIN_NATS + 10 - ln_eta) * eps**0.25 / C0(rho)
    cand, _ = candidate_harmonics(eps, threshold, rho)
    tail = [tuple(map(int, k)) for k in cand.tolist() if tuple(map(int, k)) not in ln_calL]
    ln_mu = math.log(mu)
    if tail:
        ln_tail = log_harmonics(eps, tail, rho) + ln_mu
    else:
        ln_tail = np.zeros(0)
    # keep only what can reach F1 at the e^-margin level
    keep = ln_tail - ln_B >= ln_eta - TAIL_MARGIN_NATS
    tail = [k for k, kept in zip(tail, keep) if kept]
    ln_tail = ln_tail[keep]

    if len(tail):
        i5 = int(np.argmax(ln_tail))
        S5, ln_S5 = tail[i5], float(ln_tail[i5])
    else:
        # nothing above the margin: take the fifth dominant harmonic anyway
        cand, g = candidate_harmonics(eps, threshold + 1.0, rho)
        rest = [tuple(map(int, k)) for k in cand.tolist() if tuple(map(int, k)) not in ln_calL]
        S5 = min(rest, key=lambda k: g_k(eps, k, rho))
        ln_S5 = float(log_harmonics(eps, [S5], rho)[0]) + ln_mu
    ln_eta_prime = ln_S5 - ln_sum

    ks = main + tail
    ln_all = np.concatenate([[ln_calL[k] for k in main], ln_tail])
    kp = np.array([_transformed(A, k) for k in ks], dtype=float)
    taus = [tau[k] for k in main] + [phases.sigma(k) for k in tail]
    offsets = np.array([t - (kp_i[0]*b[0] + kp_i[1]*b[1]) for t, kp_i in zip(taus, kp)])

    # every dropped harmonic is below eta e^-margin relative to B
    ln_tail_bound = ln_eta - TAIL_MARGIN_NATS

    return SplittingModel(
        n=n, eps=eps, ln_mu=ln_mu, rho=rho,
        ln_B=ln_B, ln_eta=ln_eta, Q=Q, Q_tilde=Q_tilde,
        d_tau=d_tau, d_tau1=d_tau1, ln_eta_prime=ln_eta_prime,
        A=A, b=b, S5=S5,
        ks=np.array(ks, dtype=np.int64), kp=kp, ln_r=ln_all - ln_B, offsets=offsets,
        ln_tail_bound=ln_tail_bound,
    )


def balance_point(n, rho=1.0):
    """eps in (eps'_{n+1}, eps'_n) where L_{s0(n-1)} = L_{s0(n+1)}, i.e. Q = 1/2."""
    if n < 1:
        raise DomainError(f"balance point needs n >= 1, got {n}")
    lo = math.log(transition_ladder(n+1, rho).eps_prime_n)
    hi = math.log(transition_ladder(n, rho).eps_prime_n)
    pair = [pell_vector(n+1), pell_vector(n-1)]

    def difference(ln_eps):
        ln_l = log_harmonics(math.exp(ln_eps), pair, rho)
        return float(ln_l[0] - ln_l[1])

    return math.exp(optimize.brentq(difference, lo, hi, xtol=1e-14))


@attrs.frozen
class TransversalityData:
    E_plus: float
    E_minus: float
    alpha_plus: float
    alpha_minus: float

    @property
    def E_star(self):
        return min(self.E_plus, self.E_minus)

    @property
    def degenerate_plus(self):
        return self.E_plus <= DEGENERATE_E

    @property
    def degenerate_minus(self):
        return self.E_minus <= DEGENERATE_E

    @property
    def degenerate(self):
        return self.degenerate_plus or self.degenerate_minus


def transversality(model=None, *, Q=None, Q_tilde=None, d_tau=None, d_tau1=None):
    """E(+-) and alpha(+-); alpha is nan on a degenerate branch."""
    if model is not None:
        Q, Q_tilde, d_tau, d_tau1 = model.Q, model.Q_tilde, model.d_tau, model.d_tau1
    values = []
    for sign in (1, -1):
        c = 1 - Q + Q*math.cos(d_tau) + sign*Q_tilde*math.cos(d_tau1)
        s = Q*math.sin(d_tau) + sign*Q_tilde*math.sin(d_tau1)
        E = math.hypot(c, s)
        alpha = math.atan2(s, c) if E > DEGENERATE_E else math.nan
        values.append((E, alpha))
    (E_plus, alpha_plus), (E_minus, alpha_minus) = values
    return TransversalityData(E_plus=E_plus, E_minus=E_minus, alpha_plus=alpha_plus, alpha_minus=alpha_minus)


@attrs.frozen
class DegeneracyLocus:
    Q: float
    Q_tilde: float
    cos_d_tau: float
    cos_d_tau1: tuple
    # (d_tau, d_tau1, branch) with branch "+" or "-" naming the vanishing E
    pairs: tuple

    @property
    def empty(self):
        return not self.pairs


def degeneracy_locus(Q, Q_tilde):
    """
    Phase pairs (d_tau, d_tau1) where E* vanishes. Non-empty iff |1 - 2Q| <= Qt.

    E(-) = 0 means 1 - Q + Q e^{i d_tau} = Qt e^{i d_tau1}; E(+) = 0 the same with -Qt.
    """
    if not 0 < Q < 1:
        raise DomainError(f"Q must lie in (0, 1), got {Q}")
    if not 0 < Q_tilde <= 1:
        raise DomainError(f"Q_tilde must lie in (0, 1], got {Q_tilde}")
    if abs(1 - 2*Q) > Q_tilde:
        return DegeneracyLocus(Q=Q, Q_tilde=Q_tilde, cos_d_tau=math.nan, cos_d_tau1=(), pairs=())

    cos_dt = -(1 - 2*Q + 2*Q*Q - Q_tilde**2) / (2*(1 - Q)*Q)
    cos_dt1 = (Q_tilde**2 + 1 - 2*Q) / (2*(1 - Q)*Q_tilde)
    d_tau = math.acos(max(-1.0, min(1.0, cos_dt)))
    pairs = []
    for dt in sorted({d_tau, reduce_angle(-d_tau)}):
        z = complex(1 - Q + Q*math.cos(dt), Q*math.sin(dt))
        arg = math.atan2(z.imag, z.real)
        pairs.append((dt, reduce_angle(arg), "-"))
        pairs.append((dt, reduce_angle(arg + math.pi), "+"))
    return DegeneracyLocus(
        Q=Q, Q_tilde=Q_tilde, cos_d_tau=cos_dt, cos_d_tau1=(cos_dt1, -cos_dt1), pairs=tuple(pairs),
    )


def sufficient_phase_condition(d_tau, q_tilde=0.5):
    """
    |d_tau| < 2 arccos(max(Qt, 1/2)) guarantees E* > 0 for every Q and d_tau1.
    For Qt <= 1/2 the bound is 2 pi / 3.
    """
    if q_tilde <= 0.5:
        return abs(d_tau) < CRITICAL_DEFECT
    return abs(d_tau) < 2*math.acos(min(q_tilde, 1.0))


def adversarial_phases(n, eps=None, branch="-", rho=1.0):
    """
    Phases putting (d_tau, d_tau1) of interval n on the degeneracy locus at eps
    (default: the balance point, where the locus is widest).
    Only sigma_{s0(n+1)} and sigma_{s1(n-1)} are non-zero.
    """
    eps = balance_point(n, rho) if eps is None else eps
    base = build_model(eps, rho=rho)
    if base.n != n:
        raise DomainError(f"eps={eps} lies in interval {base.n}, not {n}")
    locus = degeneracy_locus(base.Q, base.Q_tilde)
    if locus.empty:
        raise DomainError(f"no degenerate phases at eps={eps} (Q={base.Q:.4f}, Qt={base.Q_tilde:.4f})")
    d_tau, d_tau1, _ = next(pair for pair in locus.pairs if pair[2] == branch)
    return TablePhases({pell_vector(n+1): d_tau, main_secondary_vector(n-1): d_tau1})


def splitting_size(model, grid=128, full=True):
    """
    ln max over the torus of |grad_theta calL| = |A^T grad_psi K|, sampled on a
    grid x grid lattice in psi.
    """
    potential = model.full_potential() if full else model.k4_potential()
    A = np.array(model.A, dtype=float)
    eta = model.eta
    t = np.linspace(0, 2*math.pi, grid, endpoint=False)
    largest = 0.0
    for t1 in t:
        psi = np.stack([np.full_like(t, t1), t], axis=1)
        F = potential.gradient(psi)
        grad_psi = np.stack([eta*F[:, 0], F[:, 1]], axis=1)
        largest = max(largest, float(np.linalg.norm(grad_psi @ A, axis=1).max()))
    return model.ln_B + math.log(largest)
