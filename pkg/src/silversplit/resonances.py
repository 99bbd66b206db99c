"""
Classification of integer vectors into resonant sequences.

Every k with |<k, omega>| < 1/2 and k2 >= 1 belongs to exactly one sequence
s(j, n) = U^n k0(j) generated by a primitive index j, where
k0(j) = (-rint(j*Omega), j). Along a sequence the l1 norm grows like
K_j lambda^n and the numerator gamma_k = |<k, omega>| |k|_1 tends to a limit
gamma*_j. For the silver number the smallest limit is gamma* = 1/2 (j = 1, the
Pell vectors); the main secondary sequence is j = 3.

Indexing: s0(0) = (0, 1), s0(1) = (-1, 2), s0(n+1) = 2 s0(n) + s0(n-1), so
s0(n) = (-P_n, P_{n+1}) with the classical Pell numbers P_0 = 0, P_1 = 1.
"""

__all__ = [
    "NumeratorData", "ResonantSequence", "SequenceAsymptotics",
    "generator", "is_primitive", "primitive_indices",
    "pell_number", "pell_vector", "main_secondary_vector", "resonant_vector",
    "numerator", "numerator_float", "gamma_star", "sequence_asymptotics",
    "resonance_table",
]

import functools
import threading

import attrs
import mpmath

from silversplit.exceptions import DomainError
from silversplit.quadratic_field import (
    SILVER, bracket, apply_U, l1_norm,
)

DEFAULT_PRECISION = 256


def generator(j, model=SILVER):
    if j < 1:
        raise DomainError(f"generator index must be >= 1, got {j}")
    return (-(j*model.Omega).rint(), j)


def is_primitive(j, model=SILVER):
    """True iff 1/(2 lambda) < |<k0(j), omega>| < 1/2, decided in the ring."""
    x = abs(bracket(generator(j, model), model))
    return 2*x < 1 and 2*model.lam*x > 1


def primitive_indices(j_max, model=SILVER):
    return [j for j in range(1, j_max+1) if is_primitive(j, model)]


def pell_number(n):
    """Classical Pell numbers P_0 = 0, P_1 = 1, P_{n+1} = 2 P_n + P_{n-1}."""
    assert n >= 0
    a, b = 0, 1
    for _ in range(n):
        a, b = b, 2*b + a
    return a


def pell_vector(n):
    """Primary resonance s0(n) = U^n (0, 1) = (-P_n, P_{n+1})."""
    if n < 0:
        raise DomainError(f"Pell vector index must be >= 0, got {n}")
    return (-pell_number(n), pell_number(n+1))


def resonant_vector(j, n, model=SILVER):
    k = generator(j, model)
    for _ in range(n):
        k = apply_U(k, model)
    return k


def main_secondary_vector(n):
    """s1(n) = s(3, n), which equals s0(n) + s0(n+1)."""
    if n < 0:
        raise DomainError(f"main secondary index must be >= 0, got {n}")
    k = resonant_vector(3, n)
    a, b = pell_vector(n), pell_vector(n+1)
    assert k == (a[0] + b[0], a[1] + b[1]), f"lattice bug: s(3,{n}) = {k}"
    return k


def gamma_star(model=SILVER):
    # liminf of gamma_k; realized by the Pell vectors in the silver case
    assert model.a == 2, "gamma* is only tabulated for the silver number"
    return mpmath.mpf(1) / 2


@attrs.frozen
class NumeratorData:
    k: tuple
    gamma: float
    gamma_tilde: float


def _exact_numerator(k, model, precision_bits):
    return abs(bracket(k, model)).to_mpf(precision_bits) * l1_norm(k)


def numerator(k, model=SILVER, precision_bits=DEFAULT_PRECISION):
    k = tuple(int(c) for c in k)
    gamma = _exact_numerator(k, model, precision_bits)
    return NumeratorData(k=k, gamma=float(gamma), gamma_tilde=float(gamma / gamma_star(model)))


@functools.lru_cache(maxsize=1 << 16)
def numerator_float(k, a=2):
    """gamma_k rounded to binary64 from the exact value; cached per vector."""
    model = SILVER if a == 2 else attrs.evolve(SILVER, a=a)
    return float(_exact_numerator(k, model, 64))


class ResonantSequence:
    """
    The sequence s(j, n) = U^n k0(j) for a primitive j.

    Vectors are cached and extended on demand; extension holds a lock so one
    instance can be shared by threads working on different eps values.
    """

    def __init__(self, j, model=SILVER):
        if not is_primitive(j, model):
            raise DomainError(f"j={j} is not primitive")
        self.j = j
        self.model = model
        self.generator = generator(j, model)
        self.vectors = [self.generator]
        self._lock = threading.Lock()
        self.gamma_star_estimate = None
        self.K_estimate = None

    def __repr__(self):
        return f"<ResonantSequence j={self.j} cached={len(self.vectors)}>"

    def extend(self, n):
        with self._lock:
            while len(self.vectors) <= n:
                self.vectors.append(apply_U(self.vectors[-1], self.model))

    def __getitem__(self, n):
        self.extend(n)
        return self.vectors[n]

    def pell_coefficients(self, n):
        """Generalized Pell sequence p(j, 0..n+1) with s(j, m) = (-p(j, m), p(j, m+1))."""
        p = [-self.generator[0], self.generator[1]]
        a = self.model.a
        while len(p) < n + 2:
            p.append(a*p[-1] + p[-2])
        return p

    def gamma(self, n, precision_bits=DEFAULT_PRECISION):
        return _exact_numerator(self[n], self.model, precision_bits)


@attrs.frozen
class SequenceAsymptotics:
    j: int
    K: float
    gamma_star: float
    gamma_tilde_star: float
    # observed |d_{n+1} / d_n| of successive differences, n >= 5
    K_rates: tuple
    gamma_rates: tuple
    rate_ok: bool


def _difference_rates(values, n_from):
    diffs = [values[n+1] - values[n] for n in range(len(values) - 1)]
    rates = []
    for n in range(n_from, len(diffs) - 1):
        if diffs[n] != 0:
            rates.append(float(abs(diffs[n+1] / diffs[n])))
    return tuple(rates)


def sequence_asymptotics(j, N=15, model=SILVER, precision_bits=DEFAULT_PRECISION):
    """
    Estimate K_j = lim |s(j,n)| / lambda^n and gamma*_j = lim gamma_{s(j,n)}
    from the terms n <= N. Both sequences converge like lambda^(-2n); the
    successive-difference ratios are checked against that rate for n >= 5.
    """
    if N < 8:
        raise DomainError(f"need N >= 8 terms, got {N}")
    seq = ResonantSequence(j, model)
    with mpmath.workprec(precision_bits):
        lam = model.lam.to_mpf(precision_bits)
        ratios = [l1_norm(seq[n]) / lam**n for n in range(N+1)]
        gammas = [seq.gamma(n, precision_bits) for n in range(N+1)]
        target = 1 / lam**2
        K_rates = _difference_rates(ratios, 5)
        gamma_rates = _difference_rates(gammas, 5)
        rate_ok = all(target/2 <= r <= 2*target for r in K_rates + gamma_rates)
        g_star = gammas[-1]
        seq.K_estimate = float(ratios[-1])
        seq.gamma_star_estimate = float(g_star)
        return SequenceAsymptotics(
            j=j,
            K=float(ratios[-1]),
            gamma_star=float(g_star),
            gamma_tilde_star=float(g_star / gamma_star(model)),
            K_rates=K_rates,
            gamma_rates=gamma_rates,
            rate_ok=rate_ok,
        )


def resonance_table(j_max, n_max, model=SILVER, precision_bits=DEFAULT_PRECISION):
    """Rows (j, n, k1, k2, |k|_1, gamma, gamma_tilde, primitive) for s(j, n) = U^n k0(j)."""
    rows = []
    for j in range(1, j_max+1):
        primitive = is_primitive(j, model)
        k = generator(j, model)
        for n in range(n_max+1):
            data = numerator(k, model, precision_bits)
            rows.append({
                "j": j, "n": n, "k1": k[0], "k2": k[1], "norm": l1_norm(k),
                "gamma": data.gamma, "gamma_tilde": data.gamma_tilde, "primitive": primitive,
            })
            k = apply_U(k, model)
    return rows
