"""
Exact arithmetic in the quadratic ring Z[sqrt(d)] and the lattice maps of a
metallic frequency vector omega = (1, Omega).

The small divisors <k, omega> shrink like lambda^-n while |k| grows like
lambda^n, so a binary64 dot product loses every significant digit long before
the interesting resonances are reached. All divisors are therefore carried as
RingElement objects and only converted to floating point (through mpmath, at a
caller-chosen precision) at the output boundary.

The silver case (a = 2, d = 2) is the one exercised throughout the package;
any even metallic parameter a = 2m works with d = m^2 + 1.
"""

__all__ = [
    "RingElement", "FrequencyModel", "SILVER",
    "bracket", "apply_U", "apply_T", "to_float",
    "mat_vec", "mat_mul", "det2", "l1_norm",
]

from math import isqrt

import attrs
import mpmath

from silversplit.exceptions import DomainError


def _check_same_ring(x, y):
    assert x.d == y.d, f"Mixing Z[sqrt({x.d})] and Z[sqrt({y.d})]"


@attrs.frozen
class RingElement:
    """
    Element p + q*sqrt(d) of Z[sqrt(d)], d a positive non-square.

    Python ints are arbitrary precision, so no operation can overflow.
    Comparisons are exact: only integer arithmetic is used.
    """

    p: int = attrs.field(converter=int)
    q: int = attrs.field(converter=int, default=0)
    d: int = attrs.field(converter=int, default=2)

    def __attrs_post_init__(self):
        assert self.d > 0 and isqrt(self.d)**2 != self.d, f"{self.d} is a square"

    def _lift(self, other):
        if isinstance(other, int):
            return RingElement(other, 0, self.d)
        if isinstance(other, RingElement):
            _check_same_ring(self, other)
            return other
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RingElement(self.p + other.p, self.q + other.q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(-self.p, -self.q, self.d)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RingElement(
            self.p*other.p + self.d*self.q*other.q,
            self.p*other.q + self.q*other.p,
            self.d,
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        assert isinstance(n, int) and n >= 0
        result, base = RingElement(1, 0, self.d), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        return RingElement(self.p, -self.q, self.d)

    def norm(self):
        """Exact integer norm p^2 - d*q^2 = self * conjugate."""
        return self.p*self.p - self.d*self.q*self.q

    def sign(self):
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0 or (p > 0) == (q > 0):
            return 1 if q > 0 else -1
        # opposite signs: the term of larger magnitude wins
        if p*p > self.d*q*q:
            return 1 if p > 0 else -1
        return 1 if q > 0 else -1

    def is_zero(self):
        return self.p == 0 and self.q == 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return not self.is_zero()

    def _cmp(self, other):
        other = self._lift(other)
        if other is None:
            raise TypeError(f"Cannot compare RingElement with {type(other)}")
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self):
        """Exact floor(p + q*sqrt(d))."""
        if self.q == 0:
            return self.p
        r = isqrt(self.d*self.q*self.q)
        # q*sqrt(d) is irrational, so for q < 0 the floor lies strictly below -r
        return self.p + (r if self.q > 0 else -r - 1)

    def rint(self):
        """Closest integer. Ties cannot occur for q != 0."""
        return (2*self + 1).floor() // 2

    def to_mpf(self, precision_bits=53):
        return to_float(self, precision_bits)

    def __float__(self):
        return float(to_float(self, 53))

    def __repr__(self):
        return f"RingElement({self.p}, {self.q}, d={self.d})"


def to_float(x, precision_bits=53):
    """
    Correctly rounded value of x as an mpmath.mpf with precision_bits bits.

    When p and q*sqrt(d) have opposite signs, the value is computed as
    norm / (p - q*sqrt(d)), which has no cancellation.
    """
    if precision_bits < 53:
        raise DomainError(f"precision_bits must be >= 53, got {precision_bits}")
    if x.is_zero():
        return mpmath.mpf(0)
    with mpmath.workprec(precision_bits + 32):
        root = mpmath.sqrt(x.d)
        if x.p == 0 or x.q == 0 or (x.p > 0) == (x.q > 0):
            value = x.p + x.q*root
        else:
            value = mpmath.mpf(x.norm()) / (x.p - x.q*root)
    with mpmath.workprec(precision_bits):
        return +value


# -- 2x2 integer matrices as nested tuples (exact, big-int safe) --

def mat_vec(M, k):
    return (M[0][0]*k[0] + M[0][1]*k[1], M[1][0]*k[0] + M[1][1]*k[1])

def mat_mul(M, N):
    return (
        (M[0][0]*N[0][0] + M[0][1]*N[1][0], M[0][0]*N[0][1] + M[0][1]*N[1][1]),
        (M[1][0]*N[0][0] + M[1][1]*N[1][0], M[1][0]*N[0][1] + M[1][1]*N[1][1]),
    )

def transpose(M):
    return ((M[0][0], M[1][0]), (M[0][1], M[1][1]))

def det2(M):
    return M[0][0]*M[1][1] - M[0][1]*M[1][0]

def unimodular_inverse(M):
    det = det2(M)
    assert det in (1, -1), f"matrix {M} is not unimodular"
    return (
        (det*M[1][1], -det*M[0][1]),
        (-det*M[1][0], det*M[0][0]),
    )

def l1_norm(k):
    return abs(k[0]) + abs(k[1])


@attrs.frozen
class FrequencyModel:
    """
    Frequency vector omega = (1, Omega) with Omega = [0; a, a, a, ...] for an
    even metallic parameter a, together with the lattice maps T and U.

    For the silver number (a = 2): Omega = sqrt(2) - 1, lambda = sqrt(2) + 1,
    T = [[2, 1], [1, 0]], U = [[0, -1], [-1, 2]]. T omega = lambda omega and
    U omega = -lambda^-1 omega, so |<U k, omega>| = |<k, omega>| / lambda.

    rho is the complex width of analyticity of the perturbation.
    """

    a: int = 2
    rho: float = attrs.field(default=1.0, converter=float)

    def __attrs_post_init__(self):
        if self.a < 2 or self.a % 2:
            raise DomainError(f"metallic parameter must be even and >= 2, got {self.a}")
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")

    @property
    def d(self):
        return (self.a // 2)**2 + 1

    @property
    def Omega(self):
        # Omega = sqrt(m^2+1) - m solves Omega^2 + a*Omega - 1 = 0
        return RingElement(-(self.a // 2), 1, self.d)

    @property
    def lam(self):
        return RingElement(self.a // 2, 1, self.d)

    @property
    def T(self):
        return ((self.a, 1), (1, 0))

    @property
    def U(self):
        return ((0, -1), (-1, self.a))

    def diophantine_gamma(self, k2_max=2000, precision_bits=128):
        """
        inf |<k, omega>| * |k|_1 over 1 <= k2 <= k2_max with the best k1
        for each k2 (any other k1 only increases the product).
        """
        best = None
        for k2 in range(1, k2_max + 1):
            k = (-(k2*self.Omega).rint(), k2)
            value = abs(bracket(k, self)).to_mpf(precision_bits) * l1_norm(k)
            if best is None or value < best:
                best = value
        return best


SILVER = FrequencyModel()


def bracket(k, model=SILVER):
    """Exact <k, omega> = k1 + k2*Omega as a RingElement."""
    k1, k2 = k
    if k1 == 0 and k2 == 0:
        raise DomainError("bracket of the zero vector")
    m = model.a // 2
    return RingElement(k1 - m*k2, k2, model.d)


def apply_U(k, model=SILVER):
    return mat_vec(model.U, k)


def apply_T(k, model=SILVER):
    return mat_vec(model.T, k)
