"""
Phase fields sigma_k of the perturbation f(phi) = sum e^{-rho|k|} cos(<k, phi> - sigma_k).

A phase field maps half-lattice vectors k to angles. The reversible case is
sigma = 0 everywhere. Continuation of the four transverse critical points is
guaranteed wherever Qt <= 1/2 when the primary phases satisfy

    |sigma_{s0(n+1)} - 2 sigma_{s0(n)} - sigma_{s0(n-1)}| < 2 pi / 3   for all n >= 1,

which RandomPhases(bounded_primary=True) enforces by construction. Where Qt exceeds
1/2 the guaranteed window narrows to 2 arccos(Qt).
"""

__all__ = [
    "reduce_angle", "ZeroPhases", "TablePhases", "RandomPhases",
    "primary_index", "primary_defects", "load_phases",
]

import json
import math
import threading

import numpy as np

from silversplit.exceptions import ConfigError
from silversplit.resonances import pell_vector

TWO_PI = 2*math.pi
CRITICAL_DEFECT = TWO_PI / 3


def reduce_angle(x):
    """Representative of x modulo 2 pi in (-pi, pi]."""
    r = math.remainder(x, TWO_PI)
    return math.pi if r == -math.pi else r


def primary_index(k):
    """n with k == s0(n), or None."""
    k1, k2 = int(k[0]), int(k[1])
    if k1 > 0 or k2 < 1:
        return None
    a, b, n = 0, 1, 0
    while b < k2:
        a, b, n = b, 2*b + a, n + 1
    return n if (a, b) == (-k1, k2) else None


class PhaseField:

    def sigma(self, k):
        raise NotImplementedError

    def sigmas(self, ks):
        return np.array([self.sigma(tuple(k)) for k in np.asarray(ks).tolist()], dtype=float)

    def is_zero(self):
        return False

    def describe(self):
        raise NotImplementedError


class ZeroPhases (PhaseField):
    """Reversible perturbation: sigma_k = 0 for every k."""

    def sigma(self, k):
        return 0.0

    def sigmas(self, ks):
        return np.zeros(len(ks), dtype=float)

    def is_zero(self):
        return True

    def describe(self):
        return {"mode": "zero"}


class TablePhases (PhaseField):

    def __init__(self, table):
        self.table = {(int(k[0]), int(k[1])): float(s) for k, s in dict(table).items()}

    def sigma(self, k):
        return self.table.get((int(k[0]), int(k[1])), 0.0)

    def is_zero(self):
        return not any(self.table.values())

    def describe(self):
        return {"mode": "table", "records": [{"k": list(k), "sigma": s} for k, s in sorted(self.table.items())]}


def _zigzag(x):
    return 2*x if x >= 0 else -2*x - 1


class RandomPhases (PhaseField):
    """
    Deterministic pseudo-random phases: sigma_k depends only on (seed, k).
    With bounded_primary, the primary phases follow sigma_{n+1} = 2 sigma_n + sigma_{n-1} + delta_n
    with |delta_n| <= margin * 2pi/3, so the primary condition holds for every n.
    The primary phases are drawn lazily, in order, under a lock.
    """

    def __init__(self, seed=0, bounded_primary=True, margin=0.95):
        assert 0 < margin < 1
        self.seed = int(seed)
        self.bounded_primary = bounded_primary
        self.margin = margin
        self._primary = []
        self._primary_rng = np.random.default_rng([self.seed, 1, 0])
        self._lock = threading.Lock()

    def _primary_sigma(self, n):
        with self._lock:
            while len(self._primary) <= n:
                if len(self._primary) < 2:
                    value = self._primary_rng.uniform(-math.pi, math.pi)
                else:
                    delta = self._primary_rng.uniform(-1, 1) * self.margin * CRITICAL_DEFECT
                    value = reduce_angle(2*self._primary[-1] + self._primary[-2] + delta)
                self._primary.append(value)
            return self._primary[n]

    def sigma(self, k):
        k1, k2 = int(k[0]), int(k[1])
        if self.bounded_primary:
            n = primary_index((k1, k2))
            if n is not None:
                return self._primary_sigma(n)
        rng = np.random.default_rng([self.seed, 0, _zigzag(k1), k2])
        return float(rng.uniform(-math.pi, math.pi))

    def describe(self):
        return {"mode": "random", "seed": self.seed, "bounded_primary": self.bounded_primary}


def primary_defects(phases, n_max):
    """Reduced defects sigma_{s0(n+1)} - 2 sigma_{s0(n)} - sigma_{s0(n-1)} for 1 <= n <= n_max."""
    defects = {}
    for n in range(1, n_max+1):
        s_prev, s_cur, s_next = (phases.sigma(pell_vector(m)) for m in (n-1, n, n+1))
        defects[n] = reduce_angle(s_next - 2*s_cur - s_prev)
    return defects


def load_phases(path):
    """
    Phases file: either a JSON array of {"k": [k1, k2], "sigma": s} records
    (unlisted k default to 0), or {"mode": "random", "seed": S, "bounded_primary": bool}.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ConfigError(f"Cannot read phases file {path}: {e}") from e

    if isinstance(data, dict):
        if data.get("mode") != "random":
            raise ConfigError(f"Unknown phases mode {data.get('mode')!r} in {path}")
        # "check46" is the older spelling of the same switch
        bounded = data.get("bounded_primary", data.get("check46", True))
        return RandomPhases(seed=data.get("seed", 0), bounded_primary=bool(bounded))

    if not isinstance(data, list):
        raise ConfigError(f"Phases file {path} must hold a list or an object")
    table = {}
    for record in data:
        try:
            k1, k2 = record["k"]
            sigma = float(record["sigma"])
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Malformed phase record {record!r} in {path}") from e
        if k2 < 0 or (k2 == 0 and k1 <= 0):
            raise ConfigError(f"Phase record {record!r} is outside the half lattice")
        table[(k1, k2)] = sigma
    return TablePhases(table)
