"""
Run configuration shared by all subcommands.

RunConfig.from_args() turns the argparse namespace into a validated config;
library callers may construct RunConfig directly. SILVERSPLIT_PRECISION in the
environment overrides the working precision of ring-to-float conversions.
"""

__all__ = ["RunConfig", "precision_from_env", "P_THRESHOLD"]

import os

import attrs

from silversplit.exceptions import ConfigError
from silversplit.phases import ZeroPhases, RandomPhases, load_phases
from silversplit.resonances import DEFAULT_PRECISION

# mu = eps^p needs p above this, per perturbation variant
P_THRESHOLD = {"standard": 3.0, "shifted": 2.0}


def precision_from_env(default=DEFAULT_PRECISION):
    raw = os.environ.get("SILVERSPLIT_PRECISION")
    if raw is None:
        return default
    try:
        bits = int(raw)
    except ValueError:
        raise ConfigError(f"SILVERSPLIT_PRECISION must be an integer, got {raw!r}") from None
    if bits < 53:
        raise ConfigError(f"SILVERSPLIT_PRECISION must be >= 53, got {bits}")
    return bits


@attrs.define
class RunConfig:

    rho: float = 1.0
    p: float = 3.5
    allow_small_p: bool = False
    h_variant: str = "standard"
    precision_bits: int = attrs.field(factory=precision_from_env)
    eta_factor: float = 10.0
    eps_min: float = None
    eps_max: float = None
    points: int = 50
    log_grid: bool = True
    fmt: str = "csv"
    phases: object = attrs.field(factory=ZeroPhases)
    seed: int = 0
    scan_grid: int = 64

    def __attrs_post_init__(self):
        self.validate()

    def validate(self):
        if not self.rho > 0:
            raise ConfigError(f"rho must be positive, got {self.rho}")
        if self.h_variant not in P_THRESHOLD:
            raise ConfigError(f"unknown perturbation variant {self.h_variant!r}")
        threshold = P_THRESHOLD[self.h_variant]
        if not self.p > threshold and not self.allow_small_p:
            raise ConfigError(f"p must exceed {threshold} for the {self.h_variant} variant (got {self.p}); pass --allow-small-p to override")
        if self.precision_bits < 53:
            raise ConfigError(f"precision must be >= 53 bits, got {self.precision_bits}")
        if not self.eta_factor > 0:
            raise ConfigError(f"eta factor must be positive, got {self.eta_factor}")
        if self.eps_min is not None and self.eps_max is not None and not 0 < self.eps_min < self.eps_max:
            raise ConfigError(f"need 0 < eps-min < eps-max, got {self.eps_min}, {self.eps_max}")
        if self.points < 1:
            raise ConfigError(f"points must be >= 1, got {self.points}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.scan_grid < 0:
            raise ConfigError(f"scan grid must be >= 0, got {self.scan_grid}")

    @classmethod
    def from_args(cls, args):
        get = lambda name, default=None: getattr(args, name, default)
        if get("phases_file") is not None:
            phases = load_phases(get("phases_file"))
        elif get("random_phases"):
            phases = RandomPhases(seed=get("seed", 0), bounded_primary=get("bounded_primary", True))
        else:
            phases = ZeroPhases()
        # the environment wins over --precision
        precision = get("precision")
        if os.environ.get("SILVERSPLIT_PRECISION") is not None or precision is None:
            precision = precision_from_env()
        return cls(
            rho=get("rho", 1.0),
            p=get("p", 3.5),
            allow_small_p=get("allow_small_p", False),
            h_variant=get("h_variant", "standard"),
            precision_bits=precision,
            eta_factor=get("eta_factor", 10.0),
            eps_min=get("eps_min"),
            eps_max=get("eps_max"),
            points=get("points", 50),
            log_grid=get("log_grid", True),
            fmt=get("format", "csv"),
            phases=phases,
            seed=get("seed", 0),
            scan_grid=get("scan_grid", 64),
        )
