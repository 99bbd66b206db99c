"""
silversplit computes the exponentially small splitting of separatrices of a
whiskered torus with the silver frequency vector omega = (1, sqrt(2) - 1).

The work is divided into four layers:

Layer 1: Arithmetic

Small divisors <k, omega> are elements of Z[sqrt(2)] and are handled exactly
(silversplit.quadratic_field). Integer vectors are sorted into resonant
sequences s(j, n); the primary ones are the Pell vectors
(silversplit.resonances).

Layer 2: Harmonics

The Melnikov potential is a Fourier series whose harmonics are exponentially
small in eps. silversplit.melnikov evaluates them in log space, ranks them by
their normalized exponents g_k, and checks the residue formula against direct
quadrature.

Layer 3: Splitting model

Near a transition value the four most dominant harmonics form a model whose
critical points are found and continued in eps (silversplit.splitting).
Phases of the perturbation come from silversplit.phases.

Layer 4: Front end

silversplit.__main__ provides the command line, silversplit.verify the
acceptance checks, and printer_csv / printer_json the output writers.
"""

# Worker modules
from . import quadratic_field
from . import resonances
from . import melnikov
from . import phases
from . import splitting
from . import verify

# Output and configuration modules
from . import printer_csv
from . import printer_json
from . import config
from . import version

# Helper modules
from . import messages
from . import exceptions

# Entry points
from .__main__ import main

__version__ = version.VERSION_NUMBER
VERSION = __version__
