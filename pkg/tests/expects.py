# Reference values for the silver frequency vector omega = (1, sqrt(2) - 1).

import math

SQRT2 = math.sqrt(2)
OMEGA = SQRT2 - 1
LAMBDA = SQRT2 + 1

PELL_NUMBERS = [0, 1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741]

# primitive generators among j <= 10
PRIMITIVE_J10 = [1, 3, 4, 6, 8, 9]

# (K_j, gamma_tilde*_j) of the primitive sequences driving the dominance ladder
SEQUENCE_LIMITS = {
    1: (1.2071, 1.0),
    3: (4.1213, 2.0),
    4: (5.8284, 4.0),
}
K_TOL = 5e-4
# every other primitive sequence up to j = 50 lies above the primary one, and j >= 6 above this
GAMMA_TILDE_TAIL = 6.5723
GAMMA_TILDE_TOL = 1e-6

# extrema of h1, h2 over one period of ln eps
H1_MIN = 1.0
A1 = math.sqrt((1 + SQRT2) / 2)
H1_MAX = A1
H2_MIN = A1
H2_MAX = SQRT2

# Q at eps_hat_n: L_{s0(n+1)} / L_{s0(n-1)} -> Omega^2 in the prefactor only
Q_AT_EPS_HAT = OMEGA**2 / (1 + OMEGA**2)
Q_TILDE_AT_EPS_HAT = 0.5

# E(-) vanishes for Q = Qt = 1/2, d_tau = 2 pi / 3, d_tau1 = pi / 3
DEGENERATE_EXAMPLE = (0.5, 0.5, 2*math.pi/3, math.pi/3)
