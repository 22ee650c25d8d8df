"""Published estimates used for side-by-side comparison in suite summaries.

These are constants that were estimated numerically with an unstated fitting
procedure. They are reference points for reports, not ground truth.
"""

# Gaussian kernel, eps = 1: (c2, c3) of c2 * exp(-c3 * n**(1/d)), keyed by d.
GAUSSIAN_RATE = {1: (3.47, 1.22), 2: (5.10, 1.80), 3: (6.37, 2.31)}

# Wendland kernels: prefactor of c * n**(-beta/d + 1/2), keyed by (beta, d).
WENDLAND_PROVEN_PREFACTOR = {
    (2, 1): 0.003, (2, 2): 0.01, (2, 3): 0.02,
    (3, 1): 0.03, (3, 2): 0.02, (3, 3): 0.02,
}

# Wendland kernels: prefactor of c * n**(-beta/d), keyed by (beta, d).
WENDLAND_IMPROVED_PREFACTOR = {
    (2, 1): 0.08, (2, 2): 0.34, (2, 3): 0.49,
    (3, 1): 0.32, (3, 2): 0.52, (3, 3): 0.67,
}

# Grid points per axis giving about 1e4 candidates in the unit ball.
DEFAULT_PER_AXIS = {1: 10000, 2: 114, 3: 28}

# Comparison bands used when marking suite results.
C3_REL_TOL = {1: 0.30, 2: 0.35, 3: 0.35}
C3_BAND_D1 = (0.85, 1.60)
EXPONENT_ABS_TOL = 0.3
EXPONENT_MARGIN = 0.25
PREFACTOR_FACTOR = 3.0
