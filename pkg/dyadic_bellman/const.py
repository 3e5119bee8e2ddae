"""Constants."""

# Measures and structural identities.
MEASURE_TOLERANCE = 1e-12
MAX_TREE_LEAVES = 2**24

# Inverse of H_p.
OMEGA_TOLERANCE = 1e-13
OMEGA_MAX_ITERATIONS = 200

# Quadrature.
QUADRATURE_RELATIVE_TOLERANCE = 1e-10
QUADRATURE_MAX_EVALUATIONS = 10**6
QUADRATURE_SUBINTERVALS = 200
GEOMETRIC_RATIO = 0.5
GEOMETRIC_FLOOR = 1e-15
NONNEGATIVE_SAMPLES = 2**10
NONNEGATIVE_TOLERANCE = 1e-12

# beta search of the Young-inequality bound.
BETA_LOWER = 1e-9
BETA_UPPER = 1e9
BETA_SCAN_POINTS = 64
AP2_RELATIVE_TOLERANCE = 1e-6

# A_p* constants.
AUDIT_GRID_SIZE = 1000
AUDIT_GRID_FLOOR = 1e-8
AUDIT_TOLERANCE = 1e-9
APSTAR_SAMPLES = 2**12

# Extremal family.
AP5_RESIDUAL_TOLERANCE = 1e-10
BACK_SUBSTITUTION_TOLERANCE = 1e-10

# Verification tolerances.
POINTWISE_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-9
UPPER_BOUND_TOLERANCE = 1e-8
ORACLE_GAP = 0.05
GAUSS_LEGENDRE_NODES = 20
EXACT_TOLERANCE = 1e-12

# Brute-force search over step functions.
BRUTE_FORCE_FLOOR = 1e-16
BRUTE_FORCE_CANDIDATES = 25
BRUTE_FORCE_MIN_PIECES = 64
BRUTE_FORCE_MIN_BUDGET = 20_000
FIT_TOLERANCE = 1e-12

# Random instances.
P_CYCLE = (1.5, 2.0, 3.0)
REDRAW_LIMIT = 100

# Output.
SIGNIFICANT_DIGITS = 15

SUITES = ("thm1", "thm2", "prop1", "thm3", "prop2", "doob", "hl")
