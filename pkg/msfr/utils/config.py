# Idiosyncratic variances never drop below this value
PSI_FLOOR = 1e-4

# Relative pivot magnitude below which a solve is declared singular
SINGULAR_TOL = 1e-12

# ECM stopping rule
EPS_STAR = 1e-7
MAX_ITER = 50000

# Aitken extrapolation is only trusted while successive increments shrink by at least this ratio
AITKEN_MAX_RATE = 0.999

# Varimax sweeps
VARIMAX_TOL = 1e-7
VARIMAX_ANGLE_TOL = 1e-12
VARIMAX_MAX_SWEEPS = 1000

# Communality re-estimations in the initial per-study factor analysis
PRINCIPAL_AXIS_ITERATIONS = 20

# Starting study-specific loadings use eigenvalues of at least this fraction of the study's mean variance
INIT_EIGEN_FLOOR = 1e-2

# Rank regeneration attempts when simulating loadings
MAX_TRUTH_ATTEMPTS = 100

# CSV number formats: round-trip exact for parameters, short for summaries
PARAM_FLOAT_FORMAT = '%.17g'
SUMMARY_FLOAT_FORMAT = '%.6g'

DEFAULT_FOLDS = 5
DEFAULT_REPS = 20
MIN_TRAIN_SUBJECTS = 5
