from .calculations import kronecker, vec, unvec, solve_kron_system, cholesky_factor, spd_solve, spd_inverse, \
    spd_logdet, woodbury_inverse, woodbury_gain, varimax, varimax_criterion, rv_similarity, rv_coefficient
from .chance import make_rng, stream_seed, stream_key, replication_seed
from .config import *
