from .initialize import initialize, principal_axis, ols_beta, pooled_residual_covariance
from .selection import GridSpec, GridPointResult, SelectionReport, n_free_params, fit_grid_point, select
