from .model_dims import ModelDims
from .params import Params
from .convergence_config import ConvergenceConfig
from .marginal_cov import MarginalCov, marginal_covariance
from .explained_variance import ExplainedVariance, explained_variance
from .fit_result import FitResult
from .criterion import Criterion
from .method_type import MethodType
from .validation import validate, validate_data, validate_dims
