from .identify import identify, identify_loadings
from .scores import thurstone_scores, bartlett_scores, compute_scores, score_correlation
