from .score_method import ScoreMethod
from .score_matrix import ScoreMatrix
