from typing import *


class MSFRError(Exception):
    """Base class for every error raised by the toolkit."""
    category = 'internal'


##
# Validation
##

class ValidationError(MSFRError):
    """Raised when data, dimensions or parameters break a model invariant."""
    category = 'validation'


class ShapeMismatch(ValidationError):
    """Raised when matrix shapes disagree with each other or with the model dimensions."""
    pass


class RankConstraintViolated(ValidationError):
    """Raised when q + sum(q_s) > p or q + q_s >= p for some study."""
    pass


class NonFiniteData(ValidationError):
    """Raised when an observation or covariate is NaN or infinite."""

    def __init__(self, study_id: str, row: int, col: int, matrix: str = 'X'):
        super().__init__("non-finite entry in %s of study '%s' at row %d, column %d" % (matrix, study_id, row, col))
        self.study_id = study_id
        self.row = row
        self.col = col


class TooFewSubjects(ValidationError):
    """Raised when a study has too few subjects for the requested folds."""
    pass


##
# Numerical
##

class SingularSystem(MSFRError):
    """Raised when a linear solve hits a pivot below the singularity threshold."""
    category = 'numerical'


class DegenerateInput(MSFRError):
    """Raised when an input carries no information, e.g. an all-zero matrix."""
    category = 'numerical'


##
# Selection and IO
##

class AllFitsFailed(MSFRError):
    """Raised when no grid point of a model selection converged."""
    category = 'selection'


class ParseError(MSFRError):
    """Raised when an input file cannot be parsed."""
    category = 'io'

    def __init__(self, message: str, path: str = None, line: Optional[int] = None):
        location = path if path is not None else '<unknown>'
        if line is not None:
            location += ':%d' % line
        super().__init__('%s: %s' % (location, message))
        self.path = path
        self.line = line
