from enum import Enum


class ScoreMethod(Enum):
    """
    The factor score estimator.
    """
    BARTLETT = 'bartlett'
    THURSTONE = 'thurstone'

    @classmethod
    def parse(cls, text: str) -> 'ScoreMethod':
        return cls(str(text).strip().lower())
