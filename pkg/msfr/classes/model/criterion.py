from enum import Enum


class Criterion(Enum):
    """
    The information criterion used to pick latent dimensions.
    """
    AIC = 'aic'
    BIC = 'bic'

    @classmethod
    def parse(cls, text: str) -> 'Criterion':
        return cls(str(text).strip().lower())
