from enum import Enum


class MethodType(Enum):
    """
    The fitting strategies compared by the benchmark.
    """
    MSFR = 'msfr'
    MSFA = 'msfa'
    FR = 'fr'
    MSFA_LR = 'msfa-lr'

    @classmethod
    def parse(cls, text: str) -> 'MethodType':
        text = str(text).strip().lower().replace('_', '-').replace('&', '-')
        return cls(text)
