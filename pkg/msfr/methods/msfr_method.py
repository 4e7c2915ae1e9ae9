from msfr.classes import MethodType

from .method import MethodInterface


class MSFRMethod(MethodInterface):
    """
    The full model: covariate effects, common and study-specific factors, fitted jointly.
    """
    method_type = MethodType.MSFR
