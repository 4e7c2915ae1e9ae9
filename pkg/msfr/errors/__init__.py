from .model_errors import *
