from .study import *
from .model import *
from .scores import *
