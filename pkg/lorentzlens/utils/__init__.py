from .algorithms import *
from .exceptions import *
