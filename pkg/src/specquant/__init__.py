"""Birth-death walks on the nonnegative integers and their unitary counterparts."""
from .kernels import BACKEND

__version__ = "0.1.0"
