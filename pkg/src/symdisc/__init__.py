"""Numerics for the symmetrized polydisc and the spectral ball."""

from . import bergman, errors, metrics, spectral, sympoly
from .errors import *  # noqa: F401,F403
from .sympoly import Polynomial, all_roots_in_disc, elem_sym, in_Gn, minkowski_h, roots

__version__ = "0.1.0"
