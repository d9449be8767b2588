"""Invariants of toric varieties over number fields and points of bounded height on them."""

from .errors import ToriHeightsError
from .fan import Fan, PLFunction, build_and_validate, locate, picard_lattice, pl_eval
from .galois import GaloisAction, close_and_verify, ray_orbits

__version__ = "0.1.0"
