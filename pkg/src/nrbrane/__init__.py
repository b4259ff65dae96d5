"""Exact rank-2 Higgs bundle computations on hyperelliptic curves over finite fields."""

from .config import build, desk_config, load_config
from .cover import CoverDivisor, CoverModel, CoverPoint
from .curve import INFINITY, CurveFunction, Divisor, HyperCurve, Point, validate_curve
from .exactfield import FieldElem, GF, Poly, field, poly_gcd, poly_roots, sqrt_fq
from .picard import PicClass, class_of_divisor, enumerate_two_torsion, is_effective_class
from .spectral import BasePoint, HitchinBase

__version__ = "0.1.0"
