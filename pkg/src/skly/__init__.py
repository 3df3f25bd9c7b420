"""Quadratic Poisson brackets on elliptic endomorphism spaces and their symplectic leaves."""

from .elliptic import CurvePoint, Divisor, LatticeCurve, j_constants, jacobi_sn_cn_dn, w_functions
from .errors import SklyError
from .fm import ChargeVector, EquivalenceWord, apply_word, continued_fraction, pair_invariants, solve_fo_correspondence
from .leaves import enumerate_strata, leaf_dimension, rank2_classify
from .poisson import QuadraticBivector, jacobian_bracket, sklyanin_casimirs
from .polynomial import ParamPolynomial
from .sklyanin import EndomorphismPoint, bivector_poi3
from .torsion import Partition, TorsionType, extension_set, lr_coefficient

__version__ = "0.1.0"

__all__ = [
    "ChargeVector", "CurvePoint", "Divisor", "EndomorphismPoint", "EquivalenceWord", "LatticeCurve",
    "ParamPolynomial", "Partition", "QuadraticBivector", "SklyError", "TorsionType", "apply_word",
    "bivector_poi3", "continued_fraction", "enumerate_strata", "extension_set", "j_constants",
    "jacobi_sn_cn_dn", "jacobian_bracket", "leaf_dimension", "lr_coefficient", "pair_invariants",
    "rank2_classify", "sklyanin_casimirs", "solve_fo_correspondence", "w_functions",
]
