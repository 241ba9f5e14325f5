"""Weyl-chamber fans of classical root systems, the homology of their toric
varieties, and the moduli interpretation as pointed chains of P^1."""
from .fan import (Cone, SimplicialFan, WeylFan, check_fiber_flatness, contracted_c_fan,
                  weyl_chamber_fan)
from .homology import (ChainMonomial, HomologyClass, IntPolynomial, basis_monomial,
                       betti_numbers, poincare_from_fan, poincare_series, reduce_to_basis)
from .moduli import (CombinatorialType, ProjectivePair, RnData, classify, enumerate_fiber_points,
                     orbit_type, validate_data)
from .rootsys import RootSystem, RootVector, SignedPermutation, build_root_system, weyl_elements

__version__ = "0.1.0"

__all__ = [
    "ChainMonomial", "CombinatorialType", "Cone", "HomologyClass", "IntPolynomial",
    "ProjectivePair", "RnData", "RootSystem", "RootVector", "SignedPermutation",
    "SimplicialFan", "WeylFan", "basis_monomial", "betti_numbers", "build_root_system",
    "check_fiber_flatness", "classify", "contracted_c_fan", "enumerate_fiber_points",
    "orbit_type", "poincare_from_fan", "poincare_series", "reduce_to_basis", "validate_data",
    "weyl_chamber_fan", "weyl_elements",
]
