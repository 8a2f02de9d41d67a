"""Exact computation of T-modified Stickelberger elements and ideals, minus parts
of T-ray class groups, and their Fitting ideals, for abelian CM fields over Q."""
from .algebra import (Character, CyclotomicNumber, FiniteAbelianGroup, GroupRingElement,
                      character_value, from_character_values, multiply, sharp)
from .classgroup import (GModuleFinite, UnsupportedScope, dualize, fitting_ideal,
                         present_over_minus_ring, t_ray_minus_module)
from .fields import AbelianFieldQ, build_field, check_T_admissible, quadratic_field
from .harness import VerificationReport, run_battery, tower_check, verify_c1
from .ideals import (IdealLattice, MinusRing, lattice_sharp, lattices_equal_away_from_2,
                     nuJ_identity_check, theta_ideal_minus)
from .lvalues import l_value_ST, omega_T, theta_ST, theta_ST_characters

__version__ = "0.1.0"

__all__ = [
    "AbelianFieldQ", "Character", "CyclotomicNumber", "FiniteAbelianGroup", "GModuleFinite",
    "GroupRingElement", "IdealLattice", "MinusRing", "UnsupportedScope", "VerificationReport",
    "build_field", "character_value", "check_T_admissible", "dualize", "fitting_ideal",
    "from_character_values", "l_value_ST", "lattice_sharp", "lattices_equal_away_from_2",
    "multiply", "nuJ_identity_check", "omega_T", "present_over_minus_ring", "quadratic_field",
    "run_battery", "sharp", "t_ray_minus_module", "theta_ST", "theta_ST_characters",
    "theta_ideal_minus", "tower_check", "verify_c1",
]
