"""Concordance obstructions for 2-component links of linking number one.

Library + CLI computing Wirtinger presentations from PD codes, homology of
finite abelian covers via Fox calculus and the regular representation,
linking-form metabolisers, Levine-Tristram and torus-averaged signatures,
and the satellite obstruction scan against the Hopf link.
"""

__version__ = "0.1.0"

from .algebra import (AdmissibleMap, Character, FinAbGroup, LaurentPoly,
                      enumerate_characters, eval_at_character,
                      apply_rep_to_matrix, parse_laurent,
                      regular_representation)
from .linkdiagram import PDCode, components, linking_number, parse_pd, wirtinger
from .foxcalc import (alexander_matrix, fox_derivative, knot_alexander,
                      multivariable_alexander)
from .homology import (CoverHomology, SNFResult, cover_chain_complex,
                       homology_of_cover, lift_class_of_curve,
                       smith_normal_form, verify_knot_cover_formula,
                       verify_link_cover_formula)

__all__ = [
    "AdmissibleMap", "Character", "CoverHomology", "FinAbGroup",
    "LaurentPoly", "PDCode", "SNFResult", "alexander_matrix",
    "apply_rep_to_matrix", "components", "cover_chain_complex",
    "enumerate_characters", "eval_at_character", "fox_derivative",
    "homology_of_cover", "knot_alexander", "lift_class_of_curve",
    "linking_number", "multivariable_alexander", "parse_laurent", "parse_pd",
    "regular_representation", "smith_normal_form",
    "verify_knot_cover_formula", "verify_link_cover_formula", "wirtinger",
]
