"""Local Chern obstructions of collections of 1-forms on singular germs.

The package computes exact colengths from standard bases over Q,
maximal-minor ideals of augmented Jacobian matrices, polar curves
and intersection multiplicities, and combines them into the local Chern
obstruction in the ICIS and surface regimes.
"""

from .chern import (ChernReport, FormCollection, GeometryReport, Normalization, VarietyInput,
                    chern_icis, chern_surface, differential, generic_linear_collection,
                    geometry_checks, imult_plane, ind_point, polar_curve_ideal,
                    singular_locus_ideal, special_locus_ideal)
from .groebner import (Ideal, StandardBasis, colength, ideal_quotient, krull_dimension,
                       membership, normal_form, saturate, standard_basis)
from .matmod import (ModulePresentation, PolyMatrix, augment, jacobian_matrix, maximal_minors,
                     module_colength, tensor_presentation)
from .polyalg import (GLOBAL, INFINITY, LOCAL, MonomialOrder, Polynomial, PolyRing, leading_term,
                      order_of_vanishing, parse_poly, partial_derivative, poly_arith, substitute)

__version__ = "0.1.0"
