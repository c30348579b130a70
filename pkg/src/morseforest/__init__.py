"""Exact simplicial Laplacians, discrete gradient census and rooted forests."""
from ._kernels import BACKEND
from .complex import (SimplicialComplex, builtin, euler_characteristic, from_maximal_faces,
                      is_orientable, is_pseudomanifold, load_complex)
from .forests import (RootedForest, acyclic_fitting_orientation, collapses_to_root, defect,
                      enumerate_rooted_forests, forest_generating_polynomial, is_forest,
                      relative_homology_order, remainder, rooted_forest)
from .linalg import (IntegerMatrix, IntegerPolynomial, boundary_matrix, char_poly_shifted,
                     determinant, homology, laplacian, smith_normal_form)
from .morse import (GradientCensus, TopMatching, census_polynomial, critical_cells,
                    enumerate_gradients, gradient_census, is_acyclic, realize_morse_function)
from .verify import (VerificationReport, conjecture_scan, verify_graph_theorem,
                     verify_kirchhoff_gradients, verify_main_theorem, verify_matching_adjacency)

__version__ = "0.1.0"
