"""Exact Zariski and algebraic multiplicity calculators over Q and F_p."""

__version__ = "0.1.0"

from .arith import (discriminant, distinct_root_count, frobenius_decompose, gcd,
                    gcd_univariate, resultant, separable_layers, squarefree_part)
from .errors import *  # noqa: F401,F403
from .fields import GF, QQ, ExtensionField, FieldDescriptor
from .macaulay import intersection_multiplicity_oracle, local_length
from .multiplicity import (CoverSpec, MapSpec, MultiplicityReport,
                           algebraic_multiplicity_cover, algebraic_multiplicity_curve,
                           etale_at, intersection_multiplicity, left_right_multiplicity,
                           two_stage_sum, unramified_fiber_test, zariski_multiplicity)
from .newton import (BranchExpansion, NewtonPolygon, count_roots_by_valuation, hensel_lift,
                     newton_polygon, puiseux_branches, weierstrass_data)
from .parser import parse_point, parse_polynomial, parse_series
from .poly import MultiPoly
from .series import INF, PuiseuxSeries, SeriesDomain, render_series, series_invert, valuation
from .specialisation import (ProjPoint, is_infinitesimally_near, lift_in_cover,
                             specialize_point, tower_specialize)
