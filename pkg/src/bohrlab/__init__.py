"""Bohr radii of Faber-Green condensers: Faber polynomials, their norms, and bound solvers."""
from .bohr import (
    BoundReport,
    Certificate,
    bohr_sum,
    caratheodory_bound,
    caratheodory_bound_annulus,
    check_caratheodory,
    lower_certificate,
    lower_scan,
    solve_upper,
    solve_upper_annulus,
    theorem2_experiment,
)
from .exceptions import BohrLabError, DiagnosticFailure, DomainError, NotPositiveClass, OracleFailure
from .faber import (
    FaberPoly,
    en_tail_bound,
    faber_coefficients,
    faber_oracle,
    faber_poly,
    faber_polys,
    holomorphy_radius,
    scale_to_level,
)
from .gallery import (
    Condenser,
    get_condenser,
    load_condenser,
    make_disk,
    make_hypocycloid,
    make_level_set,
    make_segment,
    positive_class_check,
    save_condenser,
)
from .laurent import ExteriorMap, LaurentSeries, laurent_mul, laurent_pow
from .norms import NormModel, PolygonCurve, angular_variation, norm_positive_class, norm_sampled

__version__ = "0.1.0"
