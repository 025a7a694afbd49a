"""Hardy and Bloch norms on the upper half-plane, the Volterra-type operators
J_g, I_g, M_g, and numerical checks of their boundedness and compactness
criteria."""

from .core import (
    ConfigError,
    HoloFun,
    Point,
    SearchRegion,
    Strip,
    SupEstimate,
    gallery_symbol,
    region_points,
)
from .criteria import (
    boundary_vanishing_check,
    boundedness_certificate,
    compactness_probe,
    criterion_m1,
    criterion_m2,
    growth_constant_estimate,
    strip_decay_check,
)
from .exprlang import differentiate, evaluate, expr_function, parse, to_text
from .ops import OperatorKind, apply, bloch_norm, bloch_seminorm, extremal_fw, ftc_identity_check
from .quad import QuadConfig, cauchy_derivative, hardy_norm, line_l2, segment_integral

__version__ = "0.1.0"
