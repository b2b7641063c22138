"""Weighted Fourier analysis for reflection-invariant power weights.

The library implements, for the line (with weight |x|^(2 kappa)) and for
product weights on R^d, the weighted transform and its calculus: generalized
translation, convolution, maximal averages, Riesz and Bessel potentials and
the principal-value Riesz transform, together with a verification battery
for every identity these operators satisfy.
"""

from .specfun import (
    MultiplicityParams,
    b_kappa,
    dunkl_kernel_1d,
    dunkl_kernel_nd,
    dunkl_kernel_real_1d,
    gamma_fn,
    normalized_bessel_j,
    phi_kappa_weight,
    phi_tail_mass,
    weight_h2,
)
from .quadrature import (
    LineGrid,
    QuadratureRule,
    RadialGrid,
    gauss_jacobi,
    gauss_legendre,
    integrate,
    make_line_grid,
    make_radial_grid,
    radial_rule,
)
from .transform import (
    SampledFunction,
    dunkl_derivative_1d,
    dunkl_laplacian_spectral,
    dunkl_transform,
    intertwine_z2d,
    inverse_dunkl_transform,
    lp_norm,
    plancherel_norm,
)

__version__ = "0.1.0"
