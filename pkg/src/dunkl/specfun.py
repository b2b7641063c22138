"""Special functions and closed-form constants for the weighted (Dunkl) calculus.

Everything downstream is built from the objects here: the reflection-invariant
weight ``h(x)^2 = prod |x_i|^(2 kappa_i)``, the one-dimensional kernel

    E(x, iy) = j_{k-1/2}(xy) + i * xy/(2k+1) * j_{k+1/2}(xy),

its product extension, the averaging density ``Phi_k`` on (-1, 1), and the
normalization constants of the transform, the ball measure and the potential
operators.  All functions are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

__all__ = [
    "MultiplicityParams",
    "gamma_fn",
    "normalized_bessel_j",
    "normalized_bessel_i",
    "dunkl_kernel_1d",
    "dunkl_kernel_nd",
    "dunkl_kernel_real_1d",
    "weight_h2",
    "b_kappa",
    "phi_kappa_weight",
    "phi_tail_mass",
]

# Switch point between the power series and the scipy (large argument) branch
# of the normalized Bessel function.  The series must stay well below the
# cancellation regime (its largest term grows like e^|z|), so the cut sits
# where two terms already reach machine precision.
_BESSEL_SERIES_CUT = 0.5


def gamma_fn(x):
    """Gamma function for positive arguments.

    Raises ValueError on nonpositive input; relative accuracy <= 1e-13.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0):
        raise ValueError("gamma_fn requires a positive argument")
    out = sc.gamma(xa)
    return float(out) if np.isscalar(x) else out


def _bessel_j_series(order, z):
    """Power series of j_order(z); cancellation-free for |z| <= ~1."""
    z = np.asarray(z, dtype=float)
    q = -0.25 * z * z
    term = np.ones_like(q)
    total = np.ones_like(q)
    for m in range(1, 12):
        term = term * q / (m * (m + order))
        total = total + term
    return total


def normalized_bessel_j(order, z):
    """Normalized Bessel function j_a(z) = 2^a Gamma(a+1) J_a(z) / z^a.

    Entire in z with j_a(0) = 1.  Power series near 0 (where the scaled form
    is 0/0), scaled scipy evaluation elsewhere; relative accuracy <= 1e-12
    for |z| <= 1e3.
    """
    if order < -0.5:
        raise ValueError("normalized_bessel_j requires order >= -1/2")
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    az = np.abs(z)
    out = np.empty_like(z)
    small = az <= _BESSEL_SERIES_CUT
    if np.any(small):
        out[small] = _bessel_j_series(order, z[small])
    if np.any(~small):
        zb = az[~small]
        scale = math.exp(math.lgamma(order + 1.0) + order * math.log(2.0))
        out[~small] = scale * sc.jv(order, zb) / zb**order
    return float(out[0]) if scalar else out


def normalized_bessel_i(order, z):
    """Modified counterpart i_a(z) = 2^a Gamma(a+1) I_a(z) / z^a, even in z.

    Evaluated through the exponentially scaled ``ive`` so that callers can
    keep the e^{|z|} growth in log space; this function returns the plain
    (unscaled) value and overflows for |z| beyond ~700 like exp itself.
    """
    if order < -0.5:
        raise ValueError("normalized_bessel_i requires order >= -1/2")
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    az = np.abs(z)
    out = np.empty_like(z)
    small = az <= 1e-6
    if np.any(small):
        q = 0.25 * az[small] ** 2
        out[small] = 1.0 + q / (order + 1.0) * (1.0 + 0.5 * q / (order + 2.0))
    if np.any(~small):
        zb = az[~small]
        scale = math.exp(math.lgamma(order + 1.0) + order * math.log(2.0))
        out[~small] = scale * sc.ive(order, zb) * np.exp(zb) / zb**order
    return float(out[0]) if scalar else out


def scaled_bessel_i(order, z):
    """e^{-|z|} i_order(z), safe for arbitrarily large |z|."""
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    az = np.abs(z)
    out = np.empty_like(z)
    small = az <= 1e-6
    if np.any(small):
        q = 0.25 * az[small] ** 2
        out[small] = (1.0 + q / (order + 1.0)) * np.exp(-az[small])
    if np.any(~small):
        zb = az[~small]
        scale = math.exp(math.lgamma(order + 1.0) + order * math.log(2.0))
        out[~small] = scale * sc.ive(order, zb) / zb**order
    return float(out[0]) if scalar else out


def dunkl_kernel_1d(kappa, x, y):
    """Rank-1 kernel E(x, iy) for the weight |x|^(2 kappa).

    E(x, iy) = j_{k-1/2}(xy) + i * xy/(2k+1) * j_{k+1/2}(xy); at kappa = 0
    this is exp(ixy).
    """
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    w = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    if kappa == 0.0:
        out = np.exp(1j * w)
    else:
        even = normalized_bessel_j(kappa - 0.5, w)
        odd = normalized_bessel_j(kappa + 0.5, w)
        out = even + 1j * w / (2.0 * kappa + 1.0) * odd
    return complex(out) if np.isscalar(w) else out


def dunkl_kernel_real_1d(kappa, x, y):
    """Rank-1 kernel with a real exponent, E(x, y); at kappa = 0: exp(xy).

    Grows like e^{|xy|}; use ``dunkl_kernel_gaussian_factor`` when the growth
    must be cancelled against a Gaussian.
    """
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    w = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    if kappa == 0.0:
        out = np.exp(w)
    else:
        even = normalized_bessel_i(kappa - 0.5, w)
        odd = normalized_bessel_i(kappa + 0.5, w)
        out = even + w / (2.0 * kappa + 1.0) * odd
    return float(out) if np.isscalar(w) else out


def dunkl_kernel_gaussian_factor(kappa, w, log_prefactor):
    """exp(log_prefactor) * E_real(w) computed without overflow.

    ``w`` is the kernel argument (the product of the two kernel slots) and
    ``log_prefactor`` a Gaussian log-weight; the |w| growth of the kernel is
    folded into the exponent before exponentiating.
    """
    w = np.asarray(w, dtype=float)
    lp = np.asarray(log_prefactor, dtype=float)
    if kappa == 0.0:
        return np.exp(lp + w)
    even = scaled_bessel_i(kappa - 0.5, w)
    odd = scaled_bessel_i(kappa + 0.5, w)
    return np.exp(lp + np.abs(w)) * (even + w / (2.0 * kappa + 1.0) * odd)


def weight_h2(params, x):
    """The squared weight h(x)^2 = prod_i |x_i|^(2 kappa_i)."""
    if isinstance(params, MultiplicityParams):
        kappa = params.kappa
    else:
        kappa = np.atleast_1d(np.asarray(params, dtype=float))
    x = np.asarray(x, dtype=float)
    if kappa.size == 1:
        return np.abs(x) ** (2.0 * kappa[0])
    if x.shape[-1] != kappa.size:
        raise ValueError("dimension mismatch between x and kappa")
    return np.prod(np.abs(x) ** (2.0 * kappa), axis=-1)


def b_kappa(kappa):
    """Normalizer of Phi_k, fixed by a unit integral over (-1, 1).

    b_k = Gamma(k + 1/2) / (sqrt(pi) Gamma(k)).
    """
    if kappa <= 0:
        raise ValueError("b_kappa requires kappa > 0")
    return math.exp(math.lgamma(kappa + 0.5) - math.lgamma(kappa)) / math.sqrt(math.pi)


def phi_kappa_weight(kappa, t):
    """Averaging density Phi_k(t) = b_k (1+t)(1-t^2)^(k-1) on (-1, 1).

    kappa = 0 has no density (the measure degenerates to a point mass at
    t = 1); callers must take the classical-shift path instead.
    """
    if kappa == 0:
        raise ValueError(
            "phi_kappa_weight is undefined at kappa=0 (point mass at t=1); "
            "use the classical shift"
        )
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= 1.0):
        raise ValueError("t must lie in the open interval (-1, 1)")
    return b_kappa(kappa) * (1.0 + t) * (1.0 - t * t) ** (kappa - 1.0)


def phi_tail_mass(kappa, a):
    """Mass of Phi_k on [a, 1], clipped to [0, 1].

    Splits Phi_k into its even and odd parts; the even part is an incomplete
    Beta integral and the odd part integrates in closed form.
    """
    a = np.asarray(a, dtype=float)
    ac = np.clip(a, -1.0, 1.0)
    if kappa == 0:
        # point mass at t = 1: full mass unless the cut excludes t = 1
        return np.where(a <= 1.0, 1.0, 0.0) * np.ones_like(ac)
    # int_a^1 (1-t^2)^(k-1) dt = 2^(2k-1) * B(k,k) * (1 - I_u(k,k)), u=(1+a)/2
    u = 0.5 * (1.0 + ac)
    even = (
        2.0 ** (2.0 * kappa - 1.0)
        * math.exp(2.0 * math.lgamma(kappa) - math.lgamma(2.0 * kappa))
        * sc.betainc(kappa, kappa, 1.0 - u)
    )
    odd = (1.0 - ac * ac) ** kappa / (2.0 * kappa)
    return np.clip(b_kappa(kappa) * (even + odd), 0.0, 1.0)


@dataclass(frozen=True)
class MultiplicityParams:
    """Multiplicity vector kappa for the product group on R^d, plus constants.

    ``kappa`` holds one nonnegative entry per coordinate (a scalar builds the
    rank-1 line case).  The derived constants follow the conventions in which
    the transform, its inverse and the convolution all integrate against the
    normalized measure c_h * h^2 dx.
    """

    kappa: tuple = field()

    def __init__(self, kappa):
        k = np.atleast_1d(np.asarray(kappa, dtype=float))
        if np.any(k < 0):
            raise ValueError("every multiplicity must be nonnegative")
        object.__setattr__(self, "kappa", tuple(float(v) for v in k))

    @property
    def dim(self):
        return len(self.kappa)

    @property
    def gamma_kappa(self):
        return float(sum(self.kappa))

    @property
    def homogeneity(self):
        """Degree 2*gamma_k + d of the measure h^2 dx under dilation."""
        return 2.0 * self.gamma_kappa + self.dim

    @property
    def c_h(self):
        """Transform normalization, 1 / int h^2 exp(-|x|^2/2) dx."""
        log_inv = 0.0
        for k in self.kappa:
            log_inv += (k + 0.5) * math.log(2.0) + math.lgamma(k + 0.5)
        return math.exp(-log_inv)

    @property
    def d_kappa(self):
        """Ball-measure constant, 1 / int_{|y|<=1} h^2(y) dy."""
        g = self.gamma_kappa
        d = self.dim
        log_sphere = (
            math.log(2.0)
            + sum(math.lgamma(k + 0.5) for k in self.kappa)
            - math.lgamma(g + 0.5 * d)
        )
        return math.exp(-(log_sphere - math.log(d + 2.0 * g)))

    def ball_mass(self, r):
        """int_{|y| <= r} h^2(y) dy = r^(2 gamma + d) / d_kappa."""
        r = np.asarray(r, dtype=float)
        return r**self.homogeneity / self.d_kappa

    def d_kappa_alpha(self, alpha):
        """Constant of the fractional-integral kernel, 0 < alpha < 2 gamma + d."""
        g, d = self.gamma_kappa, self.dim
        if not 0.0 < alpha < 2.0 * g + d:
            raise ValueError("alpha must lie in (0, 2*gamma_kappa + d)")
        return 2.0 ** (-g - 0.5 * d + alpha) * math.exp(
            math.lgamma(0.5 * alpha) - math.lgamma(g + 0.5 * (d - alpha))
        )

    def d_n_kappa_alpha(self, n, alpha):
        """Constant in the distributional transform of P_n(x)/|x|^(2g+d+n-a).

        Equals i^(-n) 2^(a-g-d/2) Gamma((n+a)/2) / Gamma(g+(n+d-a)/2); the
        n = 0 value coincides with ``d_kappa_alpha``.
        """
        g, d = self.gamma_kappa, self.dim
        if not 0.0 < alpha < 2.0 * g + d:
            raise ValueError("alpha must lie in (0, 2*gamma_kappa + d)")
        mag = 2.0 ** (-g - 0.5 * d + alpha) * math.exp(
            math.lgamma(0.5 * (n + alpha)) - math.lgamma(g + 0.5 * (n + d - alpha))
        )
        return (-1j) ** n * mag

    @property
    def riesz_constant(self):
        """Scalar in front of the rank-1 principal-value transform.

        Fixed (together with the normalized measure) by the requirement that
        the transform side act as -i x/|x|; reduces to 1/pi at kappa = 0.
        """
        if self.dim != 1:
            raise ValueError("riesz_constant is the rank-1 normalization")
        k = self.kappa[0]
        return math.exp(math.lgamma(k + 1.0) - math.lgamma(k + 0.5)) / math.sqrt(
            math.pi
        )

    def weight(self, x):
        return weight_h2(self, x)

    def validate(self):
        """Recompute gamma_kappa and check the stored value matches."""
        g = sum(self.kappa)
        if not math.isclose(g, self.gamma_kappa, rel_tol=0.0, abs_tol=0.0):
            raise AssertionError("gamma_kappa does not equal the kappa sum")
        return True


def dunkl_kernel_nd(params, x, y):
    """Product kernel E(x, iy) = prod_i E(x_i, i y_i) for the group Z_2^d."""
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape[-1] != params.dim or y.shape[-1] != params.dim:
        raise ValueError("point dimension does not match the multiplicity vector")
    out = np.ones(np.broadcast_shapes(x.shape[:-1], y.shape[:-1]), dtype=complex)
    for i, k in enumerate(params.kappa):
        out = out * dunkl_kernel_1d(k, x[..., i], y[..., i])
    return complex(out) if out.shape == () else out
