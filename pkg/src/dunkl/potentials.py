"""Fractional integrals: Riesz potentials, the Bessel kernel and potentials.

The Riesz potential of order alpha in (0, 2 gamma + d) is computed from the
explicit translation,

    I_a f(x) = (d_k^a)^{-1} c_h int tau_y f(x) |y|^(a - 2g - d) h^2(y) dy,

with graded quadrature at the integrable singularity y = 0; the transform
side (multiplication by |y|^{-a}) is kept as an independent cross-check and
never substituted into this route.  The Bessel kernel is tabulated from its
subordination integral and drives the Bessel potential as a convolution.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline

from .quadrature import gauss_legendre, half_line_rule, make_line_grid
from .report import OperatorReport
from .specfun import MultiplicityParams
from .transform import SampledFunction, transform_at
from .translation import phi_rule, translate_many

__all__ = [
    "PotentialSpec",
    "RadialFunctionTable",
    "riesz_potential",
    "riesz_potential_profile",
    "riesz_multiplier_check",
    "lemma31_check",
    "scaling_exponent_check",
    "BesselKernel",
    "bessel_kernel",
    "bessel_potential",
    "laplacian_potential_identity_check",
]


@dataclass(frozen=True)
class PotentialSpec:
    """Validated order/kind pair for a potential operator."""

    alpha: float
    kind: str = "riesz"

    def validate(self, params):
        if self.kind not in ("riesz", "bessel"):
            raise ValueError("kind must be 'riesz' or 'bessel'")
        if self.kind == "riesz":
            if not 0.0 < self.alpha < params.homogeneity:
                raise ValueError(
                    f"alpha must lie in (0, {params.homogeneity}) for the "
                    "Riesz potential"
                )
        elif self.alpha <= 0.0:
            raise ValueError("alpha must be positive for the Bessel potential")
        return self


class RadialFunctionTable:
    """Dense radial samples with a spline core and a structured tail.

    The tail is interpolated either as v * r^(-tail_power) against log r
    (algebraic decay) or as log v against r (exponential decay), so slowly
    decaying potentials keep full relative accuracy far outside the core.
    """

    def __init__(self, r, values, r_switch=4.0, tail_power=None, tail_log=False):
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        order = np.argsort(r)
        self.r = r[order]
        self.values = values[order]
        self.r_max = float(self.r[-1])
        self.r_switch = float(min(r_switch, 0.5 * self.r_max))
        self.tail_power = tail_power
        self.tail_log = tail_log
        core = self.r <= self.r_switch * 1.1
        self._core = make_interp_spline(self.r[core], self.values[core], k=5)
        tail = self.r >= self.r_switch * 0.9
        rt, vt = self.r[tail], self.values[tail]
        if tail_log:
            if np.any(vt <= 0):
                raise ValueError("log tail requires positive values")
            self._tail = make_interp_spline(rt, np.log(vt), k=3)
        else:
            p = 0.0 if tail_power is None else float(tail_power)
            self._tail_p = p
            self._tail = make_interp_spline(np.log(rt), vt * rt ** (-p), k=3)

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.empty(r.shape)
        core = r <= self.r_switch
        if np.any(core):
            out[core] = self._core(r[core])
        if np.any(~core):
            rt = np.minimum(r[~core], self.r_max)
            if self.tail_log:
                out[~core] = np.exp(self._tail(rt))
            else:
                out[~core] = self._tail(np.log(rt)) * rt**self._tail_p
            if np.any(r[~core] > self.r_max * (1.0 + 1e-9)):
                warnings.warn("radial table evaluated beyond its range", stacklevel=2)
        return out

    def derivative(self, r, order=1):
        """Core-region derivatives (used by the real-space Laplacian)."""
        r = np.asarray(r, dtype=float)
        if np.any(np.abs(r) > self.r_switch):
            raise ValueError("derivatives only available in the spline core")
        return self._core.derivative(order)(np.abs(r)) * np.sign(r) ** (order % 2)


class EvenFunction:
    """Even extension g(x) = table(|x|) of a radial table."""

    breakpoints = ()

    def __init__(self, table):
        self.table = table

    def __call__(self, x):
        return self.table(np.abs(np.asarray(x, dtype=float)))


class OddFunction:
    """Odd extension g(x) = sign(x) table(|x|)."""

    breakpoints = ()

    def __init__(self, table):
        self.table = table

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.table(np.abs(x))


def _as_callable(f):
    if isinstance(f, SampledFunction):
        return f.handle if f.handle is not None else f
    return f


def riesz_potential(
    f,
    alpha,
    points=None,
    y_max=None,
    n_t=64,
    params=None,
    support_radius="auto",
    max_width=3.0,
):
    """Riesz potential through the explicit translation route (rank 1).

    The shift integral is restricted per evaluation point to where the
    translated function can be nonzero (``support_radius``); pass None for
    slowly decaying inputs, which fall back to a width-capped full rule.
    """
    on_grid = False
    if isinstance(f, SampledFunction):
        params = f.grid.params
        if points is None:
            points = f.grid.nodes
            on_grid = True
        if y_max is None:
            y_max = f.grid.cutoff + 16.0
        if support_radius == "auto":
            support_radius = f.grid.cutoff + 3.0
    if support_radius == "auto":
        support_radius = None
    if params is None or points is None:
        raise ValueError("points and params are required for bare callables")
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    PotentialSpec(alpha, "riesz").validate(params)
    if y_max is None:
        y_max = 28.0
    fn = _as_callable(f)
    k = params.kappa[0]
    const = params.c_h / params.d_kappa_alpha(alpha)
    phi = phi_rule(k, n=n_t)
    points = np.atleast_1d(np.asarray(points, dtype=float))
    out = np.empty(points.shape, dtype=complex)
    for i, x in enumerate(points):
        if support_radius is None:
            rule = half_line_rule(
                alpha - 1.0, 1.0, y_max, n_panel=32, levels=16, max_width=8.0
            )
        else:
            rule = windowed_halfline_rule(
                alpha - 1.0, x, support_radius, y_max, max_width=max_width
            )
        ys = np.concatenate([rule.nodes, -rule.nodes])
        tv = translate_many(fn, k, ys, x, rule=phi)
        out[i] = const * np.dot(rule.weights, tv[: rule.size] + tv[rule.size :])
    if np.max(np.abs(out.imag)) < 1e-12 * max(np.max(np.abs(out.real)), 1e-300):
        out = out.real
    if on_grid:
        return SampledFunction(f.grid, out, parity=f.parity)
    return out


def riesz_potential_profile(
    f, alpha, params, r_max=120.0, n_core=400, n_tail=240, y_max=None, n_t=64
):
    """Dense even profile of I_a f as a RadialFunctionTable.

    Supports composition (semigroup tests) and real-space differentiation;
    the algebraic tail r^(a - 2g - d) is built into the interpolation.
    """
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    r_core = np.linspace(0.0, 6.0, n_core)
    r_tail = np.geomspace(6.0, r_max, n_tail)[1:]
    r = np.concatenate([r_core, r_tail])
    if y_max is None:
        y_max = r_max + 18.0
    vals = riesz_potential(f, alpha, points=r, y_max=y_max, n_t=n_t, params=params)
    return RadialFunctionTable(
        np.asarray(r),
        np.real(vals),
        r_switch=5.0,
        tail_power=alpha - params.homogeneity,
    )


def riesz_multiplier_check(f, g, alpha, tolerance=1e-6, n_t=64):
    """Bilinear form of the multiplier identity for the Riesz potential.

    int (I_a f) g h^2 dx  ==  int F f(y) |y|^(-a) conj(F g)(y) h^2 dy
    for real test functions (the reflection of the second transform reduces
    to a conjugate).
    """
    t0 = time.perf_counter()
    grid = f.grid
    params = grid.params
    If = riesz_potential(f, alpha, n_t=n_t)
    lhs = grid.integrate_h2(np.asarray(If.values) * np.asarray(g.values))
    k = params.kappa[0]
    rule = half_line_rule(2.0 * k - alpha, 1.0, grid.cutoff, n_panel=32, levels=16)
    ys = np.concatenate([rule.nodes, -rule.nodes])
    fv = transform_at(f, ys)
    gv = np.conj(transform_at(g, ys))
    prod = fv * gv
    rhs = np.dot(rule.weights, prod[: rule.size] + prod[rule.size :])
    scale = max(abs(lhs), abs(rhs))
    return OperatorReport.from_comparison(
        "riesz_potential_multiplier",
        complex(lhs),
        complex(rhs),
        tolerance,
        scale=scale,
        provenance="bilinear pairing of the fractional-integral multiplier",
        inputs={"kappa": k, "alpha": alpha},
        runtime_s=time.perf_counter() - t0,
    )


def lemma31_check(n, alpha, params, phi, phi_hat, cutoff=12.0, tolerance=1e-6):
    """Distributional transform identity for P_n / |x|^(2g+d+n-a), rank 1.

    Both sides are plain weighted integrals of a closed-form pair
    (phi, phi_hat); P_0 = 1 and P_1 = x exhaust the rank-1 harmonics.
    """
    t0 = time.perf_counter()
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    if n not in (0, 1):
        raise ValueError("rank-1 harmonics have degree 0 or 1 only")
    k = params.kappa[0]
    const = params.d_n_kappa_alpha(n, alpha)
    lhs_rule = half_line_rule(alpha - 1.0, 1.0, cutoff, n_panel=32, levels=16)
    rhs_rule = half_line_rule(2.0 * k - alpha, 1.0, cutoff, n_panel=32, levels=16)
    y = lhs_rule.nodes
    if n == 0:
        lhs_vals = np.asarray(phi_hat(y)) + np.asarray(phi_hat(-y))
    else:
        lhs_vals = np.asarray(phi_hat(y)) - np.asarray(phi_hat(-y))
    lhs = np.dot(lhs_rule.weights, lhs_vals)
    z = rhs_rule.nodes
    if n == 0:
        rhs_vals = np.asarray(phi(z)) + np.asarray(phi(-z))
    else:
        rhs_vals = np.asarray(phi(z)) - np.asarray(phi(-z))
    rhs = const * np.dot(rhs_rule.weights, rhs_vals)
    scale = max(abs(lhs), abs(rhs))
    return OperatorReport.from_comparison(
        f"lemma_bilinear_n{n}",
        complex(lhs),
        complex(rhs),
        tolerance,
        scale=scale,
        provenance="distributional transform of homogeneous kernels",
        inputs={"kappa": k, "alpha": alpha, "n": n},
        runtime_s=time.perf_counter() - t0,
    )


def scaling_exponent_check(alpha, p, params, s_values=(1.0, 1.3, 1.7, 2.2), tolerance=0.01):
    """Dilation exponents of the potential and of the Gaussian family.

    Fits log-log slopes of ||I_a f_s||_q and ||f_s||_p against s for
    f_s = exp(-s^2 x^2); they must match -a - (2g+d)/q and -(2g+d)/p.
    """
    t0 = time.perf_counter()
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    hom = params.homogeneity
    inv_q = 1.0 / p - alpha / hom
    if inv_q <= 0:
        raise ValueError("exponent line leaves q infinite or negative")
    q = 1.0 / inv_q
    norms_i, norms_f = [], []
    for s in s_values:
        grid = make_line_grid(params, n=256, cutoff=12.0 / min(1.0, s))
        fs = SampledFunction.from_function(
            grid, lambda x, s=s: np.exp(-(s * x) ** 2), parity="even"
        )
        If = riesz_potential(fs, alpha)
        norms_i.append(grid.norm(If.values, q))
        norms_f.append(grid.norm(fs.values, p))
    ls = np.log(np.asarray(s_values))
    slope_i = np.polyfit(ls, np.log(norms_i), 1)[0]
    slope_f = np.polyfit(ls, np.log(norms_f), 1)[0]
    expect_i = -alpha - hom / q
    expect_f = -hom / p
    err = max(
        abs(slope_i - expect_i) / abs(expect_i),
        abs(slope_f - expect_f) / abs(expect_f),
    )
    return OperatorReport.from_comparison(
        "potential_dilation_exponents",
        [float(slope_i), float(slope_f)],
        [expect_i, expect_f],
        tolerance,
        scale=max(abs(expect_i), abs(expect_f)),
        provenance="dilation covariance of the fractional integral",
        inputs={"alpha": alpha, "p": p, "q": q, "s_values": list(map(float, s_values))},
        runtime_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Bessel kernel and potential


@dataclass
class BesselKernel:
    """Tabulated positive kernel of (I - Delta)^(-a/2) with its metadata."""

    params: MultiplicityParams
    alpha: float
    r: np.ndarray
    values: np.ndarray
    table: object

    def __call__(self, r):
        return self.table(r)

    def exact(self, r):
        """Direct quadrature of the subordination integral (no table)."""
        return _bessel_kernel_values(self.params, self.alpha, np.asarray(r, float))

    def to_csv(self, path):
        """Kernel table as CSV with columns r, G_alpha_kappa."""
        with open(path, "w") as fh:
            fh.write(f"# bessel kernel, alpha={self.alpha:.17g}, ")
            fh.write(f"kappa={','.join(f'{k:.17g}' for k in self.params.kappa)}\n")
            fh.write("r,G_alpha_kappa\n")
            for ri, vi in zip(self.r, self.values):
                fh.write(f"{ri:.17g},{vi:.17g}\n")


def _bessel_kernel_values(params, alpha, r):
    """Subordination integral of the kernel on a radius vector.

    G(r) = 2^(-g-d/2)/Gamma(a/2) * int_0^inf e^{-t - r^2/(4t)}
           t^{(a-d)/2 - g - 1} dt, evaluated in the variable s = log t with
    panels covering the doubly exponential decay on both sides.
    """
    g, d = params.gamma_kappa, params.dim
    nu = 0.5 * (alpha - d) - g
    r = np.asarray(r, dtype=float)
    pref = 2.0 ** (-g - 0.5 * d) / math.exp(math.lgamma(0.5 * alpha))
    lo = np.minimum(np.log(np.maximum(r, 1e-300) ** 2 / 200.0), -8.0)
    hi = math.log(200.0)
    base = gauss_legendre(24)
    out = np.zeros(r.shape)
    # panel count scales with the s-range of each radius
    for i, ri in enumerate(r.ravel()):
        a = lo.ravel()[i]
        n_panels = int(np.ceil((hi - a) / 1.5))
        edges = np.linspace(a, hi, n_panels + 1)
        total = 0.0
        for e0, e1 in zip(edges[:-1], edges[1:]):
            s = 0.5 * (e0 + e1) + 0.5 * (e1 - e0) * base.nodes
            w = 0.5 * (e1 - e0) * base.weights
            t = np.exp(s)
            total += np.dot(w, np.exp(-t - ri * ri / (4.0 * t) + nu * s))
        out.ravel()[i] = pref * total
    return out


def bessel_kernel(params, alpha, r_max=60.0):
    """Tabulate the Bessel kernel on a graded radial grid.

    The grid is dense where log G has curvature (the power-to-exponential
    crossover near r = 1), keeping the interpolation budget below 1e-9.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    r = np.concatenate(
        [
            np.geomspace(1e-4, 0.8, 300),
            np.linspace(0.8, 8.0, 520)[1:],
            np.linspace(8.0, r_max, 320)[1:],
        ]
    )
    vals = _bessel_kernel_values(params, alpha, r)
    if np.any(vals <= 0):
        raise ArithmeticError("kernel tabulation produced nonpositive values")
    table = _SingularCoreTable(params, alpha, r, vals)
    return BesselKernel(params, alpha, r, vals, table)


class _SingularCoreTable:
    """Kernel interpolation in singularity-adapted coordinates.

    Below r = 1 interpolates log G against log r (the kernel is a power
    there); above it interpolates log G against r (exponential tail).
    """

    def __init__(self, params, alpha, r, values):
        r = np.asarray(r)
        values = np.asarray(values)
        order = np.argsort(r)
        r, values = r[order], values[order]
        self.r_min = float(r[0])
        self.r_max = float(r[-1])
        inner = r <= 1.2
        self._inner = make_interp_spline(np.log(r[inner]), np.log(values[inner]), k=3)
        outer = r >= 0.8
        self._outer = make_interp_spline(r[outer], np.log(values[outer]), k=3)
        self.singular_slope = alpha - params.homogeneity

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.empty(r.shape)
        tiny = r < self.r_min
        inner = (r >= self.r_min) & (r <= 1.0)
        outer = r > 1.0
        if np.any(tiny):
            # analytic continuation along the known power law
            base = self._inner(math.log(self.r_min))
            out[tiny] = np.exp(
                base + self.singular_slope * (np.log(np.maximum(r[tiny], 1e-300)) - math.log(self.r_min))
            )
        if np.any(inner):
            out[inner] = np.exp(self._inner(np.log(r[inner])))
        if np.any(outer):
            out[outer] = np.exp(self._outer(np.minimum(r[outer], self.r_max)))
        return out


def bessel_potential(f, alpha, kernel=None, points=None, n_t=64):
    """Bessel potential as convolution with the tabulated kernel.

    Computed in the order that keeps the kernel singularity at the origin of
    the integration variable, where the graded rule absorbs it.
    """
    grid = f.grid
    params = grid.params
    PotentialSpec(alpha, "bessel").validate(params)
    if kernel is None:
        kernel = bessel_kernel(params, alpha)
    if points is None:
        points = grid.nodes
    points = np.atleast_1d(np.asarray(points, dtype=float))
    k = params.kappa[0]
    fn = _as_callable(f)
    f_check = lambda u: np.asarray(fn(-np.asarray(u)))
    # integrand near 0 is G(y) y^(2k) = O(y^(alpha-1)); grade for that power
    beta = alpha - 1.0
    rule = half_line_rule(beta, 1.0, 50.0, n_panel=32, levels=16)
    gv = kernel.table(rule.nodes) * rule.nodes ** (2.0 * k - beta)
    phi = phi_rule(k, n=n_t)
    out = np.empty(points.shape, dtype=complex)
    for i, x in enumerate(points):
        tv_pos = translate_many(f_check, k, -rule.nodes, -x, rule=phi)
        tv_neg = translate_many(f_check, k, rule.nodes, -x, rule=phi)
        out[i] = params.c_h * np.dot(rule.weights * gv, tv_pos + tv_neg)
    if np.max(np.abs(out.imag)) < 1e-12 * max(np.max(np.abs(out.real)), 1e-300):
        out = out.real
    if isinstance(f, SampledFunction) and points.size == grid.size:
        return SampledFunction(grid, out, parity=f.parity)
    return out


def laplacian_potential_identity_check(f, alpha, params, test_points=None, tolerance=1e-5):
    """Three-way identity Delta(I_a f) = I_a(Delta f) = -I_{a-2} f, rank 1.

    Needs 2 <= alpha < 2g + d; infeasible parameter ranges are reported as
    skipped rather than failed.
    """
    t0 = time.perf_counter()
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    hom = params.homogeneity
    if not (2.0 <= alpha < hom):
        return OperatorReport(
            name="laplacian_potential_identity",
            computed="skipped",
            reference=f"needs 2 <= alpha < {hom}",
            tolerance=tolerance,
            abs_error=0.0,
            rel_error=0.0,
            passed=True,
            provenance="parameter range infeasible for this multiplicity",
            inputs={"alpha": alpha, "kappa": params.kappa[0]},
            runtime_s=time.perf_counter() - t0,
        )
    k = params.kappa[0]
    fn = _as_callable(f)
    if test_points is None:
        test_points = np.array([0.35, 0.8, 1.3, 2.1, 3.0])
    # Delta f for the Gaussian-type closed forms via the handle's second
    # derivative is delegated to the caller through f.laplacian when present
    lap = getattr(f, "laplacian", None)
    if lap is None:
        raise ValueError("f must expose a closed-form 'laplacian' attribute")
    table = riesz_potential_profile(f, alpha, params, r_max=60.0, n_core=700)
    # real-space Laplacian of the even profile: F'' + 2k F'/x
    d1 = table.derivative(test_points, 1)
    d2 = table.derivative(test_points, 2)
    lhs = d2 + 2.0 * k * d1 / test_points
    mid = riesz_potential(lap, alpha, points=test_points, params=params, y_max=40.0)
    rhs = -np.real(
        riesz_potential(fn, alpha - 2.0, points=test_points, params=params, y_max=40.0)
    )
    scale = float(np.max(np.abs(rhs)))
    err = max(
        float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(np.real(mid) - rhs)))
    )
    return OperatorReport.from_comparison(
        "laplacian_potential_identity",
        err,
        0.0,
        tolerance,
        scale=scale,
        provenance="commutation of the Laplacian with fractional integrals",
        inputs={"alpha": alpha, "kappa": k},
        runtime_s=time.perf_counter() - t0,
    )
