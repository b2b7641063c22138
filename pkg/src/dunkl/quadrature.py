"""Numerical integration: Gauss rules, graded singular rules, and grids.

Three layers:

* elementary Gauss rules (Legendre, Jacobi) on [-1, 1] and affine images;
* composite rules with geometric grading toward power singularities r^beta;
* the symmetric line grids used to sample functions against h^2 dx, whose
  companion rule absorbs the weight |x|^(2 kappa) through Jacobi nodes so
  that no node ever sits on the non-smooth point x = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as sc

from .specfun import MultiplicityParams

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "gauss_jacobi",
    "radial_rule",
    "integrate",
    "LineGrid",
    "RadialGrid",
    "make_line_grid",
    "make_radial_grid",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for one weighted 1-D integral.

    ``weight_kind`` records what the weights already absorb: 'unit',
    'jacobi(a,b)', 'radial_power(beta)' or 'h2' for line-grid companions.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple
    weight_kind: str = "unit"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be matching 1-D arrays")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self):
        return self.nodes.size

    def integrate(self, values):
        values = np.asarray(values)
        if values.shape[-1] != self.nodes.size:
            raise ValueError("value vector length does not match the rule")
        return values @ self.weights

    def integrate_fn(self, fn):
        return self.integrate(np.asarray(fn(self.nodes)))


def integrate(rule, values):
    """Weighted dot product of sampled values against a rule."""
    return rule.integrate(values)


@lru_cache(maxsize=256)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n):
    """n-point Gauss-Legendre rule on [-1, 1], exact to degree 2n-1."""
    if n < 1:
        raise ValueError("rule size must be at least 1")
    x, w = _leggauss(int(n))
    return QuadratureRule(x.copy(), w.copy(), (-1.0, 1.0), "unit")


@lru_cache(maxsize=512)
def _jacgauss(n, a, b):
    x, w = sc.roots_jacobi(n, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(n, a, b):
    """n-point rule for int f(t) (1-t)^a (1+t)^b dt, via Golub-Welsch nodes."""
    if n < 1:
        raise ValueError("rule size must be at least 1")
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    if a == 0 and b == 0:
        return gauss_legendre(n)
    x, w = _jacgauss(int(n), float(a), float(b))
    return QuadratureRule(x.copy(), w.copy(), (-1.0, 1.0), f"jacobi({a},{b})")


def map_rule(rule, lo, hi):
    """Affine image of a unit-weight rule on [lo, hi]."""
    if hi <= lo:
        raise ValueError("empty interval")
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return QuadratureRule(
        mid + half * rule.nodes, half * rule.weights, (lo, hi), rule.weight_kind
    )


def _concat_rules(rules, domain, weight_kind):
    nodes = np.concatenate([r.nodes for r in rules])
    weights = np.concatenate([r.weights for r in rules])
    order = np.argsort(nodes)
    return QuadratureRule(nodes[order], weights[order], domain, weight_kind)


def panel_rule(edges, n=32):
    """Composite Gauss-Legendre rule over consecutive panels."""
    edges = np.asarray(edges, dtype=float)
    base = gauss_legendre(n)
    rules = [map_rule(base, edges[i], edges[i + 1]) for i in range(edges.size - 1)]
    return _concat_rules(rules, (float(edges[0]), float(edges[-1])), "unit")


def radial_rule(cutoff, beta, n_panel=64, levels=20, grid=None):
    """Graded rule for int_0^R r^beta g(r) dr with g smooth, beta > -1.

    The panel touching zero is an exact Jacobi rule in the variable r/r0
    (weight r^beta absorbed); the remaining geometric panels treat r^beta as
    a smooth factor.  Weights returned include the r^beta factor, so the rule
    integrates plain samples of g.
    """
    if grid is not None:
        cutoff = grid.cutoff
    R = float(cutoff)
    if beta <= -1:
        raise ValueError("singular exponent must exceed -1 for integrability")
    if R <= 0:
        raise ValueError("cutoff must be positive")
    edges = R * 2.0 ** (-np.arange(levels, -1, -1, dtype=float))
    rules = []
    # core [0, edges[0]]: map Jacobi weight (1+t)^beta from [-1,1]
    core = gauss_jacobi(n_panel, 0.0, beta)
    r0 = edges[0]
    nodes = 0.5 * r0 * (1.0 + core.nodes)
    weights = core.weights * (0.5 * r0) ** (beta + 1.0)
    rules.append(QuadratureRule(nodes, weights, (0.0, r0), "core"))
    base = gauss_legendre(n_panel)
    for lo, hi in zip(edges[:-1], edges[1:]):
        sub = map_rule(base, lo, hi)
        rules.append(
            QuadratureRule(sub.nodes, sub.weights * sub.nodes**beta, (lo, hi), "p")
        )
    return _concat_rules(rules, (0.0, R), f"radial_power({beta})")


def half_line_rule(
    beta, inner, outer, n_panel=64, levels=18, tail_stretch=2.0, max_width=None
):
    """Rule for int_0^outer r^beta g(r) dr with grading at 0 and panels to outer.

    ``inner`` sets the scale below which geometric grading applies; above it
    the panels grow by ``tail_stretch``, capped at ``max_width`` when the
    integrand carries structure of bounded width far from the origin.
    """
    inner = min(inner, outer / 2.0)
    graded = radial_rule(inner, beta, n_panel=n_panel, levels=levels)
    edges = [inner]
    while edges[-1] < outer:
        step = max(inner, edges[-1] * (tail_stretch - 1.0))
        if max_width is not None:
            step = min(step, max_width)
        edges.append(min(outer, edges[-1] + step))
    base = gauss_legendre(n_panel)
    rules = [QuadratureRule(graded.nodes, graded.weights, (0.0, inner), "g")]
    for lo, hi in zip(edges[:-1], edges[1:]):
        sub = map_rule(base, lo, hi)
        rules.append(
            QuadratureRule(sub.nodes, sub.weights * sub.nodes**beta, (lo, hi), "p")
        )
    return _concat_rules(rules, (0.0, float(outer)), f"radial_power({beta})")


def windowed_halfline_rule(beta, center, support, outer, n_panel=32, levels=16, max_width=3.0):
    """Half-line rule restricted to where translated compact mass can live.

    For an integrand whose translated factor vanishes outside
    |y - |center|| <= support, integrates [max(0, |center|-support),
    min(|center|+support, outer)] with width-capped panels; the origin-
    touching case keeps the r^beta grading.
    """
    center = abs(float(center))
    lo = max(0.0, center - support)
    hi = min(center + support, outer)
    if hi <= lo:
        hi = min(outer, lo + max_width)
    if lo <= 1.0:
        return half_line_rule(
            beta, 1.0, hi, n_panel=n_panel, levels=levels, max_width=max_width
        )
    count = max(1, int(math.ceil((hi - lo) / max_width)))
    edges = np.linspace(lo, hi, count + 1)
    base = gauss_legendre(n_panel)
    rules = []
    for a, b in zip(edges[:-1], edges[1:]):
        sub = map_rule(base, a, b)
        rules.append(
            QuadratureRule(sub.nodes, sub.weights * sub.nodes**beta, (a, b), "p")
        )
    return _concat_rules(rules, (lo, hi), f"radial_power({beta})")


@dataclass(frozen=True)
class LineGrid:
    """Symmetric sampling grid on [-X, X] whose rule integrates f h^2 dx.

    Nodes come in +/- pairs and exclude 0; ``rule`` weights absorb the
    measure |x|^(2 kappa) dx.  ``mirror`` indexes x -> -x.
    """

    params: MultiplicityParams
    nodes: np.ndarray
    rule: QuadratureRule
    cutoff: float

    @property
    def size(self):
        return self.nodes.size

    @property
    def mirror(self):
        return np.arange(self.size - 1, -1, -1)

    def integrate_h2(self, values):
        """int g(x) h^2(x) dx for samples g on the grid."""
        return self.rule.integrate(values)

    def norm(self, values, p=2.0):
        v = np.abs(np.asarray(values))
        if math.isinf(p):
            return float(v.max())
        return float(self.rule.integrate(v**p) ** (1.0 / p))


def make_line_grid(params, n=256, cutoff=12.0):
    """Build a LineGrid with n total nodes (n/2 per half line).

    The positive half uses Gauss-Jacobi nodes for the weight x^(2 kappa) on
    [0, X], so the companion rule is exact for polynomials times the weight.
    """
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    if params.dim != 1:
        raise ValueError("LineGrid is one-dimensional; use tensor grids for d > 1")
    if n < 2 or n % 2:
        raise ValueError("grid size must be a positive even integer")
    half = n // 2
    k = params.kappa[0]
    X = float(cutoff)
    base = gauss_jacobi(half, 0.0, 2.0 * k)
    # map [-1,1] -> [0,X]; weight (1+t)^(2k) dt -> (2/X)^(2k+1)-scaled x^(2k) dx
    x_pos = 0.5 * X * (1.0 + base.nodes)
    w_pos = base.weights * (0.5 * X) ** (2.0 * k + 1.0)
    nodes = np.concatenate((-x_pos[::-1], x_pos))
    weights = np.concatenate((w_pos[::-1], w_pos))
    rule = QuadratureRule(nodes, weights, (-X, X), "h2")
    return LineGrid(params, nodes, rule, X)


@dataclass(frozen=True)
class RadialGrid:
    """Nonnegative radii with a companion rule for int_0^R g(r) r^(2g+d-1) dr."""

    params: MultiplicityParams
    nodes: np.ndarray
    rule: QuadratureRule
    cutoff: float

    @property
    def size(self):
        return self.nodes.size


def make_radial_grid(params, cutoff=12.0, n_panel=64, levels=20):
    if not isinstance(params, MultiplicityParams):
        params = MultiplicityParams(params)
    beta = params.homogeneity - 1.0
    rule = radial_rule(cutoff, beta, n_panel=n_panel, levels=levels)
    return RadialGrid(params, rule.nodes, rule, float(cutoff))
