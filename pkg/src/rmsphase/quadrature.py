"""Gaussian quadrature rules for the four separable axes.

Every rule is returned in the physical coordinate of its axis and its
weights integrate plain ``dx`` there, so callers write
``integrate(rule, f)`` with the full integrand (including any decay or
measure factors) and never see the underlying change of variables:

* ``gauss_legendre`` -- finite intervals (azimuth, generic checks).
* ``polar_rule``     -- theta in [0, pi], mapped from c = cos(theta).
* ``rapidity_rule``  -- beta on the real line, mapped from u = tanh(beta).
* ``radial_rule``    -- rho on [0, inf), mapped from s = scale * rho^2 with
  generalized Gauss-Laguerre nodes.

The polar/rapidity rules take a ``weight`` switch ('legendre' or
'chebyshev-u') and the radial rule an exponent ``alpha`` (0 or 1/2);
choosing them to match the half-integer power structure of the integrand
makes every integral in this package polynomial-exact.  A plain
Gauss-Legendre rule on a sqrt(1-x^2)-type integrand converges only
algebraically (~4e-7 at 128 nodes), which is why the switch exists.

Rules are immutable after construction, so the constructors are memoized
and the same rule object may be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import EvaluationError, ParameterError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "chebyshev_u",
    "polar_rule",
    "rapidity_rule",
    "radial_rule",
    "integrate",
    "doubling_gap",
]

# Laguerre nodes beyond this point would overflow the plain-form weight
# w*exp(s); everything integrated here decays like exp(-s), so the dropped
# tail contributes < exp(-650).
_RADIAL_NODE_CUTOFF = 650.0


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable nodes/weights pair tagged with the axis it serves."""

    nodes: np.ndarray
    weights: np.ndarray
    domain: str = "generic-finite"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=float))
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        if nodes.ndim != 1 or weights.ndim != 1 or nodes.size != weights.size:
            raise ParameterError("nodes and weights must be matching 1-d arrays")
        if nodes.size < 2:
            raise ParameterError("a quadrature rule needs at least 2 nodes")
        if np.any(np.diff(nodes) <= 0.0):
            raise ParameterError("nodes must be strictly increasing")
        if np.any(weights <= 0.0) or not np.all(np.isfinite(weights)):
            raise ParameterError("weights must be positive and finite")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def count(self) -> int:
        return self.nodes.size


@lru_cache(maxsize=128)
def gauss_legendre(n: int, a: float, b: float, domain: str = "generic-finite") -> QuadratureRule:
    """Gauss-Legendre rule on [a, b], exact for polynomials of degree <= 2n-1."""
    if n < 2:
        raise ParameterError(f"need at least 2 nodes, got {n}")
    if not a < b:
        raise ParameterError(f"empty interval [{a}, {b}]")
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (x + 1.0), half * w, domain)


@lru_cache(maxsize=128)
def chebyshev_u(n: int, domain: str = "generic-finite") -> QuadratureRule:
    """Chebyshev rule of the second kind on (-1, 1) in plain form.

    Closed-form nodes cos(k pi/(n+1)); the sqrt(1-x^2) weight is folded
    into the returned weights, so the rule integrates ``dx`` and is exact
    for integrands of the form sqrt(1-x^2) * polynomial(deg <= 2n-1).
    """
    if n < 2:
        raise ParameterError(f"need at least 2 nodes, got {n}")
    k = np.arange(n, 0, -1, dtype=float)
    theta = k * np.pi / (n + 1)
    return QuadratureRule(np.cos(theta), (np.pi / (n + 1)) * np.sin(theta), domain)


def _unit_rule(n: int, weight: str) -> QuadratureRule:
    if weight == "legendre":
        return gauss_legendre(n, -1.0, 1.0)
    if weight == "chebyshev-u":
        return chebyshev_u(n)
    raise ParameterError(f"unknown weight family {weight!r}")


@lru_cache(maxsize=128)
def polar_rule(n: int, weight: str = "legendre") -> QuadratureRule:
    """Rule for integrals over theta in [0, pi].

    Built in c = cos(theta); the Jacobian d(theta) = -dc/sin(theta) is
    folded into the weights.  Use weight='chebyshev-u' when the integrand
    carries an odd net power of sin(theta) after the substitution.
    """
    base = _unit_rule(n, weight)
    theta = np.arccos(base.nodes)[::-1]
    sin_theta = np.sqrt((1.0 - base.nodes) * (1.0 + base.nodes))[::-1]
    return QuadratureRule(theta, base.weights[::-1] / sin_theta, "polar",
                          meta={"weight": weight})


@lru_cache(maxsize=128)
def rapidity_rule(n: int, weight: str = "legendre") -> QuadratureRule:
    """Rule for integrals over the rapidity beta on (-inf, inf).

    Built in u = tanh(beta) with d(beta) = du/(1-u^2); integrands must
    decay at least like sech^2(beta), which every one used here does.
    """
    base = _unit_rule(n, weight)
    u = base.nodes
    return QuadratureRule(np.arctanh(u), base.weights / ((1.0 - u) * (1.0 + u)),
                          "rapidity", meta={"weight": weight})


@lru_cache(maxsize=128)
def radial_rule(n: int, scale: float = 1.0, alpha: float = 0.5) -> QuadratureRule:
    """Rule for integrals over rho on [0, inf).

    Built from generalized Gauss-Laguerre nodes in s = scale * rho^2 with
    weight s^alpha e^{-s}; the weight and the Jacobian are folded back so
    the rule integrates plain d(rho).  Exact for integrands of the form
    s^{alpha+k} e^{-s} * polynomial(s) * rho-Jacobian with integer k >= 0;
    pick alpha in {0, 1/2} to match the integrand's power parity.

    Far-tail nodes (s > 650, or with underflowed raw weights) are dropped:
    their plain-form weights would overflow while the integrand class
    contributes < e^{-650} there.
    """
    if n < 2:
        raise ParameterError(f"need at least 2 nodes, got {n}")
    if not scale > 0.0:
        raise ParameterError(f"scale must be positive, got {scale}")
    if alpha <= -1.0:
        raise ParameterError(f"alpha must exceed -1, got {alpha}")
    s, w = roots_genlaguerre(int(n), alpha)
    keep = (s <= _RADIAL_NODE_CUTOFF) & (w > 0.0)
    if keep.sum() < 2:
        raise ParameterError("radial rule collapsed; node count too small")
    s, w = s[keep], w[keep]
    rho = np.sqrt(s / scale)
    # plain-form weight: w * e^{s} * s^{-alpha} * ds/drho^{-1} computed in
    # log space to survive large n
    log_w = np.log(w) + s - alpha * np.log(s) - np.log(2.0 * scale * rho)
    return QuadratureRule(rho, np.exp(log_w), "radial",
                          meta={"scale": scale, "alpha": alpha})


def integrate(rule: QuadratureRule, f) -> complex:
    """Apply the rule: sum_k w_k f(x_k).

    ``f`` may be vectorized over an ndarray of nodes or accept scalars.
    Non-finite integrand values raise EvaluationError naming the node.
    """
    try:
        values = np.asarray(f(rule.nodes))
        if values.shape != rule.nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.asarray([f(x) for x in rule.nodes])
    if values.dtype.kind not in "fc":
        values = values.astype(complex)
    bad = ~np.isfinite(values)
    if values.dtype.kind == "c":
        bad = ~(np.isfinite(values.real) & np.isfinite(values.imag))
    if np.any(bad):
        k = int(np.argmax(bad))
        raise EvaluationError(
            f"integrand not finite at node {k} (x={rule.nodes[k]!r}) on "
            f"{rule.domain} axis", node_index=k, node_value=float(rule.nodes[k]))
    total = np.dot(rule.weights, values)
    return complex(total)


def doubling_gap(make_rule, f) -> float:
    """Relative gap between a rule and its node-doubled refinement.

    ``make_rule(n_scale)`` must return the rule at 1x and 2x resolution.
    The residual is normalized by max(|I|, L1 mass) so integrals that
    vanish by symmetry are measured against their own magnitude instead
    of blowing up.
    """
    rule1 = make_rule(1)
    rule2 = make_rule(2)
    i1 = integrate(rule1, f)
    i2 = integrate(rule2, f)
    values = np.asarray([f(x) for x in rule2.nodes], dtype=complex)
    l1_mass = float(np.dot(rule2.weights, np.abs(values)))
    denom = max(abs(i1), abs(i2), l1_mass, 1e-300)
    return abs(i2 - i1) / denom
