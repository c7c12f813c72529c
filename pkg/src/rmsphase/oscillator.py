"""Oscillator eigenbasis on the reduced Minkowski space.

Geometry of the spacelike coordinate patch (rho, theta, phi, beta), the
16-state catalogue with exact eigenvalues, and numerically normalized
eigenfunctions of the four-dimensional oscillator.

Internally every integral is dimensionless: lengths are measured in
sqrt(hbar/(M omega)), energies in hbar*omega.  ``PhysicalConstants``
converts at the boundary, which keeps the SI conventions in one place and
makes the computed pure numbers independent of the frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import quadrature as quad
from .errors import DomainError, NormalizationError, ParameterError
from .specfun import assoc_legendre, gen_laguerre

__all__ = [
    "PhysicalConstants",
    "QuantumNumbers",
    "RmsPoint",
    "StateRecord",
    "NodeCounts",
    "DEFAULT_PLANCK",
    "DEFAULT_MASS",
    "embed",
    "measure_weight",
    "eigenvalue",
    "eval_unnormalized",
    "normalization_constant",
    "eval_state",
    "state_table",
    "live_indices",
    "gram_matrix",
]

# default SI inputs: Planck-constant reading 6.626e-34 J s, electron mass
DEFAULT_PLANCK = 6.626e-34
DEFAULT_MASS = 9.109e-31


@dataclass(frozen=True)
class PhysicalConstants:
    """Scales of the problem: hbar [J s], mass [kg], omega [rad/s]."""

    hbar: float
    mass: float
    omega: float

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0 or self.omega <= 0:
            raise ParameterError("hbar, mass and omega must all be positive")

    @property
    def inverse_length2(self) -> float:
        """M omega / hbar, the 1/length^2 scale of the Gaussian factor."""
        return self.mass * self.omega / self.hbar

    @property
    def length2_scale(self) -> float:
        """hbar / (M omega), the length^2 scale."""
        return self.hbar / (self.mass * self.omega)

    @property
    def energy_scale(self) -> float:
        """hbar omega."""
        return self.hbar * self.omega

    @property
    def coupling_scale(self) -> float:
        """M omega^2 = (M omega/hbar) * hbar omega, units of energy/length^2.

        Perturbation couplings divided by this are pure numbers, and the
        loop phase per squared radius scales as 1/coupling_scale**2.
        """
        return self.mass * self.omega ** 2

    @classmethod
    def dimensionless(cls) -> "PhysicalConstants":
        return cls(1.0, 1.0, 1.0)

    @classmethod
    def from_frequency(cls, omega_mhz: float,
                       omega_convention: str = "angular",
                       hbar_convention: str = "hbar",
                       planck_value: float = DEFAULT_PLANCK,
                       mass: float = DEFAULT_MASS) -> "PhysicalConstants":
        """Build SI constants from a frequency quoted in MHz.

        omega_convention 'angular' reads the number as rad/s * 1e6,
        'cyclic' as cycles/s * 1e6 (multiplied by 2 pi).  hbar_convention
        'hbar' takes planck_value as hbar directly, 'h' divides by 2 pi.
        """
        if omega_convention not in ("angular", "cyclic"):
            raise ParameterError(f"unknown omega convention {omega_convention!r}")
        if hbar_convention not in ("hbar", "h"):
            raise ParameterError(f"unknown hbar convention {hbar_convention!r}")
        omega = omega_mhz * 1e6
        if omega_convention == "cyclic":
            omega *= 2.0 * math.pi
        hbar = planck_value
        if hbar_convention == "h":
            hbar /= 2.0 * math.pi
        return cls(hbar=hbar, mass=mass, omega=omega)


@dataclass(frozen=True)
class QuantumNumbers:
    """Index quadruple (n_a, l, n, m) of an oscillator eigenstate."""

    n_a: int
    l: int
    n: int
    m: int

    def __post_init__(self):
        for name in ("n_a", "l", "n", "m"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")

    @property
    def vanishing_polar(self) -> bool:
        """True when l < n, which kills the polar Legendre factor."""
        return self.l < self.n

    @property
    def vanishing_rapidity(self) -> bool:
        """True when m < n, which kills the rapidity Legendre factor."""
        return self.m < self.n

    @property
    def is_null(self) -> bool:
        """True when the wavefunction vanishes identically."""
        return self.vanishing_polar or self.vanishing_rapidity

    @property
    def reduced_energy(self) -> Fraction:
        """Eigenvalue in units of hbar*omega: l + 2 n_a + 3/2, exact."""
        return Fraction(self.l + 2 * self.n_a) + Fraction(3, 2)


@dataclass(frozen=True)
class RmsPoint:
    """Point (rho, theta, phi, beta) of the spacelike coordinate patch."""

    rho: float
    theta: float
    phi: float
    beta: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ParameterError(f"rho must be positive, got {self.rho}")
        if not 0.0 <= self.theta <= math.pi:
            raise ParameterError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class StateRecord:
    """Catalogue row: index, quantum numbers, exact eigenvalue, subspace.

    ``identically_zero`` marks the l < n states whose polar factor kills
    them; ``vanishing_rapidity`` marks the m < n states killed by the
    rapidity factor.  Both classes evaluate to zero everywhere and have no
    normalization; ``is_null`` is their union.
    """

    index: int
    qn: QuantumNumbers
    energy_factor: Fraction
    subspace: int
    identically_zero: bool
    vanishing_rapidity: bool

    @property
    def is_null(self) -> bool:
        return self.identically_zero or self.vanishing_rapidity


@dataclass(frozen=True)
class NodeCounts:
    """Quadrature nodes per axis."""

    radial: int = 128
    polar: int = 128
    azimuthal: int = 128
    rapidity: int = 128

    def __post_init__(self):
        for name in ("radial", "polar", "azimuthal", "rapidity"):
            if getattr(self, name) < 2:
                raise ParameterError(f"{name} node count must be >= 2")

    @classmethod
    def uniform(cls, n: int) -> "NodeCounts":
        return cls(n, n, n, n)

    def doubled(self) -> "NodeCounts":
        return NodeCounts(2 * self.radial, 2 * self.polar,
                          2 * self.azimuthal, 2 * self.rapidity)


@lru_cache(maxsize=1)
def state_table() -> tuple[StateRecord, ...]:
    """The 16 catalogue states in lexicographic (n_a, l, n, m) order.

    Null states stay in the table so the index arithmetic is stable.
    """
    records = []
    index = 0
    for n_a in (2, 3):
        for l in (2, 3):
            for n in (2, 3):
                for m in (2, 3):
                    index += 1
                    qn = QuantumNumbers(n_a, l, n, m)
                    records.append(StateRecord(
                        index=index,
                        qn=qn,
                        energy_factor=qn.reduced_energy,
                        subspace=(index - 1) // 4 + 1,
                        identically_zero=qn.vanishing_polar,
                        vanishing_rapidity=qn.vanishing_rapidity,
                    ))
    return tuple(records)


def get_state(index: int) -> StateRecord:
    table = state_table()
    if not 1 <= index <= len(table):
        raise ParameterError(f"state index must be in 1..{len(table)}, got {index}")
    return table[index - 1]


def live_indices() -> tuple[int, ...]:
    """Indices of the normalizable (not identically zero) states."""
    return tuple(r.index for r in state_table() if not r.is_null)


def embed(p: RmsPoint) -> np.ndarray:
    """Map (rho, theta, phi, beta) to the spacelike four-vector (t, x, y, z).

    Satisfies -t^2 + x^2 + y^2 + z^2 = rho^2 identically.
    """
    st, ct = math.sin(p.theta), math.cos(p.theta)
    ch, sh = math.cosh(p.beta), math.sinh(p.beta)
    return np.array([
        p.rho * st * sh,
        p.rho * st * math.cos(p.phi) * ch,
        p.rho * st * math.sin(p.phi) * ch,
        p.rho * ct,
    ])


def measure_weight(p: RmsPoint) -> float:
    """|Jacobian| of the embedding: rho^3 sin^2(theta) cosh(beta)."""
    return p.rho ** 3 * math.sin(p.theta) ** 2 * math.cosh(p.beta)


def eigenvalue(qn: QuantumNumbers, constants: PhysicalConstants) -> float:
    """Oscillator eigenvalue hbar omega (l + 2 n_a + 3/2)."""
    return constants.energy_scale * float(qn.reduced_energy)


# ---------------------------------------------------------------------------
# factor functions (dimensionless axis profiles of the product eigenfunction)

def polar_profile(qn: QuantumNumbers):
    """theta factor: (sin theta)^{-1/2} P_l^n(cos theta)."""
    l, n = qn.l, qn.n

    def f(theta):
        theta = np.asarray(theta, dtype=float)
        s = np.sin(theta)
        if np.any(s <= 0.0):
            raise DomainError("polar profile is singular on the polar axis")
        return assoc_legendre(l, n, np.cos(theta)) / np.sqrt(s)

    return f


def rapidity_profile(qn: QuantumNumbers):
    """beta factor: (1 - tanh^2 beta)^{1/4} P_m^{-n}(tanh beta)."""
    m, n = qn.m, qn.n

    def f(beta):
        beta = np.asarray(beta, dtype=float)
        u = np.tanh(beta)
        return ((1.0 - u) * (1.0 + u)) ** 0.25 * assoc_legendre(m, -n, u)

    return f


def radial_profile(qn: QuantumNumbers, scale: float = 1.0):
    """rho factor: rho^{-1/2} s^{l/2} e^{-s/2} L_{n_a}^{l+1/2}(s), s = scale rho^2."""
    n_a, l = qn.n_a, qn.l

    def f(rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0.0):
            raise DomainError("radial profile is singular at rho = 0")
        s = scale * rho * rho
        return (s ** (0.5 * l) * np.exp(-0.5 * s)
                * gen_laguerre(n_a, l + 0.5, s) / np.sqrt(rho))

    return f


def eval_unnormalized(qn: QuantumNumbers, p: RmsPoint,
                      constants: PhysicalConstants) -> complex:
    """Product-form eigenfunction without the normalization constant.

    Returns exactly 0 for null states.  theta in {0, pi} is a domain
    error: the (sin theta)^{-1/2} factor is singular there (quadrature
    nodes never hit the poles and the measure tames every integral).
    """
    if qn.is_null:
        return 0.0 + 0.0j
    if p.theta in (0.0, math.pi) or math.sin(p.theta) <= 0.0:
        raise DomainError("eigenfunctions are singular on the polar axis")
    lam = constants.inverse_length2
    azimuthal = complex(math.cos((qn.m + 0.5) * p.phi),
                        math.sin((qn.m + 0.5) * p.phi))
    value = (azimuthal
             * float(rapidity_profile(qn)(p.beta))
             * float(polar_profile(qn)(p.theta))
             * float(radial_profile(qn, lam)(p.rho)))
    return value


# ---------------------------------------------------------------------------
# dimensionless axis integrals

def _phase_parity_weight(n_sum: int) -> str:
    """Rule family for Legendre-order sum n_i + n_j: odd sums leave a
    sqrt(1-x^2) factor behind."""
    return "legendre" if n_sum % 2 == 0 else "chebyshev-u"


def _radial_alpha(l_sum: int) -> float:
    """Laguerre exponent matching the s-power parity of l_i + l_j."""
    return 0.5 if l_sum % 2 == 0 else 0.0


def polar_overlap(qi: QuantumNumbers, qj: QuantumNumbers, power: int,
                  n_polar: int) -> float:
    """integral over theta of f_i f_j sin^2(theta) * sin(theta)^{2 power}."""
    rule = quad.polar_rule(n_polar, _phase_parity_weight(qi.n + qj.n))
    fi, fj = polar_profile(qi), polar_profile(qj)

    def integrand(theta):
        s2 = np.sin(theta) ** 2
        return fi(theta) * fj(theta) * s2 ** (power + 1)

    return quad.integrate(rule, integrand).real


def rapidity_overlap(qi: QuantumNumbers, qj: QuantumNumbers, power: int,
                     n_rapidity: int) -> float:
    """integral over beta of f_i f_j cosh(beta) * cosh(beta)^{2 power}."""
    rule = quad.rapidity_rule(n_rapidity, _phase_parity_weight(qi.n + qj.n))
    fi, fj = rapidity_profile(qi), rapidity_profile(qj)

    def integrand(beta):
        ch = np.cosh(beta)
        return fi(beta) * fj(beta) * ch ** (2 * power + 1)

    return quad.integrate(rule, integrand).real


def radial_overlap(qi: QuantumNumbers, qj: QuantumNumbers, power: int,
                   n_radial: int) -> float:
    """integral over rho of f_i f_j rho^3 * rho^{2 power}, dimensionless."""
    rule = quad.radial_rule(n_radial, 1.0, _radial_alpha(qi.l + qj.l))
    fi, fj = radial_profile(qi), radial_profile(qj)

    def integrand(rho):
        return fi(rho) * fj(rho) * rho ** (3 + 2 * power)

    return quad.integrate(rule, integrand).real


def azimuthal_overlap(qi: QuantumNumbers, qj: QuantumNumbers,
                      n_azimuthal: int) -> complex:
    """integral over phi of exp(i (m_j - m_i) phi), by quadrature."""
    rule = quad.gauss_legendre(n_azimuthal, 0.0, 2.0 * math.pi, "azimuthal")
    delta = qj.m - qi.m
    return quad.integrate(rule, lambda phi: np.exp(1j * delta * phi))


@lru_cache(maxsize=None)
def _norm_factor(qn: QuantumNumbers, nodes: NodeCounts) -> float:
    """Dimensionless normalization from the product of four 1-d integrals."""
    if qn.is_null:
        raise NormalizationError(
            f"state {qn} vanishes identically; normalization undefined")
    j_phi = azimuthal_overlap(qn, qn, nodes.azimuthal).real
    j_theta = polar_overlap(qn, qn, 0, nodes.polar)
    j_beta = rapidity_overlap(qn, qn, 0, nodes.rapidity)
    j_rho = radial_overlap(qn, qn, 0, nodes.radial)
    norm_sq = j_phi * j_theta * j_beta * j_rho
    if norm_sq <= 0.0:
        raise NormalizationError(f"non-positive norm for {qn}")
    return 1.0 / math.sqrt(norm_sq)


def normalization_constant(qn: QuantumNumbers, constants: PhysicalConstants,
                           nodes: NodeCounts = NodeCounts()) -> float:
    """Positive N with ||N psi_unnorm||^2 = 1 against the invariant measure.

    The dimensionless part comes from quadrature (cached per state and
    resolution); the (M omega/hbar)^{3/4} length factor is attached
    analytically, so the physical normalization is exact in the constants.
    """
    return _norm_factor(qn, nodes) * constants.inverse_length2 ** 0.75


def eval_state(qn: QuantumNumbers, p: RmsPoint, constants: PhysicalConstants,
               nodes: NodeCounts = NodeCounts()) -> complex:
    """Normalized eigenfunction value; 0 for null states."""
    if qn.is_null:
        return 0.0 + 0.0j
    return normalization_constant(qn, constants, nodes) * eval_unnormalized(qn, p, constants)


def state_overlap(i: int, j: int, nodes: NodeCounts = NodeCounts()) -> complex:
    """<psi_i | psi_j> of normalized states via separable quadrature."""
    ri, rj = get_state(i), get_state(j)
    if ri.is_null or rj.is_null:
        return 0.0 + 0.0j
    qi, qj = ri.qn, rj.qn
    value = (azimuthal_overlap(qi, qj, nodes.azimuthal)
             * polar_overlap(qi, qj, 0, nodes.polar)
             * rapidity_overlap(qi, qj, 0, nodes.rapidity)
             * radial_overlap(qi, qj, 0, nodes.radial))
    return _norm_factor(qi, nodes) * _norm_factor(qj, nodes) * value


@lru_cache(maxsize=8)
def gram_matrix(nodes: NodeCounts = NodeCounts()) -> tuple[tuple[int, ...], np.ndarray]:
    """Gram matrix of the normalizable states (dimensionless, so it is
    independent of the physical constants).  Returns (indices, matrix);
    the cached matrix is read-only."""
    idx = live_indices()
    g = np.empty((len(idx), len(idx)), dtype=complex)
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            if b < a:
                g[a, b] = np.conj(g[b, a])
            else:
                g[a, b] = state_overlap(i, j, nodes)
    g.setflags(write=False)
    return idx, g
