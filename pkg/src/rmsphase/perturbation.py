"""Fractional-azimuth couplings and first-order correction coefficients.

The two perturbing operators share the factor rho^2 sin^2(theta)
cosh^2(beta) and differ only in the azimuthal profile, cos^2(2 phi/3) for
the cosine channel and sin^2(2 phi/3) for the sine channel.  The
non-integer angular coefficient makes the phi integrals complex for
m_bra != m_ket, which is the whole mechanism of interest.

Matrix elements are assembled as products of four 1-d integrals and kept
dimensionless (the operator's hbar/(M omega) length^2 factor and the
hbar omega energy denominators are attached symbolically), so coefficient
tables are computed once per resolution and reused for any constants.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import oscillator as osc
from .errors import CorrectionError, ParameterError

__all__ = [
    "Channel",
    "PerturbationParams",
    "CorrectionCoefficients",
    "phi_integral",
    "matrix_element",
    "shared_factor_element",
    "correction_coefficients",
    "first_order_state",
    "degeneracy_report",
]

_SQRT3 = math.sqrt(3.0)


class Channel(Enum):
    """Azimuthal profile of a coupling operator."""

    COSINE = "cos^2(2*phi/3)"
    SINE = "sin^2(2*phi/3)"


@dataclass(frozen=True)
class PerturbationParams:
    """Couplings of the four perturbing terms, energy/length^2 units.

    Only eps1 (cosine channel) and eps2 (sine channel) participate in the
    computations here; eps0 and eps3 are accepted and must stay zero.
    """

    eps1: float = 0.0
    eps2: float = 0.0
    eps0: float = 0.0
    eps3: float = 0.0

    def __post_init__(self):
        if self.eps0 != 0.0 or self.eps3 != 0.0:
            raise ParameterError("eps0 and eps3 are fixed to zero in this model")


def phi_integral(m_bra: int, m_ket: int, channel: Channel) -> complex:
    """Closed form of the azimuthal matrix-element integral.

    integral over [0, 2 pi) of e^{-i(m_bra+1/2) phi} g(phi) e^{i(m_ket+1/2) phi}
    with g the channel profile.  Writing delta = m_ket - m_bra (an integer)
    and using cos^2(2 phi/3) = (1 + cos(4 phi/3))/2,

        Phi_cos(delta) = pi delta_{0} + (27 i delta - 12 sqrt3)/(36 delta^2 - 64)
        Phi_sin(delta) = pi delta_{0} - (27 i delta - 12 sqrt3)/(36 delta^2 - 64)

    so the two channels always sum to 2 pi delta_{0}.
    """
    if m_bra != int(m_bra) or m_ket != int(m_ket):
        raise ParameterError("azimuthal indices must be integers")
    delta = int(m_ket) - int(m_bra)
    oscillatory = (27j * delta - 12.0 * _SQRT3) / (36 * delta * delta - 64)
    base = math.pi if delta == 0 else 0.0
    if channel is Channel.COSINE:
        return base + oscillatory
    if channel is Channel.SINE:
        return base - oscillatory
    raise ParameterError(f"unknown channel {channel!r}")


@lru_cache(maxsize=None)
def _element_core(i: int, j: int, channel: Channel,
                  nodes: osc.NodeCounts) -> complex:
    """Dimensionless <psi_i | V_channel | psi_j> (rho^2 in units hbar/(M omega))."""
    ri, rj = osc.get_state(i), osc.get_state(j)
    if ri.is_null or rj.is_null:
        return 0.0 + 0.0j
    qi, qj = ri.qn, rj.qn
    value = (phi_integral(qi.m, qj.m, channel)
             * osc.polar_overlap(qi, qj, 1, nodes.polar)
             * osc.rapidity_overlap(qi, qj, 1, nodes.rapidity)
             * osc.radial_overlap(qi, qj, 1, nodes.radial))
    return osc._norm_factor(qi, nodes) * osc._norm_factor(qj, nodes) * value


def matrix_element(i: int, j: int, channel: Channel,
                   constants: osc.PhysicalConstants | None = None,
                   nodes: osc.NodeCounts = osc.NodeCounts()) -> complex:
    """<psi_i | V | psi_j> per unit coupling; zero if either state is null.

    Dimensionless when ``constants`` is None, otherwise multiplied by the
    length^2 scale hbar/(M omega) so the value is in SI m^2.
    """
    value = _element_core(i, j, channel, nodes)
    if constants is not None:
        value *= constants.length2_scale
    return value


@lru_cache(maxsize=None)
def shared_factor_element(i: int, j: int,
                          nodes: osc.NodeCounts = osc.NodeCounts()) -> complex:
    """Matrix element of the phi-independent factor rho^2 sin^2 theta cosh^2 beta.

    Computed with the azimuthal integral done by quadrature instead of the
    closed form; the two channels must sum to exactly this (cos^2 + sin^2 = 1).
    """
    ri, rj = osc.get_state(i), osc.get_state(j)
    if ri.is_null or rj.is_null:
        return 0.0 + 0.0j
    qi, qj = ri.qn, rj.qn
    value = (osc.azimuthal_overlap(qi, qj, nodes.azimuthal)
             * osc.polar_overlap(qi, qj, 1, nodes.polar)
             * osc.rapidity_overlap(qi, qj, 1, nodes.rapidity)
             * osc.radial_overlap(qi, qj, 1, nodes.radial))
    return osc._norm_factor(qi, nodes) * osc._norm_factor(qj, nodes) * value


@dataclass(frozen=True)
class CorrectionCoefficients:
    """First-order expansion coefficients of a perturbed state.

    ``a`` holds the cosine-channel coefficients, ``b`` the sine-channel
    ones, both keyed by catalogue index and restricted to normalizable
    states outside the degenerate subspace of ``state_index``.  Values are
    in the coupling units of ``constants`` (pure numbers for dimensionless
    constants; SI values carry 1/(M omega^2)).
    """

    state_index: int
    a: dict[int, complex] = field(compare=False)
    b: dict[int, complex] = field(compare=False)
    constants: osc.PhysicalConstants = osc.PhysicalConstants.dimensionless()

    def sum_abs2_a(self) -> float:
        return sum(abs(v) ** 2 for v in self.a.values())

    def sum_abs2_b(self) -> float:
        return sum(abs(v) ** 2 for v in self.b.values())

    def sum_conj_a_b(self) -> complex:
        """sum over i of conj(a_i) b_i, the cross inner product <psi'|psi''>."""
        return sum(np.conj(self.a[i]) * self.b[i] for i in self.a)

    def max_magnitude(self) -> float:
        mags = [abs(v) for v in self.a.values()] + [abs(v) for v in self.b.values()]
        return max(mags) if mags else 0.0

    def with_basis_phases(self, phases: dict[int, float],
                          own_phase: float = 0.0) -> "CorrectionCoefficients":
        """Coefficients after redefining psi_k -> e^{i chi_k} psi_k.

        a_i picks up e^{-i chi_i} e^{+i chi_j}; the cross sums that feed
        the loop phase are invariant under this map.
        """
        shift = cmath.exp(1j * own_phase)
        a = {i: v * cmath.exp(-1j * phases.get(i, 0.0)) * shift
             for i, v in self.a.items()}
        b = {i: v * cmath.exp(-1j * phases.get(i, 0.0)) * shift
             for i, v in self.b.items()}
        return CorrectionCoefficients(self.state_index, a, b, self.constants)


def correction_coefficients(j: int,
                            constants: osc.PhysicalConstants = osc.PhysicalConstants.dimensionless(),
                            nodes: osc.NodeCounts = osc.NodeCounts()) -> CorrectionCoefficients:
    """First-order coefficients a_i = <psi_i|V_cos|psi_j> / (K_j - K_i).

    Sums run over normalizable catalogue states outside the degenerate
    subspace of j (the energy denominators are exact multiples of
    hbar omega); entries for null intermediate states are absent, which is
    the same as zero.
    """
    rj = osc.get_state(j)
    if rj.is_null:
        raise CorrectionError(
            f"state {j} vanishes identically; corrections undefined")
    scale = 1.0 / constants.coupling_scale
    a: dict[int, complex] = {}
    b: dict[int, complex] = {}
    for ri in osc.state_table():
        if ri.is_null or ri.energy_factor == rj.energy_factor:
            continue
        denom = float(rj.energy_factor - ri.energy_factor)
        a[ri.index] = _element_core(ri.index, j, Channel.COSINE, nodes) / denom * scale
        b[ri.index] = _element_core(ri.index, j, Channel.SINE, nodes) / denom * scale
    return CorrectionCoefficients(j, a, b, constants)


@dataclass(frozen=True)
class FirstOrderState:
    """Evaluable first-order wavefunction psi_j + eps1 psi' + eps2 psi''."""

    coefficients: CorrectionCoefficients
    eps1: float
    eps2: float
    nodes: osc.NodeCounts = osc.NodeCounts()

    def __call__(self, p: osc.RmsPoint) -> complex:
        c = self.coefficients.constants
        value = osc.eval_state(osc.get_state(self.coefficients.state_index).qn,
                               p, c, self.nodes)
        for i, ai in self.coefficients.a.items():
            bi = self.coefficients.b[i]
            weight = self.eps1 * ai + self.eps2 * bi
            if weight != 0.0:
                value += weight * osc.eval_state(osc.get_state(i).qn, p, c, self.nodes)
        return value

    def norm_squared_expansion(self) -> float:
        """1 + eps1^2 sum|a|^2 + eps2^2 sum|b|^2 + 2 eps1 eps2 Re sum a* b."""
        co = self.coefficients
        return (1.0 + self.eps1 ** 2 * co.sum_abs2_a()
                + self.eps2 ** 2 * co.sum_abs2_b()
                + 2.0 * self.eps1 * self.eps2 * co.sum_conj_a_b().real)


def first_order_state(j: int, eps1: float, eps2: float,
                      constants: osc.PhysicalConstants = osc.PhysicalConstants.dimensionless(),
                      nodes: osc.NodeCounts = osc.NodeCounts()) -> FirstOrderState:
    """Evaluable perturbed wavefunction for couplings (eps1, eps2)."""
    return FirstOrderState(correction_coefficients(j, constants, nodes), eps1, eps2, nodes)


def degeneracy_report(subspace: int, channel: Channel,
                      nodes: osc.NodeCounts = osc.NodeCounts()) -> np.ndarray:
    """4x4 coupling block within one degenerate subspace (diagnostic only).

    Off-diagonal magnitudes quantify how far the fixed catalogue basis is
    from diagonalizing the coupling inside the subspace; rows and columns
    of null states are zero.
    """
    if not 1 <= subspace <= 4:
        raise ParameterError(f"subspace must be 1..4, got {subspace}")
    members = [r.index for r in osc.state_table() if r.subspace == subspace]
    block = np.zeros((4, 4), dtype=complex)
    for a, i in enumerate(members):
        for b, j in enumerate(members):
            block[a, b] = _element_core(i, j, channel, nodes)
    return block
