"""Scalar relaxation of the second kind for a spin-1/2 coupled to a
quadrupolar neighbour.

A spin-1/2 nucleus A scalar-coupled (J, in Hz) to a quadrupolar nucleus B of
spin I whose own state fluctuates with correlation time tau relaxes at

    R = (8 pi^2 J^2 / 3) I (I + 1) tau / (1 + (omega_B - omega_A)^2 tau^2)

in 1/s, where the omegas are angular Larmor frequencies.  The Lorentzian
detuning factor is what makes mismatched gyromagnetic ratios protective: a
large Larmor gap suppresses the rate quadratically in (delta omega * tau).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import GAMMA_BAR_MHZ_PER_T, SPIN_BY_NUCLEUS, TWO_PI


def larmor(gamma_bar_mhz_per_t: float, b0_tesla: float) -> float:
    """Angular Larmor frequency omega = 2 pi * gamma_bar * 1e6 * B0 in rad/s."""
    return TWO_PI * gamma_bar_mhz_per_t * 1e6 * b0_tesla


@dataclass(frozen=True)
class ScalarRelaxationInput:
    """Parameters of one spin-1/2 / quadrupolar pair.

    j_hz is the scalar coupling, i_quad the neighbour spin (1, 3/2, ...),
    tau_s its correlation time, and the two omegas are angular Larmor
    frequencies of the neighbour (B) and the spin-1/2 (A).
    """

    j_hz: float
    i_quad: float
    tau_s: float
    omega_b_rad_s: float
    omega_a_rad_s: float

    def __post_init__(self) -> None:
        if self.j_hz <= 0 or not np.isfinite(self.j_hz):
            raise ValueError(f"j_hz must be positive, got {self.j_hz!r}")
        if self.tau_s <= 0 or not np.isfinite(self.tau_s):
            raise ValueError(f"tau_s must be positive, got {self.tau_s!r}")
        twice = round(2 * self.i_quad)
        if abs(2 * self.i_quad - twice) > 1e-12 or twice < 2:
            raise ValueError(
                f"i_quad must be a half-integer >= 1, got {self.i_quad!r}"
            )


@dataclass(frozen=True)
class ScalarRelaxationResult:
    rate_per_s: float
    lifetime_s: float
    delta_omega_rad_s: float


def scalar_relaxation(params: ScalarRelaxationInput) -> ScalarRelaxationResult:
    """Closed-form relaxation rate and lifetime 1/R for one pair."""
    delta = params.omega_b_rad_s - params.omega_a_rad_s
    lorentz = params.tau_s / (1.0 + delta**2 * params.tau_s**2)
    rate = (8.0 * np.pi**2 * params.j_hz**2 / 3.0) * params.i_quad * (
        params.i_quad + 1.0
    ) * lorentz
    return ScalarRelaxationResult(
        rate_per_s=float(rate),
        lifetime_s=float(1.0 / rate),
        delta_omega_rad_s=float(delta),
    )


@dataclass(frozen=True)
class IsotopeCase:
    """One row of the lithium comparison table."""

    isotope: str
    spin: float
    j_hz: float
    tau_s: float
    omega_li_rad_s: float
    omega_p_rad_s: float
    delta_omega_rad_s: float
    rate_per_s: float
    lifetime_s: float


def _case(nucleus: str, j_hz: float, tau_s: float, b0_tesla: float) -> IsotopeCase:
    omega_li = larmor(GAMMA_BAR_MHZ_PER_T[nucleus], b0_tesla)
    omega_p = larmor(GAMMA_BAR_MHZ_PER_T["31P"], b0_tesla)
    result = scalar_relaxation(
        ScalarRelaxationInput(
            j_hz=j_hz,
            i_quad=SPIN_BY_NUCLEUS[nucleus],
            tau_s=tau_s,
            omega_b_rad_s=omega_li,
            omega_a_rad_s=omega_p,
        )
    )
    return IsotopeCase(
        isotope=nucleus,
        spin=SPIN_BY_NUCLEUS[nucleus],
        j_hz=j_hz,
        tau_s=tau_s,
        omega_li_rad_s=omega_li,
        omega_p_rad_s=omega_p,
        delta_omega_rad_s=result.delta_omega_rad_s,
        rate_per_s=result.rate_per_s,
        lifetime_s=result.lifetime_s,
    )


def isotope_comparison(
    b0_tesla: float = 50e-6,
    j7_hz: float = 1.0,
    tau6_s: float = 300.0,
    tau7_s: float = 10.0,
) -> tuple[IsotopeCase, IsotopeCase, float]:
    """Phosphorus lifetime limits for 6Li versus 7Li neighbours.

    The 6Li coupling is the 7Li one divided by the gyromagnetic ratio of the
    isotopes (scalar couplings scale with gamma).  Returns the 6Li case, the
    7Li case and the lifetime ratio lifetime(6Li) / lifetime(7Li).
    """
    ratio = GAMMA_BAR_MHZ_PER_T["7Li"] / GAMMA_BAR_MHZ_PER_T["6Li"]
    case6 = _case("6Li", j7_hz / ratio, tau6_s, b0_tesla)
    case7 = _case("7Li", j7_hz, tau7_s, b0_tesla)
    return case6, case7, case6.lifetime_s / case7.lifetime_s
