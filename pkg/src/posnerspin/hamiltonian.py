"""Coherent spin Hamiltonian: Zeeman term plus isotropic J coupling.

The Hamiltonian built here is

    H = 2 pi B0 sum_k (gamma_bar_k * 1e6) Sz_k
      + sum_{i<k} 2 pi J_ik (Sx_i Sx_k + Sy_i Sy_k + Sz_i Sz_k)

in angular units (rad/s).  ``gamma_bar`` is gamma / 2 pi in MHz per tesla, B0
is in tesla and J is in hertz; the single factor of 2 pi * 1e6 (respectively
2 pi) applied here is the only place unit conversion happens.

Site layout of the six-phosphorus cluster: two parallel triangles, sites
{0, 1, 2} on top and {3, 4, 5} below, with site 3 across the cluster from
site 0 (and 4 from 1, 5 from 2).  Coupling topologies are expressed through
three pair classes:

* intra-triangle pairs, e.g. (0, 1)
* adjacent inter-triangle pairs, e.g. (0, 4)
* antipodal pairs (0, 3), (1, 4), (2, 5)

Measured J values for these clusters are not settled, so magnitudes default
to the 0.01 to 1 Hz decade and are meant to be scaled or overridden; the
topology (which pairs share a class) is the stable part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .spincore import Operator, SpinSite, SpinSystem, _kron_embed, spin_operators

TWO_PI = 2.0 * np.pi

#: gamma / 2 pi in MHz per tesla for the supported nuclei.
GAMMA_BAR_MHZ_PER_T = {
    "31P": 17.24,
    "7Li": 16.55,
    "6Li": 6.27,
    "1H": 42.577,
}

SPIN_BY_NUCLEUS = {"31P": 0.5, "7Li": 1.5, "6Li": 1.0, "1H": 0.5}

#: Ratio gamma(7Li) / gamma(6Li); sets the default 6Li coupling from the 7Li one.
LI_GAMMA_RATIO = GAMMA_BAR_MHZ_PER_T["7Li"] / GAMMA_BAR_MHZ_PER_T["6Li"]

# Default coupling magnitudes (Hz) for the symmetric topology.
J_INTRA_HZ = 0.05
J_ADJACENT_HZ = 0.02
J_ANTIPODAL_HZ = 0.2

#: Default phosphorus-to-lithium coupling for 7Li (Hz); the 6Li default is
#: this value divided by the gyromagnetic ratio of the isotopes.
J_P_LI7_HZ = 0.5
J_LI_LI_HZ = 0.05

#: Default phosphorus-to-proton coupling (Hz) in the two-spin toy molecule.
J_P_H_HZ = 0.2

_INTRA_PAIRS = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
_ADJACENT_PAIRS = [(0, 4), (0, 5), (1, 3), (1, 5), (2, 3), (2, 4)]
_ANTIPODAL_PAIRS = [(0, 3), (1, 4), (2, 5)]

#: Base magnitude (Hz) of the weak-asymmetry topology: every pair coupled,
#: all values distinct but comparable, so no pair dominates and correlations
#: disperse across the cluster instead of swapping to the antipode.
J_WEAK_BASE_HZ = 0.1

# Fixed multipliers for the weak-asymmetry topology, one per pair.  Chosen to
# keep every coupling distinct while staying within a factor ~1.5 of the base.
_WEAK_FACTORS = {
    (0, 1): 1.17, (0, 2): 0.73, (0, 3): 1.31, (0, 4): 0.89, (0, 5): 1.05,
    (1, 2): 0.61, (1, 3): 1.43, (1, 4): 0.97, (1, 5): 0.67, (2, 3): 1.23,
    (2, 4): 0.79, (2, 5): 1.37, (3, 4): 0.85, (3, 5): 1.11, (4, 5): 0.59,
}

#: Factor applied to couplings inside the top triangle {0, 1, 2} (the half
#: holding the entangled site) for the strong-asymmetry topology.
_STRONG_FACTOR = 100.0

COUPLING_TOPOLOGIES = ("symmetric", "weak_asymmetry", "strong_asymmetry", "none")


@dataclass(frozen=True)
class FieldSpec:
    """Static magnetic field along +z, in tesla."""

    b0_tesla: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.b0_tesla) or self.b0_tesla < 0:
            raise ValueError(f"b0_tesla must be finite and >= 0, got {self.b0_tesla!r}")


class CouplingMatrix:
    """Symmetric matrix of scalar J couplings in hertz.

    The diagonal is ignored (zeroed); an asymmetric input raises.
    """

    def __init__(self, j_hz: np.ndarray):
        arr = np.array(j_hz, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("coupling matrix must be finite")
        if np.abs(arr - arr.T).max() > 1e-12 * max(1.0, np.abs(arr).max()):
            raise ValueError("coupling matrix must be symmetric")
        np.fill_diagonal(arr, 0.0)
        arr.setflags(write=False)
        self.j_hz = arr

    @property
    def n_sites(self) -> int:
        return self.j_hz.shape[0]

    @classmethod
    def from_pairs(cls, n_sites: int, pairs: dict[tuple[int, int], float]) -> "CouplingMatrix":
        j = np.zeros((n_sites, n_sites))
        for (i, k), value in pairs.items():
            j[i, k] = value
            j[k, i] = value
        return cls(j)

    def scaled(self, factor: float) -> "CouplingMatrix":
        return CouplingMatrix(self.j_hz * factor)


def posner_system(doping: str = "none") -> SpinSystem:
    """Spin system of one cluster: six 31P sites, optionally two lithium ions.

    ``doping`` is one of ``"none"``, ``"Li6"`` or ``"Li7"`` (case-insensitive).
    Phosphorus sites are labelled P0..P5; the lithium sites occupy positions
    6 and 7 and are labelled L6 and L7 regardless of isotope.
    """
    sites = [
        SpinSite(f"P{k}", SPIN_BY_NUCLEUS["31P"], GAMMA_BAR_MHZ_PER_T["31P"])
        for k in range(6)
    ]
    key = doping.lower()
    if key == "none":
        pass
    elif key in ("li6", "li7"):
        nucleus = "6Li" if key == "li6" else "7Li"
        for pos in (6, 7):
            sites.append(
                SpinSite(f"L{pos}", SPIN_BY_NUCLEUS[nucleus], GAMMA_BAR_MHZ_PER_T[nucleus])
            )
    else:
        raise ConfigError(f"unknown doping {doping!r}; expected none, Li6 or Li7")
    return SpinSystem(sites)


def phosphate_hydrogen_system() -> SpinSystem:
    """Two-spin toy molecule: one 31P site and one proton."""
    return SpinSystem(
        [
            SpinSite("P0", SPIN_BY_NUCLEUS["31P"], GAMMA_BAR_MHZ_PER_T["31P"]),
            SpinSite("H1", SPIN_BY_NUCLEUS["1H"], GAMMA_BAR_MHZ_PER_T["1H"]),
        ]
    )


def _phosphorus_block(topology: str) -> dict[tuple[int, int], float]:
    base = {}
    for pairs, value in (
        (_INTRA_PAIRS, J_INTRA_HZ),
        (_ADJACENT_PAIRS, J_ADJACENT_HZ),
        (_ANTIPODAL_PAIRS, J_ANTIPODAL_HZ),
    ):
        for pair in pairs:
            base[tuple(sorted(pair))] = value
    if topology == "symmetric":
        return base
    if topology == "none":
        return {pair: 0.0 for pair in base}
    if topology == "weak_asymmetry":
        return {pair: J_WEAK_BASE_HZ * _WEAK_FACTORS[pair] for pair in base}
    if topology == "strong_asymmetry":
        strong = set(map(tuple, map(sorted, _INTRA_PAIRS[:3])))
        return {
            pair: value * (_STRONG_FACTOR if pair in strong else 1.0)
            for pair, value in base.items()
        }
    raise ConfigError(
        f"unknown coupling topology {topology!r}; expected one of {COUPLING_TOPOLOGIES}"
    )


def coupling_topology(
    topology: str = "symmetric",
    doping: str = "none",
    scale: float = 1.0,
    j_p_li_hz: float | None = None,
    j_li_li_hz: float | None = None,
) -> CouplingMatrix:
    """Coupling matrix for a cluster, by named topology.

    ``scale`` multiplies every phosphorus-phosphorus coupling (the sweep
    knob).  Lithium couplings, when doped, default to :data:`J_P_LI7_HZ`
    scaled down by the isotope gyromagnetic ratio for 6Li, with every
    phosphorus coupled equally to each lithium ion.
    """
    if not np.isfinite(scale):
        raise ConfigError("coupling scale must be finite")
    pairs = {
        pair: value * scale for pair, value in _phosphorus_block(topology).items()
    }
    key = doping.lower()
    if key == "none":
        n = 6
    elif key in ("li6", "li7"):
        n = 8
        if j_p_li_hz is None:
            j_p_li_hz = J_P_LI7_HZ if key == "li7" else J_P_LI7_HZ / LI_GAMMA_RATIO
        if j_li_li_hz is None:
            j_li_li_hz = J_LI_LI_HZ
        for li in (6, 7):
            for p in range(6):
                pairs[(p, li)] = j_p_li_hz
        pairs[(6, 7)] = j_li_li_hz
    else:
        raise ConfigError(f"unknown doping {doping!r}; expected none, Li6 or Li7")
    return CouplingMatrix.from_pairs(n, pairs)


def pair_coupling(j_hz: float) -> CouplingMatrix:
    """Two-site coupling matrix for the toy molecules."""
    return CouplingMatrix.from_pairs(2, {(0, 1): j_hz})


def build_hamiltonian(
    system: SpinSystem, field: FieldSpec, couplings: CouplingMatrix
) -> Operator:
    """Assemble the Zeeman plus isotropic-coupling Hamiltonian in rad/s.

    The coupling matrix must match the number of sites.  The result is
    Hermitian and traceless by construction.
    """
    if couplings.n_sites != len(system):
        raise ValueError(
            f"coupling matrix is {couplings.n_sites}x{couplings.n_sites} "
            f"but the system has {len(system)} sites"
        )
    dims = system.dims
    data = np.zeros((system.dim, system.dim), dtype=np.complex128)

    cartesian = {}
    for s in sorted({site.spin for site in system.sites}):
        sx, sy, sz = spin_operators(s)
        cartesian[s] = (sx.data, sy.data, sz.data)

    for k, site in enumerate(system.sites):
        omega = TWO_PI * field.b0_tesla * site.gamma_bar * 1e6
        if omega != 0.0:
            data += omega * _kron_embed(dims, {k: cartesian[site.spin][2]})

    for i in range(len(system)):
        for k in range(i + 1, len(system)):
            j = couplings.j_hz[i, k]
            if j == 0.0:
                continue
            for axis in range(3):
                op_i = cartesian[system.sites[i].spin][axis]
                op_k = cartesian[system.sites[k].spin][axis]
                data += TWO_PI * j * _kron_embed(dims, {i: op_i, k: op_k})

    return Operator(system, data, hermitian=True)
