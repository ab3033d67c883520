"""Unitary evolution and reduced dynamics of an entangled molecule pair.

The physical setup: two non-interacting molecules A and B evolve under their
own Hamiltonians.  One spin-1/2 site in each molecule starts in a shared
two-spin singlet; every other site starts maximally mixed.  The quantity of
interest is the two-spin reduced density matrix of one observed site per
molecule as a function of time.

Because the joint initial state factorises as

    rho(0) = rho_singlet(e_A, e_B) (x) I_rest / d_rest

and the evolution factorises as U_A (x) U_B, the observed pair state can be
assembled from per-molecule Heisenberg correlators

    g_{mu,alpha}(t) = Tr[ U (sigma_mu at entangled site (x) I/d_rest) U^dag
                          (sigma_alpha at observed site) ]

without ever forming the joint Hilbert space:

    rho_pair(t) = (1/4) [ I4 + sum_{a,b} C_ab sigma_a (x) sigma_b ],
    C = -(1/4) g_A^T g_B.

Single-spin marginals stay maximally mixed at all times (the singlet carries
no local polarisation), so only the 3x3 correlation block is needed.

:func:`brute_force_pair` is the deliberately independent cross-check: it
builds joint-space state vectors, applies U_A (x) U_B and partial-traces.
It shares nothing with the correlator path beyond the eigendecompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionGuardError
from .spincore import (
    MAX_DIM,
    EigenDecomposition,
    Operator,
    SpinSystem,
    _kron_embed,
    eigh,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)

#: Pauli matrices in the m-descending basis (index 0 is m = +1/2).
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

#: Two-spin singlet/triplet states in the product basis (first factor is
#: molecule A's observed spin, m descending within each factor).
SINGLET = np.array([0.0, SQRT_HALF, -SQRT_HALF, 0.0], dtype=np.complex128)
TRIPLET_0 = np.array([0.0, SQRT_HALF, SQRT_HALF, 0.0], dtype=np.complex128)
TRIPLET_PLUS = np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)
TRIPLET_MINUS = np.array([0.0, 0.0, 0.0, 1.0], dtype=np.complex128)
for _v in (SINGLET, TRIPLET_0, TRIPLET_PLUS, TRIPLET_MINUS):
    _v.setflags(write=False)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid in seconds."""

    t_start: float = 0.0
    t_end: float = 500.0
    n_points: int = 2001

    def __post_init__(self) -> None:
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise ValueError("time grid endpoints must be finite")
        if self.t_end <= self.t_start:
            raise ValueError("t_end must be greater than t_start")
        if self.n_points < 2:
            raise ValueError("a time grid needs at least two points")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)


class EigenPropagator:
    """Spectral form of exp(-iHt) for a Hermitian Hamiltonian in rad/s."""

    def __init__(self, hamiltonian: Operator):
        self.system: SpinSystem = hamiltonian.system
        self.decomposition: EigenDecomposition = eigh(hamiltonian)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.decomposition.eigenvectors

    def unitary(self, t: float) -> np.ndarray:
        """Dense propagator U(t) = V exp(-i lambda t) V^dag."""
        v = self.eigenvectors
        phases = np.exp(-1.0j * self.eigenvalues * t)
        return (v * phases) @ v.conj().T


def evolve_state(prop: EigenPropagator, rho0: Operator, t: float) -> Operator:
    """Evolve a density matrix: U(t) rho0 U(t)^dag."""
    if rho0.system.dims != prop.system.dims:
        raise ValueError("state dimensions do not match the propagator's system")
    if abs(np.trace(rho0.data) - 1.0) > 1e-8:
        raise ValueError("evolve_state expects a unit-trace density matrix")
    u = prop.unitary(t)
    data = u @ rho0.data @ u.conj().T
    data = (data + data.conj().T) / 2.0
    return Operator(prop.system, data, hermitian=True)


class PairState:
    """Validated 4x4 density matrix of one observed spin per molecule.

    ``labels`` records the observed site labels (molecule A first).
    Construction rejects trace deviations beyond 1e-9 and eigenvalues below
    -1e-9.
    """

    def __init__(self, rho: np.ndarray, labels: tuple[str, str]):
        arr = np.array(rho, dtype=np.complex128, copy=True)
        if arr.shape != (4, 4):
            raise ValueError(f"pair state must be 4x4, got {arr.shape}")
        if np.abs(arr - arr.conj().T).max() > 1e-9:
            raise ValueError("pair state must be Hermitian")
        tr = np.trace(arr).real
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"pair state trace {tr} is not 1 within 1e-9")
        w = np.linalg.eigvalsh(arr)
        if w.min() < -1e-9:
            raise ValueError(f"pair state has negative eigenvalue {w.min():.3e}")
        arr.setflags(write=False)
        self.rho = arr
        self.labels = tuple(labels)

    def __repr__(self) -> str:
        return f"PairState(labels={self.labels})"


class STPopulations(NamedTuple):
    """Populations of the pair state in the singlet/triplet basis."""

    singlet: float
    triplet_0: float
    triplet_plus: float
    triplet_minus: float


def singlet_triplet_populations(pair: PairState) -> STPopulations:
    """Diagonal of the pair state in the singlet/triplet basis.

    The four values are non-negative (within validation tolerance) and sum to
    one because the basis is orthonormal.
    """
    rho = pair.rho
    vals = [
        float(np.real(v.conj() @ rho @ v))
        for v in (SINGLET, TRIPLET_0, TRIPLET_PLUS, TRIPLET_MINUS)
    ]
    return STPopulations(*vals)


def _check_pair_sites(prop: EigenPropagator, entangled: int, observed: int) -> None:
    for name, k in (("entangled", entangled), ("observed", observed)):
        if not 0 <= k < len(prop.system):
            raise ValueError(
                f"{name} site index {k} out of range for {len(prop.system)} sites"
            )
        if prop.system.dims[k] != 2:
            raise ValueError(
                f"{name} site {prop.system.labels[k]} must be spin-1/2 "
                f"(dimension 2), got dimension {prop.system.dims[k]}"
            )


def _heisenberg_correlators(
    prop: EigenPropagator, entangled: int, observed: int, times: np.ndarray
) -> np.ndarray:
    """Per-molecule correlator block g[t, mu, alpha], shape (n_t, 3, 3).

    In the Hamiltonian eigenbasis each entry is a quadratic form

        g_{mu,alpha}(t) = psi(t)^dag W^{mu,alpha} psi(t) / d_rest,
        psi_m(t) = exp(i lambda_m t),
        W^{mu,alpha} = P~_mu * (Q~_alpha)^T    (elementwise),

    with P~ and Q~ the embedded Pauli operators rotated into the eigenbasis.
    The whole time grid is then a batched matrix product per (mu, alpha).
    """
    system = prop.system
    dims = system.dims
    v = prop.eigenvectors
    lam = prop.eigenvalues
    d_rest = system.dim // 2

    p_tilde = [
        v.conj().T @ _kron_embed(dims, {entangled: sigma}) @ v for sigma in PAULIS
    ]
    q_tilde = [
        v.conj().T @ _kron_embed(dims, {observed: sigma}) @ v for sigma in PAULIS
    ]

    psi = np.exp(1.0j * np.outer(lam, times))
    psi_conj = psi.conj()
    g = np.empty((times.size, 3, 3))
    for mu in range(3):
        for alpha in range(3):
            w = p_tilde[mu] * q_tilde[alpha].T
            f = np.einsum("mt,mt->t", psi_conj, w @ psi)
            if np.abs(f.imag).max() > 1e-9:
                raise FloatingPointError(
                    "correlator developed a non-real value; Hamiltonian input "
                    "is likely not Hermitian"
                )
            g[:, mu, alpha] = f.real / d_rest
    return g


def pair_series(
    prop_a: EigenPropagator,
    prop_b: EigenPropagator,
    entangled: tuple[int, int],
    observed: tuple[int, int],
    times: np.ndarray,
) -> list[PairState]:
    """Observed-pair reduced density matrices over a whole time grid.

    ``entangled`` and ``observed`` hold one site index per molecule,
    molecule A first.  All four sites must be spin-1/2.  The initial joint
    state is the singlet on the entangled sites with every remaining site
    maximally mixed.
    """
    times = np.asarray(times, dtype=float)
    _check_pair_sites(prop_a, entangled[0], observed[0])
    _check_pair_sites(prop_b, entangled[1], observed[1])

    g_a = _heisenberg_correlators(prop_a, entangled[0], observed[0], times)
    same = (
        prop_b is prop_a
        and entangled[1] == entangled[0]
        and observed[1] == observed[0]
    )
    g_b = g_a if same else _heisenberg_correlators(prop_b, entangled[1], observed[1], times)

    labels = (
        prop_a.system.labels[observed[0]],
        prop_b.system.labels[observed[1]],
    )
    corr = -0.25 * np.einsum("tma,tmb->tab", g_a, g_b)

    basis = np.empty((3, 3, 4, 4), dtype=np.complex128)
    for a in range(3):
        for b in range(3):
            basis[a, b] = np.kron(PAULIS[a], PAULIS[b])
    rhos = 0.25 * (
        np.broadcast_to(np.eye(4, dtype=np.complex128), (times.size, 4, 4))
        + np.einsum("tab,abij->tij", corr, basis)
    )
    return [PairState(rhos[i], labels) for i in range(times.size)]


def pair_reduced_density(
    prop_a: EigenPropagator,
    prop_b: EigenPropagator,
    entangled: tuple[int, int],
    observed: tuple[int, int],
    t: float,
) -> PairState:
    """Observed-pair reduced density matrix at a single time."""
    return pair_series(prop_a, prop_b, entangled, observed, np.array([t]))[0]


def _site_index_map(dims: Sequence[int], site: int) -> tuple[np.ndarray, int]:
    """Basis-index lookup after splitting off one site.

    Returns ``(idx, d_rest)`` where ``idx[m, r]`` is the full-space basis
    index of site state m combined with rest state r.
    """
    full = np.arange(int(np.prod(dims))).reshape(tuple(dims))
    moved = np.moveaxis(full, site, 0)
    return moved.reshape(dims[site], -1), moved.size // dims[site]


def _initial_joint_factor(
    sys_a: SpinSystem, sys_b: SpinSystem, entangled: tuple[int, int]
) -> np.ndarray:
    """Columns spanning the joint initial state.

    rho(0) = Psi W Psi^dag with uniform weights 1/(d_restA*d_restB); column
    (rA, rB) is the normalised singlet on the entangled sites tensored with
    rest basis states |rA>, |rB>.  Joint index ordering is molecule A slowest,
    matching U_A (x) U_B = kron(U_A, U_B).
    """
    idx_a, rest_a = _site_index_map(sys_a.dims, entangled[0])
    idx_b, rest_b = _site_index_map(sys_b.dims, entangled[1])
    d_b = sys_b.dim
    psi = np.zeros((sys_a.dim * d_b, rest_a * rest_b), dtype=np.complex128)
    cols = (np.arange(rest_a)[:, None] * rest_b + np.arange(rest_b)[None, :]).ravel()
    for m_a, m_b, coeff in ((0, 1, SQRT_HALF), (1, 0, -SQRT_HALF)):
        rows = (idx_a[m_a][:, None] * d_b + idx_b[m_b][None, :]).ravel()
        psi[rows, cols] += coeff
    return psi


def brute_force_pair(
    prop_a: EigenPropagator,
    prop_b: EigenPropagator,
    entangled: tuple[int, int],
    observed: tuple[int, int],
    t: float,
) -> PairState:
    """Cross-check path: evolve the joint state and partial-trace.

    Materialises state vectors on the joint Hilbert space of both molecules
    (dimension d_A * d_B, guarded at :data:`spincore.MAX_DIM`), applies
    U_A (x) U_B exactly and traces out everything but the observed sites.
    Slow by design; use :func:`pair_reduced_density` for production runs.
    """
    _check_pair_sites(prop_a, entangled[0], observed[0])
    _check_pair_sites(prop_b, entangled[1], observed[1])
    d_a, d_b = prop_a.system.dim, prop_b.system.dim
    if d_a * d_b > MAX_DIM:
        raise DimensionGuardError(
            f"joint dimension {d_a * d_b} exceeds the brute-force guard {MAX_DIM}"
        )

    psi0 = _initial_joint_factor(prop_a.system, prop_b.system, entangled)
    n_cols = psi0.shape[1]
    u_a = prop_a.unitary(t)
    u_b = prop_b.unitary(t)

    if d_a * d_b <= 512:
        # Small joint spaces: materialise the joint propagator and density
        # matrix literally.
        u = np.kron(u_a, u_b)
        rho_t = u @ (psi0 @ psi0.conj().T / n_cols) @ u.conj().T
    else:
        # Same math, but column-wise: (U_A (x) U_B) psi reshapes to
        # U_A psi_r U_B^T per column, avoiding the d^2 x d^2 propagator.
        tensor = psi0.reshape(d_a, d_b, n_cols)
        evolved = np.einsum("ac,cbr->abr", u_a, tensor)
        evolved = np.einsum("bd,adr->abr", u_b, evolved)
        rho_t = None

    # Partial trace onto (observed A, observed B) with A as the slow index.
    idx_a, rest_a = _site_index_map(prop_a.system.dims, observed[0])
    idx_b, rest_b = _site_index_map(prop_b.system.dims, observed[1])
    if rho_t is not None:
        evolved = None
        rho6 = rho_t.reshape(d_a, d_b, d_a, d_b)
        # Reorder each molecule index into (observed, rest).
        perm_a = idx_a.ravel()
        perm_b = idx_b.ravel()
        rho6 = rho6[np.ix_(perm_a, perm_b, perm_a, perm_b)]
        rho6 = rho6.reshape(2, rest_a, 2, rest_b, 2, rest_a, 2, rest_b)
        pair = np.einsum("iajbkalb->ijkl", rho6)
    else:
        phi = np.empty((2, rest_a, 2, rest_b, n_cols), dtype=np.complex128)
        flat = evolved.reshape(d_a * d_b, n_cols)
        for m_a in range(2):
            for m_b in range(2):
                rows = (idx_a[m_a][:, None] * d_b + idx_b[m_b][None, :]).ravel()
                phi[m_a, :, m_b, :, :] = flat[rows].reshape(rest_a, rest_b, n_cols)
        pair = np.einsum("iajbr,kalbr->ijkl", phi, phi.conj()) / n_cols

    pair = pair.reshape(4, 4)
    pair = (pair + pair.conj().T) / 2.0
    labels = (
        prop_a.system.labels[observed[0]],
        prop_b.system.labels[observed[1]],
    )
    return PairState(pair, labels)
