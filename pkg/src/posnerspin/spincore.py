"""Dense spin algebra over tensor products of small spin sites.

Conventions fixed here and relied on by every other module:

* hbar = 1, so Hamiltonians are angular frequencies (rad/s) and time is in
  seconds.
* The single-site basis is |s, m> with m descending: m = s, s-1, ..., -s.
* Site 0 is the slowest-varying tensor index, i.e. the leftmost Kronecker
  factor.  ``embed(op, 0, system)`` equals ``kron(op, I_rest)``.

All matrices are dense complex128 numpy arrays.  Operators returned from this
module have their backing array marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionGuardError

#: Largest Hilbert-space dimension any constructor will accept.  Keeps every
#: supported computation at desk scale (dense matrices, minutes of CPU).
MAX_DIM = 4096

_HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class SpinSite:
    """One spin-carrying nucleus.

    Parameters
    ----------
    label:
        Short unique name, e.g. ``"P0"`` or ``"L7"``.
    spin:
        Spin magnitude s.  Any positive half-integer is accepted.
    gamma_bar:
        Reduced gyromagnetic ratio gamma / 2 pi in MHz per tesla, the form
        tabulated in NMR references.
    """

    label: str
    spin: float
    gamma_bar: float

    def __post_init__(self) -> None:
        twice = round(2 * self.spin)
        if not np.isfinite(self.spin) or abs(2 * self.spin - twice) > 1e-12 or twice < 1:
            raise ValueError(f"spin must be a positive half-integer, got {self.spin!r}")
        if not np.isfinite(self.gamma_bar):
            raise ValueError("gamma_bar must be finite")
        if not self.label:
            raise ValueError("site label must be non-empty")

    @property
    def dim(self) -> int:
        """Dimension 2s + 1 of the site Hilbert space."""
        return round(2 * self.spin) + 1


class SpinSystem:
    """An ordered collection of spin sites defining a product Hilbert space."""

    def __init__(self, sites: Iterable[SpinSite]):
        self.sites: tuple[SpinSite, ...] = tuple(sites)
        if not self.sites:
            raise ValueError("a spin system needs at least one site")
        labels = [s.label for s in self.sites]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate site labels: {labels}")
        dim = 1
        for s in self.sites:
            dim *= s.dim
        if dim > MAX_DIM:
            raise DimensionGuardError(
                f"system dimension {dim} exceeds the supported maximum {MAX_DIM}"
            )
        self.dim: int = dim
        self.dims: tuple[int, ...] = tuple(s.dim for s in self.sites)
        self.labels: tuple[str, ...] = tuple(labels)
        self._index = {lab: k for k, lab in enumerate(labels)}

    def __len__(self) -> int:
        return len(self.sites)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpinSystem) and self.sites == other.sites

    def __hash__(self) -> int:
        return hash(self.sites)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s.label}(s={s.spin:g})" for s in self.sites)
        return f"SpinSystem[{inner}]"

    def index_of(self, label: str) -> int:
        """Site index for a label; raises KeyError with the offending label."""
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(
                f"unknown site label {label!r}; known labels: {list(self.labels)}"
            ) from None

    def subsystem(self, keep: Sequence[int]) -> "SpinSystem":
        """New system containing the kept sites, in original order."""
        return SpinSystem(self.sites[k] for k in sorted(keep))


class Operator:
    """A dense matrix tied to a :class:`SpinSystem`.

    The ``hermitian`` tag is a promise checked at construction time
    (max-norm deviation below ``1e-12`` relative to the matrix max-norm);
    downstream code such as :func:`eigh` requires it.
    """

    def __init__(self, system: SpinSystem, data: np.ndarray, hermitian: bool = False):
        arr = np.array(data, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"operator data must be a square matrix, got shape {arr.shape}")
        if arr.shape[0] != system.dim:
            raise ValueError(
                f"operator dimension {arr.shape[0]} does not match system dimension {system.dim}"
            )
        if hermitian:
            scale = max(np.abs(arr).max(), 1.0)
            dev = np.abs(arr - arr.conj().T).max()
            if dev > _HERMITIAN_RTOL * scale:
                raise ValueError(
                    f"matrix tagged hermitian deviates from its adjoint by {dev:.3e}"
                )
        arr.setflags(write=False)
        self.system = system
        self.data = arr
        self.hermitian = bool(hermitian)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.system, self.data.conj().T, hermitian=self.hermitian)

    def __repr__(self) -> str:
        tag = ", hermitian" if self.hermitian else ""
        return f"Operator(dim={self.dim}{tag}) on {self.system!r}"


@dataclass(frozen=True)
class EigenDecomposition:
    """Result of :func:`eigh`: ascending real eigenvalues, orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def identity(system: SpinSystem) -> Operator:
    return Operator(system, np.eye(system.dim), hermitian=True)


def spin_operators(s: float) -> tuple[Operator, Operator, Operator]:
    """Cartesian spin operators (Sx, Sy, Sz) for a single site of spin s.

    Basis ordering is |s, m> with m descending.  Built from the ladder
    operator S+ with matrix elements sqrt(s(s+1) - m(m+1)):

    * Sz = diag(s, s-1, ..., -s)
    * Sx = (S+ + S-) / 2
    * Sy = (S+ - S-) / (2i)

    Returned operators live on a throwaway single-site system; :func:`embed`
    only checks the dimension, so they can be placed at any site of matching
    spin.
    """
    site = SpinSite(label="spin", spin=s, gamma_bar=0.0)
    system = SpinSystem((site,))
    n = site.dim
    m = s - np.arange(n)
    raising = np.zeros((n, n), dtype=np.complex128)
    if n > 1:
        coeff = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
        raising[np.arange(n - 1), np.arange(1, n)] = coeff
    lowering = raising.conj().T
    sx = (raising + lowering) / 2.0
    sy = (raising - lowering) / 2.0j
    sz = np.diag(m).astype(np.complex128)
    return (
        Operator(system, sx, hermitian=True),
        Operator(system, sy, hermitian=True),
        Operator(system, sz, hermitian=True),
    )


def _kron_embed(dims: Sequence[int], placed: Mapping[int, np.ndarray]) -> np.ndarray:
    """Kronecker product over all sites with identities where nothing is placed."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k, d in enumerate(dims):
        factor = placed.get(k)
        if factor is None:
            factor = np.eye(d)
        out = np.kron(out, factor)
    return out


def embed(op: Operator, site_index: int, system: SpinSystem) -> Operator:
    """Lift a single-site operator to the full system at the given site.

    The operator's own system is ignored apart from its dimension, which must
    equal the dimension of ``system.sites[site_index]``.
    """
    if not 0 <= site_index < len(system):
        raise ValueError(f"site index {site_index} out of range for {len(system)} sites")
    want = system.dims[site_index]
    if op.dim != want:
        raise ValueError(
            f"operator dimension {op.dim} does not match site "
            f"{site_index} dimension {want}"
        )
    data = _kron_embed(system.dims, {site_index: op.data})
    return Operator(system, data, hermitian=op.hermitian)


def partial_trace(rho: Operator, keep: Sequence[int]) -> Operator:
    """Reduced density matrix over the kept sites, in original site order.

    Parameters
    ----------
    rho:
        Density matrix on the full system (Hermitian, unit trace within 1e-10).
    keep:
        Site indices to retain.  Must be non-empty, unique and in range.

    Returns
    -------
    Operator
        Density matrix on ``rho.system.subsystem(keep)``.
    """
    keep = list(keep)
    n = len(rho.system)
    if not keep:
        raise ValueError("keep must name at least one site")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate site indices in keep: {keep}")
    if any(not 0 <= k < n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} sites")
    tr = np.trace(rho.data)
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"partial_trace expects unit trace, got {tr}")
    if np.abs(rho.data - rho.data.conj().T).max() > 1e-10:
        raise ValueError("partial_trace expects a Hermitian density matrix")

    keep = sorted(keep)
    dims = rho.system.dims
    tensor = rho.data.reshape(dims + dims)
    # Integer einsum subscripts: traced sites share one axis id between row
    # and column, kept sites keep distinct ids that survive into the output.
    row_ids = list(range(n))
    col_ids = [i if i not in keep else n + i for i in range(n)]
    out_ids = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(tensor, row_ids + col_ids, out_ids)
    d_red = int(np.prod([dims[k] for k in keep]))
    reduced = reduced.reshape(d_red, d_red)
    # Round-off can leave a ~1e-16 asymmetry; restore exact Hermiticity.
    reduced = (reduced + reduced.conj().T) / 2.0
    return Operator(rho.system.subsystem(keep), reduced, hermitian=True)


def eigh(op: Operator) -> EigenDecomposition:
    """Eigendecomposition of an operator tagged Hermitian.

    Raises ``ValueError`` for operators without the Hermitian tag.
    """
    if not op.hermitian:
        raise ValueError("eigh requires an operator tagged hermitian")
    w, v = np.linalg.eigh(op.data)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def density_probabilities(rho: np.ndarray | Operator, trace_tol: float = 1e-8) -> np.ndarray:
    """Spectrum of a density matrix under the shared round-off policy.

    Eigenvalues are computed with ``eigvalsh``, negatives from round-off are
    clamped to zero and the result is renormalised to sum exactly to one.
    A trace farther than ``trace_tol`` from one raises ``ValueError``.
    """
    data = rho.data if isinstance(rho, Operator) else np.asarray(rho)
    w = np.linalg.eigvalsh(data)
    total = float(w.sum())
    if abs(total - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {total} is not 1 within {trace_tol}")
    w = np.clip(w, 0.0, None)
    return w / w.sum()
