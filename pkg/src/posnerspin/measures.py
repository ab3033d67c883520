"""Entropy, coherence and entanglement measures.

All functions return plain Python floats.  Inputs may be
:class:`~posnerspin.spincore.Operator`, :class:`~posnerspin.dynamics.PairState`
or bare numpy arrays; only the matrix data is used.
"""

from __future__ import annotations

import numpy as np

from .dynamics import PairState
from .spincore import Operator, density_probabilities

_SIGMA_YY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ],
    dtype=np.complex128,
)


def _as_matrix(state: Operator | PairState | np.ndarray) -> np.ndarray:
    if isinstance(state, Operator):
        return state.data
    if isinstance(state, PairState):
        return state.rho
    return np.asarray(state, dtype=np.complex128)


def von_neumann_entropy(rho: Operator | PairState | np.ndarray) -> float:
    """S(rho) = -sum_k p_k log2 p_k in bits, with 0 log 0 taken as 0.

    Eigenvalues pass through the shared round-off policy (clamp negatives,
    renormalise); a pure state gives exactly 0, a maximally mixed state of
    dimension d gives log2(d).
    """
    p = density_probabilities(_as_matrix(rho))
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def coherence_bi(rho: Operator | PairState | np.ndarray) -> float:
    """Basis-independent coherence log2(d) - S(rho), in bits.

    Zero exactly for the maximally mixed state, log2(d) for any pure state,
    and invariant under unitary conjugation.
    """
    d = _as_matrix(rho).shape[0]
    return float(np.log2(d) - von_neumann_entropy(rho))


def concurrence(pair: PairState | np.ndarray) -> float:
    """Two-qubit concurrence C(rho) = max(0, l1 - l2 - l3 - l4).

    The l_k are the square roots of the eigenvalues, in decreasing order, of
    rho (sy (x) sy) rho* (sy (x) sy) [Wootters, Phys. Rev. Lett. 80, 2245
    (1998)].  That product is diagonalised with the general eigensolver; its
    spectrum is non-negative real in exact arithmetic, so imaginary parts
    (checked below 1e-10) are discarded and small negatives clamped before
    the square root.
    """
    rho = _as_matrix(pair)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence is defined for 4x4 states, got {rho.shape}")
    rho_tilde = rho @ _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    lam = np.linalg.eigvals(rho_tilde)
    if np.abs(lam.imag).max() > 1e-10:
        raise FloatingPointError(
            f"spectrum of rho rho~ has imaginary part {np.abs(lam.imag).max():.3e}"
        )
    roots = np.sqrt(np.clip(lam.real, 0.0, None))
    roots = np.sort(roots)[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))
