"""Eigenvalues and the negative-part trace functionals built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError
from .operators import DenseHermitian

HERMITIAN_TOL = 1e-12


def _matrix(H) -> np.ndarray:
    return H.data if isinstance(H, DenseHermitian) else np.asarray(H)


def eigenvalues(H) -> np.ndarray:
    """Full ascending spectrum of a Hermitian matrix.

    Raw arrays are checked for Hermiticity to ``1e-12`` relative to their
    largest entry; :class:`DenseHermitian` input is Hermitian by construction.
    """
    M = _matrix(H)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"need a square matrix, got shape {M.shape}")
    scale = max(float(np.max(np.abs(M))), 1e-300) if M.size else 1.0
    if np.max(np.abs(M - M.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise DomainError("matrix is not Hermitian")
    return np.linalg.eigvalsh(M)


def moment_from_eigenvalues(ev: np.ndarray, gamma: float) -> float:
    """sum max(0, -e)^gamma; gamma = 0 counts strictly negative eigenvalues."""
    if gamma < 0:
        raise DomainError(f"need gamma >= 0, got {gamma}")
    neg = -ev[ev < 0]
    if gamma == 0:
        return float(neg.size)
    return float(np.sum(neg ** gamma))


def negative_trace_moment(H, gamma: float) -> float:
    """Tr(H)_-^gamma."""
    return moment_from_eigenvalues(eigenvalues(H), gamma)


def count_below(H, alpha: float = 0.0) -> int:
    """Number of eigenvalues less than or equal to ``alpha``."""
    ev = eigenvalues(H)
    return int(np.searchsorted(ev, alpha, side="right"))


@dataclass
class SpectrumSummary:
    eigenvalues: np.ndarray
    negative_trace_moments: dict[float, float] = field(default_factory=dict)
    counts: dict[float, int] = field(default_factory=dict)

    def as_dict(self, include_eigenvalues: bool = True) -> dict:
        out = {
            "dim": int(self.eigenvalues.size),
            "min": float(self.eigenvalues[0]),
            "max": float(self.eigenvalues[-1]),
            "negative_trace_moments": {str(g): v for g, v in self.negative_trace_moments.items()},
            "counts": {str(a): c for a, c in self.counts.items()},
        }
        if include_eigenvalues:
            out["eigenvalues"] = [float(e) for e in self.eigenvalues]
        return out


def summarize(H, moments: Iterable[float] = (0.5, 1.0), levels: Iterable[float] = (0.0,)) -> SpectrumSummary:
    ev = eigenvalues(H)
    return SpectrumSummary(
        ev,
        {float(g): moment_from_eigenvalues(ev, g) for g in moments},
        {float(a): int(np.searchsorted(ev, a, side="right")) for a in levels},
    )
