"""Randomized matrix oracles for the operator and trace inequalities behind the trace bounds.

Each check returns an :class:`OracleVerdict` whose ``min_eigenvalue_of_gap``
is the smallest eigenvalue of (right side minus left side) for operator
inequalities, or the scalar difference for trace inequalities.  A verdict
passes when that number is at least ``-tolerance``, with the tolerance
proportional to the largest entry of the compared quantities.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PartitionError
from .fields import GridSpec, ScalarField, VectorField
from .operators import DenseHermitian, magnetic_schrodinger
from .spectra import negative_trace_moment

REL_TOL = 1e-9


@dataclass(frozen=True)
class OracleVerdict:
    name: str
    seed: int | None
    min_eigenvalue_of_gap: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _verdict(name, seed, gap, scale, rel_tol=REL_TOL) -> OracleVerdict:
    tol = rel_tol * scale
    return OracleVerdict(name, seed, float(gap), float(tol), bool(gap >= -tol))


def _maxabs(*mats) -> float:
    return max(float(np.max(np.abs(m))) for m in mats)


def _hermitian(M) -> np.ndarray:
    M = np.asarray(M.data if isinstance(M, DenseHermitian) else M, dtype=complex)
    return 0.5 * (M + M.conj().T)


def _power(M: np.ndarray, s: float) -> np.ndarray:
    w, U = np.linalg.eigh(M)
    return (U * np.clip(w, 0, None) ** s) @ U.conj().T


def _min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(_hermitian(M))[0])


def _neg_trace(M: np.ndarray) -> float:
    return negative_trace_moment(_hermitian(M), 1.0)


# --------------------------------------------------------------------------
# random instances
# --------------------------------------------------------------------------

def random_psd(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """G^dagger G + 1e-6 * scale * I with complex Gaussian G."""
    rank = dim if rank is None else rank
    G = rng.normal(size=(rank, dim)) + 1j * rng.normal(size=(rank, dim))
    M = G.conj().T @ G
    return M + 1e-6 * float(np.max(np.abs(M))) * np.eye(dim)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (G + G.conj().T)


def random_partition(rng: np.random.Generator, dim: int, terms: int) -> list[np.ndarray]:
    """PSD S_1..S_k with sum S_n^2 = I, generically non-commuting.

    The first k-1 factors are random PSD matrices scaled so that the sum of
    their squares has norm 1/2; the last is the PSD square root of the rest.
    """
    if terms < 2:
        raise DomainError("a partition needs at least two terms")
    S = [random_psd(rng, dim) for _ in range(terms - 1)]
    total = sum(x @ x for x in S)
    c = np.sqrt(0.5 / np.linalg.norm(total, 2))
    S = [c * x for x in S]
    rest = np.eye(dim) - sum(x @ x for x in S)
    S.append(_power(_hermitian(rest), 0.5))
    return S


def _partition_defect(S_list) -> float:
    dim = S_list[0].shape[0]
    return float(np.linalg.norm(sum(x @ x for x in S_list) - np.eye(dim), 2))


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------

def pullout_check(S_list, A_list, s: float, seed: int | None = None) -> OracleVerdict:
    """(sum S_n A_n S_n)^s >= sum S_n A_n^s S_n for a PSD partition sum S_n^2 = I."""
    if not 0 < s < 1:
        raise DomainError(f"need 0 < s < 1, got {s}")
    S_list = [_hermitian(x) for x in S_list]
    A_list = [_hermitian(x) for x in A_list]
    if _partition_defect(S_list) > 1e-12 * len(S_list):
        raise PartitionError("sum of S_n^2 differs from the identity")
    lhs = _power(sum(S @ A @ S for S, A in zip(S_list, A_list)), s)
    rhs = sum(S @ _power(A, s) @ S for S, A in zip(S_list, A_list))
    return _verdict("pullout", seed, _min_eig(lhs - rhs), _maxabs(lhs, rhs))


def bks_check(A, B, s: float, seed: int | None = None) -> OracleVerdict:
    """Tr(A - B)_- <= Tr(A^(1/s) - B^(1/s))_-^s for PSD A, B."""
    if not 0 < s < 1:
        raise DomainError(f"need 0 < s < 1, got {s}")
    A, B = _hermitian(A), _hermitian(B)
    scale = _maxabs(A, B)
    for M in (A, B):
        if _min_eig(M) < -1e-12 * scale:
            raise DomainError("bks_check needs positive semidefinite inputs")
    lhs = _neg_trace(A - B)
    rhs = negative_trace_moment(_hermitian(_power(A, 1 / s) - _power(B, 1 / s)), s)
    return _verdict("bks", seed, rhs - lhs, scale * A.shape[0])


def monotonicity_check(A, B, s: float, seed: int | None = None) -> OracleVerdict:
    """A >= B >= 0 implies A^s >= B^s; true for 0 < s <= 1 only."""
    if s <= 0:
        raise DomainError(f"need s > 0, got {s}")
    A, B = _hermitian(A), _hermitian(B)
    scale = _maxabs(A, B)
    if _min_eig(A - B) < -1e-12 * scale or _min_eig(B) < -1e-12 * scale:
        raise DomainError("monotonicity_check needs A >= B >= 0")
    As, Bs = _power(A, s), _power(B, s)
    return _verdict("monotonicity", seed, _min_eig(As - Bs), _maxabs(As, Bs))


def trace_sum_lemma_check(T_list, seed: int | None = None) -> OracleVerdict:
    """Tr(sum T_n)_- <= sum Tr(T_n)_-."""
    T_list = [_hermitian(T) for T in T_list]
    lhs = _neg_trace(sum(T_list))
    rhs = sum(_neg_trace(T) for T in T_list)
    return _verdict("trace_sum", seed, rhs - lhs, _maxabs(*T_list) * T_list[0].shape[0])


def trace_product_lemma_check(S_list, T, seed: int | None = None) -> OracleVerdict:
    """Tr(sum S_n T S_n)_- <= sum Tr(S_n T S_n)_- <= Tr T_- when sum S_n^2 <= 1.

    The reported gap is the smaller of the two differences.
    """
    S_list = [_hermitian(x) for x in S_list]
    T = _hermitian(T)
    top = float(np.linalg.eigvalsh(sum(x @ x for x in S_list))[-1])
    if top > 1 + 1e-12:
        raise PartitionError(f"sum S_n^2 exceeds the identity (top eigenvalue {top})")
    parts = [S @ T @ S for S in S_list]
    first = _neg_trace(sum(parts))
    middle = sum(_neg_trace(P) for P in parts)
    last = _neg_trace(T)
    return _verdict("trace_product", seed, min(middle - first, last - middle),
                    _maxabs(T) * T.shape[0])


def smooth_partition(grid: GridSpec, amplitude: float = 0.15, seed: int = 0) -> tuple[ScalarField, ScalarField]:
    """eta = cos(chi), theta = sin(chi) for a random lowest-mode phase chi."""
    rng = np.random.default_rng(seed)
    x, y, z = grid.mesh()
    k = 2 * np.pi / grid.box
    c = rng.normal(size=6)
    chi = amplitude * (c[0] * np.cos(k * x + c[1]) + c[2] * np.cos(k * y + c[3]) + c[4] * np.cos(k * z + c[5]))
    return ScalarField(grid, np.cos(chi)), ScalarField(grid, np.sin(chi))


def _grad_sq(f: ScalarField) -> np.ndarray:
    from .fields import gradient
    return np.sum(gradient(f).data ** 2, axis=0)


def ims_identity_check(grid: GridSpec, A: VectorField | None, eta: ScalarField, theta: ScalarField,
                       seed: int | None = None, rel_tol: float = 1e-8) -> OracleVerdict:
    """(p-A)^2 = eta (p-A)^2 eta + theta (p-A)^2 theta - |grad eta|^2 - |grad theta|^2.

    Both sides are compared between the Fourier modes with |m_j| < n/4,
    where smooth partitions and half-spectrum potentials make the lattice
    identity accurate to spectral order.  The verdict is two-sided: the
    reported gap is minus the spectral norm of the residual.
    """
    if np.max(np.abs(eta.values ** 2 + theta.values ** 2 - 1)) > 1e-12:
        raise PartitionError("eta^2 + theta^2 differs from 1")
    X = magnetic_schrodinger(grid, A, basis="scalar")
    M = X.data
    e, t = eta.values.reshape(-1), theta.values.reshape(-1)
    err = (_grad_sq(eta) + _grad_sq(theta)).reshape(-1)
    rhs = e[:, None] * M * e[None, :] + t[:, None] * M * t[None, :] - np.diag(err)
    R = DenseHermitian(M - rhs, "scalar", grid).compress(grid.half_spectrum_mask())
    res = float(np.linalg.norm(R, 2))
    return _verdict("ims", seed, -res, X.norm(), rel_tol)


# --------------------------------------------------------------------------
# randomized suites
# --------------------------------------------------------------------------

def instance_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _trial_pullout(rng, iseed):
    dim, terms = int(rng.integers(4, 13)), int(rng.integers(2, 5))
    s = float(rng.uniform(0.05, 0.95))
    S = random_partition(rng, dim, terms)
    A = [random_psd(rng, dim) for _ in range(terms)]
    return pullout_check(S, A, s, iseed)


def _trial_bks(rng, iseed):
    dim = int(rng.integers(4, 13))
    s = float(rng.choice([1 / 3, 1 / 2, 2 / 3]))
    return bks_check(random_psd(rng, dim), random_psd(rng, dim), s, iseed)


def _ordered_pair(rng, rank_one: bool):
    dim = int(rng.integers(4, 13))
    B = random_psd(rng, dim)
    P = random_psd(rng, dim, rank=1 if rank_one else None)
    return B + P, B


def _trial_monotonicity(rng, iseed):
    A, B = _ordered_pair(rng, rank_one=bool(rng.integers(2)))
    return monotonicity_check(A, B, float(rng.uniform(0.05, 1.0)), iseed)


def _trial_monotonicity_control(rng, iseed):
    A, B = _ordered_pair(rng, rank_one=True)
    v = monotonicity_check(A, B, 2.0, iseed)
    return OracleVerdict("monotonicity_control", v.seed, v.min_eigenvalue_of_gap, v.tolerance, v.passed)


def _trial_trace_sum(rng, iseed):
    dim, terms = int(rng.integers(4, 13)), int(rng.integers(2, 5))
    return trace_sum_lemma_check([random_hermitian(rng, dim) for _ in range(terms)], iseed)


def _trial_trace_product(rng, iseed):
    dim, terms = int(rng.integers(4, 13)), int(rng.integers(2, 5))
    S = random_partition(rng, dim, terms)
    # shrinking keeps sum S_n^2 <= 1 and exercises the strict case
    shrink = float(rng.uniform(0.5, 1.0))
    return trace_product_lemma_check([shrink * x for x in S], random_hermitian(rng, dim), iseed)


TRIALS: dict[str, Callable] = {
    "pullout": _trial_pullout,
    "bks": _trial_bks,
    "monotonicity": _trial_monotonicity,
    "monotonicity_control": _trial_monotonicity_control,
    "trace_sum": _trial_trace_sum,
    "trace_product": _trial_trace_product,
}


@dataclass(frozen=True)
class OracleSummary:
    name: str
    trials: int
    seed: int
    failures: int
    failure_seeds: tuple[int, ...]
    worst_gap_ratio: float
    verdicts: tuple[OracleVerdict, ...]

    def as_dict(self, include_trials: bool = False) -> dict:
        out = {
            "name": self.name, "trials": self.trials, "seed": self.seed,
            "failures": self.failures, "failure_seeds": list(self.failure_seeds),
            "worst_gap_ratio": self.worst_gap_ratio,
        }
        if include_trials:
            out["verdicts"] = [v.as_dict() for v in self.verdicts]
        return out


def run_oracle(name: str, trials: int = 500, seed: int = 7) -> OracleSummary:
    """Run ``trials`` random instances of the named oracle.

    ``worst_gap_ratio`` is the smallest gap divided by its tolerance; values
    below -1 are failures.
    """
    try:
        trial = TRIALS[name]
    except KeyError:
        raise DomainError(f"unknown oracle {name!r}; known: {sorted(TRIALS)}") from None
    verdicts = []
    for i in range(trials):
        iseed = instance_seed(seed, i)
        verdicts.append(trial(np.random.default_rng(iseed), iseed))
    fails = tuple(v.seed for v in verdicts if not v.passed)
    worst = min(v.min_eigenvalue_of_gap / v.tolerance for v in verdicts) if verdicts else 0.0
    return OracleSummary(name, trials, seed, len(fails), fails, float(worst), tuple(verdicts))
