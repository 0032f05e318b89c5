"""Exponential radial partitions of unity and the localization inequality on the lattice.

The shells have inner length ``b`` and grow geometrically with base ``l``;
breakpoints are s_n = b (l^(n+1) - 1) / (l - 1).  Profiles are evaluated
node by node from |x|, so the partition identity holds to rounding at every
lattice site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import localization_error, localization_error_partial, localization_step
from .errors import DomainError, PartitionError
from .fields import GridSpec, VectorField
from .operators import DenseHermitian, kinetic_energy

PARTITION_TOL = 1e-12


def breakpoints(b: float, l: float, count: int) -> np.ndarray:
    """s_0, ..., s_{count-1}."""
    n = np.arange(count)
    return b * (l ** (n + 1) - 1) / (l - 1)


def shell_profile(t, n: int, b: float, l: float) -> np.ndarray:
    """phi_n at radii ``t``."""
    t = np.asarray(t, dtype=float)
    s = breakpoints(b, l, n + 2)
    out = np.zeros_like(t)
    if n == 0:
        out[t <= b] = 1.0
        rise_lo, fall_lo, fall_hi = None, b, s[0] + b * l
        w_fall = 2 * b * l
    else:
        rise_lo, fall_lo, fall_hi = s[n - 1], s[n], s[n + 1]
        w_rise, w_fall = 2 * b * l ** n, 2 * b * l ** (n + 1)
        rise = (t >= rise_lo) & (t <= fall_lo)
        out[rise] = np.sin(np.pi * (t[rise] - rise_lo) / w_rise)
    fall = (t > fall_lo) & (t <= fall_hi)
    out[fall] = np.cos(np.pi * (t[fall] - fall_lo) / w_fall)
    return out


def shell_profile_derivative(t, n: int, b: float, l: float) -> np.ndarray:
    """d phi_n / dt at radii ``t`` (right derivative at breakpoints)."""
    t = np.asarray(t, dtype=float)
    s = breakpoints(b, l, n + 2)
    out = np.zeros_like(t)
    if n == 0:
        fall_lo, fall_hi, w_fall = b, s[1], 2 * b * l
    else:
        rise_lo, fall_lo, fall_hi = s[n - 1], s[n], s[n + 1]
        w_rise, w_fall = 2 * b * l ** n, 2 * b * l ** (n + 1)
        rise = (t >= rise_lo) & (t < fall_lo)
        out[rise] = np.pi / w_rise * np.cos(np.pi * (t[rise] - rise_lo) / w_rise)
    fall = (t >= fall_lo) & (t < fall_hi)
    out[fall] = -np.pi / w_fall * np.sin(np.pi * (t[fall] - fall_lo) / w_fall)
    return out


def derivative_bound(n: int, b: float, l: float) -> float:
    """sup |phi_n'|: pi/(2 b l^n) for n >= 1 and pi/(2 b l) for n = 0."""
    return math.pi / (2 * b * l ** max(n, 1))


def tail_profile(t, N: int, b: float, l: float) -> np.ndarray:
    """theta_N = (sum_{n > N} phi_n^2)^(1/2) in closed form."""
    t = np.asarray(t, dtype=float)
    s = breakpoints(b, l, N + 2)
    out = np.where(t > s[N + 1], 1.0, 0.0)
    mid = (t > s[N]) & (t <= s[N + 1])
    out[mid] = np.sin(np.pi * (t[mid] - s[N]) / (2 * b * l ** (N + 1)))
    return out


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Shell profiles phi_0..phi_N and closure tail theta_N sampled on a lattice.

    Attributes
    ----------
    count : int
        Number of shells N + 1.
    phi : ndarray, shape (count, n, n, n)
    theta : ndarray, shape (n, n, n)
    s_n : ndarray
        Breakpoints s_0..s_{N+1}.
    requested_count : int
        The count asked for; differs from ``count`` when shells were added to
        reach the lattice corners.
    """

    b: float
    l: float
    count: int
    grid: GridSpec
    phi: np.ndarray
    theta: np.ndarray
    s_n: np.ndarray
    requested_count: int

    @property
    def extended(self) -> bool:
        return self.count != self.requested_count

    @property
    def N(self) -> int:
        return self.count - 1

    def chi(self, n: int) -> np.ndarray:
        """Indicator of the support [s_{n-1}, s_{n+1}] of phi_n (s_{-1} = 0)."""
        r = self.grid.radius()
        lo = 0.0 if n == 0 else self.s_n[n - 1]
        return (r >= lo) & (r <= self.s_n[n + 1])

    def omega(self) -> np.ndarray:
        """Indicator of |x| >= b."""
        return self.grid.radius() >= self.b

    def residual(self) -> float:
        return float(np.max(np.abs(np.sum(self.phi ** 2, axis=0) + self.theta ** 2 - 1)))

    def shells_meeting_box(self) -> int:
        """Number of profiles (tail included) that are nonzero somewhere on the lattice."""
        return int(np.sum(np.any(self.phi != 0, axis=(1, 2, 3))) + np.any(self.theta != 0))


def build_partition(b: float, l: float, count: int, grid: GridSpec) -> PartitionOfUnity:
    """Sample the exponential partition on ``grid``.

    ``count`` is raised until s_{N+1} reaches the largest lattice radius, so
    that the closure tail is never identically one on an outer region.
    """
    if not b > 0:
        raise DomainError(f"need b > 0, got {b}")
    if not l > 1:
        raise DomainError(f"need l > 1, got {l}")
    if count < 1:
        raise DomainError(f"need count >= 1, got {count}")
    r = grid.radius()
    rmax = float(np.max(r))
    requested = count
    while breakpoints(b, l, count + 1)[count] < rmax:
        count += 1
    phi = np.stack([shell_profile(r, n, b, l) for n in range(count)])
    theta = tail_profile(r, count - 1, b, l)
    part = PartitionOfUnity(b, l, count, grid, phi, theta, breakpoints(b, l, count + 1), requested)
    if part.residual() > PARTITION_TOL:
        raise PartitionError(f"partition residual {part.residual():.3e} exceeds {PARTITION_TOL}")
    return part


def b_for_shells(grid: GridSpec, l: float, shells: int = 3) -> float:
    """Inner length b for which at least ``shells`` profiles meet the lattice.

    Chosen so that s_{shells-2} sits at half the inscribed radius.
    """
    target = 0.5 * 0.5 * grid.box
    return target * (l - 1) / (l ** (shells - 1) - 1)


@dataclass(frozen=True)
class LocalizationVerdict:
    """Outcome of the lattice localization inequality."""

    name: str
    min_eigenvalue_of_gap: float
    tolerance: float
    passed: bool
    s: float
    b: float
    l: float
    count: int
    errors: tuple[float, ...]


ERROR_MODES = ("printed", "accumulated")


def shell_errors(s: float, partition: "PartitionOfUnity", mode: str = "printed") -> np.ndarray:
    """Per-shell error constants.

    ``printed`` uses the closed form D_n^2s of :func:`localization_error`;
    ``accumulated`` uses sum_{m=n}^{N+1} C_m^2s, the error the iterated
    two-set splitting actually produces.  The two differ by a factor l^2s in
    the limit N -> infinity.
    """
    b, l, N = partition.b, partition.l, partition.N
    if mode == "printed":
        return np.array([localization_error(s, b, l, n) for n in range(N + 1)])
    if mode == "accumulated":
        return np.array([localization_error_partial(s, b, l, n, N) for n in range(N + 1)])
    raise DomainError(f"mode must be one of {ERROR_MODES}, got {mode!r}")


def localization_gap(X: DenseHermitian, s: float, partition: PartitionOfUnity,
                     mode: str = "printed") -> np.ndarray:
    """X - sum phi_n (X - e_n) phi_n - theta_N (X - C_{N+1}^2s) theta_N with e_n from :func:`shell_errors`."""
    spin = 2 if X.basis == "spinor" else 1
    M = X.data
    b, l, N = partition.b, partition.l, partition.N
    errs = shell_errors(s, partition, mode)
    rhs = np.zeros_like(M)
    diag = np.zeros(M.shape[0])

    def weight(f):
        return np.tile(f.reshape(-1), spin)

    for n in range(partition.count):
        w = weight(partition.phi[n])
        rhs += w[:, None] * M * w[None, :]
        diag += w * w * errs[n]
    w = weight(partition.theta)
    rhs += w[:, None] * M * w[None, :]
    diag += w * w * localization_step(s, b, l, N + 1)
    return M - rhs + np.diag(diag)


def localization_inequality_check(
    grid: GridSpec,
    A: VectorField | None,
    s: float,
    partition: PartitionOfUnity,
    kind: str = "pauli",
    mode: str = "printed",
    rel_tol: float = 1e-8,
) -> LocalizationVerdict:
    """Test |P_A|^2s >= sum phi_n (|P_A|^2s - e_n) phi_n + theta_N (|P_A|^2s - C_{N+1}^2s) theta_N.

    The verdict passes when the smallest eigenvalue of the difference is at
    least ``-rel_tol * || |P_A|^2s ||``.
    """
    if partition.grid != grid:
        raise PartitionError("partition was sampled on a different grid")
    X = kinetic_energy(kind, grid, s, A)
    gap = localization_gap(X, s, partition, mode)
    m = float(np.linalg.eigvalsh(gap)[0])
    tol = rel_tol * X.norm()
    errors = tuple(float(e) for e in shell_errors(s, partition, mode))
    return LocalizationVerdict(f"localization[{mode}]", m, tol, m >= -tol, s, partition.b, partition.l,
                               partition.count, errors)
