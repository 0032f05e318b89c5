"""Periodic-lattice fields, spectral calculus and Biot-Savart reconstruction.

Fields live on a uniform n^3 lattice covering the periodic box
[-l/2, l/2)^3.  Derivatives are exact Fourier multipliers.  For real fields
the Nyquist wavenumber has no real derivative, so the derivative multipliers
zero it; operators built on the lattice (see :mod:`hltlab.operators`) use the
full set of wavenumbers instead.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridMismatchError

REAL_TOL = 1e-13


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic lattice with n points per axis on a box of side ``box``.

    With ``offset`` the nodes sit at half-cell positions so none coincides
    with the origin.
    """

    n: int
    box: float
    offset: bool = True

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or self.n % 2:
            raise DomainError(f"n must be an even integer >= 4, got {self.n!r}")
        if not self.box > 0:
            raise DomainError(f"box must be positive, got {self.box!r}")

    @property
    def spacing(self) -> float:
        return self.box / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** 3

    @property
    def sites(self) -> int:
        return self.n ** 3

    @property
    def coords(self) -> np.ndarray:
        j = np.arange(self.n)
        return (j + 0.5 * self.offset) * self.spacing - 0.5 * self.box

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.coords
        return tuple(np.meshgrid(x, x, x, indexing="ij"))

    def radius(self) -> np.ndarray:
        x, y, z = self.mesh()
        return np.sqrt(x * x + y * y + z * z)

    @property
    def mode_indices(self) -> np.ndarray:
        """Integer m in FFT order; the set is {-n/2, ..., n/2-1}."""
        return np.rint(np.fft.fftfreq(self.n) * self.n).astype(int)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * self.mode_indices / self.box

    @property
    def derivative_wavenumbers(self) -> np.ndarray:
        k = self.wavenumbers.copy()
        k[self.n // 2] = 0.0
        return k

    def kmesh(self, derivative: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = self.derivative_wavenumbers if derivative else self.wavenumbers
        return tuple(np.meshgrid(k, k, k, indexing="ij"))

    def nyquist_mask(self) -> np.ndarray:
        """True on modes that carry the Nyquist index along some axis."""
        ny = np.zeros(self.n, dtype=bool)
        ny[self.n // 2] = True
        return ny[:, None, None] | ny[None, :, None] | ny[None, None, :]

    def half_spectrum_mask(self) -> np.ndarray:
        """True on modes with |m_j| < n/4 along every axis."""
        ok = np.abs(self.mode_indices) < self.n // 4
        return ok[:, None, None] & ok[None, :, None] & ok[None, None, :]

    def rescaled(self, factor: float) -> "GridSpec":
        return GridSpec(self.n, self.box * factor, self.offset)

    def as_dict(self) -> dict:
        return {"n": int(self.n), "box": float(self.box), "offset": bool(self.offset)}


def make_grid(n: int, box: float = 2 * math.pi, offset: bool = True) -> GridSpec:
    return GridSpec(int(n), float(box), bool(offset))


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Field:
    """Samples of a multi-component field, stored as ``(components, n, n, n)``.

    The array is made read-only on construction.
    """

    grid: GridSpec
    data: np.ndarray
    components: int = field(init=False, default=1)
    real: bool = field(init=False, default=True)

    def __post_init__(self):
        n = self.grid.n
        arr = np.asarray(self.data)
        if arr.shape == (n, n, n) and self.components == 1:
            arr = arr[None]
        if arr.shape != (self.components, n, n, n):
            raise DomainError(
                f"{type(self).__name__} expects shape {(self.components, n, n, n)}, got {arr.shape}")
        if self.real:
            if np.iscomplexobj(arr):
                scale = np.max(np.abs(arr)) if arr.size else 0.0
                if np.max(np.abs(arr.imag), initial=0.0) > REAL_TOL * max(scale, 1e-300):
                    raise DomainError(f"{type(self).__name__} must be real-valued")
                arr = arr.real
            arr = np.array(arr, dtype=np.float64)
        else:
            arr = np.array(arr, dtype=np.complex128)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    def magnitude(self) -> np.ndarray:
        """Pointwise Euclidean norm over components."""
        return np.sqrt(np.sum(np.abs(self.data) ** 2, axis=0))

    def flat(self) -> np.ndarray:
        """Site-major, component-fastest flattening used by field files."""
        return np.moveaxis(self.data, 0, -1).reshape(-1)

    def replace(self, data=None, grid=None) -> "Field":
        return type(self)(self.grid if grid is None else grid,
                          self.data if data is None else data)

    def __add__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return self.replace(self.data + other.data)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return self.replace(self.data - other.data)

    def __mul__(self, c: float) -> "Field":
        return self.replace(self.data * c)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return self.replace(-self.data)


@dataclass(frozen=True, eq=False)
class ScalarField(Field):
    components: int = field(init=False, default=1)
    real: bool = field(init=False, default=True)

    @property
    def values(self) -> np.ndarray:
        return self.data[0]


@dataclass(frozen=True, eq=False)
class ComplexScalarField(Field):
    components: int = field(init=False, default=1)
    real: bool = field(init=False, default=False)

    @property
    def values(self) -> np.ndarray:
        return self.data[0]


@dataclass(frozen=True, eq=False)
class VectorField(Field):
    components: int = field(init=False, default=3)
    real: bool = field(init=False, default=True)


@dataclass(frozen=True, eq=False)
class SpinorField(Field):
    components: int = field(init=False, default=2)
    real: bool = field(init=False, default=False)


FIELD_TYPES = {1: ScalarField, 2: SpinorField, 3: VectorField}


def _check_same_grid(*fields: Field) -> None:
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatchError(f"grids differ: {g} vs {f.grid}")


def lp_norm(f: Field | np.ndarray, p: float, grid: GridSpec | None = None) -> float:
    """Discrete L^p norm (h^3 sum |f|^p)^(1/p); ``p = inf`` gives the max.

    Multi-component fields use the pointwise Euclidean magnitude.  A bare
    array needs ``grid`` for the cell volume.
    """
    if p < 1:
        raise DomainError(f"need p >= 1, got {p}")
    if isinstance(f, Field):
        mag, grid = f.magnitude(), f.grid
    else:
        mag = np.abs(np.asarray(f))
    if np.isinf(p):
        return float(np.max(mag))
    vol = grid.cell_volume
    m = np.max(mag)
    if m == 0:
        return 0.0
    # factor out the max to avoid overflow for large p
    return float(m * (vol * np.sum((mag / m) ** p)) ** (1.0 / p))


# --------------------------------------------------------------------------
# spectral calculus
# --------------------------------------------------------------------------

def _fft(a):
    return np.fft.fftn(a, axes=(-3, -2, -1))


def _ifft(a):
    return np.fft.ifftn(a, axes=(-3, -2, -1))


def _restore_dtype(out, like_real: bool):
    return out.real if like_real else out


def spectral_derivative(f: Field, axis: int) -> Field:
    """Exact derivative along ``axis`` via the Fourier multiplier i k."""
    k = f.grid.kmesh()[axis]
    out = _ifft(1j * k * _fft(f.data))
    return f.replace(_restore_dtype(out, f.real))


def gradient(f: ScalarField) -> VectorField:
    fh = _fft(f.values)
    out = np.stack([_ifft(1j * k * fh) for k in f.grid.kmesh()])
    return VectorField(f.grid, out.real)


def curl(A: VectorField) -> VectorField:
    kx, ky, kz = A.grid.kmesh()
    ax, ay, az = _fft(A.data)
    out = np.stack([
        1j * (ky * az - kz * ay),
        1j * (kz * ax - kx * az),
        1j * (kx * ay - ky * ax),
    ])
    return VectorField(A.grid, _ifft(out).real)


def divergence(A: VectorField) -> ScalarField:
    kx, ky, kz = A.grid.kmesh()
    ah = _fft(A.data)
    out = _ifft(1j * (kx * ah[0] + ky * ah[1] + kz * ah[2]))
    return ScalarField(A.grid, out.real)


def _resolved_modes(grid: GridSpec) -> np.ndarray:
    """Modes on which the real-field calculus is invertible: k != 0 and no Nyquist index."""
    mask = ~grid.nyquist_mask()
    mask[0, 0, 0] = False
    return mask


def solenoidal_projection(B: VectorField) -> VectorField:
    """Divergence-free, mean-free part of B on the resolved modes."""
    kx, ky, kz = B.grid.kmesh()
    k2 = kx * kx + ky * ky + kz * kz
    keep = _resolved_modes(B.grid)
    bh = _fft(B.data)
    with np.errstate(invalid="ignore", divide="ignore"):
        kdotb = np.where(keep, (kx * bh[0] + ky * bh[1] + kz * bh[2]) / k2, 0)
    out = np.stack([np.where(keep, bh[i] - k * kdotb, 0) for i, k in enumerate((kx, ky, kz))])
    return VectorField(B.grid, _ifft(out).real)


@dataclass(frozen=True)
class BiotSavartReport:
    divergence_ratio: float
    projected: bool
    mean_removed: bool
    nyquist_removed: bool


def biot_savart_with_report(B: VectorField) -> tuple[VectorField, BiotSavartReport]:
    """Periodic vector potential A with curl A = B, div A = 0 and zero mean.

    Solves A^(k) = i k x B^(k) / |k|^2 on every mode with k != 0 and no
    Nyquist index.  The report records whether B had to be projected onto
    its solenoidal part (relative divergence above 1e-8) and whether a mean
    or Nyquist component was dropped.
    """
    g = B.grid
    bnorm = lp_norm(B, 2)
    div_ratio = lp_norm(divergence(B), 2) / bnorm if bnorm > 0 else 0.0
    bh = _fft(B.data)
    scale = np.max(np.abs(bh)) if bnorm > 0 else 0.0
    tol = 1e-12 * max(scale, 1e-300)
    mean_removed = bool(np.max(np.abs(bh[:, 0, 0, 0])) > tol)
    nyquist_removed = bool(np.max(np.abs(bh[:, g.nyquist_mask()]), initial=0.0) > tol)

    kx, ky, kz = g.kmesh()
    k2 = kx * kx + ky * ky + kz * kz
    keep = _resolved_modes(g)
    with np.errstate(invalid="ignore", divide="ignore"):
        inv = np.where(keep, 1.0 / k2, 0.0)
    # the cross product with k annihilates the longitudinal part, so this is
    # already the potential of the solenoidal projection
    ah = np.stack([
        1j * (ky * bh[2] - kz * bh[1]),
        1j * (kz * bh[0] - kx * bh[2]),
        1j * (kx * bh[1] - ky * bh[0]),
    ]) * inv
    A = VectorField(g, _ifft(ah).real)
    report = BiotSavartReport(float(div_ratio), bool(div_ratio > 1e-8), mean_removed, nyquist_removed)
    return A, report


def biot_savart(B: VectorField) -> VectorField:
    return biot_savart_with_report(B)[0]


def spectral_refine(f: Field, factor: int) -> Field:
    """Trigonometric interpolation of ``f`` onto a lattice ``factor`` times finer.

    Nyquist modes are dropped since they have no unique interpolant.
    """
    g = f.grid
    fine = GridSpec(g.n * factor, g.box, g.offset)
    k = g.wavenumbers
    x0 = g.coords[0]
    ph = np.exp(-1j * k * x0)
    coef = _fft(f.data) / g.sites
    coef = coef * ph[:, None, None] * ph[None, :, None] * ph[None, None, :]
    coef[:, g.nyquist_mask()] = 0.0
    # place coefficients into the fine spectrum
    N = fine.n
    idx = np.where(g.mode_indices < 0, g.mode_indices + N, g.mode_indices)
    big = np.zeros((f.components, N, N, N), dtype=complex)
    big[np.ix_(range(f.components), idx, idx, idx)] = coef
    kf = fine.wavenumbers
    y0 = fine.coords[0]
    phf = np.exp(1j * kf * y0)
    big = big * phf[:, None, None] * phf[None, :, None] * phf[None, None, :]
    out = _ifft(big) * fine.sites
    return type(f)(fine, out.real if f.real else out)


def sup_norm_refined(f: Field, factor: int = 4) -> float:
    """Estimate of the continuum sup norm from a refined trigonometric interpolant."""
    return max(lp_norm(f, np.inf), lp_norm(spectral_refine(f, factor), np.inf))


def rescale_field(f: Field, factor: float, weight: float = 1.0) -> Field:
    """Same samples on the box shrunk by ``factor``, multiplied by ``weight``.

    Realizes f(x) -> weight * f(factor * x) on the lattice.
    """
    return type(f)(f.grid.rescaled(1.0 / factor), f.data * weight)


# --------------------------------------------------------------------------
# rotor Sobolev ratio
# --------------------------------------------------------------------------

#: running maximum of the rotor ratio, keyed by the index of A
ROTOR_ENVELOPE: dict[float, float] = {}


def rotor_sobolev_ratio(B: VectorField, r: float, record: bool = True) -> float:
    """||A||_r / ||B||_{3r/(3+r)} with A the periodic Biot-Savart potential of B."""
    if r <= 1.5:
        raise DomainError(f"need r > 3/2, got {r}")
    bn = lp_norm(B, 3 * r / (3 + r))
    if bn == 0:
        raise DomainError("B vanishes identically")
    ratio = lp_norm(biot_savart(B), r) / bn
    if record:
        ROTOR_ENVELOPE[float(r)] = max(ROTOR_ENVELOPE.get(float(r), 0.0), ratio)
    return ratio


@functools.lru_cache(maxsize=None)
def default_rotor_constant(r: float, samples: int = 48, n: int = 16) -> float:
    """Deterministic empirical torus envelope of the rotor ratio at index ``r``.

    The maximum over a fixed seeded family of smooth solenoidal fields on a
    2*pi box.  This is a lattice quantity and is not claimed to bound the
    whole-space constant.
    """
    grid = make_grid(n, 2 * math.pi)
    best = 0.0
    for seed in range(samples):
        width = 0.25 + 0.75 * (seed % 4) / 3
        B = generate_field(seed, "B", grid, width=width)
        best = max(best, rotor_sobolev_ratio(B, r, record=False))
    return best


# --------------------------------------------------------------------------
# potentials and generators
# --------------------------------------------------------------------------

def hardy_potential(grid: GridSpec, s: float, cap: float = np.inf) -> ScalarField:
    """Samples of min(|x|^{-2s}, cap), without the Hardy constant."""
    if not cap > 0:
        raise DomainError(f"cap must be positive, got {cap}")
    if not 0 < s <= 1.5:
        raise DomainError(f"need 0 < s <= 3/2, got {s}")
    r = grid.radius()
    if np.isinf(cap) and np.min(r) == 0:
        raise DomainError("uncapped Hardy weight is singular at the origin node; use an offset grid")
    with np.errstate(divide="ignore"):
        w = np.minimum(r ** (-2 * s), cap)
    return ScalarField(grid, w)


def bandlimit_field(f: Field, bandlimit: str | None = "half") -> Field:
    """Remove Nyquist modes, and with ``"half"`` everything with |m_j| >= n/4."""
    g = f.grid
    keep = ~g.nyquist_mask()
    if bandlimit == "half":
        keep &= g.half_spectrum_mask()
    elif bandlimit is not None:
        raise DomainError(f"bandlimit must be 'half' or None, got {bandlimit!r}")
    out = _ifft(np.where(keep, _fft(f.data), 0))
    return f.replace(out.real if f.real else out)


def _bumps(rng, grid: GridSpec, count: int, width: float, components: int, complex_amp: bool):
    """Superposition of periodized Gaussian bumps with random centres and amplitudes."""
    x = grid.coords
    L = grid.box
    sig = width * L / (2 * math.pi)
    out = np.zeros((components, grid.n, grid.n, grid.n), dtype=complex if complex_amp else float)
    for _ in range(count):
        c = rng.uniform(-L / 2, L / 2, size=3)
        amp = rng.normal(size=components)
        if complex_amp:
            amp = amp + 1j * rng.normal(size=components)
        prof = []
        for ax in range(3):
            d = (x - c[ax] + L / 2) % L - L / 2
            prof.append(np.exp(-0.5 * (d / sig) ** 2))
        shape = prof[0][:, None, None] * prof[1][None, :, None] * prof[2][None, None, :]
        out += amp[:, None, None, None] * shape
    return out


GENERATOR_KINDS = ("V", "A", "B", "psi")


def generate_field(
    seed: int,
    kind: str,
    grid: GridSpec,
    *,
    bumps: int = 3,
    width: float = 0.6,
    amplitude: float = 1.0,
    negative: bool = False,
    bandlimit: str | None = None,
    solenoidal: bool = True,
) -> Field:
    """Seeded smooth random field.

    Parameters
    ----------
    seed : int
        Seed for ``numpy.random.default_rng``; equal seeds give bitwise equal fields.
    kind : {"V", "A", "B", "psi"}
        Real potential, real vector potential, magnetic field ``curl A``, or
        an L^2-normalized spinor.
    width : float
        Bump width in units where the box has side 2*pi.
    amplitude : float
        Sup norm of the result (V, A, B); ignored for ``psi``.
    negative : bool
        For ``V``, shift down so that ``max V <= 0``.
    bandlimit : {"half", None}
        Spectral support; Nyquist modes are always removed.
    solenoidal : bool
        For ``A``, project onto divergence-free, mean-free fields.
    """
    if kind not in GENERATOR_KINDS:
        raise DomainError(f"kind must be one of {GENERATOR_KINDS}, got {kind!r}")
    rng = np.random.default_rng(seed)
    if kind == "V":
        f = bandlimit_field(ScalarField(grid, _bumps(rng, grid, bumps, width, 1, False)), bandlimit)
        v = f.data / np.max(np.abs(f.data)) * amplitude
        if negative:
            v = v - max(0.0, float(np.max(v)))
        return ScalarField(grid, v)
    if kind == "psi":
        raw = _bumps(rng, grid, bumps, width, 2, True)
        f = bandlimit_field(SpinorField(grid, raw), bandlimit)
        return f * (1.0 / lp_norm(f, 2))
    A = bandlimit_field(VectorField(grid, _bumps(rng, grid, bumps, width, 3, False)), bandlimit)
    if kind == "B":
        out = curl(A)
    elif solenoidal:
        out = solenoidal_projection(A)
    else:
        out = A
    m = lp_norm(out, np.inf)
    return out * (amplitude / m) if m > 0 else out
