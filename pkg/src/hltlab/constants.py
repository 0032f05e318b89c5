"""Explicit constants and constant-functions of the fractional Pauli estimates.

Everything here is a pure function of its arguments.  Constants defined as
infima over auxiliary parameters are evaluated by a log-grid scan followed by
one pass of coordinate descent; the returned number is the best objective
value found, hence always an upper bound for the true infimum.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError

#: CLR constant L_3 used by the running-energy-scale argument.
CLR_CONSTANT = 0.1156

#: Optimal constant in ||f||_6 <= S ||p f||_2 on R^3.
SOBOLEV_CONSTANT = (2.0 / math.pi) ** (2.0 / 3.0) / math.sqrt(3.0)

QUAD_TOL = 1e-12

BETA_GRID = np.logspace(-6.0, 6.0, 61)
UNIT_GRID = np.linspace(0.0, 1.0, 51)[1:-1]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def hardy_constant(s: float, d: int = 3) -> float:
    """Critical constant of |p|^{2s} >= C/|x|^{2s} in d dimensions."""
    _require(s > 0 and d - 2 * s > 0, f"need 0 < 2s < d, got s={s}, d={d}")
    num = special.gammaln((d + 2 * s) / 4.0)
    den = special.gammaln((d - 2 * s) / 4.0)
    return float(2.0 ** (2 * s) * math.exp(2.0 * (num - den)))


def semiclassical_constant(gamma: float, d: int = 3) -> float:
    """Phase-space constant L^c_{gamma,d} = 2^-d pi^-d/2 G(g+1)/G(g+1+d/2)."""
    _require(gamma >= 0 and d >= 1, f"need gamma >= 0 and d >= 1, got {gamma}, {d}")
    log_ratio = special.gammaln(gamma + 1) - special.gammaln(gamma + 1 + d / 2.0)
    return float(2.0 ** (-d) * math.pi ** (-d / 2.0) * math.exp(log_ratio))


def clr_constant() -> float:
    return CLR_CONSTANT


def resolvent_constant(alpha: float) -> float:
    """sin(pi a)/pi, the prefactor of A^a = c int_0^inf A (A+t)^-1 t^(a-1) dt."""
    _require(0 < alpha <= 1, f"need 0 < alpha <= 1, got {alpha}")
    return math.sin(math.pi * alpha) / math.pi


def fractional_sobolev_constant(N: int, r: float) -> float:
    """Optimal constant in ||f||_r <= S_{N,r} || |p|^{(1/2-1/r)N} f ||_2."""
    _require(N >= 1 and r >= 2, f"need N >= 1 and r >= 2, got N={N}, r={r}")
    a = 0.5 - 1.0 / r
    log_val = (
        -N * a * math.log(2.0)
        - 0.5 * N * a * math.log(math.pi)
        + 0.5 * (special.gammaln(N / r) - special.gammaln(N * (1.0 - 1.0 / r)))
        + a * (special.gammaln(N) - special.gammaln(N / 2.0))
    )
    return float(math.exp(log_val))


def du_max(u: float) -> float:
    """max over x >= 0 of x^(1-u)/(x^2+1)."""
    _require(0 <= u <= 1, f"need 0 <= u <= 1, got {u}")
    a, b = 1.0 - u, 1.0 + u
    # 0**0 := 1 at the u = 1 endpoint
    pa = a ** (a / 2.0) if a > 0 else 1.0
    return 0.5 * pa * b ** (b / 2.0)


def pauli_sobolev_remainder(eps: float, r: float) -> float:
    """omega(eps, r), the coefficient of ||B||_r^{2r/(2r-3)} in the Pauli-Sobolev bound."""
    _require(0 < eps < 1, f"need 0 < eps < 1, got {eps}")
    _require(r > 1.5, f"need r > 3/2, got {r}")
    S = SOBOLEV_CONSTANT
    q = 2 * r - 3
    num = S ** (4 * r / q) * 3.0 ** (3.0 / q) * q
    den = (1 - eps) * (2 * r) ** (2 * r / q) * eps ** (3.0 / q)
    return num / den


# --------------------------------------------------------------------------
# infimum machinery
# --------------------------------------------------------------------------

def _finite_or_inf(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.isfinite(x), x, np.inf)


def scan_minimize(
    objective: Callable[..., np.ndarray],
    grids: Sequence[np.ndarray],
    log_axes: Sequence[bool],
) -> tuple[float, tuple[float, ...]]:
    """Minimize a vectorized objective by a tensor-grid scan plus coordinate descent.

    ``objective`` must broadcast over its arguments.  Axes flagged in
    ``log_axes`` are positive half-lines refined in log10 space; the others
    are refined on the open unit interval.
    """
    mesh = np.meshgrid(*grids, indexing="ij", sparse=True)
    with np.errstate(all="ignore"):
        vals = _finite_or_inf(objective(*mesh))
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    best = float(vals[idx])
    point = [float(g[i]) for g, i in zip(grids, idx)]
    if not np.isfinite(best):
        raise DomainError("objective is not finite anywhere on the scan grid")

    for axis, is_log in enumerate(log_axes):
        def f1(t, axis=axis, is_log=is_log):
            args = list(point)
            args[axis] = 10.0 ** t if is_log else t
            with np.errstate(all="ignore"):
                v = float(objective(*args))
            return v if math.isfinite(v) else math.inf

        if is_log:
            c = math.log10(point[axis])
            bounds = (c - 1.0, c + 1.0)
        else:
            bounds = (max(point[axis] - 0.04, 1e-12), min(point[axis] + 0.04, 1 - 1e-12))
        res = optimize.minimize_scalar(f1, bounds=bounds, method="bounded",
                                       options={"xatol": 1e-10})
        if res.fun < best:
            best = float(res.fun)
            point[axis] = 10.0 ** res.x if is_log else float(res.x)
    return best, tuple(point)


# --------------------------------------------------------------------------
# Estimate I
# --------------------------------------------------------------------------

def aux_i(s, u, r, delta):
    """Coefficient I(s,u,r,delta) of the Pauli/magnetic resolvent cross term."""
    cs = resolvent_constant(s)
    S = SOBOLEV_CONSTANT
    return (cs * du_max(u) ** (3 / r) * S ** (3 / r) * 0.5
            * (2 * r * (1 - s) - 3 * (1 - u)) / r * (1 - delta) ** (-3 / (4 * r)))


def _omega_delta(delta, r):
    S = SOBOLEV_CONSTANT
    q = 2 * r - 3
    return (S ** (4 * r / q) * 3.0 ** (3.0 / q) * q
            / ((1 - delta) * (2 * r) ** (2 * r / q) * delta ** (3.0 / q)))


def aux_j(s, u, r, delta):
    """Coefficient J(s,u,r,delta); uses omega(delta, r) from the Pauli-Sobolev bound."""
    cs = resolvent_constant(s)
    S = SOBOLEV_CONSTANT
    return (cs * du_max(u) ** (3 / (2 * r)) * S ** (3 / (2 * r)) * 0.25
            * _omega_delta(delta, r) ** (3 / (4 * r))
            * (4 * r * (1 - s) - 3 * (1 - u)) / r)


def theta_objective(s, r, beta, delta):
    """Bracket minimized over (beta, delta) to give Theta(s, r)."""
    cs = resolvent_constant(s)
    return (cs / s * beta ** s
            + aux_i(s, 0.0, r, delta) * beta ** (s + 3 / (2 * r) - 1)
            + aux_j(s, 0.0, r, delta) * beta ** (s + 3 / (4 * r) - 1))


def _eta(s, u, eps, gamma):
    k = s / u
    return eps * (1 - gamma) ** k / (2 ** (k - 1) * (1 + gamma) ** k + (1 - gamma) ** k)


def _upsilon(s, r, beta, delta, gamma):
    cs = resolvent_constant(s)
    return (cs / s * beta ** s
            + (2 * r - 3) / (2 * r) * (3 / (8 * r * gamma)) ** (3 / (2 * r))
            * aux_i(s, s, r, delta) ** (2 * r / (2 * r - 3)) * beta ** (-(1 - s))
            + (4 * r - 3) / (4 * r) * (3 / (2 * r * gamma)) ** (3 / (4 * r - 3))
            * aux_j(s, s, r, delta) ** (4 * r / (4 * r - 3)) * beta ** (-(1 - s)))


def _lambda(s, u, r, beta, delta, eps, gamma):
    cs = resolvent_constant(s)
    eta = _eta(s, u, eps, gamma)
    a = 2 * r * s - 3 * u
    b = 4 * r * s - 3 * u
    return (cs / s * beta ** s
            + a / (2 * r * s) * (3 * u / (8 * r * s * eta)) ** (3 * u / (2 * r * s))
            * aux_i(s, u, r, delta) ** (2 * r * s / a)
            * beta ** ((-2 * r * s * (1 - s) + 3 * s * (1 - u)) / a)
            + b / (4 * r * s) * (3 * u / (2 * r * s * eta)) ** (3 * u / b)
            * aux_j(s, u, r, delta) ** (4 * r * s / b)
            * beta ** ((3 * s * (1 - u) - 4 * r * s * (1 - s)) / b))


def omega_objective(s, u, r, eps, beta, delta, gamma):
    """Bracket minimized over (beta, delta, gamma) to give Omega(s, u, r, eps)."""
    k = s / u
    ups = _upsilon(s, r, beta, delta, gamma)
    first = (2 ** (k - 1) * ups ** k * (1 - gamma) ** k * eps
             / (2 ** (k - 1) * (1 + gamma) ** k + (1 - gamma) ** k))
    return first + _lambda(s, u, r, beta, delta, eps, gamma)


def _check_estimate1_domain(s, u, r):
    _require(0 < s < 1, f"need 0 < s < 1, got {s}")
    _require(0 <= u <= 1, f"need 0 <= u <= 1, got {u}")
    _require(r > 1.5, f"need r > 3/2, got {r}")
    _require(3 * (1 - u) < 2 * r * (1 - s), "need 3(1-u) < 2r(1-s)")


def theta_constant(s: float, r: float) -> float:
    _check_estimate1_domain(s, 0.0, r)
    val, _ = scan_minimize(lambda b, d: theta_objective(s, r, b, d),
                           [BETA_GRID, UNIT_GRID], [True, False])
    return val


def omega_constant(s: float, u: float, r: float, eps: float) -> float:
    _check_estimate1_domain(s, u, r)
    _require(u > 0, "Omega needs u > 0; use Theta for u = 0")
    _require(eps > 0, f"need eps > 0, got {eps}")
    # Young exponents 2rs/(2rs-3u) and 4rs/(4rs-3u) must exceed 1
    _require(2 * r * s > 3 * u, "need 2rs > 3u for the Young step")
    val, _ = scan_minimize(lambda b, d, g: omega_objective(s, u, r, eps, b, d, g),
                           [BETA_GRID, UNIT_GRID, UNIT_GRID], [True, False, False])
    return val


def sobolev_remainder_s1(u: float, r: float, eps: float) -> float:
    """T(u, r, eps) of the s = 1 comparison between Pauli and magnetic kinetic energy."""
    _require(0 < u <= 1, f"need 0 < u <= 1, got {u}")
    _require(r >= 1.5 / u and r > 1.5, f"need r >= 3/(2u) and r > 3/2, got r={r}")
    _require(eps > 0, f"need eps > 0, got {eps}")
    q = 2 * r - 3
    S = fractional_sobolev_constant(3, 6.0 / (3 - 2 * u))
    return q / (2 * r) * (3 / (2 * r * eps)) ** (3 / q) * S ** (6 / (u * q))


class Estimate1Constants(NamedTuple):
    theta: float | None
    omega: float | None
    t_s1: float | None


# --------------------------------------------------------------------------
# Estimate II
# --------------------------------------------------------------------------

def _check_estimate2_domain(s, u, r):
    _require(0 < s < 1, f"need 0 < s < 1, got {s}")
    _require(0 <= u <= 1, f"need 0 <= u <= 1, got {u}")
    _require(1.5 < r < 3, f"need 3/2 < r < 3, got {r}")
    _require(3 * (1 - u) < 2 * r * (1 - s), "need 3(1-u) < 2r(1-s)")


def _default_rotor_constant(r: float) -> float:
    # ||A||_{3r/(3-r)} <= N ||B||_r is the rotor inequality at index 3r/(3-r)
    from .fields import default_rotor_constant
    return default_rotor_constant(3 * r / (3 - r))


def script_i(s: float, r: float, n_r: float | None = None) -> float:
    """Closed form of I(s, r); the coupling condition between s and r is
    enforced by :func:`estimate2_bound_constants`, not here."""
    _require(0 < s < 1, f"need 0 < s < 1, got {s}")
    _require(1.5 < r < 3, f"need 3/2 < r < 3, got {r}")
    n_r = _default_rotor_constant(r) if n_r is None else n_r
    q = 2 * r - 3
    return (resolvent_constant(s) * q * SOBOLEV_CONSTANT ** (2 * s * (3 - r) / q)
            / (r * (1 - s) * s) * 2.0 ** (-(6 * s + q) / q) * n_r ** (2 * r * s / q))


def script_a(s: float, u: float, r: float, n_r: float | None = None) -> float:
    _check_estimate2_domain(s, u, r)
    n_r = _default_rotor_constant(r) if n_r is None else n_r
    q = 2 * r - 3
    w = 2 * r - 3 * (1 - u)
    ru = r * (3 - r) * u * u
    ru_term = ru ** (3 * u / q) if u > 0 else 1.0
    return (resolvent_constant(s) ** (w / q)
            * (2 * r * (1 - s) - 3 * (1 - u)) ** (-w / q)
            * w ** (-3 * u / q)
            * s ** (-w / q)
            * SOBOLEV_CONSTANT ** (2 * s * (3 - r) / q)
            * du_max(u) ** (6 * s / q)
            * n_r ** (2 * r * s / q)
            * q
            * ru_term
            * 2.0 ** ((6 * u + q) / q))


def script_j_objective(s, u, r, eps, delta, n_r):
    k = s / u
    q = 2 * r - 3
    a_suz = script_a(s, u, r, n_r)
    a_uuz = script_a(u, u, r, n_r)
    return (a_suz * eps ** (-6 * u / q)
            * (1 + 2 ** (k - 1) * delta ** k * (1 - delta) ** (-k)) ** (6 * u / q)
            + a_uuz ** k * 2 ** (k - 1) * delta ** (-6 * s / q) * eps
            / ((1 - delta) ** k + 2 ** (k - 1) * delta ** k))


def script_j(s: float, u: float, r: float, eps: float, n_r: float | None = None) -> float:
    _check_estimate2_domain(s, u, r)
    _require(u > 0, "J needs u > 0; use I for u = 0")
    _require(u < 1, "J uses A_{u,u,r}, which needs u < 1")
    _require(eps > 0, f"need eps > 0, got {eps}")
    n_r = _default_rotor_constant(r) if n_r is None else n_r
    val, _ = scan_minimize(lambda d: script_j_objective(s, u, r, eps, d, n_r),
                           [UNIT_GRID], [False])
    return val


class Estimate2Constants(NamedTuple):
    i_const: float | None
    j_const: float | None
    a_const: float
    n_r: float


# --------------------------------------------------------------------------
# queries and tables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantQuery:
    """Parameter bundle for the estimate constants.

    ``gamma`` is the trace-moment exponent; ``gamma_mix`` the splitting
    parameter of the running-energy-scale bound.
    """

    s: float = 0.5
    u: float = 0.0
    r: float = 2.0
    eps: float = 0.5
    gamma_mix: float = 0.5
    d: int = 3
    gamma: float = 1.0
    n_r: float | None = None


def estimate1_bound_constants(q: ConstantQuery) -> Estimate1Constants:
    if q.s == 1:
        return Estimate1Constants(None, None, sobolev_remainder_s1(q.u, q.r, q.eps))
    _check_estimate1_domain(q.s, q.u, q.r)
    if q.u == 0:
        return Estimate1Constants(theta_constant(q.s, q.r), None, None)
    return Estimate1Constants(None, omega_constant(q.s, q.u, q.r, q.eps), None)


def estimate2_bound_constants(q: ConstantQuery) -> Estimate2Constants:
    _check_estimate2_domain(q.s, q.u, q.r)
    n_r = _default_rotor_constant(q.r) if q.n_r is None else q.n_r
    a = script_a(q.s, q.u, q.r, n_r)
    if q.u == 0:
        return Estimate2Constants(script_i(q.s, q.r, n_r), None, a, n_r)
    return Estimate2Constants(None, script_j(q.s, q.u, q.r, q.eps, n_r), a, n_r)


# --------------------------------------------------------------------------
# Pauli-Lieb-Thirring with field energy
# --------------------------------------------------------------------------

def running_energy_integral(s: float, r: float) -> float:
    """int_0^1 lambda^(s-1) (1 - lambda^(r+1))^(3/2) d lambda."""
    _require(s > 0 and r > -1, f"need s > 0 and r > -1, got s={s}, r={r}")
    val, _ = integrate.quad(lambda x: (1.0 - x ** (r + 1)) ** 1.5, 0.0, 1.0,
                            weight="alg", wvar=(s - 1.0, 0.0),
                            epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return float(val)


def plt_field_energy_constants(s: float, gamma_mix: float) -> tuple[float, float]:
    """Return (U, V) for Tr(|P_A|^2s + W)_- <= U int W_-^(1+3/2s) + V (int B^2)^(3/4)(int W_-^4)^(1/4)."""
    _require(0.5 <= s <= 1, f"need 1/2 <= s <= 1, got {s}")
    _require(0 < gamma_mix < 1, f"need 0 < gamma < 1, got {gamma_mix}")
    L = CLR_CONSTANT
    if s == 0.5:
        return 1.5 * math.pi * L, math.pi * L / (2 * 3 ** 0.25)
    g = gamma_mix
    U = math.sqrt(2) * L * s * (1 - g) ** (-s) * running_energy_integral(s, 0.0)
    V = (4 * 3 ** -0.75 * math.sqrt(2) * L * s
         * running_energy_integral(s, 2 * s - 1) ** 0.75
         * running_energy_integral(4 * s - 1.5, 0.0) ** 0.25
         * (1 - g) ** (s - 0.375) * g ** -0.375)
    return U, V


# --------------------------------------------------------------------------
# localization
# --------------------------------------------------------------------------

def localization_step(s: float, b: float, l: float, m: int) -> float:
    """C_m^{2s} = (pi^2 / (2 b^2 l^{2m}))^s, the IMS error of the m-th split."""
    _require(0 < s <= 1 and b > 0 and l > 1 and m >= 0, "need 0<s<=1, b>0, l>1, m>=0")
    return (math.pi ** 2 / (2 * b * b * l ** (2 * m))) ** s


def localization_error(s: float, b: float, l: float, n: int) -> float:
    """D_n^{2s} = pi^2s l^-2sn / (2^s b^2s (l^2s - 1))."""
    _require(0 < s <= 1, f"need 0 < s <= 1, got {s}")
    _require(b > 0, f"need b > 0, got {b}")
    _require(l > 1, f"need l > 1, got {l}")
    _require(n >= 0, f"need n >= 0, got {n}")
    return (math.pi ** (2 * s) * l ** (-2 * s * n)
            / (2 ** s * b ** (2 * s) * (l ** (2 * s) - 1)))


def localization_error_partial(s: float, b: float, l: float, n: int, N: int) -> float:
    """sum_{m=n}^{N+1} C_m^{2s}, the accumulated error of shell n after N+1 splits."""
    _require(0 <= n <= N + 1, f"need 0 <= n <= N+1, got n={n}, N={N}")
    return sum(localization_step(s, b, l, m) for m in range(n, N + 2))


def localization_error_tail(s: float, b: float, l: float, n: int) -> float:
    """sum_{m>=n} C_m^{2s} in closed form; equals l^{2s} times :func:`localization_error`."""
    return l ** (2 * s) * localization_error(s, b, l, n)


def effective_hardy_weight(s: float, l: float) -> float:
    """E_s = C_s + pi^2s l^4s / (2^s (l^2s - 1)(l - 1)^2s); independent of b."""
    _require(0 < s <= 1, f"need 0 < s <= 1, got {s}")
    _require(l > 1, f"need l > 1, got {l}")
    extra = math.pi ** (2 * s) * l ** (4 * s) / (2 ** s * (l ** (2 * s) - 1) * (l - 1) ** (2 * s))
    return hardy_constant(s, 3) + extra


# --------------------------------------------------------------------------
# name registry (CLI and tables)
# --------------------------------------------------------------------------

REGISTRY: dict[str, tuple[Callable[..., float], tuple[str, ...]]] = {
    "hardy": (hardy_constant, ("s", "d")),
    "semiclassical": (semiclassical_constant, ("gamma", "d")),
    "clr": (clr_constant, ()),
    "sobolev": (lambda: SOBOLEV_CONSTANT, ()),
    "resolvent": (resolvent_constant, ("alpha",)),
    "fractional_sobolev": (fractional_sobolev_constant, ("N", "r")),
    "du_max": (du_max, ("u",)),
    "pauli_sobolev_remainder": (pauli_sobolev_remainder, ("eps", "r")),
    "theta": (theta_constant, ("s", "r")),
    "omega": (omega_constant, ("s", "u", "r", "eps")),
    "t_s1": (sobolev_remainder_s1, ("u", "r", "eps")),
    "script_i": (script_i, ("s", "r", "n_r")),
    "script_j": (script_j, ("s", "u", "r", "eps", "n_r")),
    "script_a": (script_a, ("s", "u", "r", "n_r")),
    "running_energy_integral": (running_energy_integral, ("s", "r")),
    "plt_u": (lambda s, gamma_mix: plt_field_energy_constants(s, gamma_mix)[0], ("s", "gamma_mix")),
    "plt_v": (lambda s, gamma_mix: plt_field_energy_constants(s, gamma_mix)[1], ("s", "gamma_mix")),
    "localization_error": (localization_error, ("s", "b", "l", "n")),
    "effective_hardy_weight": (effective_hardy_weight, ("s", "l")),
}

INT_PARAMS = {"d", "N", "n"}

DEFAULT_PARAMS: dict[str, dict[str, float]] = {
    "hardy": {"s": 0.5, "d": 3},
    "semiclassical": {"gamma": 1.0, "d": 3},
    "clr": {},
    "sobolev": {},
    "resolvent": {"alpha": 0.5},
    "fractional_sobolev": {"N": 3, "r": 6.0},
    "du_max": {"u": 0.5},
    "pauli_sobolev_remainder": {"eps": 0.5, "r": 3.0},
    "theta": {"s": 0.25, "r": 4.0},
    "omega": {"s": 0.25, "u": 0.2, "r": 4.0, "eps": 0.5},
    "t_s1": {"u": 1.0, "r": 2.0, "eps": 1.0},
    "script_i": {"s": 0.5, "r": 2.0, "n_r": 1.0},
    "script_j": {"s": 0.25, "u": 0.5, "r": 2.5, "eps": 0.5, "n_r": 1.0},
    "script_a": {"s": 0.25, "u": 0.5, "r": 2.5, "n_r": 1.0},
    "running_energy_integral": {"s": 0.75, "r": 0.5},
    "plt_u": {"s": 0.5, "gamma_mix": 0.5},
    "plt_v": {"s": 0.5, "gamma_mix": 0.5},
    "localization_error": {"s": 0.5, "b": 1.0, "l": 2.0, "n": 0},
    "effective_hardy_weight": {"s": 0.5, "l": 2.0},
}


def evaluate(name: str, **params) -> float:
    """Evaluate a registered constant by name."""
    try:
        fn, names = REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; known: {sorted(REGISTRY)}") from None
    unknown = set(params) - set(names)
    if unknown:
        raise DomainError(f"constant {name!r} takes {names}, got unexpected {sorted(unknown)}")
    kwargs = {k: (int(v) if k in INT_PARAMS else v) for k, v in params.items()}
    return float(fn(**kwargs))


@dataclass
class ConstantsTable:
    """Named constant values together with the parameters that produced them."""

    values: dict[str, float] = field(default_factory=dict)
    params: dict[str, dict[str, float]] = field(default_factory=dict)

    def add(self, name: str, value: float, **params) -> None:
        self.values[name] = float(value)
        self.params[name] = dict(params)

    def subset(self, names: Sequence[str]) -> "ConstantsTable":
        out = ConstantsTable()
        for n in names:
            out.add(n, self.values[n], **self.params[n])
        return out

    def as_dict(self) -> dict:
        return {n: {"value": self.values[n], "params": self.params[n]} for n in self.values}

    def __contains__(self, name) -> bool:
        return name in self.values

    def __getitem__(self, name) -> float:
        return self.values[name]


def default_table() -> ConstantsTable:
    table = ConstantsTable()
    for name, params in DEFAULT_PARAMS.items():
        table.add(name, evaluate(name, **params), **params)
    return table


def query_dict(q: ConstantQuery) -> dict:
    return asdict(q)
