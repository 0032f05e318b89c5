"""Left-hand side versus right-hand side experiments for the trace and form inequalities.

Reports come in two classes.  ``pass`` reports test inequalities whose
constants are explicit and carry a verdict; ``monitor`` reports test
inequalities whose constants are only known to exist and instead record the
ratio lhs / sum(rhs_terms), i.e. the smallest constant (common to all terms)
that would make the lattice instance hold.

All integrals are lattice sums h^3 sum_j f(x_j).  Every report is invariant
under x -> x / lam applied as a box rescaling together with
V -> lam^2s V, A -> lam A, psi -> lam^(3/2) psi; see :func:`rescale_inputs`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import constants as K
from .errors import DomainError, GridMismatchError
from .fields import (Field, GridSpec, ScalarField, SpinorField, VectorField, curl,
                     generate_field, hardy_potential, lp_norm, make_grid, rescale_field,
                     sup_norm_refined)
from .operators import (DenseHermitian, assemble_hamiltonian, dirac_operator, fractional_power,
                        kinetic_energy, magnetic_schrodinger, multiplication, pauli_square)
from .spectra import eigenvalues, moment_from_eigenvalues

PASS_SLACK = 1e-6
ROUNDING = 1e-10


@dataclass
class BoundReport:
    name: str
    config: dict
    lhs: float
    rhs_terms: dict[str, float]
    constants_used: dict[str, float]
    ratio: float
    verdict: str
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def as_dict(self) -> dict:
        return asdict(self)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs <= 0 else math.inf


def _finish(name, config, lhs, terms, consts, explicit: bool, atol: float = 0.0, notes=None) -> BoundReport:
    rhs = float(sum(terms.values()))
    ratio = _ratio(lhs, rhs)
    if explicit:
        verdict = "pass" if lhs <= (1 + PASS_SLACK) * rhs + atol else "fail"
    else:
        verdict = "monitor"
    return BoundReport(name, config, float(lhs), {k: float(v) for k, v in terms.items()},
                       {k: float(v) for k, v in consts.items()}, float(ratio), verdict, notes or {})


# --------------------------------------------------------------------------
# integrals of the fields
# --------------------------------------------------------------------------

def integral(values: np.ndarray, grid: GridSpec) -> float:
    return float(grid.cell_volume * np.sum(values))


def negative_part(V: ScalarField) -> np.ndarray:
    return np.maximum(-V.values, 0.0)


def field_energy(A: VectorField | None, grid: GridSpec) -> float:
    """int |B|^2 with B = curl A."""
    if A is None:
        return 0.0
    return integral(curl(A).magnitude() ** 2, grid)


def default_cap(grid: GridSpec, s: float) -> float:
    """Hardy cap (n / box)^2s * 4."""
    return 4.0 * (grid.n / grid.box) ** (2 * s)


def _grid_of(*fields) -> GridSpec:
    grids = {f.grid for f in fields if f is not None}
    if len(grids) != 1:
        raise GridMismatchError("reports need fields on one common grid")
    return grids.pop()


def _moment(H: DenseHermitian, gamma: float = 1.0) -> float:
    ev = eigenvalues(H)
    # eigenvalues within rounding of zero are not counted as bound states
    cut = ROUNDING * max(abs(ev[0]), abs(ev[-1]), 1.0)
    return moment_from_eigenvalues(np.where(ev > -cut, 0.0, ev), gamma)


def rescale_inputs(lam: float, s: float, V=None, A=None, psi=None):
    """Apply x -> lam x: V -> lam^2s V(lam x), A -> lam A(lam x), psi -> lam^(3/2) psi(lam x)."""
    out = []
    if V is not None:
        out.append(rescale_field(V, lam, lam ** (2 * s)))
    if A is not None:
        out.append(rescale_field(A, lam, lam))
    if psi is not None:
        out.append(rescale_field(psi, lam, lam ** 1.5))
    return out


# --------------------------------------------------------------------------
# monitored reports
# --------------------------------------------------------------------------

def lt_report(V: ScalarField, gamma: float = 1.0, s: float = 1.0, A: VectorField | None = None,
              d: int = 3) -> BoundReport:
    """Tr(|p - A|^2s + V)_-^gamma against int V_-^(gamma + 3/2s)."""
    if d != 3:
        raise DomainError("only the three-dimensional lattice is implemented")
    if gamma < 0:
        raise DomainError(f"need gamma >= 0, got {gamma}")
    grid = _grid_of(V, A)
    kind = "free" if A is None else "magnetic"
    lhs = _moment(assemble_hamiltonian(kind, grid, s, A=A, V=V), gamma)
    term = integral(negative_part(V) ** (gamma + 1.5 / s), grid)
    return _finish("lt", {"grid": grid.as_dict(), "gamma": gamma, "s": s, "magnetic": A is not None},
                   lhs, {"int V_-^(gamma+3/(2s))": term},
                   {"semiclassical": K.semiclassical_constant(gamma, 3)}, explicit=False)


def hlt_report(V: ScalarField, s: float, cap: float | None = None, grid: GridSpec | None = None,
               basis: str = "scalar") -> BoundReport:
    """Tr(|p|^2s - C_s min(|x|^-2s, cap) + V)_- against int V_-^(1 + 3/2s).

    ``basis="spinor"`` doubles every eigenvalue, matching the Pauli reports at A = 0.
    """
    if not 0 < s <= 1:
        raise DomainError(f"need 0 < s <= 1, got {s}")
    grid = grid or V.grid
    cap = default_cap(grid, s) if cap is None else cap
    Cs = K.hardy_constant(s, 3)

    def lhs_at(c):
        return _moment(assemble_hamiltonian("free", grid, s, hardy_weight=Cs, cap=c, V=V, basis=basis))

    lhs = lhs_at(cap)
    term = integral(negative_part(V) ** (1 + 1.5 / s), grid)
    notes = {"lhs_at_double_cap": lhs_at(2 * cap)}
    return _finish("hlt", {"grid": grid.as_dict(), "s": s, "cap": cap, "basis": basis},
                   lhs, {"int V_-^(1+3/(2s))": term}, {"hardy": Cs}, explicit=False, notes=notes)


def _pauli_hardy_lhs(V, A, s, cap, grid) -> float:
    Cs = K.hardy_constant(s, 3)
    return _moment(assemble_hamiltonian("pauli", grid, s, A=A, hardy_weight=Cs, cap=cap, V=V))


def phlt1_report(V: ScalarField, A: VectorField | None, s: float, cap: float | None = None,
                 grid: GridSpec | None = None) -> BoundReport:
    """Pauli-Hardy trace against the three-term right side valid for 1/2 <= s <= 1."""
    if not 0.5 <= s <= 1:
        raise DomainError(f"need 1/2 <= s <= 1, got {s}")
    grid = grid or _grid_of(V, A)
    cap = default_cap(grid, s) if cap is None else cap
    lhs = _pauli_hardy_lhs(V, A, s, cap, grid)
    vm = negative_part(V)
    e_b = field_energy(A, grid)
    terms = {
        "int V_-^(1+3/(2s))": integral(vm ** (1 + 1.5 / s), grid),
        "(int B^2)^(2s)": e_b ** (2 * s),
        "(int B^2)^(3/4) (int V_-^4)^(1/4)": e_b ** 0.75 * integral(vm ** 4, grid) ** 0.25,
    }
    return _finish("phlt1", {"grid": grid.as_dict(), "s": s, "cap": cap}, lhs, terms,
                   {"hardy": K.hardy_constant(s, 3)}, explicit=False)


def phlt2_report(V: ScalarField, A: VectorField | None, s: float, cap: float | None = None,
                 grid: GridSpec | None = None) -> BoundReport:
    """Pauli-Hardy trace against int |B|^(s + 3/2) and int V_-^(1 + 3/2s), 0 < s <= 1."""
    if not 0 < s <= 1:
        raise DomainError(f"need 0 < s <= 1, got {s}")
    grid = grid or _grid_of(V, A)
    cap = default_cap(grid, s) if cap is None else cap
    lhs = _pauli_hardy_lhs(V, A, s, cap, grid)
    bmag = curl(A).magnitude() if A is not None else np.zeros((grid.n,) * 3)
    terms = {
        "int |B|^(s+3/2)": integral(bmag ** (s + 1.5), grid),
        "int V_-^(1+3/(2s))": integral(negative_part(V) ** (1 + 1.5 / s), grid),
    }
    return _finish("phlt2", {"grid": grid.as_dict(), "s": s, "cap": cap}, lhs, terms,
                   {"hardy": K.hardy_constant(s, 3)}, explicit=False)


def term_exponents(name: str, s: float, reduce: bool = False) -> set[tuple[float, float]]:
    """(power of |B|, power of V_-) for every right-side term, in units of integrands.

    A term (int |B|^2)^a (int V_-^b)^c contributes (2a, b c) in total homogeneity.
    With ``reduce`` a term lying on the segment between two others is dropped,
    since Young's inequality bounds it by their weighted sum.
    """
    if name == "phlt1":
        terms = {(0.0, 1 + 1.5 / s), (4 * s, 0.0), (1.5, 1.0)}
    elif name == "phlt2":
        terms = {(s + 1.5, 0.0), (0.0, 1 + 1.5 / s)}
    else:
        raise DomainError(f"no exponent table for {name!r}")
    if reduce:
        terms = {t for t in terms if not _on_segment(t, terms - {t})}
    return terms


def _on_segment(t, others, tol: float = 1e-12) -> bool:
    p = np.asarray(t)
    for a in others:
        for b in others:
            d = np.subtract(b, a)
            if a == b or not d.any():
                continue
            w = float(np.dot(p - a, d) / np.dot(d, d))
            if 0 < w < 1 and np.allclose(np.add(a, w * d), p, atol=tol):
                return True
    return False


def lls_report(V: ScalarField, A: VectorField | None) -> BoundReport:
    """Tr(P_A^2 + V)_- against int V_-^(5/2) and (int B^2)^(3/4)(int V_-^4)^(1/4)."""
    grid = _grid_of(V, A)
    lhs = _moment(assemble_hamiltonian("pauli", grid, 1.0, A=A, V=V))
    vm = negative_part(V)
    terms = {
        "int V_-^(5/2)": integral(vm ** 2.5, grid),
        "(int B^2)^(3/4) (int V_-^4)^(1/4)": field_energy(A, grid) ** 0.75 * integral(vm ** 4, grid) ** 0.25,
    }
    return _finish("lls", {"grid": grid.as_dict()}, lhs, terms, {}, explicit=False)


def _fourier_form(f: Field, power: float) -> float:
    """sum over components of <f, |p|^(2 power) f> with the lattice wavenumbers."""
    g = f.grid
    kx, ky, kz = g.kmesh(derivative=False)
    sym = (kx * kx + ky * ky + kz * kz) ** power
    fh = np.fft.fftn(f.data, axes=(1, 2, 3))
    return float(g.cell_volume / g.sites * np.sum(sym * np.abs(fh) ** 2))


def sss_ratio(psi: Field, s: float, u: float, cap: float | None = None) -> BoundReport:
    """<psi, (|p|^2s - C_s / |x|^2s) psi> over || |p|^u psi ||^(2s/u) ||psi||^(-2(s-u)/u)."""
    if not 0 < u < s <= 1:
        raise DomainError(f"need 0 < u < s <= 1, got u={u}, s={s}")
    g = psi.grid
    cap = default_cap(g, s) if cap is None else cap
    Cs = K.hardy_constant(s, 3)
    dens = psi.magnitude() ** 2
    lhs = _fourier_form(psi, s) - Cs * integral(hardy_potential(g, s, cap).values * dens, g)
    norm2 = integral(dens, g)
    denom = _fourier_form(psi, u) ** (s / u) / norm2 ** ((s - u) / u)
    return _finish("sss", {"grid": g.as_dict(), "s": s, "u": u, "cap": cap}, lhs,
                   {"|| |p|^u psi ||^(2s/u)": denom}, {"hardy": Cs}, explicit=False)


def stability_check(A: VectorField, beta: float, cap: float | None = None, grid: GridSpec | None = None,
                    sweep: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0)) -> BoundReport:
    """|P_A| - C_{1/2} min(1/|x|, cap) + beta int B^2 >= 0.

    ``lhs`` is the energy deficit max(0, -min eig(|P_A| - C_{1/2} H_cap)); the
    single right-side term is beta int B^2, so ratio <= 1 means stable.  The
    notes record the lattice threshold beta* and the margins along a sweep of
    multiples of beta*.
    """
    if beta <= 0:
        raise DomainError(f"need beta > 0, got {beta}")
    grid = grid or A.grid
    cap = default_cap(grid, 0.5) if cap is None else cap
    C = K.hardy_constant(0.5, 3)
    H = assemble_hamiltonian("pauli", grid, 0.5, A=A, hardy_weight=C, cap=cap)
    e0 = float(eigenvalues(H)[0])
    deficit = max(0.0, -e0)
    energy = field_energy(A, grid)
    threshold = deficit / energy if energy > 0 else (0.0 if deficit == 0 else math.inf)
    notes = {
        "min_eigenvalue": e0,
        "stability_margin": e0 + beta * energy,
        "beta_threshold": threshold,
        "beta_sweep": [[m * threshold, e0 + m * threshold * energy] for m in sweep],
    }
    return _finish("stability", {"grid": grid.as_dict(), "beta": beta, "cap": cap}, deficit,
                   {"beta int B^2": beta * energy}, {"hardy": C, "beta": beta}, explicit=False, notes=notes)


# --------------------------------------------------------------------------
# explicit-constant reports
# --------------------------------------------------------------------------

def plt_field_energy_report(W: ScalarField, A: VectorField | None, s: float, gamma_mix: float = 0.5,
                            grid: GridSpec | None = None) -> BoundReport:
    """Tr(|P_A|^2s + W)_- <= U int W_-^(1+3/2s) + V (int B^2)^(3/4) (int W_-^4)^(1/4)."""
    grid = grid or _grid_of(W, A)
    U, Vc = K.plt_field_energy_constants(s, gamma_mix)
    H = assemble_hamiltonian("pauli", grid, s, A=A, V=W)
    lhs = _moment(H)
    wm = negative_part(W)
    terms = {
        "U int W_-^(1+3/(2s))": U * integral(wm ** (1 + 1.5 / s), grid),
        "V (int B^2)^(3/4) (int W_-^4)^(1/4)": Vc * field_energy(A, grid) ** 0.75 * integral(wm ** 4, grid) ** 0.25,
    }
    return _finish("plt_field_energy", {"grid": grid.as_dict(), "s": s, "gamma_mix": gamma_mix},
                   lhs, terms, {"U": U, "V": Vc, "clr": K.CLR_CONSTANT}, explicit=True)


def spin_major(psi: SpinorField) -> np.ndarray:
    """Spinor samples as a vector ordered spin * n^3 + site."""
    return psi.data.reshape(2, -1).reshape(-1)


def pauli_sobolev_check(psi: SpinorField, A: VectorField | None, eps: float, r: float) -> BoundReport:
    """||psi||_6^2 <= S^2 (1-eps)^-1 <psi, P_A^2 psi> + omega(eps, r) ||B||_r^(2r/(2r-3)) ||psi||_2^2."""
    g = psi.grid
    omega = K.pauli_sobolev_remainder(eps, r)
    S = K.SOBOLEV_CONSTANT
    v = spin_major(psi)
    Dv = dirac_operator(g, A).data @ v
    kinetic = g.cell_volume * float(np.vdot(Dv, Dv).real)
    bnorm = lp_norm(curl(A), r) if A is not None else 0.0
    lhs = lp_norm(psi, 6) ** 2
    terms = {
        "S^2 (1-eps)^-1 <psi, P_A^2 psi>": S * S / (1 - eps) * kinetic,
        "omega ||B||_r^(2r/(2r-3)) ||psi||_2^2": omega * bnorm ** (2 * r / (2 * r - 3)) * lp_norm(psi, 2) ** 2,
    }
    return _finish("pauli_sobolev", {"grid": g.as_dict(), "eps": eps, "r": r}, lhs, terms,
                   {"sobolev": S, "omega": omega}, explicit=True)


def quadratic_form_s1_check(A: VectorField, lam: float, r: float, grid: GridSpec | None = None,
                            u: float | None = None, eps: float | None = None,
                            cap: float | None = None, refine: int = 4) -> BoundReport:
    """P_A^2 - C_1 H_cap >= lam (p_A^2 - C_1 H_cap) - C ||B||_r^(2r/(2r-3)).

    Evaluated as quadratic forms on trigonometric polynomials with
    |m_j| < n/4, where every product in the forms is resolved exactly by the
    lattice; ``A`` should be band-limited to the same modes.  For r = inf
    the constant is 1 with the sup norm of B taken from a ``refine``-times
    finer trigonometric interpolant; for finite r it is T(u, r, eps) with
    u = max(3/(2r), ...) and eps = 0.05 (1 - lam) unless given.

    ``lhs`` is the deficit max(0, -min eig(P_A^2 - C_1 H - lam (p_A^2 - C_1 H))),
    so the check passes when it does not exceed the single right-side term.
    """
    grid = grid or A.grid
    if not (0 <= lam < 1 or (lam == 1 and math.isinf(r))):
        raise DomainError("need 0 <= lam < 1, or lam = 1 with r = inf")
    if not r > 1.5:
        raise DomainError(f"need r > 3/2, got {r}")
    cap = default_cap(grid, 1.0) if cap is None else cap
    C1 = K.hardy_constant(1.0, 3)
    B = curl(A)
    consts = {"hardy": C1}
    if math.isinf(r):
        C, bterm = 1.0, sup_norm_refined(B, refine)
        consts["C"] = C
    else:
        u = 1.5 / r if u is None else u
        eps = 0.05 * (1 - lam) if eps is None else eps
        C = K.sobolev_remainder_s1(u, r, eps)
        bterm = lp_norm(B, r) ** (2 * r / (2 * r - 3))
        consts.update({"C": C, "u": u, "eps": eps})
    keep = grid.half_spectrum_mask()
    hardy = multiplication(grid, hardy_potential(grid, 1.0, cap), basis="spinor")
    lhs_op = pauli_square(grid, A) - C1 * hardy
    mid_op = magnetic_schrodinger(grid, A) - C1 * hardy
    gap = (lhs_op - lam * mid_op).compress(keep)
    e0 = float(np.linalg.eigvalsh(gap)[0])
    atol = ROUNDING * float(np.linalg.norm(mid_op.compress(keep), 2))
    cfg = {"grid": grid.as_dict(), "lam": lam, "r": r, "cap": cap, "band_modes": int(keep.sum())}
    return _finish("quadratic_form_s1", cfg, max(0.0, -e0), {"C ||B||_r^(2r/(2r-3))": C * bterm},
                   consts, explicit=True, atol=atol, notes={"min_eigenvalue": e0})


# --------------------------------------------------------------------------
# seeded batches
# --------------------------------------------------------------------------

PASS_REPORTS = ("plt_field_energy", "pauli_sobolev", "quadratic_form_s1")
MONITOR_REPORTS = ("lt", "hlt", "phlt1", "phlt2", "lls", "sss", "stability")
REPORT_NAMES = PASS_REPORTS + MONITOR_REPORTS


def _uniform(seed: int, lo: float, hi: float, salt: int = 0) -> float:
    return float(np.random.default_rng([seed, salt]).uniform(lo, hi))


def batch_config(name: str, index: int, n: int = 8, box: float = 2 * math.pi, variant: str | None = None) -> dict:
    """Deterministic configuration number ``index`` of the default batch for ``name``.

    Field amplitudes are kept in ranges where the torus is a faithful model:
    wells are deep enough and spinors localized enough that the constant
    mode of the periodic box does not dominate (see the README).
    """
    if name not in REPORT_NAMES:
        raise DomainError(f"unknown report {name!r}; known: {REPORT_NAMES}")
    seed = 1000 * (REPORT_NAMES.index(name) + 1) + index
    cfg: dict[str, Any] = {"name": name, "grid": {"n": n, "box": box, "offset": True},
                           "seeds": {"V": seed, "A": seed + 500, "psi": seed + 900}}
    s_cycle = (0.5, 0.75, 1.0)
    if name == "plt_field_energy":
        cfg.update(s=s_cycle[index % 3], gamma_mix=0.5,
                   V={"amplitude": _uniform(seed, 0.5, 8.0), "negative": True},
                   A={"amplitude": _uniform(seed, 0.2, 1.5, 1)})
    elif name == "pauli_sobolev":
        cfg.update(eps=(0.25, 0.5, 0.75)[index % 3], r=(2.0, 3.0, 6.0)[(index // 3) % 3],
                   psi={"width": _uniform(seed, 0.3, 1.0), "bumps": 1},
                   A={"amplitude": _uniform(seed, 0.0, 1.5, 1)})
    elif name == "quadratic_form_s1":
        lam, r = {"r_inf": (1.0, math.inf), "r_2": (0.5, 2.0)}[variant or "r_inf"]
        cfg.update(lam=lam, r=r, A={"amplitude": _uniform(seed, 0.2, 1.0), "bandlimit": "half"})
    elif name in ("lt", "hlt"):
        cfg.update(s=s_cycle[index % 3], gamma=1.0,
                   V={"amplitude": _uniform(seed, 0.5, 8.0), "negative": True})
        if name == "lt":
            cfg["A"] = {"amplitude": _uniform(seed, 0.0, 1.0, 1)}
    elif name in ("phlt1", "phlt2", "lls"):
        cfg.update(s=1.0 if name == "lls" else s_cycle[index % 3],
                   V={"amplitude": _uniform(seed, 0.5, 8.0), "negative": True},
                   A={"amplitude": _uniform(seed, 0.2, 1.5, 1)})
    elif name == "sss":
        cfg.update(s=s_cycle[index % 3], u=0.25, psi={"width": _uniform(seed, 0.3, 1.0), "bumps": 1})
    elif name == "stability":
        cfg.update(beta=1.0, A={"amplitude": _uniform(seed, 0.2, 1.5)})
    return cfg


def build_inputs(cfg: dict) -> dict[str, Field]:
    g = cfg["grid"]
    grid = make_grid(g["n"], g["box"], g.get("offset", True))
    seeds = cfg.get("seeds", {})
    out: dict[str, Any] = {"grid": grid}
    if "V" in cfg:
        out["V"] = generate_field(seeds.get("V", 0), "V", grid, **cfg["V"])
    if "A" in cfg:
        opts = dict(cfg["A"])
        amp = opts.pop("amplitude", 1.0)
        A = generate_field(seeds.get("A", 0), "A", grid, amplitude=1.0, **opts)
        out["A"] = A * amp
    if "psi" in cfg:
        out["psi"] = generate_field(seeds.get("psi", 0), "psi", grid, **cfg["psi"])
    return out


def run_report(cfg: dict, scale: float = 1.0) -> BoundReport:
    """Build the fields of ``cfg`` and evaluate the named report.

    ``scale`` applies x -> scale * x to every input before evaluation.
    """
    name = cfg["name"]
    f = build_inputs(cfg)
    s = cfg.get("s", 1.0)
    V, A, psi = f.get("V"), f.get("A"), f.get("psi")
    cap = cfg.get("cap")
    if scale != 1.0:
        V = rescale_field(V, scale, scale ** (2 * s)) if V is not None else None
        A = rescale_field(A, scale, scale) if A is not None else None
        psi = rescale_field(psi, scale, scale ** 1.5) if psi is not None else None
        if cap is not None:
            cap = cap * scale ** (2 * s)
    grid = next(x.grid for x in (V, A, psi) if x is not None)
    if name == "plt_field_energy":
        rep = plt_field_energy_report(V, A, s, cfg.get("gamma_mix", 0.5), grid)
    elif name == "pauli_sobolev":
        rep = pauli_sobolev_check(psi, A, cfg["eps"], cfg["r"])
    elif name == "quadratic_form_s1":
        rep = quadratic_form_s1_check(A, cfg["lam"], cfg["r"], grid, cfg.get("u"), cfg.get("eps"), cap)
    elif name == "lt":
        rep = lt_report(V, cfg.get("gamma", 1.0), s, A)
    elif name == "hlt":
        rep = hlt_report(V, s, cap, grid, cfg.get("basis", "scalar"))
    elif name == "phlt1":
        rep = phlt1_report(V, A, s, cap, grid)
    elif name == "phlt2":
        rep = phlt2_report(V, A, s, cap, grid)
    elif name == "lls":
        rep = lls_report(V, A)
    elif name == "sss":
        rep = sss_ratio(psi, s, cfg["u"], cap)
    elif name == "stability":
        rep = stability_check(A, cfg["beta"], cap, grid)
    else:
        raise DomainError(f"unknown report {name!r}; known: {REPORT_NAMES}")
    rep.config = {**cfg, "evaluated": rep.config}
    return rep


def run_batch(name: str, count: int = 20, n: int = 8, variant: str | None = None) -> list[BoundReport]:
    return [run_report(batch_config(name, i, n, variant=variant)) for i in range(count)]


def sup_ratio(reports: list[BoundReport]) -> float:
    """Largest lhs / sum(rhs) over a batch: the empirical lattice constant."""
    return max(r.ratio for r in reports)
