"""The acceptance suite: one check per criterion, each returning a pass/fail line and details."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Any, Callable

import numpy as np
from scipy import special

from . import constants as K
from . import inequalities as I
from .fields import (VectorField, biot_savart, biot_savart_with_report, curl, divergence, generate_field,
                     lp_norm, make_grid, solenoidal_projection)
from .localization import (b_for_shells, breakpoints, build_partition, derivative_bound,
                           localization_inequality_check, shell_profile, shell_profile_derivative,
                           tail_profile)
from .operators import DenseHermitian, fractional_power, lichnerowicz_residual, resolvent_power_quadrature
from .oracles import random_psd, run_oracle

MONITORED = ("phlt1", "phlt2", "lls", "sss", "stability")
LOCALIZATION_SWEEP = tuple((s, l) for s in (0.25, 0.5, 0.75, 1.0) for l in (1.5, 2.0))


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    detail: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name} ({self.seconds:.1f} s)"

    def as_dict(self) -> dict:
        return asdict(self)


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(b), 1.0)


def check_constants() -> dict:
    L = K.CLR_CONSTANT
    U, V = K.plt_field_energy_constants(0.5, 0.5)
    cases = {
        "hardy(1/2,3) = 2/pi": (K.hardy_constant(0.5, 3), 2 / math.pi),
        "hardy(1,3) = 1/4": (K.hardy_constant(1.0, 3), 0.25),
        "semiclassical(1,3) = 1/(15 pi^2)": (K.semiclassical_constant(1.0, 3), 1 / (15 * math.pi ** 2)),
        "fractional_sobolev(3,6) = S": (K.fractional_sobolev_constant(3, 6), K.SOBOLEV_CONSTANT),
        "U(1/2) = 3 pi L / 2": (U, 1.5 * math.pi * L),
        "V(1/2) = pi L / (2 3^(1/4))": (V, math.pi * L / (2 * 3 ** 0.25)),
    }
    errors = {k: abs(a - b) for k, (a, b) in cases.items()}
    return {"passed": all(_close(a, b, 1e-12) for a, b in cases.values()), "abs_errors": errors}


def check_quadrature(seed: int = 11) -> dict:
    rng = np.random.default_rng(seed)
    s_values = rng.uniform(0.05, 3.0, 20)
    beta_err = max(abs(K.running_energy_integral(s, 0.0) - special.beta(s, 2.5)) for s in s_values)
    rel = []
    for _ in range(20):
        H = DenseHermitian(random_psd(rng, 50))
        alpha = float(rng.uniform(0.05, 0.95))
        exact = fractional_power(H, alpha).data
        approx = resolvent_power_quadrature(H, alpha, nodes=96).data
        rel.append(float(np.linalg.norm(approx - exact, 2) / np.linalg.norm(exact, 2)))
    return {"passed": beta_err <= 1e-10 and max(rel) <= 1e-6,
            "beta_max_abs_error": beta_err, "resolvent_max_rel_error": max(rel)}


def check_oracles(trials: int = 500, seed: int = 7) -> dict:
    out = {}
    ok = True
    for name in ("pullout", "bks", "monotonicity", "trace_sum", "trace_product", "monotonicity_control"):
        summary = run_oracle(name, trials, seed)
        out[name] = {"failures": summary.failures, "worst_gap_ratio": summary.worst_gap_ratio}
        if name == "monotonicity_control":
            ok &= summary.failures >= 1
        else:
            ok &= summary.failures == 0
    return {"passed": bool(ok), "suites": out}


def check_localization(n: int = 8) -> dict:
    # profile identities on dense radii
    b, l, N = 0.3, 1.7, 6
    s_n = breakpoints(b, l, N + 2)
    t = np.linspace(0.0, 1.05 * s_n[N + 1], 10_000)
    total = sum(shell_profile(t, k, b, l) ** 2 for k in range(N + 1)) + tail_profile(t, N, b, l) ** 2
    residual = float(np.max(np.abs(total - 1)))
    excess = max(float(np.max(np.abs(shell_profile_derivative(t, k, b, l)))) - derivative_bound(k, b, l)
                 for k in range(N + 1))

    grid = make_grid(n)
    A = generate_field(5, "A", grid, amplitude=0.5)
    sweep = []
    printed_ok = True
    for s, l in LOCALIZATION_SWEEP:
        part = build_partition(b_for_shells(grid, l), l, 3, grid)
        row = {"s": s, "l": l, "b": part.b, "count": part.count}
        for mode in ("printed", "accumulated"):
            v = localization_inequality_check(grid, A, s, part, mode=mode)
            row[mode] = {"min_eigenvalue": v.min_eigenvalue_of_gap, "tolerance": v.tolerance, "passed": v.passed}
        printed_ok &= row["printed"]["passed"]
        sweep.append(row)
    passed = residual <= 1e-12 and excess <= 1e-9 and printed_ok
    return {"passed": bool(passed), "partition_residual": residual, "derivative_bound_excess": excess,
            "sweep": sweep,
            "accumulated_all_pass": all(r["accumulated"]["passed"] for r in sweep)}


def check_lichnerowicz(count: int = 20, n: int = 8) -> dict:
    grid = make_grid(n)
    res = []
    for seed in range(count):
        A = generate_field(100 + seed, "A", grid, amplitude=0.2 + 0.05 * seed, bandlimit="half")
        res.append(lichnerowicz_residual(grid, A).compressed)
    return {"passed": max(res) <= 1e-10, "max_compressed_residual": max(res)}


def check_biot_savart(n: int = 16) -> dict:
    grid = make_grid(n)
    rng_fields = [generate_field(seed, "B", grid) for seed in range(3)]
    # a generic field with a divergent part, so the projection is exercised
    raw = VectorField(grid, np.random.default_rng(3).normal(size=(3, n, n, n)))
    rel, div, mean = [], [], []
    for B in rng_fields + [raw]:
        A = biot_savart(B)
        target = solenoidal_projection(B)
        rel.append(lp_norm(curl(A) - target, 2) / lp_norm(target, 2))
        div.append(float(np.max(np.abs(divergence(A).values))))
        mean.append(float(np.max(np.abs(A.data.mean(axis=(1, 2, 3))))))
    x = grid.mesh()[0]
    b0, box = 1.3, grid.box
    k = 2 * math.pi / box
    B = VectorField(grid, np.stack([0 * x, 0 * x, b0 * np.cos(k * x)]))
    A, _ = biot_savart_with_report(B)
    expected = np.stack([0 * x, b0 / k * np.sin(k * x), 0 * x])
    mode_err = float(np.max(np.abs(A.data - expected)))
    passed = max(rel) <= 1e-10 and max(div) <= 1e-12 and max(mean) <= 1e-12 and mode_err <= 1e-12
    return {"passed": bool(passed), "curl_rel_error": max(rel), "max_divergence": max(div),
            "max_mean": max(mean), "single_mode_error": mode_err}


def check_explicit_inequalities(count: int = 20, n: int = 8) -> dict:
    runs = {"plt_field_energy": None, "pauli_sobolev": None,
            "quadratic_form_s1[lam=1,r=inf]": ("quadratic_form_s1", "r_inf"),
            "quadratic_form_s1[lam=0.5,r=2]": ("quadratic_form_s1", "r_2")}
    out = {}
    for label, spec in runs.items():
        name, variant = spec if spec else (label, None)
        reps = I.run_batch(name, count, n, variant=variant)
        out[label] = {"failures": [i for i, r in enumerate(reps) if r.verdict != "pass"],
                      "sup_ratio": I.sup_ratio(reps)}
    return {"passed": all(not v["failures"] for v in out.values()), "batches": out}


def load_goldens() -> dict | None:
    try:
        text = resources.files("hltlab").joinpath("data/monitored_goldens.json").read_text()
    except FileNotFoundError:
        return None
    return json.loads(text)


def monitored_batch(name: str, count: int = 20, n: int = 8) -> dict:
    reps = I.run_batch(name, count, n)
    ratios = [r.ratio for r in reps]
    return {"sup_ratio": max(ratios), "inf_ratio": min(ratios), "ratios": ratios}


def check_monitored(count: int = 20, n: int = 8, scales: tuple[float, ...] = (2.0, 0.5)) -> dict:
    goldens = load_goldens()
    out = {}
    ok = True
    for name in MONITORED:
        stats = monitored_batch(name, count, n)
        ratios = stats.pop("ratios")
        cfg = I.batch_config(name, 0, n)
        again = I.run_report(cfg).ratio
        identical = again == ratios[0]
        scale_err = max(abs(I.run_report(cfg, scale=f).ratio - ratios[0]) / max(abs(ratios[0]), 1e-300)
                        for f in scales)
        row = {**stats, "bit_identical": identical, "scaling_rel_error": scale_err,
               "finite": bool(np.all(np.isfinite(ratios)))}
        if goldens is not None and name in goldens:
            g = goldens[name]
            row["matches_golden"] = _close(stats["sup_ratio"], g["sup_ratio"], 1e-9) and \
                _close(stats["inf_ratio"], g["inf_ratio"], 1e-9)
        ok &= row["finite"] and identical and scale_err <= 1e-6 and row.get("matches_golden", True)
        out[name] = row
    return {"passed": bool(ok), "reports": out, "goldens_found": goldens is not None}


SCOPE_STATEMENT = (
    "The trace inequalities with existential constants are statements about R^3, arbitrary V and A, "
    "and the uncapped critical Hardy weight; none of that fits on a finite periodic lattice. "
    "This suite verifies every explicit ingredient (criteria 1-7) and tracks the end-to-end "
    "ratios as monitored empirical constants (criterion 8), without claiming them as the sharp constants."
)


def check_scope() -> dict:
    return {"passed": True, "statement": SCOPE_STATEMENT}


CRITERIA: dict[int, tuple[str, Callable[[], dict]]] = {
    1: ("exact constants", check_constants),
    2: ("quadrature: Beta identity and resolvent powers", check_quadrature),
    3: ("matrix inequality oracles", check_oracles),
    4: ("localization partition, derivative bounds and gap sweep", check_localization),
    5: ("Lichnerowicz identity on the half band", check_lichnerowicz),
    6: ("Biot-Savart reconstruction", check_biot_savart),
    7: ("explicit-constant inequalities on seeded batches", check_explicit_inequalities),
    8: ("monitored sup-ratios: finite, reproducible, scale invariant", check_monitored),
    9: ("scope of the lattice verification", check_scope),
}


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number]
    t0 = time.perf_counter()
    detail = fn()
    passed = bool(detail.pop("passed"))
    return CriterionResult(number, name, passed, time.perf_counter() - t0, detail)


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(k) for k in (numbers or sorted(CRITERIA))]
