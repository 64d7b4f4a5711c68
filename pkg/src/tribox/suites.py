"""Named reproduction suites: each sweeps a family of boxes and compares the
measured quantities with their closed forms.

A suite returns a ``SuiteResult`` whose rows carry both the measured value
and the analytic target, and whose checks decide pass/fail.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .box import Behavior, white_noise
from .canonical import (
    class8_box, isotropic_mermin, isotropic_svetlichny, mermin_box_mm, svetlichny_box,
)
from .measures import (
    class99_value, mermin_discord, mermin_discord_batch, mermin_values, svetlichny_discord,
    svetlichny_discord_batch, svetlichny_moduli,
)
from .polytope import three_decomposition, verify_decomposition, vertex_set
from .quantum import (
    CQ_KINDS, born_box, born_box_blocked, bisep_w, ca_min, concurrences_w_class, ghz, ghz_class,
    ghz_w, gghz, random_settings, rho_ac_with_maximally_mixed_b, sample_cq_qc,
    settings_class99, settings_gghz_dependent, settings_md_xy, settings_md_xz,
    settings_mixed_p, settings_sd_xy, settings_sd_xz, sixqubit_4sep, sixqubit_partial,
    sixqubit_strategy, tau3_ghz_class, w_class, werner,
)
from .symmetry import find_lro

R2 = math.sqrt(2)
DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "limit": self.limit,
                "passed": self.passed, "note": self.note}


@dataclass
class SuiteResult:
    name: str
    columns: list[str]
    rows: list[dict[str, Any]]
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "columns": self.columns,
            "rows": self.rows,
        }


def _map(fn: Callable, items: list, jobs: int) -> list:
    # results come back in input order whatever the scheduling
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _err_check(name: str, rows: list[dict], got: str, want: str, tol: float) -> Check:
    err = max(abs(r[got] - r[want]) for r in rows)
    return Check(name, err, tol, err <= tol)


# -- GHZ class ---------------------------------------------------------------

def _ghz_class_row(point: tuple[float, float]) -> dict:
    theta, theta3 = point
    rho = ghz_class(theta, theta3)
    tau = tau3_ghz_class(theta, theta3)
    sd = born_box(rho, settings_sd_xy())
    md = born_box(rho, settings_md_xy())
    return {
        "theta": theta, "theta3": theta3, "tau3": tau,
        "G": svetlichny_discord(sd), "G_target": 4 * math.sqrt(2 * tau),
        "Q": mermin_discord(md), "Q_target": 4 * math.sqrt(tau),
        "nonzero_moduli": int(np.sum(svetlichny_moduli(sd) > 1e-9)),
    }


def ghz_class_sweep(grid: int = 15, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    pts = [(t, t3) for t in np.linspace(0, np.pi / 4, grid) for t3 in np.linspace(0, np.pi / 2, grid)]
    rows = _map(_ghz_class_row, pts, jobs)
    single = all(r["nonzero_moduli"] == (1 if r["tau3"] > 1e-12 else 0) for r in rows)
    return SuiteResult("ghz-class-sweep", list(rows[0]), rows, [
        _err_check("max |G - 4√(2τ3)| at sd_xy", rows, "G", "G_target", tol),
        _err_check("max |Q - 4√τ3| at md_xy", rows, "Q", "Q_target", tol),
        Check("one nonzero Svetlichny modulus when τ3 > 0", float(single), 1.0, single),
    ])


# -- W class -----------------------------------------------------------------

def _w_class_row(point: tuple[float, float, float]) -> dict:
    a, b, g = point
    rho = w_class(a, b, g)
    c12, c13, c23 = concurrences_w_class(a, b, g)
    cmin = ca_min(a, b, g)
    return {
        "alpha": a, "beta": b, "gamma": g, "C12": c12, "C13": c13, "C23": c23, "Ca_min": cmin,
        "G": svetlichny_discord(born_box(rho, settings_sd_xz())), "G_target": 4 * R2 * cmin,
        "Q": mermin_discord(born_box(rho, settings_md_xz())), "Q_target": 4 * cmin,
    }


def w_class_sweep(grid: int = 10, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    pts = [
        (math.sqrt(i / grid), math.sqrt(j / grid), math.sqrt((grid - i - j) / grid))
        for i in range(grid + 1) for j in range(grid + 1 - i)
    ]
    rows = _map(_w_class_row, pts, jobs)
    iff = all((r["G"] <= tol and r["Q"] <= tol) == (r["C12"] * r["C23"] == 0) for r in rows)
    return SuiteResult("w-class-sweep", list(rows[0]), rows, [
        _err_check("max |G - 4√2 Ca_min| at sd_xz", rows, "G", "G_target", tol),
        _err_check("max |Q - 4 Ca_min| at md_xz", rows, "Q", "Q_target", tol),
        Check("G = Q = 0 iff C12·C23 = 0", float(iff), 1.0, iff),
    ])


# -- Werner ------------------------------------------------------------------

def _werner_row(p: float) -> dict:
    rho = werner(p)
    sd, md = born_box(rho, settings_sd_xy()), born_box(rho, settings_md_xy())
    return {
        "p": p,
        "G": svetlichny_discord(sd), "G_target": 4 * R2 * p,
        "Q": mermin_discord(md), "Q_target": 4 * p,
        "dist_isotropic_svetlichny": sd.distance(isotropic_svetlichny(p / R2)),
        "dist_isotropic_mermin": md.distance(isotropic_mermin(p)),
    }


def werner_sweep(grid: int = 21, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rows = _map(_werner_row, list(np.linspace(0, 1, grid)), jobs)
    dist = max(max(r["dist_isotropic_svetlichny"], r["dist_isotropic_mermin"]) for r in rows)
    return SuiteResult("werner-sweep", list(rows[0]), rows, [
        _err_check("max |G - 4√2 p| at sd_xy", rows, "G", "G_target", tol),
        _err_check("max |Q - 4p| at md_xy", rows, "Q", "Q_target", tol),
        Check("max entry distance to isotropic boxes", dist, 1e-9, dist <= 1e-9),
    ])


# -- GGHZ at state-dependent settings ----------------------------------------

def gghz_dependent_targets(theta: float) -> tuple[float, float]:
    tau = math.sin(2 * theta) ** 2
    root = math.sqrt(tau * (1 - tau))
    g = 8 * tau if theta <= math.pi / 8 else 8 * root
    return g, 4 * abs(tau - root)


def _gghz_row(theta: float) -> dict:
    b = born_box(gghz(theta), settings_gghz_dependent(theta))
    g_t, q_t = gghz_dependent_targets(theta)
    d = three_decomposition(b, residual_regions=())
    noise = d.residual.distance(white_noise()) if d.residual is not None else 0.0
    return {
        "theta": theta, "tau3": math.sin(2 * theta) ** 2,
        "G": svetlichny_discord(b), "G_target": g_t,
        "Q": mermin_discord(b), "Q_target": q_t,
        "mu": d.mu, "mu_target": g_t / 8, "nu": d.nu, "nu_target": q_t / 4,
        "residual_dist_noise": noise, "recombination_error": d.reconstruction_error,
    }


def gghz_dependent(grid: int = 15, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rows = _map(_gghz_row, list(np.linspace(0, np.pi / 4, grid)), jobs)
    noise = max(r["residual_dist_noise"] for r in rows)
    return SuiteResult("gghz-dependent", list(rows[0]), rows, [
        _err_check("max |G - piecewise law|", rows, "G", "G_target", tol),
        _err_check("max |Q - 4|τ3 - √(τ3(1-τ3))||", rows, "Q", "Q_target", tol),
        _err_check("max |μ - G/8|", rows, "mu", "mu_target", tol),
        _err_check("max |ν - Q/4|", rows, "nu", "nu_target", tol),
        Check("max residual distance to white noise", noise, tol, noise <= tol),
    ])


# -- class 99 ----------------------------------------------------------------

def _class99_row(theta: float) -> dict:
    b = born_box(gghz(theta), settings_class99(theta))
    return {"theta": theta, "L99": class99_value(b),
            "L99_target": 1 + 2 * math.sqrt(1 + math.sin(2 * theta) ** 2)}


def eq34_terms() -> tuple[Behavior, list[tuple[float, Behavior]]]:
    """The GHZ class-99 box and its split into the class-8 box and a local box."""
    s = settings_class99(np.pi / 4)
    local = born_box(rho_ac_with_maximally_mixed_b(), s)
    w = 1 / R2
    return born_box(ghz(), s), [(w, class8_box()), (1 - w, local)]


def class99_sweep(grid: int = 15, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rows = _map(_class99_row, list(np.linspace(0, np.pi / 4, grid)), jobs)
    c8 = class99_value(class8_box())
    opt = class99_value(born_box(ghz(), settings_class99(np.pi / 4)))
    box, terms = eq34_terms()
    ok34 = verify_decomposition(box, terms, atol=1e-8)
    return SuiteResult("class99-sweep", list(rows[0]), rows, [
        Check("class-8 box value - 5", abs(c8 - 5), 0.0, c8 == 5),
        Check("|GHZ optimum - (1+2√2)|", abs(opt - 1 - 2 * R2), 1e-9, abs(opt - 1 - 2 * R2) <= 1e-9),
        _err_check("max |L99 - (1+2√(1+sin²2θ))|", rows, "L99", "L99_target", tol),
        Check("GHZ = (1/√2) class-8 + (1-1/√2) local, within 1e-8", float(ok34), 1.0, ok34),
    ])


# -- monogamy ----------------------------------------------------------------

def _eq27_row(p: float) -> dict:
    b = born_box(ghz(), settings_mixed_p(p))
    g, q = svetlichny_discord(b), mermin_discord(b)
    return {"p": p, "G": g, "Q": q, "G+Q": g + q, "4√p": 4 * math.sqrt(p),
            "G/2+Q": g / 2 + q, "G+2Q": g + 2 * q,
            "mu": g / 8, "mu_target": math.sqrt(1 - p),
            "nu": q / 4, "nu_target": math.sqrt(p) - math.sqrt(1 - p)}


def random_r_mixtures(n: int, seed: int) -> np.ndarray:
    """``n`` random convex mixtures of the R vertices, dense and sparse, as (n, 64)."""
    rng = np.random.default_rng(seed)
    probs = vertex_set("R").probs
    nv = len(probs)
    out = np.empty((n, 64))
    for s in range(n):
        if s % 2:
            k = int(rng.integers(2, 6))
            idx = rng.choice(nv, k, replace=False)
            w = rng.dirichlet(np.ones(k))
            out[s] = w @ probs[idx]
        else:
            w = rng.dirichlet(np.full(nv, rng.choice([0.05, 0.3, 1.0])))
            out[s] = w @ probs
    return out


def monogamy_scan(grid: int = 10000, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    X = random_r_mixtures(grid, seed)
    lhs = svetlichny_discord_batch(X) + 2 * mermin_discord_batch(X)
    worst = float(lhs.max())
    sv = svetlichny_discord(svetlichny_box(0, 0, 0, 0)) + 2 * mermin_discord(svetlichny_box(0, 0, 0, 0))
    mm = svetlichny_discord(mermin_box_mm(0)) + 2 * mermin_discord(mermin_box_mm(0))
    rows = _map(_eq27_row, list(np.linspace(0.5, 1, 11)), jobs)
    literal = max(abs(r["G+Q"] - r["4√p"]) for r in rows)
    return SuiteResult("monogamy-scan", list(rows[0]), rows, [
        Check(f"max G+2Q over {grid} random R mixtures", worst, 8 + 1e-9, worst <= 8 + 1e-9),
        Check("|G+2Q - 8| at the Svetlichny box", abs(sv - 8), 1e-9, abs(sv - 8) <= 1e-9),
        Check("|G+2Q - 8| at the Mermin box", abs(mm - 8), 1e-9, abs(mm - 8) <= 1e-9),
        Check("max |G+Q - 4√p| on the mixed-p GHZ family", literal, tol, literal <= tol,
              "G/2+Q = 4√p holds instead; see the G/2+Q column"),
        _err_check("max |μ - √(1-p)| on the mixed-p GHZ family", rows, "mu", "mu_target", tol),
        _err_check("max |ν - (√p - √(1-p))| on the mixed-p GHZ family", rows, "nu", "nu_target", tol),
    ])


# -- CQ / QC -----------------------------------------------------------------

def _cqqc_row(point: tuple[str, int, int]) -> dict:
    kind, state_seed, n_settings = point
    rho = sample_cq_qc(kind, state_seed)
    rng = np.random.default_rng(state_seed + 7919)
    boxes = np.array([born_box(rho, random_settings(rng)).flat for _ in range(n_settings)])
    return {"kind": kind, "seed": state_seed,
            "max_G": float(svetlichny_discord_batch(boxes).max()),
            "max_Q": float(mermin_discord_batch(boxes).max())}


def cqqc_null(grid: int = 200, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1,
              settings_per_state: int = 20) -> SuiteResult:
    pts = [(CQ_KINDS[n % 3], seed * 100003 + n, settings_per_state) for n in range(grid)]
    rows = _map(_cqqc_row, pts, jobs)
    g = max(r["max_G"] for r in rows)
    q = max(r["max_Q"] for r in rows)
    return SuiteResult("cqqc-null", list(rows[0]), rows, [
        Check("max G over CQ/QC samples and random settings", g, tol, g <= tol),
        Check("max Q over CQ/QC samples and random settings", q, tol, q <= tol),
    ])


# -- biseparable W ------------------------------------------------------------

def bisep_w_suite(grid: int = 50, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rho = bisep_w()
    rows = []
    b = born_box(rho, settings_sd_xz())
    rows.append({"settings": "sd_xz", "G": svetlichny_discord(b), "G_target": 4 * R2 / 3,
                 "Q": mermin_discord(b)})
    rng = np.random.default_rng(seed)
    for n in range(grid):
        b = born_box(rho, random_settings(rng, plane="xy"))
        rows.append({"settings": f"xy-random-{n}", "G": svetlichny_discord(b), "G_target": 0.0,
                     "Q": mermin_discord(b)})
    err = abs(rows[0]["G"] - rows[0]["G_target"])
    xy = max(max(r["G"], r["Q"]) for r in rows[1:])
    return SuiteResult("bisep-w", list(rows[0]), rows, [
        Check("|G - 4√2/3| at sd_xz", err, tol, err <= tol),
        Check("max G, Q over random xy-plane settings", xy, tol, xy <= tol),
    ])


# -- GHZ + W -----------------------------------------------------------------

def _ghz_w_row(p: float) -> dict:
    rho = ghz_w(p)
    q = 1 - p
    sdz = born_box(rho, settings_sd_xz())
    return {"p": p, "q": q,
            "G_sd_xy": svetlichny_discord(born_box(rho, settings_sd_xy())), "G_sd_xy_target": 4 * R2 * p,
            "G_sd_xz": svetlichny_discord(sdz), "G_sd_xz_target": 8 * R2 * q / 3,
            "L99_sd_xz": class99_value(sdz)}


def ghz_w_mix(grid: int = 11, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rows = _map(_ghz_w_row, list(np.linspace(0, 1, grid)), jobs)
    return SuiteResult("ghz-w-mix", list(rows[0]), rows, [
        _err_check("max |G - 4√2 p| at sd_xy", rows, "G_sd_xy", "G_sd_xy_target", tol),
        _err_check("max |G - 8√2 q/3| at sd_xz", rows, "G_sd_xz", "G_sd_xz_target", tol),
    ])


# -- six-qubit appendix -------------------------------------------------------

def mermin_box_profile(b: Behavior, tol: float = 1e-9) -> dict:
    """Which Mermin inequalities are saturated and whether the two-party marginals are uniform."""
    m = mermin_values(b)
    pairs = b.correlators.values[:18]
    return {
        "saturated": int(np.sum(np.abs(m - 4) <= tol)),
        "max_mermin": float(m.max()),
        "marginals_maximally_mixed": bool(np.max(np.abs(pairs)) <= tol),
    }


def _appendix_row(label: str, rho) -> dict:
    row = {"state": label, "nonsignaling": False, "saturated": 0, "max_mermin": float("nan"),
           "marginals_maximally_mixed": False, "lro_equivalent_to_mm0": False, "error": ""}
    try:
        b = born_box_blocked(rho, sixqubit_strategy())
    except ValueError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row["nonsignaling"] = True
    row.update(mermin_box_profile(b))
    row["lro_equivalent_to_mm0"] = find_lro(mermin_box_mm(0), b, atol=1e-9) is not None
    return row


def appendix_sixqubit(grid: int = 0, tol: float = DEFAULT_TOL, seed: int = 0, jobs: int = 1) -> SuiteResult:
    rows = [
        _appendix_row("4-separable", sixqubit_4sep()),
        _appendix_row("partial", sixqubit_partial()),
        _appendix_row("4-separable, even y-pairs", sixqubit_4sep("even")),
        _appendix_row("partial, even y-pairs", sixqubit_partial("even")),
    ]
    four, part = rows[0], rows[1]
    mm_ok = (four["nonsignaling"] and four["saturated"] == 1
             and four["marginals_maximally_mixed"] and four["lro_equivalent_to_mm0"])
    nmm_ok = part["nonsignaling"] and part["saturated"] == 1 and not part["marginals_maximally_mixed"]
    return SuiteResult("appendix-sixqubit", list(rows[0]), rows, [
        Check("4-separable state gives a Mermin box equivalent to mm:0", float(mm_ok), 1.0, mm_ok),
        Check("partial state gives a Mermin box with a non-uniform marginal", float(nmm_ok), 1.0, nmm_ok),
    ])


SUITES: dict[str, tuple[Callable[..., SuiteResult], int]] = {
    "ghz-class-sweep": (ghz_class_sweep, 15),
    "w-class-sweep": (w_class_sweep, 10),
    "werner-sweep": (werner_sweep, 21),
    "gghz-dependent": (gghz_dependent, 15),
    "class99-sweep": (class99_sweep, 15),
    "monogamy-scan": (monogamy_scan, 10000),
    "cqqc-null": (cqqc_null, 200),
    "bisep-w": (bisep_w_suite, 50),
    "ghz-w-mix": (ghz_w_mix, 11),
    "appendix-sixqubit": (appendix_sixqubit, 0),
}


def run_suite(name: str, grid: Optional[int] = None, tol: float = DEFAULT_TOL,
              seed: int = 0, jobs: int = 1) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn, default = SUITES[name]
    return fn(grid=default if grid is None else grid, tol=tol, seed=seed, jobs=jobs)
