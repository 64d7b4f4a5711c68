"""Membership in the polytopes L ⊂ L2 ⊂ R, region classification and the
3-decomposition ``P = μ P_Sv + ν P_M + (1 - μ - ν) P_rest``.

Membership is decided by the simplex in ``tribox.simplex`` on correlator
coordinates: a nonsignaling box is fixed by ``(1, 26 correlators)``, so the 27
rows are equivalent to matching all 64 probabilities plus normalization.
Every verdict is checked back in probability space before it is returned.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .box import CORRELATOR_KEYS, TOL_QUANTUM, Behavior, mix, probs_to_correlators
from .canonical import (
    CanonicalVertex, N_MM, deterministic_vertices, mermin_box_mm, mermin_inequality_of,
    pr_vertices, svetlichny_box, svetlichny_vertices,
)
from .exceptions import LPNumericalFailure, NotInR, ResidualInvalid
from .measures import (
    class99_value, mermin_discord, mermin_values, svetlichny_discord, svetlichny_values,
)
from .simplex import FEAS_TOL, feasible_point

SET_NAMES = ("L", "L2", "R")
CERT_TOL = 1e-8


@dataclass(frozen=True)
class VertexSet:
    name: str
    labels: tuple[CanonicalVertex, ...]
    vertices: tuple[Behavior, ...] = field(repr=False)
    probs: np.ndarray = field(repr=False)       # (n_vertices, 64)
    lp_matrix: np.ndarray = field(repr=False)   # (27, n_vertices)

    def __len__(self):
        return len(self.vertices)


@lru_cache(maxsize=None)
def vertex_set(name: str, pr_offsets: bool = True) -> VertexSet:
    """``L``: 64 deterministic boxes; ``L2``: plus the PR vertices; ``R``: plus
    the 16 Svetlichny boxes.

    ``pr_offsets`` includes PR vertices whose third party outputs ``εk ⊕ 1``
    (96 PR vertices instead of 48).  Without them the Mermin box is not a
    two-way local mixture.
    """
    if name not in SET_NAMES:
        raise ValueError(f"vertex set must be one of {SET_NAMES}, got {name!r}")
    labels = deterministic_vertices()
    if name in ("L2", "R"):
        labels += pr_vertices(with_offset=pr_offsets)
    if name == "R":
        labels += svetlichny_vertices()
    vertices = tuple(v.box() for v in labels)
    probs = np.array([v.flat for v in vertices])
    lp = np.vstack([np.ones(len(vertices)), probs_to_correlators(probs).T])
    for arr in (probs, lp):
        arr.setflags(write=False)
    return VertexSet(name, tuple(labels), vertices, probs, lp)


@dataclass(frozen=True)
class Witness:
    """A known functional whose bound for the set is exceeded."""

    name: str
    value: float
    bound: float


@dataclass(frozen=True)
class MembershipResult:
    set_name: str
    inside: bool
    weights: Optional[np.ndarray] = None
    labels: tuple[str, ...] = ()
    witness: Optional[Witness] = None
    # outside: sum_c coeffs[c] * <c> <= bound holds on every vertex and fails on the box
    separating: Optional[dict[str, float]] = None
    separating_bound: Optional[float] = None
    reconstruction_error: Optional[float] = None

    def support(self, atol: float = 1e-12) -> list[tuple[str, float]]:
        if self.weights is None:
            return []
        return [(lab, float(w)) for lab, w in zip(self.labels, self.weights) if w > atol]

    def to_dict(self) -> dict:
        out = {"set": self.set_name, "inside": self.inside}
        if self.inside:
            out["weights"] = {lab: float(w) for lab, w in zip(self.labels, self.weights)}
            out["reconstruction_error"] = self.reconstruction_error
        else:
            out["witness"] = None if self.witness is None else vars(self.witness).copy()
            out["separating"] = self.separating
            out["separating_bound"] = self.separating_bound
        return out


def _witness(b: Behavior, name: str) -> Optional[Witness]:
    found = []
    if name == "L":
        m = mermin_values(b)
        k = int(np.argmax(m))
        found.append(Witness(f"mermin:{k:04b}", float(m[k]), 2.0))
    if name in ("L", "L2"):
        s = svetlichny_values(b)
        k = int(np.argmax(s))
        found.append(Witness(f"svetlichny:{k:04b}", float(s[k]), 4.0))
    found.append(Witness("class99", class99_value(b), 3.0))
    violated = [w for w in found if w.value > w.bound + 1e-9]
    if not violated:
        return None
    return max(violated, key=lambda w: w.value - w.bound)


def membership(b: Behavior, vs: VertexSet | str, exact: bool = False,
               tol: float = FEAS_TOL) -> MembershipResult:
    """Decide whether ``b`` is a convex mixture of the vertices of ``vs``.

    Inside comes with convex weights that reproduce ``b`` within 1e-8 per
    probability; outside comes with a separating functional on the
    correlators and, when one of the known inequalities is violated, a witness.
    """
    if isinstance(vs, str):
        vs = vertex_set(vs)
    A = vs.lp_matrix
    target = np.concatenate([[1.0], b.correlators.values])
    if exact:
        result = feasible_point(
            [[Fraction(v) for v in row] for row in A], [Fraction(v) for v in target], exact=True
        )
    else:
        result = feasible_point(A, target, tol=tol)
    labels = tuple(v.label for v in vs.labels)

    if result.feasible:
        w = np.array([float(v) for v in result.x])
        err = float(np.max(np.abs(w @ vs.probs - b.flat)))
        if w.min() < -1e-9 or abs(w.sum() - 1) > 1e-9 or err > CERT_TOL:
            raise LPNumericalFailure(
                f"certificate for {vs.name} does not reproduce the box (error {err:.3e})"
            )
        return MembershipResult(vs.name, True, w, labels, reconstruction_error=err)

    y = np.array([float(v) for v in result.farkas])
    y = y / np.max(np.abs(y[1:])) if np.any(y[1:]) else y
    on_vertices = float(np.max(y @ A))
    on_box = float(y @ target)
    if not on_box > on_vertices:
        raise LPNumericalFailure(
            f"infeasibility certificate for {vs.name} does not separate the box"
        )
    coeffs = {key: float(c) for key, c in zip(CORRELATOR_KEYS, y[1:]) if c != 0}
    return MembershipResult(
        vs.name, False, labels=labels, witness=_witness(b, vs.name),
        separating=coeffs, separating_bound=float(on_vertices - y[0]),
    )


class Region(str, enum.Enum):
    BELL_LOCAL = "BellLocal"
    TWO_WAY_NONLOCAL = "TwoWayNonlocal"
    THREE_WAY_NONLOCAL_IN_R = "ThreeWayNonlocalInR"
    OUTSIDE_R = "OutsideR"


def classify_region(b: Behavior, exact: bool = False) -> Region:
    if membership(b, vertex_set("L"), exact).inside:
        return Region.BELL_LOCAL
    if membership(b, vertex_set("L2"), exact).inside:
        return Region.TWO_WAY_NONLOCAL
    if membership(b, vertex_set("R"), exact).inside:
        return Region.THREE_WAY_NONLOCAL_IN_R
    return Region.OUTSIDE_R


@lru_cache(maxsize=None)
def _mm_variant_by_inequality() -> dict[tuple[int, ...], int]:
    return {mermin_inequality_of(v): v for v in range(N_MM)}


@dataclass(frozen=True)
class ThreeDecomposition:
    mu: float
    nu: float
    svet_tag: tuple[int, int, int, int]
    mermin_tag: tuple[int, int, int, int]
    mermin_variant: int
    residual: Optional[Behavior]
    residual_G: Optional[float]
    residual_Q: Optional[float]
    residual_regions: dict[str, bool]
    reconstruction_error: float

    def terms(self) -> list[tuple[float, Behavior]]:
        out = [(self.mu, svetlichny_box(*self.svet_tag)),
               (self.nu, mermin_box_mm(self.mermin_variant))]
        if self.residual is not None:
            out.append((1 - self.mu - self.nu, self.residual))
        return out

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "nu": self.nu,
            "svetlichny_box": "sv:" + "".join(map(str, self.svet_tag)),
            "mermin_inequality": "".join(map(str, self.mermin_tag)),
            "mermin_box": f"mm:{self.mermin_variant}",
            "residual": None if self.residual is None else [float(v) for v in self.residual.flat],
            "residual_G": self.residual_G,
            "residual_Q": self.residual_Q,
            "residual_inside": self.residual_regions,
            "reconstruction_error": self.reconstruction_error,
        }


def _tag(k: int) -> tuple[int, int, int, int]:
    return tuple(int(c) for c in f"{k:04b}")


def three_decomposition(b: Behavior, check_membership: bool = True,
                        residual_regions: Sequence[str] = ("L", "L2")) -> ThreeDecomposition:
    """Split ``b`` into a Svetlichny box, a Mermin box and a G=Q=0 remainder.

    ``μ = G/8`` and ``ν = Q/4``.  The Svetlichny box is the one whose
    functional is largest on ``b``, the Mermin box the one saturating the
    Mermin functional largest on ``b``.
    """
    if check_membership and not membership(b, vertex_set("R")).inside:
        raise NotInR("box is not in the Svetlichny-box polytope")
    mu = svetlichny_discord(b) / 8
    nu = mermin_discord(b) / 4
    s_tag = _tag(int(np.argmax(svetlichny_values(b))))
    m_tag = _tag(int(np.argmax(mermin_values(b))))
    variant = _mm_variant_by_inequality()[m_tag]
    sv, mm = svetlichny_box(*s_tag), mermin_box_mm(variant)
    rest = 1 - mu - nu

    residual = res_g = res_q = None
    regions: dict[str, bool] = {}
    if rest > 1e-12:
        table = (b.probs - mu * sv.probs - nu * mm.probs) / rest
        try:
            residual = Behavior(table, tol=TOL_QUANTUM / rest)
        except ValueError as exc:
            raise ResidualInvalid(
                f"residual with mu={mu:.6g}, nu={nu:.6g} is not a valid box: {exc}"
            ) from exc
        res_g, res_q = svetlichny_discord(residual), mermin_discord(residual)
        for name in residual_regions:
            regions[name] = membership(residual, vertex_set(name)).inside
        recon = mu * sv.probs + nu * mm.probs + rest * residual.probs
    else:
        recon = mu * sv.probs + nu * mm.probs
    err = float(np.max(np.abs(recon - b.probs)))
    return ThreeDecomposition(mu, nu, s_tag, m_tag, variant, residual, res_g, res_q, regions, err)


def verify_decomposition(b: Behavior, terms: Sequence[tuple[float, Behavior]],
                         atol: float = 1e-8) -> bool:
    """True iff the convex mixture of ``terms`` equals ``b`` within ``atol`` per entry."""
    mixed = mix(terms, tol=TOL_QUANTUM)
    return mixed.distance(b) <= atol
