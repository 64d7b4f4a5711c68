"""Boxes from projective qubit measurements, P = Tr(ρ Π_a ⊗ Π_b ⊗ Π_c).

Party A is the most significant qubit.  Projectors are ``(1 ± n·σ)/2`` with
``σy = [[0, -i], [i, 0]]``.
"""
from __future__ import annotations

import inspect
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .box import TOL_QUANTUM, Behavior
from .exceptions import BadParameters, InvalidSettings, InvalidState

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SX, SY, SZ])

X_AXIS, Y_AXIS, Z_AXIS = np.eye(3)
R2 = np.sqrt(2.0)


class DensityOperator:
    """Validated density matrix on ``n`` qubits (n ≤ 6)."""

    __slots__ = ("matrix", "n_qubits")

    def __init__(self, matrix, *, check: bool = True):
        m = np.array(matrix, dtype=complex)
        dim = m.shape[0]
        n = int(round(np.log2(dim))) if dim > 0 else -1
        if m.ndim != 2 or m.shape != (dim, dim) or 2**n != dim or not 1 <= n <= 6:
            raise InvalidState(f"expected a 2^n x 2^n matrix with n <= 6, got shape {m.shape}")
        if check:
            herm = np.max(np.abs(m - m.conj().T))
            if herm > 1e-12:
                raise InvalidState(f"not Hermitian (deviation {herm:.3e})")
            tr = np.trace(m).real
            if abs(tr - 1) > 1e-12:
                raise InvalidState(f"trace is {tr:.15g}, expected 1")
            low = np.linalg.eigvalsh(m).min()
            if low < -1e-10:
                raise InvalidState(f"not positive semidefinite (eigenvalue {low:.3e})")
        m.setflags(write=False)
        self.matrix = m
        self.n_qubits = n

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_ket(cls, psi) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        nrm = np.linalg.norm(psi)
        if nrm == 0:
            raise InvalidState("zero vector")
        psi = psi / nrm
        return cls(np.outer(psi, psi.conj()))

    def partial_trace(self, keep: Sequence[int]) -> "DensityOperator":
        """Reduce to the qubits in ``keep`` (in the given order)."""
        n = self.n_qubits
        keep = list(keep)
        drop = [q for q in range(n) if q not in keep]
        t = self.matrix.reshape((2,) * (2 * n))
        t = t.transpose(keep + drop + [n + q for q in keep] + [n + q for q in drop])
        dk, dd = 2 ** len(keep), 2 ** len(drop)
        t = t.reshape(dk, dd, dk, dd)
        return DensityOperator(np.einsum("arbr->ab", t), check=False)

    def __repr__(self):
        return f"DensityOperator(n_qubits={self.n_qubits})"


def ket(amplitudes: dict[str, complex]) -> np.ndarray:
    """State vector from ``{"010": amp, ...}`` (unnormalized amplitudes allowed)."""
    n = len(next(iter(amplitudes)))
    v = np.zeros(2**n, dtype=complex)
    for bits, amp in amplitudes.items():
        v[int(bits, 2)] += amp
    return v


def mixture(terms: Sequence[tuple[float, DensityOperator]]) -> DensityOperator:
    return DensityOperator(sum(w * rho.matrix for w, rho in terms))


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    if abs(np.linalg.norm(v) - 1) > 1e-12:
        raise InvalidSettings(f"direction {v} is not a unit vector (norm {np.linalg.norm(v):.15g})")
    return v


@dataclass(frozen=True)
class MeasurementSettings:
    """Unit Bloch directions, ``directions[party, input]``, shape (3, 2, 3)."""

    directions: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        d = np.array(self.directions, dtype=float)
        if d.shape != (3, 2, 3):
            raise InvalidSettings(f"expected 3 parties x 2 inputs x 3 components, got {d.shape}")
        for row in d.reshape(6, 3):
            _unit(row)
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)

    @classmethod
    def from_vectors(cls, a0, a1, b0, b1, c0, c1, name: str = "custom") -> "MeasurementSettings":
        return cls(np.array([[a0, a1], [b0, b1], [c0, c1]], dtype=float), name)

    def projectors(self) -> np.ndarray:
        """``Π[party, input, outcome]`` as 2x2 matrices, shape (3, 2, 2, 2, 2)."""
        ns = np.einsum("pxc,cab->pxab", self.directions, PAULI)
        plus = 0.5 * (I2 + ns)
        minus = 0.5 * (I2 - ns)
        return np.stack([plus, minus], axis=2)


def born_box(rho: DensityOperator, settings: MeasurementSettings) -> Behavior:
    if not isinstance(rho, DensityOperator) or rho.n_qubits != 3:
        raise InvalidState("born_box needs a three-qubit density operator")
    if not isinstance(settings, MeasurementSettings):
        raise InvalidSettings("expected MeasurementSettings")
    proj = settings.projectors()
    r = rho.matrix.reshape((2,) * 6)
    p = np.einsum("abcdef,imda,jneb,kofc->ijkmno", r, proj[0], proj[1], proj[2], optimize=True)
    if np.max(np.abs(p.imag)) > 1e-10:
        raise InvalidState("complex probabilities; the operator is not Hermitian")
    return Behavior(p.real, tol=TOL_QUANTUM)


@dataclass(frozen=True)
class BlockStrategy:
    """Six-qubit strategy in which Alice's input picks the three qubits everyone measures.

    ``blocks[i]`` lists the (Alice, Bob, Charlie) qubits used when Alice's
    input is ``i``; each party measures along ``settings.directions[party, input]``.
    """

    blocks: tuple[tuple[int, int, int], tuple[int, int, int]]
    settings: MeasurementSettings


def born_box_blocked(rho6: DensityOperator, strategy: BlockStrategy) -> Behavior:
    proj = strategy.settings.projectors()
    table = np.empty((2,) * 6)
    for i, block in enumerate(strategy.blocks):
        r = rho6.partial_trace(block).matrix.reshape((2,) * 6)
        p = np.einsum("abcdef,mda,jneb,kofc->jkmno", r, proj[0, i], proj[1], proj[2], optimize=True)
        table[i] = p.real
    # a strategy that lets Alice's input steer Bob's and Charlie's qubits may signal
    return Behavior(table, tol=TOL_QUANTUM)


@dataclass(frozen=True)
class QuantumScenario:
    state: DensityOperator
    measurement: Union[MeasurementSettings, BlockStrategy]

    def box(self) -> Behavior:
        if isinstance(self.measurement, BlockStrategy):
            return born_box_blocked(self.state, self.measurement)
        return born_box(self.state, self.measurement)


# -- states ------------------------------------------------------------------

def _prob(name: str, p: float) -> float:
    if not 0 <= p <= 1:
        raise BadParameters(f"{name} must lie in [0, 1], got {p}")
    return float(p)


def ghz() -> DensityOperator:
    return DensityOperator.from_ket(ket({"000": 1, "111": 1}))


def gghz(theta: float) -> DensityOperator:
    """``cos θ |000> + sin θ |111>``."""
    return DensityOperator.from_ket(ket({"000": np.cos(theta), "111": np.sin(theta)}))


def ghz_class(theta: float, theta3: float) -> DensityOperator:
    """``cos θ |000> + sin θ |11>(cos θ3 |0> + sin θ3 |1>)``."""
    s = np.sin(theta)
    return DensityOperator.from_ket(ket({
        "000": np.cos(theta), "110": s * np.cos(theta3), "111": s * np.sin(theta3),
    }))


def w_class(alpha: float, beta: float, gamma: float) -> DensityOperator:
    """``α|100> + β|010> + γ|001>`` with real amplitudes."""
    norm = alpha**2 + beta**2 + gamma**2
    if abs(norm - 1) > 1e-9:
        raise BadParameters(f"W-class amplitudes must satisfy α²+β²+γ²=1, got {norm:.15g}")
    return DensityOperator.from_ket(ket({"100": alpha, "010": beta, "001": gamma}))


def w() -> DensityOperator:
    return DensityOperator.from_ket(ket({"100": 1, "010": 1, "001": 1}))


def werner(p: float) -> DensityOperator:
    """``p |GHZ><GHZ| + (1 - p) 1/8``."""
    p = _prob("p", p)
    return DensityOperator(p * ghz().matrix + (1 - p) * np.eye(8) / 8)


def bisep_w() -> DensityOperator:
    """Equal mixture of the three two-excitation-shared W-type pair states."""
    pairs = (("100", "010"), ("100", "001"), ("010", "001"))
    return mixture([(1 / 3, DensityOperator.from_ket(ket({a: 1, b: 1}))) for a, b in pairs])


def ghz_w(p: float, q: Optional[float] = None) -> DensityOperator:
    """``p |GHZ><GHZ| + q |W><W|`` with ``p + q = 1``."""
    p = _prob("p", p)
    q = 1 - p if q is None else _prob("q", q)
    if abs(p + q - 1) > 1e-12:
        raise BadParameters(f"p + q must equal 1, got {p + q:.15g}")
    return DensityOperator(p * ghz().matrix + q * w().matrix)


_PLUS_X = np.array([1, 1]) / R2
_MINUS_X = np.array([1, -1]) / R2
_PLUS_Y = np.array([1, 1j]) / R2
_MINUS_Y = np.array([1, -1j]) / R2
_PHI_PLUS = np.array([1, 0, 0, 1]) / R2
_PHI_MINUS = np.array([1, 0, 0, -1]) / R2
_PSI_PLUS = np.array([0, 1, 1j, 0]) / R2
_PSI_MINUS = np.array([0, 1, -1j, 0]) / R2
# even-parity analogues (|00> ± i|11>)/√2
_PSI_PLUS_EVEN = np.array([1, 0, 0, 1j]) / R2
_PSI_MINUS_EVEN = np.array([1, 0, 0, -1j]) / R2
Y_PAIRS = ("printed", "even")


def _proj(v) -> np.ndarray:
    return np.outer(v, np.conj(v))


def _psi(y_pairs: str) -> tuple[np.ndarray, np.ndarray]:
    if y_pairs == "printed":
        return _PSI_PLUS, _PSI_MINUS
    if y_pairs == "even":
        return _PSI_PLUS_EVEN, _PSI_MINUS_EVEN
    raise BadParameters(f"y_pairs must be one of {Y_PAIRS}, got {y_pairs!r}")


def _x_block() -> np.ndarray:
    return np.kron(_proj(_PLUS_X), _proj(_PHI_PLUS)) + np.kron(_proj(_MINUS_X), _proj(_PHI_MINUS))


def _y_block(y_pairs: str = "printed") -> np.ndarray:
    plus, minus = _psi(y_pairs)
    return np.kron(_proj(_PLUS_Y), _proj(plus)) + np.kron(_proj(_MINUS_Y), _proj(minus))


def sixqubit_4sep(y_pairs: str = "printed") -> DensityOperator:
    """Six-qubit 4-separable state; Alice holds qubits 0 and 3, Bob 1 and 4, Charlie 2 and 5.

    The second block pairs ``|0_y>, |1_y>`` with ``(|01> ± i|10>)/√2``.  With
    ``y_pairs="even"`` it uses ``(|00> ± i|11>)/√2`` instead, which is the
    choice that makes the block strategy reproduce a Mermin box.
    """
    return DensityOperator(np.kron(_x_block(), _y_block(y_pairs)) / 4)


def sixqubit_partial(y_pairs: str = "printed") -> DensityOperator:
    """Like ``sixqubit_4sep`` with the second block fixed to ``|0_y><0_y| ⊗ |ψ+><ψ+|``.

    The printed prefactor 1/4 leaves trace 1/2; the matrix is renormalized.
    """
    plus, _ = _psi(y_pairs)
    m = np.kron(_x_block(), np.kron(_proj(_PLUS_Y), _proj(plus)))
    return DensityOperator(m / np.trace(m).real)


def rho_ac_with_maximally_mixed_b() -> DensityOperator:
    """``ρ_AC ⊗ 1/2`` on B, with ``ρ_AC = (|00><00| + |11><11|)/2``."""
    t = np.zeros((2,) * 6, dtype=complex)
    for a in (0, 1):
        for b in (0, 1):
            t[a, b, a, a, b, a] = 0.25
    return DensityOperator(t.reshape(8, 8))


def sixqubit_strategy() -> BlockStrategy:
    """Alice's input 0 uses qubits (0, 1, 2), input 1 uses (3, 4, 5); σx/σy for everyone."""
    return BlockStrategy(((0, 1, 2), (3, 4, 5)), settings_md_xy())


def product_state(*kets) -> DensityOperator:
    psi = np.array([1.0 + 0j])
    for k in kets:
        psi = np.kron(psi, np.asarray(k, dtype=complex))
    return DensityOperator.from_ket(psi)


# -- settings ----------------------------------------------------------------

def settings_sd_xy() -> MeasurementSettings:
    x, y = X_AXIS, Y_AXIS
    return MeasurementSettings.from_vectors(x, y, (x - y) / R2, (x + y) / R2, x, y, name="sd_xy")


def settings_sd_xz() -> MeasurementSettings:
    x, z = X_AXIS, Z_AXIS
    return MeasurementSettings.from_vectors(z, x, (z + x) / R2, (z - x) / R2, z, x, name="sd_xz")


def settings_md_xy() -> MeasurementSettings:
    x, y = X_AXIS, Y_AXIS
    return MeasurementSettings.from_vectors(x, y, x, y, x, y, name="md_xy")


def settings_md_xz() -> MeasurementSettings:
    x, z = X_AXIS, Z_AXIS
    return MeasurementSettings.from_vectors(z, x, z, x, z, x, name="md_xz")


def settings_gghz_dependent(theta: float) -> MeasurementSettings:
    x, y = X_AXIS, Y_AXIS
    s, c = np.sin(2 * theta), np.cos(2 * theta)
    return MeasurementSettings.from_vectors(
        x, y, s * x - c * y, c * x + s * y, x, y, name="gghz_dependent"
    )


def settings_class99(theta: float) -> MeasurementSettings:
    x, z = X_AXIS, Z_AXIS
    ct = 1 / np.sqrt(1 + np.sin(2 * theta) ** 2)
    st = np.sqrt(1 - ct**2)
    return MeasurementSettings.from_vectors(
        z, x, ct * z + st * x, ct * z - st * x, z, x, name="class99"
    )


def settings_mixed_p(p: float) -> MeasurementSettings:
    p = _prob("p", p)
    x, y = X_AXIS, Y_AXIS
    a, b = np.sqrt(p), np.sqrt(1 - p)
    return MeasurementSettings.from_vectors(x, y, a * x - b * y, b * x + a * y, x, y, name="mixed_p")


def random_settings(rng: np.random.Generator, plane: Optional[str] = None) -> MeasurementSettings:
    """Uniform random directions; ``plane="xy"`` restricts them to the equator."""
    if plane == "xy":
        ang = rng.uniform(0, 2 * np.pi, 6)
        v = np.stack([np.cos(ang), np.sin(ang), np.zeros(6)], axis=1)
    elif plane is None:
        v = rng.normal(size=(6, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
    else:
        raise BadParameters(f"unknown plane {plane!r}")
    return MeasurementSettings(v.reshape(3, 2, 3), name="random")


# -- closed forms ------------------------------------------------------------

def tau3_ghz_class(theta: float, theta3: float) -> float:
    return float((np.sin(2 * theta) * np.sin(theta3)) ** 2)


def concurrences_w_class(alpha: float, beta: float, gamma: float) -> tuple[float, float, float]:
    return 2 * alpha * beta, 2 * alpha * gamma, 2 * beta * gamma


def ca_min(alpha: float, beta: float, gamma: float) -> float:
    """Minimal concurrence of assistance of a W-class state."""
    return float(min(concurrences_w_class(alpha, beta, gamma)))


# -- CQ / QC samples ---------------------------------------------------------

CQ_KINDS = ("CQ", "QC12|3", "QC13|2")
# the party that holds the product factor in each decomposition
_LONE_PARTY = {"CQ": 0, "QC12|3": 2, "QC13|2": 1}


def _haar_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _place(pair: np.ndarray, single: np.ndarray, lone: int) -> np.ndarray:
    """``pair ⊗ single`` with the single qubit moved to party ``lone``."""
    t = np.kron(pair, single).reshape((2,) * 6)
    others = [p for p in range(3) if p != lone]
    src = others + [lone]           # kron factor f sits at party src[f]
    order = [src.index(p) for p in range(3)]
    return t.transpose(order + [3 + o for o in order]).reshape(8, 8)


def cq_qc_terms(kind: str, seed: int, n_terms: int = 3):
    """Weights, two-qubit blocks and single-qubit states of a random CQ/QC state."""
    if kind not in CQ_KINDS:
        raise BadParameters(f"kind must be one of {CQ_KINDS}, got {kind!r}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    pairs = [_proj(_haar_ket(rng, 4)) for _ in range(n_terms)]
    singles = [_proj(_haar_ket(rng, 2)) for _ in range(n_terms)]
    return weights, pairs, singles


def sample_cq_qc(kind: str, seed: int, n_terms: int = 3) -> DensityOperator:
    """``Σ p_i ρ_i^{pair} ⊗ ρ_i^{single}`` arranged per ``kind``:
    ``CQ`` is A|BC, ``QC12|3`` is AB|C and ``QC13|2`` is AC|B."""
    weights, pairs, singles = cq_qc_terms(kind, seed, n_terms)
    lone = _LONE_PARTY[kind]
    m = sum(wt * _place(pr, sg, lone) for wt, pr, sg in zip(weights, pairs, singles))
    return DensityOperator(0.5 * (m + m.conj().T))


# -- registries used by the CLI ----------------------------------------------

STATES: dict[str, Callable[..., DensityOperator]] = {
    "ghz": ghz, "gghz": gghz, "ghz_class": ghz_class, "w_class": w_class, "w": w,
    "werner": werner, "bisep_w": bisep_w, "ghz_w": ghz_w,
    "sixqubit_4sep": sixqubit_4sep, "sixqubit_partial": sixqubit_partial,
}

SETTINGS: dict[str, Callable[..., MeasurementSettings]] = {
    "sd_xy": settings_sd_xy, "sd_xz": settings_sd_xz, "md_xy": settings_md_xy,
    "md_xz": settings_md_xz, "gghz_dependent": settings_gghz_dependent,
    "class99": settings_class99, "mixed_p": settings_mixed_p,
}


def _call(registry: dict, kind: str, name: str, params: dict):
    if name not in registry:
        raise BadParameters(f"unknown {kind} {name!r}; choose from {sorted(registry)}")
    fn = registry[name]
    accepted = inspect.signature(fn).parameters
    unknown = set(params) - set(accepted)
    if unknown:
        raise BadParameters(f"{kind} {name!r} does not take {sorted(unknown)}")
    try:
        return fn(**params)
    except TypeError as exc:
        raise BadParameters(f"{kind} {name!r}: {exc}") from exc


def make_state(name: str, **params) -> DensityOperator:
    return _call(STATES, "state", name, params)


def make_settings(name: str, **params) -> MeasurementSettings:
    return _call(SETTINGS, "settings", name, params)


def scenario_from_dict(spec: dict) -> QuantumScenario:
    """``{"state": {"name": ..., params}, "settings": {"name": ..., params}}``.

    Six-qubit states use the block strategy unless settings are given.
    """
    try:
        state_spec = dict(spec["state"])
    except (KeyError, TypeError) as exc:
        raise BadParameters("scenario needs a 'state' object") from exc
    rho = make_state(state_spec.pop("name"), **state_spec)
    if rho.n_qubits == 6:
        return QuantumScenario(rho, sixqubit_strategy())
    if "settings" not in spec:
        raise BadParameters("scenario needs a 'settings' object")
    settings_spec = dict(spec["settings"])
    if "vectors" in settings_spec:
        settings = MeasurementSettings(np.array(settings_spec["vectors"]).reshape(3, 2, 3))
    else:
        settings = make_settings(settings_spec.pop("name"), **settings_spec)
    return QuantumScenario(rho, settings)
