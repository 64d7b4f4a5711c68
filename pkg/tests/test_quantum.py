import numpy as np
import pytest

import oracles
from tribox.exceptions import BadParameters, InvalidSettings, InvalidState, SignalingDetected
from tribox.quantum import (
    CQ_KINDS, DensityOperator, MeasurementSettings, QuantumScenario, born_box, cq_qc_terms,
    concurrences_w_class, ghz, ghz_class, ghz_w, make_settings, make_state, random_settings,
    sample_cq_qc, scenario_from_dict, sixqubit_4sep, sixqubit_partial, sixqubit_strategy,
    tau3_ghz_class, w_class, werner,
)


def test_born_rule_matches_kron(rng):
    for _ in range(3):
        rho = sample_cq_qc("QC13|2", int(rng.integers(1000)))
        s = random_settings(rng)
        assert np.allclose(born_box(rho, s).probs, oracles.born(rho.matrix, s.directions), atol=1e-13)
    s = random_settings(rng)
    assert np.allclose(born_box(ghz(), s).probs, oracles.born(ghz().matrix, s.directions), atol=1e-13)


def test_state_validation():
    with pytest.raises(InvalidState):
        DensityOperator(np.eye(8))
    with pytest.raises(InvalidState):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        DensityOperator(np.eye(3) / 3)
    with pytest.raises(BadParameters):
        w_class(0.5, 0.5, 0.5)
    with pytest.raises(BadParameters):
        werner(1.2)
    with pytest.raises(BadParameters):
        ghz_w(0.5, 0.6)
    with pytest.raises(InvalidSettings):
        MeasurementSettings(np.zeros((3, 2, 3)))


def test_tangle_and_concurrence_closed_forms(rng):
    for _ in range(10):
        t, t3 = rng.uniform(0, np.pi / 2, 2)
        psi = np.array([np.cos(t), 0, 0, 0, 0, 0, np.sin(t) * np.cos(t3), np.sin(t) * np.sin(t3)])
        assert tau3_ghz_class(t, t3) == pytest.approx(oracles.three_tangle(psi), abs=1e-12)
        assert ghz_class(t, t3).matrix == pytest.approx(np.outer(psi, psi))
        v = rng.dirichlet(np.ones(3)) ** 0.5
        rho = w_class(*v)
        c12, c13, c23 = concurrences_w_class(*v)
        assert c12 == pytest.approx(oracles.wootters(rho.partial_trace([0, 1]).matrix), abs=1e-7)
        assert c13 == pytest.approx(oracles.wootters(rho.partial_trace([0, 2]).matrix), abs=1e-7)
        assert c23 == pytest.approx(oracles.wootters(rho.partial_trace([1, 2]).matrix), abs=1e-7)


def test_cq_qc_structure():
    for kind in CQ_KINDS:
        w, pairs, singles = cq_qc_terms(kind, 3)
        rho = sample_cq_qc(kind, 3)
        lone = {"CQ": 0, "QC12|3": 2, "QC13|2": 1}[kind]
        single = sum(wt * s for wt, s in zip(w, singles))
        assert np.allclose(rho.partial_trace([lone]).matrix, single)
        pair = sum(wt * p for wt, p in zip(w, pairs))
        rest = [q for q in range(3) if q != lone]
        assert np.allclose(rho.partial_trace(rest).matrix, pair)


def test_sixqubit_states():
    four = sixqubit_4sep()
    assert four.n_qubits == 6
    part = sixqubit_partial()
    assert np.trace(part.matrix).real == pytest.approx(1)
    # the printed y-pairs make Alice's input visible in Bob and Charlie's marginal
    with pytest.raises(SignalingDetected):
        QuantumScenario(part, sixqubit_strategy()).box()
    b = QuantumScenario(sixqubit_4sep("even"), sixqubit_strategy()).box()
    assert np.max(np.abs(b.correlators.values[:18])) < 1e-12


def test_registries():
    assert make_state("werner", p=0.25).n_qubits == 3
    with pytest.raises(BadParameters):
        make_state("werner", theta=1)
    with pytest.raises(BadParameters):
        make_settings("nope")
    s = scenario_from_dict({"state": {"name": "gghz", "theta": 0.3}, "settings": {"name": "sd_xy"}})
    assert s.box().flat.sum() == pytest.approx(8)
    s = scenario_from_dict({"state": {"name": "ghz"}, "settings": {"vectors": np.eye(3)[[0, 1, 0, 1, 0, 1]].tolist()}})
    assert s.box().correlators["A0B0C0"] == pytest.approx(1)
    with pytest.raises(BadParameters):
        scenario_from_dict({"state": {"name": "ghz"}})
