import csv
import io
import math

import numpy as np
import pytest

from werner_metrology.channels import phase_derivative, phase_generator, phase_imprint
from werner_metrology.errors import DivergentInformationError, DomainError, InvalidStateError
from werner_metrology.fisher import (
    FisherReport,
    classical_fisher,
    fisher_bell_closed,
    fisher_bell_printed,
    fisher_local_closed,
    qfi_adaptive_closed,
    qfi_coherent_closed,
    qfi_unitary_family,
    reports_to_csv,
)
from werner_metrology.measurements import (
    OutcomeDistribution,
    Povm,
    VisibilityModelParams,
    adaptive_project,
    bell_povm,
    grouped_bell_povm,
    model_bell_probs,
    model_local_probs,
    probabilities,
)
from werner_metrology.states import DensityMatrix, PureState, werner

from helpers import random_povm_operators

ETA101 = np.linspace(0, 1, 101)
Q = math.pi / 4
GEN_1Q = np.diag([0.0, 2.0])


def bell_probs_printed(phi, eta):
    """Bell-basis probabilities written out directly (works for complex phi)."""
    c = np.cos(2 * phi)
    return np.array([(1 + eta) / 4 + eta * c / 2, (1 + eta) / 4 - eta * c / 2, (1 - eta) / 4 + 0 * c, (1 - eta) / 4 + 0 * c])


def local_probs_printed(phi, eta):
    c = np.cos(2 * phi)
    return np.array([(1 + eta * c) / 4, (1 - eta * c) / 4, (1 - eta * c) / 4, (1 + eta * c) / 4])


def brute_force_fisher(prob_fn, phi, eta):
    # complex-step derivative: exact to rounding, independent of any analytic slope
    h = 1e-20
    p = prob_fn(phi, eta)
    dp = np.imag(prob_fn(phi + 1j * h, eta)) / h
    keep = p > 1e-14
    return float(np.sum(dp[keep] ** 2 / p[keep]))


def test_classical_fisher_examples():
    assert classical_fisher(model_bell_probs(Q, VisibilityModelParams(1, 1))) == pytest.approx(4, abs=1e-12)
    assert classical_fisher(model_local_probs(Q, VisibilityModelParams(0.5, 1))) == pytest.approx(1, abs=1e-12)
    flat = OutcomeDistribution(("a", "b"), np.array([0.3, 0.7]), np.array([0.0, 0.0]))
    assert classical_fisher(flat) == 0.0


def test_classical_fisher_requires_derivatives():
    with pytest.raises(InvalidStateError):
        classical_fisher(OutcomeDistribution(("a",), np.array([1.0])))


def test_classical_fisher_divergence_is_explicit():
    dist = OutcomeDistribution(("a", "b"), np.array([1.0, 0.0]), np.array([-0.5, 0.5]))
    with pytest.raises(DivergentInformationError):
        classical_fisher(dist)


def test_zero_over_zero_terms_drop():
    # eta = 1, phi = 0: P_B10 = 0 with zero slope
    assert classical_fisher(model_bell_probs(0.0, VisibilityModelParams(1, 1))) == 0.0


def test_qfi_werner_values():
    for eta, expected in [(0.25, 0.4), (0.5, 4 / 3), (0.75, 18 / 7), (1.0, 4.0), (0.0, 0.0)]:
        assert qfi_unitary_family(werner(eta), phase_generator()) == pytest.approx(expected, abs=1e-10)


def test_qfi_phase_independent():
    ref = qfi_unitary_family(werner(0.6), phase_generator())
    for phi in np.linspace(0, math.pi, 7):
        assert qfi_unitary_family(phase_imprint(werner(0.6), phi), phase_generator()) == pytest.approx(ref, abs=1e-10)


def test_qfi_pure_state_is_four_times_variance(rng):
    for _ in range(20):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi = a / np.linalg.norm(a)
        h = np.diag([0.0, 1.0, 1.0, 2.0])
        var = np.vdot(psi, h @ h @ psi).real - np.vdot(psi, h @ psi).real ** 2
        rho = DensityMatrix(np.outer(psi, psi.conj()))
        assert qfi_unitary_family(rho, h) == pytest.approx(4 * var, abs=1e-9)


def test_qfi_rejects_invalid():
    with pytest.raises(InvalidStateError):
        qfi_unitary_family(np.eye(4) / 4, phase_generator())


def test_qfi_conditional_state():
    plus = PureState(np.array([1, 1]) / math.sqrt(2))
    _, cond = adaptive_project(phase_imprint(werner(0.5), 0.3), plus)
    assert qfi_unitary_family(cond, GEN_1Q) == pytest.approx(1.0, abs=1e-10)


def test_qfi_closed_forms():
    assert qfi_coherent_closed(1) == 4
    assert qfi_coherent_closed(0) == 0
    assert qfi_coherent_closed(0.5) == pytest.approx(4 / 3)
    with pytest.raises(DomainError):
        qfi_coherent_closed(1.2)
    s = 1 / math.sqrt(2)
    assert qfi_adaptive_closed(s, s, 1.0) == pytest.approx(4)
    for eta in (0.0, 0.4, 1.0):
        assert qfi_adaptive_closed(1, 0, eta) == 0
    with pytest.raises(DomainError):
        qfi_adaptive_closed(1, 1, 0.5)


def test_qfi_adaptive_matches_eigendecomposition(rng):
    for i in range(50):
        if i % 2:
            a = np.array([1, np.exp(1j * rng.uniform(0, 2 * math.pi))]) / math.sqrt(2)
        else:
            a = rng.normal(size=2) + 1j * rng.normal(size=2)
            a /= np.linalg.norm(a)
        for eta in (0.1, 0.5, 0.9, 1.0):
            _, cond = adaptive_project(phase_imprint(werner(eta), 0.7), PureState(a))
            expected = qfi_adaptive_closed(np.conj(a[0]), np.conj(a[1]), eta)
            assert qfi_unitary_family(cond, GEN_1Q) == pytest.approx(expected, abs=1e-9)


def test_bell_closed_examples():
    for eta in ETA101:
        assert fisher_bell_closed(Q, eta) == pytest.approx(qfi_coherent_closed(eta), abs=1e-10)
    assert fisher_bell_closed(0.0, 0.7) == 0.0
    assert fisher_bell_closed(0.3, 0.8) == pytest.approx(brute_force_fisher(bell_probs_printed, 0.3, 0.8), abs=1e-10)


def test_local_closed_examples():
    for eta in ETA101:
        assert fisher_local_closed(Q, eta) == pytest.approx(4 * eta**2, abs=1e-12)
    assert fisher_local_closed(0.0, 0.6) == 0.0
    assert fisher_local_closed(math.pi / 8, 1.0) == pytest.approx(4.0, abs=1e-12)
    assert brute_force_fisher(local_probs_printed, math.pi / 8, 1.0) == pytest.approx(4.0, abs=1e-12)


def test_closed_forms_match_classical_fisher():
    for eta in np.linspace(0, 1, 21):
        for phi in np.linspace(0.01, math.pi / 2 - 0.01, 21):
            params = VisibilityModelParams(eta, 1.0)
            assert fisher_bell_closed(phi, eta) == pytest.approx(classical_fisher(model_bell_probs(phi, params)), abs=1e-10)
            assert fisher_local_closed(phi, eta) == pytest.approx(classical_fisher(model_local_probs(phi, params)), abs=1e-10)


def test_printed_bell_formula_disagrees_off_quarter_pi():
    assert fisher_bell_printed(Q, 0.6) == pytest.approx(fisher_bell_closed(Q, 0.6), abs=1e-12)
    assert abs(fisher_bell_printed(0.3, 0.6) - brute_force_fisher(bell_probs_printed, 0.3, 0.6)) > 1e-2


def test_stationary_at_quarter_pi():
    h = 1e-5
    for eta in ETA101:
        slope = (fisher_bell_closed(Q + h, eta) - fisher_bell_closed(Q - h, eta)) / (2 * h)
        assert abs(slope) <= 1e-6


def test_global_dominates_local():
    for eta in ETA101:
        gap = fisher_bell_closed(Q, eta) - fisher_local_closed(Q, eta)
        if eta in (0.0, 1.0):
            assert abs(gap) <= 1e-10
        else:
            assert gap > 1e-10


def test_random_povms_bounded_by_qfi(rng):
    for _ in range(200):
        k = int(rng.integers(2, 7))
        ops = random_povm_operators(rng, k)
        povm = Povm(tuple(str(i) for i in range(k)), tuple(ops))
        eta, phi = rng.uniform(0, 1), rng.uniform(0, math.pi)
        rho = phase_imprint(werner(eta), phi)
        fi = classical_fisher(probabilities(povm, rho, phase_derivative(rho)))
        assert fi <= qfi_unitary_family(werner(eta), phase_generator()) + 1e-9


def test_grouping_keeps_information():
    for eta in np.linspace(0.05, 0.95, 10):
        for phi in np.linspace(0.1, 1.4, 10):
            rho = phase_imprint(werner(eta), phi)
            d = phase_derivative(rho)
            full = classical_fisher(probabilities(bell_povm(), rho, d))
            grouped = classical_fisher(probabilities(grouped_bell_povm(), rho, d))
            assert grouped == pytest.approx(full, abs=1e-10)


def test_visibility_degrades_information():
    for eta in (0.3, 0.7, 1.0):
        for phi in (0.2, Q, 1.2):
            values = [classical_fisher(model_bell_probs(phi, VisibilityModelParams(eta, v))) for v in np.linspace(0, 1, 21)]
            assert np.all(np.diff(values) >= -1e-12)


def test_fisher_report_csv():
    text = reports_to_csv([FisherReport("bell", Q, 0.5, 1.0, 4 / 3)])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["strategy", "eta", "phi", "visibility", "value"]
    assert rows[1][0] == "bell" and float(rows[1][4]) == pytest.approx(4 / 3)
    with pytest.raises(DomainError):
        FisherReport("bell", Q, 0.5, 1.0, -1.0)
