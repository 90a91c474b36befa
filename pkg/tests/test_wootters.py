import numpy as np
import pytest

from mcbound import qstate, wootters
from mcbound.errors import DimensionError, HermiticityError, PSDViolation


def werner(p):
    bell = qstate.to_density(qstate.ghz(2)).matrix
    return p * bell + (1 - p) * np.eye(4) / 4


def test_bell_and_maximally_mixed():
    assert wootters.concurrence_two_qubit(werner(1.0)) == pytest.approx(1.0, abs=1e-10)
    assert wootters.concurrence_two_qubit(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_werner(p):
    assert wootters.concurrence_two_qubit(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-8)


def test_homogeneous():
    rho = qstate.random_density((2, 2), 4)
    c = wootters.concurrence_two_qubit(rho)
    assert wootters.concurrence_two_qubit(rho.matrix * 0.37) == pytest.approx(0.37 * c, abs=1e-12)
    assert wootters.concurrence_two_qubit(np.zeros((4, 4))) == 0.0


def test_pure_state_agrees_with_formula():
    phi = qstate.random_pure((2, 2), 8)
    a = phi.amplitudes
    expected = 2 * abs(a[0] * a[3] - a[1] * a[2])
    assert wootters.concurrence_two_qubit(qstate.to_density(phi)) == pytest.approx(expected, abs=1e-9)


def test_spin_flip_of_bell_is_bell():
    bell = werner(1.0)
    np.testing.assert_allclose(wootters.spin_flip(bell), bell, atol=1e-15)


def test_errors():
    with pytest.raises(DimensionError):
        wootters.concurrence_two_qubit(np.eye(3) / 3)
    with pytest.raises(DimensionError):
        wootters.concurrence_two_qubit(qstate.random_density((4,), 0))
    with pytest.raises(HermiticityError):
        wootters.concurrence_two_qubit(np.triu(np.ones((4, 4))) / 4)
    with pytest.raises(PSDViolation):
        wootters.concurrence_two_qubit(np.diag([0.6, 0.6, 0.0, -0.2]))


def test_batch():
    stack = np.stack([werner(p) for p in (0.2, 0.6, 1.0)])
    np.testing.assert_allclose(wootters.concurrence_many(stack), [0.0, 0.4, 1.0], atol=1e-10)
    assert wootters.concurrence_many(np.zeros((0, 4, 4))).shape == (0,)
