import math

import numpy as np
import pytest

from mcbound import bounds, oracle, qstate
from mcbound.errors import DomainError, PartyCountError, SizeError
from mcbound.pure import concurrence_pure
from mcbound.qstate import DensityMatrix


def test_batch_concurrence_matches_pure_module():
    for dims in [(2, 2), (2, 3, 2), (2, 2, 2, 3)]:
        phis = [qstate.random_pure(dims, s) for s in range(4)]
        got = oracle.batch_concurrence(np.stack([p.amplitudes for p in phis]), dims)
        want = [concurrence_pure(p).value for p in phis]
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_roof_of_pure_state_is_its_concurrence():
    phi = qstate.random_pure((2, 2, 3), 6)
    assert oracle.convex_roof_upper(phi, trials=5) == pytest.approx(concurrence_pure(phi).value, abs=1e-10)


def test_roof_of_diagonal_mixture_is_zero():
    rho = DensityMatrix((2, 3), np.diag([0.1, 0.2, 0.3, 0.1, 0.2, 0.1]))
    assert oracle.convex_roof_upper(rho, trials=10) == pytest.approx(0.0, abs=1e-10)


def test_roof_monotone_and_deterministic():
    rho = qstate.random_density((2, 2, 2), 3)
    one = oracle.convex_roof_upper(rho, trials=1, seed=4)
    many = oracle.convex_roof_upper(rho, trials=100, seed=4)
    assert many <= one
    assert oracle.convex_roof_upper(rho, trials=100, seed=4) == many


def test_best_ensemble_reconstructs():
    rho = qstate.random_density((2, 3), 2)
    value, ens = oracle.convex_roof_search(rho, trials=20, seed=1)
    np.testing.assert_allclose(ens.reconstruct().matrix, rho.matrix, atol=1e-8)
    assert ens.average_concurrence() == pytest.approx(value, abs=1e-10)


def test_roof_errors():
    rho = qstate.random_density((2, 2, 2), 0)
    with pytest.raises(SizeError):
        oracle.convex_roof_upper(rho, trials=1, max_rank=4)
    with pytest.raises(DomainError):
        oracle.convex_roof_upper(DensityMatrix((2, 2), np.eye(4) / 8), trials=1)


def test_monogamy_examples():
    assert oracle.monogamy_residual(qstate.ghz(3)) == pytest.approx(1.0, abs=1e-9)
    assert oracle.monogamy_residual(qstate.w_state(3)) == pytest.approx(0.0, abs=1e-9)
    assert oracle.monogamy_residual(qstate.basis_state((2, 2, 2), (0, 1, 0))) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(PartyCountError):
        oracle.monogamy_residual(qstate.ghz(4))


def test_pairwise_margin_on_ghz():
    # C3^2(GHZ) = 3/2 and every pairwise concurrence vanishes
    assert oracle.pairwise_sum_margin(qstate.ghz(3)) == pytest.approx(1.5, abs=1e-9)


def test_projection_margin_examples():
    prod = qstate.basis_state((3, 3, 2), (1, 0, 1))
    assert oracle.projection_margin(prod) == pytest.approx(0.0, abs=1e-12)
    # s = d: one substate, the state itself
    phi = qstate.random_pure((2, 2, 2, 2), 1)
    assert oracle.thm4_projection_margin(phi, 2) == pytest.approx(0.0, abs=1e-12)


def test_suites_pass_small():
    checks = oracle.inequality_suite(seed=1, samples=8) + oracle.formula_suite(seed=1, samples=4)
    assert all(c.passed for c in checks), [c.to_dict() for c in checks if not c.passed]


def test_check_semantics():
    assert oracle.Check("m", -1e-9, 1e-8, "margin", 1).passed
    assert not oracle.Check("m", -1e-7, 1e-8, "margin", 1).passed
    assert not oracle.Check("d", 1e-7, 1e-8, "deviation", 1).passed
