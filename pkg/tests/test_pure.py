import math

import numpy as np
import pytest

from mcbound import pure, qstate
from mcbound.errors import DomainError, NumericError, PartitionError, PartyCountError
from mcbound.qstate import Partition, PureState


def test_known_values():
    assert pure.concurrence_pure(qstate.ghz(3)).squared == pytest.approx(1.5, abs=1e-12)
    assert pure.concurrence_pure(qstate.w_state(3)).squared == pytest.approx(4 / 3, abs=1e-12)
    assert pure.concurrence_pure(qstate.ghz(2)).value == pytest.approx(1.0, abs=1e-12)
    assert pure.concurrence_pure(qstate.basis_state((2, 3, 2), (1, 2, 0))).value == 0.0


def test_gghz_three_qutrits():
    assert pure.concurrence_pure(qstate.ghz(3, 3)).value == pytest.approx(math.sqrt(2), abs=1e-9)


def test_example2_vector():
    assert pure.concurrence_pure(qstate.example2_vector()).value == pytest.approx(math.sqrt(7) / 2, abs=1e-9)


def test_requires_normalization():
    with pytest.raises(DomainError):
        pure.concurrence_pure(qstate.ghz(3).scaled(0.5))


def test_homogeneous_extension():
    phi = qstate.random_pure((2, 2, 3), 2)
    c = pure.concurrence_pure(phi).value
    assert pure.homogeneous_concurrence_pure(phi.scaled(math.sqrt(0.3))).value == pytest.approx(0.3 * c, rel=1e-12)
    assert pure.homogeneous_concurrence_pure(PureState((2, 2), np.zeros(4))).value == 0.0


def test_proper_subsets_order():
    assert list(pure.proper_subsets(3)) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 3), (3, 3, 3)])
def test_c3_matches_purities(dims):
    for seed in range(5):
        phi = qstate.random_pure(dims, seed)
        assert pure.c3_squared_coefficients(phi) == pytest.approx(pure.concurrence_pure(phi).squared, abs=1e-10)


@pytest.mark.parametrize("dims", [(2, 2, 2, 2), (2, 2, 2, 3)])
def test_c4_matches_purities(dims):
    for seed in range(5):
        phi = qstate.random_pure(dims, seed)
        assert pure.c4_squared_coefficients(phi) == pytest.approx(pure.concurrence_pure(phi).squared, abs=1e-10)
        assert pure.purity_identity_residual(phi) <= 1e-12


@pytest.mark.parametrize("dims", [(2, 3), (2, 2, 3), (2, 2, 2, 2), (2, 2, 2, 2, 2)])
def test_cn_matches_purities(dims):
    phi = qstate.random_pure(dims, 7)
    assert pure.cN_squared_coefficients(phi) == pytest.approx(pure.concurrence_pure(phi).squared, abs=1e-10)


def test_wrong_arity():
    with pytest.raises(PartyCountError):
        pure.c3_squared_coefficients(qstate.ghz(4))
    with pytest.raises(PartyCountError):
        pure.c4_squared_coefficients(qstate.ghz(3))


def test_partitioned():
    phi = qstate.ghz(4)
    c = pure.concurrence_partitioned(phi, Partition.parse("12|34"))
    assert c.value == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(PartitionError):
        pure.concurrence_partitioned(phi, Partition.parse("1234"))


def test_radicand_guard():
    assert pure._checked_radicand(-5e-9) == 0.0
    with pytest.raises(NumericError):
        pure._checked_radicand(-1e-6)
