import numpy as np
import pytest

from mcbound import qstate
from mcbound.errors import DimensionError, DomainError, PartitionError, PartyIndexError, SizeError
from mcbound.qstate import DensityMatrix, Partition, PureState


def test_pure_state_validation():
    with pytest.raises(DimensionError):
        PureState((2, 2), np.ones(3))
    with pytest.raises(DimensionError):
        PureState((1, 2), np.ones(2))
    with pytest.raises(DomainError):
        PureState((2,), np.ones(2))
    zero = PureState((2, 2), np.zeros(4))
    assert zero.norm_sq == 0.0
    with pytest.raises(ValueError):
        zero.amplitudes[0] = 1


def test_density_validation():
    with pytest.raises(Exception):
        DensityMatrix((2,), np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(DomainError):
        DensityMatrix((2,), np.eye(2))
    assert DensityMatrix((2,), np.zeros((2, 2))).trace == 0.0


def test_dim_cap(monkeypatch):
    monkeypatch.setenv("MCB_DIM_CAP", "16")
    with pytest.raises(SizeError):
        qstate.check_dims((3, 3, 2))
    assert qstate.check_dims((2, 2, 2, 2)) == (2, 2, 2, 2)


def test_partial_trace_of_product():
    a = qstate.random_density((2,), 1)
    b = qstate.random_density((3,), 2)
    ab = qstate.kron_states(a, b)
    np.testing.assert_allclose(qstate.partial_trace(ab, [0]).matrix, a.matrix, atol=1e-14)
    np.testing.assert_allclose(qstate.partial_trace(ab, [1]).matrix, b.matrix, atol=1e-14)


def test_reduced_matrix_matches_partial_trace():
    phi = qstate.random_pure((2, 3, 2), 4)
    rho = qstate.to_density(phi)
    for keep in [(0,), (1,), (0, 2), (1, 2)]:
        np.testing.assert_allclose(qstate.reduced_matrix(phi, keep), qstate.partial_trace(rho, keep).matrix, atol=1e-14)


def test_partial_trace_errors():
    rho = qstate.random_density((2, 2), 0)
    with pytest.raises(PartyIndexError):
        qstate.partial_trace(rho, [2])
    with pytest.raises(PartyIndexError):
        qstate.partial_trace(rho, [0, 0])


def test_permute_parties_roundtrip():
    rho = qstate.random_density((2, 3, 4), 5)
    p = qstate.permute_parties(rho, (2, 0, 1))
    assert p.dims == (4, 2, 3)
    back = qstate.permute_parties(p, (1, 2, 0))
    np.testing.assert_allclose(back.matrix, rho.matrix)


def test_partition_parse_and_merge():
    part = Partition.parse("13|2|4")
    assert part.blocks == ((0, 2), (1,), (3,))
    assert str(part) == "13|2|4"
    phi = qstate.random_pure((2, 3, 2, 2), 1)
    merged = qstate.merge_parties(phi, part)
    assert merged.dims == (4, 3, 2)
    with pytest.raises(PartitionError):
        Partition.parse("12|2").validate(2)
    with pytest.raises(PartitionError):
        Partition.parse("1a")


def test_generators():
    assert qstate.ghz(3, 3).norm_sq == pytest.approx(1.0)
    w = qstate.w_state(3)
    assert np.count_nonzero(w.amplitudes) == 3
    u = qstate.random_unitary(4, 0)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    rho = qstate.random_density((2, 3), 9)
    assert rho.trace == pytest.approx(1.0)
    rho.check_psd()
    with pytest.raises(PartyIndexError):
        qstate.basis_state((2, 2), (0, 2))


def test_families():
    g = qstate.ggz_family(0.5)
    assert g.dims == (3, 3, 3) and g.trace == pytest.approx(1.0)
    e = qstate.example2_family(1.0)
    assert np.linalg.matrix_rank(e.matrix) == 1
    e16 = qstate.example2_family(0.0, embedded16=True)
    assert e16.trace == pytest.approx(1.0)
    assert np.linalg.matrix_rank(e16.matrix) == 16
    with pytest.raises(DomainError):
        qstate.ggz_family(1.5)
