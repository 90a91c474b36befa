import numpy as np
import pytest

from mcbound import qstate, substates
from mcbound.errors import DomainError, PartyIndexError
from mcbound.substates import SubstateSelection


def test_counts():
    assert substates.count_substates((3, 3, 3), 2) == 27
    assert substates.count_substates((2, 2, 2, 3), 2) == 3
    assert substates.count_substates((4, 5), (3, 2)) == 40
    with pytest.raises(DomainError):
        substates.count_substates((2, 3), 3)


def test_lexicographic_order():
    sels = [s.indices for s in substates.enumerate_selections((2, 3), 2)]
    assert sels == [((0, 1), (0, 1)), ((0, 1), (0, 2)), ((0, 1), (1, 2))]
    assert len(sels) == substates.count_substates((2, 3), 2)


def test_selection_validation():
    with pytest.raises(PartyIndexError):
        SubstateSelection(((0, 1),)).validate((2, 2))
    with pytest.raises(PartyIndexError):
        SubstateSelection(((1, 0), (0, 1))).validate((2, 2))
    with pytest.raises(PartyIndexError):
        SubstateSelection(((0, 3), (0, 1))).validate((3, 2))


def test_pure_and_density_projection_commute():
    phi = qstate.random_pure((3, 2, 3), 5)
    rho = qstate.to_density(phi)
    for sel in substates.enumerate_selections(phi.dims, 2):
        sub = substates.project_substate(phi, sel)
        np.testing.assert_allclose(
            qstate.to_density(sub).matrix, substates.project_substate(rho, sel).matrix, atol=1e-15
        )


def test_identity_selection():
    rho = qstate.random_density((2, 2), 1)
    sel = SubstateSelection(((0, 1), (0, 1)))
    np.testing.assert_array_equal(substates.project_substate(rho, sel).matrix, rho.matrix)


def test_substate_matrices_match_enumeration():
    rho = qstate.random_density((3, 3), 2)
    sels, blocks = substates.substate_matrices(rho, 2)
    assert blocks.shape == (9, 4, 4)
    for sel, block in zip(sels, blocks):
        np.testing.assert_array_equal(block, substates.project_substate(rho, sel).matrix)


def test_zero_substate_is_allowed():
    phi = qstate.basis_state((3, 3), (2, 2))
    sel = SubstateSelection(((0, 1), (0, 1)))
    assert substates.project_substate(phi, sel).norm_sq == 0.0
