"""Property-based checks of the invariants of the bound engine."""
import math

import numpy as np
from hypothesis import given, settings, strategies as st

from mcbound import bounds, qstate, stateio, substates, wootters
from mcbound.pure import concurrence_pure, homogeneous_concurrence_pure

seeds = st.integers(min_value=0, max_value=2**32 - 1)
PROPS = settings(max_examples=25, deadline=None)

TRIPARTITE = [(2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 3, 3)]
FOUR = [(2, 2, 2, 2), (2, 2, 2, 3)]


def _index_permutation(dims, party, perm):
    """Unitary permuting the basis of one party."""
    mats = [np.eye(d) for d in dims]
    mats[party] = np.eye(dims[party])[list(perm)]
    return mats


@PROPS
@given(seeds, st.sampled_from(TRIPARTITE))
def test_thm1_sound_on_pure(seed, dims):
    phi = qstate.random_pure(dims, seed)
    b = bounds.thm1_bound(phi).bound
    assert 0.0 <= b <= concurrence_pure(phi).value + 1e-8


@PROPS
@given(seeds, st.sampled_from(FOUR))
def test_four_party_bounds_sound_on_pure(seed, dims):
    phi = qstate.random_pure(dims, seed)
    c = concurrence_pure(phi).value
    cons = bounds.thm2_bound(phi, "conservative").bound
    paper = bounds.thm2_bound(phi, "paper").bound
    assert 0.0 <= cons <= paper + 1e-15
    assert paper <= c + 1e-8
    assert bounds.thm4_bound(phi, 2, "thm2").bound <= c + 1e-8
    assert bounds.thm4_bound(phi, 2, "pure-exact").bound <= c + 1e-8


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_thm3_sound_on_pure(seed):
    phi = qstate.random_pure((2,) * 5, seed)
    assert bounds.thm3_bound(phi).bound <= concurrence_pure(phi).value + 1e-8


@PROPS
@given(seeds, st.sampled_from(TRIPARTITE), st.permutations(range(3)))
def test_thm1_party_relabeling(seed, dims, order):
    rho = qstate.random_density(dims, seed)
    moved = qstate.permute_parties(rho, order)
    assert abs(bounds.thm1_bound(rho).bound - bounds.thm1_bound(moved).bound) <= 1e-10


@settings(max_examples=10, deadline=None)
@given(seeds, st.permutations(range(5)))
def test_thm3_party_relabeling(seed, order):
    rho = qstate.random_density((2,) * 5, seed)
    moved = qstate.permute_parties(rho, order)
    assert abs(bounds.thm3_bound(rho).bound - bounds.thm3_bound(moved).bound) <= 1e-10


@PROPS
@given(seeds, st.permutations(range(4)))
def test_thm4_party_relabeling(seed, order):
    rho = qstate.random_density((2, 2, 2, 3), seed)
    moved = qstate.permute_parties(rho, order)
    assert abs(bounds.thm4_bound(rho, 2).bound - bounds.thm4_bound(moved, 2).bound) <= 1e-10


@PROPS
@given(seeds, st.integers(0, 2), st.permutations(range(3)))
def test_thm1_local_index_permutation(seed, party, perm):
    dims = (3, 3, 3)
    rho = qstate.random_density(dims, seed)
    moved = qstate.apply_local_unitaries(rho, _index_permutation(dims, party, perm))
    assert abs(bounds.thm1_bound(rho).bound - bounds.thm1_bound(moved).bound) <= 1e-10


@PROPS
@given(seeds, st.permutations(range(3)))
def test_thm4_local_index_permutation(seed, perm):
    dims = (2, 2, 2, 3)
    rho = qstate.random_density(dims, seed)
    moved = qstate.apply_local_unitaries(rho, _index_permutation(dims, 3, perm))
    assert abs(bounds.thm4_bound(rho, 2).bound - bounds.thm4_bound(moved, 2).bound) <= 1e-10


@PROPS
@given(seeds, st.floats(min_value=0.0, max_value=1.0))
def test_wootters_homogeneous(seed, c):
    rho = qstate.random_density((2, 2), seed).matrix
    assert abs(wootters.concurrence_two_qubit(c * rho) - c * wootters.concurrence_two_qubit(rho)) <= 1e-10


@PROPS
@given(seeds)
def test_wootters_local_unitary_invariance(seed):
    rho = qstate.random_density((2, 2), seed)
    u = [qstate.random_unitary(2, seed + 1), qstate.random_unitary(2, seed + 2)]
    moved = qstate.apply_local_unitaries(rho, u)
    assert abs(wootters.concurrence_two_qubit(rho) - wootters.concurrence_two_qubit(moved)) <= 1e-9


@PROPS
@given(seeds, st.sampled_from(TRIPARTITE + FOUR))
def test_pure_concurrence_local_unitary_invariance(seed, dims):
    phi = qstate.random_pure(dims, seed)
    u = [qstate.random_unitary(d, seed + k) for k, d in enumerate(dims)]
    moved = qstate.apply_local_unitaries(phi, u)
    assert abs(concurrence_pure(phi).squared - concurrence_pure(moved).squared) <= 1e-10


@PROPS
@given(seeds, st.floats(min_value=0.0, max_value=1.0))
def test_pure_concurrence_homogeneous(seed, c):
    phi = qstate.random_pure((2, 3, 2), seed)
    scaled = phi.scaled(math.sqrt(c))
    assert abs(homogeneous_concurrence_pure(scaled).value - c * concurrence_pure(phi).value) <= 1e-10


@PROPS
@given(st.lists(st.integers(2, 4), min_size=1, max_size=4), st.integers(2, 4))
def test_substate_count_matches_enumeration(dims, s):
    if s > min(dims):
        return
    sels = list(substates.enumerate_selections(dims, s))
    assert len(sels) == substates.count_substates(dims, s)
    assert [sel.indices for sel in sels] == sorted(sel.indices for sel in sels)


@PROPS
@given(seeds, st.sampled_from([(2,), (2, 3), (2, 2, 2)]))
def test_state_file_roundtrip(seed, dims):
    rho = qstate.random_density(dims, seed)
    text = stateio.format_state(rho)
    back = stateio.parse_state(text)
    np.testing.assert_array_equal(back.matrix, rho.matrix)
    assert stateio.format_state(back) == text
