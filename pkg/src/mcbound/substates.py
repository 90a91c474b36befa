"""Product-projector substates.

A selection picks, for every party, an increasing list of basis indices; the
substate is the (unnormalized) compression of the state onto the span of the
selected product basis vectors, re-indexed to ``0..s_p-1`` per party. Zero
substates are produced like any other.
"""
from dataclasses import dataclass
from itertools import combinations, product
import math

import numpy as np

from mcbound.errors import DomainError, PartyIndexError
from mcbound.qstate import DensityMatrix, PureState, check_dims


@dataclass(frozen=True)
class SubstateSelection:
    indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(tuple(int(i) for i in part) for part in self.indices))

    @property
    def sizes(self):
        return tuple(len(part) for part in self.indices)

    def validate(self, dims):
        if len(self.indices) != len(dims):
            raise PartyIndexError(f"selection covers {len(self.indices)} parties, state has {len(dims)}")
        for p, (part, d) in enumerate(zip(self.indices, dims)):
            if len(part) < 2:
                raise PartyIndexError(f"party {p}: selection needs at least two indices")
            if any(b <= a for a, b in zip(part, part[1:])):
                raise PartyIndexError(f"party {p}: indices {part} not strictly increasing")
            if part[0] < 0 or part[-1] >= d:
                raise PartyIndexError(f"party {p}: indices {part} out of range for dimension {d}")
        return self

    def flat_indices(self, dims):
        """Flat row-major indices of the selected basis vectors, in compressed order."""
        grids = np.meshgrid(*[np.array(part) for part in self.indices], indexing="ij")
        return np.ravel_multi_index(tuple(g.ravel() for g in grids), tuple(dims))


def _sizes(dims, s):
    dims = check_dims(dims)
    sizes = (int(s),) * len(dims) if np.isscalar(s) else tuple(int(v) for v in s)
    if len(sizes) != len(dims):
        raise DomainError(f"need one subset size per party, got {sizes} for dims {list(dims)}")
    for size, d in zip(sizes, dims):
        if not 2 <= size <= d:
            raise DomainError(f"subset size {size} outside [2, {d}]")
    return dims, sizes


def count_substates(dims, s):
    """Number of selections: product of binomial(d_p, s_p)."""
    dims, sizes = _sizes(dims, s)
    return math.prod(math.comb(d, k) for d, k in zip(dims, sizes))


def enumerate_selections(dims, s):
    """Lazily yield every selection in lexicographic order (last party fastest)."""
    dims, sizes = _sizes(dims, s)
    per_party = [list(combinations(range(d), k)) for d, k in zip(dims, sizes)]
    for choice in product(*per_party):
        yield SubstateSelection(choice)


def project_substate(state, sel):
    """Compress ``state`` onto ``sel``; the result keeps its (reduced) norm or trace."""
    sel.validate(state.dims)
    if isinstance(state, PureState):
        sub = state.tensor()[np.ix_(*[np.array(part) for part in sel.indices])]
        return PureState(sel.sizes, sub.ravel())
    idx = sel.flat_indices(state.dims)
    return DensityMatrix(sel.sizes, state.matrix[np.ix_(idx, idx)])


def selection_index_array(dims, s):
    """Flat indices of every selection at once, shape ``(n_sel, D_s)``.

    Row ``k`` equals ``flat_indices`` of the ``k``-th enumerated selection.
    """
    dims, sizes = _sizes(dims, s)
    n = len(dims)
    strides = [math.prod(dims[p + 1:]) for p in range(n)]
    idx = np.zeros((1,) * (2 * n), dtype=np.intp)
    for p, (d, k) in enumerate(zip(dims, sizes)):
        combos = np.array(list(combinations(range(d), k)), dtype=np.intp) * strides[p]
        shape = [1] * (2 * n)
        shape[p], shape[n + p] = combos.shape
        idx = idx + combos.reshape(shape)
    return idx.reshape(count_substates(dims, sizes), math.prod(sizes))


def substate_matrices(rho, s):
    """All projected density blocks as an ``(n_sel, D_s, D_s)`` array, in enumeration order."""
    sels = list(enumerate_selections(rho.dims, s))
    idx = selection_index_array(rho.dims, s)
    blocks = rho.matrix[idx[:, :, None], idx[:, None, :]]
    return sels, blocks
