"""Exact concurrence of pure multipartite states.

Two independent routes are provided and cross-checked by the test-suite:

* subset purities: ``C^2 = 2^(2-N) * ((2^N - 2) - sum_alpha tr(rho_alpha^2))``
  over all proper nonempty party subsets ``alpha``;
* coefficient differences: ``C^2 = 2^(2-N) * sum_S sum_{r,h} |a_r a_h - a_r' a_h'|^2``
  with one swap family ``S`` per bipartition (``r'`` takes the ``S`` digits
  of ``h`` and vice versa).

The three/four-party coefficient forms below are transcribed index by index;
the general form generates the families programmatically.
"""
from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np

from mcbound import kernels
from mcbound.errors import DomainError, NumericError, PartitionError, PartyCountError
from mcbound.qstate import PureState, merge_parties, reduced_matrix

NORM_TOL = 1e-9
RADICAND_CLAMP = 1e-10
RADICAND_ERROR = 1e-8


@dataclass(frozen=True)
class ConcurrenceValue:
    value: float
    squared: float

    @classmethod
    def from_squared(cls, squared):
        squared = max(0.0, float(squared))
        return cls(math.sqrt(squared), squared)

    def __float__(self):
        return self.value


def proper_subsets(n):
    """All proper nonempty subsets of ``range(n)``: by size, then lexicographic."""
    for k in range(1, n):
        yield from combinations(range(n), k)


def subset_purity(phi, subset):
    """tr(rho_alpha^2) for the (possibly unnormalized) projector onto ``phi``."""
    red = reduced_matrix(phi, subset)
    return float(np.sum(np.abs(red) ** 2))


def subset_purity_sum(phi):
    # deterministic order; fsum makes the total independent of accumulation order
    return math.fsum(subset_purity(phi, s) for s in proper_subsets(phi.n_parties))


def _checked_radicand(radicand):
    # below -RADICAND_ERROR is a formula bug; anything above clamps to 0,
    # including (-RADICAND_ERROR, -RADICAND_CLAMP) which normalization slack can reach
    if radicand < -RADICAND_ERROR:
        raise NumericError(f"negative radicand {radicand:.3e} in pure-state concurrence")
    return max(radicand, 0.0)


def concurrence_pure(phi):
    """Concurrence of a normalized pure state from its subset purities."""
    if abs(phi.norm_sq - 1.0) > NORM_TOL:
        raise DomainError(
            f"concurrence_pure needs a normalized state (squared norm {phi.norm_sq!r}); "
            "use homogeneous_concurrence_pure for sub-normalized input"
        )
    n = phi.n_parties
    radicand = _checked_radicand((2**n - 2) - subset_purity_sum(phi))
    return ConcurrenceValue.from_squared(2.0 ** (2 - n) * radicand)


def homogeneous_concurrence_pure(phi):
    """Degree-1 homogeneous extension: ``c * C(phi / sqrt(c))`` with ``c = <phi|phi>``.

    The zero vector maps to 0.
    """
    c = phi.norm_sq
    if c == 0.0:
        return ConcurrenceValue(0.0, 0.0)
    inner = concurrence_pure(phi.normalized())
    return ConcurrenceValue.from_squared(c * c * inner.squared)


def concurrence_partitioned(phi, partition):
    """Concurrence with the blocks of ``partition`` treated as single parties."""
    partition.validate(phi.n_parties)
    if len(partition.blocks) < 2:
        raise PartitionError("a partitioned concurrence needs at least two blocks")
    return concurrence_pure(merge_parties(phi, partition))


def _require_parties(phi, n):
    if phi.n_parties != n:
        raise PartyCountError(f"expected a {n}-party state, got {phi.n_parties} parties")


def _c3_terms(a):
    base = np.einsum("ijk,pqt->ijkpqt", a, a)
    return [
        base - np.einsum("ijt,pqk->ijkpqt", a, a),
        base - np.einsum("iqk,pjt->ijkpqt", a, a),
        base - np.einsum("pjk,iqt->ijkpqt", a, a),
    ]


def c3_squared_coefficients(phi):
    """Squared tripartite concurrence from amplitude differences (squared moduli).

    Homogeneous of degree 4 in the amplitudes, so sub-normalized input yields
    the squared homogeneous concurrence.
    """
    _require_parties(phi, 3)
    terms = _c3_terms(phi.tensor())
    return 0.5 * math.fsum(float(np.sum(np.abs(t) ** 2)) for t in terms)


# (family pattern, subset alpha whose purity identity it carries)
_C4_FAMILIES = (
    ("pjkr,iqth", (0,)),
    ("iqkr,pjth", (1,)),
    ("ijtr,pqkh", (2,)),
    ("ijkh,pqtr", (3,)),
    ("pqkr,ijth", (0, 1)),
    ("pjtr,iqkh", (0, 2)),
    ("pjkh,iqtr", (0, 3)),
)


def _c4_family_sums(a):
    base = np.einsum("ijkr,pqth->ijkrpqth", a, a)
    return [
        float(np.sum(np.abs(base - np.einsum(pattern + "->ijkrpqth", a, a)) ** 2))
        for pattern, _ in _C4_FAMILIES
    ]


def c4_squared_coefficients(phi):
    """Squared four-party concurrence from the seven amplitude-difference families."""
    _require_parties(phi, 4)
    return 0.25 * math.fsum(_c4_family_sums(phi.tensor()))


def purity_identity_residual(phi):
    """Largest mismatch in ``I0^2 - tr(rho_alpha^2) = 1/2 * family sum`` over the seven identities.

    ``I0`` is the squared norm of ``phi``; any normalization is accepted.
    """
    _require_parties(phi, 4)
    i0 = phi.norm_sq
    sums = _c4_family_sums(phi.tensor())
    worst = 0.0
    for (_, alpha), fam in zip(_C4_FAMILIES, sums):
        lhs = i0 * i0 - subset_purity(phi, alpha)
        worst = max(worst, abs(lhs - 0.5 * fam))
    return worst


def swap_family_masks(n):
    """Bitmasks of one representative per bipartition: subsets containing party 0."""
    return [m for m in range(1, 2**n - 1) if m & 1]


def cN_squared_coefficients(phi):
    """Squared N-party concurrence from the generated swap families (N >= 2)."""
    n = phi.n_parties
    if n < 2:
        raise PartyCountError("concurrence needs at least two parties")
    sums = kernels.swap_family_sums(phi.amplitudes, phi.dims, swap_family_masks(n))
    return math.fsum(sums) / 2.0 ** (n - 2)


__all__ = [
    "ConcurrenceValue",
    "PureState",
    "c3_squared_coefficients",
    "c4_squared_coefficients",
    "cN_squared_coefficients",
    "concurrence_partitioned",
    "concurrence_pure",
    "homogeneous_concurrence_pure",
    "proper_subsets",
    "purity_identity_residual",
    "subset_purity",
    "subset_purity_sum",
    "swap_family_masks",
]
