"""Multipartite pure and mixed states tagged with per-party dimensions.

Layout convention, used everywhere in the package: amplitudes and matrix
indices are row-major over the parties, last party fastest. Party indices in
the API are 0-based.
"""
from dataclasses import dataclass
import math
import os

import numpy as np

from mcbound import linalg
from mcbound.errors import (
    DimensionError,
    DomainError,
    PartitionError,
    PartyIndexError,
    SizeError,
)

DEFAULT_DIM_CAP = 4096
NORM_TOL = 1e-9


def dim_cap():
    """Cap on the total dimension; ``MCB_DIM_CAP`` overrides the default."""
    raw = os.environ.get("MCB_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SizeError(f"MCB_DIM_CAP must be an integer, got {raw!r}") from None
    if cap < 2:
        raise SizeError("MCB_DIM_CAP must be at least 2")
    return cap


def check_dims(dims):
    """Validate a dimension vector and return it as a tuple of ints."""
    try:
        dims = tuple(int(d) for d in dims)
    except TypeError:
        raise DimensionError(f"dims must be a sequence of integers, got {dims!r}") from None
    if not dims:
        raise DimensionError("at least one party is required")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every party dimension must be >= 2, got {list(dims)}")
    total = math.prod(dims)
    if total > dim_cap():
        raise SizeError(f"total dimension {total} exceeds cap {dim_cap()}")
    return dims


def _frozen(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Possibly sub-normalized state vector (squared norm in [0, 1])."""

    dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        amp = np.array(self.amplitudes, dtype=np.complex128).ravel()
        if amp.size != math.prod(dims):
            raise DimensionError(f"expected {math.prod(dims)} amplitudes for dims {list(dims)}, got {amp.size}")
        if not np.all(np.isfinite(amp)):
            raise DimensionError("amplitudes must be finite")
        norm_sq = float(np.vdot(amp, amp).real)
        if norm_sq > 1.0 + NORM_TOL:
            raise DomainError(f"squared norm {norm_sq!r} exceeds 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amp))

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def norm_sq(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self):
        return self.amplitudes.reshape(self.dims)

    def normalized(self):
        n = self.norm_sq
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return PureState(self.dims, self.amplitudes / math.sqrt(n))

    def scaled(self, factor):
        return PureState(self.dims, self.amplitudes * factor)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian operator with trace in [0, 1].

    Unnormalized operators (projected substates) are allowed. Positivity is
    not verified on construction; call :meth:`check_psd`.
    """

    dims: tuple
    matrix: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        m = np.array(self.matrix, dtype=np.complex128)
        size = math.prod(dims)
        if m.shape != (size, size):
            raise DimensionError(f"expected a {size}x{size} matrix for dims {list(dims)}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DimensionError("matrix entries must be finite")
        linalg.check_hermitian(m)
        tr = float(np.trace(m).real)
        if tr > 1.0 + NORM_TOL or tr < -NORM_TOL:
            raise DomainError(f"trace {tr!r} outside [0, 1]")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def purity(self):
        return float(np.sum(np.abs(self.matrix) ** 2))

    def check_psd(self, tol=linalg.PSD_TOL):
        linalg.assert_psd(self.matrix, tol)
        return self

    def tensor(self):
        return self.matrix.reshape(self.dims + self.dims)


@dataclass(frozen=True)
class Partition:
    """Ordered grouping of party indices into disjoint blocks."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(p) for p in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def parse(cls, text):
        """Parse the ``1|2|34`` notation (1-based, single-digit parties)."""
        try:
            blocks = [[int(ch) - 1 for ch in part] for part in text.split("|")]
        except ValueError:
            raise PartitionError(f"cannot parse partition {text!r}") from None
        return cls(blocks)

    @classmethod
    def singletons(cls, n):
        return cls([[p] for p in range(n)])

    def validate(self, n_parties):
        seen = [p for b in self.blocks for p in b]
        if any(len(b) == 0 for b in self.blocks):
            raise PartitionError("partition blocks must be nonempty")
        if sorted(seen) != list(range(n_parties)):
            raise PartitionError(f"blocks {self.blocks} do not partition parties 0..{n_parties - 1}")
        return self

    @property
    def order(self):
        return tuple(p for b in self.blocks for p in b)

    def __str__(self):
        return "|".join("".join(str(p + 1) for p in b) for b in self.blocks)


def _check_parties(n, parties, allow_empty=False):
    parties = tuple(int(p) for p in parties)
    if not parties and not allow_empty:
        raise PartyIndexError("party set must be nonempty")
    if any(p < 0 or p >= n for p in parties):
        raise PartyIndexError(f"party indices {parties} out of range for {n} parties")
    if len(set(parties)) != len(parties):
        raise PartyIndexError(f"repeated party index in {parties}")
    return parties


def to_density(phi):
    a = phi.amplitudes
    return DensityMatrix(phi.dims, np.outer(a, a.conj()))


def partial_trace(rho, keep):
    """Reduce ``rho`` to the parties in ``keep`` (kept in ascending order)."""
    n = rho.n_parties
    keep = tuple(sorted(_check_parties(n, keep)))
    if len(keep) == n:
        return rho
    drop = tuple(p for p in range(n) if p not in keep)
    dk = math.prod(rho.dims[p] for p in keep)
    dt = math.prod(rho.dims[p] for p in drop)
    t = rho.tensor().transpose(keep + drop + tuple(n + p for p in keep) + tuple(n + p for p in drop))
    red = np.einsum("ajbj->ab", t.reshape(dk, dt, dk, dt))
    return DensityMatrix(tuple(rho.dims[p] for p in keep), red)


def reduced_matrix(phi, keep):
    """Reduced density matrix of a pure state, as a raw array."""
    n = phi.n_parties
    keep = tuple(sorted(_check_parties(n, keep)))
    drop = tuple(p for p in range(n) if p not in keep)
    dk = math.prod(phi.dims[p] for p in keep)
    m = phi.tensor().transpose(keep + drop).reshape(dk, -1)
    return m @ m.conj().T


def permute_parties(state, order):
    """Reorder parties: new party ``i`` is old party ``order[i]``."""
    n = state.n_parties
    order = _check_parties(n, order)
    if len(order) != n:
        raise PartyIndexError(f"permutation {order} must list all {n} parties")
    dims = tuple(state.dims[p] for p in order)
    if isinstance(state, PureState):
        return PureState(dims, state.tensor().transpose(order).ravel())
    t = state.tensor().transpose(order + tuple(n + p for p in order))
    size = math.prod(dims)
    return DensityMatrix(dims, t.reshape(size, size))


def merge_parties(state, partition):
    """Treat each block of ``partition`` as a single party.

    Parties are first permuted into block order (blocks as given, parties
    ascending inside a block), then consecutive indices are regrouped. For a
    partition whose blocks are already contiguous and ordered the raw
    amplitudes / matrix are unchanged.
    """
    partition.validate(state.n_parties)
    permuted = permute_parties(state, partition.order)
    dims = tuple(math.prod(state.dims[p] for p in b) for b in partition.blocks)
    if isinstance(state, PureState):
        return PureState(dims, permuted.amplitudes)
    return DensityMatrix(dims, permuted.matrix)


def kron_states(*states):
    """Tensor product of pure states or of density matrices."""
    if all(isinstance(s, PureState) for s in states):
        amp = np.ones(1, dtype=np.complex128)
        for s in states:
            amp = np.kron(amp, s.amplitudes)
        return PureState(sum((s.dims for s in states), ()), amp)
    mats = [to_density(s) if isinstance(s, PureState) else s for s in states]
    m = np.ones((1, 1), dtype=np.complex128)
    for s in mats:
        m = np.kron(m, s.matrix)
    return DensityMatrix(sum((s.dims for s in mats), ()), m)


# -- generators ---------------------------------------------------------------


def _rng(seed):
    return np.random.default_rng(int(seed) % 2**64)


def basis_state(dims, digits):
    dims = check_dims(dims)
    if len(digits) != len(dims) or any(not 0 <= k < d for k, d in zip(digits, dims)):
        raise PartyIndexError(f"basis digits {digits} invalid for dims {list(dims)}")
    amp = np.zeros(math.prod(dims), dtype=np.complex128)
    amp[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(dims, amp)


def ghz(n, d=2):
    dims = check_dims([d] * n)
    amp = np.zeros(math.prod(dims), dtype=np.complex128)
    for k in range(d):
        amp[np.ravel_multi_index((k,) * n, dims)] = 1.0 / math.sqrt(d)
    return PureState(dims, amp)


def w_state(n):
    dims = check_dims([2] * n)
    amp = np.zeros(2**n, dtype=np.complex128)
    for p in range(n):
        amp[1 << (n - 1 - p)] = 1.0 / math.sqrt(n)
    return PureState(dims, amp)


def random_pure(dims, seed):
    """Haar-random normalized vector, deterministic in ``seed``."""
    dims = check_dims(dims)
    rng = _rng(seed)
    size = math.prod(dims)
    g = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return PureState(dims, g / np.linalg.norm(g))


def random_density(dims, seed):
    """Hilbert-Schmidt random density matrix G G^dag / tr, deterministic in ``seed``."""
    dims = check_dims(dims)
    rng = _rng(seed)
    size = math.prod(dims)
    g = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(dims, m / np.trace(m).real)


def random_unitary(d, seed):
    """Haar-random d x d unitary (QR of a Ginibre matrix with phase fix)."""
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def apply_local_unitaries(state, unitaries):
    u = np.ones((1, 1), dtype=np.complex128)
    for uk in unitaries:
        u = np.kron(u, uk)
    if isinstance(state, PureState):
        return PureState(state.dims, u @ state.amplitudes)
    return DensityMatrix(state.dims, u @ state.matrix @ u.conj().T)


def _check_x(x):
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"mixing parameter x={x} outside [0, 1]")
    return x


def ggz_family(x):
    """(x/27) I_27 + (1 - x)|GGHZ><GGHZ| on three qutrits."""
    x = _check_x(x)
    g = ghz(3, 3).amplitudes
    return DensityMatrix((3, 3, 3), x / 27 * np.eye(27) + (1 - x) * np.outer(g, g.conj()))


def example2_vector():
    """(|0000> + |0012> + |1100> + |1112>)/2 on 2x2x2x3."""
    dims = (2, 2, 2, 3)
    amp = np.zeros(24, dtype=np.complex128)
    for digits in [(0, 0, 0, 0), (0, 0, 1, 2), (1, 1, 0, 0), (1, 1, 1, 2)]:
        amp[np.ravel_multi_index(digits, dims)] = 0.5
    return PureState(dims, amp)


def example2_family(x, embedded16=False):
    """(1 - x) * noise + x |psi><psi| on 2x2x2x3.

    ``noise`` is I_24 / 24 by default. With ``embedded16`` it is the
    normalized projector onto the 16-dimensional subspace where the last
    party takes values {0, 2}, the span that contains ``|psi>``.
    """
    x = _check_x(x)
    psi = example2_vector().amplitudes
    if embedded16:
        support = np.zeros(24)
        for i in range(24):
            if i % 3 in (0, 2):
                support[i] = 1.0
        noise = np.diag(support) / 16
    else:
        noise = np.eye(24) / 24
    return DensityMatrix((2, 2, 2, 3), (1 - x) * noise + x * np.outer(psi, psi.conj()))
