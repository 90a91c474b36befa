"""Brute-force validation: convex-roof upper estimates and inequality suites.

The roof search deliberately avoids the package's own eigensolver and
concurrence routines (it uses ``numpy.linalg`` and a batched purity
computation) so that it stays an independent check of the bound engine.
"""
from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np

from mcbound import bounds, wootters
from mcbound.errors import DomainError, PartyCountError, SizeError
from mcbound.pure import (
    c3_squared_coefficients,
    c4_squared_coefficients,
    cN_squared_coefficients,
    concurrence_pure,
    homogeneous_concurrence_pure,
    purity_identity_residual,
)
from mcbound.qstate import (
    DensityMatrix,
    PureState,
    permute_parties,
    random_density,
    random_pure,
    reduced_matrix,
    to_density,
)
from mcbound.substates import enumerate_selections, project_substate

MARGIN_TOL = 1e-8
RANK_CUTOFF = 1e-10
DEFAULT_MAX_RANK = 64


@dataclass(frozen=True)
class Ensemble:
    """Pure-state decomposition ``rho = sum_i p_i |phi_i><phi_i|``."""

    members: tuple

    def __post_init__(self):
        total = math.fsum(p for p, _ in self.members)
        if abs(total - 1.0) > 1e-10:
            raise DomainError(f"ensemble probabilities sum to {total!r}")

    @classmethod
    def from_vectors(cls, dims, vectors):
        members = []
        for v in vectors:
            p = float(np.vdot(v, v).real)
            if p > 0.0:
                members.append((p, PureState(dims, v / math.sqrt(p))))
        return cls(tuple(members))

    def reconstruct(self):
        dims = self.members[0][1].dims
        m = sum(p * np.outer(phi.amplitudes, phi.amplitudes.conj()) for p, phi in self.members)
        return DensityMatrix(dims, m)

    def average_concurrence(self):
        return math.fsum(p * concurrence_pure(phi).value for p, phi in self.members)


def _bipartition_axes(n):
    # one representative per bipartition: subsets containing party 0
    for k in range(1, n):
        for rest in combinations(range(1, n), k - 1):
            side = (0,) + rest
            if len(side) < n:
                yield side


def batch_concurrence(vectors, dims):
    """Homogeneous concurrences of the unnormalized rows of ``vectors``."""
    vectors = np.asarray(vectors, dtype=np.complex128)
    k = vectors.shape[0]
    n = len(dims)
    c = np.sum(np.abs(vectors) ** 2, axis=1)
    t = vectors.reshape((k,) + tuple(dims))
    purity_sum = np.zeros(k)
    for side in _bipartition_axes(n):
        other = tuple(p for p in range(n) if p not in side)
        da = math.prod(dims[p] for p in side)
        m = t.transpose((0,) + tuple(1 + p for p in side) + tuple(1 + p for p in other)).reshape(k, da, -1)
        if m.shape[1] > m.shape[2]:
            m = m.conj().transpose(0, 2, 1)
        g = m @ m.conj().transpose(0, 2, 1)
        purity_sum += 2.0 * np.sum(np.abs(g) ** 2, axis=(1, 2))
    squared = 2.0 ** (2 - n) * ((2**n - 2) * c * c - purity_sum)
    return np.sqrt(np.clip(squared, 0.0, None))


def _haar_isometry(rng, rows, cols):
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, trial]))


def convex_roof_search(rho, trials=200, seed=0, max_rank=DEFAULT_MAX_RANK):
    """Best ensemble found: the eigen-ensemble plus ``trials`` random isometric remixes.

    Each trial draws an ensemble size ``K`` in ``[r, 2r]`` and a Haar
    isometry ``U`` (``K x r``); the members are ``U @ (sqrt(lambda) v)``.
    Trial ``t`` uses a generator seeded from ``(seed, t)``.
    Returns ``(value, Ensemble)``.
    """
    if abs(rho.trace - 1.0) > 1e-9:
        raise DomainError(f"convex roof search expects unit trace, got {rho.trace!r}")
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > RANK_CUTOFF * rho.trace
    r = int(np.count_nonzero(keep))
    if r > max_rank:
        raise SizeError(f"rank {r} exceeds max_rank {max_rank}")
    base = (v[:, keep] * np.sqrt(w[keep])).T
    best_vectors = base
    best = float(np.sum(batch_concurrence(base, rho.dims)))
    for t in range(int(trials)):
        rng = _trial_rng(seed, t)
        size = int(rng.integers(r, 2 * r + 1))
        vectors = _haar_isometry(rng, size, r) @ base
        value = float(np.sum(batch_concurrence(vectors, rho.dims)))
        if value < best:
            best, best_vectors = value, vectors
    return best, Ensemble.from_vectors(rho.dims, best_vectors)


def convex_roof_upper(rho, trials=200, seed=0, max_rank=DEFAULT_MAX_RANK):
    """Upper estimate of the mixed-state concurrence (minimum over sampled ensembles)."""
    if isinstance(rho, PureState):
        rho = to_density(rho)
    return convex_roof_search(rho, trials, seed, max_rank)[0]


# -- inequalities -----------------------------------------------------------------


def _pair_concurrence(phi, pair):
    return wootters.concurrence_two_qubit(reduced_matrix(phi, pair))


def monogamy_residual(phi):
    """min_i [C^2_{i|jk} - C^2_ij - C^2_ik] for a normalized three-qubit state."""
    if phi.dims != (2, 2, 2):
        raise PartyCountError(f"monogamy residual needs three qubits, got dims {list(phi.dims)}")
    pair_sq = {pair: _pair_concurrence(phi, pair) ** 2 for pair in combinations(range(3), 2)}
    out = []
    for i in range(3):
        red = reduced_matrix(phi, (i,))
        one_vs_rest = 2.0 * (1.0 - float(np.sum(np.abs(red) ** 2)))
        out.append(one_vs_rest - sum(v for pair, v in pair_sq.items() if i in pair))
    return min(out)


def pairwise_sum_margin(phi):
    """C_3^2 - (C_12^2 + C_13^2 + C_23^2) for a three-qubit pure state."""
    if phi.dims != (2, 2, 2):
        raise PartyCountError(f"pairwise sum margin needs three qubits, got dims {list(phi.dims)}")
    pairs = math.fsum(_pair_concurrence(phi, pair) ** 2 for pair in combinations(range(3), 2))
    return homogeneous_concurrence_pure(phi).squared - pairs


def projection_margin(phi):
    """C^2 - sum_sel C^2(2x..x2 substate) / prod(d_i - 1), for two or three parties."""
    if phi.n_parties not in (2, 3):
        raise PartyCountError("projection margin is defined for two or three parties")
    total = math.fsum(
        homogeneous_concurrence_pure(project_substate(phi, sel)).squared for sel in enumerate_selections(phi.dims, 2)
    )
    return concurrence_pure(phi).squared - total / math.prod(d - 1 for d in phi.dims)


def thm4_projection_margin(phi, s):
    """C^2 - sum_sel C^2(s-substate) / denominator, parties sorted by dimension."""
    if phi.n_parties != 4:
        raise PartyCountError("four-party state required")
    order = tuple(int(p) for p in np.argsort(phi.dims, kind="stable"))
    phi = permute_parties(phi, order)
    total = math.fsum(
        homogeneous_concurrence_pure(project_substate(phi, sel)).squared for sel in enumerate_selections(phi.dims, s)
    )
    return concurrence_pure(phi).squared - total / bounds.thm4_denominator(phi.dims, s)


@dataclass(frozen=True)
class Check:
    """Worst case of one validation check.

    ``kind == "margin"`` passes when ``worst >= -tolerance``;
    ``kind == "deviation"`` passes when ``worst <= tolerance``.
    """

    name: str
    worst: float
    tolerance: float
    kind: str
    samples: int

    @property
    def passed(self):
        if self.kind == "margin":
            return self.worst >= -self.tolerance
        return self.worst <= self.tolerance

    def to_dict(self):
        return {
            "name": self.name,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "kind": self.kind,
            "samples": self.samples,
            "passed": self.passed,
        }


TRIPARTITE_DIMS = ((2, 2, 2), (2, 2, 3), (2, 3, 3), (3, 3, 3))
BIPARTITE_DIMS = ((2, 3), (3, 3), (3, 4), (4, 4))
FOUR_PARTY_DIMS = ((2, 2, 2, 3), (2, 2, 3, 3), (3, 2, 3, 3), (3, 3, 3, 3))


def _seed(seed, tag, i):
    return (int(seed) * 1_000_003 + tag * 10_007 + i) % 2**63


def monogamy_check(seed, samples):
    worst = min(monogamy_residual(random_pure((2, 2, 2), _seed(seed, 1, i))) for i in range(samples))
    return Check("monogamy", worst, MARGIN_TOL, "margin", samples)


def pairwise_sum_check(seed, samples):
    worst = min(pairwise_sum_margin(random_pure((2, 2, 2), _seed(seed, 2, i))) for i in range(samples))
    return Check("pairwise_sum", worst, MARGIN_TOL, "margin", samples)


def tripartite_projection_check(seed, samples):
    worst = min(
        projection_margin(random_pure(TRIPARTITE_DIMS[i % len(TRIPARTITE_DIMS)], _seed(seed, 3, i)))
        for i in range(samples)
    )
    return Check("tripartite_projection", worst, MARGIN_TOL, "margin", samples)


def bipartite_projection_check(seed, samples):
    worst = min(
        projection_margin(random_pure(BIPARTITE_DIMS[i % len(BIPARTITE_DIMS)], _seed(seed, 4, i)))
        for i in range(samples)
    )
    return Check("bipartite_projection", worst, MARGIN_TOL, "margin", samples)


def thm4_projection_check(seed, samples):
    margins = []
    for i in range(samples):
        dims = FOUR_PARTY_DIMS[i % len(FOUR_PARTY_DIMS)]
        phi = random_pure(dims, _seed(seed, 5, i))
        margins.extend(thm4_projection_margin(phi, s) for s in range(2, min(dims) + 1))
    return Check("thm4_projection", min(margins), MARGIN_TOL, "margin", samples)


def inequality_suite(seed=0, samples=200, monogamy_samples=None):
    """Worst margins of the monogamy and projection inequalities over random pure states."""
    return [
        monogamy_check(seed, monogamy_samples or samples),
        pairwise_sum_check(seed, samples),
        tripartite_projection_check(seed, samples),
        bipartite_projection_check(seed, samples),
        thm4_projection_check(seed, samples),
    ]


def formula_suite(seed=0, samples=100):
    """Max deviation between the coefficient formulas and the subset-purity formula."""
    dev3, dev4, devn, ident = [], [], [], []
    for i in range(samples):
        phi = random_pure(TRIPARTITE_DIMS[i % len(TRIPARTITE_DIMS)], _seed(seed, 6, i))
        dev3.append(abs(c3_squared_coefficients(phi) - concurrence_pure(phi).squared))
        phi = random_pure(FOUR_PARTY_DIMS[i % 2], _seed(seed, 7, i))
        dev4.append(abs(c4_squared_coefficients(phi) - concurrence_pure(phi).squared))
        ident.append(purity_identity_residual(phi))
        phi = random_pure((2,) * 5, _seed(seed, 8, i))
        devn.append(abs(cN_squared_coefficients(phi) - concurrence_pure(phi).squared))
    return [
        Check("c3_vs_purities", max(dev3), 1e-8, "deviation", samples),
        Check("c4_vs_purities", max(dev4), 1e-8, "deviation", samples),
        Check("cN_vs_purities", max(devn), 1e-8, "deviation", samples),
        Check("purity_identities", max(ident), 1e-10, "deviation", samples),
    ]


SANDWICH_CONFIGS = (
    ("thm1", (2, 2, 2), {}),
    ("thm1", (3, 3, 3), {}),
    ("thm2-paper", (2, 2, 2, 2), {"mode": "paper"}),
    ("thm2-conservative", (2, 2, 2, 2), {"mode": "conservative"}),
    ("thm4-s2", (2, 2, 2, 3), {"s": 2}),
    ("thm3", (2, 2, 2, 2, 2), {}),
)


def _bound_for(name, rho, opts):
    if name == "thm1":
        return bounds.thm1_bound(rho)
    if name.startswith("thm2"):
        return bounds.thm2_bound(rho, opts["mode"])
    if name.startswith("thm4"):
        return bounds.thm4_bound(rho, opts["s"])
    return bounds.thm3_bound(rho)


def sandwich_suite(seed=0, samples=50, trials=200, configs=SANDWICH_CONFIGS, states=None):
    """Worst ``roof_upper - bound`` per configuration over random mixed states.

    ``states`` optionally maps a dims tuple to a callable ``(dims, seed) ->
    DensityMatrix``; Hilbert-Schmidt random states are used otherwise.
    """
    checks = []
    for tag, (name, dims, opts) in enumerate(configs):
        make = (states or {}).get(dims, random_density)
        worst = math.inf
        for i in range(samples):
            rho = make(dims, _seed(seed, 20 + tag, i))
            margin = convex_roof_upper(rho, trials, _seed(seed, 40 + tag, i)) - _bound_for(name, rho, opts).bound
            worst = min(worst, margin)
        label = f"sandwich_{name}_{'x'.join(map(str, dims))}"
        checks.append(Check(label, worst, 1e-6, "margin", samples))
    return checks
