"""Computable lower bounds of multipartite concurrence from projected substates.

Every bound here has the form ``sqrt(prefactor * sum over substates of a
computable lower bound of the substate's squared concurrence)``:

* :func:`thm1_bound` -- three parties, 2x2x2 substates, pairwise Wootters sums;
* :func:`thm2_bound` -- four parties via the nine coarse-grained partitions;
* :func:`thm3_bound` -- five or more parties, N-qubit substates;
* :func:`thm4_bound` -- four parties, s x s x s x s substates with a pluggable
  evaluator; :func:`corollary1_bound` mixes several ``s``.

Substates stay unnormalized throughout; every evaluator is degree-1
homogeneous in the density operator.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
import math

import numpy as np

from mcbound import linalg, wootters
from mcbound.errors import ConfigError, DomainError, PartyCountError
from mcbound.pure import concurrence_pure
from mcbound.qstate import DensityMatrix, Partition, PureState, merge_parties, permute_parties, to_density
from mcbound.substates import count_substates, enumerate_selections, project_substate, substate_matrices

TRACE_TOL = 1e-9
PURE_TOL = 1e-9
COEFF_MODES = ("paper", "conservative")
SUB_EVALUATORS = ("pure-exact", "thm2", "zero")
PARALLEL_MODES = ("det", "fast")

TRIPARTITE = tuple(Partition.parse(p) for p in ("1|2|34", "1|3|24", "1|4|23", "12|3|4", "13|2|4", "14|2|3"))
BIPARTITE = tuple(Partition.parse(p) for p in ("12|34", "13|24", "14|23"))

MONOGAMY_NOTE = "2x2x2 substate C3^2 replaced by its pairwise Wootters sum (monogamy relaxation)"


@dataclass(frozen=True)
class BoundReport:
    bound: float
    theorem: str
    substates_evaluated: int
    coefficient_mode: str = None
    sub_evaluator: str = None
    notes: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def squared(self):
        return self.bound * self.bound

    def to_dict(self):
        d = asdict(self)
        d["notes"] = list(self.notes)
        return d


# -- shared machinery -----------------------------------------------------------


def _check_parallel(parallel):
    if parallel not in PARALLEL_MODES:
        raise ConfigError(f"parallel must be one of {PARALLEL_MODES}, got {parallel!r}")


def _prepare(rho, n_parties=None, min_parties=None, name="bound"):
    if isinstance(rho, PureState):
        rho = to_density(rho)
    if n_parties is not None and rho.n_parties != n_parties:
        raise PartyCountError(f"{name} applies to {n_parties}-party states, got {rho.n_parties} parties")
    if min_parties is not None and rho.n_parties < min_parties:
        raise PartyCountError(f"{name} applies to states with at least {min_parties} parties, got {rho.n_parties}")
    if abs(rho.trace - 1.0) > TRACE_TOL:
        raise DomainError(f"{name} expects a unit-trace state, got trace {rho.trace!r}")
    rho.check_psd()
    return rho


def qubit_pair_reductions(blocks, n):
    """Two-party reductions of a stack of n-qubit operators.

    ``blocks`` has shape ``(m, 2**n, 2**n)``; the result has shape
    ``(m, n*(n-1)/2, 4, 4)`` with pairs in lexicographic order.
    """
    m = blocks.shape[0]
    t = blocks.reshape((m,) + (2,) * (2 * n))
    out = np.empty((m, n * (n - 1) // 2, 4, 4), dtype=np.complex128)
    rest = 2 ** (n - 2)
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        others = tuple(p for p in range(n) if p not in (i, j))
        axes = (0, 1 + i, 1 + j) + tuple(1 + p for p in others)
        axes += (1 + n + i, 1 + n + j) + tuple(1 + n + p for p in others)
        u = t.transpose(axes).reshape(m, 4, rest, 4, rest)
        out[:, k] = np.einsum("majbj->mab", u)
    return out


def _concurrences(stack, parallel):
    if parallel == "fast" and stack.shape[0] > 64:
        chunks = np.array_split(stack, 4)
        with ThreadPoolExecutor(max_workers=4) as pool:
            return np.concatenate(list(pool.map(wootters.concurrence_many, chunks)))
    return wootters.concurrence_many(stack)


def _reduce(values, parallel):
    # det: exactly rounded, independent of evaluation order; fast: plain pairwise sum
    if parallel == "det":
        return math.fsum(values)
    return float(np.sum(values))


def pairwise_squared_sums(blocks, n, parallel="det"):
    """Per-substate ``sum_{i<j} C_ij^2`` for a stack of unnormalized n-qubit operators."""
    pairs = qubit_pair_reductions(blocks, n)
    conc = _concurrences(pairs.reshape(-1, 4, 4), parallel).reshape(pairs.shape[:2])
    return np.sum(conc**2, axis=1)


# -- Theorem 1: tripartite ----------------------------------------------------------


def thm1_bound(rho, parallel="det"):
    """Tripartite bound from all 2x2x2 substates.

    ``C_3(rho) >= [prod(d_i - 1)]^(-1/2) * sqrt(sum_sel sum_{m<n} C_mn^2(sel))``.
    """
    _check_parallel(parallel)
    rho = _prepare(rho, n_parties=3, name="Theorem 1")
    total, count = _qubit_substate_total(rho, parallel)
    squared = total / math.prod(d - 1 for d in rho.dims)
    return BoundReport(math.sqrt(squared), "thm1", count)


def _qubit_substate_total(rho, parallel):
    _, blocks = substate_matrices(rho, 2)
    sums = pairwise_squared_sums(blocks, rho.n_parties, parallel)
    return _reduce(sums, parallel), blocks.shape[0]


# -- Theorem 2: four parties via coarse-grained partitions ----------------------------


def _block_factor(dims, block, mode):
    if len(block) == 1:
        return dims[block[0]] - 1
    if mode == "paper":
        return sum(dims[p] for p in block) - 1
    return math.prod(dims[p] for p in block) - 1


def thm2_weights(dims, mode="conservative"):
    """Prefactor of each partition's substate sum, keyed by partition string.

    Tripartite partitions carry the factor 2 of the aggregation formula. In
    ``paper`` mode a merged pair contributes ``d_a + d_b - 1``; in
    ``conservative`` mode ``d_a * d_b - 1``.
    """
    if mode not in COEFF_MODES:
        raise ConfigError(f"coefficient mode must be one of {COEFF_MODES}, got {mode!r}")
    weights = {}
    for part in TRIPARTITE:
        weights[str(part)] = 2.0 / math.prod(_block_factor(dims, b, mode) for b in part.blocks)
    for part in BIPARTITE:
        weights[str(part)] = 1.0 / math.prod(_block_factor(dims, b, mode) for b in part.blocks)
    return weights


def _thm2_squared(rho, mode, parallel):
    weights = thm2_weights(rho.dims, mode)
    terms = []
    count = 0
    for part in TRIPARTITE:
        merged = merge_parties(rho, part)
        total, k = _qubit_substate_total(merged, parallel)
        terms.append(weights[str(part)] * total)
        count += k
    for part in BIPARTITE:
        merged = merge_parties(rho, part)
        _, blocks = substate_matrices(merged, 2)
        conc = _concurrences(blocks, parallel)
        terms.append(weights[str(part)] * _reduce(conc**2, parallel))
        count += blocks.shape[0]
    return max(_reduce(terms, parallel) / 12.0, 0.0), count, weights


def thm2_bound(rho, mode="conservative", parallel="det"):
    """Four-party bound aggregating six tripartite and three bipartite coarse-grainings."""
    _check_parallel(parallel)
    if mode not in COEFF_MODES:
        raise ConfigError(f"coefficient mode must be one of {COEFF_MODES}, got {mode!r}")
    rho = _prepare(rho, n_parties=4, name="Theorem 2")
    squared, count, weights = _thm2_squared(rho, mode, parallel)
    return BoundReport(
        math.sqrt(squared),
        "thm2",
        count,
        coefficient_mode=mode,
        notes=(MONOGAMY_NOTE,),
        details={"weights": weights},
    )


# -- Theorem 3: N >= 5 ------------------------------------------------------------------


def thm3_bound(rho, allow_n4=False, parallel="det"):
    """Bound for five or more parties from all N-qubit substates.

    ``C^2 >= N / (2^(N-2) prod(d_i - 1)) * sum_sel sum_{i<j} C_ij^2(sel)``.
    ``allow_n4`` extends the formula to four parties, outside its stated range.
    """
    _check_parallel(parallel)
    rho = _prepare(rho, min_parties=4 if allow_n4 else 5, name="Theorem 3")
    n = rho.n_parties
    notes = ()
    if n == 4:
        notes = ("applied to N=4, outside the N>=5 range of the underlying N-qubit bound",)
    total, count = _qubit_substate_total(rho, parallel)
    squared = n / (2.0 ** (n - 2) * math.prod(d - 1 for d in rho.dims)) * total
    return BoundReport(math.sqrt(squared), "thm3", count, notes=notes)


# -- Theorem 4 / Corollary 1: s-dimensional substates -------------------------------------


def thm4_denominator(dims, s):
    """binom(d1-2, s-2) binom(d2-2, s-2) binom(d3-1, s-1) binom(d4-1, s-1) for ascending dims."""
    d1, d2, d3, d4 = sorted(dims)
    return math.comb(d1 - 2, s - 2) * math.comb(d2 - 2, s - 2) * math.comb(d3 - 1, s - 1) * math.comb(d4 - 1, s - 1)


def _sorted_by_dimension(rho):
    order = tuple(int(p) for p in np.argsort(rho.dims, kind="stable"))
    if order == tuple(range(rho.n_parties)):
        return rho, order
    return permute_parties(rho, order), order


def substate_squared_lower_bound(sigma, sub_evaluator, coeff_mode="conservative"):
    """Lower bound of C^2 for an unnormalized four-party substate.

    Returns ``(value, used)`` where ``used`` names the evaluator actually
    applied (``pure-exact`` falls back to ``thm2`` for mixed substates).
    """
    tr = sigma.trace
    if sub_evaluator == "zero" or tr <= 0.0:
        return 0.0, sub_evaluator
    if sub_evaluator == "pure-exact":
        if abs(sigma.purity() - tr * tr) <= PURE_TOL:
            w, v = linalg.hermitian_eigh(sigma.matrix)
            top = PureState(sigma.dims, v[:, 0])
            return tr * tr * concurrence_pure(top).squared, "pure-exact"
    # sigma is a compression of an already validated state, so it is PSD
    normalized = DensityMatrix(sigma.dims, sigma.matrix / tr)
    return tr * tr * _thm2_squared(normalized, coeff_mode, "det")[0], "thm2"


def thm4_bound(rho, s, sub_evaluator="thm2", coeff_mode="conservative"):
    """Four-party bound from all s x s x s x s substates.

    Parties are sorted by ascending dimension first (stable); the permutation
    is recorded in ``details["permutation"]``.
    """
    if sub_evaluator not in SUB_EVALUATORS:
        raise ConfigError(f"sub-evaluator must be one of {SUB_EVALUATORS}, got {sub_evaluator!r}")
    if coeff_mode not in COEFF_MODES:
        raise ConfigError(f"coefficient mode must be one of {COEFF_MODES}, got {coeff_mode!r}")
    rho = _prepare(rho, n_parties=4, name="Theorem 4")
    s = int(s)
    if not 2 <= s <= min(rho.dims):
        raise DomainError(f"substate size s={s} outside [2, {min(rho.dims)}]")
    rho, order = _sorted_by_dimension(rho)
    values = []
    used = set()
    for sel in enumerate_selections(rho.dims, s):
        value, how = substate_squared_lower_bound(project_substate(rho, sel), sub_evaluator, coeff_mode)
        values.append(value)
        used.add(how)
    denom = thm4_denominator(rho.dims, s)
    squared = math.fsum(values) / denom
    notes = []
    if sub_evaluator == "pure-exact" and "thm2" in used:
        notes.append("mixed substates evaluated with thm2 (pure-exact applies to pure substates only)")
    if "thm2" in used:
        notes.append(MONOGAMY_NOTE)
    return BoundReport(
        math.sqrt(squared),
        "thm4",
        len(values),
        coefficient_mode=coeff_mode if "thm2" in used else None,
        sub_evaluator=sub_evaluator,
        notes=tuple(notes),
        details={"s": s, "permutation": list(order), "denominator": denom},
    )


def corollary1_bound(rho, weights="best", sub_evaluator="thm2", coeff_mode="conservative"):
    """Convex combination of squared Theorem 4 bounds over substate sizes.

    ``weights`` maps ``s -> p_s`` (nonnegative, summing to 1); ``"best"``
    picks the single best ``s``, the optimal one-hot combination.
    """
    rho = _prepare(rho, n_parties=4, name="Corollary 1")
    smax = min(rho.dims)
    if isinstance(weights, str):
        if weights != "best":
            raise ConfigError(f"weights must be a mapping or 'best', got {weights!r}")
        reports = {s: thm4_bound(rho, s, sub_evaluator, coeff_mode) for s in range(2, smax + 1)}
        best = max(reports, key=lambda s: reports[s].squared)
        used = {best: 1.0}
    else:
        used = {int(s): float(p) for s, p in dict(weights).items()}
        if not used or any(p < 0 or not math.isfinite(p) for p in used.values()):
            raise ConfigError("weights must be nonnegative and finite")
        if abs(math.fsum(used.values()) - 1.0) > 1e-12:
            raise ConfigError(f"weights sum to {math.fsum(used.values())!r}, not 1")
        if any(not 2 <= s <= smax for s in used):
            raise ConfigError(f"weight keys must lie in [2, {smax}]")
        reports = {s: thm4_bound(rho, s, sub_evaluator, coeff_mode) for s in sorted(used)}
    squared = math.fsum(p * reports[s].squared for s, p in sorted(used.items()))
    return BoundReport(
        math.sqrt(squared),
        "corollary1",
        sum(reports[s].substates_evaluated for s in used),
        coefficient_mode=coeff_mode,
        sub_evaluator=sub_evaluator,
        details={"weights": {str(s): p for s, p in sorted(used.items())},
                 "per_s": {str(s): r.bound for s, r in sorted(reports.items())}},
    )


# -- reference closed forms --------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForms:
    example1: float
    example2: float
    ref23: float


def paper_closed_forms(x):
    """The three reference closed-form curves for the example families (comparison only)."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    ex1 = 3 * math.sqrt(2) * (11 * x - 9) / (4 * (5 * x - 9))
    root = math.sqrt(3 * x + 1)
    ex2 = (
        math.sqrt(7) / 4
        * (math.sqrt(x + 2 * x * root + 4 * x * x + 2) - math.sqrt(x - 2 * x * root + 4 * x * x + 2))
        / (5 + 3 * x)
    )
    return ClosedForms(ex1, ex2, (3 * x - 1) / 2)


# -- dispatch used by the CLI ----------------------------------------------------------------


def evaluate(rho, theorem, s=2, sub_evaluator="thm2", coeff_mode="conservative", parallel="det", allow_n4=False):
    theorem = str(theorem)
    if theorem == "1":
        return thm1_bound(rho, parallel)
    if theorem == "2":
        return thm2_bound(rho, coeff_mode, parallel)
    if theorem == "3":
        return thm3_bound(rho, allow_n4, parallel)
    if theorem == "4":
        return thm4_bound(rho, s, sub_evaluator, coeff_mode)
    raise ConfigError(f"unknown theorem {theorem!r}")


__all__ = [
    "BIPARTITE",
    "BoundReport",
    "ClosedForms",
    "TRIPARTITE",
    "corollary1_bound",
    "count_substates",
    "evaluate",
    "paper_closed_forms",
    "thm1_bound",
    "thm2_bound",
    "thm2_weights",
    "thm3_bound",
    "thm4_bound",
    "thm4_denominator",
]
