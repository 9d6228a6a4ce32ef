"""Separability criteria and the multipartite fermionic concurrence.

For each cut size m of a pure n-fermion state, Tr rho_m^2 is at most
1/C(n, m), with equality exactly on single Slater determinants.  The
concurrence aggregates the purity deficits over all cuts and is scaled
so that its maximum is 1.
"""

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from . import rdm
from .errors import BoundViolation, DegenerateShapeError, RangeError, ShapeError
from .fock import FermionState, SystemShape, slater_state, to_antisym_tensor

SEPARABILITY_ATOL = 1e-8
BOUND_ATOL = 1e-10
SINGULAR_VALUE_RTOL = 1e-8


def subspace_dim(shape: SystemShape, m: int) -> int:
    """Dimension bound C(d, min(m, n-m)) that sets the purity floor 1/d_m."""
    return comb(shape.d, min(m, shape.n - m))


def alpha(n: int, d: int) -> float:
    """Normalization that pins the maximal concurrence at 1."""
    if not 2 <= n <= d:
        raise ShapeError(f"need 2 <= n <= d, got n={n}, d={d}")
    shape = SystemShape(d, n)
    denom = (n - 1) - sum(
        comb(n, m) / subspace_dim(shape, m) for m in range(1, n)
    )
    if denom <= 1e-12:
        raise DegenerateShapeError(
            f"normalization denominator {denom!r} vanishes at (n={n}, d={d})"
        )
    return 1.0 / denom


def _classify_purity(shape: SystemShape, m: int, p: float, tol: float) -> str:
    upper = 1.0 / comb(shape.n, m)
    lower = 1.0 / subspace_dim(shape, m)
    if p > upper + BOUND_ATOL:
        raise BoundViolation(f"Tr rho_{m}^2 = {p!r} exceeds upper bound {upper!r}")
    if p < lower - BOUND_ATOL:
        raise BoundViolation(f"Tr rho_{m}^2 = {p!r} below lower bound {lower!r}")
    return "separable" if p >= upper - tol else "entangled"


def classify_bipartition(state: FermionState, m: int, tol: float = SEPARABILITY_ATOL) -> str:
    """"separable" or "entangled" verdict for the m : n-m cut."""
    if not (isinstance(m, int) and 1 <= m <= state.shape.n - 1):
        raise RangeError(f"cut size m={m!r} outside [1, {state.shape.n - 1}]")
    return _classify_purity(state.shape, m, rdm.purity_direct(state, m), tol)


@dataclass(frozen=True)
class BipartitionRecord:
    m: int
    purity: float
    lower_bound: float
    upper_bound: float
    verdict: str


@dataclass(frozen=True)
class ConcurrenceReport:
    """Per-cut purities with verdicts, the normalization, and the value."""

    shape: SystemShape
    records: tuple
    alpha: float | None
    value: float
    degenerate: bool

    @property
    def all_separable(self) -> bool:
        return all(r.verdict == "separable" for r in self.records)


def multipartite_concurrence(
    state: FermionState, tol: float = SEPARABILITY_ATOL
) -> ConcurrenceReport:
    """Normalized multipartite concurrence of a pure n-fermion state.

    The value is forced to exactly 0 when every cut classifies separable,
    so that Slater determinants do not pick up sqrt-amplified noise.  The
    degenerate shape d = n has a single ray and gets value 0 with a flag.
    """
    shape = state.shape
    n = shape.n
    if n < 2:
        raise ShapeError("concurrence needs at least two particles")
    records = []
    for m in range(1, n):
        p = rdm.purity_direct(state, m)
        verdict = _classify_purity(shape, m, p, tol)
        records.append(
            BipartitionRecord(
                m, p, 1.0 / subspace_dim(shape, m), 1.0 / comb(n, m), verdict
            )
        )
    records = tuple(records)
    if shape.d == n:
        return ConcurrenceReport(shape, records, None, 0.0, True)
    a = alpha(n, shape.d)
    if all(r.verdict == "separable" for r in records):
        return ConcurrenceReport(shape, records, a, 0.0, False)
    bracket = (n - 1) - sum(comb(n, r.m) * r.purity for r in records)
    bracket = max(bracket, 0.0)
    return ConcurrenceReport(shape, records, a, sqrt(a * bracket), False)


def c_ff_purity(state: FermionState, tol: float = SEPARABILITY_ATOL) -> float:
    """Two-fermion concurrence from the one-body purity deficit."""
    if state.shape.n != 2:
        raise ShapeError("purity-form concurrence is defined for n = 2")
    d = state.shape.d
    if d == 2:
        # only one ray exists; any normalization is vacuous
        return 0.0
    p = rdm.purity_direct(state, 1)
    if p >= 0.5 - tol:
        return 0.0
    return sqrt(max(0.0, (2.0 * d / (d - 2.0)) * (0.5 - p)))


def c_ff_wedge(state: FermionState) -> float:
    """Two-fermion concurrence from the coefficient-matrix wedge product (d = 4)."""
    if (state.shape.n, state.shape.d) != (2, 4):
        raise ShapeError("wedge-form concurrence requires (n, d) = (2, 4)")
    w = to_antisym_tensor(state).entries
    return 8.0 * abs(w[0, 1] * w[2, 3] - w[0, 2] * w[1, 3] + w[0, 3] * w[1, 2])


@dataclass(frozen=True)
class SlaterRankResult:
    rank: int
    pair_weights: np.ndarray  # nonincreasing, one entry per singular pair


def slater_rank_two_fermions(state: FermionState) -> SlaterRankResult:
    """Slater rank of an n = 2 state from the paired singular values of w."""
    if state.shape.n != 2:
        raise ShapeError("Slater rank via pairing is defined for n = 2")
    w = to_antisym_tensor(state).entries
    svals = np.linalg.svd(w, compute_uv=False)
    threshold = SINGULAR_VALUE_RTOL * svals[0] if svals[0] > 0 else 0.0
    rank = int(np.sum(svals > threshold)) // 2
    return SlaterRankResult(rank, svals[0::2][: max(rank, 1)])


def fghz_state() -> FermionState:
    """Maximally entangled three-fermion state on six modes.

    Equal superposition of the Slater determinants on modes {1,2,3} and
    {4,5,6}; its two-fermion reductions are mixtures of Slater projectors.
    """
    shape = SystemShape(6, 3)
    a = slater_state(shape, [1, 2, 3]).amplitudes
    b = slater_state(shape, [4, 5, 6]).amplitudes
    return FermionState(shape, (a + b) / sqrt(2.0))
