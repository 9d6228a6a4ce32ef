"""Campaign-level verification: bound sweeps, diagonal identities, copy mismatch.

Campaigns derive each trial's generator from (seed, trial index), so
reports are reproducible and independent of execution order.
"""

from dataclasses import dataclass, field
from math import comb, sqrt

import numpy as np

from . import rdm
from .concurrence import multipartite_concurrence, subspace_dim
from .errors import DegenerateDirection, RangeError, ShapeError
from .fock import FermionState, SystemShape, random_slater_state, random_state, slater_state
from .two_copy import CopyPair, DoubledOperator, expectation, observable_Af

UPPER_BOUND_ATOL = 1e-10
LOWER_BOUND_ATOL = 1e-10
SLATER_EQUALITY_ATOL = 1e-10
DIAGONAL_ATOL = 1e-12
GSQ_ATOL = 1e-12
DECOMPOSITION_ATOL = 1e-10
GAP_FLOOR = 1e-13


@dataclass(frozen=True)
class SensitivityRecord:
    """Concurrence estimates for one copy-mismatch magnitude."""

    epsilon: float
    c_exp: float
    c_mean: float
    gap: float


@dataclass(frozen=True)
class CampaignReport:
    """Worst-case margins of one verification campaign and its pass flag."""

    kind: str
    shape: SystemShape
    trials: int
    seed: int | None
    metrics: dict = field(default_factory=dict)
    passed: bool = False


def orthogonal_direction(
    state: FermionState, seed, max_tries: int = 10
) -> FermionState:
    """Seeded random state projected orthogonal to ``state`` and normalized."""
    psi = state.amplitudes
    for attempt in range(max_tries):
        cand = random_state(state.shape, seed=[seed, attempt]).amplitudes
        perp = cand - np.vdot(psi, cand) * psi
        norm = np.linalg.norm(perp)
        if norm > 1e-8:
            return FermionState(state.shape, perp / norm)
    raise DegenerateDirection(
        f"no direction orthogonal to the state after {max_tries} draws"
    )


def sensitivity_sweep(
    state: FermionState,
    direction_seed,
    epsilons,
    observable: DoubledOperator | None = None,
) -> list:
    """Compare the mixed-copy estimate against the per-copy mean.

    The second copy is sqrt(1 - eps^2) * psi + eps * delta with a fixed
    orthonormal direction delta; the mixed-copy estimate is the square
    root of the (clamped) two-copy expectation.
    """
    epsilons = sorted(float(e) for e in epsilons)
    for e in epsilons:
        if not 0.0 < e <= 0.5:
            raise RangeError(f"epsilon {e!r} outside (0, 0.5]")
    op = observable if observable is not None else observable_Af(state.shape)
    delta = orthogonal_direction(state, direction_seed)
    c_base = multipartite_concurrence(state).value
    records = []
    for eps in epsilons:
        amps = sqrt(1.0 - eps**2) * state.amplitudes + eps * delta.amplitudes
        other = FermionState(state.shape, amps)
        c_exp = sqrt(max(0.0, expectation(op, CopyPair(state, other))))
        c_mean = 0.5 * (c_base + multipartite_concurrence(other).value)
        records.append(SensitivityRecord(eps, c_exp, c_mean, abs(c_exp - c_mean)))
    return records


def fit_gap_slope(records, floor: float = GAP_FLOOR) -> float:
    """Least-squares log-log slope of gap vs epsilon, ignoring noise-floor points."""
    eps = np.array([r.epsilon for r in records])
    gap = np.array([r.gap for r in records])
    mask = gap > floor
    if int(np.sum(mask)) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(eps[mask]), np.log(gap[mask]), 1)
    return float(slope)


def inequality_campaign(shape: SystemShape, trials: int, seed: int) -> CampaignReport:
    """Purity-bound sweep over random states plus random Slater equality checks."""
    if trials < 1:
        raise RangeError(f"trials must be >= 1, got {trials}")
    n = shape.n
    if n < 2:
        raise ShapeError("campaign needs n >= 2")
    worst_upper = -np.inf
    worst_lower = -np.inf
    for t in range(trials):
        s = random_state(shape, seed=[seed, t])
        for m in range(1, n):
            p = rdm.purity_direct(s, m)
            worst_upper = max(worst_upper, p - 1.0 / comb(n, m))
            worst_lower = max(worst_lower, 1.0 / subspace_dim(shape, m) - p)
    worst_slater = 0.0
    for t in range(trials):
        s = random_slater_state(shape, seed=[seed, trials + t])
        for m in range(1, n):
            worst_slater = max(worst_slater, abs(rdm.purity_direct(s, m) - 1.0 / comb(n, m)))
    metrics = {
        "max_upper_violation": float(worst_upper),
        "max_lower_violation": float(worst_lower),
        "max_slater_equality_gap": float(worst_slater),
    }
    passed = bool(
        worst_upper <= UPPER_BOUND_ATOL
        and worst_lower <= LOWER_BOUND_ATOL
        and worst_slater <= SLATER_EQUALITY_ATOL
    )
    return CampaignReport("inequality", shape, trials, seed, metrics, passed)


def appendix_verify(state: FermionState) -> CampaignReport:
    """Check the closed-form diagonal and its identities for every cut size."""
    n = state.shape.n
    if n < 2:
        raise ShapeError("verification needs n >= 2")
    worst_diag = 0.0
    worst_gsq = 0.0
    worst_decomp = 0.0
    min_subtracted = np.inf
    for m in range(1, n):
        rep = rdm.diagonal_via_appendix(state, m)
        worst_diag = max(worst_diag, rep.residual)
        worst_gsq = max(worst_gsq, rep.gsq_residual)
        worst_decomp = max(worst_decomp, rep.decomposition_residual)
        min_subtracted = min(min_subtracted, rep.subtracted_term)
    metrics = {
        "max_diagonal_residual": float(worst_diag),
        "max_gsq_residual": float(worst_gsq),
        "max_decomposition_residual": float(worst_decomp),
        "min_subtracted_term": float(min_subtracted),
    }
    passed = bool(
        worst_diag <= DIAGONAL_ATOL
        and worst_gsq <= GSQ_ATOL
        and worst_decomp <= DECOMPOSITION_ATOL
        and min_subtracted >= -1e-15
    )
    return CampaignReport("appendix", state.shape, 0, None, metrics, passed)


def slater_equality_check(shape: SystemShape, seed: int = 0) -> CampaignReport:
    """Both branches of the equality-iff-Slater-rank-1 statement.

    Positive case: a random Slater determinant hits every purity bound.
    Negative case: an unequal-weight superposition of two disjoint Slater
    determinants falls strictly below, with a strictly positive pair term
    in the diagonal decomposition.
    """
    n = shape.n
    if 2 * n > shape.d:
        raise ShapeError(f"need d >= 2n to build disjoint determinants, got {shape}")
    pos_gap = 0.0
    s = random_slater_state(shape, seed=seed)
    for m in range(1, n):
        pos_gap = max(pos_gap, abs(rdm.purity_direct(s, m) - 1.0 / comb(n, m)))
    a = slater_state(shape, list(range(1, n + 1))).amplitudes
    b = slater_state(shape, list(range(n + 1, 2 * n + 1))).amplitudes
    two_term = FermionState(shape, sqrt(0.9) * a + sqrt(0.1) * b)
    neg_margin = np.inf
    min_subtracted = np.inf
    for m in range(1, n):
        neg_margin = min(
            neg_margin, 1.0 / comb(n, m) - rdm.purity_direct(two_term, m)
        )
        min_subtracted = min(
            min_subtracted, rdm.diagonal_via_appendix(two_term, m).subtracted_term
        )
    metrics = {
        "slater_equality_gap": float(pos_gap),
        "two_term_strict_margin": float(neg_margin),
        "two_term_min_subtracted": float(min_subtracted),
    }
    passed = bool(
        pos_gap <= SLATER_EQUALITY_ATOL
        and neg_margin > 1e-6
        and min_subtracted > 1e-6
    )
    return CampaignReport("slater-equality", shape, 1, seed, metrics, passed)
