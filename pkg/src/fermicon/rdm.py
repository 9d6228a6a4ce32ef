"""Reduced density matrices of n-fermion pure states and their purities.

The fast path contracts amplitudes in the occupation basis through the
split-matrix kernels; the first-quantized partial trace is kept as an
independent oracle for tests.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .errors import RangeError
from .fock import FermionState, SystemShape, _embedding_matrix, embed_first_quantized

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, trace-1 matrix tagged with its basis convention.

    ``basis`` is "occupation" (size C(d, m)) or "first-quantized" (size d^m).
    """

    shape: SystemShape
    m: int
    basis: str
    matrix: np.ndarray

    def __post_init__(self):
        rho = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got {rho.shape}")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITICITY_ATOL:
            raise ValueError(f"not Hermitian (defect {herm:.3e})")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace {tr!r} is not 1 within {TRACE_ATOL}")
        lo = float(np.min(np.linalg.eigvalsh(rho)))
        if lo < EIGENVALUE_FLOOR:
            raise ValueError(f"negative eigenvalue {lo:.3e} below floor")
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with the tiny negative slack clipped to 0."""
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, None)


def _check_m(state: FermionState, m: int) -> None:
    if not (isinstance(m, int) and 1 <= m <= state.shape.n - 1):
        raise RangeError(f"subsystem size m={m!r} outside [1, {state.shape.n - 1}]")


def reduce(state: FermionState, m: int) -> DensityMatrix:
    """m-particle reduced density matrix in the m-particle occupation basis."""
    _check_m(state, m)
    d, n = state.shape.d, state.shape.n
    B = _kernels.split_matrix(state.amplitudes, d, n, m)
    rho = (B @ B.conj().T) / comb(n, m)
    return DensityMatrix(state.shape, m, "occupation", rho)


def purity(dm: DensityMatrix) -> float:
    """Tr rho^2."""
    return float(np.real(np.vdot(dm.matrix, dm.matrix)))


def purity_direct(state: FermionState, m: int) -> float:
    """Tr rho_m^2 via double amplitude contraction, without materializing rho_m."""
    _check_m(state, m)
    return _kernels.split_purity(state.amplitudes, state.shape.d, state.shape.n, m)


def reduce_first_quantized(state: FermionState, m: int) -> DensityMatrix:
    """Partial-trace oracle over the d^n product basis (test reference)."""
    _check_m(state, m)
    d, n = state.shape.d, state.shape.n
    psi = embed_first_quantized(state).entries.reshape((d,) * n)
    traced = list(range(m, n))
    rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    rho = rho.reshape(d**m, d**m)
    return DensityMatrix(state.shape, m, "first-quantized", rho)


def occupation_to_first_quantized(dm: DensityMatrix) -> DensityMatrix:
    """Push an occupation-basis reduced matrix into the d^m product basis."""
    if dm.basis != "occupation":
        raise ValueError(f"expected an occupation-basis matrix, got {dm.basis!r}")
    E = _embedding_matrix(dm.shape.d, dm.m)
    return DensityMatrix(dm.shape, dm.m, "first-quantized", E @ dm.matrix @ E.T)


@dataclass(frozen=True)
class DiagonalReport:
    """Closed-form diagonal of rho_m plus the identities it satisfies."""

    m: int
    g: np.ndarray  # diagonal over ordered m-tuples
    residual: float  # max deviation from the direct rho_m diagonal
    gsq_residual: float  # deviation of the per-tuple sum-of-squares identity
    decomposition_residual: float  # deviation of the purity-style decomposition
    subtracted_term: float  # nonnegative deficit below the 1/C(n,m) bound

    def __post_init__(self):
        g = np.ascontiguousarray(self.g, dtype=np.float64)
        if float(np.min(g)) < -1e-10:
            raise ValueError("diagonal entry below -1e-10")
        if abs(float(np.sum(g)) - 1.0) > 1e-10:
            raise ValueError("diagonal does not sum to 1")
        g.flags.writeable = False
        object.__setattr__(self, "g", g)


def diagonal_via_appendix(state: FermionState, m: int) -> DiagonalReport:
    """Diagonal of rho_m from the weight-splitting closed form.

    Each occupied tuple spreads its squared amplitude uniformly over its
    C(n, m) ordered m-subtuples.  Also evaluates the two identities that
    make the purity bound work: the per-tuple sum of squared splitting
    weights equals 1/C(n, m), and the sum of squared diagonal elements
    decomposes as 1/C(n, m) minus a nonnegative pair term controlled by
    tuple overlaps.
    """
    _check_m(state, m)
    d, n = state.shape.d, state.shape.n
    c = comb(n, m)
    rows, _, _ = _kernels.split_tables(d, n, m)
    weights = np.abs(state.amplitudes) ** 2

    g = np.zeros(comb(d, m), dtype=np.float64)
    np.add.at(g, rows, (weights / c)[:, None])

    direct = np.real(np.diagonal(reduce(state, m).matrix))
    residual = float(np.max(np.abs(g - direct)))

    # sum over the C(n, m) subtuples of a fixed occupied tuple of (1/C)^2
    split = np.full(c, 1.0 / c)
    gsq_residual = abs(float(split @ split) - 1.0 / c)

    # pair term: occupied tuples t < t' contribute
    # 2 * D_t * D_t' * (C - C(|t ∩ t'|, m)) / C^2
    masks = []
    for t in combinations(range(d), n):
        bits = 0
        for i in t:
            bits |= 1 << i
        masks.append(bits)
    term = 0.0
    nz = [k for k in range(len(weights)) if weights[k] > 0.0]
    for a_idx in range(len(nz)):
        for b_idx in range(a_idx + 1, len(nz)):
            ka, kb = nz[a_idx], nz[b_idx]
            overlap = (masks[ka] & masks[kb]).bit_count()
            shared = comb(overlap, m) if overlap >= m else 0
            term += 2.0 * weights[ka] * weights[kb] * (c - shared) / c**2
    lhs = float(g @ g)
    decomposition_residual = abs(lhs - (1.0 / c - term))
    return DiagonalReport(m, g, residual, gsq_residual, decomposition_residual, term)
