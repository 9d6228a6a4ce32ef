"""Fock basis, fermionic pure states, representation conversions, generators.

Mode labels are 1-based in the public API (tuples, state files); internal
arrays index modes from 0.  A state's amplitude at an ordered tuple
(i1 < ... < in) is the coefficient of the creation operators applied in
ascending mode order.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, sqrt

import numpy as np

from .errors import (
    AntisymmetryError,
    ModeError,
    NormError,
    ShapeError,
    UnitarityError,
)

NORM_ATOL = 1e-10


@dataclass(frozen=True)
class SystemShape:
    """System of ``n`` identical fermions with ``d`` single-particle modes."""

    d: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.d, int) and isinstance(self.n, int)):
            raise ShapeError(f"d and n must be integers, got ({self.d!r}, {self.n!r})")
        if self.n < 1 or self.n > self.d:
            raise ShapeError(
                f"need 1 <= n <= d for an antisymmetric state, got n={self.n}, d={self.d}"
            )

    @property
    def basis_size(self) -> int:
        return comb(self.d, self.n)

    @property
    def first_quantized_dim(self) -> int:
        return self.d**self.n


class OccupationBasis:
    """Lexicographically ordered strictly increasing n-tuples over {1..d}."""

    def __init__(self, shape: SystemShape):
        self.shape = shape
        self._tuples = tuple(
            tuple(i + 1 for i in c) for c in combinations(range(shape.d), shape.n)
        )
        self._index = {t: k for k, t in enumerate(self._tuples)}

    @property
    def tuples(self):
        return self._tuples

    def rank(self, modes) -> int:
        key = tuple(modes)
        try:
            return self._index[key]
        except KeyError:
            raise ModeError(f"{key} is not an ordered mode tuple of this basis") from None

    def unrank(self, k: int):
        return self._tuples[k]

    def __len__(self) -> int:
        return len(self._tuples)

    def __iter__(self):
        return iter(self._tuples)

    def __getitem__(self, k):
        return self._tuples[k]


@lru_cache(maxsize=None)
def enumerate_basis(shape: SystemShape) -> OccupationBasis:
    """The canonical occupation basis for a shape (cached)."""
    return OccupationBasis(shape)


@lru_cache(maxsize=None)
def _tuple_array(shape: SystemShape) -> np.ndarray:
    """0-based basis tuples as an int array of shape (basis_size, n)."""
    arr = np.array(
        list(combinations(range(shape.d), shape.n)), dtype=np.int64
    ).reshape(shape.basis_size, shape.n)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FermionState:
    """Pure n-fermion state over the occupation basis of a shape."""

    shape: SystemShape
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.shape.basis_size,):
            raise ShapeError(
                f"expected {self.shape.basis_size} amplitudes, got shape {amps.shape}"
            )
        total = float(np.sum(np.abs(amps) ** 2))
        if abs(total - 1.0) > NORM_ATOL:
            raise NormError(f"amplitude norm^2 = {total!r} is not 1 within {NORM_ATOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def basis(self) -> OccupationBasis:
        return enumerate_basis(self.shape)

    def amplitude(self, modes) -> complex:
        return complex(self.amplitudes[self.basis.rank(modes)])


@dataclass(frozen=True)
class AntisymTensor:
    """Fully antisymmetric rank-n coefficient tensor over d modes.

    Entries sum to 1/n! in squared modulus; the ordered entry at a sorted
    tuple equals the state amplitude divided by n!.
    """

    shape: SystemShape
    entries: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.entries, dtype=np.complex128)
        expected = (self.shape.d,) * self.shape.n
        if w.shape != expected:
            raise ShapeError(f"expected tensor of shape {expected}, got {w.shape}")
        scale = float(np.max(np.abs(w))) or 1.0
        for axis in range(self.shape.n - 1):
            defect = np.max(np.abs(np.swapaxes(w, axis, axis + 1) + w))
            if defect > 1e-8 * scale:
                raise AntisymmetryError(
                    f"transposition of indices {axis},{axis + 1} breaks antisymmetry "
                    f"(defect {defect:.3e})"
                )
        total = float(np.sum(np.abs(w) ** 2))
        target = 1.0 / factorial(self.shape.n)
        if abs(total - target) > 1e-8:
            raise NormError(f"tensor norm^2 = {total!r}, expected 1/n! = {target!r}")
        w.flags.writeable = False
        object.__setattr__(self, "entries", w)


@dataclass(frozen=True)
class FirstQuantizedVector:
    """State expanded over the d^n product basis; antisymmetric in all slots."""

    shape: SystemShape
    entries: np.ndarray


def _sorted_with_parity(modes):
    """Sort a mode sequence, returning (sorted tuple, parity sign)."""
    modes = list(modes)
    sign = 1
    for i in range(1, len(modes)):
        j = i
        while j > 0 and modes[j - 1] > modes[j]:
            modes[j - 1], modes[j] = modes[j], modes[j - 1]
            sign = -sign
            j -= 1
    return tuple(modes), sign


def slater_state(shape: SystemShape, modes) -> FermionState:
    """Single Slater determinant on the given (1-based) modes."""
    modes = list(modes)
    if len(modes) != shape.n:
        raise ModeError(f"expected {shape.n} modes, got {len(modes)}")
    if len(set(modes)) != len(modes):
        raise ModeError(f"repeated mode in {modes}")
    for m in modes:
        if not (isinstance(m, int) and 1 <= m <= shape.d):
            raise ModeError(f"mode {m!r} outside 1..{shape.d}")
    ordered, sign = _sorted_with_parity(modes)
    amps = np.zeros(shape.basis_size, dtype=np.complex128)
    amps[enumerate_basis(shape).rank(ordered)] = sign
    return FermionState(shape, amps)


@lru_cache(maxsize=None)
def _signed_permutations(n: int):
    """All permutations of range(n) with their parity signs."""
    out = []
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        out.append((p, -1 if inv % 2 else 1))
    return tuple(out)


def to_antisym_tensor(state: FermionState) -> AntisymTensor:
    """Expand a state into its fully antisymmetric coefficient tensor."""
    shape = state.shape
    d, n = shape.d, shape.n
    w = np.zeros((d,) * n, dtype=np.complex128)
    fact = factorial(n)
    tuples0 = _tuple_array(shape)
    for k in range(shape.basis_size):
        a = state.amplitudes[k]
        if a == 0:
            continue
        t = tuples0[k]
        for perm, sign in _signed_permutations(n):
            w[tuple(t[list(perm)])] = sign * a / fact
    return AntisymTensor(shape, w)


def from_antisym_tensor(tensor: AntisymTensor) -> FermionState:
    """Inverse of :func:`to_antisym_tensor` (amplitude = n! * ordered entry)."""
    shape = tensor.shape
    fact = factorial(shape.n)
    tuples0 = _tuple_array(shape)
    amps = np.array(
        [fact * tensor.entries[tuple(t)] for t in tuples0], dtype=np.complex128
    )
    return FermionState(shape, amps)


@lru_cache(maxsize=None)
def _embedding_matrix(d: int, n: int) -> np.ndarray:
    """Isometry from the occupation basis into the d^n product basis."""
    size = d**n
    cols = comb(d, n)
    E = np.zeros((size, cols), dtype=np.float64)
    inv_sqrt = 1.0 / sqrt(factorial(n))
    strides = np.array([d ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    for col, t in enumerate(combinations(range(d), n)):
        t = np.array(t, dtype=np.int64)
        for perm, sign in _signed_permutations(n):
            idx = int(np.dot(t[list(perm)], strides))
            E[idx, col] = sign * inv_sqrt
    E.flags.writeable = False
    return E


def embed_first_quantized(state: FermionState) -> FirstQuantizedVector:
    """Expand the state over the d^n product basis (unit norm, antisymmetric)."""
    E = _embedding_matrix(state.shape.d, state.shape.n)
    return FirstQuantizedVector(state.shape, E @ state.amplitudes)


def apply_mode_unitary(state: FermionState, unitary, tol: float = 1e-10) -> FermionState:
    """Single-particle basis change f†_i -> sum_j U[j, i] f†_j."""
    d, n = state.shape.d, state.shape.n
    U = np.ascontiguousarray(unitary, dtype=np.complex128)
    if U.shape != (d, d):
        raise ShapeError(f"expected a {d}x{d} matrix, got {U.shape}")
    defect = np.max(np.abs(U.conj().T @ U - np.eye(d)))
    if defect > tol:
        raise UnitarityError(f"matrix is not unitary (defect {defect:.3e})")
    w = to_antisym_tensor(state).entries
    out_letters = "abcdefgh"[:n]
    in_letters = "ijklmnop"[:n]
    spec = (
        ",".join(f"{o}{i}" for o, i in zip(out_letters, in_letters))
        + f",{in_letters}->{out_letters}"
    )
    w_new = np.einsum(spec, *([U] * n), w)
    fact = factorial(n)
    tuples0 = _tuple_array(state.shape)
    amps = np.array([fact * w_new[tuple(t)] for t in tuples0], dtype=np.complex128)
    amps /= np.linalg.norm(amps)  # remove float drift, norm is preserved exactly
    return FermionState(state.shape, amps)


def random_state(shape: SystemShape, seed=None) -> FermionState:
    """Uniform random pure state on the C(d, n)-dimensional sphere."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(shape.basis_size) + 1j * rng.standard_normal(shape.basis_size)
    return FermionState(shape, z / np.linalg.norm(z))


def random_slater_state(shape: SystemShape, seed=None) -> FermionState:
    """Random Slater determinant from an orthonormalized Gaussian frame."""
    rng = np.random.default_rng(seed)
    frame = rng.standard_normal((shape.d, shape.n)) + 1j * rng.standard_normal(
        (shape.d, shape.n)
    )
    Q, _ = np.linalg.qr(frame)
    tuples0 = _tuple_array(shape)
    amps = np.linalg.det(Q[tuples0, :])  # Cauchy-Binet: unit norm up to rounding
    amps = amps / np.linalg.norm(amps)
    return FermionState(shape, amps)


def random_mode_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-distributed d x d unitary (QR of a Ginibre matrix, phases fixed)."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    phases = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * phases
