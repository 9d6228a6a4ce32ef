"""Two-copy observables realizing purities and the concurrence, matrix-free.

Operators act on vectors of dimension d^n * d^n (two first-quantized
copies).  Everything is built from block swaps between the copies, i.e.
axis transpositions of the vector reshaped to (d,) * 2n, so the full
matrix is never materialized.
"""

import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from .concurrence import alpha
from .errors import EmptyBlockError, RangeError, ShapeError, ShapeMismatch
from .fock import FermionState, SystemShape, embed_first_quantized

IMAG_DIAGNOSTIC_ATOL = 1e-10


@dataclass(frozen=True)
class DoubledOperator:
    """Hermitian linear map on two first-quantized copies, as apply-to-vector."""

    shape: SystemShape
    apply: Callable[[np.ndarray], np.ndarray]
    hermitian: bool = True
    label: str = ""

    @property
    def dim(self) -> int:
        return self.shape.first_quantized_dim ** 2


@dataclass(frozen=True)
class CopyPair:
    """Two same-shape pure states forming the product input of an observable."""

    first: FermionState
    second: FermionState

    def __post_init__(self):
        if self.first.shape != self.second.shape:
            raise ShapeMismatch(
                f"copy shapes differ: {self.first.shape} vs {self.second.shape}"
            )


def _check_block(shape: SystemShape, block) -> tuple:
    slots = tuple(sorted(set(block)))
    if not slots:
        raise EmptyBlockError("slot block must be nonempty")
    for s in slots:
        if not (isinstance(s, int) and 1 <= s <= shape.n):
            raise RangeError(f"slot {s!r} outside 1..{shape.n}")
    return slots


def _swap_axes(shape: SystemShape, slots) -> list:
    n = shape.n
    axes = list(range(2 * n))
    for s in slots:
        i = s - 1
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return axes


def _shaped(shape: SystemShape, v: np.ndarray) -> np.ndarray:
    return v.reshape((shape.d,) * (2 * shape.n))


def swap_operator(shape: SystemShape, block) -> DoubledOperator:
    """Exchange the given slots between copy 1 and copy 2 (1-based slots)."""
    slots = _check_block(shape, block)
    axes = _swap_axes(shape, slots)

    def apply(v: np.ndarray) -> np.ndarray:
        return _shaped(shape, v).transpose(axes).reshape(-1)

    return DoubledOperator(shape, apply, label=f"swap{slots}")


def _projector_apply(shape: SystemShape, slots, sign: int):
    axes = _swap_axes(shape, slots)

    def apply(v: np.ndarray) -> np.ndarray:
        x = _shaped(shape, v)
        return (0.5 * (x + sign * x.transpose(axes))).reshape(-1)

    return apply


def sym_projector(shape: SystemShape, block) -> DoubledOperator:
    """Projector onto the block-swap symmetric subspace, (I + swap)/2."""
    slots = _check_block(shape, block)
    return DoubledOperator(shape, _projector_apply(shape, slots, +1), label=f"P+{slots}")


def antisym_projector(shape: SystemShape, block) -> DoubledOperator:
    """Projector onto the block-swap antisymmetric subspace, (I - swap)/2."""
    slots = _check_block(shape, block)
    return DoubledOperator(shape, _projector_apply(shape, slots, -1), label=f"P-{slots}")


def observable_O_NM(
    shape: SystemShape, m: int, sign: str = "+", block=None
) -> DoubledOperator:
    """Two-copy observable whose identical-copy expectation is Tr rho_m^2.

    Acts on the two copies of an (n - m)-slot block (canonically the
    trailing slots; any block is equivalent by antisymmetry).  Both sign
    choices, 2 P+ - I and I - 2 P-, realize the same operator.
    """
    n = shape.n
    if not (isinstance(m, int) and 1 <= m <= n - 1):
        raise RangeError(f"cut size m={m!r} outside [1, {n - 1}]")
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if block is None:
        block = range(m + 1, n + 1)
    slots = _check_block(shape, block)
    if len(slots) != n - m:
        raise RangeError(f"block {slots} must have {n - m} slots for m={m}")
    proj = _projector_apply(shape, slots, +1 if sign == "+" else -1)

    if sign == "+":
        def apply(v: np.ndarray) -> np.ndarray:
            return 2.0 * proj(v) - v
    else:
        def apply(v: np.ndarray) -> np.ndarray:
            return v - 2.0 * proj(v)

    return DoubledOperator(shape, apply, label=f"O({n - m}){sign}{slots}")


def observable_Af(shape: SystemShape, sign: str = "+") -> DoubledOperator:
    """Observable whose identical-copy expectation is the squared concurrence."""
    n = shape.n
    a = alpha(n, shape.d)
    parts = [(comb(n, m), observable_O_NM(shape, m, sign=sign)) for m in range(1, n)]

    def apply(v: np.ndarray) -> np.ndarray:
        acc = (n - 1) * v.astype(np.complex128, copy=True)
        for weight, op in parts:
            acc -= weight * op.apply(v)
        return a * acc

    return DoubledOperator(shape, apply, label="Af")


@lru_cache(maxsize=None)
def _minus_patterns(n: int) -> tuple:
    """Slot subsets that carry the antisymmetric projector: even size >= 2."""
    out = []
    for size in range(2, n + 1, 2):
        out.extend(combinations(range(1, n + 1), size))
    return tuple(out)


def _slotwise_apply(shape: SystemShape, minus_slots, v: np.ndarray) -> np.ndarray:
    x = v
    for slot in range(1, shape.n + 1):
        sgn = -1 if slot in minus_slots else +1
        x = _projector_apply(shape, (slot,), sgn)(x)
    return x


def observable_A(shape: SystemShape) -> DoubledOperator:
    """Slot-wise projector sum observable for the generic multipartite concurrence.

    Four times the sum, over all sign patterns with an even nonzero number
    of antisymmetric slots, of the product of per-slot exchange projectors.
    """
    if shape.n < 2:
        raise ShapeError("the slot-wise observable needs n >= 2")
    patterns = _minus_patterns(shape.n)

    def apply(v: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(v, dtype=np.complex128)
        for minus_slots in patterns:
            acc += _slotwise_apply(shape, minus_slots, v)
        return 4.0 * acc

    return DoubledOperator(shape, apply, label="A")


def observable_A_tilde(shape: SystemShape) -> DoubledOperator:
    """Factorizable replacement for the slot-wise observable: 4 (I - prod P+)."""
    if shape.n < 2:
        raise ShapeError("the factorizable observable needs n >= 2")

    def apply(v: np.ndarray) -> np.ndarray:
        return 4.0 * (v - _slotwise_apply(shape, (), v))

    return DoubledOperator(shape, apply, label="Atilde")


def observable_Af_prime(shape: SystemShape) -> DoubledOperator:
    """Affine rescaling of the slot-wise observable matching the concurrence."""
    n = shape.n
    a = alpha(n, shape.d)
    base = observable_A(shape)
    offset = 1 + n - 2**n
    scale = 2.0 ** (n - 2)

    def apply(v: np.ndarray) -> np.ndarray:
        return a * (offset * v + scale * base.apply(v))

    return DoubledOperator(shape, apply, label="Af'")


def expectation(op: DoubledOperator, pair: CopyPair) -> float:
    """Real part of the two-copy product expectation, evaluated matrix-free."""
    if op.shape != pair.first.shape:
        raise ShapeMismatch(f"operator shape {op.shape} != state shape {pair.first.shape}")
    v1 = embed_first_quantized(pair.first).entries
    v2 = embed_first_quantized(pair.second).entries
    v = np.kron(v1, v2).astype(np.complex128)
    value = complex(np.vdot(v, op.apply(v)))
    if abs(value.imag) > IMAG_DIAGNOSTIC_ATOL:
        warnings.warn(
            f"two-copy expectation has imaginary part {value.imag:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return value.real


def expectation_identical(op: DoubledOperator, state: FermionState) -> float:
    """Expectation on two identical copies of one state."""
    return expectation(op, CopyPair(state, state))
