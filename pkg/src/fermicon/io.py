"""State file parsing/serialization ("occupation-v1") and report rendering.

State files are sparse JSON: tuples not listed carry amplitude zero.
Serialization is canonical (sorted tuples, fixed field order, 17
significant digits), so parse -> serialize is byte-stable.
"""

import json
import math

import numpy as np

from .errors import StateFileError
from .fock import FermionState, SystemShape, enumerate_basis

FORMAT_TAG = "occupation-v1"

# norm deviation below this is treated as rounding and silently fixed
NORM_CLEAN_BAND = 1e-6
# deviation up to here is repairable with an explicit renormalize request
NORM_REPAIR_BAND = 1e-2


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise StateFileError(f"non-finite value {x!r} in state")
    return format(float(x), ".17g")


def state_to_text(state: FermionState) -> str:
    """Canonical occupation-v1 serialization of a state."""
    basis = enumerate_basis(state.shape)
    lines = [
        "{",
        f'  "format": "{FORMAT_TAG}",',
        f'  "d": {state.shape.d},',
        f'  "n": {state.shape.n},',
        '  "amplitudes": [',
    ]
    records = []
    for k, modes in enumerate(basis):
        a = state.amplitudes[k]
        if a == 0:
            continue
        modes_txt = ", ".join(str(m) for m in modes)
        records.append(
            f'    {{"modes": [{modes_txt}], "re": {_fmt(a.real)}, "im": {_fmt(a.imag)}}}'
        )
    lines.append(",\n".join(records))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_state_text(text: str, renormalize: bool = False) -> FermionState:
    """Parse and validate an occupation-v1 state file."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    if doc.get("format") != FORMAT_TAG:
        raise StateFileError(f"unsupported format tag {doc.get('format')!r}")
    d, n = doc.get("d"), doc.get("n")
    if not (isinstance(d, int) and isinstance(n, int)):
        raise StateFileError("d and n must be integers")
    try:
        shape = SystemShape(d, n)
    except Exception as exc:
        raise StateFileError(str(exc)) from None
    records = doc.get("amplitudes")
    if not isinstance(records, list) or not records:
        raise StateFileError("amplitudes must be a nonempty list")
    basis = enumerate_basis(shape)
    amps = np.zeros(shape.basis_size, dtype=np.complex128)
    seen = set()
    for rec in records:
        if not isinstance(rec, dict):
            raise StateFileError(f"amplitude record {rec!r} is not an object")
        modes = rec.get("modes")
        if (
            not isinstance(modes, list)
            or len(modes) != n
            or any(not isinstance(m, int) for m in modes)
        ):
            raise StateFileError(f"modes {modes!r} must be a list of {n} integers")
        if any(m < 1 or m > d for m in modes):
            raise StateFileError(f"modes {modes} outside 1..{d}")
        if any(modes[i] >= modes[i + 1] for i in range(n - 1)):
            raise StateFileError(f"modes {modes} must be strictly increasing")
        key = tuple(modes)
        if key in seen:
            raise StateFileError(f"duplicate tuple {key}")
        seen.add(key)
        re_part, im_part = rec.get("re", 0.0), rec.get("im", 0.0)
        if not all(isinstance(v, (int, float)) for v in (re_part, im_part)):
            raise StateFileError(f"re/im of {key} must be numbers")
        amps[basis.rank(key)] = complex(re_part, im_part)
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise StateFileError("state has zero norm")
    deviation = abs(norm - 1.0)
    if deviation > NORM_REPAIR_BAND:
        raise StateFileError(
            f"norm {norm!r} deviates by {deviation:.3e}; beyond the repairable band"
        )
    if deviation > NORM_CLEAN_BAND and not renormalize:
        raise StateFileError(
            f"norm {norm!r} deviates by {deviation:.3e}; pass --renormalize to accept"
        )
    return FermionState(shape, amps / norm)


def render_report(payload: dict) -> str:
    """Deterministic JSON rendering of a report payload."""
    return json.dumps(payload, indent=2) + "\n"
