"""Pencil documents: JSON with ``[re, im]`` entries, or a Matrix Market pair."""
from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np
import scipy.io

from .errors import InputError
from .pencil import Pencil

_LAMBDA_RE = re.compile(r"\s+")


def parse_complex(text) -> complex:
    """Parse ``"a+bi"`` style numbers (``i`` or ``j`` as the imaginary unit)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = _LAMBDA_RE.sub("", str(text)).replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def format_complex(z) -> str:
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{abs(z.imag)!r}i"


def _encode(M: np.ndarray):
    M = np.asarray(M, dtype=complex)
    return np.stack([M.real, M.imag], axis=-1).tolist()


def _decode(data, name, shape):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{name}: entries must be [re, im] number pairs") from None
    m, n = shape
    if m * n == 0:
        return np.zeros((m, n), dtype=complex)
    if arr.shape != (m, n, 2):
        raise InputError(f"{name}: expected shape ({m}, {n}, 2) of [re, im] pairs, got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def pencil_to_document(p: Pencil, lambda0=None, metadata=None) -> dict:
    """Document for ``A + lam E`` with ``A = p.L0`` and ``E = p.L1``."""
    m, n = p.shape
    doc = {"m": int(m), "n": int(n), "A": _encode(p.L0), "E": _encode(p.L1)}
    if lambda0 is not None:
        doc["lambda0"] = format_complex(lambda0)
    if metadata:
        doc["metadata"] = metadata
    return doc


def pencil_from_document(doc: dict):
    """``(pencil, lambda0 or None, metadata)`` from a parsed document."""
    if not isinstance(doc, dict):
        raise InputError("pencil document must be a JSON object")
    try:
        m, n = int(doc["m"]), int(doc["n"])
        A, E = doc["A"], doc["E"]
    except KeyError as exc:
        raise InputError(f"pencil document is missing {exc.args[0]!r}") from None
    except (TypeError, ValueError):
        raise InputError("m and n must be integers") from None
    if m < 0 or n < 0:
        raise InputError("m and n must be nonnegative")
    L0 = _decode(A, "A", (m, n))
    L1 = _decode(E, "E", (m, n))
    lam = doc.get("lambda0")
    return Pencil(L0, L1), (None if lam is None else parse_complex(lam)), doc.get("metadata", {})


def write_document(path, doc: dict):
    Path(path).write_text(json.dumps(doc, indent=1, allow_nan=False) + "\n")


def read_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return pencil_from_document(doc)


def read_matrix_market_pair(path_a, path_e) -> Pencil:
    """Pencil ``A + lam E`` from two Matrix Market files (coordinate or array)."""
    mats = []
    for path in (path_a, path_e):
        try:
            M = scipy.io.mmread(str(path))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
        mats.append(M.toarray() if hasattr(M, "toarray") else np.asarray(M))
    if mats[0].shape != mats[1].shape:
        raise InputError(f"A and E shapes differ: {mats[0].shape} vs {mats[1].shape}")
    return Pencil(mats[0], mats[1])


def write_matrix_market_pair(p: Pencil, path_a, path_e):
    scipy.io.mmwrite(str(path_a), p.L0)
    scipy.io.mmwrite(str(path_e), p.L1)
