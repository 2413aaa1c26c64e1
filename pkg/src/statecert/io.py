"""File formats.

* Matrix text: first line ``dim N``, then N rows of N whitespace-separated
  complex entries written ``a+bi`` or ``(a,b)``. Blank lines and lines
  starting with ``#`` are ignored.
* ``WGF1`` (Wigner grid, little-endian): magic ``WGF1``, five float64
  ``q_min q_max p_min p_max hbar``, two uint32 ``n_q n_p``, then
  ``n_q * n_p`` float64 values, q-major.
* ``KRN1`` (kernel, little-endian): magic ``KRN1``, float64 ``x_min x_max``,
  uint32 ``n``, then ``n * n`` complex128 values, row-major.
"""

from __future__ import annotations

import re
import struct
from pathlib import Path

import numpy as np

from .kernel import KernelOperator
from .phase_space import PhaseGrid, WignerGrid


class FormatError(ValueError):
    """Malformed input file; the message names the offending location."""


_PAIR = re.compile(r"^\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)$")


def parse_complex(token: str) -> complex:
    """``a+bi``, ``a-bj``, ``bi``, ``a`` or ``(a,b)``."""
    m = _PAIR.match(token)
    if m:
        value = complex(float(m.group(1)), float(m.group(2)))
    else:
        value = complex(token.replace("i", "j"))
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ValueError("non-finite value")
    return value


def format_complex(z: complex) -> str:
    """``(a,b)`` with round-trip exact ``repr`` floats."""
    return f"({float(z.real)!r},{float(z.imag)!r})"


def _tokens(line: str) -> list[str]:
    # keep "(a, b)" together even if it contains a space after the comma
    return re.findall(r"\([^)]*\)|\S+", line)


def read_matrix_text(text: str, source: str = "<string>") -> np.ndarray:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError(f"{source}: empty file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise FormatError(f"{source}:{lineno}: expected header 'dim N', got {header!r}")
    dim = int(parts[1])
    rows = lines[1:]
    if len(rows) != dim:
        raise FormatError(f"{source}: expected {dim} rows, found {len(rows)}")
    out = np.empty((dim, dim), dtype=np.complex128)
    for r, (lineno, line) in enumerate(rows):
        toks = _tokens(line)
        if len(toks) != dim:
            raise FormatError(
                f"{source}:{lineno}: row {r + 1} has {len(toks)} entries, expected {dim}")
        for c, tok in enumerate(toks):
            try:
                out[r, c] = parse_complex(tok)
            except ValueError as exc:
                raise FormatError(
                    f"{source}:{lineno}: row {r + 1}, column {c + 1}: bad entry {tok!r} ({exc})"
                ) from None
    return out


def parse_matrix_file(path) -> np.ndarray:
    path = Path(path)
    return read_matrix_text(path.read_text(), str(path))


def write_matrix_file(path, m) -> None:
    m = np.asarray(m, dtype=np.complex128)
    lines = [f"dim {m.shape[0]}"]
    lines += [" ".join(format_complex(z) for z in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


_WGF_HEADER = struct.Struct("<4s5d2I")
_KRN_HEADER = struct.Struct("<4s2dI")


def _check_magic(magic: bytes, expected: bytes, source: str) -> None:
    if magic != expected:
        if magic[:3] == expected[:3]:
            raise FormatError(f"{source}: unsupported format version {magic!r}, expected {expected!r}")
        raise FormatError(f"{source}: bad magic {magic!r}, expected {expected!r}")


def parse_wigner_bytes(data: bytes, source: str = "<bytes>") -> WignerGrid:
    if len(data) < _WGF_HEADER.size:
        raise FormatError(
            f"{source}: truncated header, expected {_WGF_HEADER.size} bytes, got {len(data)}")
    magic, q_min, q_max, p_min, p_max, hbar, n_q, n_p = _WGF_HEADER.unpack_from(data)
    _check_magic(magic, b"WGF1", source)
    expected = _WGF_HEADER.size + 8 * n_q * n_p
    if len(data) != expected:
        raise FormatError(f"{source}: expected {expected} bytes, got {len(data)}")
    header = np.array([q_min, q_max, p_min, p_max, hbar])
    values = np.frombuffer(data, dtype="<f8", offset=_WGF_HEADER.size).reshape(n_q, n_p)
    if not (np.all(np.isfinite(header)) and np.all(np.isfinite(values))):
        raise FormatError(f"{source}: non-finite values")
    try:
        grid = PhaseGrid(q_min, q_max, p_min, p_max, n_q, n_p)
        return WignerGrid(grid, hbar, values.astype(float))
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None


def parse_wigner_file(path) -> WignerGrid:
    path = Path(path)
    return parse_wigner_bytes(path.read_bytes(), str(path))


def wigner_bytes(w: WignerGrid) -> bytes:
    if np.iscomplexobj(w.values):
        raise ValueError("only real Wigner grids can be written")
    g = w.grid
    head = _WGF_HEADER.pack(b"WGF1", g.q_min, g.q_max, g.p_min, g.p_max, w.hbar, g.n_q, g.n_p)
    return head + np.ascontiguousarray(w.values, dtype="<f8").tobytes()


def write_wigner_file(path, w: WignerGrid) -> None:
    Path(path).write_bytes(wigner_bytes(w))


def parse_kernel_bytes(data: bytes, source: str = "<bytes>") -> KernelOperator:
    if len(data) < _KRN_HEADER.size:
        raise FormatError(
            f"{source}: truncated header, expected {_KRN_HEADER.size} bytes, got {len(data)}")
    magic, x_min, x_max, n = _KRN_HEADER.unpack_from(data)
    _check_magic(magic, b"KRN1", source)
    expected = _KRN_HEADER.size + 16 * n * n
    if len(data) != expected:
        raise FormatError(f"{source}: expected {expected} bytes, got {len(data)}")
    values = np.frombuffer(data, dtype="<c16", offset=_KRN_HEADER.size).reshape(n, n)
    try:
        return KernelOperator(x_min, x_max, values)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None


def parse_kernel_file(path) -> KernelOperator:
    path = Path(path)
    return parse_kernel_bytes(path.read_bytes(), str(path))


def kernel_bytes(k: KernelOperator) -> bytes:
    head = _KRN_HEADER.pack(b"KRN1", k.x_min, k.x_max, k.n_points)
    return head + np.ascontiguousarray(k.values, dtype="<c16").tobytes()


def write_kernel_file(path, k: KernelOperator) -> None:
    Path(path).write_bytes(kernel_bytes(k))
