"""Problem instances: channel pairs, random ensembles, and file I/O.

A problem instance is the pair of channel matrices seen by the intended
receiver (n_r x n_t) and the eavesdropper (n_e x n_t), plus a transmit power
budget.  Random ensembles use i.i.d. circularly-symmetric complex Gaussian
entries of unit variance (1/2 per real component).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_complex_matrix

FORMAT_HEADER = "mimome-channel v1"


class ParseError(ValueError):
    """Channel file could not be parsed; message names the offending line."""


class DimensionMismatch(ValueError):
    """Declared dimensions are inconsistent with the file contents."""


@dataclass(frozen=True)
class ChannelPair:
    """Channel matrices of the receiver and the eavesdropper.

    Hr has shape (n_r, n_t) and He has shape (n_e, n_t); both act on the same
    transmit vector.
    """

    Hr: np.ndarray
    He: np.ndarray

    def __post_init__(self):
        hr = as_complex_matrix(self.Hr)
        he = as_complex_matrix(self.He)
        if hr.shape[1] != he.shape[1]:
            raise DimensionMismatch(
                f"Hr has {hr.shape[1]} transmit antennas but He has {he.shape[1]}"
            )
        if min(hr.shape[0], he.shape[0], hr.shape[1]) < 1:
            raise DimensionMismatch("all antenna counts must be >= 1")
        hr.setflags(write=False)
        he.setflags(write=False)
        object.__setattr__(self, "Hr", hr)
        object.__setattr__(self, "He", he)

    @property
    def n_t(self) -> int:
        return self.Hr.shape[1]

    @property
    def n_r(self) -> int:
        return self.Hr.shape[0]

    @property
    def n_e(self) -> int:
        return self.He.shape[0]

    @property
    def Ht(self) -> np.ndarray:
        """Stacked channel [Hr; He] of shape (n_r + n_e, n_t)."""
        return np.vstack([self.Hr, self.He])


def substream(master_seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial `index` of a seeded experiment.

    Uses SeedSequence spawn keys, so streams are independent of draw order
    and of how trials are distributed across workers.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def sample_gaussian_pair(n_t: int, n_r: int, n_e: int, seed: int,
                         trial: int = 0) -> ChannelPair:
    """Draw a channel pair with i.i.d. CN(0,1) entries.

    Each entry has independent N(0, 1/2) real and imaginary parts.
    Deterministic for fixed (dims, seed, trial).
    """
    if min(n_t, n_r, n_e) < 1:
        raise ValueError("antenna counts must be >= 1")
    rng = substream(seed, trial)
    scale = np.sqrt(0.5)
    hr = scale * (rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t)))
    he = scale * (rng.standard_normal((n_e, n_t)) + 1j * rng.standard_normal((n_e, n_t)))
    return ChannelPair(hr, he)


def _format_row(row: np.ndarray) -> str:
    parts = []
    for z in row:
        parts.append(f"{z.real:.17g}")
        parts.append(f"{z.imag:.17g}")
    return " ".join(parts)


def write_channel_file(pair: ChannelPair, path, comment: str = "") -> None:
    """Write a channel pair in the `mimome-channel v1` text format."""
    lines = [FORMAT_HEADER]
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"Hr {pair.n_r} {pair.n_t}")
    lines.extend(_format_row(row) for row in pair.Hr)
    lines.append(f"He {pair.n_e} {pair.n_t}")
    lines.extend(_format_row(row) for row in pair.He)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_matrix_rows(lines, start, nrows, ncols, name):
    rows = np.empty((nrows, ncols), dtype=np.complex128)
    filled = 0
    idx = start
    while filled < nrows:
        if idx >= len(lines):
            raise DimensionMismatch(
                f"{name}: expected {nrows} rows, file ended after {filled}"
            )
        lineno, text = lines[idx]
        idx += 1
        tokens = text.split()
        if len(tokens) != 2 * ncols:
            raise DimensionMismatch(
                f"line {lineno}: {name} row has {len(tokens)} values, expected {2 * ncols}"
            )
        try:
            vals = [float(t) for t in tokens]
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric token in {name} row") from None
        rows[filled] = [complex(vals[2 * j], vals[2 * j + 1]) for j in range(ncols)]
        filled += 1
    return rows, idx


def _parse_header_line(lines, idx, expected_name):
    if idx >= len(lines):
        raise ParseError(f"unexpected end of file, expected '{expected_name}' header")
    lineno, text = lines[idx]
    tokens = text.split()
    if len(tokens) != 3 or tokens[0] != expected_name:
        raise ParseError(f"line {lineno}: expected '{expected_name} <rows> <cols>'")
    try:
        nrows, ncols = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer dimension") from None
    if min(nrows, ncols) < 1:
        raise DimensionMismatch(f"line {lineno}: dimensions must be >= 1")
    return nrows, ncols, idx + 1


def read_channel_file(path) -> ChannelPair:
    """Read a channel pair written by `write_channel_file`.

    Lines starting with '#' (after the version line) are ignored.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw or raw[0].strip() != FORMAT_HEADER:
        raise ParseError(f"line 1: missing '{FORMAT_HEADER}' header")
    lines = [
        (i + 2, text) for i, text in enumerate(raw[1:])
        if text.strip() and not text.lstrip().startswith("#")
    ]
    n_r, n_t, idx = _parse_header_line(lines, 0, "Hr")
    hr, idx = _parse_matrix_rows(lines, idx, n_r, n_t, "Hr")
    n_e, n_t2, idx = _parse_header_line(lines, idx, "He")
    if n_t2 != n_t:
        raise DimensionMismatch(
            f"He declares {n_t2} transmit antennas but Hr declared {n_t}"
        )
    he, idx = _parse_matrix_rows(lines, idx, n_e, n_t, "He")
    if idx < len(lines):
        raise ParseError(f"line {lines[idx][0]}: trailing content after He rows")
    return ChannelPair(hr, he)
