"""Readers and writers for the CSV and JSON files exchanged by the CLI.

Floats are written with 17 significant digits so that every value reads
back bit-identical. Parsing accepts only ``.`` as the decimal separator.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInputError

DATASET_HEADER = ("t", "i_obs")
CHAIN_HEADER = ("iter", "beta", "gamma", "log_post", "accepted")
SAMPLES_HEADER = ("beta", "gamma", "r0")
PPC_HEADER = ("t", "q_min", "q025", "q50", "q975", "q_max")


class FormatError(InvalidInputError):
    """A data file does not match its expected layout."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(text: str, path, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise FormatError(f"{path}:{line}: column {column!r}: not a number: {text!r}") from None
    if not math.isfinite(value) and column != "log_post":
        raise FormatError(f"{path}:{line}: column {column!r}: non-finite value {text!r}")
    return value


def _write_rows(path, header, rows) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_rows(path, header):
    """Yield ``(line_number, row)`` after checking the header."""
    with Path(path).open(newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(c.strip() for c in first) != header:
            raise FormatError(f"{path}:1: expected header {','.join(header)!r}, got {first!r}")
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(
                    f"{path}:{reader.line_num}: expected {len(header)} fields, got {len(row)}"
                )
            yield reader.line_num, [c.strip() for c in row]


def write_dataset(path, times, observed_i) -> None:
    _write_rows(path, DATASET_HEADER, ((fmt(t), fmt(y)) for t, y in zip(times, observed_i)))


def read_dataset(path) -> tuple[np.ndarray, np.ndarray]:
    """``(times, observed_i)`` from a ``t,i_obs`` CSV."""
    times, values = [], []
    for line, (t, y) in _read_rows(path, DATASET_HEADER):
        times.append(_parse_float(t, path, line, "t"))
        values.append(_parse_float(y, path, line, "i_obs"))
    return np.array(times), np.array(values)


def write_chain(path, chain) -> None:
    rows = (
        (str(k), fmt(b), fmt(g), fmt(lp), "1" if a else "0")
        for k, (b, g, lp, a) in enumerate(zip(chain.beta, chain.gamma, chain.log_post, chain.accepted))
    )
    _write_rows(path, CHAIN_HEADER, rows)


def read_chain(path) -> dict[str, np.ndarray]:
    """Columns of a chain CSV keyed by header name.

    Iteration numbers must run 0, 1, 2, ... without gaps.
    """
    cols = {name: [] for name in CHAIN_HEADER}
    for line, (it, b, g, lp, a) in _read_rows(path, CHAIN_HEADER):
        if it != str(len(cols["iter"])):
            raise FormatError(f"{path}:{line}: expected iter {len(cols['iter'])}, got {it!r}")
        if a not in ("0", "1"):
            raise FormatError(f"{path}:{line}: column 'accepted' must be 0 or 1, got {a!r}")
        cols["iter"].append(int(it))
        cols["beta"].append(_parse_float(b, path, line, "beta"))
        cols["gamma"].append(_parse_float(g, path, line, "gamma"))
        cols["log_post"].append(_parse_float(lp, path, line, "log_post"))
        cols["accepted"].append(a == "1")
    if not cols["iter"]:
        raise FormatError(f"{path}: chain file has no rows")
    return {
        "iter": np.array(cols["iter"], dtype=np.int64),
        "beta": np.array(cols["beta"]),
        "gamma": np.array(cols["gamma"]),
        "log_post": np.array(cols["log_post"]),
        "accepted": np.array(cols["accepted"], dtype=bool),
    }


def write_samples(path, samples, r0) -> None:
    _write_rows(path, SAMPLES_HEADER, ((fmt(b), fmt(g), fmt(r)) for (b, g), r in zip(samples, r0)))


def write_ppc(path, band) -> None:
    _write_rows(path, PPC_HEADER, ([fmt(v) for v in row] for row in band))


def read_ppc(path) -> np.ndarray:
    rows = [
        [_parse_float(v, path, line, c) for v, c in zip(row, PPC_HEADER)]
        for line, row in _read_rows(path, PPC_HEADER)
    ]
    return np.array(rows).reshape(-1, len(PPC_HEADER))


def write_draws(path, times, curves) -> None:
    """One row per time point, one ``draw_k`` column per simulated curve."""
    header = ("t", *(f"draw_{k}" for k in range(len(curves))))
    _write_rows(path, header, ([fmt(t), *(fmt(v) for v in col)] for t, col in zip(times, curves.T)))


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2) + "\n", encoding="ascii")


def read_summary(path) -> dict:
    return json.loads(Path(path).read_text(encoding="ascii"))
