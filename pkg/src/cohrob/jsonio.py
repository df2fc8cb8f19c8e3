"""JSON serialization for matrices, certificates, datasets, and games.

The shared matrix format is {"dim": d, "re": [[...]], "im": [[...]]},
row-major, plain decimal doubles.  Loaders raise InputFormatError with the
file position (for syntax errors) or the offending field (for shape errors).
"""
from __future__ import annotations

import json

import numpy as np

from .games import ChannelGame, PhaseGame
from .roc import BoundReport, RocCertificate
from .witness import WitnessDataset


class InputFormatError(ValueError):
    """Malformed or inconsistent input file."""


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputFormatError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from None


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputFormatError(f"{where}: missing key {key!r}")
    return obj[key]


def matrix_to_json(m) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    d = _require(obj, "dim", where)
    if not isinstance(d, int) or d < 1:
        raise InputFormatError(f"{where}: dim must be a positive integer, got {d!r}")
    parts = []
    for key in ("re", "im"):
        rows = _require(obj, key, where)
        if not isinstance(rows, list) or len(rows) != d:
            raise InputFormatError(f"{where}.{key}: expected {d} rows")
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != d:
                raise InputFormatError(
                    f"{where}.{key} row {r}: expected {d} entries"
                )
            for c, val in enumerate(row):
                if not isinstance(val, (int, float)) or isinstance(val, bool) \
                        or not np.isfinite(val):
                    raise InputFormatError(
                        f"{where}.{key}[{r}][{c}]: not a finite number: {val!r}"
                    )
        parts.append(np.array(rows, dtype=float))
    return parts[0] + 1j * parts[1]


def certificate_to_json(cert: RocCertificate) -> dict:
    return {
        "value": cert.value,
        "gap": cert.gap,
        "method": cert.method,
        "witness": matrix_to_json(cert.witness) if cert.witness is not None else None,
        "delta_star": matrix_to_json(cert.incoherent_part)
        if cert.incoherent_part is not None else None,
        "tau_star": matrix_to_json(cert.noise_part)
        if cert.noise_part is not None else None,
    }


def bounds_to_json(report: BoundReport) -> dict:
    out = {
        "upper": report.upper,
        "lower_dim": report.lower_dim,
        "lower_gap_over_peak_population": report.lower_gap_over_peak_population,
        "lower_gap_over_population_norm": report.lower_gap_over_population_norm,
        "lower_gap": report.lower_gap,
    }
    if report.exact is not None:
        out["exact"] = report.exact
        out["consistent"] = report.consistent
    return out


def dataset_to_json(data: WitnessDataset) -> dict:
    return {
        "dim": data.dim,
        "observables": [matrix_to_json(o) for o in data.observables],
        "expectations": list(data.expectations),
    }


def dataset_from_json(obj, where: str = "dataset") -> WitnessDataset:
    d = _require(obj, "dim", where)
    obs_raw = _require(obj, "observables", where)
    exp_raw = _require(obj, "expectations", where)
    if not isinstance(obs_raw, list) or not obs_raw:
        raise InputFormatError(f"{where}.observables: expected a nonempty list")
    if not isinstance(exp_raw, list) or len(exp_raw) != len(obs_raw):
        raise InputFormatError(
            f"{where}.expectations: expected {len(obs_raw)} entries"
        )
    obs = []
    for i, o in enumerate(obs_raw):
        mat = matrix_from_json(o, where=f"{where}.observables[{i}]")
        if mat.shape[0] != d:
            raise InputFormatError(
                f"{where}.observables[{i}]: dimension {mat.shape[0]} != {d}"
            )
        obs.append(mat)
    try:
        return WitnessDataset.build(obs, [float(e) for e in exp_raw])
    except ValueError as exc:
        raise InputFormatError(f"{where}: {exc}") from None


def game_to_json(game) -> dict:
    if isinstance(game, PhaseGame):
        return {
            "dim": game.dim,
            "type": "phase",
            "entries": [{"prior": p, "phase": phi} for p, phi in game.entries],
        }
    if isinstance(game, ChannelGame):
        return {
            "dim": game.dim,
            "type": "channel",
            "entries": [
                {"prior": p, "kraus": [matrix_to_json(k) for k in kraus]}
                for p, kraus in game.entries
            ],
        }
    raise TypeError(f"not a game: {type(game)!r}")


def game_from_json(obj, where: str = "game"):
    d = _require(obj, "dim", where)
    kind = _require(obj, "type", where)
    entries_raw = _require(obj, "entries", where)
    if not isinstance(entries_raw, list) or not entries_raw:
        raise InputFormatError(f"{where}.entries: expected a nonempty list")
    try:
        if kind == "phase":
            entries = []
            for i, e in enumerate(entries_raw):
                prior = _require(e, "prior", f"{where}.entries[{i}]")
                phase = _require(e, "phase", f"{where}.entries[{i}]")
                entries.append((float(prior), float(phase)))
            return PhaseGame.build(d, entries)
        if kind == "channel":
            entries = []
            for i, e in enumerate(entries_raw):
                prior = _require(e, "prior", f"{where}.entries[{i}]")
                kraus_raw = _require(e, "kraus", f"{where}.entries[{i}]")
                if not isinstance(kraus_raw, list) or not kraus_raw:
                    raise InputFormatError(
                        f"{where}.entries[{i}].kraus: expected a nonempty list"
                    )
                kraus = [
                    matrix_from_json(k, where=f"{where}.entries[{i}].kraus[{a}]")
                    for a, k in enumerate(kraus_raw)
                ]
                entries.append((float(prior), kraus))
            return ChannelGame.build(d, entries)
    except InputFormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"{where}: {exc}") from None
    raise InputFormatError(f"{where}.type: expected 'phase' or 'channel', got {kind!r}")


def fixture_to_json(*, oracle: str, seed, value: float, tol: float, input_obj) -> dict:
    """Frozen oracle fixture: {seed, input, value, tol, oracle}."""
    return {
        "seed": seed,
        "input": input_obj,
        "value": value,
        "tol": tol,
        "oracle": oracle,
    }
