"""
Reading series and writing run records.

JSON records have the layout {meta, grid, payload}; CSV output is the
long-format table (u, theta, value[, lower, upper]) preceded by
commented meta lines.
"""

import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .grid import TimeFreqGrid
from .simulators import PRESETS, ModelSpec, check_stability, preset
from .spectral import SpectralSurface, TimeSeries
from .utils import bcolors, file_exists
from .whittle import TvArmaModel


def ingest_csv(path, min_length=None):
    """

    Load a single-column CSV of observations.

    A non-numeric first line is taken as a header; blank lines and
    '#' comment lines are skipped.

    Args:
        path (str): path to the file
        min_length (int): smallest acceptable number of observations,
                          optional

    Returns:
        TimeSeries

    """

    path_bold = f"{bcolors.BOLD}{path}{bcolors.ENDC}"

    if not file_exists(path):
        raise ValueError(f"{path_bold} does not exist.")

    text = Path(path).read_text()

    if not text.strip():
        raise ValueError(f"{path_bold} is empty.")

    lines = pd.Series(text.splitlines(), dtype=object).str.strip()
    lines.index = lines.index + 1

    lines = lines[(lines != "") & ~lines.str.startswith("#").astype(bool)]

    if len(lines) == 0:
        raise ValueError(f"{path_bold} is empty.")

    values = pd.to_numeric(lines, errors="coerce")

    # header allowed on the first data line only
    if pd.isna(values.iloc[0]):
        values, lines = values.iloc[1:], lines.iloc[1:]

    if len(values) == 0:
        raise ValueError(f"{path_bold} holds no observations.")

    bad = pd.isna(values)

    if bad.any():
        line = bad.idxmax()
        raise ValueError(f"Non-numeric value {lines[line]!r} at line {line} of {path_bold}.")

    infinite = ~np.isfinite(values.to_numpy(dtype=float))

    if infinite.any():
        line = values.index[int(np.argmax(infinite))]
        raise ValueError(f"Non-finite value {lines[line]!r} at line {line} of {path_bold}.")

    if min_length is not None and len(values) < min_length:
        raise ValueError(
            f"{path_bold} holds {len(values)} observations; at least {min_length} are needed."
        )

    return TimeSeries(values.to_numpy(dtype=float))


def run_record(payload, config, seed=None, wall_time=None, grid=None):
    """

    Assemble a JSON run record.

    Args:
        payload (dict): command result
        config (dict): fully resolved run configuration
        seed (int): seed used, if any
        wall_time (float): elapsed seconds
        grid (TimeFreqGrid): grid of the result, if any

    Returns:
        dict

    """

    from . import __version__

    return {
        "meta": {
            "version": __version__,
            "config": config,
            "seed": seed,
            "wall_time": wall_time,
        },
        "grid": None if grid is None else grid.to_dict(),
        "payload": payload,
    }


def write_json(record, path=None):
    """

    Write a record as JSON to a file, or to stdout when path is None.

    """

    text = json.dumps(record, indent=2)

    if path is None:
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n")


def write_csv(frame, meta, path=None):
    """

    Write a long-format table with '# key: value' meta lines on top.

    Args:
        frame (DataFrame): table
        meta (dict): meta fields; nested values are JSON-encoded
        path (str): output file, stdout when None

    """

    header = "".join(
        f"# {key}: {json.dumps(value) if isinstance(value, (dict, list)) else value}\n"
        for key, value in meta.items()
    )

    body = frame.to_csv(index=False)

    if path is None:
        sys.stdout.write(header + body)
    else:
        Path(path).write_text(header + body)


def read_csv_table(path):
    """

    Read a table written by write_csv.

    """

    return pd.read_csv(path, comment="#")


def load_record(path):

    path_bold = f"{bcolors.BOLD}{path}{bcolors.ENDC}"

    if not file_exists(path):
        raise ValueError(f"{path_bold} does not exist.")

    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"{path_bold} is not valid JSON: {e}") from None


def load_surface_json(path):
    """

    Load a SpectralSurface from an `estimate` record.

    Args:
        path (str): JSON record with grid and payload.values

    Returns:
        SpectralSurface

    """

    record = load_record(path)

    return SpectralSurface(TimeFreqGrid.from_dict(record["grid"]), record["payload"]["values"])


def save_model(model, path, config=None, seed=None, wall_time=None):
    """

    Write a fitted TvArmaModel as a JSON record.

    """

    write_json(
        run_record({"model": model.to_dict()}, config or {}, seed=seed, wall_time=wall_time), path
    )


def load_model(path):
    """

    Load a TvArmaModel from a record written by save_model, or from a
    bare model dictionary.

    """

    record = load_record(path)

    if "payload" in record:
        record = record["payload"]["model"]

    return TvArmaModel.from_dict(record)


def load_model_spec(name_or_path, delta=0.0):
    """

    Resolve a simulation model from a preset name or a JSON file
    holding ModelSpec.to_dict().

    A departure delta only applies to presets; a model file with a
    nonzero delta is rejected.

    Args:
        name_or_path (str): preset name or path
        delta (float): departure for the preset families

    Returns:
        ModelSpec

    """

    if name_or_path in PRESETS:
        return preset(name_or_path, delta)

    if not file_exists(name_or_path):
        raise ValueError(
            f"{bcolors.BOLD}{name_or_path}{bcolors.ENDC} is neither a preset "
            f"({', '.join(PRESETS)}) nor a file."
        )

    if delta != 0:
        raise ValueError(
            f"A departure delta={delta:g} only applies to presets, not to the model file "
            f"{bcolors.BOLD}{name_or_path}{bcolors.ENDC}."
        )

    record = load_record(name_or_path)

    try:
        spec = ModelSpec.from_dict(record)
        # evaluates every coefficient, so malformed parameters surface here
        check_stability(spec)
    except (KeyError, TypeError, AttributeError) as e:
        raise ValueError(
            f"{bcolors.BOLD}{name_or_path}{bcolors.ENDC} is not a model specification "
            f"(missing or malformed field {e})."
        ) from None

    return spec
