"""Measurement record files.

Text records are YAML documents with a header and the 4 x L intensity table.
Binary records are a magic string, a little-endian uint32 header length, the
JSON header, and the intensities as little-endian float64 in (s, l) row-major
order.
"""

import json
import struct
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from cprsim.measurement.intensities import IntensityMeasurements
from cprsim.model.config import SensingMode
from cprsim.model.validation import ValidationError

BINARY_MAGIC = b"CPRSIM1\n"
BINARY_SUFFIXES = (".bin", ".npb")


def _invalid(message: str) -> ValidationError:
    return ValidationError("INVALID_RECORD", message)


def _header(measurements: IntensityMeasurements) -> dict[str, Any]:
    return {
        "mode": measurements.mode.value,
        "conjugate": measurements.conjugate,
        "dimension": measurements.dimension,
        "blocks": measurements.blocks,
        "noise_variance": measurements.noise_variance,
        "seed": measurements.seed,
        "sampling_set": list(measurements.sampling_set) if measurements.sampling_set is not None else None,
    }


def _from_header(header: dict[str, Any], values: np.ndarray) -> IntensityMeasurements:
    try:
        mode = SensingMode(header["mode"])
        sampling_set = header.get("sampling_set")
        blocks = int(header["blocks"])
        if values.shape != (4, blocks):
            raise _invalid(f"expected a 4 x {blocks} intensity table, got shape {values.shape}")
        return IntensityMeasurements(
            values=values,
            mode=mode,
            conjugate=bool(header.get("conjugate", mode == SensingMode.FOURIER)),
            dimension=header.get("dimension"),
            sampling_set=tuple(int(i) for i in sampling_set) if sampling_set is not None else None,
            noise_variance=float(header.get("noise_variance", 0.0)),
            seed=header.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise _invalid(f"malformed record header: {e}") from e
    except ValidationError as e:
        if e.code == "INVALID_RECORD":
            raise
        raise _invalid(e.message) from e


def write_record(measurements: IntensityMeasurements, path: Path) -> Path:
    """Write a record; binary when the suffix is one of BINARY_SUFFIXES, YAML text otherwise."""
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _header(measurements)
    if path.suffix in BINARY_SUFFIXES:
        encoded = json.dumps(header).encode()
        with path.open("wb") as f:
            f.write(BINARY_MAGIC)
            f.write(struct.pack("<I", len(encoded)))
            f.write(encoded)
            f.write(np.ascontiguousarray(measurements.values, dtype="<f8").tobytes())
        return path

    document = {**header, "values": [[float(v) for v in row] for row in measurements.values]}
    with path.open("w") as f:
        yaml.safe_dump(document, f, sort_keys=False)
    return path


def read_record(path: Path) -> IntensityMeasurements:
    """Read a record written by write_record."""
    if not path.exists():
        raise _invalid(f"Record file not found: {path}")
    if path.suffix in BINARY_SUFFIXES:
        return _read_binary(path)

    try:
        with path.open() as f:
            document = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise _invalid(f"Cannot parse {path}: {e}") from e
    if not isinstance(document, dict) or "values" not in document:
        raise _invalid(f"{path} is not a measurement record")
    try:
        values = np.asarray(document.pop("values"), dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise _invalid(f"intensity table is not numeric: {e}") from e
    return _from_header(document, values)


def _read_binary(path: Path) -> IntensityMeasurements:
    data = path.read_bytes()
    offset = len(BINARY_MAGIC)
    if not data.startswith(BINARY_MAGIC) or len(data) < offset + 4:
        raise _invalid(f"{path} is not a binary measurement record")
    (length,) = struct.unpack_from("<I", data, offset)
    offset += 4
    try:
        header = json.loads(data[offset : offset + length])
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise _invalid(f"malformed record header: {e}") from e
    if not isinstance(header, dict):
        raise _invalid("record header must be a mapping")
    payload = data[offset + length :]
    if len(payload) % 8:
        raise _invalid("truncated intensity payload")
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    try:
        values = values.reshape(4, -1)
    except ValueError as e:
        raise _invalid(f"intensity payload of {values.size} values is not a 4 x L table") from e
    return _from_header(header, values)
