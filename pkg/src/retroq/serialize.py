"""JSON and CSV input/output.

Wire formats: a complex scalar is a two-element array [re, im]; a matrix is a
row-major nested array of such scalars; a belief is {"dim_S", "dim_R",
"matrix"}; a channel is {"dim_in", "dim_out", "kraus"}; a POVM is
{"effects"}. Floats are emitted with the shortest representation that parses
back to the identical double, so every written file round-trips bit for bit.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ParseError
from .model import Belief, DensityOperator, POVM, QuantumChannel


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    m = np.asarray(m, dtype=np.complex128)
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_from_json(data: Any) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError("matrix must be a nonempty nested array")
    rows = []
    width = None
    for row in data:
        if not isinstance(row, list) or (width is not None and len(row) != width):
            raise ParseError("matrix rows must be lists of equal length")
        width = len(row)
        parsed = []
        for entry in row:
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise ParseError(f"complex scalar must be a [re, im] pair, got {entry!r}")
            parsed.append(complex(entry[0], entry[1]))
        rows.append(parsed)
    return np.array(rows, dtype=np.complex128)


def belief_to_json(belief: Belief) -> dict:
    return {
        "dim_S": belief.dim_s,
        "dim_R": belief.dim_r,
        "matrix": matrix_to_json(belief.joint.matrix),
    }


def belief_from_json(data: Any) -> Belief:
    if not isinstance(data, dict):
        raise ParseError("belief must be an object with dim_S, dim_R and matrix")
    try:
        dim_s = int(data["dim_S"])
        dim_r = int(data["dim_R"])
        matrix = matrix_from_json(data["matrix"])
    except KeyError as missing:
        raise ParseError(f"belief is missing key {missing}") from None
    return Belief.from_matrix(matrix, dim_s, dim_r)


def channel_to_json(channel: QuantumChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_json(k) for k in channel.kraus_ops],
    }


def channel_from_json(data: Any) -> QuantumChannel:
    if not isinstance(data, dict):
        raise ParseError("channel must be an object with dim_in, dim_out and kraus")
    try:
        dim_in = int(data["dim_in"])
        dim_out = int(data["dim_out"])
        kraus_json = data["kraus"]
    except KeyError as missing:
        raise ParseError(f"channel is missing key {missing}") from None
    if not isinstance(kraus_json, list) or not kraus_json:
        raise ParseError("kraus must be a nonempty list of matrices")
    kraus = tuple(matrix_from_json(k) for k in kraus_json)
    channel = QuantumChannel(kraus)
    if channel.dim_in != dim_in or channel.dim_out != dim_out:
        raise ParseError(
            f"declared dimensions ({dim_in}, {dim_out}) do not match Kraus shapes "
            f"({channel.dim_in}, {channel.dim_out})"
        )
    return channel


def povm_to_json(povm: POVM) -> dict:
    return {"effects": [matrix_to_json(e) for e in povm.effects]}


def povm_from_json(data: Any) -> POVM:
    if not isinstance(data, dict) or "effects" not in data:
        raise ParseError("POVM must be an object with an effects list")
    effects = data["effects"]
    if not isinstance(effects, list) or not effects:
        raise ParseError("effects must be a nonempty list of matrices")
    return POVM(tuple(matrix_from_json(e) for e in effects))


def density_to_json(rho: DensityOperator) -> dict:
    return {"matrix": matrix_to_json(rho.matrix), "dims": list(rho.dims)}


def density_from_json(data: Any) -> DensityOperator:
    """A state is either a bare matrix or {"matrix": ..., "dims": optional}."""
    if isinstance(data, list):
        return DensityOperator(matrix_from_json(data))
    if isinstance(data, dict) and "matrix" in data:
        matrix = matrix_from_json(data["matrix"])
        dims = tuple(int(d) for d in data.get("dims", ()))
        return DensityOperator(matrix, dims)
    raise ParseError("state must be a matrix or an object with a matrix key")


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: {err}") from None


def dump_json(obj: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=2)
        handle.write("\n")


CURVE_CSV_HEADER = "belief,theta,in_x,in_z,chan_x,chan_z,rec_x,rec_z"


def curves_to_csv(curves) -> str:
    """Serialize recovery curves; one row per sampled angle, markers appended."""
    lines = [CURVE_CSV_HEADER]
    for curve in curves:
        for row in curve.rows():
            name = curve.belief_name
            lines.append(",".join([name] + [repr(float(x)) for x in row]))
    return "\n".join(lines) + "\n"
