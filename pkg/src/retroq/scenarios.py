"""Concrete demonstration scenarios wired for the command line.

Two built-in scenarios: the 4x4 table of updated beliefs (four built-in
beliefs crossed with computational- and +/- basis measurements, checked
against their closed forms) and the depolarization-recovery curves on the x-z
great circle of the Bloch sphere, exportable as CSV, JSON or a static SVG.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import frobenius_distance
from .model import (
    DensityOperator,
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    QuantumChannel,
    basis_state,
    builtin_belief,
    depolarizing_channel,
    measure_x,
    measure_z,
    projector,
)
from .retrodiction import petz_extended, recovery_compose
from .serialize import matrix_to_json

BLOCH_NORM_TOL = 1e-9
TABLE_BELIEFS = ("flat", "proper_01", "improper_phi_plus", "xyz_design")
MARKERS = (("0", 0.0), ("+", 0.5 * np.pi), ("1", np.pi), ("-", 1.5 * np.pi))


def bloch_vector(m: np.ndarray) -> tuple[float, float, float]:
    """(x, y, z) expectation values of the Pauli operators."""
    return (
        float(np.trace(m @ PAULI_X).real),
        float(np.trace(m @ PAULI_Y).real),
        float(np.trace(m @ PAULI_Z).real),
    )


def state_on_xz_circle(theta: float) -> np.ndarray:
    """Pure qubit state with Bloch vector (sin theta, 0, cos theta)."""
    x, z = np.sin(theta), np.cos(theta)
    return (np.eye(2, dtype=np.complex128) + x * PAULI_X + z * PAULI_Z) / 2.0


@dataclass(frozen=True)
class ScenarioCell:
    """One computed update next to its closed-form reference, when one exists."""

    belief: str
    channel: str
    outcome: str
    updated: DensityOperator
    reference: np.ndarray | None = None

    @property
    def deviation(self) -> float | None:
        if self.reference is None:
            return None
        return frobenius_distance(self.updated.matrix, self.reference)


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    inputs: dict
    cells: tuple[ScenarioCell, ...]

    @property
    def max_deviation(self) -> float | None:
        gaps = [c.deviation for c in self.cells if c.deviation is not None]
        return max(gaps) if gaps else None

    def to_json(self) -> dict:
        cells = []
        for cell in self.cells:
            entry = {
                "belief": cell.belief,
                "channel": cell.channel,
                "outcome": cell.outcome,
                "updated_S": matrix_to_json(cell.updated.matrix),
            }
            if cell.deviation is not None:
                entry["deviation"] = cell.deviation
            cells.append(entry)
        out = {"scenario": self.scenario, "inputs": self.inputs, "cells": cells}
        if self.max_deviation is not None:
            out["max_deviation"] = self.max_deviation
        return out


def _table_reference(belief: str, outcome: str) -> np.ndarray:
    eye = np.eye(2, dtype=np.complex128)
    pure = {
        "0": projector(KET_0),
        "1": projector(KET_1),
        "+": projector(KET_PLUS),
        "-": projector(KET_MINUS),
    }[outcome]
    if belief == "flat":
        return pure
    if belief == "proper_01":
        return pure if outcome in ("0", "1") else eye / 2.0
    if belief == "improper_phi_plus":
        return eye / 2.0
    if belief == "xyz_design":
        return (pure + eye) / 3.0
    raise ValidationError(f"no reference column for belief {belief!r}")


def updated_beliefs_table() -> ScenarioReport:
    """All sixteen updated beliefs for the built-in priors and both measurements."""
    cells = []
    for channel_name, channel, outcomes in (
        ("measure-z", measure_z(), ("0", "1")),
        ("measure-x", measure_x(), ("+", "-")),
    ):
        for belief_name in TABLE_BELIEFS:
            belief = builtin_belief(belief_name)
            for index, outcome in enumerate(outcomes):
                evidence = DensityOperator(basis_state(index, channel.dim_out))
                updated = petz_extended(channel, belief, evidence).updated_s
                cells.append(ScenarioCell(
                    belief=belief_name,
                    channel=channel_name,
                    outcome=outcome,
                    updated=updated,
                    reference=_table_reference(belief_name, outcome),
                ))
    return ScenarioReport(
        scenario="updated-beliefs-table",
        inputs={"beliefs": list(TABLE_BELIEFS), "channels": ["measure-z", "measure-x"]},
        cells=tuple(cells),
    )


@dataclass(frozen=True)
class RecoveryCurve:
    """Bloch x-z trajectories of one belief's recovery of the depolarized circle.

    ``thetas`` run over the sampled circle; the four labeled markers carry the
    same three stages (prepared, after the channel, after recovery) at their
    exact angles.
    """

    belief_name: str
    thetas: np.ndarray
    input_xz: np.ndarray
    channel_xz: np.ndarray
    recovered_xz: np.ndarray
    marker_labels: tuple[str, ...]
    marker_thetas: np.ndarray
    marker_input_xz: np.ndarray
    marker_channel_xz: np.ndarray
    marker_recovered_xz: np.ndarray

    def __post_init__(self):
        for arr in (self.input_xz, self.channel_xz, self.recovered_xz,
                    self.marker_input_xz, self.marker_channel_xz, self.marker_recovered_xz):
            norms = np.linalg.norm(arr, axis=1)
            if norms.size and float(norms.max()) > 1.0 + BLOCH_NORM_TOL:
                raise ValidationError(f"Bloch vector of norm {float(norms.max())!r} left the sphere")

    def rows(self):
        """Flat rows (theta, in_x, in_z, chan_x, chan_z, rec_x, rec_z), markers last."""
        for i in range(self.thetas.size):
            yield (self.thetas[i], *self.input_xz[i], *self.channel_xz[i], *self.recovered_xz[i])
        for i in range(self.marker_thetas.size):
            yield (self.marker_thetas[i], *self.marker_input_xz[i],
                   *self.marker_channel_xz[i], *self.marker_recovered_xz[i])

    def to_json(self) -> dict:
        markers = {}
        for i, label in enumerate(self.marker_labels):
            markers[label] = {
                "theta": float(self.marker_thetas[i]),
                "prepared": list(self.marker_input_xz[i]),
                "channel": list(self.marker_channel_xz[i]),
                "recovered": list(self.marker_recovered_xz[i]),
            }
        return {
            "belief": self.belief_name,
            "theta": [float(t) for t in self.thetas],
            "input_xz": self.input_xz.tolist(),
            "channel_xz": self.channel_xz.tolist(),
            "recovered_xz": self.recovered_xz.tolist(),
            "markers": markers,
        }


def _xz(m: np.ndarray) -> tuple[float, float]:
    x, _, z = bloch_vector(m)
    return x, z


def _trace_stages(channel: QuantumChannel, recovery: QuantumChannel, thetas) -> tuple[np.ndarray, ...]:
    # ``recovery`` is already the full noise-then-update composite, so it acts
    # on the prepared state, not on the post-channel one.
    inp, chan, rec = [], [], []
    for theta in thetas:
        rho = state_on_xz_circle(float(theta))
        inp.append(_xz(rho))
        chan.append(_xz(channel.apply_matrix(rho)))
        rec.append(_xz(recovery.apply_matrix(rho)))
    return np.array(inp), np.array(chan), np.array(rec)


def recovery_curves(samples: int = 256, noise: float = 0.1,
                    beliefs: tuple[str, ...] = TABLE_BELIEFS) -> list[RecoveryCurve]:
    """Depolarize the x-z circle and recover it under each built-in belief."""
    if samples < 4:
        raise ValidationError("need at least 4 samples around the circle")
    channel = depolarizing_channel(noise)
    thetas = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    marker_labels = tuple(label for label, _ in MARKERS)
    marker_thetas = np.array([angle for _, angle in MARKERS])
    curves = []
    for name in beliefs:
        recovery = recovery_compose(channel, builtin_belief(name))
        inp, chan, rec = _trace_stages(channel, recovery, thetas)
        m_inp, m_chan, m_rec = _trace_stages(channel, recovery, marker_thetas)
        curves.append(RecoveryCurve(
            belief_name=name,
            thetas=thetas,
            input_xz=inp,
            channel_xz=chan,
            recovered_xz=rec,
            marker_labels=marker_labels,
            marker_thetas=marker_thetas,
            marker_input_xz=m_inp,
            marker_channel_xz=m_chan,
            marker_recovered_xz=m_rec,
        ))
    return curves


def curves_to_json(curves: list[RecoveryCurve], samples: int, noise: float = 0.1) -> dict:
    return {
        "scenario": "recovery-curves",
        "channel": f"depolarize:{noise}",
        "samples": samples,
        "curves": [c.to_json() for c in curves],
    }


_SVG_PANEL = 260
_SVG_SCALE = 100


def _svg_point(x: float, z: float, panel: int) -> tuple[float, float]:
    cx = panel * _SVG_PANEL + _SVG_PANEL / 2
    cy = _SVG_PANEL / 2
    return (cx + _SVG_SCALE * x, cy - _SVG_SCALE * z)


def _svg_polyline(points, style: str) -> str:
    closed = list(points) + [points[0]]
    coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in closed)
    return f'<polyline points="{coords}" fill="none" {style}/>'


def _svg_marker(label: str, x: float, z: float, panel: int) -> str:
    px, py = _svg_point(x, z, panel)
    if label == "0":
        return f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="none" stroke="red" stroke-width="1.5"/>'
    if label == "1":
        return f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="green"/>'
    if label == "+":
        return (f'<path d="M {px - 4:.2f} {py:.2f} H {px + 4:.2f} M {px:.2f} {py - 4:.2f} '
                f'V {py + 4:.2f}" stroke="goldenrod" stroke-width="1.5"/>')
    return f'<path d="M {px - 4:.2f} {py:.2f} H {px + 4:.2f}" stroke="blue" stroke-width="1.5"/>'


def curves_to_svg(curves: list[RecoveryCurve]) -> str:
    """Static rendering: per belief one panel with the dashed unit circle, the
    three stage polylines and the four labeled markers at each stage."""
    width = _SVG_PANEL * len(curves)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_SVG_PANEL}" '
        f'viewBox="0 0 {width} {_SVG_PANEL}">',
    ]
    circle = np.linspace(0.0, 2.0 * np.pi, 128, endpoint=False)
    for panel, curve in enumerate(curves):
        cx = panel * _SVG_PANEL + _SVG_PANEL / 2
        parts.append(f'<text x="{cx:.0f}" y="16" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{curve.belief_name}</text>')
        ring = [_svg_point(np.sin(t), np.cos(t), panel) for t in circle]
        parts.append(_svg_polyline(ring, 'stroke="gray" stroke-dasharray="4 3" stroke-width="1"'))
        for arr, style in (
            (curve.input_xz, 'stroke="silver" stroke-width="1"'),
            (curve.channel_xz, 'stroke="gold" stroke-width="1.5"'),
            (curve.recovered_xz, 'stroke="seagreen" stroke-width="1.5"'),
        ):
            pts = [_svg_point(x, z, panel) for x, z in arr]
            parts.append(_svg_polyline(pts, style))
        for i, label in enumerate(curve.marker_labels):
            for stage in (curve.marker_input_xz, curve.marker_channel_xz, curve.marker_recovered_xz):
                parts.append(_svg_marker(label, stage[i][0], stage[i][1], panel))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
