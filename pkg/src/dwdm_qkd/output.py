"""CSV and JSON emission for sweep results.

Numbers are serialized at 9 significant digits in both formats so the two
emissions of one sweep carry identical values and fixtures stay stable.
"""
from __future__ import annotations

import io
import json
from typing import IO, Union

from .scenarios import SweepResult

CSV_HEADER = "z_km,ase_window,leak_window,sasrs_window,total_window,eps_in,eps_out,rate"


def _g(x: float) -> str:
    return format(x, ".9g")


def _round9(x: float) -> float:
    return float(_g(x))


def sweep_to_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for row in result.rows:
        b = row.budget
        lines.append(
            ",".join(
                _g(v)
                for v in (
                    row.z_km,
                    b.ase_window,
                    b.leak_window,
                    b.sasrs_window,
                    b.n_spd_window,
                    b.eps_in,
                    b.eps_out,
                    row.rate,
                )
            )
        )
    return "\n".join(lines) + "\n"


def sweep_to_json(result: SweepResult) -> str:
    doc = {
        "scenario": result.scenario,
        "rows": [
            {
                "z_km": _round9(row.z_km),
                "ase_window": _round9(row.budget.ase_window),
                "leak_window": _round9(row.budget.leak_window),
                "sasrs_window": _round9(row.budget.sasrs_window),
                "total_window": _round9(row.budget.n_spd_window),
                "eps_in": _round9(row.budget.eps_in),
                "eps_out": _round9(row.budget.eps_out),
                "rate": _round9(row.rate),
            }
            for row in result.rows
        ],
        "secure_distance_km": _round9(result.secure_distance_km),
        "noise_crossover_km": (
            _round9(result.noise_crossover_km)
            if result.noise_crossover_km is not None
            else None
        ),
    }
    return json.dumps(doc, indent=2) + "\n"


def emit(result: SweepResult, fmt: str, destination: Union[str, IO[str]]) -> None:
    """Write a sweep in the requested format to a path or open text stream."""
    if fmt == "csv":
        text = sweep_to_csv(result)
    elif fmt == "json":
        text = sweep_to_json(result)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected csv or json")
    if isinstance(destination, (str, bytes)):
        with open(destination, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        destination.write(text)
