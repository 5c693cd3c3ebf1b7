"""CSV artifacts with a self-describing config echo.

Every CSV the CLI writes starts with a ``# config:`` comment carrying the
canonical invocation (sorted key=value pairs), then the frozen column
header, the data rows, and optionally a trailing ``# summary:`` comment.
Re-running the echoed config reproduces the file byte for byte: floats
are formatted with repr (shortest round-trip) and nothing time-dependent
is ever written.
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Sequence

import numpy as np

SCHEMAS = {
    "process": ["t", "C_t", "p_exact", "phi", "colliding_pairs"],
    "parallel": ["iteration", "prefix_len", "failed", "window_size"],
    "contention": ["T", "seed", "events"],
    "lowerbound_minima": ["N", "trials", "mean_M", "tail_prob"],
    "lowerbound_prefix": ["N", "W", "no_collision_prob"],
    "lowerbound_iterations": ["N", "seed", "iterations"],
}


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, np.integer):
        v = int(v)
    elif isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def config_echo(config: Dict) -> str:
    parts = [f"{k}={format_value(v)}" for k, v in sorted(config.items())]
    return "# config: " + " ".join(parts)


def summary_line(summary: Dict) -> str:
    parts = [f"{k}={format_value(v)}" for k, v in sorted(summary.items())]
    return "# summary: " + " ".join(parts)


def write_csv(path, schema: str, config: Dict, rows: Iterable[Sequence],
              summary: Optional[Dict] = None) -> None:
    columns = SCHEMAS[schema]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_echo(config) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row width {len(row)} != schema {schema}")
            fh.write(",".join(format_value(v) for v in row) + "\n")
        if summary is not None:
            fh.write(summary_line(summary) + "\n")
