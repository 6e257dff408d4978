"""Runtime configuration.

A single EngineConfig value is threaded through the job runner, the
service and the CLI.  Defaults match the documented behaviour; a JSON
file named by the DFORM_CONFIG environment variable (or --config on the
CLI) overrides individual fields.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "DFORM_CONFIG"


@dataclass(frozen=True)
class EngineConfig:
    # |value| above this threshold is classified as an infinite singularity.
    singular_threshold: float = 1e15
    # Side of the square drawing canvas in pixels, excluding the border.
    canvas_px: int = 800
    # Significant digits used for every number written into SVG output.
    svg_sig_digits: int = 6
    # Hard cap on grid points per axis accepted from requests.
    max_grid_n: int = 201
    # Request body cap for the HTTP service, in bytes.
    max_body_bytes: int = 1 << 20
    default_port: int = 7325


DEFAULT = EngineConfig()


def load_config(path: str | None = None) -> EngineConfig:
    """Build an EngineConfig from defaults plus an optional JSON overlay.

    path wins over the DFORM_CONFIG environment variable.  Unknown keys
    in the file are rejected so typos do not silently do nothing.
    """
    source = path or os.environ.get(ENV_VAR)
    if not source:
        return DEFAULT
    with open(source, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    known = {f.name for f in fields(EngineConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(DEFAULT, **data)
