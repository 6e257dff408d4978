"""Differential forms on the plane.

Core layers: expression engine (dform.expr), grid-backed fields
(dform.fields), exterior-calculus operations (dform.calculus), scene
construction and SVG rendering (dform.render), and the shared job
runner (dform.jobs) that both the CLI and the HTTP service drive.
"""

__version__ = "0.1.0"
