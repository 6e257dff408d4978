"""Grid objects to pictures, in two steps: scene, then SVG."""

from .contours import contour_lines
from .scene import (
    Arrow,
    Block,
    InsetScene,
    Marker,
    PlotStyle,
    Polyline,
    Scene,
    Stack,
    build_scene,
    compose_inset,
    scene_form0,
    scene_form1,
    scene_form2,
    scene_to_dict,
    scene_to_json,
    scene_vf,
    scene_zero,
)
from .svg import render_svg

__all__ = [
    "Arrow",
    "Block",
    "InsetScene",
    "Marker",
    "PlotStyle",
    "Polyline",
    "Scene",
    "Stack",
    "build_scene",
    "compose_inset",
    "contour_lines",
    "render_svg",
    "scene_form0",
    "scene_form1",
    "scene_form2",
    "scene_to_dict",
    "scene_to_json",
    "scene_vf",
    "scene_zero",
]
