"""
SVG rendering of recorded trajectories.

One polyline per robot plus two discs (start outline, end filled). Points
are written in world coordinates inside a y-flipped group.
"""

import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from matplotlib import colormaps
from matplotlib.colors import to_hex

from src.domain import TrajectorySample

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def trajectory_svg(samples: Sequence[TrajectorySample], margin: float = 5.0) -> ET.ElementTree:
    """Build the SVG document for a recorded run."""
    if not samples:
        raise ValueError("No trajectory samples to render")
    world = samples[0].state.world
    r = world.robot_radius
    # (samples, robots, 2)
    xy = np.array([s.state.positions() for s in samples])
    low = xy.reshape(-1, 2).min(axis=0) - r - margin
    high = xy.reshape(-1, 2).max(axis=0) + r + margin
    width, height = high - low

    ET.register_namespace("", SVG_NS)
    root = ET.Element(
        f"{{{SVG_NS}}}svg",
        {
            "viewBox": f"{_fmt(low[0])} {_fmt(-high[1])} {_fmt(width)} {_fmt(height)}",
            "width": _fmt(width * 4.0),
            "height": _fmt(height * 4.0),
        },
    )
    group = ET.SubElement(root, f"{{{SVG_NS}}}g", {"transform": "scale(1,-1)"})
    palette = colormaps["tab10"]

    n = xy.shape[1]
    for index in range(n):
        color = to_hex(palette(index % palette.N))
        path = xy[:, index, :]
        ET.SubElement(group, f"{{{SVG_NS}}}polyline", {
            "points": " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in path),
            "fill": "none",
            "stroke": color,
            "stroke-width": "0.4",
            "data-robot": str(index),
        })
        ET.SubElement(group, f"{{{SVG_NS}}}circle", {
            "cx": _fmt(path[0, 0]), "cy": _fmt(path[0, 1]), "r": _fmt(r),
            "fill": "none", "stroke": color, "stroke-width": "0.3",
        })
        ET.SubElement(group, f"{{{SVG_NS}}}circle", {
            "cx": _fmt(path[-1, 0]), "cy": _fmt(path[-1, 1]), "r": _fmt(r),
            "fill": color, "fill-opacity": "0.5", "stroke": color, "stroke-width": "0.3",
        })
    return ET.ElementTree(root)


def render_trajectories_svg(
    samples: Sequence[TrajectorySample],
    path: Union[str, Path],
) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    trajectory_svg(samples).write(target, encoding="utf-8", xml_declaration=True)
    logger.info(f"Wrote trajectory SVG ({len(samples)} samples) to {target}")
    return target
