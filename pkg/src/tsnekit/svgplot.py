"""Static SVG renderers for embeddings and metric curves.

Everything is built through ElementTree so output is guaranteed well-formed
XML. Scatter plots use a 1000 x 1000 viewBox, radius-2 points, one color per
class label, and a legend; colors are spread around the hue wheel so any
number of classes stays distinguishable enough for desk work.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

CANVAS = 1000
MARGIN = 70
POINT_RADIUS = 2.0


def label_color(position: int, total: int) -> str:
    hue = (position * 360.0 / max(total, 1)) % 360.0
    return f"hsl({hue:.1f}, 65%, 45%)"


def _data_to_canvas(coords: np.ndarray):
    """Uniform (aspect-preserving) map from data bbox into the padded canvas."""
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = np.maximum(hi - lo, 1e-30)
    scale = (CANVAS - 2 * MARGIN) / span.max()
    center = (lo + hi) / 2.0

    def to_canvas(xy):
        x = CANVAS / 2 + (xy[0] - center[0]) * scale
        y = CANVAS / 2 - (xy[1] - center[1]) * scale  # SVG y grows downward
        return x, y

    return to_canvas


def scatter_svg(coords, labels, title: str | None = None) -> str:
    """Labeled scatter plot as SVG text."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ValueError("coords must be an N x 2 matrix")
    if len(labels) != coords.shape[0]:
        raise ValueError("labels must match coords rows")

    unique = sorted(set(labels))
    colors = {lab: label_color(i, len(unique)) for i, lab in enumerate(unique)}

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        viewBox=f"0 0 {CANVAS} {CANVAS}",
        width=str(CANVAS),
        height=str(CANVAS),
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(CANVAS), height=str(CANVAS), fill="white")
    if title:
        t = ET.SubElement(
            svg, "text", x=str(CANVAS / 2), y="30",
            attrib={"text-anchor": "middle", "font-size": "20", "font-family": "sans-serif"},
        )
        t.text = title

    to_canvas = _data_to_canvas(coords)
    points_group = ET.SubElement(svg, "g")
    for i in range(coords.shape[0]):
        x, y = to_canvas(coords[i])
        ET.SubElement(
            points_group, "circle",
            cx=f"{x:.2f}", cy=f"{y:.2f}", r=str(POINT_RADIUS),
            fill=colors[labels[i]], attrib={"fill-opacity": "0.8"},
        )

    legend = ET.SubElement(svg, "g")
    line_height = min(20.0, (CANVAS - 2 * MARGIN) / max(len(unique), 1))
    for i, lab in enumerate(unique):
        y = MARGIN + i * line_height
        ET.SubElement(
            legend, "circle", cx=str(CANVAS - MARGIN - 120), cy=f"{y:.1f}",
            r="5", fill=colors[lab],
        )
        t = ET.SubElement(
            legend, "text", x=str(CANVAS - MARGIN - 108), y=f"{y + 4:.1f}",
            attrib={"font-size": f"{min(14.0, line_height - 2):.0f}", "font-family": "sans-serif"},
        )
        t.text = lab
    return ET.tostring(svg, encoding="unicode")


def line_chart_svg(xs, ys, x_label: str = "", y_label: str = "", title: str | None = None) -> str:
    """Single-series line chart as SVG text (used for AUC vs iteration)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size != ys.size or xs.size < 1:
        raise ValueError("xs and ys must be equal-length and nonempty")

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        viewBox=f"0 0 {CANVAS} {CANVAS}",
        width=str(CANVAS),
        height=str(CANVAS),
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(CANVAS), height=str(CANVAS), fill="white")
    if title:
        t = ET.SubElement(
            svg, "text", x=str(CANVAS / 2), y="30",
            attrib={"text-anchor": "middle", "font-size": "20", "font-family": "sans-serif"},
        )
        t.text = title

    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    inner = CANVAS - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * inner

    def py(y):
        return CANVAS - MARGIN - (y - y_lo) / (y_hi - y_lo) * inner

    axis_style = {"stroke": "black", "stroke-width": "1"}
    ET.SubElement(svg, "line", x1=str(MARGIN), y1=str(CANVAS - MARGIN),
                  x2=str(CANVAS - MARGIN), y2=str(CANVAS - MARGIN), attrib=axis_style)
    ET.SubElement(svg, "line", x1=str(MARGIN), y1=str(MARGIN),
                  x2=str(MARGIN), y2=str(CANVAS - MARGIN), attrib=axis_style)

    for value, anchor_x, anchor_y, anchor in (
        (f"{x_lo:g}", px(x_lo), CANVAS - MARGIN + 20, "middle"),
        (f"{x_hi:g}", px(x_hi), CANVAS - MARGIN + 20, "middle"),
        (f"{y_lo:g}", MARGIN - 8, py(y_lo) + 4, "end"),
        (f"{y_hi:g}", MARGIN - 8, py(y_hi) + 4, "end"),
    ):
        t = ET.SubElement(
            svg, "text", x=f"{anchor_x:.1f}", y=f"{anchor_y:.1f}",
            attrib={"text-anchor": anchor, "font-size": "14", "font-family": "sans-serif"},
        )
        t.text = value

    if x_label:
        t = ET.SubElement(
            svg, "text", x=str(CANVAS / 2), y=str(CANVAS - 15),
            attrib={"text-anchor": "middle", "font-size": "16", "font-family": "sans-serif"},
        )
        t.text = x_label
    if y_label:
        t = ET.SubElement(
            svg, "text", x="20", y=str(CANVAS / 2),
            attrib={
                "text-anchor": "middle", "font-size": "16", "font-family": "sans-serif",
                "transform": f"rotate(-90 20 {CANVAS / 2})",
            },
        )
        t.text = y_label

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    ET.SubElement(
        svg, "polyline", points=pts,
        attrib={"fill": "none", "stroke": "hsl(210, 70%, 45%)", "stroke-width": "2"},
    )
    for x, y in zip(xs, ys):
        ET.SubElement(
            svg, "circle", cx=f"{px(x):.2f}", cy=f"{py(y):.2f}", r="3",
            fill="hsl(210, 70%, 45%)",
        )
    return ET.tostring(svg, encoding="unicode")
