"""Minimal SVG rendering of curves, witnesses and lattice orderings."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Iterable, Sequence

SIZE = 512
PAD = 16


def _xy(x: float, y: float, scale: float) -> tuple[str, str]:
    # y axis points up in the unit square
    return f"{PAD + x * scale:.3f}", f"{PAD + (1 - y) * scale:.3f}"


def _root(width: float, height: float) -> ET.Element:
    return ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      width=f"{width:.0f}", height=f"{height:.0f}",
                      viewBox=f"0 0 {width:.0f} {height:.0f}")


def curve_svg(points: Sequence, markers: Iterable = (), title: str = "") -> ET.ElementTree:
    """Polyline through ``points`` (unit-square coordinates) plus one circle per marker."""
    scale = SIZE - 2 * PAD
    svg = _root(SIZE, SIZE)
    if title:
        ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", x=str(PAD), y=str(PAD), width=str(scale), height=str(scale),
                  fill="none", stroke="#bbb")
    coords = " ".join(",".join(_xy(float(p[0]), float(p[1]), scale)) for p in points)
    ET.SubElement(svg, "polyline", points=coords, fill="none", stroke="#1f4e9c",
                  **{"stroke-width": "1"})
    for p in markers:
        cx, cy = _xy(float(p[0]), float(p[1]), scale)
        ET.SubElement(svg, "circle", cx=cx, cy=cy, r="4", fill="#d62728", **{"class": "marker"})
    return ET.ElementTree(svg)


def lattice_svg(rows: int, cols: int, order: Sequence[tuple[int, int]],
                markers: Iterable[tuple[int, int]] = ()) -> ET.ElementTree:
    cell = max(8.0, min(48.0, (SIZE - 2 * PAD) / max(rows, cols)))
    w, h = 2 * PAD + cell * (cols - 1), 2 * PAD + cell * (rows - 1)
    svg = _root(w, h)

    def at(r, c):
        return f"{PAD + c * cell:.3f}", f"{PAD + (rows - 1 - r) * cell:.3f}"

    coords = " ".join(",".join(at(r, c)) for r, c in order)
    ET.SubElement(svg, "polyline", points=coords, fill="none", stroke="#1f4e9c",
                  **{"stroke-width": "1.5"})
    for k, (r, c) in enumerate(order):
        x, y = at(r, c)
        text = ET.SubElement(svg, "text", x=x, y=y, **{"font-size": "10", "dx": "3", "dy": "-3"})
        text.text = str(k)
    for r, c in markers:
        cx, cy = at(r, c)
        ET.SubElement(svg, "circle", cx=cx, cy=cy, r="4", fill="#d62728", **{"class": "marker"})
    return ET.ElementTree(svg)


def write(tree: ET.ElementTree, path: str | Path) -> None:
    ET.indent(tree)
    tree.write(str(path), encoding="utf-8", xml_declaration=True)
