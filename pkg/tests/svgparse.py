"""Read radar geometry back out of emitted SVG documents."""
import math
import xml.etree.ElementTree as ET

NS = "{http://www.w3.org/2000/svg}"


def parse(svg_text):
    return ET.fromstring(svg_text.encode("utf-8"))


def polygon_points(el):
    return [tuple(float(c) for c in p.split(",")) for p in el.get("points").split()]


def radar_radii(svg_text):
    """``({wave: [radius per axis]}, centre, outer radius)`` recovered from the file."""
    root = parse(svg_text)
    axes = [el for el in root.iter(NS + "line") if el.get("class") == "axis"]
    cx, cy = float(axes[0].get("x1")), float(axes[0].get("y1"))
    outer = math.hypot(float(axes[0].get("x2")) - cx, float(axes[0].get("y2")) - cy)
    radii = {}
    for el in root.iter(NS + "polygon"):
        if el.get("class") == "wave":
            radii[int(el.get("data-wave"))] = [math.hypot(x - cx, y - cy) for x, y in polygon_points(el)]
    return radii, (cx, cy), outer
