"""Minimal deterministic SVG emission.

Byte-stable output for identical inputs: fixed element order, fixed float
formatting (17 significant digits, the same rule as every other file the
package writes), no timestamps.
"""

from __future__ import annotations

__all__ = ["SvgCanvas", "fmt"]


def fmt(x):
    return f"{float(x):.17g}"


class SvgCanvas:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.elements = []

    def polyline(self, points, stroke="#000000", width=1.5, dashed=False):
        pts = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.elements.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}"{dash}/>'
        )

    def line(self, x0, y0, x1, y1, stroke="#000000", width=1.0, dashed=False):
        dash = ' stroke-dasharray="4,4"' if dashed else ""
        self.elements.append(
            f'<line x1="{fmt(x0)}" y1="{fmt(y0)}" x2="{fmt(x1)}" y2="{fmt(y1)}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"{dash}/>'
        )

    def circle(self, x, y, r, fill="#000000"):
        self.elements.append(
            f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="{fmt(r)}" fill="{fill}"/>'
        )

    def rect(self, x, y, w, h, stroke="#000000", fill="none", width=1.0):
        self.elements.append(
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{fmt(width)}"/>'
        )

    def text(self, x, y, s, size=14, fill="#000000", anchor="middle"):
        self.elements.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{fmt(size)}" '
            f'font-family="monospace" fill="{fill}" text-anchor="{anchor}">{s}</text>'
        )

    def render(self):
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(self.width)}" '
            f'height="{fmt(self.height)}" viewBox="0 0 {fmt(self.width)} {fmt(self.height)}">\n'
            f'<rect x="0" y="0" width="{fmt(self.width)}" height="{fmt(self.height)}" fill="#ffffff"/>\n'
        )
        return head + "\n".join(self.elements) + "\n</svg>\n"

    def save(self, path):
        data = self.render().encode("utf-8")
        with open(path, "wb") as f:
            f.write(data)
        return data
