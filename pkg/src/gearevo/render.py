"""SVG drawings of gear mechanisms.

Gears are drawn in the layout plane looking down the axles, so coaxial gears
appear as concentric circles. Colour identifies the axial plane, the number
on each gear is its catalog type, and axles are small filled dots. Breaches
from the feasibility report are overlaid in red: overlap lenses for disc and
axle clashes, hatching where a disc leaves the box.
"""
from __future__ import annotations

from gearevo.geometry import (DEFAULT_AXLE_RADIUS, DEFAULT_BOX_LENGTH, BreachKind,
                              Mechanism)

PLANE_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf")
SCALE = 3.0
MARGIN = 12.0


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def render_svg(mech: Mechanism, box_length: float = DEFAULT_BOX_LENGTH,
               axle_radius: float = DEFAULT_AXLE_RADIUS, title: str = "") -> str:
    max_r = max(g.radius for g in mech.gears)
    left = min(0.0, min(g.center_x - g.radius for g in mech.gears))
    right = max(box_length, max(g.center_x + g.radius for g in mech.gears))
    cy = MARGIN + max_r
    width = (right - left) + 2 * MARGIN
    height = 2 * max_r + 2 * MARGIN

    def X(x):
        return x - left + MARGIN

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width * SCALE)}" '
        f'height="{_f(height * SCALE)}" viewBox="0 0 {_f(width)} {_f(height)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append("<defs>")
    out.append('<pattern id="hatch" width="3" height="3" patternUnits="userSpaceOnUse" '
               'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="3" '
               'stroke="#d62728" stroke-width="1"/></pattern>')
    for i, g in enumerate(mech.gears):
        out.append(f'<clipPath id="disc{i}"><circle cx="{_f(X(g.center_x))}" cy="{_f(cy)}" '
                   f'r="{_f(g.radius)}"/></clipPath>')
    out.append("</defs>")
    out.append(f'<rect class="box" x="{_f(X(0.0))}" y="{_f(cy - max_r)}" '
               f'width="{_f(box_length)}" height="{_f(2 * max_r)}" fill="none" '
               f'stroke="#444" stroke-dasharray="2,1" stroke-width="0.5"/>')

    # larger discs first so smaller concentric gears stay visible
    order = sorted(range(len(mech.gears)), key=lambda i: (-mech.gears[i].radius, i))
    for i in order:
        g = mech.gears[i]
        color = PLANE_COLORS[g.plane % len(PLANE_COLORS)]
        out.append(f'<circle class="gear" data-index="{i}" data-plane="{g.plane}" '
                   f'cx="{_f(X(g.center_x))}" cy="{_f(cy)}" r="{_f(g.radius)}" '
                   f'fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="0.8"/>')

    for b in mech.feasibility.breaches:
        if b.kind is BreachKind.OUT_OF_BOUNDS:
            g = mech.gears[b.indices[0]]
            if g.center_x - g.radius < 0.0:
                x0, x1 = g.center_x - g.radius, 0.0
            else:
                x0, x1 = box_length, g.center_x + g.radius
            out.append(f'<rect class="breach out-of-bounds" x="{_f(X(x0))}" '
                       f'y="{_f(cy - g.radius)}" width="{_f(x1 - x0)}" '
                       f'height="{_f(2 * g.radius)}" fill="url(#hatch)" '
                       f'clip-path="url(#disc{b.indices[0]})"/>')
        elif b.kind is BreachKind.DISC_OVERLAP:
            i, j = b.indices
            g = mech.gears[j]
            out.append(f'<circle class="breach disc-overlap" cx="{_f(X(g.center_x))}" '
                       f'cy="{_f(cy)}" r="{_f(g.radius)}" fill="#d62728" fill-opacity="0.6" '
                       f'clip-path="url(#disc{i})"/>')
        else:
            gi, ai = b.indices
            axle_x = mech.gears[ai].center_x
            out.append(f'<circle class="breach axle-clash" cx="{_f(X(axle_x))}" cy="{_f(cy)}" '
                       f'r="{_f(axle_radius)}" fill="#d62728" fill-opacity="0.8" '
                       f'stroke="#d62728" stroke-width="0.4" clip-path="url(#disc{gi})"/>')
            out.append(f'<circle class="breach axle-ring" cx="{_f(X(axle_x))}" cy="{_f(cy)}" '
                       f'r="{_f(axle_radius + 1.0)}" fill="none" stroke="#d62728" '
                       f'stroke-width="0.4"/>')

    seen = set()
    for g in mech.gears:
        if g.axle_id in seen:
            continue
        seen.add(g.axle_id)
        out.append(f'<circle class="axle" data-axle="{g.axle_id}" cx="{_f(X(g.center_x))}" '
                   f'cy="{_f(cy)}" r="{_f(min(axle_radius, 1.5))}" fill="#222"/>')

    for i, g in enumerate(mech.gears):
        # stagger labels of concentric gears along the radius
        y = cy - g.radius + 4.0
        out.append(f'<text class="label" data-index="{i}" x="{_f(X(g.center_x))}" y="{_f(y)}" '
                   f'font-size="4" font-family="sans-serif" text-anchor="middle" '
                   f'fill="#000">{g.gear.id}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
