"""Scalar 2D geometry used by the simulator.

All predicates use the closed-contact convention: tangency counts as contact.
The compiled kernels mirror these functions expression-for-expression, so any
edit here must be applied to ``_kernels/_fastloops.pyx`` as well (the kernel
equivalence tests will catch a mismatch).

The oriented box is always handled in its local frame: callers rotate world
points by the negative heading and test against the axis-aligned square
``[-half, half]^2`` or against canonical sectors anchored at the origin.
"""

import math

TAU = 2.0 * math.pi


def norm_angle(a: float) -> float:
    """Map an angle in radians onto [0, 2*pi)."""
    a = math.fmod(a, TAU)
    if a < 0.0:
        a += TAU
    if a >= TAU:  # fmod rounding can land exactly on 2*pi
        a = 0.0
    return a


def to_local(px: float, py: float, ox: float, oy: float, cos_h: float, sin_h: float):
    """World point -> frame centered at (ox, oy) rotated by heading (cos_h, sin_h)."""
    dx = px - ox
    dy = py - oy
    return cos_h * dx + sin_h * dy, -sin_h * dx + cos_h * dy


def orient(ax, ay, bx, by, cx, cy) -> float:
    """Twice the signed area of triangle ABC (>0 when C is left of AB)."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    # p is known collinear with AB; check it lies within the bounding box
    return (min(ax, bx) <= px <= max(ax, bx)) and (min(ay, by) <= py <= max(ay, by))


def segments_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """Closed segment AB touches closed segment CD (shared endpoint counts)."""
    o1 = orient(ax, ay, bx, by, cx, cy)
    o2 = orient(ax, ay, bx, by, dx, dy)
    o3 = orient(cx, cy, dx, dy, ax, ay)
    o4 = orient(cx, cy, dx, dy, bx, by)
    if ((o1 > 0.0 and o2 < 0.0) or (o1 < 0.0 and o2 > 0.0)) and (
        (o3 > 0.0 and o4 < 0.0) or (o3 < 0.0 and o4 > 0.0)
    ):
        return True
    if o1 == 0.0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0.0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0.0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0.0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


def point_segment_distance_sq(px, py, x1, y1, x2, y2) -> float:
    """Squared distance from point P to closed segment (x1,y1)-(x2,y2)."""
    vx = x2 - x1
    vy = y2 - y1
    wx = px - x1
    wy = py - y1
    vv = vx * vx + vy * vy
    if vv == 0.0:
        ex = wx
        ey = wy
    else:
        t = (wx * vx + wy * vy) / vv
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        ex = wx - t * vx
        ey = wy - t * vy
    return ex * ex + ey * ey


def box_circle_overlap(bx, by, heading, cx, cy, r, half) -> bool:
    """Does the solid square (center, heading, half-side) touch the disc?"""
    c = math.cos(heading)
    s = math.sin(heading)
    lx, ly = to_local(cx, cy, bx, by, c, s)
    qx = -half if lx < -half else (half if lx > half else lx)
    qy = -half if ly < -half else (half if ly > half else ly)
    ex = lx - qx
    ey = ly - qy
    return ex * ex + ey * ey <= r * r


def box_segment_overlap(bx, by, heading, x1, y1, x2, y2, half) -> bool:
    """Does the solid square touch the closed segment?"""
    c = math.cos(heading)
    s = math.sin(heading)
    ax, ay = to_local(x1, y1, bx, by, c, s)
    ex, ey = to_local(x2, y2, bx, by, c, s)
    if -half <= ax <= half and -half <= ay <= half:
        return True
    if -half <= ex <= half and -half <= ey <= half:
        return True
    # edge-by-edge against the local square, counterclockwise from bottom-left
    if segments_intersect(ax, ay, ex, ey, -half, -half, half, -half):
        return True
    if segments_intersect(ax, ay, ex, ey, half, -half, half, half):
        return True
    if segments_intersect(ax, ay, ex, ey, half, half, -half, half):
        return True
    if segments_intersect(ax, ay, ex, ey, -half, half, -half, -half):
        return True
    return False


def point_in_sector(px, py, radius, a0, a1) -> bool:
    """Point in the closed circular sector {|p| <= radius, angle in [a0, a1]}.

    The apex (origin) belongs to every sector. ``a0``/``a1`` must lie in
    [0, 2*pi] with a0 < a1 (no wrap across zero).
    """
    rr = px * px + py * py
    if rr > radius * radius:
        return False
    if px == 0.0 and py == 0.0:
        return True
    ang = math.atan2(py, px)
    if ang < 0.0:
        ang += TAU
    return a0 <= ang <= a1


def disc_sector_overlap(cx, cy, r, radius, a0, a1) -> bool:
    """Does the disc (center, r) touch the closed sector of the given radius?"""
    d2 = cx * cx + cy * cy
    reach = radius + r
    if d2 > reach * reach:
        return False
    if d2 <= r * r:  # disc covers the apex
        return True
    ang = math.atan2(cy, cx)
    if ang < 0.0:
        ang += TAU
    if a0 <= ang <= a1:
        # radially inside the wedge and within reach of the arc
        return True
    e0 = point_segment_distance_sq(cx, cy, 0.0, 0.0, radius * math.cos(a0), radius * math.sin(a0))
    e1 = point_segment_distance_sq(cx, cy, 0.0, 0.0, radius * math.cos(a1), radius * math.sin(a1))
    m = e0 if e0 < e1 else e1
    return m <= r * r


def segment_sector_overlap(x1, y1, x2, y2, radius, a0, a1) -> bool:
    """Does the closed segment touch the closed sector?

    True when an endpoint lies inside, when the segment crosses a bounding
    radius, or when it crosses the arc.
    """
    if point_in_sector(x1, y1, radius, a0, a1) or point_in_sector(x2, y2, radius, a0, a1):
        return True
    e0x = radius * math.cos(a0)
    e0y = radius * math.sin(a0)
    e1x = radius * math.cos(a1)
    e1y = radius * math.sin(a1)
    if segments_intersect(x1, y1, x2, y2, 0.0, 0.0, e0x, e0y):
        return True
    if segments_intersect(x1, y1, x2, y2, 0.0, 0.0, e1x, e1y):
        return True
    # arc crossings: |p1 + t*v| = radius for t in [0, 1]
    vx = x2 - x1
    vy = y2 - y1
    a = vx * vx + vy * vy
    if a == 0.0:
        return False
    b = 2.0 * (x1 * vx + y1 * vy)
    cq = x1 * x1 + y1 * y1 - radius * radius
    disc = b * b - 4.0 * a * cq
    if disc < 0.0:
        return False
    sq = math.sqrt(disc)
    t1 = (-b - sq) / (2.0 * a)
    t2 = (-b + sq) / (2.0 * a)
    for t in (t1, t2):
        if 0.0 <= t <= 1.0:
            px = x1 + t * vx
            py = y1 + t * vy
            ang = math.atan2(py, px)
            if ang < 0.0:
                ang += TAU
            if a0 <= ang <= a1:
                return True
    return False
