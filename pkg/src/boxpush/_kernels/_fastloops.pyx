# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batch one-step simulation and the training episode loop.

Twin of ``pyloops.py``. Every arithmetic expression mirrors the pure-Python
reference (same operations, same order, libm on both sides) so results are
bit-identical given the same uniform-draw buffers. Keep the two files in
sync; tests/test_kernels.py enforces the equivalence.
"""

from libc.math cimport M_PI, atan2, cos, fmod, sin, sqrt

import numpy as np

IMPLEMENTATION = "compiled"

OUTCOME_SUCCESS = 0
OUTCOME_COLLISION = 1
OUTCOME_TIMEOUT = 2

cdef double TAU = 2.0 * M_PI
cdef double OCTANT = M_PI / 4.0
cdef double SENSE_EPS = 1e-9


cdef inline double norm_angle(double a) noexcept nogil:
    a = fmod(a, TAU)
    if a < 0.0:
        a += TAU
    if a >= TAU:
        a = 0.0
    return a


cdef inline double orient(double ax, double ay, double bx, double by,
                          double cx, double cy) noexcept nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef inline bint on_segment(double ax, double ay, double bx, double by,
                            double px, double py) noexcept nogil:
    cdef double lo, hi
    lo = ax if ax < bx else bx
    hi = ax if ax > bx else bx
    if not (lo <= px <= hi):
        return False
    lo = ay if ay < by else by
    hi = ay if ay > by else by
    return lo <= py <= hi


cdef bint segments_intersect(double ax, double ay, double bx, double by,
                             double cx, double cy, double dx, double dy) noexcept nogil:
    cdef double o1 = orient(ax, ay, bx, by, cx, cy)
    cdef double o2 = orient(ax, ay, bx, by, dx, dy)
    cdef double o3 = orient(cx, cy, dx, dy, ax, ay)
    cdef double o4 = orient(cx, cy, dx, dy, bx, by)
    if ((o1 > 0.0 and o2 < 0.0) or (o1 < 0.0 and o2 > 0.0)) and \
       ((o3 > 0.0 and o4 < 0.0) or (o3 < 0.0 and o4 > 0.0)):
        return True
    if o1 == 0.0 and on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0.0 and on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0.0 and on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0.0 and on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


cdef double point_segment_distance_sq(double px, double py, double x1, double y1,
                                      double x2, double y2) noexcept nogil:
    cdef double vx = x2 - x1
    cdef double vy = y2 - y1
    cdef double wx = px - x1
    cdef double wy = py - y1
    cdef double vv = vx * vx + vy * vy
    cdef double t, ex, ey
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


cdef bint box_circle_overlap(double bx, double by, double heading,
                             double cx, double cy, double r, double half) noexcept nogil:
    cdef double c = cos(heading)
    cdef double s = sin(heading)
    cdef double dx = cx - bx
    cdef double dy = cy - by
    cdef double lx = c * dx + s * dy
    cdef double ly = -s * dx + c * dy
    cdef double qx = -half if lx < -half else (half if lx > half else lx)
    cdef double qy = -half if ly < -half else (half if ly > half else ly)
    cdef double ex = lx - qx
    cdef double ey = ly - qy
    return ex * ex + ey * ey <= r * r


cdef bint box_segment_overlap(double bx, double by, double heading,
                              double x1, double y1, double x2, double y2,
                              double half) noexcept nogil:
    cdef double c = cos(heading)
    cdef double s = sin(heading)
    cdef double dx1 = x1 - bx
    cdef double dy1 = y1 - by
    cdef double dx2 = x2 - bx
    cdef double dy2 = y2 - by
    cdef double ax = c * dx1 + s * dy1
    cdef double ay = -s * dx1 + c * dy1
    cdef double ex = c * dx2 + s * dy2
    cdef double ey = -s * dx2 + c * dy2
    if -half <= ax <= half and -half <= ay <= half:
        return True
    if -half <= ex <= half and -half <= ey <= half:
        return True
    if segments_intersect(ax, ay, ex, ey, -half, -half, half, -half):
        return True
    if segments_intersect(ax, ay, ex, ey, half, -half, half, half):
        return True
    if segments_intersect(ax, ay, ex, ey, half, half, -half, half):
        return True
    if segments_intersect(ax, ay, ex, ey, -half, half, -half, -half):
        return True
    return False


cdef bint point_in_sector(double px, double py, double radius,
                          double a0, double a1) noexcept nogil:
    cdef double rr = px * px + py * py
    cdef double ang
    if rr > radius * radius:
        return False
    if px == 0.0 and py == 0.0:
        return True
    ang = atan2(py, px)
    if ang < 0.0:
        ang += TAU
    return a0 <= ang <= a1


cdef bint disc_sector_overlap(double cx, double cy, double r, double radius,
                              double a0, double a1) noexcept nogil:
    cdef double d2 = cx * cx + cy * cy
    cdef double reach = radius + r
    cdef double ang, e0, e1, m
    if d2 > reach * reach:
        return False
    if d2 <= r * r:
        return True
    ang = atan2(cy, cx)
    if ang < 0.0:
        ang += TAU
    if a0 <= ang <= a1:
        return True
    e0 = point_segment_distance_sq(cx, cy, 0.0, 0.0, radius * cos(a0), radius * sin(a0))
    e1 = point_segment_distance_sq(cx, cy, 0.0, 0.0, radius * cos(a1), radius * sin(a1))
    m = e0 if e0 < e1 else e1
    return m <= r * r


cdef bint segment_sector_overlap(double x1, double y1, double x2, double y2,
                                 double radius, double a0, double a1) noexcept nogil:
    cdef double e0x, e0y, e1x, e1y, vx, vy, a, b, cq, disc, sq, t1, t2, t, px, py, ang
    cdef int i
    if point_in_sector(x1, y1, radius, a0, a1) or point_in_sector(x2, y2, radius, a0, a1):
        return True
    e0x = radius * cos(a0)
    e0y = radius * sin(a0)
    e1x = radius * cos(a1)
    e1y = radius * sin(a1)
    if segments_intersect(x1, y1, x2, y2, 0.0, 0.0, e0x, e0y):
        return True
    if segments_intersect(x1, y1, x2, y2, 0.0, 0.0, e1x, e1y):
        return True
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
    sq = sqrt(disc)
    t1 = (-b - sq) / (2.0 * a)
    t2 = (-b + sq) / (2.0 * a)
    for i in range(2):
        t = t1 if i == 0 else t2
        if 0.0 <= t <= 1.0:
            px = x1 + t * vx
            py = y1 + t * vy
            ang = atan2(py, px)
            if ang < 0.0:
                ang += TAU
            if a0 <= ang <= a1:
                return True
    return False


cdef int encode_index(double bx, double by, double heading,
                      const double[:, ::1] walls, const double[:, ::1] obstacles,
                      double sensor_radius, double gx, double gy,
                      int angle_bins) noexcept nogil:
    """Occupancy bitmask + goal-bearing bin, as one dense state index."""
    cdef double radius = sensor_radius + SENSE_EPS
    cdef double c = cos(heading)
    cdef double s = sin(heading)
    cdef int mask = 0
    cdef int k, i, b
    cdef double a0, a1, dx, dy, lx, ly, lx2, ly2, theta, s9, u
    cdef bint hit
    for k in range(8):
        a0 = k * OCTANT
        a1 = (k + 1) * OCTANT
        hit = False
        for i in range(obstacles.shape[0]):
            dx = obstacles[i, 0] - bx
            dy = obstacles[i, 1] - by
            lx = c * dx + s * dy
            ly = -s * dx + c * dy
            if disc_sector_overlap(lx, ly, obstacles[i, 2], radius, a0, a1):
                hit = True
                break
        if not hit:
            for i in range(walls.shape[0]):
                dx = walls[i, 0] - bx
                dy = walls[i, 1] - by
                lx = c * dx + s * dy
                ly = -s * dx + c * dy
                dx = walls[i, 2] - bx
                dy = walls[i, 3] - by
                lx2 = c * dx + s * dy
                ly2 = -s * dx + c * dy
                if segment_sector_overlap(lx, ly, lx2, ly2, radius, a0, a1):
                    hit = True
                    break
        if hit:
            mask |= (1 << k)
    theta = norm_angle(atan2(gy - by, gx - bx) - heading)
    s9 = (theta * (180.0 / M_PI) - 180.0) / 180.0
    u = (s9 + 1.0) * 0.5
    b = <int>(u * angle_bins)
    if b >= angle_bins:
        b = angle_bins - 1
    elif b < 0:
        b = 0
    return mask * angle_bins + b


cdef inline int uniform_action(double u) noexcept nogil:
    cdef int idx = <int>(u * 6.0)
    return 5 if idx > 5 else idx


cdef inline int pool_action(const double[:, ::1] pdls, Py_ssize_t key, double u) noexcept nogil:
    cdef double cum = 0.0
    cdef int j
    for j in range(6):
        cum += pdls[key, j]
        if u < cum:
            return j
    return 5


def bmd_batch(pdls, keys_u, action_u, double step_scale):
    """See pyloops.bmd_batch; identical contract and results."""
    action_arr = np.ascontiguousarray(action_u, dtype=np.float64)
    cdef const double[:, ::1] uv = action_arr
    cdef Py_ssize_t n_sims = uv.shape[0]
    cdef Py_ssize_t n_agents = uv.shape[1]
    out_arr = np.empty((n_sims, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef const double[:, ::1] pv
    cdef const double[::1] kv
    cdef bint has_pool = pdls is not None
    cdef Py_ssize_t map_size = 0
    cdef Py_ssize_t i, a, key
    cdef int act
    cdef long c0, c1, c2, c3, c4, c5
    if has_pool:
        pdl_arr = np.ascontiguousarray(pdls, dtype=np.float64)
        keys_arr = np.ascontiguousarray(keys_u, dtype=np.float64)
        pv = pdl_arr
        kv = keys_arr
        map_size = pv.shape[0]
        for i in range(n_sims):
            key = <Py_ssize_t>(kv[i] * map_size)
            c0 = c1 = c2 = c3 = c4 = c5 = 0
            for a in range(n_agents):
                act = pool_action(pv, key, uv[i, a])
                if act == 0:
                    c0 += 1
                elif act == 1:
                    c1 += 1
                elif act == 2:
                    c2 += 1
                elif act == 3:
                    c3 += 1
                elif act == 4:
                    c4 += 1
                else:
                    c5 += 1
            out[i, 0] = step_scale * (<double>(c0 - c3))
            out[i, 1] = step_scale * (<double>(c1 + c2 - c4 - c5))
    else:
        for i in range(n_sims):
            c0 = c1 = c2 = c3 = c4 = c5 = 0
            for a in range(n_agents):
                act = uniform_action(uv[i, a])
                if act == 0:
                    c0 += 1
                elif act == 1:
                    c1 += 1
                elif act == 2:
                    c2 += 1
                elif act == 3:
                    c3 += 1
                elif act == 4:
                    c4 += 1
                else:
                    c5 += 1
            out[i, 0] = step_scale * (<double>(c0 - c3))
            out[i, 1] = step_scale * (<double>(c1 + c2 - c4 - c5))
    return out_arr


def run_episode_steps(q, scenario, pdls, double speed_factor, double k_t, double k_r,
                      weights, double alpha, double gamma, double epsilon,
                      int angle_bins, keys_u, explore_u, action_u):
    """See pyloops.run_episode_steps; identical contract and results."""
    cdef double[:, :, ::1] qv = q
    cdef Py_ssize_t n_agents = qv.shape[0]

    walls_arr = np.ascontiguousarray(
        np.asarray(scenario.walls, dtype=np.float64).reshape(-1, 4))
    obst_arr = np.ascontiguousarray(
        np.asarray(scenario.obstacles, dtype=np.float64).reshape(-1, 3))
    cdef const double[:, ::1] walls = walls_arr
    cdef const double[:, ::1] obstacles = obst_arr

    cdef double gx = scenario.goal[0]
    cdef double gy = scenario.goal[1]
    cdef double gr = scenario.goal[2]
    cdef double half = scenario.box_side * 0.5
    cdef double quarter_side = 0.25 * scenario.box_side
    cdef double sensor_radius = scenario.sensor_radius
    cdef int max_steps = scenario.max_steps

    cdef double w1 = weights[0]
    cdef double w2 = weights[1]
    cdef double w3 = weights[2]
    cdef double w4 = weights[3]

    cdef bint has_pool = pdls is not None
    cdef const double[:, ::1] pv
    cdef Py_ssize_t map_size = 0
    if has_pool:
        pdl_arr = np.ascontiguousarray(pdls, dtype=np.float64)
        pv = pdl_arr
        map_size = pv.shape[0]

    keys_arr = np.ascontiguousarray(keys_u, dtype=np.float64)
    explore_arr = np.ascontiguousarray(explore_u, dtype=np.float64)
    action_arr = np.ascontiguousarray(action_u, dtype=np.float64)
    cdef const double[::1] kv = keys_arr
    cdef const double[:, ::1] ev = explore_arr
    cdef const double[:, ::1] av = action_arr

    trace_arr = np.empty((max_steps, 3), dtype=np.float64)
    cdef double[:, ::1] trace = trace_arr
    acts_arr = np.empty(n_agents, dtype=np.int64)
    cdef long[::1] acts = acts_arr

    cdef double x = scenario.box_start[0]
    cdef double y = scenario.box_start[1]
    cdef double phi = norm_angle(scenario.box_heading_start)
    cdef double step_scale = speed_factor * k_t
    cdef double rot_scale = speed_factor * k_r

    cdef double dxg = gx - x
    cdef double dyg = gy - y
    cdef double d_old = sqrt(dxg * dxg + dyg * dyg)
    cdef double a_old = norm_angle(atan2(gy - y, gx - x) - phi)
    cdef int s_idx = encode_index(x, y, phi, walls, obstacles, sensor_radius,
                                  gx, gy, angle_bins)

    cdef double total = 0.0
    cdef int t, j, act, s_next, code
    cdef Py_ssize_t a, key, i
    cdef long c0, c1, c2, c3, c4, c5
    cdef long tau_units
    cdef double best, qa, td, mx
    cdef double fx, fy, dxb, dyb, ch, sh, dx, dy, nx, ny, dphi, nphi
    cdef double d_new, a_new, r_dis, r_rot, r_col, r_goal, r
    cdef bint reached, collided, timed_out, terminal

    for t in range(max_steps):
        key = 0
        if has_pool:
            key = <Py_ssize_t>(kv[t] * map_size)
        c0 = c1 = c2 = c3 = c4 = c5 = 0
        for a in range(n_agents):
            if ev[t, a] < epsilon:
                if has_pool:
                    act = pool_action(pv, key, av[t, a])
                else:
                    act = uniform_action(av[t, a])
            else:
                act = 0
                best = qv[a, s_idx, 0]
                for j in range(1, 6):
                    if qv[a, s_idx, j] > best:
                        best = qv[a, s_idx, j]
                        act = j
            acts[a] = act
            if act == 0:
                c0 += 1
            elif act == 1:
                c1 += 1
            elif act == 2:
                c2 += 1
            elif act == 3:
                c3 += 1
            elif act == 4:
                c4 += 1
            else:
                c5 += 1
        fx = <double>(c0 - c3)
        fy = <double>(c1 + c2 - c4 - c5)
        tau_units = (c2 + c5) - (c1 + c4)
        dxb = step_scale * fx
        dyb = step_scale * fy
        ch = cos(phi)
        sh = sin(phi)
        dx = dxb * ch - dyb * sh
        dy = dxb * sh + dyb * ch
        nx = x + dx
        ny = y + dy
        dphi = rot_scale * (quarter_side * (<double>tau_units))
        nphi = norm_angle(phi + dphi)

        reached = box_circle_overlap(nx, ny, nphi, gx, gy, gr, half)
        collided = False
        if not reached:
            for i in range(obstacles.shape[0]):
                if box_circle_overlap(nx, ny, nphi, obstacles[i, 0], obstacles[i, 1],
                                      obstacles[i, 2], half):
                    collided = True
                    break
            if not collided:
                for i in range(walls.shape[0]):
                    if box_segment_overlap(nx, ny, nphi, walls[i, 0], walls[i, 1],
                                           walls[i, 2], walls[i, 3], half):
                        collided = True
                        break
        timed_out = (not reached) and (not collided) and (t + 1 >= max_steps)
        terminal = reached or collided or timed_out

        dxg = gx - nx
        dyg = gy - ny
        d_new = sqrt(dxg * dxg + dyg * dyg)
        a_new = norm_angle(atan2(gy - ny, gx - nx) - nphi)
        r_dis = (d_old - d_new) * 2.5
        r_rot = cos(a_new - a_old) - 0.98
        r_col = -900.0 if collided else 0.0
        r_goal = 900.0 if reached else 0.0
        r = w1 * r_dis + w2 * r_rot + w3 * r_col + w4 * r_goal
        total += r

        s_next = 0
        if not terminal:
            s_next = encode_index(nx, ny, nphi, walls, obstacles, sensor_radius,
                                  gx, gy, angle_bins)
        for a in range(n_agents):
            act = <int>acts[a]
            qa = qv[a, s_idx, act]
            if terminal:
                td = r - qa
            else:
                mx = qv[a, s_next, 0]
                for j in range(1, 6):
                    if qv[a, s_next, j] > mx:
                        mx = qv[a, s_next, j]
                td = r + gamma * mx - qa
            qv[a, s_idx, act] = qa + alpha * td

        trace[t, 0] = nx
        trace[t, 1] = ny
        trace[t, 2] = nphi
        if terminal:
            if reached:
                code = OUTCOME_SUCCESS
            elif collided:
                code = OUTCOME_COLLISION
            else:
                code = OUTCOME_TIMEOUT
            return code, t + 1, total, trace_arr[: t + 1].copy()
        x = nx
        y = ny
        phi = nphi
        d_old = d_new
        a_old = a_new
        s_idx = s_next
    return OUTCOME_TIMEOUT, max_steps, total, trace_arr.copy()
