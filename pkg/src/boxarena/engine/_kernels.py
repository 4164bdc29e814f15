"""Scalar numba kernels behind both the public per-constraint API and the
fused step loop.

Everything here works on the flat SimState arrays.  Conventions:
  - contact normals point from body a to body b
  - a positive accumulated normal impulse pushes b along +n and a along -n
  - relative normal velocity vn = n . (v_point_b - v_point_a); negative
    means the bodies are approaching
"""

import math

from numba import njit

from ..geometry import _clip_halfplane

COINCIDENT_EPS = 1e-6
SAT_TIE_EPS = 1e-6


# --- manifold generation -----------------------------------------------------


@njit(cache=True, inline="always")
def _manifold_cc(pax, pay, ra, pbx, pby, rb):
    dx = pbx - pax
    dy = pby - pay
    d = math.sqrt(dx * dx + dy * dy)
    if d < COINCIDENT_EPS:
        nx, ny = 1.0, 0.0
    else:
        nx, ny = dx / d, dy / d
    pen = ra + rb - d
    px = pax + ra * nx
    py = pay + ra * ny
    return pen > 0.0, px, py, nx, ny, pen


@njit(cache=True)
def _manifold_pc(wv, n, cx, cy, rad):
    """Polygon (world vertices wv[:n]) vs circle center (cx, cy)."""
    best_d2 = 1e30
    qx = 0.0
    qy = 0.0
    inside = True
    min_exit = 1e30
    exit_nx = 0.0
    exit_ny = 0.0
    for i in range(n):
        x1 = wv[i, 0]
        y1 = wv[i, 1]
        i2 = i + 1
        if i2 == n:
            i2 = 0
        x2 = wv[i2, 0]
        y2 = wv[i2, 1]
        ex = x2 - x1
        ey = y2 - y1
        l2 = ex * ex + ey * ey
        if l2 < 1e-18:
            continue
        # clip the center to the edge's corner perpendiculars, then project
        t = ((cx - x1) * ex + (cy - y1) * ey) / l2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        px = x1 + t * ex
        py = y1 + t * ey
        dx = cx - px
        dy = cy - py
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best_d2 = d2
            qx = px
            qy = py
        ln = math.sqrt(l2)
        fnx = ey / ln
        fny = -ex / ln
        dist = fnx * (cx - x1) + fny * (cy - y1)
        if dist > 0.0:
            inside = False
        elif -dist < min_exit:
            min_exit = -dist
            exit_nx = fnx
            exit_ny = fny
    if inside:
        # center swallowed by the polygon: exit through the nearest face
        pen = rad + min_exit
        return True, cx + exit_nx * min_exit, cy + exit_ny * min_exit, exit_nx, exit_ny, pen
    d = math.sqrt(best_d2)
    pen = rad - d
    if pen <= 0.0:
        return False, 0.0, 0.0, 0.0, 0.0, pen
    if d < 1e-9:
        return True, qx, qy, 1.0, 0.0, pen
    return True, qx, qy, (cx - qx) / d, (cy - qy) / d, pen


@njit(cache=True)
def _face_separation(ref, nref, face, other, nother):
    """Separation of polygon `other` from face `face` of polygon `ref`.

    Returns (sep, nx, ny): the least distance of `other`'s vertices in
    front of the face plane (negative = penetrating) and the face normal.
    """
    x1 = ref[face, 0]
    y1 = ref[face, 1]
    i2 = face + 1
    if i2 == nref:
        i2 = 0
    ex = ref[i2, 0] - x1
    ey = ref[i2, 1] - y1
    ln = math.sqrt(ex * ex + ey * ey)
    if ln < 1e-12:
        return -1e30, 0.0, 0.0
    nx = ey / ln
    ny = -ex / ln
    off = nx * x1 + ny * y1
    m = 1e30
    for j in range(nother):
        d = nx * other[j, 0] + ny * other[j, 1] - off
        if d < m:
            m = d
    return m, nx, ny


@njit(cache=True)
def _manifold_pp(wa, na, wb, nb):
    """Two-point contact between convex polygons (world vertices).

    Returns (nx, ny, act1, p1x, p1y, pen1, act2, p2x, p2y, pen2) with the
    normal oriented from a to b.
    """
    best_sep = -1e30
    best_face = -1
    best_on_a = True
    for i in range(na):
        sep, _, _ = _face_separation(wa, na, i, wb, nb)
        if sep > 0.0:
            return 0.0, 0.0, False, 0.0, 0.0, 0.0, False, 0.0, 0.0, 0.0
        if sep > best_sep + SAT_TIE_EPS:
            best_sep = sep
            best_face = i
            best_on_a = True
    for i in range(nb):
        sep, _, _ = _face_separation(wb, nb, i, wa, na)
        if sep > 0.0:
            return 0.0, 0.0, False, 0.0, 0.0, 0.0, False, 0.0, 0.0, 0.0
        if sep > best_sep + SAT_TIE_EPS:
            best_sep = sep
            best_face = i
            best_on_a = False

    if best_on_a:
        ref, nref, inc, ninc = wa, na, wb, nb
    else:
        ref, nref, inc, ninc = wb, nb, wa, na
    r1x = ref[best_face, 0]
    r1y = ref[best_face, 1]
    i2 = best_face + 1
    if i2 == nref:
        i2 = 0
    r2x = ref[i2, 0]
    r2y = ref[i2, 1]
    ex = r2x - r1x
    ey = r2y - r1y
    ln = math.sqrt(ex * ex + ey * ey)
    rnx = ey / ln
    rny = -ex / ln
    roff = rnx * r1x + rny * r1y
    ehx = ex / ln
    ehy = ey / ln

    # incident face: the most antiparallel face of the other polygon
    best_dot = 1e30
    inc_face = 0
    for i in range(ninc):
        x1 = inc[i, 0]
        y1 = inc[i, 1]
        j2 = i + 1
        if j2 == ninc:
            j2 = 0
        fex = inc[j2, 0] - x1
        fey = inc[j2, 1] - y1
        fln = math.sqrt(fex * fex + fey * fey)
        if fln < 1e-12:
            continue
        d = rnx * (fey / fln) + rny * (-fex / fln)
        if d < best_dot:
            best_dot = d
            inc_face = i
    i1 = inc_face
    j2 = inc_face + 1
    if j2 == ninc:
        j2 = 0
    # clip the incident face to the reference face's side planes
    c, ax, ay, bx, by = _clip_halfplane(
        inc[i1, 0], inc[i1, 1], inc[j2, 0], inc[j2, 1],
        -ehx, -ehy, -(ehx * r1x + ehy * r1y),
    )
    if c == 0:
        return 0.0, 0.0, False, 0.0, 0.0, 0.0, False, 0.0, 0.0, 0.0
    c, ax, ay, bx, by = _clip_halfplane(ax, ay, bx, by, ehx, ehy, ehx * r2x + ehy * r2y)
    if c == 0:
        return 0.0, 0.0, False, 0.0, 0.0, 0.0, False, 0.0, 0.0, 0.0
    d1 = roff - (rnx * ax + rny * ay)
    d2 = roff - (rnx * bx + rny * by)
    if best_on_a:
        onx, ony = rnx, rny
    else:
        onx, ony = -rnx, -rny
    return onx, ony, d1 > 0.0, ax, ay, d1, d2 > 0.0, bx, by, d2


@njit(cache=True, inline="always")
def _restitution_target(position, velocity, angular_velocity, restitution, a, b, px, py, nx, ny):
    """Target post-collision separation speed e * |approach speed|, >= 0."""
    rax = px - position[a, 0]
    ray = py - position[a, 1]
    rbx = px - position[b, 0]
    rby = py - position[b, 1]
    vpax = velocity[a, 0] - angular_velocity[a] * ray
    vpay = velocity[a, 1] + angular_velocity[a] * rax
    vpbx = velocity[b, 0] - angular_velocity[b] * rby
    vpby = velocity[b, 1] + angular_velocity[b] * rbx
    vn0 = nx * (vpbx - vpax) + ny * (vpby - vpay)
    e = restitution[a] if restitution[a] < restitution[b] else restitution[b]
    t = -e * vn0
    return t if t > 0.0 else 0.0


# --- impulse application ------------------------------------------------------


@njit(cache=True, inline="always")
def _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, i, px, py, jx, jy):
    velocity[i, 0] += jx * inverse_mass[i]
    velocity[i, 1] += jy * inverse_mass[i]
    rx = px - position[i, 0]
    ry = py - position[i, 1]
    angular_velocity[i] += (rx * jy - ry * jx) * inverse_inertia[i]


@njit(cache=True)
def _contact_deltas(
    position, vel_src, angvel_src, inverse_mass, inverse_inertia, friction,
    a, b, px, py, nx, ny, pen, rest_target, acc_n, acc_t,
    alpha, beta, slop, do_position,
):
    """One resolution of a contact, reading velocities from a snapshot.

    Returns the updated accumulators plus the velocity/position deltas to
    apply, so callers can either apply them immediately (sequential) or sum
    them across a batch.
    """
    im_a = inverse_mass[a]
    im_b = inverse_mass[b]
    ii_a = inverse_inertia[a]
    ii_b = inverse_inertia[b]
    rax = px - position[a, 0]
    ray = py - position[a, 1]
    rbx = px - position[b, 0]
    rby = py - position[b, 1]

    vpax = vel_src[a, 0] - angvel_src[a] * ray
    vpay = vel_src[a, 1] + angvel_src[a] * rax
    vpbx = vel_src[b, 0] - angvel_src[b] * rby
    vpby = vel_src[b, 1] + angvel_src[b] * rbx
    dvx = vpbx - vpax
    dvy = vpby - vpay

    ra_n = rax * ny - ray * nx
    rb_n = rbx * ny - rby * nx
    k_n = im_a + im_b + ra_n * ra_n * ii_a + rb_n * rb_n * ii_b

    pen_eff = pen - slop
    if pen_eff < 0.0:
        pen_eff = 0.0

    new_acc_n = acc_n
    if k_n > 1e-12:
        vn = nx * dvx + ny * dvy
        raw = (rest_target + alpha * pen_eff - vn) / k_n
        new_acc_n = acc_n + raw
        if new_acc_n < 0.0:
            new_acc_n = 0.0
    dn = new_acc_n - acc_n

    tx = -ny
    ty = nx
    ra_t = rax * ty - ray * tx
    rb_t = rbx * ty - rby * tx
    k_t = im_a + im_b + ra_t * ra_t * ii_a + rb_t * rb_t * ii_b

    new_acc_t = acc_t
    if k_t > 1e-12:
        fa = friction[a]
        fb = friction[b]
        mu = math.sqrt(fa * fa + fb * fb)
        vt = tx * dvx + ty * dvy
        cone = mu * new_acc_n
        new_acc_t = acc_t - vt / k_t
        if new_acc_t > cone:
            new_acc_t = cone
        elif new_acc_t < -cone:
            new_acc_t = -cone
    dt_ = new_acc_t - acc_t

    jx = dn * nx + dt_ * tx
    jy = dn * ny + dt_ * ty
    dvax = -jx * im_a
    dvay = -jy * im_a
    dwa = -(rax * jy - ray * jx) * ii_a
    dvbx = jx * im_b
    dvby = jy * im_b
    dwb = (rbx * jy - rby * jx) * ii_b

    dpax = 0.0
    dpay = 0.0
    dpbx = 0.0
    dpby = 0.0
    if do_position:
        denom = im_a + im_b
        if denom > 1e-12:
            corr = beta * pen_eff / denom
            dpax = -nx * corr * im_a
            dpay = -ny * corr * im_a
            dpbx = nx * corr * im_b
            dpby = ny * corr * im_b

    return new_acc_n, new_acc_t, dvax, dvay, dwa, dvbx, dvby, dwb, dpax, dpay, dpbx, dpby


@njit(cache=True)
def _solve_revolute(
    position, rotation, velocity, angular_velocity, inverse_mass, inverse_inertia,
    joint_body_a, joint_body_b, joint_anchor_a, joint_anchor_b, joint_acc_impulse,
    j, alpha, beta, do_position,
):
    a = joint_body_a[j]
    b = joint_body_b[j]
    im_a = inverse_mass[a]
    im_b = inverse_mass[b]
    ii_a = inverse_inertia[a]
    ii_b = inverse_inertia[b]

    ca = math.cos(rotation[a])
    sa = math.sin(rotation[a])
    rax = ca * joint_anchor_a[j, 0] - sa * joint_anchor_a[j, 1]
    ray = sa * joint_anchor_a[j, 0] + ca * joint_anchor_a[j, 1]
    cb = math.cos(rotation[b])
    sb = math.sin(rotation[b])
    rbx = cb * joint_anchor_b[j, 0] - sb * joint_anchor_b[j, 1]
    rby = sb * joint_anchor_b[j, 0] + cb * joint_anchor_b[j, 1]

    sx = (position[b, 0] + rbx) - (position[a, 0] + rax)
    sy = (position[b, 1] + rby) - (position[a, 1] + ray)

    vrelx = (velocity[b, 0] - angular_velocity[b] * rby) - (velocity[a, 0] - angular_velocity[a] * ray)
    vrely = (velocity[b, 1] + angular_velocity[b] * rbx) - (velocity[a, 1] + angular_velocity[a] * rax)

    k11 = im_a + im_b + ii_a * ray * ray + ii_b * rby * rby
    k12 = -ii_a * rax * ray - ii_b * rbx * rby
    k22 = im_a + im_b + ii_a * rax * rax + ii_b * rbx * rbx
    det = k11 * k22 - k12 * k12
    if det > 1e-12:
        rhsx = -(vrelx + alpha * sx)
        rhsy = -(vrely + alpha * sy)
        jx = (k22 * rhsx - k12 * rhsy) / det
        jy = (k11 * rhsy - k12 * rhsx) / det
        velocity[b, 0] += jx * im_b
        velocity[b, 1] += jy * im_b
        angular_velocity[b] += (rbx * jy - rby * jx) * ii_b
        velocity[a, 0] -= jx * im_a
        velocity[a, 1] -= jy * im_a
        angular_velocity[a] -= (rax * jy - ray * jx) * ii_a
        joint_acc_impulse[j, 0] += jx
        joint_acc_impulse[j, 1] += jy

    if do_position:
        denom = im_a + im_b
        if denom > 1e-12:
            corr = beta / denom
            position[a, 0] += sx * corr * im_a
            position[a, 1] += sy * corr * im_a
            position[b, 0] -= sx * corr * im_b
            position[b, 1] -= sy * corr * im_b


@njit(cache=True, inline="always")
def _solve_fixed_rotation(
    rotation, angular_velocity, inverse_inertia,
    joint_body_a, joint_body_b, joint_fixed_rotation, joint_acc_rot_impulse,
    j, gamma,
):
    a = joint_body_a[j]
    b = joint_body_b[j]
    denom = inverse_inertia[a] + inverse_inertia[b]
    if denom < 1e-12:
        return
    err = rotation[a] - rotation[b] - joint_fixed_rotation[j]
    jr = (angular_velocity[a] - angular_velocity[b] + gamma * err) / denom
    angular_velocity[a] -= jr * inverse_inertia[a]
    angular_velocity[b] += jr * inverse_inertia[b]
    joint_acc_rot_impulse[j] += jr


@njit(cache=True, inline="always")
def _solve_joint_limit(
    rotation, angular_velocity, inverse_inertia,
    joint_body_a, joint_body_b, joint_limit_min, joint_limit_max,
    j, gamma,
):
    a = joint_body_a[j]
    b = joint_body_b[j]
    denom = inverse_inertia[a] + inverse_inertia[b]
    if denom < 1e-12:
        return
    rel = rotation[a] - rotation[b]
    relv = angular_velocity[a] - angular_velocity[b]
    if rel > joint_limit_max[j]:
        if relv < 0.0:
            return  # already swinging back inside the range
        err = rel - joint_limit_max[j]
    elif rel < joint_limit_min[j]:
        if relv > 0.0:
            return
        err = rel - joint_limit_min[j]
    else:
        return
    jr = (relv + gamma * err) / denom
    angular_velocity[a] -= jr * inverse_inertia[a]
    angular_velocity[b] += jr * inverse_inertia[b]


@njit(cache=True, inline="always")
def _apply_motor(
    angular_velocity, inverse_inertia,
    joint_body_a, joint_body_b, motor_power, motor_speed,
    j, action, rho,
):
    a = joint_body_a[j]
    b = joint_body_b[j]
    rel = angular_velocity[a] - angular_velocity[b]
    jr = motor_power[j] * math.tanh((rel - motor_speed[j] * action) * rho)
    angular_velocity[a] -= jr * inverse_inertia[a]
    angular_velocity[b] += jr * inverse_inertia[b]


@njit(cache=True, inline="always")
def _apply_thruster(
    position, rotation, velocity, angular_velocity, inverse_mass, inverse_inertia,
    thruster_body, thruster_anchor, thruster_rotation, thruster_power,
    t, action, dt,
):
    i = thruster_body[t]
    c = math.cos(rotation[i])
    s = math.sin(rotation[i])
    ax = c * thruster_anchor[t, 0] - s * thruster_anchor[t, 1]
    ay = s * thruster_anchor[t, 0] + c * thruster_anchor[t, 1]
    wx = position[i, 0] + ax
    wy = position[i, 1] + ay
    angle = rotation[i] + thruster_rotation[t]
    mag = thruster_power[t] * action * dt
    jx = math.cos(angle) * mag
    jy = math.sin(angle) * mag
    _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, i, wx, wy, jx, jy)


# --- manifold pass ------------------------------------------------------------


@njit(cache=True)
def _world_geometry(body_active, position, rotation, vertices, vertex_count, radius, wverts, aabb):
    """World-space vertices and axis-aligned bounds for every active body."""
    for i in range(body_active.shape[0]):
        if not body_active[i]:
            continue
        n = vertex_count[i]
        if n > 0:
            c = math.cos(rotation[i])
            s = math.sin(rotation[i])
            xmin = 1e30
            ymin = 1e30
            xmax = -1e30
            ymax = -1e30
            for k in range(n):
                vx = vertices[i, k, 0]
                vy = vertices[i, k, 1]
                wx = position[i, 0] + c * vx - s * vy
                wy = position[i, 1] + s * vx + c * vy
                wverts[i, k, 0] = wx
                wverts[i, k, 1] = wy
                if wx < xmin:
                    xmin = wx
                if wx > xmax:
                    xmax = wx
                if wy < ymin:
                    ymin = wy
                if wy > ymax:
                    ymax = wy
            aabb[i, 0] = xmin
            aabb[i, 1] = ymin
            aabb[i, 2] = xmax
            aabb[i, 3] = ymax
        else:
            r = radius[i]
            aabb[i, 0] = position[i, 0] - r
            aabb[i, 1] = position[i, 1] - r
            aabb[i, 2] = position[i, 0] + r
            aabb[i, 3] = position[i, 1] + r


@njit(cache=True)
def _generate_manifolds(
    body_active, position, rotation, velocity, angular_velocity, restitution,
    vertex_count, radius,
    joint_active, joint_body_a, joint_body_b,
    mani_active, mani_position, mani_normal, mani_penetration,
    mani_rest_target, mani_acc_normal, mani_acc_tangent,
    pair_a, pair_b, pair_slot, pair_type,
    wverts, aabb,
):
    """Refresh the manifold cache from current positions.

    Accumulated impulses survive only on slots that were active on the
    previous step and are active again now; everything else is wiped.
    Pairs whose bounds merely touch are culled: a grazing contact has zero
    penetration and would be inactive anyway.
    """
    nj = joint_active.shape[0]
    for p in range(pair_a.shape[0]):
        a = pair_a[p]
        b = pair_b[p]
        s = pair_slot[p]
        kind = pair_type[p]
        nslots = 2 if kind == 0 else 1

        ok = body_active[a] and body_active[b]
        if ok:
            for j in range(nj):
                if joint_active[j] and (
                    (joint_body_a[j] == a and joint_body_b[j] == b)
                    or (joint_body_a[j] == b and joint_body_b[j] == a)
                ):
                    ok = False
                    break
        if ok and (
            aabb[a, 2] <= aabb[b, 0] or aabb[b, 2] <= aabb[a, 0]
            or aabb[a, 3] <= aabb[b, 1] or aabb[b, 3] <= aabb[a, 1]
        ):
            ok = False
        if not ok:
            for k in range(nslots):
                mani_active[s + k] = False
                mani_acc_normal[s + k] = 0.0
                mani_acc_tangent[s + k] = 0.0
            continue

        if kind == 0:
            nx, ny, act1, p1x, p1y, pen1, act2, p2x, p2y, pen2 = _manifold_pp(
                wverts[a], vertex_count[a], wverts[b], vertex_count[b]
            )
            _store_manifold(
                position, velocity, angular_velocity, restitution,
                mani_active, mani_position, mani_normal, mani_penetration,
                mani_rest_target, mani_acc_normal, mani_acc_tangent,
                s, a, b, act1, p1x, p1y, nx, ny, pen1,
            )
            _store_manifold(
                position, velocity, angular_velocity, restitution,
                mani_active, mani_position, mani_normal, mani_penetration,
                mani_rest_target, mani_acc_normal, mani_acc_tangent,
                s + 1, a, b, act2, p2x, p2y, nx, ny, pen2,
            )
        elif kind == 1:
            act, px, py, nx, ny, pen = _manifold_pc(
                wverts[a], vertex_count[a], position[b, 0], position[b, 1], radius[b]
            )
            _store_manifold(
                position, velocity, angular_velocity, restitution,
                mani_active, mani_position, mani_normal, mani_penetration,
                mani_rest_target, mani_acc_normal, mani_acc_tangent,
                s, a, b, act, px, py, nx, ny, pen,
            )
        else:
            act, px, py, nx, ny, pen = _manifold_cc(
                position[a, 0], position[a, 1], radius[a],
                position[b, 0], position[b, 1], radius[b],
            )
            _store_manifold(
                position, velocity, angular_velocity, restitution,
                mani_active, mani_position, mani_normal, mani_penetration,
                mani_rest_target, mani_acc_normal, mani_acc_tangent,
                s, a, b, act, px, py, nx, ny, pen,
            )


@njit(cache=True, inline="always")
def _store_manifold(
    position, velocity, angular_velocity, restitution,
    mani_active, mani_position, mani_normal, mani_penetration,
    mani_rest_target, mani_acc_normal, mani_acc_tangent,
    slot, a, b, act, px, py, nx, ny, pen,
):
    was_active = mani_active[slot]
    mani_active[slot] = act
    if not act:
        mani_acc_normal[slot] = 0.0
        mani_acc_tangent[slot] = 0.0
        mani_penetration[slot] = pen
        return
    mani_position[slot, 0] = px
    mani_position[slot, 1] = py
    mani_normal[slot, 0] = nx
    mani_normal[slot, 1] = ny
    mani_penetration[slot] = pen
    mani_rest_target[slot] = _restitution_target(
        position, velocity, angular_velocity, restitution, a, b, px, py, nx, ny
    )
    if not was_active:
        mani_acc_normal[slot] = 0.0
        mani_acc_tangent[slot] = 0.0


# --- full step ----------------------------------------------------------------


@njit(cache=True, nogil=True)
def steps_kernel(
    body_active, position, rotation, velocity, angular_velocity,
    inverse_mass, inverse_inertia, friction, restitution, fixated,
    vertices, vertex_count, radius,
    joint_active, joint_body_a, joint_body_b, joint_anchor_a, joint_anchor_b,
    joint_is_fixed, joint_fixed_rotation, motor_on, motor_power, motor_speed,
    motor_always_on, joint_has_limits, joint_limit_min, joint_limit_max,
    joint_acc_impulse, joint_acc_rot_impulse,
    thruster_active, thruster_body, thruster_anchor, thruster_rotation, thruster_power,
    mani_active, mani_position, mani_normal, mani_penetration,
    mani_rest_target, mani_acc_normal, mani_acc_tangent,
    motor_seq, thruster_seq, steps_per_action,
    dt, gx, gy, n_iters, alpha, beta, gamma, rho, slop, warm, batch_size,
    pair_a, pair_b, pair_slot, pair_type, slot_a, slot_b,
    wverts, aabb, act_idx, dvel, dang, dpos,
    gb_slots, gr_slots,
    n_steps,
):
    """Advance up to n_steps engine steps with the actions held fixed.

    Actions come from per-row tables: engine step i reads row
    i // steps_per_action (clamped to the last row), so a single call can
    execute a whole scripted episode.  Stops early when a manifold in
    gb_slots (code 1) or gr_slots (code 2) becomes active, or when a
    committed value goes non-finite (code 3).  Returns
    (code, steps_executed); code 0 means the full budget ran.
    """
    nb = body_active.shape[0]
    nj = joint_active.shape[0]
    nt = thruster_active.shape[0]
    nm = mani_active.shape[0]

    n_rows = motor_seq.shape[0]

    for step_i in range(n_steps):
        row = step_i // steps_per_action
        if row >= n_rows:
            row = n_rows - 1

        # 1. gravity
        for i in range(nb):
            if body_active[i] and not fixated[i]:
                velocity[i, 0] += gx * dt
                velocity[i, 1] += gy * dt

        # 2. collision manifolds
        _world_geometry(body_active, position, rotation, vertices, vertex_count, radius, wverts, aabb)
        _generate_manifolds(
            body_active, position, rotation, velocity, angular_velocity, restitution,
            vertex_count, radius,
            joint_active, joint_body_a, joint_body_b,
            mani_active, mani_position, mani_normal, mani_penetration,
            mani_rest_target, mani_acc_normal, mani_acc_tangent,
            pair_a, pair_b, pair_slot, pair_type,
            wverts, aabb,
        )

        # 3. motors
        for j in range(nj):
            if joint_active[j] and motor_on[j]:
                if motor_always_on[j]:
                    act = 1.0
                else:
                    act = motor_seq[row, j]
                    if act > 1.0:
                        act = 1.0
                    elif act < -1.0:
                        act = -1.0
                _apply_motor(
                    angular_velocity, inverse_inertia,
                    joint_body_a, joint_body_b, motor_power, motor_speed,
                    j, act, rho,
                )

        # 4. thrusters
        for t in range(nt):
            if thruster_active[t]:
                act = thruster_seq[row, t]
                if act > 1.0:
                    act = 1.0
                elif act < 0.0:
                    act = 0.0
                _apply_thruster(
                    position, rotation, velocity, angular_velocity, inverse_mass, inverse_inertia,
                    thruster_body, thruster_anchor, thruster_rotation, thruster_power,
                    t, act, dt,
                )

        # 5. warm starting
        if warm:
            for s in range(nm):
                if mani_active[s] and (mani_acc_normal[s] != 0.0 or mani_acc_tangent[s] != 0.0):
                    nx = mani_normal[s, 0]
                    ny = mani_normal[s, 1]
                    jx = mani_acc_normal[s] * nx - mani_acc_tangent[s] * ny
                    jy = mani_acc_normal[s] * ny + mani_acc_tangent[s] * nx
                    px = mani_position[s, 0]
                    py = mani_position[s, 1]
                    a = slot_a[s]
                    b = slot_b[s]
                    _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, b, px, py, jx, jy)
                    _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, a, px, py, -jx, -jy)
            for j in range(nj):
                if joint_active[j]:
                    jx = joint_acc_impulse[j, 0]
                    jy = joint_acc_impulse[j, 1]
                    if jx != 0.0 or jy != 0.0:
                        a = joint_body_a[j]
                        b = joint_body_b[j]
                        ca = math.cos(rotation[a])
                        sa = math.sin(rotation[a])
                        pax = position[a, 0] + ca * joint_anchor_a[j, 0] - sa * joint_anchor_a[j, 1]
                        pay = position[a, 1] + sa * joint_anchor_a[j, 0] + ca * joint_anchor_a[j, 1]
                        cb = math.cos(rotation[b])
                        sb = math.sin(rotation[b])
                        pbx = position[b, 0] + cb * joint_anchor_b[j, 0] - sb * joint_anchor_b[j, 1]
                        pby = position[b, 1] + sb * joint_anchor_b[j, 0] + cb * joint_anchor_b[j, 1]
                        _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, b, pbx, pby, jx, jy)
                        _apply_impulse(position, velocity, angular_velocity, inverse_mass, inverse_inertia, a, pax, pay, -jx, -jy)
                    if joint_is_fixed[j]:
                        jr = joint_acc_rot_impulse[j]
                        if jr != 0.0:
                            a = joint_body_a[j]
                            b = joint_body_b[j]
                            angular_velocity[a] -= jr * inverse_inertia[a]
                            angular_velocity[b] += jr * inverse_inertia[b]

        # 6. solver loop: joints sequentially, contacts in batches
        n_active = 0
        for s in range(nm):
            if mani_active[s]:
                act_idx[n_active] = s
                n_active += 1
        n_batches = (nm + batch_size - 1) // batch_size
        if n_batches > n_active:
            n_batches = n_active

        for it in range(n_iters):
            do_pos = it == 0
            for j in range(nj):
                if joint_active[j]:
                    _solve_revolute(
                        position, rotation, velocity, angular_velocity, inverse_mass, inverse_inertia,
                        joint_body_a, joint_body_b, joint_anchor_a, joint_anchor_b, joint_acc_impulse,
                        j, alpha, beta, do_pos,
                    )
                    if joint_is_fixed[j]:
                        _solve_fixed_rotation(
                            rotation, angular_velocity, inverse_inertia,
                            joint_body_a, joint_body_b, joint_fixed_rotation, joint_acc_rot_impulse,
                            j, gamma,
                        )
                    elif joint_has_limits[j]:
                        _solve_joint_limit(
                            rotation, angular_velocity, inverse_inertia,
                            joint_body_a, joint_body_b, joint_limit_min, joint_limit_max,
                            j, gamma,
                        )

            # Active manifolds are round-robin spread over the batches.
            # Within a batch every impulse is computed from the common
            # pre-batch state: deltas accumulate in buffers (zeroed only at
            # the touched bodies) and the live arrays stay untouched until
            # the batch ends, so no separate snapshot copy is needed.
            for bi in range(n_batches):
                for k in range(bi, n_active, n_batches):
                    s = act_idx[k]
                    a = slot_a[s]
                    b = slot_b[s]
                    (
                        new_n, new_t, dvax, dvay, dwa, dvbx, dvby, dwb,
                        dpax, dpay, dpbx, dpby,
                    ) = _contact_deltas(
                        position, velocity, angular_velocity, inverse_mass, inverse_inertia, friction,
                        a, b,
                        mani_position[s, 0], mani_position[s, 1],
                        mani_normal[s, 0], mani_normal[s, 1],
                        mani_penetration[s], mani_rest_target[s],
                        mani_acc_normal[s], mani_acc_tangent[s],
                        alpha, beta, slop, do_pos,
                    )
                    mani_acc_normal[s] = new_n
                    mani_acc_tangent[s] = new_t
                    dvel[a, 0] += dvax
                    dvel[a, 1] += dvay
                    dang[a] += dwa
                    dvel[b, 0] += dvbx
                    dvel[b, 1] += dvby
                    dang[b] += dwb
                    if do_pos:
                        dpos[a, 0] += dpax
                        dpos[a, 1] += dpay
                        dpos[b, 0] += dpbx
                        dpos[b, 1] += dpby
                for k in range(bi, n_active, n_batches):
                    s = act_idx[k]
                    for body in (slot_a[s], slot_b[s]):
                        velocity[body, 0] += dvel[body, 0]
                        velocity[body, 1] += dvel[body, 1]
                        angular_velocity[body] += dang[body]
                        dvel[body, 0] = 0.0
                        dvel[body, 1] = 0.0
                        dang[body] = 0.0
                        if do_pos:
                            position[body, 0] += dpos[body, 0]
                            position[body, 1] += dpos[body, 1]
                            dpos[body, 0] = 0.0
                            dpos[body, 1] = 0.0

        # 7. Euler integration
        for i in range(nb):
            if body_active[i] and not fixated[i]:
                position[i, 0] += velocity[i, 0] * dt
                position[i, 1] += velocity[i, 1] * dt
                rotation[i] += angular_velocity[i] * dt

        for i in range(nb):
            if body_active[i]:
                if not (
                    math.isfinite(position[i, 0]) and math.isfinite(position[i, 1])
                    and math.isfinite(rotation[i])
                    and math.isfinite(velocity[i, 0]) and math.isfinite(velocity[i, 1])
                    and math.isfinite(angular_velocity[i])
                ):
                    return 3, step_i + 1

        for k in range(gb_slots.shape[0]):
            if mani_active[gb_slots[k]]:
                return 1, step_i + 1
        for k in range(gr_slots.shape[0]):
            if mani_active[gr_slots[k]]:
                return 2, step_i + 1

    return 0, n_steps

