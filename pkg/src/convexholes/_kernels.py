"""Compiled kernels: maximal-empty-rectangle sweep, empty convex polygon DP,
and the per-level grid certification scan.

Every kernel has a plain-Python twin used when numba is unavailable; the
compiled versions release the GIL so harness trials can run in threads.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def max_empty_rect_sweep(xs, ys, x0, x1, y0, y1):
    """Largest empty (open-interior) axis rectangle and axis square among
    points inside the container [x0,x1]x[y0,y1].

    Enumerates every maximal empty rectangle: windows anchored on each point
    as a left support, plus wall-left windows maintained in a sorted y list.
    Returns (area, rx0, rx1, ry0, ry1, side, sx0, sy0) where side is the
    largest empty axis-square side with lower-left corner (sx0, sy0).
    """
    n = xs.shape[0]
    order = np.argsort(xs, kind="mergesort")
    best = 0.0
    bx0 = x0
    bx1 = x1
    by0 = y0
    by1 = y1
    bside = 0.0
    bsx = x0
    bsy = y0

    # point-left anchored maximal windows, pruned by the incumbents
    for ii in range(n):
        i = order[ii]
        xi = xs[i]
        yi = ys[i]
        lo = y0
        hi = y1
        wmax = x1 - xi
        if wmax * (y1 - y0) <= best and min(wmax, y1 - y0) <= bside:
            continue
        stopped = False
        for jj in range(ii + 1, n):
            j = order[jj]
            yj = ys[j]
            if yj <= lo or yj >= hi:
                continue
            w = xs[j] - xi
            h = hi - lo
            a = w * h
            if a > best:
                best = a
                bx0 = xi
                bx1 = xs[j]
                by0 = lo
                by1 = hi
            s = w if w < h else h
            if s > bside:
                bside = s
                bsx = xi
                bsy = lo
            if yj > yi:
                hi = yj
            elif yj < yi:
                lo = yj
            else:
                stopped = True
                break
            h = hi - lo
            if wmax * h <= best and (wmax if wmax < h else h) <= bside:
                stopped = True
                break
        if hi > lo and not stopped:
            w = x1 - xi
            h = hi - lo
            a = w * h
            if a > best:
                best = a
                bx0 = xi
                bx1 = x1
                by0 = lo
                by1 = hi
            s = w if w < h else h
            if s > bside:
                bside = s
                bsx = xi
                bsy = lo

    # wall-left windows: sorted y structure grown point by point
    ylist = np.empty(n + 2, dtype=np.float64)
    ylist[0] = y0
    ylist[1] = y1
    m = 2
    for ii in range(n):
        i = order[ii]
        yi = ys[i]
        # locate insertion position
        pos = 0
        while pos < m and ylist[pos] < yi:
            pos += 1
        w = xs[i] - x0
        if pos < m and ylist[pos] == yi:
            # an earlier point sits at the same height: two split windows
            lo1 = ylist[pos - 1] if pos > 0 else y0
            hi1 = yi
            lo2 = yi
            hi2 = ylist[pos + 1] if pos + 1 < m else y1
            two = True
        else:
            lo1 = ylist[pos - 1]
            hi1 = ylist[pos] if pos < m else y1
            lo2 = lo1
            hi2 = hi1
            two = False
            for q in range(m, pos, -1):
                ylist[q] = ylist[q - 1]
            ylist[pos] = yi
            m += 1
        for wi in range(2):
            if wi == 1 and not two:
                break
            lo = lo1 if wi == 0 else lo2
            hi = hi1 if wi == 0 else hi2
            h = hi - lo
            if w > 0.0 and h > 0.0:
                a = w * h
                if a > best:
                    best = a
                    bx0 = x0
                    bx1 = xs[i]
                    by0 = lo
                    by1 = hi
                s = w if w < h else h
                if s > bside:
                    bside = s
                    bsx = x0
                    bsy = lo
    # full-width gaps in the final structure
    for q in range(m - 1):
        h = ylist[q + 1] - ylist[q]
        if h <= 0.0:
            continue
        a = (x1 - x0) * h
        if a > best:
            best = a
            bx0 = x0
            bx1 = x1
            by0 = ylist[q]
            by1 = ylist[q + 1]
        s = (x1 - x0) if (x1 - x0) < h else h
        if s > bside:
            bside = s
            bsx = x0
            bsy = ylist[q]

    if n == 0:
        best = (x1 - x0) * (y1 - y0)
        bx0 = x0
        bx1 = x1
        by0 = y0
        by1 = y1
        bside = min(x1 - x0, y1 - y0)
        bsx = x0
        bsy = y0
    return best, bx0, bx1, by0, by1, bside, bsx, bsy


@njit(cache=True, nogil=True)
def mark_covered_centers(covered, points, refl, spacing, i0, j0):
    """Mark lattice centers (i*spacing, j*spacing) whose placement strictly
    contains a sample point.

    ``refl`` is the reflected placement polygon (ccw); center c is covered
    exactly when c lies strictly inside point + refl.  ``covered`` is an
    (nx, ny) boolean grid for i in [i0, i0+nx), j in [j0, j0+ny).
    """
    nx = covered.shape[0]
    ny = covered.shape[1]
    m = refl.shape[0]
    ry_min = refl[0, 1]
    ry_max = refl[0, 1]
    for t in range(1, m):
        if refl[t, 1] < ry_min:
            ry_min = refl[t, 1]
        if refl[t, 1] > ry_max:
            ry_max = refl[t, 1]
    for p in range(points.shape[0]):
        px = points[p, 0]
        py = points[p, 1]
        jlo = int(np.floor((py + ry_min) / spacing)) + 1
        jhi = int(np.ceil((py + ry_max) / spacing)) - 1
        if jlo < j0:
            jlo = j0
        if jhi > j0 + ny - 1:
            jhi = j0 + ny - 1
        for j in range(jlo, jhi + 1):
            yc = j * spacing - py
            xl = np.inf
            xr = -np.inf
            for t in range(m):
                x1 = refl[t, 0]
                y1 = refl[t, 1]
                x2 = refl[(t + 1) % m, 0]
                y2 = refl[(t + 1) % m, 1]
                if y1 == yc:
                    if x1 < xl:
                        xl = x1
                    if x1 > xr:
                        xr = x1
                lo = y1 if y1 < y2 else y2
                hi = y2 if y1 < y2 else y1
                if lo < yc < hi:
                    xx = x1 + (yc - y1) / (y2 - y1) * (x2 - x1)
                    if xx < xl:
                        xl = xx
                    if xx > xr:
                        xr = xx
            if not (xl < xr):
                continue
            ilo = int(np.floor((px + xl) / spacing)) + 1
            ihi = int(np.ceil((px + xr) / spacing)) - 1
            if ilo < i0:
                ilo = i0
            if ihi > i0 + nx - 1:
                ihi = i0 + nx - 1
            for i in range(ilo, ihi + 1):
                xc = i * spacing - px
                if xl < xc < xr:
                    covered[i - i0, j - j0] = True


@njit(cache=True, nogil=True)
def count_strict_inside(pts, ax, ay, bx, by, cx, cy):
    """Number of points strictly inside triangle (a, b, c); ccw or cw."""
    cnt = 0
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if d == 0.0:
        return 0
    sgn = 1.0 if d > 0 else -1.0
    for i in range(pts.shape[0]):
        px = pts[i, 0]
        py = pts[i, 1]
        s1 = ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) * sgn
        if s1 <= 0.0:
            continue
        s2 = ((cx - bx) * (py - by) - (cy - by) * (px - bx)) * sgn
        if s2 <= 0.0:
            continue
        s3 = ((ax - cx) * (py - cy) - (ay - cy) * (px - cx)) * sgn
        if s3 <= 0.0:
            continue
        cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def polymax_blocks(pts, a_idx, cand, cand_pts, ax, ay, tri_block, seg_block):
    """Blocking tables for the fan DP at one anchor.

    tri_block[i, j] (i < j in angle order): some sample point lies strictly
    inside triangle (anchor, cand_i, cand_j).  seg_block[i]: some sample
    point lies on the open segment (anchor, cand_i).
    """
    k = cand.shape[0]
    n = pts.shape[0]
    for i in range(k):
        ix = cand_pts[i, 0]
        iy = cand_pts[i, 1]
        for p in range(n):
            if p == a_idx or p == cand[i]:
                continue
            px = pts[p, 0]
            py = pts[p, 1]
            cr = (ix - ax) * (py - ay) - (iy - ay) * (px - ax)
            if cr == 0.0:
                dot = (px - ax) * (ix - ax) + (py - ay) * (iy - ay)
                l2 = (ix - ax) ** 2 + (iy - ay) ** 2
                if 0.0 < dot < l2:
                    seg_block[i] = True
                    break
    for i in range(k):
        ix = cand_pts[i, 0]
        iy = cand_pts[i, 1]
        for j in range(i + 1, k):
            jx = cand_pts[j, 0]
            jy = cand_pts[j, 1]
            d = (ix - ax) * (jy - ay) - (iy - ay) * (jx - ax)
            if d <= 0.0:
                continue  # zero-area triangle blocks nothing
            for p in range(n):
                if p == a_idx or p == cand[i] or p == cand[j]:
                    continue
                px = pts[p, 0]
                py = pts[p, 1]
                s1 = (ix - ax) * (py - ay) - (iy - ay) * (px - ax)
                if s1 <= 0.0:
                    continue
                s2 = (jx - ix) * (py - iy) - (jy - iy) * (px - ix)
                if s2 <= 0.0:
                    continue
                s3 = (ax - jx) * (py - jy) - (ay - jy) * (px - jx)
                if s3 <= 0.0:
                    continue
                tri_block[i, j] = True
                break


@njit(cache=True, nogil=True)
def polymax_dp(cand_pts, ax, ay, tri_block, seg_block, dp, choice):
    """Fan DP over candidate vertices in angle order.

    dp[i, j] is the best fan area of an empty convex chain ending with edge
    (cand_i -> cand_j); choice[i, j] is the predecessor index, -1 for a
    chain starting at cand_i, -2 for unreachable.
    """
    k = cand_pts.shape[0]
    for j in range(k):
        jx = cand_pts[j, 0]
        jy = cand_pts[j, 1]
        for i in range(j):
            if tri_block[i, j]:
                continue
            ix = cand_pts[i, 0]
            iy = cand_pts[i, 1]
            tri = 0.5 * abs((ix - ax) * (jy - ay) - (iy - ay) * (jx - ax))
            dp[i, j] = tri
            choice[i, j] = -1
            if not seg_block[i]:
                for w in range(i):
                    if dp[w, i] < 0.0:
                        continue
                    wx = cand_pts[w, 0]
                    wy = cand_pts[w, 1]
                    cr = (ix - wx) * (jy - iy) - (iy - wy) * (jx - ix)
                    if cr >= 0.0:
                        v = dp[w, i] + tri
                        if v > dp[i, j]:
                            dp[i, j] = v
                            choice[i, j] = w


@njit(cache=True, nogil=True)
def level_first_uncovered(px, py, w, h, dx, dy, poly_x, poly_y):
    """First grid point (i*dx, j*dy) inside the polygon whose centered
    (w, h) box has no point strictly inside; (nan, nan) when fully covered.

    ``px`` must be sorted ascending by ``py``.  The polygon is the valid
    center region in the level frame.
    """
    n = px.shape[0]
    m = poly_x.shape[0]
    ymin = poly_y[0]
    ymax = poly_y[0]
    for t in range(1, m):
        if poly_y[t] < ymin:
            ymin = poly_y[t]
        if poly_y[t] > ymax:
            ymax = poly_y[t]
    j0 = int(np.ceil(ymin / dy))
    j1 = int(np.floor(ymax / dy))
    lo_ptr = 0
    hi_ptr = 0
    for j in range(j0, j1 + 1):
        yc = j * dy
        # polygon cross-section [xl, xr] at yc
        xl = np.inf
        xr = -np.inf
        for t in range(m):
            x1 = poly_x[t]
            y1 = poly_y[t]
            x2 = poly_x[(t + 1) % m]
            y2 = poly_y[(t + 1) % m]
            if y1 == yc:
                if x1 < xl:
                    xl = x1
                if x1 > xr:
                    xr = x1
            lo = y1 if y1 < y2 else y2
            hi = y2 if y1 < y2 else y1
            if lo < yc < hi:
                xx = x1 + (yc - y1) / (y2 - y1) * (x2 - x1)
                if xx < xl:
                    xl = xx
                if xx > xr:
                    xr = xx
        if not (xl <= xr):
            continue
        i0 = int(np.ceil(xl / dx - 1e-12))
        i1 = int(np.floor(xr / dx + 1e-12))
        if i1 < i0:
            continue
        # active points: py in (yc - h/2, yc + h/2)
        while lo_ptr < n and py[lo_ptr] <= yc - h / 2.0:
            lo_ptr += 1
        while hi_ptr < n and py[hi_ptr] < yc + h / 2.0:
            hi_ptr += 1
        cnt = hi_ptr - lo_ptr
        if cnt == 0:
            return i0 * dx, yc
        act = np.empty(cnt, dtype=np.float64)
        for t in range(cnt):
            act[t] = px[lo_ptr + t]
        act.sort()
        # walk the open cover intervals (act-w/2, act+w/2) over [i0, i1]
        i = i0
        for t in range(cnt):
            a = act[t] - w / 2.0
            b = act[t] + w / 2.0
            while i <= i1 and i * dx <= a:
                return i * dx, yc
            while i <= i1 and i * dx < b:
                i += 1
            if i > i1:
                break
        if i <= i1:
            return i * dx, yc
    return np.nan, np.nan
