"""Shared test utilities: random words, twist basepoints, raster oracle."""

import numpy as np

from braidfib.braidwords import BraidWord
from braidfib.foliations import FoliationError
from braidfib.rootfinding import aberth_roots, polyval


def random_artin_word(rng, n, max_len, min_len=1):
    length = int(rng.integers(min_len, max_len + 1))
    ints = [int(k) * int(s) for k, s in
            zip(rng.integers(1, n, length), rng.choice([-1, 1], length))]
    return BraidWord.from_ints(n, ints)


def random_xhat_poly(rng, n, arg_gap=0.08):
    """Random monic polynomial with distinct-argument critical values."""
    while True:
        roots = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        coeffs = np.poly(roots)[::-1].astype(complex)
        dp = coeffs[1:] * np.arange(1, n + 1)
        crit = aberth_roots(dp / dp[-1])
        vals = polyval(coeffs, crit)
        if np.min(np.abs(vals)) < 1e-3:
            continue
        args = np.sort(np.angle(vals) % (2 * np.pi))
        gaps = np.diff(np.concatenate([args, [args[0] + 2 * np.pi]]))
        if n > 2 and np.min(gaps) < arg_gap:
            continue
        if np.min(np.minimum(args, 2 * np.pi - args)) < arg_gap:
            continue
        return coeffs


def twist_base(rng, n, tries=200):
    """Basepoint polynomial whose critical values admit clean lassos."""
    from braidfib.polyloops import twist_loop

    if n == 2:
        return np.array([1.0, 1.0, 1.0], dtype=complex)  # u^2 + u + 1
    for _ in range(tries):
        coeffs = random_xhat_poly(rng, n, arg_gap=0.3)
        try:
            for j in range(1, n):
                twist_loop(coeffs, j, +1)
        except (ValueError, FoliationError):
            continue
        return coeffs
    raise RuntimeError("no twistable basepoint found")


def raster_cactus(coeffs, grid=1600, pad=4.0):
    """Independent cactus oracle: rasterize arg p, flood-fill singular leaves.

    The leaf through each critical point is extracted as the connected
    pixel component of {|Im(e^{-i arg v_k} p)| small, Re > 0} containing
    the critical point; its boundary pixels are classified into arcs by
    undoing the finite-radius angular correction sum arg(1 - z_j/u).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size - 1
    roots = aberth_roots(coeffs)
    dp = coeffs[1:] * np.arange(1, n + 1)
    crit = aberth_roots(dp / dp[-1])
    vals = polyval(coeffs, crit)
    order = np.argsort(np.angle(vals) % (2 * np.pi))
    crit, vals = crit[order], vals[order]

    R = pad * max(1.0, float(np.max(np.abs(np.concatenate([roots, crit])))))
    xs = np.linspace(-R, R, grid)
    h = xs[1] - xs[0]
    U = xs[None, :] + 1j * xs[:, None]
    P = polyval(coeffs, U)
    dP = polyval(dp, U)

    taus = []
    for k in range(n - 1):
        alpha = float(np.angle(vals[k]) % (2 * np.pi))
        F = P * np.exp(-1j * alpha)
        mask = (np.abs(F.imag) <= 1.4 * h * (np.abs(dP) + 1e-12)) & (F.real > -1e-9)
        ix = int(round((crit[k].real + R) / h))
        iy = int(round((crit[k].imag + R) / h))
        comp = _flood(mask, (iy, ix))
        ring = comp & (np.abs(U) >= R - 3 * h)
        if not ring.any():
            raise RuntimeError("leaf did not reach the raster boundary")
        pts = U[ring]
        arcs = set()
        for u in pts:
            corr = float(np.sum(np.angle(1.0 - roots / u)))
            m = int(round((n * float(np.angle(u)) + corr - alpha) / (2 * np.pi))) % n
            arcs.add(((n - m - 1) % n) + 1)
        if len(arcs) != 2:
            raise RuntimeError(f"leaf hits arcs {sorted(arcs)}")
        a, b = sorted(arcs)
        taus.append((a, b))
    return tuple(taus)


def _flood(mask, start):
    from collections import deque

    comp = np.zeros_like(mask)
    if not mask[start]:
        # snap to the nearest masked pixel (critical point pixel may sit just off)
        ys, xs_ = np.nonzero(mask)
        d = (ys - start[0]) ** 2 + (xs_ - start[1]) ** 2
        i = int(np.argmin(d))
        start = (int(ys[i]), int(xs_[i]))
    q = deque([start])
    comp[start] = True
    H, W = mask.shape
    while q:
        y, x = q.popleft()
        for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            yy, xx = y + dy, x + dx
            if 0 <= yy < H and 0 <= xx < W and mask[yy, xx] and not comp[yy, xx]:
                comp[yy, xx] = True
                q.append((yy, xx))
    return comp


def cyclically_equal(w1, w2):
    if len(w1) != len(w2) or w1.n != w2.n:
        return False
    return any(tuple(w1.letters) == tuple(r.letters) for r in w2.cyclic_rotations())
