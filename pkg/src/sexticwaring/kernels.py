"""Floating-point inner loops.

Every kernel exists twice: a loop version compiled with numba when it is
available, and a vectorised numpy version.  The public wrappers pick the
compiled one unless numba is missing or disabled through
``SEXTICWARING_DISABLE_NUMBA``; passing ``backend="numpy"`` or
``backend="numba"`` overrides the choice (used by the benchmark).
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, maybe_njit

# ---------------------------------------------------------------------------
# monomial evaluation


def _monomial_matrix_numpy(points, exps):
    pw = points[:, None, :] ** exps[None, :, :]
    return pw[:, :, 0] * pw[:, :, 1] * pw[:, :, 2]


def _ipow(z, k):
    r = 1.0 + 0.0j
    for _ in range(k):
        r *= z
    return r


def _monomial_matrix_loop(points, exps):
    n = points.shape[0]
    m = exps.shape[0]
    out = np.empty((n, m), dtype=np.complex128)
    for i in range(n):
        for j in range(m):
            v = 1.0 + 0.0j
            for t in range(3):
                for _ in range(exps[j, t]):
                    v *= points[i, t]
            out[i, j] = v
    return out


def _monomial_jacobian_numpy(points, exps):
    n = points.shape[0]
    m = exps.shape[0]
    out = np.zeros((3 * n, m), dtype=np.complex128)
    for t in range(3):
        lowered = exps.copy()
        lowered[:, t] -= 1
        mask = exps[:, t] > 0
        lowered[~mask, t] = 0
        vals = _monomial_matrix_numpy(points, lowered) * exps[None, :, t]
        vals[:, ~mask] = 0
        out[t::3, :] = vals
    return out


def _monomial_jacobian_loop(points, exps):
    n = points.shape[0]
    m = exps.shape[0]
    out = np.zeros((3 * n, m), dtype=np.complex128)
    for i in range(n):
        for j in range(m):
            for t in range(3):
                k = exps[j, t]
                if k == 0:
                    continue
                v = complex(k)
                for s in range(3):
                    e = exps[j, s] - (1 if s == t else 0)
                    for _ in range(e):
                        v *= points[i, s]
                out[3 * i + t, j] = v
    return out


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous root iteration


def _aberth_numpy(coeffs, z0, maxiter, tol):
    c = coeffs
    dc = c[:-1] * np.arange(len(c) - 1, 0, -1)
    z = z0.copy()
    n = z.shape[0]
    converged = False
    it = 0
    eye = np.eye(n, dtype=bool)
    prev = np.inf
    for it in range(1, maxiter + 1):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        safe = dp != 0
        ratio = np.where(safe, p / np.where(safe, dp, 1.0), 0.0)
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        w = ratio / (1.0 - ratio * s)
        w[~np.isfinite(w)] = 0.0
        z = z - w
        biggest = np.max(np.abs(w) / np.maximum(1.0, np.abs(z)))
        # stop at tolerance, or once corrections stop shrinking near the round-off floor
        if biggest < tol or (biggest < 1e-8 and biggest >= prev):
            converged = True
            break
        prev = biggest
    return z, converged, it


def _aberth_loop(coeffs, z0, maxiter, tol):
    n = z0.shape[0]
    deg = coeffs.shape[0] - 1
    z = z0.copy()
    converged = False
    it = 0
    prev = np.inf
    for it in range(1, maxiter + 1):
        biggest = 0.0
        for i in range(n):
            p = coeffs[0]
            dp = 0.0 + 0.0j
            for k in range(1, deg + 1):
                dp = dp * z[i] + p
                p = p * z[i] + coeffs[k]
            if p == 0:
                continue
            if dp == 0:
                continue
            ratio = p / dp
            s = 0.0 + 0.0j
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d != 0:
                        s += 1.0 / d
            w = ratio / (1.0 - ratio * s)
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                continue
            z[i] -= w
            rel = abs(w) / max(1.0, abs(z[i]))
            if rel > biggest:
                biggest = rel
        if biggest < tol or (biggest < 1e-8 and biggest >= prev):
            converged = True
            break
        prev = biggest
    return z, converged, it


# ---------------------------------------------------------------------------
# Newton polishing of a 2x2 polynomial system in an affine chart


def _poly2_eval(ex, c, x, y):
    v = 0.0 + 0.0j
    gx = 0.0 + 0.0j
    gy = 0.0 + 0.0j
    for k in range(c.shape[0]):
        a = ex[k, 0]
        b = ex[k, 1]
        xa = _ipow(x, a)
        yb = _ipow(y, b)
        v += c[k] * xa * yb
        if a > 0:
            gx += c[k] * a * _ipow(x, a - 1) * yb
        if b > 0:
            gy += c[k] * b * xa * _ipow(y, b - 1)
    return v, gx, gy


def _newton2_loop(ex1, c1, d1, ex2, c2, d2, x, y, maxiter, tol):
    n1 = 0.0
    for k in range(c1.shape[0]):
        n1 += abs(c1[k])
    n2 = 0.0
    for k in range(c2.shape[0]):
        n2 += abs(c2[k])
    res = np.inf
    it = 0
    for it in range(maxiter + 1):
        f1, a11, a12 = _poly2_eval(ex1, c1, x, y)
        f2, a21, a22 = _poly2_eval(ex2, c2, x, y)
        scale = np.sqrt(1.0 + abs(x) ** 2 + abs(y) ** 2)
        r1 = abs(f1) / (n1 * scale ** d1)
        r2 = abs(f2) / (n2 * scale ** d2)
        res = max(r1, r2)
        if it == maxiter:
            break
        det = a11 * a22 - a12 * a21
        if det == 0:
            break
        dx = (f1 * a22 - f2 * a12) / det
        dy = (a11 * f2 - a21 * f1) / det
        # a small residual alone is not enough near multiple points
        if res < tol and abs(dx) + abs(dy) < 1e-13 * scale:
            break
        x -= dx
        y -= dy
    return x, y, res, it


def _newton2_numpy(ex1, c1, d1, ex2, c2, d2, x, y, maxiter, tol):
    def ev(ex, c, x, y):
        a = ex[:, 0]
        b = ex[:, 1]
        xa = x ** a
        yb = y ** b
        v = np.sum(c * xa * yb)
        with np.errstate(divide="ignore", invalid="ignore"):
            gx = np.sum(np.where(a > 0, c * a * x ** np.maximum(a - 1, 0) * yb, 0))
            gy = np.sum(np.where(b > 0, c * b * xa * y ** np.maximum(b - 1, 0), 0))
        return v, gx, gy

    n1 = np.sum(np.abs(c1))
    n2 = np.sum(np.abs(c2))
    res = np.inf
    it = 0
    for it in range(maxiter + 1):
        f1, a11, a12 = ev(ex1, c1, x, y)
        f2, a21, a22 = ev(ex2, c2, x, y)
        scale = np.sqrt(1.0 + abs(x) ** 2 + abs(y) ** 2)
        res = max(abs(f1) / (n1 * scale ** d1), abs(f2) / (n2 * scale ** d2))
        if it == maxiter:
            break
        det = a11 * a22 - a12 * a21
        if det == 0:
            break
        dx = (f1 * a22 - f2 * a12) / det
        dy = (a11 * f2 - a21 * f1) / det
        if res < tol and abs(dx) + abs(dy) < 1e-13 * scale:
            break
        x = x - dx
        y = y - dy
    return complex(x), complex(y), float(res), it


# ---------------------------------------------------------------------------
# scatter-add used to assemble structured matrices from a coefficient vector


def _scatter_numpy(values, src, weights, dst, size):
    out = np.zeros(size, dtype=np.complex128)
    np.add.at(out, dst, weights * values[src])
    return out


def _scatter_loop(values, src, weights, dst, size):
    out = np.zeros(size, dtype=np.complex128)
    for k in range(src.shape[0]):
        out[dst[k]] += weights[k] * values[src[k]]
    return out


# ---------------------------------------------------------------------------
# dispatch

_ipow_nb = maybe_njit(_ipow)
if HAVE_NUMBA:
    # numba resolves module globals at compile time, so the helpers it calls
    # must be the compiled versions.
    _ipow = _ipow_nb  # noqa: F811
    _poly2_eval = maybe_njit(_poly2_eval)  # noqa: F811

_NUMBA = {
    "monomial_matrix": maybe_njit(_monomial_matrix_loop),
    "monomial_jacobian": maybe_njit(_monomial_jacobian_loop),
    "aberth": maybe_njit(_aberth_loop),
    "newton2": maybe_njit(_newton2_loop),
    "scatter": maybe_njit(_scatter_loop),
}
_NUMPY = {
    "monomial_matrix": _monomial_matrix_numpy,
    "monomial_jacobian": _monomial_jacobian_numpy,
    "aberth": _aberth_numpy,
    "newton2": _newton2_numpy,
    "scatter": _scatter_numpy,
}


def _pick(name, backend):
    if backend == "numpy" or (backend is None and not HAVE_NUMBA):
        return _NUMPY[name]
    if backend in (None, "numba"):
        fn = _NUMBA[name]
        if fn is None:
            if backend == "numba":
                raise RuntimeError("numba backend requested but unavailable")
            return _NUMPY[name]
        return fn
    raise ValueError(f"unknown backend {backend!r}")


def active_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def monomial_matrix(points, exps, backend=None) -> np.ndarray:
    """Rows: points; columns: monomials ``x^e`` evaluated at each point."""
    pts = np.ascontiguousarray(points, dtype=np.complex128).reshape(-1, 3)
    ex = np.ascontiguousarray(exps, dtype=np.int64).reshape(-1, 3)
    return _pick("monomial_matrix", backend)(pts, ex)


def monomial_jacobian(points, exps, backend=None) -> np.ndarray:
    """Stacked 3 x m gradients of the monomials, one block per point."""
    pts = np.ascontiguousarray(points, dtype=np.complex128).reshape(-1, 3)
    ex = np.ascontiguousarray(exps, dtype=np.int64).reshape(-1, 3)
    return _pick("monomial_jacobian", backend)(pts, ex)


def aberth(coeffs, z0, maxiter=500, tol=1e-12, backend=None):
    """Simultaneous roots of ``sum coeffs[k] z^(n-k)`` from the starting values ``z0``."""
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128)
    roots, ok, it = _pick("aberth", backend)(c, z, int(maxiter), float(tol))
    return np.asarray(roots), bool(ok), int(it)


def newton2(ex1, c1, d1, ex2, c2, d2, x, y, maxiter=50, tol=1e-13, backend=None):
    """Newton's method on ``G1(x, y) = G2(x, y) = 0``.

    Returns ``(x, y, residual, iterations)``; the residual is scaled by the
    coefficient 1-norm and the homogeneous point norm.
    """
    args = (
        np.ascontiguousarray(ex1, dtype=np.int64),
        np.ascontiguousarray(c1, dtype=np.complex128),
        int(d1),
        np.ascontiguousarray(ex2, dtype=np.int64),
        np.ascontiguousarray(c2, dtype=np.complex128),
        int(d2),
        complex(x),
        complex(y),
        int(maxiter),
        float(tol),
    )
    x, y, res, it = _pick("newton2", backend)(*args)
    return complex(x), complex(y), float(res), int(it)


def scatter(values, src, weights, dst, size, backend=None) -> np.ndarray:
    """``out[dst[k]] += weights[k] * values[src[k]]`` over a zero vector of length ``size``."""
    return _pick("scatter", backend)(
        np.ascontiguousarray(values, dtype=np.complex128),
        np.ascontiguousarray(src, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.complex128),
        np.ascontiguousarray(dst, dtype=np.int64),
        int(size),
    )


def warmup() -> None:
    """Load every compiled kernel once.

    The first call into numba in a process pays a fixed start-up cost of a
    few tenths of a second; call this before timing anything.
    """
    if not HAVE_NUMBA:
        return
    p = np.ones((1, 3), dtype=np.complex128)
    e = np.zeros((1, 3), dtype=np.int64)
    monomial_matrix(p, e)
    monomial_jacobian(p, e)
    aberth(np.array([1.0, -1.0]), np.array([0.5]))
    newton2(e, np.ones(1), 0, e, np.ones(1), 0, 0.0, 0.0, maxiter=1)
    scatter(np.ones(1), np.zeros(1, dtype=np.int64), np.ones(1), np.zeros(1, dtype=np.int64), 1)
