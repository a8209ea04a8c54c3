"""Intersection points of two plane curves.

The cubic-cubic case gives the base locus of a pencil of cubics; the same
machinery handles curves of other degrees (cubic against quartic in the
liaison step).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import kernels, linalg
from .errors import IllConditioned, PositiveDimensional, PreconditionError, WrongDegree
from .pointsets import ProjectivePoint, chordal_distance
from .polycore import TernaryForm, exponents, n_monomials

log = logging.getLogger(__name__)

CLUSTER_TOL = 1e-6
POLISH_TOL = 1e-13
ACCEPT_TOL = 1e-10
SIMPLE_TOL = 1e-3


def _multiplication_matrix(C: TernaryForm, m: int) -> np.ndarray:
    """Columns: coefficient vectors of ``x^g * C`` for all degree-``m`` monomials ``x^g``."""
    cols = [(TernaryForm.monomial(g, 1, exact=C.exact) * C).dense() for g in exponents(m)]
    return np.column_stack(cols)


def _divide(P: TernaryForm, V: TernaryForm, tol: float) -> TernaryForm:
    """Exact quotient ``P / V`` computed as a linear solve."""
    k = P.degree - V.degree
    M = _multiplication_matrix(V, k)
    if linalg.is_exact(M):
        aug = np.hstack([M, P.dense().reshape(-1, 1)])
        ker = linalg.kernel_basis(aug)
        for v in ker:
            if v[-1] != 0:
                q = -v[:-1] / v[-1]
                return TernaryForm.from_dense(k, list(q), exact=True)
        raise PreconditionError("division is not exact")
    q, _ = linalg.solve_least_squares(M, P.dense())
    return TernaryForm.from_dense(k, q, exact=False)


def common_factor(C1: TernaryForm, C2: TernaryForm, tol: float = 1e-9) -> Optional[TernaryForm]:
    """A common factor of positive degree of two forms of equal degree, or ``None``.

    ``U C1 = V C2`` has a nonzero solution with ``deg U = deg V = m < d`` exactly
    when the forms share a factor of degree ``d - m``; the smallest such ``m``
    gives the greatest common divisor ``C1 / V``.
    """
    if C1.degree != C2.degree:
        raise WrongDegree("common_factor compares forms of the same degree")
    if C1.is_zero() or C2.is_zero():
        raise PreconditionError("common_factor needs nonzero forms")
    exact = C1.exact and C2.exact
    if not exact:
        C1, C2 = C1.to_complex(), C2.to_complex()
        C1 = C1.scale(1 / C1.norm())
        C2 = C2.scale(1 / C2.norm())
    d = C1.degree
    for m in range(d):
        A = np.hstack([_multiplication_matrix(C1, m), -_multiplication_matrix(C2, m)])
        ker = linalg.kernel_basis(A, tol)
        if ker:
            v = ker[0]
            nm = n_monomials(m)
            V = TernaryForm.from_dense(m, list(v[nm:]), exact=exact)
            if V.is_zero():
                continue
            return _divide(C1, V, tol)
    return None


# ---------------------------------------------------------------------------
# numeric intersection


def _random_change(rng, attempt: int, height: int = 4) -> np.ndarray:
    while True:
        g = rng.integers(-height, height + 1, size=(3, 3))
        if round(abs(np.linalg.det(g))) == 0:
            continue
        if np.linalg.cond(g) < 30:
            return g


def _bivariate(G: TernaryForm) -> Tuple[np.ndarray, np.ndarray]:
    """Exponents ``(a, b)`` and coefficients of ``G(y0, y1, 1)``."""
    exps = exponents(G.degree)
    vec = G.to_complex().dense()
    ex = np.array([(e[0], e[1]) for e in exps], dtype=np.int64)
    return ex, vec


def _coeff_grid(G: TernaryForm) -> np.ndarray:
    """``grid[a, b]``: coefficient of ``y0^a y1^b`` in ``G(y0, y1, 1)``."""
    d = G.degree
    grid = np.zeros((d + 1, d + 1), dtype=np.complex128)
    vec = G.to_complex().dense()
    for e, v in zip(exponents(d), vec):
        grid[e[0], e[1]] = v
    return grid


def _sylvester(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two univariate polynomials given in descending order."""
    m = len(p) - 1
    n = len(q) - 1
    S = np.zeros((m + n, m + n), dtype=np.complex128)
    for i in range(n):
        S[i, i : i + m + 1] = p
    for i in range(m):
        S[n + i, i : i + n + 1] = q
    return S


def _resultant_poly(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Coefficients (ascending) of ``Res_{y0}(G1, G2)`` as a polynomial in ``y1``.

    Computed by evaluating the Sylvester determinant at roots of unity and
    interpolating with an inverse FFT.
    """
    m = g1.shape[0] - 1
    n = g2.shape[0] - 1
    deg = m * n
    K = 1
    while K < deg + 1:
        K *= 2
    K *= 2
    samples = np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.empty(K, dtype=np.complex128)
    pw_b1 = np.arange(m + 1)
    pw_b2 = np.arange(n + 1)
    for k, s in enumerate(samples):
        p = g1 @ (s ** pw_b1)  # p[a] = sum_b g1[a, b] s^b
        q = g2 @ (s ** pw_b2)
        vals[k] = np.linalg.det(_sylvester(p[::-1], q[::-1]))
    # vals[k] = sum_j c_j w^(jk) with w = exp(2 pi i / K), so a forward FFT inverts it
    coeffs = np.fft.fft(vals) / K
    return coeffs[: deg + 1]


def _solve_y0(g1: np.ndarray, g2: np.ndarray, y1: complex) -> complex:
    m = g1.shape[0] - 1
    n = g2.shape[0] - 1
    p = g1 @ (y1 ** np.arange(m + 1))
    q = g2 @ (y1 ** np.arange(n + 1))
    cands = list(np.roots(p[::-1])) + list(np.roots(q[::-1]))
    if not cands:
        return 0j
    qn = np.sum(np.abs(q)) or 1.0
    pn = np.sum(np.abs(p)) or 1.0

    def score(x):
        sc = max(1.0, abs(x))
        return abs(np.polyval(p[::-1], x)) / (pn * sc ** m) + abs(np.polyval(q[::-1], x)) / (qn * sc ** n)

    return min(cands, key=score)


def _unit_residual(F: TernaryForm, p: np.ndarray) -> float:
    vec = F.to_complex().dense()
    u = p / np.linalg.norm(p)
    mon = kernels.monomial_matrix(u.reshape(1, 3), np.array(exponents(F.degree)))[0]
    return float(abs(mon @ vec) / np.sum(np.abs(vec)))


def _cluster(points: List[np.ndarray], tol: float) -> List[List[int]]:
    groups: List[List[int]] = []
    for i, p in enumerate(points):
        for grp in groups:
            if chordal_distance(points[grp[0]], p) < tol:
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


def _unit_gradients(F1: TernaryForm, F2: TernaryForm, p: np.ndarray):
    """Gradients at the unit representative, divided by ``deg * |coefficients|_1``."""
    u = p / np.linalg.norm(p)
    grads = []
    for F in (F1, F2):
        vec = F.to_complex().dense()
        J = kernels.monomial_jacobian(u.reshape(1, 3), np.array(exponents(F.degree)))
        grads.append((J @ vec) / (F.degree * np.sum(np.abs(vec))))
    return grads


def _transversality(F1: TernaryForm, F2: TernaryForm, p: np.ndarray) -> float:
    """Scaled norm of the cross product of the two gradients at ``p``.

    Of order one at a transversal intersection and near zero where the
    intersection multiplicity exceeds one.
    """
    g1, g2 = _unit_gradients(F1, F2, p)
    return float(np.linalg.norm(np.cross(g1, g2)))


def _is_simple(F1: TernaryForm, F2: TernaryForm, p: np.ndarray, tol: float = SIMPLE_TOL) -> bool:
    """Both curves smooth at ``p`` and meeting at a clear angle."""
    g1, g2 = _unit_gradients(F1, F2, p)
    n1, n2 = np.linalg.norm(g1), np.linalg.norm(g2)
    if n1 < tol or n2 < tol:
        return False
    return float(np.linalg.norm(np.cross(g1, g2))) / (n1 * n2) > tol


def _merge_multiple(groups, points, F1, F2, radius: float = 1e-2, tol: float = 1e-4):
    """Merge nearby groups into one point when the curves are not transversal there.

    Approximations of a point of multiplicity ``k`` only agree to about
    ``eps ** (1 / k)``, far above the fine clustering threshold.
    """
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                a = _average([points[k] for k in groups[i]])
                b = _average([points[k] for k in groups[j]])
                if chordal_distance(a, b) >= radius:
                    continue
                both = groups[i] + groups[j]
                centre = _average([points[k] for k in both])
                if _transversality(F1, F2, centre) < tol:
                    groups[i] = both
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    return groups


def _average(points: List[np.ndarray]) -> np.ndarray:
    ref = points[0] / np.linalg.norm(points[0])
    acc = np.zeros(3, dtype=np.complex128)
    for p in points:
        u = p / np.linalg.norm(p)
        ph = np.vdot(ref, u)
        acc += u * (np.conj(ph) / abs(ph) if ph != 0 else 1.0)
    return acc / len(points)


def _attempt(F1: TernaryForm, F2: TernaryForm, rng):
    g = _random_change(rng, 0)
    gl = [[int(v) for v in row] for row in g]
    G1 = F1.compose(gl)
    G2 = F2.compose(gl)
    g1 = _coeff_grid(G1)
    g2 = _coeff_grid(G2)
    m, n = F1.degree, F2.degree
    res = _resultant_poly(g1, g2)
    scale = np.max(np.abs(res))
    if scale == 0:
        raise PositiveDimensional("resultant vanishes identically")
    res = res / scale
    lead = res[-1]
    if abs(lead) < 1e-10:
        return None, "solution near the line at infinity"
    desc = res[::-1]
    deg = len(desc) - 1
    radius = abs(desc[-1] / desc[0]) ** (1.0 / deg) if desc[-1] != 0 else 1.0
    radius = min(max(radius, 1e-3), 1e3)
    phase = rng.uniform(0, 2 * np.pi)
    z0 = radius * np.exp(1j * (phase + 2 * np.pi * np.arange(deg) / deg))
    roots, converged, _ = kernels.aberth(desc, z0)

    ex1, c1 = _bivariate(G1)
    ex2, c2 = _bivariate(G2)
    polished = []
    raw = []
    for y1 in roots:
        y0 = _solve_y0(g1, g2, y1)
        x, y, r, _ = kernels.newton2(ex1, c1, m, ex2, c2, n, y0, y1, maxiter=50, tol=POLISH_TOL)
        if not (np.isfinite(x) and np.isfinite(y)):
            return None, "Newton diverged"
        if abs(x) > 1e8 or abs(y) > 1e8:
            return None, "point escaped the affine chart"
        pt = g @ np.array([x, y, 1.0], dtype=np.complex128)
        if max(_unit_residual(F1, pt), _unit_residual(F2, pt)) > ACCEPT_TOL:
            return None, f"polish residual {r:.2e}"
        polished.append(pt)
        raw.append(y1)
    groups = _cluster(polished, CLUSTER_TOL)
    groups = _merge_multiple(groups, polished, F1, F2)
    for grp in groups:
        if len(grp) > 1 and _is_simple(F1, F2, _average([polished[i] for i in grp])):
            return None, "two resultant roots polished to the same simple point"
    if converged:
        # simple resultant roots cannot legitimately merge into one point
        for grp in groups:
            if len(grp) > 1:
                ys = [raw[i] for i in grp]
                spread = max(abs(a - b) for a in ys for b in ys)
                if spread > 1e-3 * (1 + max(abs(v) for v in ys)):
                    return None, "two resultant roots polished to the same point"
    out = []
    for grp in groups:
        rep = _average([polished[i] for i in grp])
        out.append((ProjectivePoint(list(rep)), len(grp)))
    return out, None


# ---------------------------------------------------------------------------
# exact elimination for rational input
#
# Univariate polynomials are ascending lists of Fractions.


def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = c
        for i, v in enumerate(b):
            a[s + i] -= c * v
        a = _ptrim(a)
    return _ptrim(q), a


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return [v / a[-1] for v in a]


def _pderiv(p):
    return _ptrim([i * p[i] for i in range(1, len(p))])


def _squarefree(p):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with simple-root factors."""
    out = []
    a = _pgcd(p, _pderiv(p))
    b = _pdivmod(p, a)[0]
    c = _pdivmod(_pderiv(p), a)[0]
    d = [x - y for x, y in _zip_pad(c, _pderiv(b))]
    k = 1
    while len(_ptrim(b)) > 1:
        a = _pgcd(b, d)
        b = _pdivmod(b, a)[0]
        c = _pdivmod(d, a)[0]
        d = [x - y for x, y in _zip_pad(c, _pderiv(b))]
        if len(a) > 1:
            out.append((a, k))
        k += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _interpolate(xs, ys):
    """Ascending coefficients of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    return _ptrim(poly)


def _exact_grid(G: TernaryForm, swap: bool):
    d = G.degree
    grid = [[Fraction(0)] * (d + 1) for _ in range(d + 1)]
    for e, v in zip(exponents(d), G.dense()):
        if swap:
            grid[e[1]][e[0]] = v
        else:
            grid[e[0]][e[1]] = v
    return grid


def _exact_resultant(G1: TernaryForm, G2: TernaryForm, swap: bool):
    """``Res`` eliminating the first chart variable (second when ``swap``)."""
    g1 = _exact_grid(G1, swap)
    g2 = _exact_grid(G2, swap)
    m, n = G1.degree, G2.degree
    xs = [Fraction(t) for t in range(m * n + 1)]
    ys = []
    for t in xs:
        p = [sum(g1[a][b] * t ** b for b in range(m + 1)) for a in range(m + 1)]
        q = [sum(g2[a][b] * t ** b for b in range(n + 1)) for a in range(n + 1)]
        S = linalg.exact_zeros((m + n, m + n))
        for i in range(n):
            S[i, i : i + m + 1] = p[::-1]
        for i in range(m):
            S[n + i, i : i + n + 1] = q[::-1]
        ys.append(linalg.determinant(S))
    return _interpolate(xs, ys)


def _simple_roots(p) -> np.ndarray:
    c = np.array([float(v) for v in p[::-1]], dtype=np.complex128)
    r = np.roots(c)
    dp = np.polyder(c)
    for _ in range(3):
        step = np.polyval(c, r) / np.where(np.polyval(dp, r) == 0, 1, np.polyval(dp, r))
        r = r - step
    return r


def _roots_with_mult(p):
    out = []
    for f, k in _squarefree(p):
        out.extend((r, k) for r in _simple_roots(f))
    return out


def _attempt_exact(F1: TernaryForm, F2: TernaryForm, rng):
    # small integer centres of projection often sit on a line through two
    # rational solutions, so use a wider range here
    g = _random_change(rng, 0, height=60)
    gl = [[int(v) for v in row] for row in g]
    G1 = F1.compose(gl)
    G2 = F2.compose(gl)
    m, n = F1.degree, F2.degree
    ry = _exact_resultant(G1, G2, swap=False)
    if not ry:
        raise PositiveDimensional("resultant vanishes identically")
    rx = _exact_resultant(G1, G2, swap=True)
    if len(ry) != m * n + 1 or len(rx) != m * n + 1:
        return None, "solution on the line at infinity"
    ys = _roots_with_mult(ry)
    xs = _roots_with_mult(rx)
    if sorted(k for _, k in ys) != sorted(k for _, k in xs):
        return None, "projection is not injective on the intersection"
    ex1, c1 = _bivariate(G1)
    ex2, c2 = _bivariate(G2)
    used = set()
    out = []
    for y1, k in ys:
        best = None
        for j, (x0, kx) in enumerate(xs):
            if kx != k or j in used:
                continue
            pt = g @ np.array([x0, y1, 1.0], dtype=np.complex128)
            r = max(_unit_residual(F1, pt), _unit_residual(F2, pt))
            if best is None or r < best[0]:
                best = (r, j, x0)
        if best is None:
            return None, "could not pair the projections"
        r, j, x0 = best
        used.add(j)
        if k == 1:
            x0, y1, _, _ = kernels.newton2(ex1, c1, m, ex2, c2, n, x0, y1, maxiter=50, tol=POLISH_TOL)
        pt = g @ np.array([x0, y1, 1.0], dtype=np.complex128)
        r = max(_unit_residual(F1, pt), _unit_residual(F2, pt))
        if r > ACCEPT_TOL:
            return None, f"residual {r:.2e} after pairing"
        out.append((ProjectivePoint(list(pt)), k))
    return out, None


def intersect_curves(F1: TernaryForm, F2: TernaryForm, seed: int = 0, retries: int = 3):
    """Intersection points of two coprime plane curves with multiplicities.

    The multiplicities add up to ``deg F1 * deg F2``.  Rational input is
    eliminated exactly and split by square-free factorization, so multiple
    points come out at full precision; float input goes through a sampled
    resultant and clustering.
    """
    if F1.is_zero() or F2.is_zero():
        raise PositiveDimensional("a zero form defines the whole plane")
    rng = np.random.default_rng(seed)
    reason = None
    for _ in range(retries + 1):
        attempt = _attempt_exact if F1.exact and F2.exact else _attempt
        out, reason = attempt(F1, F2, rng)
        if out is not None:
            return out
        log.debug("intersection retry: %s", reason)
    raise IllConditioned(f"intersection failed after {retries} coordinate changes: {reason}")


def intersect_cubics(C1: TernaryForm, C2: TernaryForm, seed: int = 0):
    """The nine base points of the pencil spanned by two coprime cubics."""
    if C1.degree != 3 or C2.degree != 3:
        raise WrongDegree("intersect_cubics expects two cubics")
    if common_factor(C1, C2) is not None:
        raise PositiveDimensional("the cubics share a component")
    return intersect_curves(C1, C2, seed=seed)
