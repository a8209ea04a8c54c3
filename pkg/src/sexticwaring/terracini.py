"""Multihomogeneous determinants attached to nine points in the plane.

``C`` is the 10 x 10 cubic evaluation determinant, ``T`` the 27 x 28
Terracini matrix of sextics at nine points and ``R`` the 28 x 28 determinant
of ``T`` stacked with a tenth evaluation row.  ``R = C^2 N`` with ``N`` of
degree 9 in each of the nine points; ``N`` is only ever evaluated.

Rational points are handled exactly.  Float points are replaced by unit
representatives first, since raw magnitudes of multihomogeneous quantities
carry no information.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels, linalg
from .errors import DegenerateCubicSystem, InconsistentQuotient, NoSolution
from .flattening import H27
from .pointsets import ProjectivePoint
from .polycore import TernaryForm, exponents, multinomial

AGREEMENT_TOL = 1e-8


def _points(points) -> List[ProjectivePoint]:
    return [p if isinstance(p, ProjectivePoint) else ProjectivePoint(list(p)) for p in points]


def _all_exact(pts: Sequence[ProjectivePoint]) -> bool:
    return all(p.exact for p in pts)


def _monomial_rows(pts: Sequence[ProjectivePoint], d: int, exact: bool) -> np.ndarray:
    exps = exponents(d)
    if exact:
        rows = []
        for p in pts:
            rows.append([p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e in exps])
        return linalg.exact_array(rows)
    U = np.array([p.unit() for p in pts])
    return kernels.monomial_matrix(U, np.array(exps))


def _jacobian_rows(pts: Sequence[ProjectivePoint], d: int, exact: bool) -> np.ndarray:
    exps = exponents(d)
    if exact:
        rows = []
        for p in pts:
            for t in range(3):
                row = []
                for e in exps:
                    if e[t] == 0:
                        row.append(Fraction(0))
                        continue
                    f = list(e)
                    f[t] -= 1
                    row.append(e[t] * p[0] ** f[0] * p[1] ** f[1] * p[2] ** f[2])
                rows.append(row)
        return linalg.exact_array(rows)
    U = np.array([p.unit() for p in pts])
    return kernels.monomial_jacobian(U, np.array(exps))


def cubic_det(points) -> object:
    """Determinant of the 10 x 10 cubic evaluation matrix of ten points."""
    pts = _points(points)
    if len(pts) != 10:
        raise ValueError("cubic_det needs ten points")
    return linalg.determinant(_monomial_rows(pts, 3, _all_exact(pts)))


def terracini_matrix(points) -> np.ndarray:
    """Stacked 3 x 28 Jacobians of the sextic monomials at nine points."""
    pts = _points(points)
    return _jacobian_rows(pts, 6, _all_exact(pts))


def R_det(points, p10) -> object:
    pts = _points(points)
    q = _points([p10])[0]
    exact = _all_exact(pts) and q.exact
    M = np.vstack([_jacobian_rows(pts, 6, exact), _monomial_rows([q], 6, exact)])
    return linalg.determinant(M)


def cubic_system_dim(points, tol: float = linalg.DEFAULT_TOL) -> int:
    """Dimension of the space of cubics through the points."""
    pts = _points(points)
    return 10 - linalg.rank(_monomial_rows(pts, 3, _all_exact(pts)), tol)


def _aux_point(rng, exact: bool) -> ProjectivePoint:
    if exact:
        while True:
            c = [int(v) for v in rng.integers(-20, 21, 3)]
            if any(c):
                return ProjectivePoint([Fraction(v) for v in c])
    return ProjectivePoint(list(rng.standard_normal(3)))


def _quotient(pts, q):
    """``(R / C^2, C, noise)``; ``noise`` bounds the rounding error of the quotient."""
    C = cubic_det(list(pts) + [q])
    if C == 0:
        return None, C, 0.0
    exact = _all_exact(pts) and q.exact
    M = np.vstack([_jacobian_rows(pts, 6, exact), _monomial_rows([q], 6, exact)])
    R = linalg.determinant(M)
    if exact:
        return R / C ** 2, C, 0.0
    s = np.linalg.svd(M, compute_uv=False)
    # error of a near-singular determinant: eps * s_max * prod(s[:-1])
    noise = 1e-15 * s[0] * float(np.prod(s[:-1])) / abs(C) ** 2
    return R / C ** 2, C, noise


def N_value(points, seed: int = 0, aux: Optional[Sequence] = None) -> object:
    """``R / C^2`` at two auxiliary points, returned once they agree."""
    pts = _points(points)
    if len(pts) != 9:
        raise ValueError("N_value needs nine points")
    if cubic_system_dim(pts) != 1:
        raise DegenerateCubicSystem("the nine points do not lie on a unique cubic")
    exact = _all_exact(pts)
    rng = np.random.default_rng([seed, 0x617578])
    queue = _points([aux]) if aux is not None else []
    values = []
    floor = 0.0
    for _ in range(50):
        q = queue.pop() if queue else _aux_point(rng, exact)
        if not (exact and q.exact):
            q = ProjectivePoint(list(q.to_complex()))
        val, C, noise = _quotient(pts, q)
        if val is None or (not exact and abs(C) < 1e-8):
            continue
        values.append(val)
        floor += noise
        if len(values) == 2:
            break
    else:
        raise NoSolution("no auxiliary point off the cubic")
    a, b = values
    if exact:
        if a != b:
            raise InconsistentQuotient(f"R/C^2 differs between auxiliary points: {a} vs {b}")
        return a
    scale = max(abs(a), abs(b))
    if abs(a - b) > AGREEMENT_TOL * scale + 10 * floor:
        raise InconsistentQuotient(f"R/C^2 disagrees: relative gap {abs(a - b) / scale:.2e}")
    return a


def sixth_power_sum(points) -> TernaryForm:
    """``sum p_i^6`` over the stored representatives (unit ones for float points)."""
    pts = _points(points)
    exps = exponents(6)
    exact = _all_exact(pts)
    weights = np.array([multinomial(e) for e in exps], dtype=object if exact else np.float64)
    rows = _monomial_rows(pts, 6, exact)
    vec = rows.sum(axis=0) * weights
    return TernaryForm.from_dense(6, list(vec), exact=exact)


def check_lambda_N_squared(points, seed: int = 0) -> Tuple[object, float]:
    """``lambda = H27(sum p_i^6) / N^2``; a single call has residual 0."""
    N = N_value(points, seed=seed)
    h = H27(sixth_power_sum(points))
    return h / N ** 2, 0.0


def lambda_spread(values: Sequence) -> float:
    """Relative spread of a sample of lambda values."""
    arr = np.array([complex(v) for v in values])
    ref = np.abs(arr).max()
    return float(np.abs(arr - arr[0]).max() / ref) if ref else 0.0


def nonic_root_on_line(points8, seed: int = 0, samples: int = 400, attempts: int = 20):
    """A ninth point on ``{N(p_1..p_8, .) = 0}`` along a random real line.

    Scans ``t -> N(p_1..p_8, q0 + t q1)`` for a sign change of the real part,
    bisects, and returns the point.  Real float points give real values.
    """
    pts = [ProjectivePoint(list(np.real(p.to_complex()))) for p in _points(points8)]
    rng = np.random.default_rng([seed, 0x6E6F6E])
    aux = [ProjectivePoint(list(rng.standard_normal(3))) for _ in range(3)]

    def f(q0, q1, t):
        q = q0 + t * q1
        q = q / np.linalg.norm(q)
        p9 = ProjectivePoint(list(q))
        cand = pts + [p9]
        best = None
        for a in aux:
            v, C, _ = _quotient(cand, a)
            if v is not None and abs(C) > 1e-8 and (best is None or abs(C) > best[1]):
                best = (v, abs(C))
        if best is None:
            return np.nan, q
        # unit() fixes the sign by the last coordinate and N is odd in p9,
        # so undo that choice to keep the scan continuous
        rep = p9.unit()
        sign = np.sign(np.real(np.vdot(rep, q)))
        return sign * best[0].real, q

    for _ in range(attempts):
        q0 = rng.standard_normal(3)
        q1 = rng.standard_normal(3)
        ts = np.linspace(-3, 3, samples)
        vals = [f(q0, q1, t)[0] for t in ts]
        for k in range(samples - 1):
            a, b = vals[k], vals[k + 1]
            if not (np.isfinite(a) and np.isfinite(b)) or a * b > 0:
                continue
            lo, hi, flo = ts[k], ts[k + 1], a
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = f(q0, q1, mid)[0]
                if fm == 0:
                    lo = hi = mid
                    break
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
                if hi - lo < 1e-15 * max(1.0, abs(mid)):
                    break
            t = 0.5 * (lo + hi)
            # a jump through a pole of the quotient is not a root
            if abs(f(q0, q1, t)[0]) > 1e-6 * max(abs(a), abs(b)):
                continue
            return ProjectivePoint(list(f(q0, q1, t)[1]))
    raise NoSolution("no sign change of N found along the sampled lines")
