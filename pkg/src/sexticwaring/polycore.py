"""Homogeneous polynomials in three variables.

Coefficients live in one of two scalar fields: exact rationals
(:class:`fractions.Fraction`) or double-precision complex numbers.  The two
never mix implicitly; :meth:`TernaryForm.to_complex` is the only bridge.

Dual forms (differential operators) use the same class: the monomial
``z^a`` is read as the operator ``d^a = d0^a0 d1^a1 d2^a2`` with no factorial
rescaling.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Number
from typing import Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import DegreeMismatch, PreconditionError, ScalarFieldMismatch, ZeroPoint

Exponent = Tuple[int, int, int]
Scalar = Union[Fraction, complex]


@lru_cache(maxsize=None)
def exponents(d: int) -> Tuple[Exponent, ...]:
    """All exponents of total degree ``d`` in graded-lex order, x0 > x1 > x2."""
    if d < 0:
        return ()
    return tuple((a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


@lru_cache(maxsize=None)
def exponent_index(d: int) -> Mapping[Exponent, int]:
    return {e: i for i, e in enumerate(exponents(d))}


@lru_cache(maxsize=None)
def exponent_array(d: int) -> np.ndarray:
    return np.array(exponents(d), dtype=np.int64).reshape(-1, 3)


def n_monomials(d: int) -> int:
    return (d + 1) * (d + 2) // 2


def falling(b: Exponent, a: Exponent) -> int:
    """``prod b_i! / (b_i - a_i)!``, or 0 when ``a`` is not below ``b``."""
    r = 1
    for bi, ai in zip(b, a):
        if ai > bi:
            return 0
        r *= math.factorial(bi) // math.factorial(bi - ai)
    return r


def exp_factorial(e: Exponent) -> int:
    return math.factorial(e[0]) * math.factorial(e[1]) * math.factorial(e[2])


def multinomial(e: Exponent) -> int:
    return math.factorial(sum(e)) // exp_factorial(e)


# ---------------------------------------------------------------------------
# scalars


def is_exact_scalar(v) -> bool:
    return isinstance(v, (Fraction, Integral))


def to_exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Integral):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    raise ScalarFieldMismatch(f"cannot use {v!r} as an exact rational")


def to_float(v) -> complex:
    """Lossy conversion to a complex double."""
    if isinstance(v, Fraction):
        return complex(v.numerator / v.denominator) if v.denominator != 1 else complex(v.numerator)
    return complex(v)


def _coerce(v, exact: bool):
    if exact:
        if isinstance(v, (float, complex, np.floating, np.complexfloating)):
            raise ScalarFieldMismatch("float scalar used with an exact form")
        return to_exact(v)
    if isinstance(v, Fraction):
        raise ScalarFieldMismatch("exact scalar used with a float form")
    if not isinstance(v, Number):
        raise ScalarFieldMismatch(f"not a scalar: {v!r}")
    return complex(v)


def parse_scalar(obj) -> Scalar:
    """JSON scalar: ``"p/q"`` string or ``[re, im]`` pair."""
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, bool):
        raise PreconditionError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise PreconditionError(f"bad scalar encoding: {obj!r}")


def format_scalar(v):
    if isinstance(v, (Fraction, Integral)):
        return str(Fraction(v))
    v = complex(v)
    return [float(f"{v.real:.17g}"), float(f"{v.imag:.17g}")]


# ---------------------------------------------------------------------------
# forms


class TernaryForm:
    """A homogeneous polynomial of fixed degree in x0, x1, x2.

    ``coeffs`` maps exponents to nonzero scalars; zero entries are dropped.
    Instances are immutable.  ``exact`` records the scalar field and is only
    needed explicitly for the zero form.
    """

    __slots__ = ("_degree", "_coeffs", "_exact")

    def __init__(self, degree: int, coeffs: Mapping[Exponent, object] = (), exact: bool | None = None):
        if degree < 0:
            raise PreconditionError("degree must be non-negative")
        items = dict(coeffs).items() if coeffs else ()
        if exact is None:
            exact = all(is_exact_scalar(v) for _, v in items)
        clean = {}
        for e, v in items:
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0 or sum(e) != degree:
                raise DegreeMismatch(f"exponent {e} does not have degree {degree}")
            v = _coerce(v, exact)
            if v != 0:
                clean[e] = v
        object.__setattr__(self, "_degree", degree)
        object.__setattr__(self, "_coeffs", clean)
        object.__setattr__(self, "_exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("TernaryForm is immutable")

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def coeffs(self) -> Mapping[Exponent, Scalar]:
        return dict(self._coeffs)

    @property
    def exact(self) -> bool:
        return self._exact

    def __getitem__(self, e: Exponent):
        return self._coeffs.get(tuple(e), Fraction(0) if self._exact else 0j)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    # -- construction helpers --------------------------------------------
    @classmethod
    def zero(cls, degree: int, exact: bool = True) -> "TernaryForm":
        return cls(degree, {}, exact=exact)

    @classmethod
    def monomial(cls, e: Exponent, c=1, exact: bool | None = None) -> "TernaryForm":
        if exact is None:
            exact = is_exact_scalar(c)
        return cls(sum(e), {tuple(e): c}, exact=exact)

    @classmethod
    def from_dense(cls, degree: int, vec: Sequence, exact: bool | None = None) -> "TernaryForm":
        exps = exponents(degree)
        if len(vec) != len(exps):
            raise DegreeMismatch(f"expected {len(exps)} coefficients, got {len(vec)}")
        if exact is None:
            exact = all(is_exact_scalar(v) for v in vec)
        return cls(degree, {e: v for e, v in zip(exps, vec) if v != 0}, exact=exact)

    def dense(self) -> np.ndarray:
        """Coefficient vector in graded-lex order (object dtype when exact)."""
        exps = exponents(self._degree)
        if self._exact:
            out = np.empty(len(exps), dtype=object)
            out[:] = [self._coeffs.get(e, Fraction(0)) for e in exps]
            return out
        return np.array([self._coeffs.get(e, 0j) for e in exps], dtype=np.complex128)

    def to_complex(self) -> "TernaryForm":
        if not self._exact:
            return self
        return TernaryForm(self._degree, {e: to_float(v) for e, v in self._coeffs.items()}, exact=False)

    # -- arithmetic --------------------------------------------------------
    def _check_field(self, other: "TernaryForm") -> bool:
        if self.is_zero():
            return other._exact
        if other.is_zero():
            return self._exact
        if self._exact != other._exact:
            raise ScalarFieldMismatch("cannot mix exact and float forms")
        return self._exact

    def __add__(self, other: "TernaryForm") -> "TernaryForm":
        if not isinstance(other, TernaryForm):
            return NotImplemented
        if other._degree != self._degree:
            raise DegreeMismatch("cannot add forms of different degree")
        exact = self._check_field(other)
        out = dict(self._coeffs)
        for e, v in other._coeffs.items():
            out[e] = out.get(e, 0) + v
        return TernaryForm(self._degree, out, exact=exact)

    def __neg__(self) -> "TernaryForm":
        return TernaryForm(self._degree, {e: -v for e, v in self._coeffs.items()}, exact=self._exact)

    def __sub__(self, other: "TernaryForm") -> "TernaryForm":
        return self + (-other)

    def scale(self, c) -> "TernaryForm":
        c = _coerce(c, self._exact)
        return TernaryForm(self._degree, {e: c * v for e, v in self._coeffs.items()}, exact=self._exact)

    def __mul__(self, other):
        if isinstance(other, TernaryForm):
            exact = self._check_field(other)
            out: dict = {}
            for a, u in self._coeffs.items():
                for b, v in other._coeffs.items():
                    e = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
                    out[e] = out.get(e, 0) + u * v
            return TernaryForm(self._degree + other._degree, out, exact=exact)
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TernaryForm":
        out = TernaryForm(0, {(0, 0, 0): 1 if self._exact else 1.0}, exact=self._exact)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TernaryForm):
            return NotImplemented
        return self._degree == other._degree and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._degree, frozenset(self._coeffs.items())))

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return math.sqrt(sum(abs(to_float(v)) ** 2 for v in self._coeffs.values()))

    def __call__(self, p: Sequence) -> Scalar:
        return evaluate(self, p)

    def compose(self, g) -> "TernaryForm":
        """The form ``x -> F(g x)`` for a 3x3 matrix ``g``."""
        return compose_linear(self, g)

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"TernaryForm({self._degree}, 0)"
        terms = []
        for e in exponents(self._degree):
            if e in self._coeffs:
                mon = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
                terms.append(f"({self._coeffs[e]})" + (f"*{mon}" if mon else ""))
        return f"TernaryForm({self._degree}, " + " + ".join(terms) + ")"


def linear_form(point: Sequence) -> TernaryForm:
    exact = all(is_exact_scalar(c) for c in point)
    return TernaryForm(1, {(1, 0, 0): point[0], (0, 1, 0): point[1], (0, 0, 1): point[2]}, exact=exact)


# ---------------------------------------------------------------------------
# operations


def apply_operator(D: TernaryForm, F: TernaryForm) -> TernaryForm:
    """Apply the dual form ``D`` to ``F`` as a constant-coefficient differential operator."""
    if D.degree > F.degree:
        raise DegreeMismatch(f"operator degree {D.degree} exceeds form degree {F.degree}")
    exact = F._check_field(D)
    out: dict = {}
    for a, u in D.items():
        for b, v in F.items():
            w = falling(b, a)
            if w:
                e = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
                out[e] = out.get(e, 0) + w * u * v
    return TernaryForm(F.degree - D.degree, out, exact=exact)


def power_of_linear(point: Sequence, d: int) -> TernaryForm:
    """Expand ``(a x0 + b x1 + c x2)^d``."""
    if all(c == 0 for c in point):
        raise ZeroPoint("the zero vector has no power")
    exact = all(is_exact_scalar(c) for c in point)
    pt = [to_exact(c) for c in point] if exact else [complex(c) for c in point]
    out = {}
    for e in exponents(d):
        out[e] = multinomial(e) * pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2]
    return TernaryForm(d, out, exact=exact)


def evaluate(F: TernaryForm, p: Sequence) -> Scalar:
    exact = F.exact and all(is_exact_scalar(c) for c in p)
    if exact:
        pt = [to_exact(c) for c in p]
        total = Fraction(0)
    else:
        pt = [complex(c) if not isinstance(c, Fraction) else to_float(c) for c in p]
        total = 0j
    for e, v in F.items():
        if not exact:
            v = to_float(v)
        total += v * pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2]
    return total


def compose_linear(F: TernaryForm, g) -> TernaryForm:
    """Substitute ``x_j -> sum_k g[j][k] x_k`` into ``F``."""
    exact = F.exact
    rows = [linear_form([g[j][k] for k in range(3)]) for j in range(3)]
    if not exact:
        rows = [r.to_complex() for r in rows]
    elif not all(r.exact for r in rows):
        raise ScalarFieldMismatch("float substitution into an exact form")
    powers = [[TernaryForm(0, {(0, 0, 0): 1}, exact=exact)] for _ in range(3)]
    for j in range(3):
        for _ in range(F.degree):
            powers[j].append(powers[j][-1] * rows[j])
    out = TernaryForm.zero(F.degree, exact=exact)
    for e, v in F.items():
        out = out + (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]).scale(v)
    return out


def random_rational_form(degree: int, rng, height: int = 10) -> TernaryForm:
    """Form with integer coefficients drawn uniformly from [-height, height]."""
    vals = rng.integers(-height, height + 1, size=n_monomials(degree))
    return TernaryForm.from_dense(degree, [Fraction(int(v)) for v in vals], exact=True)


# ---------------------------------------------------------------------------
# JSON


def form_to_json(F: TernaryForm) -> dict:
    return {
        "degree": F.degree,
        "coefficients": [
            {"e": list(e), "v": format_scalar(F[e])} for e in exponents(F.degree) if e in F.coeffs
        ],
    }


def form_from_json(obj) -> TernaryForm:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        degree = int(obj["degree"])
        entries = obj["coefficients"]
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"malformed form JSON: {exc}") from None
    coeffs = {}
    for item in entries:
        e = tuple(int(x) for x in item["e"])
        if len(e) != 3 or sum(e) != degree or min(e) < 0:
            raise DegreeMismatch(f"exponent {list(e)} does not sum to degree {degree}")
        if e in coeffs:
            raise PreconditionError(f"duplicate exponent {list(e)}")
        coeffs[e] = parse_scalar(item["v"])
    values = list(coeffs.values())
    exact = all(isinstance(v, Fraction) for v in values)
    if not exact:
        coeffs = {e: to_float(v) for e, v in coeffs.items()}
    return TernaryForm(degree, coeffs, exact=exact)


def forms_span_dense(forms: Iterable[TernaryForm]) -> np.ndarray:
    """Stack coefficient vectors as columns."""
    forms = list(forms)
    return np.column_stack([f.dense() for f in forms])
