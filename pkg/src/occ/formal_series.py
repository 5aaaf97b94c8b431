"""Truncated formal power and Laurent series over complex coefficients.

Two layers live here:

* :class:`TruncatedSeries` is the public value type.  It carries an explicit
  truncation order ``N``: coefficients of degree ``> N`` are *unknown*, and
  every operation propagates the order it can actually certify.
* Module-level ``ps_*`` helpers act on plain numpy arrays ``c[0..n-1]`` that are
  known modulo ``x**n``.  The sewing solver uses them on long internal series.

Local coordinate maps are encoded by a :class:`CoordSeq` ``(a0, A)`` standing
for ``exp(sum_j A_j x^{j+1} d/dx) a0^{x d/dx} x = a0 * E_A(x)``, where
``E_A`` is the time-one flow of the vector field ``sum_j A_j x^{j+1} d/dx``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SeriesError",
    "OrderUnderflowError",
    "SingularSeriesError",
    "InvalidCoordinateError",
    "TruncatedSeries",
    "CoordSeq",
    "compose",
    "invert",
    "exp_derivation",
    "apply_coords",
    "extract_coords",
    "ps_mul",
    "ps_compose",
    "ps_invert",
    "ps_exp_derivation",
    "ps_coords",
    "ps_extract_coords",
    "ps_radius",
    "close",
]

REL_TOL = 1e-9
ABS_TOL = 1e-12


class SeriesError(ValueError):
    """Base class for series-arithmetic errors."""


class OrderUnderflowError(SeriesError):
    """Raised when an operation would leave no certified coefficient."""


class SingularSeriesError(SeriesError):
    """Raised when a series that must be invertible has a vanishing linear term."""


class InvalidCoordinateError(SeriesError):
    """Raised for a coordinate with vanishing scale ``a0``."""


def close(a: complex, b: complex, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """Tolerance comparison used throughout (relative 1e-9, absolute floor 1e-12)."""
    return abs(a - b) <= max(abs_, rel * max(abs(a), abs(b)))


# ---------------------------------------------------------------------------
# array layer: power series known modulo x**n
# ---------------------------------------------------------------------------


def _pad(c: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    m = min(n, len(c))
    out[:m] = c[:m]
    return out


def ps_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Product of two power series modulo ``x**n``."""
    return _pad(np.convolve(a[:n], b[:n]), n)


def ps_compose(f: np.ndarray, g: np.ndarray, n: int) -> np.ndarray:
    """``f(g(x))`` modulo ``x**n``; requires ``g[0] == 0``."""
    g = _pad(g, n)
    if abs(g[0]) != 0.0:
        raise SeriesError("inner series must vanish at 0")
    f = _pad(f, n)
    out = np.zeros(n, dtype=complex)
    # Horner evaluation; g has no constant term so only n terms matter.
    for k in range(n - 1, -1, -1):
        out = ps_mul(out, g, n)
        out[0] += f[k]
    return out


def ps_invert(f: np.ndarray, n: int) -> np.ndarray:
    """Compositional inverse of ``f`` (``f[0] = 0``, ``f[1] != 0``) modulo ``x**n``."""
    f = _pad(f, n)
    if abs(f[0]) != 0.0:
        raise SeriesError("series to invert must vanish at 0")
    if abs(f[1]) == 0.0:
        raise SingularSeriesError("vanishing linear coefficient")
    g = np.zeros(n, dtype=complex)
    if n > 1:
        g[1] = 1.0 / f[1]
    # Newton iteration on g -> g - (f(g) - x) / f'(g), doubling precision.
    prec = 2
    fp = np.array([k * f[k] for k in range(1, n)] + [0.0], dtype=complex)
    while prec < n:
        prec = min(2 * prec, n)
        fg = ps_compose(f, g, prec)
        fg[1] -= 1.0
        dfg = ps_compose(fp, g, prec)
        g[:prec] = g[:prec] - ps_mul(fg, _ps_reciprocal(dfg, prec), prec)
    return g


def _ps_reciprocal(a: np.ndarray, n: int) -> np.ndarray:
    """Multiplicative inverse of a power series with ``a[0] != 0``."""
    if abs(a[0]) == 0.0:
        raise SingularSeriesError("vanishing constant term")
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        m = min(k, len(a) - 1)
        out[k] = -np.dot(a[1 : m + 1], out[k - 1 :: -1][:m]) / a[0]
    return out


def _vector_field(A: Sequence[complex], n: int) -> np.ndarray:
    """Coefficients of ``v(x) = sum_j A_j x^{j+1}`` modulo ``x**n``."""
    v = np.zeros(n, dtype=complex)
    for j, aj in enumerate(A, start=1):
        if j + 1 < n:
            v[j + 1] = aj
    return v


def ps_exp_derivation(A: Sequence[complex], n: int, sign: int = 1) -> np.ndarray:
    """``exp(sign * sum_j A_j x^{j+1} d/dx) x`` modulo ``x**n``.

    The derivation raises degree by at least one, so the exponential series
    terminates at every fixed degree: at most ``n - 1`` applications matter.
    """
    v = sign * _vector_field(A, n)
    term = np.zeros(n, dtype=complex)
    if n > 1:
        term[1] = 1.0
    out = term.copy()
    ks = np.arange(n)
    for k in range(1, n):
        deriv = np.zeros(n, dtype=complex)
        deriv[:-1] = (ks[1:] * term[1:])
        term = ps_mul(v, deriv, n) / k
        if not term.any():
            break
        out += term
    return out


def ps_coords(a0: complex, A: Sequence[complex], n: int) -> np.ndarray:
    """``a0 * E_A(x)`` modulo ``x**n``."""
    if a0 == 0:
        raise InvalidCoordinateError("a0 must be nonzero")
    return a0 * ps_exp_derivation(A, n)


def ps_extract_coords(f: np.ndarray, n: int) -> tuple[complex, np.ndarray]:
    """Recover ``(a0, A_1..A_{n-2})`` from ``f = a0 E_A(x)`` known modulo ``x**n``.

    The coefficient of ``x^{k+1}`` in ``E_A`` is ``A_k`` plus a polynomial in
    ``A_1..A_{k-1}``, so the ``A_k`` are determined one at a time.
    """
    f = _pad(f, n)
    if abs(f[0]) > 0.0:
        raise SeriesError("coordinate series must vanish at 0")
    if abs(f[1]) == 0.0:
        raise SingularSeriesError("vanishing linear coefficient")
    a0 = complex(f[1])
    target = f / a0
    A = np.zeros(max(n - 2, 0), dtype=complex)
    for k in range(1, n - 1):
        cur = ps_exp_derivation(A[:k], k + 2)
        A[k - 1] = target[k + 1] - cur[k + 1]
    return a0, A


def ps_radius(c: np.ndarray) -> float:
    """Root-test estimate of the convergence radius of a power series."""
    best = np.inf
    n = len(c)
    start = max(2, n // 3)
    vals = []
    for k in range(start, n):
        if abs(c[k]) > 1e-300:
            vals.append(abs(c[k]) ** (-1.0 / k))
    if vals:
        best = min(vals)
    return float(best)


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum_k coeffs[k - low] x^k`` for ``low <= k <= order``; higher terms unknown."""

    coeffs: tuple[complex, ...]
    low: int = 0
    order: int = 8

    def __post_init__(self) -> None:
        if self.order < self.low:
            raise OrderUnderflowError(f"order {self.order} below low degree {self.low}")
        cs = tuple(complex(c) for c in self.coeffs)
        need = self.order - self.low + 1
        cs = (cs + (0j,) * need)[:need]
        object.__setattr__(self, "coeffs", cs)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_array(cls, arr: Iterable[complex], order: int, low: int = 0) -> "TruncatedSeries":
        return cls(tuple(arr), low, order)

    @classmethod
    def x(cls, order: int = 8) -> "TruncatedSeries":
        return cls((0j, 1.0), 0, order)

    @classmethod
    def constant(cls, value: complex, order: int = 8) -> "TruncatedSeries":
        return cls((value,), 0, order)

    def coeff(self, k: int) -> complex:
        if k > self.order:
            raise OrderUnderflowError(f"coefficient x^{k} is beyond order {self.order}")
        if k < self.low:
            return 0j
        return self.coeffs[k - self.low]

    def array(self) -> np.ndarray:
        """Dense coefficients of degrees ``0..order`` (power series only)."""
        if self.low < 0:
            raise SeriesError("Laurent series has no dense power-series array")
        out = np.zeros(self.order + 1, dtype=complex)
        out[self.low :] = self.coeffs
        return out

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return self.low + k
        return None

    # -- arithmetic ----------------------------------------------------------
    def _aligned(self, other: "TruncatedSeries") -> tuple[int, int, np.ndarray, np.ndarray]:
        low = min(self.low, other.low)
        order = min(self.order, other.order)
        if order < low:
            raise OrderUnderflowError("no common certified coefficient")
        a = np.array([self.coeff(k) if k <= self.order else 0 for k in range(low, order + 1)])
        b = np.array([other.coeff(k) if k <= other.order else 0 for k in range(low, order + 1)])
        return low, order, a, b

    def __add__(self, other: "TruncatedSeries | complex") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        low, order, a, b = self._aligned(other)
        return TruncatedSeries(tuple(a + b), low, order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.low, self.order)

    def __sub__(self, other: "TruncatedSeries | complex") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries | complex") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(tuple(other * c for c in self.coeffs), self.low, self.order)
        va = self.valuation()
        vb = other.valuation()
        va = self.low if va is None else va
        vb = other.low if vb is None else vb
        low = self.low + other.low
        order = min(self.order + vb, other.order + va)
        prod = np.convolve(np.array(self.coeffs), np.array(other.coeffs))
        return TruncatedSeries(tuple(prod[: order - low + 1]), low, order)

    __rmul__ = __mul__

    def max_abs_diff(self, other: "TruncatedSeries") -> float:
        _, _, a, b = self._aligned(other)
        return float(np.max(np.abs(a - b))) if len(a) else 0.0

    def conj(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(np.conj(self.coeffs)), self.low, self.order)

    def __repr__(self) -> str:
        terms = [f"({c:.6g})x^{self.low + k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "TruncatedSeries(" + (" + ".join(terms) or "0") + f" + O(x^{self.order + 1}))"


@dataclass(frozen=True)
class CoordSeq:
    """Local coordinate data ``(a0, A_1..A_N)``."""

    a0: complex = 1.0
    A: tuple[complex, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(complex(a) for a in self.A))
        object.__setattr__(self, "a0", complex(self.a0))

    @classmethod
    def standard(cls, order: int = 8) -> "CoordSeq":
        return cls(1.0, (0j,) * order)

    def padded(self, order: int) -> "CoordSeq":
        return CoordSeq(self.a0, (tuple(self.A) + (0j,) * order)[:order])

    def conj(self) -> "CoordSeq":
        return CoordSeq(np.conj(self.a0), tuple(np.conj(self.A)))

    def is_real(self, tol: float = 1e-12) -> bool:
        return abs(self.a0.imag) <= tol and all(abs(a.imag) <= tol for a in self.A)

    def max_abs_diff(self, other: "CoordSeq") -> float:
        n = max(len(self.A), len(other.A))
        a = np.array(self.padded(n).A)
        b = np.array(other.padded(n).A)
        d = abs(self.a0 - other.a0)
        return float(max(d, np.max(np.abs(a - b)) if n else 0.0))


# ---------------------------------------------------------------------------
# public operations on TruncatedSeries
# ---------------------------------------------------------------------------


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(x))`` with order bookkeeping.

    ``g`` must vanish at 0 with a nonzero linear term when ``f`` is Laurent;
    for power-series ``f`` it is enough that ``g`` vanishes at 0.
    """
    if g.low < 0 or g.coeff(0) != 0:
        raise SeriesError("inner series must vanish at 0")
    vg = g.valuation()
    if vg is None:
        raise SingularSeriesError("inner series is zero to its order")
    if f.low < 0 and vg != 1:
        raise SingularSeriesError("Laurent substitution needs an invertible leading term")
    # smallest nonconstant degree of f that actually occurs
    kf = next((f.low + k for k, c in enumerate(f.coeffs) if c != 0 and f.low + k != 0), None)
    order = f.order * vg
    if kf is not None:
        # an unknown coefficient of g at degree g.order+1 enters through g^kf
        order = min(order, g.order + (kf - 1) * vg)
    low_out = min(f.low * vg, 0) if f.low < 0 else f.low * vg
    if order < max(low_out, 1 if f.low >= 0 else low_out):
        raise OrderUnderflowError(f"composition leaves no certified order (got {order})")
    n = order + 1
    # negative powers of g need its unit part to degree order - f.low
    glen = n + 1 - min(f.low, 0)
    garr = np.zeros(glen, dtype=complex)
    for k in range(max(g.low, 0), min(g.order, glen - 1) + 1):
        garr[k] = g.coeff(k)
    pos = np.zeros(n + 1, dtype=complex)
    for k in range(max(f.low, 0), f.order + 1):
        if k <= n:
            pos[k] = f.coeff(k)
    out = ps_compose(pos, garr[: n + 1], n + 1)[: n]
    low = 0
    if f.low < 0:
        # g = g1 x (1 + r(x)); g^{-1} = x^{-1} (1/g1) (1 + r)^{-1}
        unit = garr[1:] / garr[1]
        inv_unit = _ps_reciprocal(unit, n - f.low + 1)
        low = f.low
        full = np.zeros(order - low + 1, dtype=complex)
        full[-low:] += out[: order + 1]
        power = np.ones(1, dtype=complex)
        for k in range(1, -f.low + 1):
            power = ps_mul(power, inv_unit / garr[1], n - f.low + 1)
            c = f.coeff(-k)
            if c != 0:
                # c * x^{-k} * power
                seg = power[: order + k + 1]
                full[-low - k : -low - k + len(seg)] += c * seg
        return TruncatedSeries(tuple(full), low, order)
    return TruncatedSeries(tuple(out[: order + 1]), low, order)


def invert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of ``f`` with ``f(0) = 0`` and ``f'(0) != 0``."""
    if f.low < 0:
        raise SeriesError("cannot invert a Laurent series")
    if f.coeff(0) != 0:
        raise SeriesError("series to invert must vanish at 0")
    if f.order < 1 or f.coeff(1) == 0:
        raise SingularSeriesError("vanishing linear coefficient")
    n = f.order + 1
    g = ps_invert(f.array(), n)
    return TruncatedSeries(tuple(g), 0, f.order)


def exp_derivation(A: Sequence[complex] | CoordSeq, sign: int | str = 1, order: int = 8) -> TruncatedSeries:
    """``exp(± sum_j A_j x^{j+1} d/dx) x`` to order ``N``."""
    if order < 1:
        raise OrderUnderflowError("order must be at least 1")
    if isinstance(A, CoordSeq):
        A = A.A
    s = _sign(sign)
    return TruncatedSeries(tuple(ps_exp_derivation(A, order + 1, s)), 0, order)


def apply_coords(c: CoordSeq, center: complex = 0.0, order: int = 8) -> TruncatedSeries:
    """The coordinate map ``a0 E_A(x)`` as a series in ``x = w - center``.

    The series variable is the local displacement ``w - center``; ``center`` is
    carried only for the conjugation-equivariance contract (conjugating both the
    data and the center conjugates every coefficient).
    """
    if c.a0 == 0:
        raise InvalidCoordinateError("a0 must be nonzero")
    return TruncatedSeries(tuple(ps_coords(c.a0, c.A, order + 1)), 0, order)


def extract_coords(f: TruncatedSeries) -> CoordSeq:
    """Inverse of :func:`apply_coords` at center 0: ``f = a0 E_A(x)``."""
    if f.low < 0:
        raise SeriesError("coordinate series cannot have poles")
    if f.coeff(0) != 0:
        raise SeriesError("coordinate series must vanish at 0")
    if f.order < 1 or f.coeff(1) == 0:
        raise SingularSeriesError("vanishing linear coefficient")
    a0, A = ps_extract_coords(f.array(), f.order + 1)
    return CoordSeq(a0, tuple(A))


def _sign(sign: int | str) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-", "−"):
        return -1
    raise ValueError(f"sign must be + or -, got {sign!r}")
