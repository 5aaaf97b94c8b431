"""Sewing equations and assembly of sewn moduli elements.

Sewing puncture ``i`` of ``P`` (coordinate ``f = a0 E_A(x)``, ``x = w - z_i``)
to the puncture at ``∞`` of ``Q`` (coordinate ``q -> -E_{B0}(1/q)``) identifies
``q = h(x) = 1 / E_{B0}^{-1}(1 / f(x))``.  The uniformizing maps satisfy

    F1(w) = F2(h(w - z_i)),   F1(w) = w + O(1) at ∞,   F2(0) = 0

(boundary/sphere variant) or ``F1(0) = 0`` with ``F1`` real-analytic (interior
variant, where ``F1`` also has the mirror principal part at ``z̄_i``).

``h`` is a Laurent function on an annulus around ``z_i`` but not a formal power
series in ``x``, so the equation is not triangular in the coefficients.  We
solve it by matching Laurent coefficients on a circle ``|x| = rho`` (computed by
FFT): the positive part of ``F2 ∘ h`` must equal ``x`` (plus, in the interior
case, the Taylor part of the mirror terms), and the nonpositive part gives the
principal part of ``F1``.  The solution is checked by back-substitution on a
second circle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import comb

from .formal_series import (
    CoordSeq,
    TruncatedSeries,
    ps_compose,
    ps_exp_derivation,
    ps_extract_coords,
    ps_invert,
    ps_mul,
    ps_radius,
)
from .moduli import DiskElement, SphereElement, inf_reparam

__all__ = [
    "SewingError",
    "SingularSewingError",
    "CollisionError",
    "GeometryError",
    "RealityError",
    "SewabilityWarning",
    "SewingSolution",
    "Sewability",
    "solve_sewing",
    "sew_sphere",
    "sew_boundary",
    "sew_interior",
    "sewability",
    "INTERNAL_TERMS",
]

INTERNAL_TERMS = 64  # length of the internal germ expansions
N_UNKNOWNS = 60  # maximal number of Taylor terms kept for F2
K_MARGIN = 6  # extra terms kept beyond the last significant coefficient
N_SAMPLES = 1024  # FFT points on the matching circle
RESIDUAL_TOL = 1e-9
COLLISION_REL = 1e-7


class SewingError(ArithmeticError):
    """Base class for sewing failures."""


class SingularSewingError(SewingError):
    """The linear matching problem is degenerate or the residual is too large."""


class CollisionError(SewingError):
    """Two output punctures coincide within tolerance."""


class GeometryError(SewingError):
    """An image puncture left the upper half plane."""


class RealityError(SewingError):
    """Boundary data acquired an imaginary part above tolerance."""


class SewabilityWarning(UserWarning):
    """The heuristic disjoint-disc estimate suggests the sewing is not analytic."""


# ---------------------------------------------------------------------------
# solution object
# ---------------------------------------------------------------------------


def _inv_shift_series(x0: complex, n: int) -> np.ndarray:
    """Taylor series of ``1/(x0 + t)`` in ``t``."""
    return (1.0 / x0) * (-1.0 / x0) ** np.arange(n)


@dataclass(frozen=True)
class SewingSolution:
    """Normalized solution ``(F1, F2)`` of a sewing equation.

    ``F1(w) = w + const + sum_j gamma_j (w - center)^{-j}`` (plus the mirror
    terms ``conj(gamma_j) (w - conj(center))^{-j}`` in the interior variant);
    ``F2(q) = sum_k beta_k q^k``.  The public ``F1``/``F2`` fields are
    :class:`TruncatedSeries` views: ``F1`` in ``u = 1/(w - center)`` (low degree
    -1, mirror terms excluded) and ``F2`` in ``q``.
    """

    F1: TruncatedSeries
    F2: TruncatedSeries
    residual: float
    variant: str
    center: complex
    rho: float
    const: complex
    gamma: np.ndarray = field(repr=False)
    beta_scaled: np.ndarray = field(repr=False)
    r: float = field(repr=False, default=1.0)

    @property
    def mirror(self) -> bool:
        return self.variant == "interior"

    def shifted(self, T: complex) -> "SewingSolution":
        """The solution composed with the translation ``y -> y + T``."""
        b = self.beta_scaled.copy()
        b[0] += T
        F1 = TruncatedSeries(
            (1.0, self.const + self.center + T) + tuple(self.gamma), -1, self.F1.order
        )
        F2c = list(self.F2.coeffs)
        F2c[0] += T
        return SewingSolution(
            F1, TruncatedSeries(tuple(F2c), 0, self.F2.order), self.residual, self.variant,
            self.center, self.rho, self.const + T, self.gamma, b, self.r,
        )

    # -- evaluation ------------------------------------------------------------
    def f1(self, w: complex | np.ndarray) -> complex | np.ndarray:
        x = np.asarray(w) - self.center
        out = np.asarray(w) + self.const + _laurent_tail(self.gamma, x)
        if self.mirror:
            out = out + _laurent_tail(np.conj(self.gamma), np.asarray(w) - np.conj(self.center))
        return out

    def f2(self, q: complex | np.ndarray) -> complex | np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(q) / self.r, self.beta_scaled)

    def f1_taylor(self, w0: complex, n: int) -> np.ndarray:
        """Taylor coefficients of ``F1(w0 + t)``; entry 0 is ``F1(w0)``."""
        out = np.zeros(n, dtype=complex)
        out[0] = w0 + self.const
        if n > 1:
            out[1] = 1.0
        out += _principal_taylor(self.gamma, w0 - self.center, n)
        if self.mirror:
            out += _principal_taylor(np.conj(self.gamma), w0 - np.conj(self.center), n)
        return out

    def f2_taylor(self, q0: complex, n: int) -> np.ndarray:
        """Taylor coefficients of ``F2(q0 + t)``; entry 0 is ``F2(q0)``."""
        lin = np.zeros(n, dtype=complex)
        lin[0] = q0 / self.r
        if n > 1:
            lin[1] = 1.0 / self.r
        acc = np.zeros(n, dtype=complex)
        for b in self.beta_scaled[::-1]:
            acc = ps_mul(acc, lin, n)
            acc[0] += b
        return acc

    def inf_map(self, n: int) -> np.ndarray:
        """``phi(u) = 1 / F1(1/u)`` as a power series (``phi = u + O(u^2)``)."""
        # F1(1/u) = (1/u) (1 + const u + u S(u)), S(u) = sum gamma_j s(u)^j, s = u/(1 - center u)
        inner = np.zeros(n, dtype=complex)
        inner[0] = 1.0
        if n > 1:
            inner[1] += self.const
        tail = _inf_tail(self.gamma, self.center, n)
        if self.mirror:
            tail = tail + _inf_tail(np.conj(self.gamma), np.conj(self.center), n)
        inner[1:] += tail[: n - 1]
        recip = _reciprocal(inner, n)
        phi = np.zeros(n, dtype=complex)
        phi[1:] = recip[: n - 1]
        return phi


def _laurent_tail(gamma: np.ndarray, x: np.ndarray) -> np.ndarray:
    inv = 1.0 / x
    return np.polynomial.polynomial.polyval(inv, np.concatenate([[0.0], gamma]))


def _principal_taylor(gamma: np.ndarray, x0: complex, n: int) -> np.ndarray:
    """Taylor coefficients of ``sum_j gamma_j (x0 + t)^{-j}``."""
    s = _inv_shift_series(x0, n)
    acc = np.zeros(n, dtype=complex)
    for g in gamma[::-1]:
        acc = ps_mul(acc, s, n)
        acc[0] += g
    acc = ps_mul(acc, s, n)
    return acc


def _inf_tail(gamma: np.ndarray, center: complex, n: int) -> np.ndarray:
    """``S(u) = sum_j gamma_j (u / (1 - center u))^j`` as a power series."""
    s = np.zeros(n, dtype=complex)
    s[1:] = center ** np.arange(n - 1)
    acc = np.zeros(n, dtype=complex)
    for g in gamma[::-1]:
        acc = ps_mul(acc, s, n)
        acc[0] += g
    return ps_mul(acc, s, n)


def _reciprocal(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        out[k] = -np.dot(a[1 : k + 1], out[k - 1 :: -1][:k]) / a[0]
    return out


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------


def _as_array(s: TruncatedSeries | np.ndarray | Sequence[complex]) -> np.ndarray:
    if isinstance(s, TruncatedSeries):
        return s.array()
    return np.asarray(s, dtype=complex)


def _default_rho(f: np.ndarray, ginv: np.ndarray) -> float:
    upper = ps_radius(f) if len(f) > 4 else np.inf
    rg = ps_radius(ginv) if len(ginv) > 4 else np.inf
    a0 = abs(f[1])
    lower = 1.0 / (a0 * rg) if np.isfinite(rg) else 0.0
    return _pick_rho(lower, upper)


def _pick_rho(lower: float, upper: float) -> float:
    if not np.isfinite(upper) and lower <= 0:
        return 1.0
    if not np.isfinite(upper):
        return 2.0 * lower
    # geometric mean balances convergence of F1's principal part (rho/upper) and
    # of F2's Taylor series (lower/rho); a large rho keeps the transported
    # coordinates well conditioned (errors grow like rho^-p).
    return float(np.sqrt(max(lower, 0.36 * upper) * upper))


def solve_sewing(
    f: TruncatedSeries | np.ndarray,
    g0inv: TruncatedSeries | np.ndarray,
    variant: str = "boundary",
    center: complex = 0.0,
    rho: float | None = None,
    n_unknowns: int = N_UNKNOWNS,
    n_samples: int = N_SAMPLES,
    order: int = 8,
) -> SewingSolution:
    """Solve ``F1(w) = F2(g0^{-1}(-1/f(w - center)))`` with its normalization.

    ``f`` is the local coordinate at the sewn puncture as a series in
    ``x = w - center``; ``g0inv`` is ``E_{B0}^{-1}`` (the inverse of the
    coordinate at ``∞`` written in ``u = 1/q``).  Coefficients are taken as an
    exact polynomial germ.  ``variant`` is ``"boundary"`` (also used for sphere
    sewing: ``F2(0) = 0``) or ``"interior"`` (``F1(0) = 0``, mirror principal
    part at ``conj(center)``).
    """
    if variant not in ("boundary", "sphere", "interior"):
        raise ValueError(f"unknown sewing variant {variant!r}")
    farr = _as_array(f)
    garr = _as_array(g0inv)
    if len(farr) < 2 or abs(farr[1]) == 0:
        raise SingularSewingError("coordinate at the sewn puncture has vanishing scale")
    if abs(farr[0]) != 0:
        raise SingularSewingError("coordinate at the sewn puncture must vanish there")
    if variant == "interior" and abs(np.imag(center)) == 0:
        raise SingularSewingError("interior sewing needs a puncture off the real axis")
    if rho is None:
        rho = _default_rho(farr, garr)
    sol = _solve_on_circle(farr, garr, variant, complex(center), rho, n_unknowns, n_samples, order)
    res = _two_circle_residual(sol, farr, garr, rho, n_samples)
    # The power basis H^k is ill-conditioned on a distorted image curve, so
    # re-solve with only as many terms as the coefficients actually need.
    mags = np.abs(sol.beta_scaled)
    big = np.nonzero(mags > 1e-16 * mags.max())[0]
    k_needed = int(big[-1]) + 1 + K_MARGIN if len(big) else n_unknowns
    if k_needed < n_unknowns:
        alt = _solve_on_circle(farr, garr, variant, complex(center), rho, k_needed, n_samples, order)
        alt_res = _two_circle_residual(alt, farr, garr, rho, n_samples)
        if alt_res <= res:
            sol, res = alt, alt_res
    sol = SewingSolution(
        sol.F1, sol.F2, res, sol.variant, sol.center, sol.rho, sol.const, sol.gamma, sol.beta_scaled, sol.r
    )
    if not np.isfinite(res) or res > RESIDUAL_TOL:
        raise SingularSewingError(f"sewing residual {res:.3e} exceeds {RESIDUAL_TOL:g}")
    return sol


def _h_on_circle(farr: np.ndarray, garr: np.ndarray, x: np.ndarray) -> np.ndarray:
    fx = np.polynomial.polynomial.polyval(x, farr)
    u = 1.0 / fx
    v = np.polynomial.polynomial.polyval(u, garr)
    return 1.0 / v


def _solve_on_circle(
    farr: np.ndarray,
    garr: np.ndarray,
    variant: str,
    center: complex,
    rho: float,
    K: int,
    M: int,
    order: int,
) -> SewingSolution:
    t = np.exp(2j * np.pi * np.arange(M) / M)
    h = _h_on_circle(farr, garr, rho * t)
    if not np.all(np.isfinite(h)):
        raise SingularSewingError("gluing map is singular on the matching circle")
    r = float(np.exp(np.mean(np.log(np.abs(h)))))
    H = h / r
    powers = np.vander(H, K + 1, increasing=True).T  # (K+1, M)
    chat = np.fft.fft(powers, axis=1) / M  # chat[k, n mod M]: coefficient of t^n in H^k
    nrow = min(2 * K, M // 2 - 1)
    J = K

    def pos(n: int) -> np.ndarray:
        return chat[:, n % M]

    if variant != "interior":
        rows = np.array([pos(n)[1:] for n in range(1, nrow + 1)])
        rhs = np.zeros(nrow, dtype=complex)
        rhs[0] = rho
        sol, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
        beta = np.concatenate([[0.0], sol])
        const0 = complex(beta @ pos(0))
        g = np.array([beta @ pos(-j) for j in range(1, J + 1)])
        gamma = g * rho ** np.arange(1, J + 1)
        const = const0 - center
    else:
        delta = (center - np.conj(center)) / rho
        zeta = -center / rho
        negs = np.array([pos(-j) for j in range(1, J + 1)])  # (J, K+1)
        js = np.arange(1, J + 1)
        G = (zeta ** (-js.astype(float))) @ negs  # (K+1,)
        U_rows = []
        V_rows = []
        rhs = []
        # n = 0 row
        U_rows.append(pos(0) + G)
        V_rows.append(-(delta ** (-js.astype(float))) @ np.conj(negs) + np.conj(G))
        rhs.append(center)
        for n in range(1, nrow + 1):
            T = (-1.0) ** n * comb(js + n - 1, n) * delta ** (-(js + n).astype(float))
            U_rows.append(pos(n))
            V_rows.append(-(T @ np.conj(negs)))
            rhs.append(rho if n == 1 else 0.0)
        U = np.array(U_rows)
        V = np.array(V_rows)
        rhs = np.array(rhs, dtype=complex)
        # beta_0 (the constant H^0) only enters the n = 0 row with coefficient 1;
        # solving it separately keeps the O(|center|) right-hand side out of the
        # least-squares noise of the remaining coefficients.
        rest = _solve_semilinear(U[1:, 1:], V[1:, 1:], rhs[1:])
        beta0 = rhs[0] - U[0, 1:] @ rest - V[0, 1:] @ np.conj(rest)
        beta = np.concatenate([[beta0], rest])
        g = negs @ beta
        gamma = g * rho ** js
        gamma0 = -2.0 * np.real(np.sum(g * zeta ** (-js.astype(float))))
        const = complex(gamma0)
    beta_true = beta / r ** np.arange(K + 1)
    n_store = min(order, K)
    F1 = TruncatedSeries((1.0, const + center) + tuple(gamma[:n_store]), -1, n_store)
    F2 = TruncatedSeries(tuple(beta_true[: n_store + 1]), 0, n_store)
    return SewingSolution(F1, F2, 0.0, variant, center, rho, complex(const), gamma, beta, r)


def _solve_semilinear(U: np.ndarray, V: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Least-squares solution of ``U x + V conj(x) = b``.

    The mirror block ``V`` is small whenever the puncture is well inside the
    upper half plane, so a fixed-point iteration on the complex system is tried
    first (it is more accurate than the doubled real system); the real form is
    the fallback.
    """
    Upinv = np.linalg.pinv(U)
    x = Upinv @ b
    for _ in range(60):
        x_new = Upinv @ (b - V @ np.conj(x))
        step = np.max(np.abs(x_new - x))
        x = x_new
        if step <= 1e-17 * max(1.0, np.max(np.abs(x))):
            return x
    if np.max(np.abs(U @ x + V @ np.conj(x) - b)) <= 1e-13 * max(1.0, np.max(np.abs(b))):
        return x
    n = U.shape[1]
    A = np.vstack([np.hstack([(U + V).real, (V - U).imag]), np.hstack([(U + V).imag, (U - V).real])])
    y, *_ = np.linalg.lstsq(A, np.concatenate([b.real, b.imag]), rcond=None)
    return y[:n] + 1j * y[n:]


def _two_circle_residual(sol: SewingSolution, farr: np.ndarray, garr: np.ndarray, rho: float, M: int) -> float:
    """Back-substitution residual on circles just outside and inside the matching circle."""
    return max(_residual(sol, farr, garr, rho * 1.07, M), _residual(sol, farr, garr, rho / 1.07, M))


def _residual(sol: SewingSolution, farr: np.ndarray, garr: np.ndarray, rho: float, M: int) -> float:
    x = rho * np.exp(2j * np.pi * (np.arange(M) + 0.5) / M)
    h = _h_on_circle(farr, garr, x)
    lhs = sol.f1(sol.center + x)
    rhs = sol.f2(h)
    scale = max(rho, float(np.max(np.abs(lhs - np.mean(lhs)))), 1e-300)
    return float(np.max(np.abs(lhs - rhs)) / scale)


# ---------------------------------------------------------------------------
# geometry: choice of the matching circle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sewability:
    """Heuristic disjoint-disc estimate: ``ratio < 1`` means comfortably sewable."""

    lower: float
    upper: float
    rho: float

    @property
    def ratio(self) -> float:
        if self.upper <= 0:
            return np.inf
        return self.lower / self.upper if np.isfinite(self.upper) else 0.0

    @property
    def ok(self) -> bool:
        return self.ratio < 0.35


def _germ(c: CoordSeq, n: int = INTERNAL_TERMS) -> np.ndarray:
    return c.a0 * ps_exp_derivation(c.A, n)


def _inf_inverse(B0: Sequence[complex], n: int = INTERNAL_TERMS) -> np.ndarray:
    return ps_invert(ps_exp_derivation(B0, n), n)


def _estimate(
    center: complex,
    others: Sequence[complex],
    coord: CoordSeq,
    q_points: Sequence[complex],
    B0: Sequence[complex],
) -> Sewability:
    farr = _germ(coord)
    garr = _inf_inverse(B0)
    sep = min((abs(z - center) for z in others), default=np.inf)
    ra = ps_radius(farr) if any(abs(a) > 0 for a in coord.A) else np.inf
    rg = ps_radius(garr) if any(abs(b) > 0 for b in B0) else np.inf
    upper = min(sep, ra / 2.0)
    extent = max((abs(q) for q in q_points), default=0.0)
    a0 = abs(coord.a0)
    lower = max(extent, (2.0 / rg) if np.isfinite(rg) else 0.0) / a0
    return Sewability(lower, upper, _pick_rho(lower, upper))


def sewability(P: SphereElement | DiskElement, i: int, Q: SphereElement | DiskElement) -> Sewability:
    """Heuristic sewability estimate for ``P ∘_i Q`` (1-based ``i``)."""
    if isinstance(P, SphereElement):
        assert isinstance(Q, SphereElement)
        pos = P.all_positions()
        z = pos[i - 1]
        others = [p for k, p in enumerate(pos) if k != i - 1]
        return _estimate(z, others, P.coords[i - 1], Q.all_positions(), Q.coord_inf)
    if isinstance(Q, DiskElement):
        bpos = P.all_boundary_positions()
        z = complex(bpos[i - 1])
        others = [complex(p) for k, p in enumerate(bpos) if k != i - 1]
        others += list(P.interior_punctures) + list(np.conj(P.interior_punctures))
        qpts = list(Q.all_boundary_positions()) + list(Q.interior_punctures)
        return _estimate(z, others, P.boundary_coords[i - 1], qpts, Q.coord_inf)
    z = P.interior_punctures[i - 1]
    others = [complex(p) for p in P.all_boundary_positions()]
    others += [p for k, p in enumerate(P.interior_punctures) if k != i - 1]
    others += list(np.conj(P.interior_punctures))
    return _estimate(z, others, P.interior_coords[i - 1], Q.all_positions(), Q.coord_inf)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _transport(coord: CoordSeq, taylor: np.ndarray, order: int) -> CoordSeq:
    """Coordinate ``coord ∘ tau^{-1}`` where ``taylor = F(p0 + t)`` and ``tau = F(p0 + t) - F(p0)``."""
    n = INTERNAL_TERMS
    tau = taylor.copy()
    tau[0] = 0.0
    g = _germ(coord, n)
    new = ps_compose(g, ps_invert(tau, n), n)
    a0, A = ps_extract_coords(new, order + 2)
    return CoordSeq(a0, tuple(A[:order]))


def _check_collisions(points: Sequence[complex], scale: float) -> None:
    pts = list(points)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if abs(pts[a] - pts[b]) < COLLISION_REL * scale:
                raise CollisionError(f"output punctures {a} and {b} collide")


def _run(
    coord: CoordSeq, B0: Sequence[complex], variant: str, center: complex, est: Sewability, order: int
) -> SewingSolution:
    if not est.ok:
        warnings.warn(
            f"sewing may not be analytic (disc ratio {est.ratio:.3g})", SewabilityWarning, stacklevel=3
        )
    farr = _germ(coord)
    garr = _inf_inverse(B0)
    return solve_sewing(farr, garr, variant, center, est.rho, order=order)


def sew_sphere(P: SphereElement, i: int, Q: SphereElement) -> SphereElement:
    """``P ∘_i Q`` in ``K``: output punctures ``P_1..P_{i-1}, Q_1..Q_n, P_{i+1}..P_m``."""
    m, n = P.arity, Q.arity
    if not 1 <= i <= m:
        raise IndexError(f"puncture index {i} out of range 1..{m}")
    order = min(P.order, Q.order)
    pos = P.all_positions()
    est = sewability(P, i, Q)
    sol = _run(P.coords[i - 1], Q.coord_inf, "boundary", pos[i - 1], est, order)
    qpos = Q.all_positions()
    # position that must end up at 0
    T = -sol.f1(pos[-1]) if i < m else 0.0
    sol = sol.shifted(T)
    nt = INTERNAL_TERMS
    new_pos: list[complex] = []
    new_coords: list[CoordSeq] = []
    for k in range(i - 1):
        tay = sol.f1_taylor(pos[k], nt)
        new_pos.append(tay[0])
        new_coords.append(_transport(P.coords[k], tay, order))
    for k in range(n):
        tay = sol.f2_taylor(qpos[k], nt)
        new_pos.append(tay[0])
        new_coords.append(_transport(Q.coords[k], tay, order))
    for k in range(i, m):
        tay = sol.f1_taylor(pos[k], nt)
        new_pos.append(tay[0])
        new_coords.append(_transport(P.coords[k], tay, order))
    A0 = inf_reparam(P.coord_inf[:order], ps_invert(sol.inf_map(nt), nt), order)
    scale = max([1.0] + [abs(z) for z in new_pos])
    _check_collisions(new_pos, scale)
    new_pos[-1] = 0j  # exact by construction
    return SphereElement(tuple(new_pos[:-1]), A0, tuple(new_coords))


def _realify(c: CoordSeq, tol: float = 1e-9) -> CoordSeq:
    # coefficients of transported coordinates grow geometrically, A_p ~ s^p
    A = np.asarray(c.A, dtype=complex)
    p = np.arange(1, len(A) + 1)
    s = max([1.0] + [float(abs(a)) ** (1.0 / k) for k, a in zip(p, A)])
    if abs(np.imag(c.a0)) > tol * abs(c.a0) or np.any(np.abs(A.imag) > tol * s**p):
        raise RealityError("boundary coordinate acquired an imaginary part")
    return CoordSeq(c.a0.real, tuple(a.real for a in c.A))


def sew_boundary(P: DiskElement, i: int, Q: DiskElement) -> DiskElement:
    """Boundary sewing ``P ∘^B_i Q``.

    Boundary punctures: ``P_1..P_{i-1}, Q_1..Q_m', P_{i+1}..P_m``; interior
    punctures: ``P``'s followed by ``Q``'s.
    """
    m = P.m
    if m < 1 or Q.m < 1:
        raise SewingError("boundary sewing needs m >= 1 on both disks")
    if not 1 <= i <= m:
        raise IndexError(f"boundary index {i} out of range 1..{m}")
    order = min(P.order, Q.order)
    bpos = [complex(r) for r in P.all_boundary_positions()]
    est = sewability(P, i, Q)
    sol = _run(P.boundary_coords[i - 1], Q.coord_inf, "boundary", bpos[i - 1], est, order)
    T = -sol.f1(bpos[-1]) if i < m else 0.0
    sol = sol.shifted(np.real(T))
    nt = INTERNAL_TERMS
    new_b: list[complex] = []
    new_bc: list[CoordSeq] = []

    def push_b(tay: np.ndarray, c: CoordSeq) -> None:
        if abs(tay[0].imag) > 1e-9 * max(1.0, abs(tay[0])):
            raise RealityError("boundary puncture left the real line")
        new_b.append(complex(tay[0].real))
        new_bc.append(_realify(_transport(c, tay, order)))

    for k in range(i - 1):
        push_b(sol.f1_taylor(bpos[k], nt), P.boundary_coords[k])
    qb = [complex(r) for r in Q.all_boundary_positions()]
    for k in range(Q.m):
        push_b(sol.f2_taylor(qb[k], nt), Q.boundary_coords[k])
    for k in range(i, m):
        push_b(sol.f1_taylor(bpos[k], nt), P.boundary_coords[k])
    new_z: list[complex] = []
    new_zc: list[CoordSeq] = []
    for z, c in zip(P.interior_punctures, P.interior_coords):
        tay = sol.f1_taylor(z, nt)
        new_z.append(tay[0])
        new_zc.append(_transport(c, tay, order))
    for z, c in zip(Q.interior_punctures, Q.interior_coords):
        tay = sol.f2_taylor(z, nt)
        new_z.append(tay[0])
        new_zc.append(_transport(c, tay, order))
    A0 = inf_reparam(P.coord_inf[:order], ps_invert(sol.inf_map(nt), nt), order)
    if A0 and max(abs(np.imag(A0))) > 1e-9:
        raise RealityError("coordinate at ∞ acquired an imaginary part")
    scale = max([1.0] + [abs(z) for z in new_b + new_z])
    _check_collisions(new_b, scale)
    _check_collisions(new_z, scale)
    if any(z.imag <= 0 for z in new_z):
        raise GeometryError("interior puncture left the upper half plane")
    return DiskElement(
        tuple(r.real for r in new_b[:-1]),
        tuple(float(np.real(a)) for a in A0),
        tuple(new_bc),
        tuple(new_z),
        tuple(new_zc),
    )


def sew_interior(P: DiskElement, i: int, Q: SphereElement) -> DiskElement:
    """Interior sewing ``P ∘^I_i Q``: interior punctures ``P_1..P_{i-1}, Q_1..Q_n, P_{i+1}..P_l``."""
    l = P.l
    if P.m < 1:
        raise SewingError("interior sewing is implemented for disks with m >= 1")
    if not 1 <= i <= l:
        raise IndexError(f"interior index {i} out of range 1..{l}")
    order = min(P.order, Q.order)
    z = P.interior_punctures[i - 1]
    est = sewability(P, i, Q)
    sol = _run(P.interior_coords[i - 1], Q.coord_inf, "interior", z, est, order)
    nt = INTERNAL_TERMS
    new_b: list[complex] = []
    new_bc: list[CoordSeq] = []
    for r, c in zip(P.all_boundary_positions(), P.boundary_coords):
        tay = sol.f1_taylor(complex(r), nt)
        if abs(tay[0].imag) > 1e-9 * max(1.0, abs(tay[0])):
            raise RealityError("boundary puncture left the real line")
        new_b.append(complex(tay[0].real))
        new_bc.append(_realify(_transport(c, tay, order)))
    new_z: list[complex] = []
    new_zc: list[CoordSeq] = []
    for k in range(i - 1):
        tay = sol.f1_taylor(P.interior_punctures[k], nt)
        new_z.append(tay[0])
        new_zc.append(_transport(P.interior_coords[k], tay, order))
    for q, c in zip(Q.all_positions(), Q.coords):
        tay = sol.f2_taylor(q, nt)
        new_z.append(tay[0])
        new_zc.append(_transport(c, tay, order))
    for k in range(i, l):
        tay = sol.f1_taylor(P.interior_punctures[k], nt)
        new_z.append(tay[0])
        new_zc.append(_transport(P.interior_coords[k], tay, order))
    A0 = inf_reparam(P.coord_inf[:order], ps_invert(sol.inf_map(nt), nt), order)
    if A0 and max(abs(np.imag(A0))) > 1e-9:
        raise RealityError("coordinate at ∞ acquired an imaginary part")
    if any(w.imag <= 0 for w in new_z):
        raise GeometryError("interior puncture left the upper half plane")
    scale = max([1.0] + [abs(w) for w in new_b + new_z])
    _check_collisions(new_b, scale)
    _check_collisions(new_z, scale)
    new_b[-1] = 0j
    return DiskElement(
        tuple(r.real for r in new_b[:-1]),
        tuple(float(np.real(a)) for a in A0),
        tuple(new_bc),
        tuple(new_z),
        tuple(new_zc),
    )
