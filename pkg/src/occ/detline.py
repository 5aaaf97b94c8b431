"""Central-charge (determinant line) extensions of the sewing operations.

An extended element is a base moduli element together with a nonzero scalar
``lam`` relative to the canonical section (``lam = 1`` on every canonical
element).  Sewing multiplies the scalars and picks up ``exp(Γ c)``, where

    exp(Γ(A, B, a0) c) = <0| exp(-L_+(A)) a0^{-L(0)} exp(-L_-(B)) |0>

is evaluated in the truncated vacuum module and ``Γ`` is read off from the
logarithm at two central charges (the two values must agree: the logarithm is
linear in ``c``).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .formal_series import CoordSeq
from .moduli import DiskElement, SphereElement, conj, double
from .sewing import sew_boundary, sew_interior, sew_sphere
from .virasoro import VacuumModuleTrunc, exp_l, l0_scale, vacuum_amplitude

__all__ = [
    "DepthError",
    "ExtendedSphere",
    "ExtendedDisk",
    "gamma",
    "gamma_report",
    "sew_sphere_ext",
    "sew_boundary_ext",
    "sew_interior_ext",
    "double_ext",
    "nu_operator",
    "operator_cocycle_residual",
    "DEFAULT_CHARGES",
    "LINEARITY_TOL",
]

DEFAULT_CHARGES = (1.0, 26.0)
LINEARITY_TOL = 1e-8
MAX_DEPTH = 16


class DepthError(ArithmeticError):
    """The two-charge extraction of Γ disagrees: the Virasoro depth is too small."""


@dataclass(frozen=True)
class GammaReport:
    value: complex
    per_charge: tuple[complex, ...]
    depth: int

    @property
    def linearity_residual(self) -> float:
        return float(max(abs(g - self.value) for g in self.per_charge))


def _log_amplitude(A: Sequence[complex], a0: complex, B: Sequence[complex], depth: int, c: float) -> complex:
    amp = vacuum_amplitude(A, a0, B, VacuumModuleTrunc(depth, c))
    if amp == 0:
        raise DepthError("vanishing vacuum amplitude")
    # the amplitude is 1 + O(small) for sewable data, so the principal log is the right branch
    return cmath.log(amp)


def gamma_report(
    A: Sequence[complex],
    B: Sequence[complex],
    a0: complex,
    depth: int = 8,
    charges: Sequence[float] = DEFAULT_CHARGES,
    tol: float = LINEARITY_TOL,
    adaptive: bool = True,
) -> GammaReport:
    """Γ with its per-charge values; raises :class:`DepthError` if they disagree.

    With ``adaptive=True`` the depth is raised (up to 16) until the charges agree.
    """
    if len(charges) < 2 or any(c == 0 for c in charges):
        raise ValueError("need at least two nonzero charges")
    d = depth
    while True:
        vals = tuple(_log_amplitude(A, a0, B, d, c) / c for c in charges)
        rep = GammaReport(vals[0], vals, d)
        if rep.linearity_residual <= tol * max(1.0, abs(rep.value)):
            return rep
        if not adaptive or d >= MAX_DEPTH:
            raise DepthError(
                f"Γ is not linear in c at depth {d} (residual {rep.linearity_residual:.2e}); raise the depth"
            )
        d += 2


def gamma(
    A: Sequence[complex],
    B: Sequence[complex],
    a0: complex,
    depth: int = 8,
    charges: Sequence[float] = DEFAULT_CHARGES,
) -> complex:
    """The sewing cocycle ``Γ(A, B, a0)``."""
    return gamma_report(A, B, a0, depth, charges).value


# ---------------------------------------------------------------------------
# extended elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedSphere:
    """``lam · ψ(base)`` in the charge-``c`` extension.

    With ``cbar`` set the element lives in the chiral ⊗ anti-chiral extension
    (charges ``c`` and ``cbar``) used for interior sewing.
    """

    base: SphereElement
    lam: complex = 1.0
    c: complex = 0.0
    cbar: complex | None = None

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ValueError("lam must be nonzero")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def charge_bar(self) -> complex:
        return self.c if self.cbar is None else self.cbar


@dataclass(frozen=True)
class ExtendedDisk:
    """``lam · ψ^S(base)`` in the charge-``c`` extension of the disk operad."""

    base: DiskElement
    lam: complex = 1.0
    c: complex = 0.0

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ValueError("lam must be nonzero")
        object.__setattr__(self, "lam", complex(self.lam))


def _factor(coord: CoordSeq, B0: Sequence[complex], c: complex, depth: int) -> complex:
    if c == 0:
        return 1.0
    return cmath.exp(gamma(coord.A, B0, coord.a0, depth) * c)


def sew_sphere_ext(P: ExtendedSphere, i: int, Q: ExtendedSphere, depth: int = 8) -> ExtendedSphere:
    """Extended sphere sewing: ``lam = lam_P lam_Q exp(Γ(A^(i), B^(0), a0^(i)) c)``.

    For elements of the chiral ⊗ anti-chiral extension (``cbar`` set on both)
    the anti-chiral factor ``exp(Γ(conj A, conj B, conj a0) cbar)`` is included.
    """
    if P.c != Q.c or (P.cbar is None) != (Q.cbar is None) or P.cbar != Q.cbar:
        raise ValueError("charges differ")
    base = sew_sphere(P.base, i, Q.base)
    coord = P.base.coords[i - 1]
    lam = P.lam * Q.lam * _factor(coord, Q.base.coord_inf, P.c, depth)
    if P.cbar is not None:
        lam *= _factor(coord.conj(), np.conj(Q.base.coord_inf), P.cbar, depth)
    return ExtendedSphere(base, lam, P.c, P.cbar)


def double_ext(P: ExtendedDisk) -> ExtendedSphere:
    """``δ`` on extended disks: the scalar is unchanged."""
    return ExtendedSphere(double(P.base), P.lam, P.c)


def sew_boundary_ext(P: ExtendedDisk, i: int, Q: ExtendedDisk, depth: int = 8) -> ExtendedDisk:
    """Boundary sewing pulled back from ``δ(P) ∘_{2l+i} δ(Q)``.

    Only the scalar is needed from the doubled computation; it is
    ``lam_P lam_Q exp(Γ c)`` with the (real) boundary coordinate of ``P`` at ``i``
    and ``Q``'s coordinate at ∞, since ``δ`` passes boundary data through.
    """
    if P.c != Q.c:
        raise ValueError("charges differ")
    base = sew_boundary(P.base, i, Q.base)
    lam = P.lam * Q.lam * _factor(P.base.boundary_coords[i - 1], Q.base.coord_inf, P.c, depth)
    return ExtendedDisk(base, lam, P.c)


def sew_interior_ext(P: ExtendedDisk, i: int, Q: ExtendedSphere, depth: int = 8) -> ExtendedDisk:
    """Interior sewing as two extended sphere sewings of ``δ(P)``: with ``Q`` at ``z_i``, then with ``conj(Q)`` at ``z̄_i``.

    The second factor uses the coordinate at ``z̄_i`` of the intermediate
    sphere and the conjugate charge.
    """
    if P.c != Q.c:
        raise ValueError("charges differ")
    l = P.base.l
    n = Q.base.arity
    base = sew_interior(P.base, i, Q.base)
    D = double(P.base)
    first = sew_sphere(D, i, Q.base)
    lam = P.lam * Q.lam * _factor(D.coords[i - 1], Q.base.coord_inf, P.c, depth)
    k = l + n - 1 + i
    lam *= _factor(first.coords[k - 1], conj(Q.base).coord_inf, Q.charge_bar, depth)
    return ExtendedDisk(base, lam, P.c)


# ---------------------------------------------------------------------------
# operator realisation on K(1)
# ---------------------------------------------------------------------------


def nu_operator(P: SphereElement, M: VacuumModuleTrunc) -> np.ndarray:
    """``exp(-L_-(A0)) exp(-L_+(A)) a0^{-L(0)}`` for ``P`` in ``K(1)``."""
    if P.arity != 1:
        raise ValueError("operator realisation is for elements of K(1)")
    coord = P.coords[0]
    return exp_l(P.coord_inf, "-", M) @ exp_l(coord.A, "+", M) @ l0_scale(coord.a0, M)


def operator_cocycle_residual(
    P: SphereElement, Q: SphereElement, c: float, depth: int = 8, weight: int | None = None
) -> float:
    """``max |ν(P)ν(Q) - exp(Γc) ν(P∘Q)|`` over matrix entries of weight ``<= weight``.

    The truncated products are exact for entries of low weight up to the tail
    dropped beyond ``depth``; ``weight`` defaults to ``depth // 2``.
    """
    M = VacuumModuleTrunc(depth, c)
    w = depth // 2 if weight is None else weight
    lhs = nu_operator(P, M) @ nu_operator(Q, M)
    R = sew_sphere(P, 1, Q)
    rhs = _factor(P.coords[0], Q.coord_inf, c, depth) * nu_operator(R, M)
    keep = M.weights <= w
    diff = (lhs - rhs)[np.ix_(keep, keep)]
    return float(np.max(np.abs(diff)))
