"""Canonical moduli of spheres with tubes ``K(n)`` and disks with strips and tubes ``Υ(m; n)``.

Conventions
-----------
Sphere ``(z_1..z_{n-1}; A0, (a0_1, A_1), ..., (a0_n, A_n))``: the 0-th puncture
is at ``∞`` with local coordinate ``w -> -E_{A0}(1/w)``, punctures ``z_j`` carry
``w -> a0_j E_{A_j}(w - z_j)`` and the ``n``-th puncture sits at ``0``.

Disk ``(r_1..r_{m-1}; z_1..z_l; B0, (b0_1, B_1)..(b0_m, B_m), (a0_1, A_1)..)``:
boundary punctures on the real line with ``r_m = 0`` implicit, interior
punctures in the upper half plane, the same coordinate formulas, with real
boundary data.  An element with ``m = 0`` has no boundary coordinates and is
gauge-fixed by ``B0_1 = 0``.

Coordinate sequences are stored with a fixed length ``order``; the stored
coefficients are treated as the exact germ.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .formal_series import CoordSeq, ps_compose, ps_exp_derivation, ps_extract_coords

__all__ = [
    "SphereElement",
    "DiskElement",
    "identity_sphere",
    "identity_disk",
    "conj",
    "double",
    "permute",
    "translate_sphere",
    "validate",
    "element_distance",
    "with_order",
    "to_json",
    "from_json",
    "dumps",
    "loads",
    "random_coord",
    "random_sphere",
    "random_disk",
]

DEFAULT_ORDER = 8


def _ctuple(xs: Sequence[complex]) -> tuple[complex, ...]:
    return tuple(complex(x) for x in xs)


def _pad(A: Sequence[complex], order: int) -> tuple[complex, ...]:
    return (tuple(A) + (0j,) * order)[:order]


@dataclass(frozen=True)
class SphereElement:
    punctures: tuple[complex, ...]
    coord_inf: tuple[complex, ...]
    coords: tuple[CoordSeq, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "punctures", _ctuple(self.punctures))
        object.__setattr__(self, "coord_inf", _ctuple(self.coord_inf))
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def arity(self) -> int:
        return len(self.coords)

    @property
    def order(self) -> int:
        return len(self.coord_inf)

    def all_positions(self) -> tuple[complex, ...]:
        """Positions of punctures ``1..n`` including the last one at 0."""
        return self.punctures + (0j,)


@dataclass(frozen=True)
class DiskElement:
    boundary_punctures: tuple[float, ...]
    coord_inf: tuple[float, ...]
    boundary_coords: tuple[CoordSeq, ...]
    interior_punctures: tuple[complex, ...] = ()
    interior_coords: tuple[CoordSeq, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary_punctures", tuple(float(np.real(r)) for r in self.boundary_punctures))
        object.__setattr__(self, "coord_inf", tuple(float(np.real(b)) for b in self.coord_inf))
        object.__setattr__(self, "boundary_coords", tuple(self.boundary_coords))
        object.__setattr__(self, "interior_punctures", _ctuple(self.interior_punctures))
        object.__setattr__(self, "interior_coords", tuple(self.interior_coords))

    @property
    def m(self) -> int:
        return len(self.boundary_coords)

    @property
    def l(self) -> int:
        return len(self.interior_coords)

    @property
    def order(self) -> int:
        return len(self.coord_inf)

    def all_boundary_positions(self) -> tuple[float, ...]:
        return self.boundary_punctures + ((0.0,) if self.m else ())


# ---------------------------------------------------------------------------
# identities, conjugation, doubling, permutations
# ---------------------------------------------------------------------------


def _coord_with_order(c: CoordSeq, order: int) -> CoordSeq:
    return CoordSeq(c.a0, _pad(c.A, order))


def with_order(Q: SphereElement | DiskElement, order: int) -> SphereElement | DiskElement:
    """Zero-pad or truncate every coordinate sequence to length ``order``.

    Padding does not change the germs.  Sewing stores its outputs at the input
    order, so nested sewings are only associative up to the dropped tail;
    padding the inputs with guard terms and truncating afterwards removes that
    effect from comparisons.
    """
    if isinstance(Q, SphereElement):
        return SphereElement(
            Q.punctures, _pad(Q.coord_inf, order), tuple(_coord_with_order(c, order) for c in Q.coords)
        )
    return DiskElement(
        Q.boundary_punctures,
        tuple(np.real(_pad(Q.coord_inf, order))),
        tuple(CoordSeq(c.a0, tuple(np.real(_pad(c.A, order)))) for c in Q.boundary_coords),
        Q.interior_punctures,
        tuple(_coord_with_order(c, order) for c in Q.interior_coords),
    )


def identity_sphere(order: int = DEFAULT_ORDER) -> SphereElement:
    return SphereElement((), (0j,) * order, (CoordSeq.standard(order),))


def identity_disk(order: int = DEFAULT_ORDER) -> DiskElement:
    return DiskElement((), (0.0,) * order, (CoordSeq(1.0, (0.0,) * order),))


def conj(Q: SphereElement) -> SphereElement:
    """Complex conjugation of every puncture and coordinate coefficient."""
    return SphereElement(
        tuple(np.conj(Q.punctures)),
        tuple(np.conj(Q.coord_inf)),
        tuple(c.conj() for c in Q.coords),
    )


def double(P: DiskElement) -> SphereElement:
    """Doubling map: ``(z, z̄, r; interior coords, their conjugates, B0, boundary coords)``."""
    if P.m == 0:
        raise ValueError("doubling needs at least one boundary puncture (the one at 0)")
    zs = P.interior_punctures
    punct = zs + tuple(np.conj(zs)) + tuple(complex(r) for r in P.boundary_punctures)
    coords = (
        tuple(P.interior_coords)
        + tuple(c.conj() for c in P.interior_coords)
        + tuple(CoordSeq(c.a0, c.A) for c in P.boundary_coords)
    )
    return SphereElement(punct, _ctuple(P.coord_inf), coords)


def _check_perm(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(n)):
        raise ValueError(f"expected a permutation of {n} elements, got {sigma}")
    return sigma


def inf_reparam(coord_inf: Sequence[complex], kappa: np.ndarray, order: int) -> tuple[complex, ...]:
    """``A0'`` with ``E_{A0'} = E_{A0} ∘ kappa`` (``kappa = u + O(u^2)``)."""
    n = order + 2
    e = ps_exp_derivation(coord_inf, n)
    a0, A = ps_extract_coords(ps_compose(e, kappa, n), n)
    if abs(a0 - 1) > 1e-9:
        raise ArithmeticError(f"∞-coordinate lost its normalization (a0={a0})")
    return tuple(A[:order])


def translate_sphere(Q: SphereElement, T: complex) -> SphereElement:
    """Move every puncture by ``T`` and re-express the coordinate at ``∞``.

    With ``w' = w + T`` one has ``1/w = E_{(T)}(1/w')``, ``E_{(T)}(u) = u/(1 - T u)``.
    """
    if T == 0:
        return Q
    n = Q.order + 2
    kappa = np.zeros(n, dtype=complex)
    kappa[1:] = T ** np.arange(n - 1)
    A0 = inf_reparam(Q.coord_inf, kappa, Q.order)
    return SphereElement(tuple(z + T for z in Q.punctures), A0, Q.coords)


def permute(Q: SphereElement | DiskElement, sigma: Sequence[int]) -> SphereElement | DiskElement:
    """Relabel punctures: the puncture in slot ``i`` moves to slot ``sigma[i]`` (0-based).

    For spheres all ``n`` punctures are permuted and the result is translated so
    that the new last puncture sits at 0.  For disks ``sigma`` permutes the
    interior punctures.
    """
    if isinstance(Q, DiskElement):
        sigma = _check_perm(sigma, Q.l)
        zs = [0j] * Q.l
        cs: list[CoordSeq] = [CoordSeq()] * Q.l
        for i, s in enumerate(sigma):
            zs[s] = Q.interior_punctures[i]
            cs[s] = Q.interior_coords[i]
        return replace(Q, interior_punctures=tuple(zs), interior_coords=tuple(cs))
    sigma = _check_perm(sigma, Q.arity)
    pos = Q.all_positions()
    new_pos = [0j] * Q.arity
    new_cs: list[CoordSeq] = [CoordSeq()] * Q.arity
    for i, s in enumerate(sigma):
        new_pos[s] = pos[i]
        new_cs[s] = Q.coords[i]
    shifted = SphereElement(tuple(new_pos[:-1]), Q.coord_inf, tuple(new_cs))
    return translate_sphere(shifted, -new_pos[-1])


# ---------------------------------------------------------------------------
# validation and comparison
# ---------------------------------------------------------------------------


def _distinct(points: Sequence[complex], tol: float = 0.0) -> bool:
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= tol:
                return False
    return True


def validate(Q: SphereElement | DiskElement) -> list[str]:
    """Invariant violations of a moduli element (empty list = valid)."""
    out: list[str] = []
    if isinstance(Q, SphereElement):
        if len(Q.coords) != len(Q.punctures) + 1:
            out.append("coordinate count mismatch")
        if not _distinct(Q.punctures):
            out.append("punctures not distinct")
        if any(z == 0 for z in Q.punctures):
            out.append("puncture coincides with the one at 0")
        if any(c.a0 == 0 for c in Q.coords):
            out.append("coordinate scale is zero")
        if any(len(c.A) != Q.order for c in Q.coords):
            out.append("coordinate orders differ")
        return out
    if Q.m == 0:
        if Q.boundary_punctures:
            out.append("coordinate count mismatch")
        if Q.order and abs(Q.coord_inf[0]) > 1e-12:
            out.append("gauge B0_1 = 0 violated for m = 0")
    elif len(Q.boundary_coords) != len(Q.boundary_punctures) + 1:
        out.append("coordinate count mismatch")
    if not _distinct(Q.all_boundary_positions()):
        out.append("boundary punctures not distinct")
    for c in Q.boundary_coords:
        if not c.is_real():
            out.append("boundary data not real")
            break
    for c in Q.boundary_coords:
        if c.a0.real <= 0:
            out.append("boundary scale not positive")
            break
    if len(Q.interior_coords) != len(Q.interior_punctures):
        out.append("interior coordinate count mismatch")
    if not _distinct(Q.interior_punctures):
        out.append("punctures not distinct")
    if any(z.imag <= 0 for z in Q.interior_punctures):
        out.append("interior puncture not in the upper half plane")
    if any(c.a0 == 0 for c in Q.interior_coords):
        out.append("coordinate scale is zero")
    allc = list(Q.boundary_coords) + list(Q.interior_coords)
    if any(len(c.A) != Q.order for c in allc):
        out.append("coordinate orders differ")
    return out


def _length_scales(points: Sequence[complex]) -> list[float]:
    """``min(1, distance to the nearest other point)`` for each point."""
    out = []
    for k, z in enumerate(points):
        d = min((abs(z - w) for j, w in enumerate(points) if j != k), default=1.0)
        out.append(min(1.0, d))
    return out


def _coord_distance(a: CoordSeq, b: CoordSeq, L: float) -> float:
    """Coordinate difference on the natural scale ``L`` of the puncture.

    ``a0`` is compared relatively and ``A_p`` after multiplication by ``L^p``:
    the germ ``a0 E_A(L s)/(a0 L)`` has Taylor coefficients ``A_p L^p``, which is
    invariant under rescaling the whole surface.
    """
    n = max(len(a.A), len(b.A))
    da = np.array(a.padded(n).A) - np.array(b.padded(n).A)
    w = L ** np.arange(1, n + 1)
    rel_a0 = abs(a.a0 - b.a0) / max(abs(a.a0), abs(b.a0), 1e-300)
    return float(max(rel_a0, np.max(np.abs(da) * w) if n else 0.0))


def _inf_distance(a: Sequence[complex], b: Sequence[complex], points: Sequence[complex]) -> float:
    n = max(len(a), len(b))
    if n == 0:
        return 0.0
    L = min(1.0, 1.0 / max([1.0] + [abs(z) for z in points]))
    d = np.abs(np.array(_pad(a, n)) - np.array(_pad(b, n)))
    return float(np.max(d * L ** np.arange(1, n + 1)))


def element_distance(
    P: SphereElement | DiskElement, Q: SphereElement | DiskElement, normalized: bool = True
) -> float:
    """Max difference between two elements (``inf`` if their shapes differ).

    Positions are compared absolutely.  With ``normalized=True`` (default) each
    coordinate is compared on the natural length scale of its puncture (see
    :func:`_coord_distance`); otherwise raw coefficients are compared.
    """
    if type(P) is not type(Q):
        return float("inf")
    if isinstance(P, SphereElement):
        assert isinstance(Q, SphereElement)
        if P.arity != Q.arity:
            return float("inf")
        pts = list(P.all_positions())
        diffs = [abs(a - b) for a, b in zip(P.punctures, Q.punctures)]
        Ls = _length_scales(pts) if normalized else [1.0] * len(pts)
        diffs += [_coord_distance(a, b, L) for a, b, L in zip(P.coords, Q.coords, Ls)]
        diffs.append(_inf_distance(P.coord_inf, Q.coord_inf, pts if normalized else []))
        if not normalized:
            diffs += [abs(a.a0 - b.a0) for a, b in zip(P.coords, Q.coords)]
        return float(max(diffs))
    assert isinstance(Q, DiskElement)
    if P.m != Q.m or P.l != Q.l:
        return float("inf")
    bpts = [complex(r) for r in P.all_boundary_positions()]
    ipts = list(P.interior_punctures)
    allpts = bpts + ipts + list(np.conj(ipts))
    diffs = [abs(a - b) for a, b in zip(P.boundary_punctures, Q.boundary_punctures)]
    diffs += [abs(a - b) for a, b in zip(P.interior_punctures, Q.interior_punctures)]
    Ls = _length_scales(allpts) if normalized else [1.0] * len(allpts)
    cs = list(zip(P.boundary_coords, Q.boundary_coords)) + list(zip(P.interior_coords, Q.interior_coords))
    diffs += [_coord_distance(a, b, L) for (a, b), L in zip(cs, Ls)]
    diffs.append(_inf_distance(P.coord_inf, Q.coord_inf, allpts if normalized else []))
    if not normalized:
        diffs += [abs(a.a0 - b.a0) for a, b in cs]
    return float(max(diffs))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _c2j(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _j2c(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    re, im = v
    return complex(float(re), float(im))


def _coord_to_json(c: CoordSeq, real: bool) -> dict[str, Any]:
    if real:
        return {"b0": float(c.a0.real), "B": [float(a.real) for a in c.A]}
    return {"a0": _c2j(c.a0), "A": [_c2j(a) for a in c.A]}


def _coord_from_json(d: dict[str, Any]) -> CoordSeq:
    if "b0" in d:
        return CoordSeq(float(d["b0"]), tuple(float(b) for b in d["B"]))
    return CoordSeq(_j2c(d["a0"]), tuple(_j2c(a) for a in d["A"]))


def to_json(Q: SphereElement | DiskElement) -> dict[str, Any]:
    if isinstance(Q, SphereElement):
        return {
            "kind": "sphere",
            "punctures": [_c2j(z) for z in Q.punctures],
            "coord_inf": [_c2j(a) for a in Q.coord_inf],
            "coords": [_coord_to_json(c, False) for c in Q.coords],
        }
    return {
        "kind": "disk",
        "boundary_punctures": list(Q.boundary_punctures),
        "coord_inf": list(Q.coord_inf),
        "boundary_coords": [_coord_to_json(c, True) for c in Q.boundary_coords],
        "interior_punctures": [_c2j(z) for z in Q.interior_punctures],
        "interior_coords": [_coord_to_json(c, False) for c in Q.interior_coords],
    }


def from_json(d: dict[str, Any]) -> SphereElement | DiskElement:
    kind = d.get("kind")
    if kind == "sphere":
        return SphereElement(
            tuple(_j2c(z) for z in d["punctures"]),
            tuple(_j2c(a) for a in d["coord_inf"]),
            tuple(_coord_from_json(c) for c in d["coords"]),
        )
    if kind == "disk":
        return DiskElement(
            tuple(float(r) for r in d.get("boundary_punctures", [])),
            tuple(float(b) for b in d["coord_inf"]),
            tuple(_coord_from_json(c) for c in d.get("boundary_coords", [])),
            tuple(_j2c(z) for z in d.get("interior_punctures", [])),
            tuple(_coord_from_json(c) for c in d.get("interior_coords", [])),
        )
    raise ValueError(f"unknown element kind {kind!r}")


def dumps(Q: SphereElement | DiskElement) -> str:
    # json writes floats with repr, the shortest string that round-trips exactly
    return json.dumps(to_json(Q))


def loads(s: str) -> SphereElement | DiskElement:
    return from_json(json.loads(s))


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def random_coord(
    rng: np.random.Generator,
    order: int,
    scale: tuple[float, float] = (20.0, 40.0),
    coef: float = 0.3,
    real: bool = False,
) -> CoordSeq:
    """A coordinate with ``|a0|`` in ``scale`` and ``A_j`` uniform in ``[-coef, coef]``."""
    mag = rng.uniform(*scale)
    if real:
        return CoordSeq(mag, tuple(rng.uniform(-coef, coef, order)))
    phase = rng.uniform(0, 2 * np.pi)
    A = rng.uniform(-coef, coef, order) + 1j * rng.uniform(-coef, coef, order)
    return CoordSeq(mag * np.exp(1j * phase), tuple(A))


def _spread_points(
    rng: np.random.Generator, k: int, sample, min_sep: float, avoid: Sequence[complex] = ()
) -> list[complex]:
    pts: list[complex] = []
    for _ in range(10000):
        if len(pts) == k:
            break
        z = sample()
        if all(abs(z - p) >= min_sep for p in pts + list(avoid)):
            pts.append(z)
    if len(pts) < k:
        raise RuntimeError("could not place well separated punctures")
    return pts


def random_sphere(
    rng: np.random.Generator,
    n: int,
    order: int = DEFAULT_ORDER,
    radius: tuple[float, float] = (0.5, 2.0),
    min_sep: float = 0.5,
    scale: tuple[float, float] = (20.0, 40.0),
    coef: float = 0.3,
) -> SphereElement:
    """Random element of ``K(n)`` with punctures in an annulus around 0."""

    def sample() -> complex:
        r = rng.uniform(*radius)
        return r * np.exp(1j * rng.uniform(0, 2 * np.pi))

    pts = _spread_points(rng, n - 1, sample, min_sep, avoid=(0j,))
    coords = tuple(random_coord(rng, order, scale, coef) for _ in range(n))
    A0 = rng.uniform(-coef, coef, order) + 1j * rng.uniform(-coef, coef, order)
    return SphereElement(tuple(pts), tuple(A0), coords)


def random_disk(
    rng: np.random.Generator,
    m: int,
    l: int,
    order: int = DEFAULT_ORDER,
    radius: tuple[float, float] = (0.5, 2.0),
    min_sep: float = 0.5,
    scale: tuple[float, float] = (20.0, 40.0),
    coef: float = 0.3,
) -> DiskElement:
    """Random element of ``Υ(m; l)`` (``m >= 1``)."""
    if m < 1:
        raise ValueError("random disks need m >= 1")

    def sample_r() -> complex:
        return complex(rng.choice([-1.0, 1.0]) * rng.uniform(*radius))

    def sample_z() -> complex:
        # keep away from the real axis so that z and its mirror image stay apart
        return complex(rng.uniform(-radius[1], radius[1]), rng.uniform(0.4, 0.8 * radius[1]))

    rs = _spread_points(rng, m - 1, sample_r, min_sep, avoid=(0j,))
    zs = _spread_points(rng, l, sample_z, min_sep, avoid=tuple(rs) + (0j,))
    bcoords = tuple(random_coord(rng, order, scale, coef, real=True) for _ in range(m))
    icoords = tuple(random_coord(rng, order, scale, coef) for _ in range(l))
    B0 = rng.uniform(-coef, coef, order)
    return DiskElement(tuple(r.real for r in rs), tuple(B0), bcoords, tuple(zs), icoords)
