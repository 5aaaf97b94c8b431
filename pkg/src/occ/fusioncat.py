"""Skeletal braided fusion categories and block-matrix morphisms.

Data conventions (multiplicity-free):

* ``F(a, b, c, d, e, f)`` is the recoupling coefficient
  ``|(a b)_e c; d> = sum_f F^{abc}_d[e, f] |a (b c)_f; d>``;
* ``R(a, b, c)`` is the braiding eigenvalue of ``c_{a,b}: a⊗b -> b⊗a`` on the
  fusion channel ``c``;
* ``theta(a)`` is the twist.

Objects are finite collections of fusion trees, one list per total label.  A
tree is one of

* ``('L', label, tag)`` -- a simple summand of an atomic object (``tag``
  distinguishes copies);
* ``('U',)`` -- the tensor unit;
* ``('N', left, right, label)`` -- the channel ``label`` of ``left ⊗ right``.

Morphisms are block matrices, one block per total label.  Because every
structure morphism (associator, braiding, twist, unit isomorphisms) only looks
at the root labels of subtrees, tensor products of morphisms need no
recoupling: the basis of ``X ⊗ Y`` is built from pairs of basis trees.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "CategoryError",
    "CoherenceError",
    "MultiplicityError",
    "CategoryData",
    "Obj",
    "Morphism",
    "load_category",
    "category_from_dict",
    "category_to_dict",
    "shipped_categories",
    "coherence_report",
    "CheckResult",
]

Label = Hashable
Tree = tuple


class CategoryError(ValueError):
    """Schema or shape error in category data or morphisms."""


class CoherenceError(CategoryError):
    """Category data violates a coherence identity."""


class MultiplicityError(NotImplementedError):
    """Fusion multiplicities larger than one are stored but not computed with."""


@dataclass(frozen=True)
class CheckResult:
    check: str
    residual: float
    threshold: float
    paper_ref: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.threshold)

    def as_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "paper_ref": self.paper_ref,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# category data
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CategoryData:
    """Skeletal braided fusion category data."""

    labels: tuple[Label, ...]
    unit: Label
    dual: Mapping[Label, Label]
    fusion: Mapping[tuple[Label, Label, Label], int]
    Fsym: Mapping[tuple, complex]
    Rsym: Mapping[tuple[Label, Label, Label], complex]
    theta_sym: Mapping[Label, complex]
    name: str = ""
    _outcomes: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.unit not in self.labels:
            raise CategoryError("unit label missing")
        for a in self.labels:
            for b in self.labels:
                self._outcomes[(a, b)] = tuple(c for c in self.labels if self.N(a, b, c) > 0)

    # -- fusion ---------------------------------------------------------------
    def N(self, a: Label, b: Label, c: Label) -> int:
        return int(self.fusion.get((a, b, c), 0))

    def outcomes(self, a: Label, b: Label) -> tuple[Label, ...]:
        return self._outcomes[(a, b)]

    @property
    def multiplicity_free(self) -> bool:
        return all(v <= 1 for v in self.fusion.values())

    def require_multiplicity_free(self) -> None:
        if not self.multiplicity_free:
            raise MultiplicityError("computations with fusion multiplicities > 1 are not implemented")

    # -- symbols --------------------------------------------------------------
    def F(self, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> complex:
        if not (self.N(a, b, e) and self.N(e, c, d) and self.N(b, c, f) and self.N(a, f, d)):
            return 0.0
        if self.unit in (a, b, c):
            return 1.0
        return complex(self.Fsym.get((a, b, c, d, e, f), 0.0))

    def F_matrix(self, a: Label, b: Label, c: Label, d: Label) -> tuple[np.ndarray, list, list]:
        """``F^{abc}_d`` with row labels ``e`` and column labels ``f``."""
        es = [e for e in self.labels if self.N(a, b, e) and self.N(e, c, d)]
        fs = [f for f in self.labels if self.N(b, c, f) and self.N(a, f, d)]
        M = np.array([[self.F(a, b, c, d, e, f) for f in fs] for e in es], dtype=complex).reshape(len(es), len(fs))
        return M, es, fs

    def R(self, a: Label, b: Label, c: Label) -> complex:
        if not self.N(a, b, c):
            return 0.0
        if self.unit in (a, b):
            return 1.0
        return complex(self.Rsym[(a, b, c)])

    def theta(self, a: Label) -> complex:
        if a == self.unit:
            return 1.0
        return complex(self.theta_sym[a])

    # -- objects --------------------------------------------------------------
    def simple(self, a: Label, tag: Hashable = 0) -> "Obj":
        if a not in self.labels:
            raise CategoryError(f"unknown label {a!r}")
        return Obj(self, {a: (("L", a, tag),)})

    def direct_sum(self, summands: Iterable[tuple[Label, Hashable]]) -> "Obj":
        """Atomic object ``⊕ label`` with the given ``(label, tag)`` summands."""
        basis: dict[Label, list[Tree]] = {}
        for a, tag in summands:
            if a not in self.labels:
                raise CategoryError(f"unknown label {a!r}")
            basis.setdefault(a, []).append(("L", a, tag))
        return Obj(self, {k: tuple(v) for k, v in basis.items()})

    def unit_obj(self) -> "Obj":
        return Obj(self, {self.unit: (("U",),)})

    def tensor(self, X: "Obj", Y: "Obj") -> "Obj":
        self.require_multiplicity_free()
        basis: dict[Label, list[Tree]] = {}
        for a, txs in X.basis.items():
            for b, tys in Y.basis.items():
                for c in self.outcomes(a, b):
                    lst = basis.setdefault(c, [])
                    for tx in txs:
                        for ty in tys:
                            lst.append(("N", tx, ty, c))
        return Obj(self, {k: tuple(v) for k, v in basis.items()})

    def tensor_many(self, *objs: "Obj") -> "Obj":
        """Left-combed tensor product ``((X1 ⊗ X2) ⊗ X3) ⊗ ...``."""
        out = objs[0]
        for o in objs[1:]:
            out = self.tensor(out, o)
        return out

    def root(self, t: Tree) -> Label:
        return tree_root(t, self.unit)

    # -- morphisms ------------------------------------------------------------
    def identity(self, X: "Obj") -> "Morphism":
        return Morphism(X, X, {a: np.eye(len(ts), dtype=complex) for a, ts in X.basis.items()})

    def from_tree_map(self, src: "Obj", tgt: "Obj", fn: Callable[[Tree], Iterable[tuple[Tree, complex]]]) -> "Morphism":
        """Morphism sending each source tree to a combination of target trees."""
        blocks = {a: np.zeros((len(tgt.basis.get(a, ())), len(ts)), dtype=complex) for a, ts in src.basis.items()}
        for a, ts in src.basis.items():
            for j, t in enumerate(ts):
                for t2, coef in fn(t):
                    if coef == 0:
                        continue
                    b = self.root(t2)
                    if b != a:
                        raise CategoryError("tree map does not preserve the total label")
                    blocks[a][tgt.index(t2), j] += coef
        return Morphism(src, tgt, blocks)

    def associator(self, X: "Obj", Y: "Obj", Z: "Obj") -> "Morphism":
        """``α: (X ⊗ Y) ⊗ Z -> X ⊗ (Y ⊗ Z)``."""
        src = self.tensor(self.tensor(X, Y), Z)
        tgt = self.tensor(X, self.tensor(Y, Z))

        def fn(t: Tree) -> Iterator[tuple[Tree, complex]]:
            _, xy, tz, d = t
            _, tx, ty, e = xy
            a, b, c = self.root(tx), self.root(ty), self.root(tz)
            for f in self.outcomes(b, c):
                coef = self.F(a, b, c, d, e, f)
                if coef != 0:
                    yield ("N", tx, ("N", ty, tz, f), d), coef

        return self.from_tree_map(src, tgt, fn)

    def associator_inv(self, X: "Obj", Y: "Obj", Z: "Obj") -> "Morphism":
        return self.associator(X, Y, Z).inverse()

    def braiding(self, X: "Obj", Y: "Obj", sign: int = 1) -> "Morphism":
        """``c_{X,Y}: X ⊗ Y -> Y ⊗ X`` (``sign=+1``) or ``c_{Y,X}^{-1}`` (``sign=-1``)."""
        if sign == -1:
            return self.braiding(Y, X, 1).inverse()
        if sign != 1:
            raise ValueError("sign must be +1 or -1")
        src = self.tensor(X, Y)
        tgt = self.tensor(Y, X)

        def fn(t: Tree) -> Iterator[tuple[Tree, complex]]:
            _, tx, ty, c = t
            yield ("N", ty, tx, c), self.R(self.root(tx), self.root(ty), c)

        return self.from_tree_map(src, tgt, fn)

    def twist(self, X: "Obj") -> "Morphism":
        return Morphism(X, X, {a: self.theta(a) * np.eye(len(ts), dtype=complex) for a, ts in X.basis.items()})

    def left_unitor(self, X: "Obj") -> "Morphism":
        """``l_X: 1 ⊗ X -> X`` (identity in the skeletal gauge)."""
        src = self.tensor(self.unit_obj(), X)
        return self.from_tree_map(src, X, lambda t: [(t[2], 1.0)])

    def right_unitor(self, X: "Obj") -> "Morphism":
        """``r_X: X ⊗ 1 -> X``."""
        src = self.tensor(X, self.unit_obj())
        return self.from_tree_map(src, X, lambda t: [(t[1], 1.0)])


def tree_root(t: Tree, unit: Label) -> Label:
    kind = t[0]
    if kind == "L":
        return t[1]
    if kind == "U":
        return unit
    return t[3]


# ---------------------------------------------------------------------------
# objects and morphisms
# ---------------------------------------------------------------------------


class Obj:
    """A finite object given by its fusion-tree basis per total label."""

    __slots__ = ("cat", "basis", "_index", "_hash")

    def __init__(self, cat: CategoryData, basis: Mapping[Label, Sequence[Tree]]):
        self.cat = cat
        self.basis = {a: tuple(ts) for a, ts in basis.items() if len(ts)}
        self._index = {t: i for ts in self.basis.values() for i, t in enumerate(ts)}
        self._hash = hash(tuple(sorted(((repr(a), ts) for a, ts in self.basis.items()), key=repr)))

    def index(self, t: Tree) -> int:
        try:
            return self._index[t]
        except KeyError:
            raise CategoryError(f"tree {t!r} is not in the basis") from None

    def dim(self, a: Label) -> int:
        return len(self.basis.get(a, ()))

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(self.basis)

    def multiplicities(self) -> dict[Label, int]:
        return {a: len(ts) for a, ts in self.basis.items()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Obj) and self.basis == other.basis

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Obj({self.multiplicities()})"

    def restrict(self, keep: Callable[[Tree], bool]) -> "Obj":
        return Obj(self.cat, {a: tuple(t for t in ts if keep(t)) for a, ts in self.basis.items()})


class Morphism:
    """Block-diagonal linear map between two objects."""

    __slots__ = ("src", "tgt", "blocks")

    def __init__(self, src: Obj, tgt: Obj, blocks: Mapping[Label, np.ndarray]):
        self.src = src
        self.tgt = tgt
        out = {}
        for a in set(src.basis) | set(tgt.basis):
            shape = (tgt.dim(a), src.dim(a))
            B = blocks.get(a)
            B = np.zeros(shape, dtype=complex) if B is None else np.asarray(B, dtype=complex)
            if B.shape != shape:
                raise CategoryError(f"block for {a!r} has shape {B.shape}, expected {shape}")
            out[a] = B
        self.blocks = out

    @property
    def cat(self) -> CategoryData:
        return self.src.cat

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self ∘ other``."""
        if other.tgt != self.src:
            raise CategoryError("composition of morphisms with mismatched objects")
        return Morphism(other.src, self.tgt, {a: self.blocks[a] @ other.blocks[a] for a in self.blocks if a in other.blocks})

    def __add__(self, other: "Morphism") -> "Morphism":
        self._same_shape(other)
        return Morphism(self.src, self.tgt, {a: self.blocks[a] + other.blocks[a] for a in self.blocks})

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._same_shape(other)
        return Morphism(self.src, self.tgt, {a: self.blocks[a] - other.blocks[a] for a in self.blocks})

    def __rmul__(self, s: complex) -> "Morphism":
        return Morphism(self.src, self.tgt, {a: s * B for a, B in self.blocks.items()})

    def _same_shape(self, other: "Morphism") -> None:
        if self.src != other.src or self.tgt != other.tgt:
            raise CategoryError("morphisms have different source or target")

    def inverse(self) -> "Morphism":
        blocks = {}
        for a, B in self.blocks.items():
            if B.shape[0] != B.shape[1]:
                raise CategoryError("morphism is not invertible (non-square block)")
            blocks[a] = np.linalg.inv(B)
        return Morphism(self.tgt, self.src, blocks)

    def norm(self) -> float:
        return float(max((np.max(np.abs(B)) for B in self.blocks.values() if B.size), default=0.0))

    def distance(self, other: "Morphism") -> float:
        self._same_shape(other)
        return (self - other).norm()

    def tensor(self, other: "Morphism") -> "Morphism":
        """``self ⊗ other`` on the pair-tree bases."""
        cat = self.cat
        src = cat.tensor(self.src, other.src)
        tgt = cat.tensor(self.tgt, other.tgt)

        def fn(t: Tree) -> Iterator[tuple[Tree, complex]]:
            _, tx, ty, c = t
            a, b = cat.root(tx), cat.root(ty)
            col_f = self.blocks[a][:, self.src.index(tx)]
            col_g = other.blocks[b][:, other.src.index(ty)]
            for i, u in enumerate(self.tgt.basis.get(a, ())):
                if col_f[i] == 0:
                    continue
                for j, v in enumerate(other.tgt.basis.get(b, ())):
                    if col_g[j] != 0:
                        yield ("N", u, v, c), col_f[i] * col_g[j]

        return cat.from_tree_map(src, tgt, fn)

    def __repr__(self) -> str:
        return f"Morphism({self.src!r} -> {self.tgt!r})"


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _cnum(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise CategoryError(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def category_from_dict(d: Mapping[str, Any], name: str = "") -> CategoryData:
    """Build :class:`CategoryData` from the JSON schema (no coherence check)."""
    try:
        labels = tuple(str(x) for x in d["labels"])
        unit = str(d["unit"])
        dual = {str(k): str(v) for k, v in d.get("dual", {}).items()} or {a: a for a in labels}
        fusion = {}
        for a, b, c, n in d["fusion"]:
            fusion[(str(a), str(b), str(c))] = int(n)
        Fs = {}
        for entry in d.get("F", []):
            a, b, c, dd = (str(x) for x in entry["abcd"])
            Fs[(a, b, c, dd, str(entry["e"]), str(entry["f"]))] = _cnum(entry["v"])
        Rs = {}
        for entry in d.get("R", []):
            a, b = (str(x) for x in entry["ab"])
            Rs[(a, b, str(entry["c"]))] = _cnum(entry["v"])
        theta = {str(k): _cnum(v) for k, v in d.get("theta", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise CategoryError(f"malformed category data: {exc}") from exc
    unknown = {x for key in fusion for x in key} - set(labels)
    if unknown:
        raise CategoryError(f"fusion rules mention unknown labels {sorted(unknown)}")
    cat = CategoryData(labels, unit, dual, fusion, Fs, Rs, theta, name or str(d.get("name", "")))
    _check_unit_fusion(cat)
    for a in labels:
        for b in labels:
            for c in cat.outcomes(a, b):
                if unit not in (a, b) and (a, b, c) not in Rs:
                    raise CategoryError(f"missing R symbol for {(a, b, c)}")
        if a != unit and a not in theta:
            raise CategoryError(f"missing twist for {a!r}")
    return cat


def _check_unit_fusion(cat: CategoryData) -> None:
    u = cat.unit
    for a in cat.labels:
        for b in cat.labels:
            want = int(a == b)
            if cat.N(u, a, b) != want or cat.N(a, u, b) != want:
                raise CategoryError("unit fusion rules violated")


def category_to_dict(cat: CategoryData) -> dict[str, Any]:
    def c2j(z: complex) -> list[float]:
        z = complex(z)
        return [z.real, z.imag]

    return {
        "name": cat.name,
        "labels": list(cat.labels),
        "unit": cat.unit,
        "dual": dict(cat.dual),
        "fusion": [[a, b, c, n] for (a, b, c), n in cat.fusion.items()],
        "F": [{"abcd": list(k[:4]), "e": k[4], "f": k[5], "v": c2j(v)} for k, v in cat.Fsym.items()],
        "R": [{"ab": [a, b], "c": c, "v": c2j(v)} for (a, b, c), v in cat.Rsym.items()],
        "theta": {a: c2j(v) for a, v in cat.theta_sym.items()},
    }


SHIPPED = ("trivial", "z2_q1", "z2_qm1", "z2_qi", "z2_qmi", "fib", "ising")


def _data_path(name: str) -> Any:
    return resources.files("occ").joinpath("data", name)


def load_category(source: str | Path | Mapping[str, Any], check: bool = True) -> CategoryData:
    """Load category data from a dict, a file path, or a shipped dataset name.

    With ``check=True`` the coherence identities are verified and
    :class:`CoherenceError` is raised with the first failing record.
    """
    if isinstance(source, Mapping):
        cat = category_from_dict(source)
    else:
        s = str(source)
        p = Path(s)
        if not p.exists():
            stem = p.name[:-5] if p.name.endswith(".json") else p.name
            res = _data_path(f"{stem}.json")
            if not res.is_file():
                raise CategoryError(f"no category data at {s!r}")
            text = res.read_text()
            name = stem
        else:
            text = p.read_text()
            name = p.stem
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CategoryError(f"invalid JSON: {exc}") from exc
        cat = category_from_dict(d, name=name)
    if check:
        bad = [r for r in coherence_report(cat) if not r.passed]
        if bad:
            raise CoherenceError(f"{bad[0].check} fails with residual {bad[0].residual:.3e} ({bad[0].detail})")
    return cat


def shipped_categories() -> dict[str, CategoryData]:
    return {n: load_category(n, check=False) for n in SHIPPED}


# ---------------------------------------------------------------------------
# coherence
# ---------------------------------------------------------------------------


def _worst(items: Iterable[tuple[float, str]]) -> tuple[float, str]:
    best = (0.0, "")
    for r, where in items:
        if not np.isfinite(r):
            return float("inf"), where
        if r > best[0]:
            best = (r, where)
    return best


def pentagon_residual(cat: CategoryData) -> tuple[float, str]:
    """``F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]``."""
    L = cat.labels
    F = cat.F

    def gen() -> Iterator[tuple[float, str]]:
        for a, b, c, d in itertools.product(L, repeat=4):
            for f in cat.outcomes(a, b):
                for g in cat.outcomes(f, c):
                    for e in cat.outcomes(g, d):
                        for l in cat.outcomes(c, d):
                            for k in cat.outcomes(b, l):
                                if not cat.N(a, k, e):
                                    continue
                                lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k)
                                rhs = sum(
                                    F(a, b, c, g, f, h) * F(a, h, d, e, g, k) * F(b, c, d, k, h, l) for h in L
                                )
                                yield abs(lhs - rhs), f"pentagon a,b,c,d,e,f,g,k,l={(a, b, c, d, e, f, g, k, l)}"

    return _worst(gen())


def hexagon_residual(cat: CategoryData, inverse: bool = False) -> tuple[float, str]:
    """``R^{ca}_e F^{acb}_d[e,g] R^{cb}_g = sum_f F^{cab}_d[e,f] R^{cf}_d F^{abc}_d[f,g]`` (or with ``R^{-1}``)."""
    L = cat.labels
    F = cat.F

    def R(x: Label, y: Label, z: Label) -> complex:
        r = cat.R(x, y, z)
        if not inverse:
            return r
        # inverse braiding c_{y,x}^{-1} restricted to channel z
        return 1.0 / cat.R(y, x, z) if cat.N(y, x, z) else 0.0

    def gen() -> Iterator[tuple[float, str]]:
        for a, b, c in itertools.product(L, repeat=3):
            for e in cat.outcomes(c, a):
                for d in cat.outcomes(e, b):
                    for g in cat.outcomes(c, b):
                        if not cat.N(a, g, d):
                            continue
                        lhs = R(c, a, e) * F(a, c, b, d, e, g) * R(c, b, g)
                        rhs = sum(F(c, a, b, d, e, f) * R(c, f, d) * F(a, b, c, d, f, g) for f in cat.outcomes(a, b))
                        yield abs(lhs - rhs), f"hexagon{'-' if inverse else '+'} a,b,c,d,e,g={(a, b, c, d, e, g)}"

    return _worst(gen())


def ribbon_residual(cat: CategoryData) -> tuple[float, str]:
    """``R^{ba}_c R^{ab}_c = θ_c / (θ_a θ_b)`` on every channel."""

    def gen() -> Iterator[tuple[float, str]]:
        for a, b in itertools.product(cat.labels, repeat=2):
            for c in cat.outcomes(a, b):
                lhs = cat.R(b, a, c) * cat.R(a, b, c)
                rhs = cat.theta(c) / (cat.theta(a) * cat.theta(b))
                yield abs(lhs - rhs), f"ribbon a,b,c={(a, b, c)}"

    return _worst(gen())


def unitarity_of_F_residual(cat: CategoryData) -> tuple[float, str]:
    """Invertibility of every ``F^{abc}_d`` (condition number check)."""

    def gen() -> Iterator[tuple[float, str]]:
        for a, b, c, d in itertools.product(cat.labels, repeat=4):
            M, es, fs = cat.F_matrix(a, b, c, d)
            if M.size == 0:
                continue
            if M.shape[0] != M.shape[1]:
                yield float("inf"), f"F^{a}{b}{c}_{d} not square"
                continue
            s = np.linalg.svd(M, compute_uv=False)
            yield (float("inf") if s[-1] < 1e-12 else 0.0), f"F {(a, b, c, d)}"

    return _worst(gen())


def _morphism_level(cat: CategoryData) -> dict[str, tuple[float, str]]:
    """Pentagon, both hexagons and the triangle as morphism identities on simple objects."""
    S = {a: cat.simple(a) for a in cat.labels}
    T = cat.tensor
    I = cat.identity
    pent = []
    for w, x, y, z in itertools.product(cat.labels, repeat=4):
        W, X, Y, Z = S[w], S[x], S[y], S[z]
        lhs = cat.associator(W, X, T(Y, Z)) @ cat.associator(T(W, X), Y, Z)
        rhs = I(W).tensor(cat.associator(X, Y, Z)) @ cat.associator(W, T(X, Y), Z) @ cat.associator(W, X, Y).tensor(I(Z))
        pent.append((lhs.distance(rhs), f"pentagon {(w, x, y, z)}"))
    hex1, hex2 = [], []
    for x, y, z in itertools.product(cat.labels, repeat=3):
        X, Y, Z = S[x], S[y], S[z]
        for sign, acc in ((1, hex1), (-1, hex2)):
            c = lambda A, B: cat.braiding(A, B, sign)  # noqa: E731
            lhs = cat.associator(Y, Z, X) @ c(X, T(Y, Z)) @ cat.associator(X, Y, Z)
            rhs = I(Y).tensor(c(X, Z)) @ cat.associator(Y, X, Z) @ c(X, Y).tensor(I(Z))
            acc.append((lhs.distance(rhs), f"hexagon {(x, y, z)}"))
            lhs = cat.associator_inv(Z, X, Y) @ c(T(X, Y), Z) @ cat.associator_inv(X, Y, Z)
            rhs = c(X, Z).tensor(I(Y)) @ cat.associator_inv(X, Z, Y) @ I(X).tensor(c(Y, Z))
            acc.append((lhs.distance(rhs), f"hexagon' {(x, y, z)}"))
    tri = []
    U = cat.unit_obj()
    for x, y in itertools.product(cat.labels, repeat=2):
        X, Y = S[x], S[y]
        lhs = I(X).tensor(cat.left_unitor(Y)) @ cat.associator(X, U, Y)
        rhs = cat.right_unitor(X).tensor(I(Y))
        tri.append((lhs.distance(rhs), f"triangle {(x, y)}"))
    return {
        "pentagon-morphism": _worst(pent),
        "hexagon-morphism": _worst(hex1),
        "hexagon-inverse-morphism": _worst(hex2),
        "triangle": _worst(tri),
    }


def coherence_report(cat: CategoryData, tol: float = 1e-9, morphism_level: bool = True) -> list[CheckResult]:
    """All coherence checks on the data (index level and, optionally, via the morphism engine)."""
    name = cat.name or "category"
    refs = {
        "pentagon": "§3.1 associativity isomorphism (pentagon)",
        "hexagon+": "eq. (R-+-cat), braiding isomorphism (hexagon)",
        "hexagon-": "eq. (R---cat), inverse braiding (hexagon)",
        "ribbon": "§3.1 twist θ_W = e^{-2πiL(0)} (ribbon relation)",
        "F-invertible": "§3.1 associativity isomorphism",
        "pentagon-morphism": "§3.1 associativity isomorphism (pentagon)",
        "hexagon-morphism": "eq. (R-+-cat), braiding isomorphism (hexagon)",
        "hexagon-inverse-morphism": "eq. (R---cat), inverse braiding (hexagon)",
        "triangle": "eqs. (l-unit-cat)/(r-unit-cat), unit isomorphisms",
    }
    results = {
        "pentagon": pentagon_residual(cat),
        "hexagon+": hexagon_residual(cat, False),
        "hexagon-": hexagon_residual(cat, True),
        "ribbon": ribbon_residual(cat),
        "F-invertible": unitarity_of_F_residual(cat),
    }
    if morphism_level and cat.multiplicity_free:
        results.update(_morphism_level(cat))
    return [CheckResult(f"{name}:{k}", r, tol, refs[k], where) for k, (r, where) in results.items()]
