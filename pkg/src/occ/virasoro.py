"""Truncated matrix representation of the Virasoro algebra on the vacuum module.

Basis vectors are PBW words ``L(-n_1) L(-n_2) ... L(-n_k) 1`` with
``n_1 >= n_2 >= ... >= n_k >= 2`` and total weight ``<= depth``.  The action of
``L(m)`` is computed exactly by commuting it to the right with

    [L(m), L(n)] = (m - n) L(m + n) - (c/12) (m^3 - m) delta_{m+n,0}

(the sign of the central term is the one used in the open-string vertex
algebra axioms we implement) and ``L(k) 1 = 0`` for ``k >= -1``.

Every matrix element of a single ``L(m)`` is affine in ``c`` (a central term
consumes the operator), so matrices are stored as pairs ``(M0, M1)`` with
``L(m) = M0 + c M1`` and cached per depth.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import expm

__all__ = [
    "VacuumModuleTrunc",
    "DomainError",
    "partitions_min2",
    "l_matrix",
    "exp_l",
    "l0_scale",
    "vacuum_amplitude",
    "CENTRAL_SIGN",
]

# Sign in front of (c/12)(m^3 - m) in the Virasoro commutator.
CENTRAL_SIGN = -1.0

Word = tuple[int, ...]


class DomainError(ValueError):
    """Raised for operator modes outside the truncation."""


def partitions_min2(depth: int) -> list[Word]:
    """All partitions with parts ``>= 2`` and weight ``<= depth``, ordered by weight."""
    out: list[Word] = []

    def gen(remaining: int, maxpart: int) -> list[Word]:
        if remaining == 0:
            return [()]
        res: list[Word] = []
        for p in range(min(remaining, maxpart), 1, -1):
            for tail in gen(remaining - p, p):
                res.append((p,) + tail)
        return res

    for w in range(depth + 1):
        # reverse-lexicographic order within a weight for readability
        out.extend(sorted(gen(w, w), reverse=True))
    return out


@lru_cache(maxsize=None)
def _apply(m: int, word: Word) -> tuple[tuple[Word, float, float], ...]:
    """``L(m)`` applied to a PBW word; coefficients are ``(const, c-coefficient)``."""
    acc: dict[Word, np.ndarray] = {}

    def add(w: Word, coef: np.ndarray) -> None:
        if w in acc:
            acc[w] = acc[w] + coef
        else:
            acc[w] = coef.copy()

    if not word:
        if m <= -2:
            add((-m,), np.array([1.0, 0.0]))
    elif -m >= word[0]:
        add((-m,) + word, np.array([1.0, 0.0]))
    else:
        n, rest = word[0], word[1:]
        # L(m) L(-n) R = L(-n) L(m) R + [L(m), L(-n)] R
        for w, a, b in _apply(m, rest):
            for w2, a2, b2 in _apply(-n, w):
                # coefficient (a + b c)(a2 + b2 c); b*b2 cannot both be nonzero
                add(w2, np.array([a * a2, a * b2 + b * a2]))
        if m + n != 0:
            for w, a, b in _apply(m - n, rest):
                add(w, (m + n) * np.array([a, b]))
        if m == n:
            central = CENTRAL_SIGN * (m**3 - m) / 12.0
            if central != 0.0:
                add(rest, np.array([0.0, central]))
    return tuple((w, float(v[0]), float(v[1])) for w, v in acc.items() if v[0] != 0.0 or v[1] != 0.0)


@lru_cache(maxsize=None)
def _matrix_pair(m: int, depth: int) -> tuple[np.ndarray, np.ndarray]:
    basis = partitions_min2(depth)
    index = {w: k for k, w in enumerate(basis)}
    dim = len(basis)
    m0 = np.zeros((dim, dim))
    m1 = np.zeros((dim, dim))
    for col, w in enumerate(basis):
        for w2, a, b in _apply(m, w):
            row = index.get(w2)
            if row is not None:
                m0[row, col] += a
                m1[row, col] += b
    m0.setflags(write=False)
    m1.setflags(write=False)
    return m0, m1


@dataclass(frozen=True)
class VacuumModuleTrunc:
    """Vacuum module truncated at conformal weight ``depth`` with central charge ``c``."""

    depth: int = 8
    c: complex = 0.0
    basis: tuple[Word, ...] = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise DomainError("depth must be nonnegative")
        basis = tuple(partitions_min2(self.depth))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "weights", np.array([sum(w) for w in basis], dtype=int))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, word: Sequence[int]) -> int:
        return self.basis.index(tuple(word))

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def l_matrix(n: int, M: VacuumModuleTrunc) -> np.ndarray:
    """Matrix of ``L(n)`` on the truncated basis."""
    if abs(n) > M.depth:
        raise DomainError(f"mode {n} beyond depth {M.depth}")
    m0, m1 = _matrix_pair(n, M.depth)
    return m0 + M.c * m1


def _l_sum(A: Sequence[complex], sign: int, M: VacuumModuleTrunc) -> np.ndarray:
    out = np.zeros((M.dim, M.dim), dtype=complex)
    for j, aj in enumerate(A, start=1):
        if j > M.depth:
            break
        if aj != 0:
            out += aj * l_matrix(sign * j, M)
    return out


def exp_l(A: Sequence[complex], sign: int | str, M: VacuumModuleTrunc) -> np.ndarray:
    """``exp(-L_±(A))`` with ``L_±(A) = sum_j A_j L(±j)``.

    Both operators are nilpotent on the truncated module (``L_+`` lowers and
    ``L_-`` raises the weight), so the exponential is exact at fixed depth.
    """
    s = 1 if sign in (1, "+") else -1 if sign in (-1, "-", "−") else None
    if s is None:
        raise ValueError(f"sign must be + or -, got {sign!r}")
    return expm(-_l_sum(A, s, M))


def l0_scale(a0: complex, M: VacuumModuleTrunc) -> np.ndarray:
    """``a0^{-L(0)}``: diagonal ``a0^{-w}`` with ``log`` taken on ``arg in [0, 2π)``."""
    if a0 == 0:
        raise DomainError("a0 must be nonzero")
    arg = cmath.phase(a0) % (2 * np.pi)
    log_a0 = complex(np.log(abs(a0)), arg)
    return np.diag(np.exp(-M.weights * log_a0))


def vacuum_amplitude(
    A: Sequence[complex], a0: complex, B: Sequence[complex], M: VacuumModuleTrunc
) -> complex:
    """``<0| exp(-L_+(A)) a0^{-L(0)} exp(-L_-(B)) |0>`` at the module's depth."""
    vac = M.vacuum()
    right = expm(-_l_sum(B, -1, M)) @ vac
    right = np.diag(l0_scale(a0, M)) * right
    left = vac @ expm(-_l_sum(A, 1, M))
    return complex(left @ right)
