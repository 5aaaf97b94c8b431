"""Solve for multiplication scalars of the shipped candidate algebras and write them to src/occ/data.

Unit channels are fixed to 1; the remaining per-channel scalars are found by
least squares on the associativity residual (then the solution is rounded to
the nearest nice value when one is within 1e-12).
"""

import itertools
import json
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

from occ.fusioncat import load_category
from occ.openclosed import algebra_from_scalars, algebra_to_dict, check_algebra, square_category

OUT = Path(__file__).resolve().parents[1] / "src" / "occ" / "data"


def assoc_vector(cat, labels, mu):
    A = algebra_from_scalars(cat, labels, mu)
    X, m = A.obj, A.mu
    I = cat.identity(X)
    D = m @ m.tensor(I) @ cat.associator_inv(X, X, X) - m @ I.tensor(m)
    return np.concatenate([B.ravel() for B in D.blocks.values()])


def solve(cat, labels, seed=0):
    keys = [
        (a, b, c)
        for a, b in itertools.product(labels, labels)
        if cat.unit not in (a, b)
        for c in cat.outcomes(a, b)
        if c in labels
    ]
    rng = np.random.default_rng(seed)

    def unpack(x):
        z = x[: len(keys)] + 1j * x[len(keys):]
        return dict(zip(keys, z))

    def fun(x):
        r = assoc_vector(cat, labels, unpack(x))
        # fix the normalisation: every channel into the unit has modulus one
        extra = [abs(v) - 1 for (a, b, c), v in unpack(x).items() if c == cat.unit]
        return np.concatenate([r.real, r.imag, extra])

    best = None
    for _ in range(20):
        x0 = np.concatenate([rng.normal(size=len(keys)) + 1, np.zeros(len(keys))])
        sol = least_squares(fun, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or sol.cost < best.cost:
            best = sol
        if best.cost < 1e-28:
            break
    mu = unpack(best.x)
    mu = {k: _nice(v) for k, v in mu.items()}
    return mu


def _nice(v):
    v = complex(v)
    # fix the overall phase so real solutions stay real
    for cand in (v.real, ):
        if abs(v.imag) < 1e-12:
            v = complex(cand, 0.0)
    for r in (0.0, 1.0, -1.0):
        if abs(v.real - r) < 1e-12:
            v = complex(r, v.imag)
    return v


def write(name, base_name, square, labels, mu):
    base = load_category(base_name)
    cat = square_category(base) if square else base
    A = algebra_from_scalars(cat, labels, mu, name=name)
    res = max(r.residual for r in check_algebra(A))
    d = algebra_to_dict(A, f"{base_name}.json")
    (OUT / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")
    print(f"{name}: associativity/unit residual {res:.2e}")


def main():
    write("alg_trivial_unit", "trivial", True, [("1", "1")], {})
    ising = load_category("ising")
    fib = load_category("fib")
    sq_i, sq_f = square_category(ising), square_category(fib)
    cases = [
        ("alg_ising_1psi", "ising", False, ising, ["1", "p"]),
        ("alg_ising_diag_1psi", "ising", True, sq_i, [("1", "1"), ("p", "p")]),
        ("alg_ising_diag", "ising", True, sq_i, [("1", "1"), ("p", "p"), ("s", "s")]),
        ("alg_fib_diag", "fib", True, sq_f, [("1", "1"), ("t", "t")]),
        ("alg_ising_noncomm", "ising", True, sq_i, [("1", "1"), ("p", "1")]),
        ("alg_fib_twist", "fib", True, sq_f, [("1", "1"), ("t", "1")]),
    ]
    for name, base_name, square, cat, labels in cases:
        write(name, base_name, square, labels, solve(cat, labels))


if __name__ == "__main__":
    main()
