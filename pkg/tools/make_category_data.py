"""Regenerate the shipped category datasets under src/occ/data.

Fibonacci and Ising data are the standard unitary solutions of the pentagon
and hexagon equations; the pointed Z2 family is parametrised by the twist q.
"""

import cmath
import itertools
import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "occ" / "data"


def c2j(z):
    z = complex(z)
    return [z.real, z.imag]


def dump(name, labels, unit, fusion, F, R, theta, dual=None):
    d = {
        "name": name,
        "labels": labels,
        "unit": unit,
        "dual": dual or {a: a for a in labels},
        "fusion": [[a, b, c, 1] for (a, b, c) in fusion],
        "F": [{"abcd": [a, b, c, dd], "e": e, "f": f, "v": c2j(v)} for (a, b, c, dd, e, f), v in F.items()],
        "R": [{"ab": [a, b], "c": c, "v": c2j(v)} for (a, b, c), v in R.items()],
        "theta": {a: c2j(v) for a, v in theta.items()},
    }
    (OUT / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")


def all_F(labels, unit, fusion, special, default=1.0):
    N = set(fusion)
    F = {}
    for a, b, c, d, e, f in itertools.product(labels, repeat=6):
        if unit in (a, b, c):
            continue
        if (a, b, e) in N and (e, c, d) in N and (b, c, f) in N and (a, f, d) in N:
            F[(a, b, c, d, e, f)] = special.get((a, b, c, d, e, f), default)
    return F


def all_R(labels, unit, fusion, special):
    return {(a, b, c): special[(a, b, c)] for (a, b, c) in fusion if unit not in (a, b)}


dump("trivial", ["1"], "1", [("1", "1", "1")], {}, {}, {})

for tag, q in (("q1", 1), ("qm1", -1), ("qi", 1j), ("qmi", -1j)):
    labels = ["0", "1"]
    fusion = [(a, b, str((int(a) + int(b)) % 2)) for a in labels for b in labels]
    F = all_F(labels, "0", fusion, {("1", "1", "1", "1", "0", "0"): q * q})
    R = all_R(labels, "0", fusion, {("1", "1", "0"): q})
    dump(f"z2_{tag}", labels, "0", fusion, F, R, {"1": q})

phi = (1 + math.sqrt(5)) / 2
labels = ["1", "t"]
fusion = [("1", "1", "1"), ("1", "t", "t"), ("t", "1", "t"), ("t", "t", "1"), ("t", "t", "t")]
F = all_F(labels, "1", fusion, {
    ("t", "t", "t", "t", "1", "1"): 1 / phi,
    ("t", "t", "t", "t", "1", "t"): phi ** -0.5,
    ("t", "t", "t", "t", "t", "1"): phi ** -0.5,
    ("t", "t", "t", "t", "t", "t"): -1 / phi,
})
R = all_R(labels, "1", fusion, {("t", "t", "1"): cmath.exp(-4j * math.pi / 5), ("t", "t", "t"): cmath.exp(3j * math.pi / 5)})
dump("fib", labels, "1", fusion, F, R, {"t": cmath.exp(4j * math.pi / 5)})

labels = ["1", "s", "p"]
rules = {("s", "s"): ["1", "p"], ("s", "p"): ["s"], ("p", "s"): ["s"], ("p", "p"): ["1"]}
fusion = []
for a in labels:
    for b in labels:
        if a == "1":
            fusion.append((a, b, b))
        elif b == "1":
            fusion.append((a, b, a))
        else:
            fusion += [(a, b, c) for c in rules[(a, b)]]
r2 = 1 / math.sqrt(2)
F = all_F(labels, "1", fusion, {
    ("s", "s", "s", "s", "1", "1"): r2,
    ("s", "s", "s", "s", "1", "p"): r2,
    ("s", "s", "s", "s", "p", "1"): r2,
    ("s", "s", "s", "s", "p", "p"): -r2,
    ("s", "p", "s", "p", "s", "s"): -1,
    ("p", "s", "p", "s", "s", "s"): -1,
})
R = all_R(labels, "1", fusion, {
    ("s", "s", "1"): cmath.exp(-1j * math.pi / 8),
    ("s", "s", "p"): cmath.exp(3j * math.pi / 8),
    ("s", "p", "s"): -1j,
    ("p", "s", "s"): -1j,
    ("p", "p", "1"): -1,
})
dump("ising", labels, "1", fusion, F, R, {"s": cmath.exp(1j * math.pi / 8), "p": -1})
