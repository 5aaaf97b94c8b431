import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from occ import openclosed as oc
from occ.fusioncat import CategoryError, MultiplicityError, coherence_report, load_category

SQUARE_ALGEBRAS = [n for n in oc.SHIPPED_ALGEBRAS if oc.load_algebra(n).square]
COMMUTATIVE = ["alg_trivial_unit", "alg_ising_diag_1psi", "alg_ising_diag", "alg_fib_diag"]


def _raw(name):
    return json.loads(resources.files("occ.data").joinpath(f"{name}.json").read_text())


def _scalar_mu(name):
    """Structure constants read straight from the shipped JSON."""
    d = _raw(name)
    mu = {}
    for e in d["mu"]:
        key = tuple(tuple(e[k]) for k in "abc")
        mu[key] = complex(*e["v"])
    return [tuple(o[:2]) for o in d["object"]], mu


def _square_R(base, a, b, c):
    return base.R(a[0], b[0], c[0]) / base.R(b[1], a[1], c[1])


def _central_labels_oracle(name):
    """Summand ``a`` is left central iff μ(b,a,c)·R^{ab}_c = μ(a,b,c) in every channel."""
    labels, mu = _scalar_mu(name)
    base = load_category(_raw(name)["category"].removesuffix(".json"))
    out = []
    for a in labels:
        ok = True
        for b in labels:
            for c in labels:
                if base.N(a[0], b[0], c[0]) and base.N(a[1], b[1], c[1]):
                    lhs = mu.get((b, a, c), 0) * _square_R(base, a, b, c)
                    ok &= abs(lhs - mu.get((a, b, c), 0)) < 1e-9
        if ok:
            out.append(a)
    return out


# -- square category -----------------------------------------------------------


@pytest.mark.parametrize("name", ["fib", "ising", "z2_qi"])
def test_square_category_is_coherent(name):
    sq = oc.square_category(load_category(name))
    assert all(r.passed for r in coherence_report(sq, morphism_level=False))


@pytest.mark.parametrize("name", ["fib", "ising"])
def test_square_twist_and_braiding_formulas(name):
    base = load_category(name)
    sq = oc.square_category(base)
    for i in base.labels:
        for j in base.labels:
            np.testing.assert_allclose(sq.theta((i, j)), base.theta(i) / base.theta(j), atol=1e-14)
    for (a, b, c) in [(x, y, z) for x in sq.labels for y in sq.labels for z in sq.outcomes(x, y)]:
        np.testing.assert_allclose(sq.R(a, b, c), _square_R(base, a, b, c), atol=1e-14)


# -- algebras ------------------------------------------------------------------


def test_unit_algebra_is_exact():
    for cat in [load_category("fib"), oc.square_category(load_category("ising"))]:
        assert all(r.residual == 0 for r in oc.check_algebra(oc.unit_algebra(cat)))


@pytest.mark.parametrize("name", oc.SHIPPED_ALGEBRAS)
def test_shipped_algebras_are_associative_and_unital(name):
    res = oc.check_algebra(oc.load_algebra(name), tol=1e-10)
    assert [r.check for r in res] == ["associativity", "left-unit", "right-unit"]
    assert all(r.passed for r in res), res


def test_ising_one_plus_psi_from_fusion_scalars():
    ising = load_category("ising")
    A = oc.algebra_from_scalars(ising, ["1", "p"], {("p", "p", "1"): 1.0})
    assert max(r.residual for r in oc.check_algebra(A)) < 1e-10


def test_perturbed_mu_breaks_associativity():
    # rescaling ψψ->1 alone is a change of basis; a unit channel is not
    ising = load_category("ising")
    A = oc.algebra_from_scalars(ising, ["1", "p"], {("p", "p", "1"): 1.0, ("1", "p", "p"): 1.1})
    res = {r.check: r for r in oc.check_algebra(A)}
    assert res["associativity"].residual > 1e-3
    assert res["left-unit"].residual > 1e-3


def test_algebra_from_scalars_errors():
    ising = load_category("ising")
    with pytest.raises(MultiplicityError):
        oc.algebra_from_scalars(ising, ["1", "p", "p"], {})
    with pytest.raises(oc.AlgebraError, match="unit"):
        oc.algebra_from_scalars(ising, ["p"], {})


def test_algebra_object_shape_errors():
    A = oc.load_algebra("alg_ising_1psi")
    with pytest.raises(oc.AlgebraError):
        oc.AlgebraObject(A.obj, A.iota, A.iota)
    with pytest.raises(oc.AlgebraError):
        oc.AlgebraObject(A.obj, A.mu, A.mu)


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_commutative_algebras_pass_commutativity(name):
    res = oc.check_commutative_trivial_twist(oc.load_algebra(name), tol=1e-10)
    assert all(r.passed for r in res), res


def test_twist_flag_reports_sector():
    A = oc.load_algebra("alg_fib_twist")
    assert oc.nontrivial_twist_sectors(A) == [("t", "1")]
    res = {r.check: r for r in oc.check_commutative_trivial_twist(A)}
    tw = res["trivial-twist"]
    assert not tw.passed and "('t', '1')" in tw.detail
    theta = load_category("fib").theta("t")
    np.testing.assert_allclose(tw.residual, abs(theta - 1), rtol=1e-12)


def test_noncommutative_algebra_fails_commutativity():
    res = {r.check: r for r in oc.check_commutative_trivial_twist(oc.load_algebra("alg_ising_noncomm"))}
    assert res["commutativity"].residual > 1e-3


# -- JSON ----------------------------------------------------------------------


@pytest.mark.parametrize("name", oc.SHIPPED_ALGEBRAS)
def test_algebra_json_round_trip(name, tmp_path):
    A = oc.load_algebra(name)
    d = oc.algebra_to_dict(A, _raw(name)["category"])
    p = tmp_path / "a.json"
    p.write_text(json.dumps(d))
    B = oc.load_algebra(p)
    assert B.obj == A.obj
    assert B.mu.distance(A.mu) == 0 and B.iota.distance(A.iota) == 0


def test_load_algebra_rejects_multiplicity():
    d = _raw("alg_ising_1psi")
    d["object"][1][-1] = 2
    with pytest.raises(MultiplicityError):
        oc.load_algebra(d)


@pytest.mark.parametrize("mutate", [lambda d: d.pop("category"), lambda d: d.__setitem__("iota", "x"), lambda d: d.pop("object")])
def test_load_algebra_rejects_malformed(mutate):
    d = _raw("alg_ising_1psi")
    mutate(d)
    with pytest.raises((oc.AlgebraError, CategoryError)):
        oc.load_algebra(d)


# -- the functor T -------------------------------------------------------------


@pytest.fixture(scope="module")
def ising_sq():
    return oc.square_category(load_category("ising"))


def test_T_on_objects_and_identities(ising_sq):
    base = ising_sq.base
    X = ising_sq.direct_sum([(("s", "p"), 0), (("1", "s"), 0)])
    TX = oc.functor_T(X)
    assert TX.cat is base
    # T(s⊠p) = s⊗p = s and T(1⊠s) = s
    assert TX.multiplicities() == {"s": 2}
    assert oc.functor_T(ising_sq.identity(X)).distance(base.identity(TX)) == 0
    assert oc.functor_T(ising_sq.unit_obj()) == base.tensor(base.unit_obj(), base.unit_obj())


def test_T_type_errors(ising_sq):
    with pytest.raises(TypeError):
        oc.functor_T("not an object")
    with pytest.raises(oc.AlgebraError):
        oc.functor_T(load_category("ising").simple("s"))


def test_T_preserves_composition(ising_sq):
    X = ising_sq.direct_sum([(("s", "s"), 0), (("p", "1"), 0)])
    c = ising_sq.braiding(X, X)
    lhs = oc.functor_T(c @ c)
    rhs = oc.functor_T(c) @ oc.functor_T(c)
    assert lhs.distance(rhs) < 1e-13


def test_phi2_is_monoidal(ising_sq):
    base = ising_sq.base
    X = ising_sq.direct_sum([(("s", "1"), 0)])
    Y = ising_sq.direct_sum([(("s", "s"), 0)])
    Z = ising_sq.direct_sum([(("1", "s"), 0), (("p", "p"), 0)])
    T = oc.functor_T
    I = base.identity
    lhs = T(ising_sq.associator(X, Y, Z)) @ oc.phi2(ising_sq.tensor(X, Y), Z) @ oc.phi2(X, Y).tensor(I(T(Z)))
    rhs = oc.phi2(X, ising_sq.tensor(Y, Z)) @ I(T(X)).tensor(oc.phi2(Y, Z)) @ base.associator(T(X), T(Y), T(Z))
    assert lhs.distance(rhs) < 1e-12


def test_phi2_is_natural(ising_sq):
    X = ising_sq.direct_sum([(("s", "s"), 0)])
    Y = ising_sq.direct_sum([(("s", "p"), 0), (("p", "s"), 0)])
    f = ising_sq.twist(X)
    g = ising_sq.twist(Y) @ ising_sq.twist(Y)
    T = oc.functor_T
    lhs = T(f.tensor(g)) @ oc.phi2(X, Y)
    rhs = oc.phi2(X, Y) @ T(f).tensor(T(g))
    assert lhs.distance(rhs) < 1e-12


def test_sigma_on_units_is_identity(ising_sq):
    base = ising_sq.base
    U = base.unit_obj()
    s = oc.sigma(U, U, U, U)
    assert s.distance(base.identity(s.src)) < 1e-14
    S = base.simple("s")
    s1 = oc.sigma1(ising_sq.unit_obj(), S)
    # σ₁ with the unit closed object: (1⊗1)⊗S -> S⊗(1⊗1) through unitors only
    assert s1.src == base.tensor(base.tensor(U, U), S)
    l = base.left_unitor
    r = base.right_unitor
    expect = base.identity(S).tensor(l(U).inverse()) @ r(S).inverse() @ l(S) @ l(U).tensor(base.identity(S))
    assert s1.distance(expect) < 1e-13


def test_sigma_reduces_to_braidings(ising_sq):
    base = ising_sq.base
    U, S, P = base.unit_obj(), base.simple("s"), base.simple("p")
    r = base.right_unitor
    l = base.left_unitor
    # W2 = W4 = 1: only the over-crossing c_{W1,W3} survives
    lhs = oc.sigma(S, U, P, U)
    rhs = r(P).inverse().tensor(r(S).inverse()) @ base.braiding(S, P) @ r(S).tensor(r(P))
    assert lhs.distance(rhs) < 1e-13
    # W1 = W3 = 1: only the under-crossing c_{W4,W2}^{-1} survives
    lhs = oc.sigma(U, S, U, P)
    rhs = l(P).inverse().tensor(l(S).inverse()) @ base.braiding(P, S).inverse() @ l(S).tensor(l(P))
    assert lhs.distance(rhs) < 1e-13


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_T_algebra_is_commutative_wrt_sigma(name):
    res = oc.check_T_algebra(oc.load_algebra(name))
    assert [r.check for r in res] == ["T(A):associativity", "T(A):left-unit", "T(A):right-unit", "T(A):comm-T-cl"]
    assert all(r.residual < 1e-10 for r in res), res


def test_T_algebra_requires_square():
    with pytest.raises(oc.AlgebraError):
        oc.T_algebra(oc.load_algebra("alg_ising_1psi"))


# -- open-closed algebras ------------------------------------------------------


@pytest.mark.parametrize("name", ["trivial", "ising", "fib", "z2_qm1"])
def test_trivial_open_closed(name):
    X = oc.trivial_open_closed(load_category(name))
    assert all(r.residual < 1e-14 for r in oc.check_open_closed(X))
    assert all(r.residual < 1e-14 for r in oc.round_trip_residuals(X))


@pytest.mark.parametrize("name", SQUARE_ALGEBRAS)
def test_open_closed_from_left_center(name):
    X = oc.build_open_closed_from_center(oc.load_algebra(name))
    res = oc.check_open_closed(X)
    names = [r.check for r in res]
    for prefix in ["(a)", "(b)", "(c) iota-unit", "(c) iota-multiplicative", "(d) sigma1-commutativity"]:
        assert any(n.startswith(prefix) for n in names)
    assert max(r.residual for r in res) < 1e-9, [(r.check, r.residual) for r in res if not r.passed]
    assert max(r.residual for r in oc.round_trip_residuals(X)) < 1e-10
    assert max(r.residual for r in oc.check_mu_clop_axioms(X)) < 1e-9


def test_open_closed_shape_validation():
    X = oc.trivial_open_closed(load_category("ising"))
    with pytest.raises(oc.AlgebraError):
        oc.OpenClosedAlgebra(X.Acl, X.Aop, X.iota)
    with pytest.raises(oc.AlgebraError):
        oc.OpenClosedAlgebra(X.Aop, X.Acl, X.Aop.iota)


def test_round_trip_detects_wrong_iota():
    X = oc.build_open_closed_from_center(oc.load_algebra("alg_ising_diag_1psi"))
    Y = oc.OpenClosedAlgebra(X.Aop, X.Acl, 2 * X.iota)
    assert any(not r.passed for r in oc.check_open_closed(Y))


# -- left center ---------------------------------------------------------------


@pytest.mark.parametrize("name", SQUARE_ALGEBRAS)
def test_left_center_matches_scalar_oracle(name):
    Cl, e = oc.left_center(oc.load_algebra(name))
    assert sorted(Cl.obj.basis) == sorted(_central_labels_oracle(name))
    # the embedding is an isometry
    for B in e.blocks.values():
        if B.size:
            np.testing.assert_allclose(B.conj().T @ B, np.eye(B.shape[1]), atol=1e-12)


@pytest.mark.parametrize("name", COMMUTATIVE)
def test_left_center_of_commutative_is_everything(name):
    A = oc.load_algebra(name)
    Cl, e = oc.left_center(A)
    assert Cl.obj == A.obj or Cl.obj.multiplicities() == A.obj.multiplicities()
    assert e.distance(A.cat.identity(A.obj)) < 1e-12 if Cl.obj == A.obj else True


@pytest.mark.parametrize("name", ["alg_ising_noncomm", "alg_fib_twist"])
def test_left_center_of_noncommutative_is_smaller(name):
    A = oc.load_algebra(name)
    Cl, _ = oc.left_center(A)
    assert list(Cl.obj.basis) == [("1", "1")]
    assert len(Cl.obj.basis) < len(A.obj.basis)


def test_subalgebra_selection_and_errors():
    A = oc.load_algebra("alg_ising_diag")
    sub, inc = oc.subalgebra(A, [("1", "1"), ("p", "p")])
    assert max(r.residual for r in oc.check_algebra(sub)) < 1e-12
    with pytest.raises(oc.SubalgebraError, match="not a subalgebra"):
        oc.subalgebra(A, [("1", "1"), ("s", "s")])
    with pytest.raises(oc.SubalgebraError, match="not summands"):
        oc.subalgebra(A, [("q", "q")])
    X = oc.build_open_closed_from_center(A, [("1", "1"), ("p", "p")])
    assert all(r.passed for r in oc.check_open_closed(X))
    Y = oc.build_open_closed_from_center(A, sub, embedding=inc)
    assert all(r.passed for r in oc.check_open_closed(Y))
    for lab, B in Y.iota.blocks.items():
        np.testing.assert_allclose(np.abs(B), np.abs(X.iota.blocks[lab]), atol=1e-12)
    with pytest.raises(oc.SubalgebraError, match="embedding"):
        oc.build_open_closed_from_center(A, sub)


def test_non_central_subalgebra_is_rejected():
    A = oc.load_algebra("alg_ising_noncomm")
    sub, inc = oc.subalgebra(A, [("1", "1"), ("p", "1")])
    with pytest.raises(oc.SubalgebraError, match="left center"):
        oc.build_open_closed_from_center(A, sub, embedding=inc)


def test_build_requires_square_algebra():
    with pytest.raises(oc.AlgebraError):
        oc.build_open_closed_from_center(oc.load_algebra("alg_ising_1psi"))


# -- mutations -----------------------------------------------------------------


def test_phi2_without_under_braiding_breaks_comm_T_cl(monkeypatch):
    def plain_swap(W2, W3):
        cat = W2.cat
        return cat.from_tree_map(
            cat.tensor(W2, W3),
            cat.tensor(W3, W2),
            lambda t: [(("N", t[2], t[1], t[3]), 1.0)],
        )

    monkeypatch.setattr(oc, "_phi2_braid", plain_swap)
    res = {r.check: r for r in oc.check_T_algebra(oc.load_algebra("alg_fib_diag"))}
    assert max(r.residual for r in res.values()) > 1e-3


@pytest.mark.parametrize("name", ["alg_ising_diag", "alg_fib_diag"])
def test_sigma1_replaced_by_braiding_breaks_check_d(monkeypatch, name):
    X = oc.build_open_closed_from_center(oc.load_algebra(name))
    monkeypatch.setattr(oc, "sigma1", lambda Vcl, Vop: Vop.cat.braiding(oc.functor_T(Vcl), Vop))
    res = {r.check: r for r in oc.check_open_closed(X)}
    assert res["(d) sigma1-commutativity"].residual > 1e-3


def test_perturbed_fib_mu_breaks_associativity():
    # on diagonal summands R^{aa}_c of C⊠C is 1, so a channel phase cannot
    # break commutativity; it breaks associativity instead
    A = oc.load_algebra("alg_fib_diag")
    labels, mu = _scalar_mu("alg_fib_diag")
    tt = (("t", "t"), ("t", "t"), ("t", "t"))
    mu[tt] = mu[tt] * np.exp(0.3j)
    B = oc.algebra_from_scalars(A.cat, labels, mu)
    assert all(r.passed for r in oc.check_commutative_trivial_twist(B))
    res = {r.check: r for r in oc.check_algebra(B)}
    assert res["associativity"].residual > 1e-3


@settings(max_examples=15)
@given(st.floats(0.2, 3.0), st.floats(-np.pi, np.pi))
def test_rescaled_nontrivial_channel_keeps_algebra_axioms(s, phase):
    # rescaling the basis vector of ψ⊠ψ by z changes μ(ψψ→1) by z², others fixed
    A = oc.load_algebra("alg_ising_diag_1psi")
    labels, mu = _scalar_mu("alg_ising_diag_1psi")
    z = s * np.exp(1j * phase)
    pp = ("p", "p")
    mu[(pp, pp, ("1", "1"))] = mu[(pp, pp, ("1", "1"))] * z * z
    B = oc.algebra_from_scalars(A.cat, labels, mu)
    assert max(r.residual for r in oc.check_algebra(B)) < 1e-9 * max(1, s * s)
    X = oc.build_open_closed_from_center(B)
    assert max(r.residual for r in oc.check_open_closed(X)) < 1e-8 * max(1, s**4)
