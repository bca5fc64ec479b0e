import numpy as np
import pytest

from braidfib.mixedpoly import (MixedPolynomial, SymmetryError, check_symmetry,
                                derivative_u, minimal_k, newton_data, newton_svg,
                                semiholomorphic, verify_cone)
from braidfib.polyloops import PolyLoop
from braidfib.trigcurves import TrigCurve


def loop(*coeff_terms):
    """Monic loop from per-coefficient term lists [(deg, coef), ...]."""
    curves = []
    for terms in coeff_terms:
        degs = [d for d, _ in terms]
        cs = [c for _, c in terms]
        curves.append(TrigCurve(degs, cs))
    return PolyLoop.closed_form(curves)


EVEN2 = loop([(2, -1.0)], [])                 # u^2 - e^{2it}
CUSP3 = loop([(2, -1.0)], [], [])             # u^3 - e^{2it}
SADDLE3 = loop([], [(2, -0.75)], [])          # u^3 - (3/4) e^{2it} u
ODD3 = loop([(3, -1.0)], [(2, -1.0)], [(1, 1.0)])  # u^3 + e^{it}u^2 - e^{2it}u - e^{3it}


def test_check_symmetry():
    assert check_symmetry(EVEN2) == "even"
    assert check_symmetry(loop([(1, -1.0)], [])) == "odd"        # u^2 - e^{it}
    assert check_symmetry(loop([(0, -1.0), (1, -1.0)], [])) == "none"
    assert check_symmetry(ODD3) == "odd"


def test_odd_loop_satisfies_functional_identity():
    # for odd n the parity pattern is exactly g_{t+pi}(u) = -g_t(-u)
    rng = np.random.default_rng(0)
    for t in rng.uniform(0, 2 * np.pi, 20):
        for u in rng.standard_normal(3) + 1j * rng.standard_normal(3):
            lhs = ODD3.eval(u, t + np.pi)
            rhs = -ODD3.eval(-u, t)
            assert abs(lhs - rhs) < 1e-12


def test_minimal_k_examples():
    assert minimal_k(EVEN2) == 1
    assert minimal_k(CUSP3) == 2              # 3k >= 2 and 3k even forces k = 2
    assert minimal_k(SADDLE3) == 1
    assert minimal_k(ODD3) == 1
    with pytest.raises(SymmetryError):
        minimal_k(loop([(1, -0.25)], []))     # u^2 - e^{it}/4: 2k odd unsatisfiable
    with pytest.raises(SymmetryError):
        minimal_k(loop([(0, -1.0), (1, -1.0)], []))


def test_semiholomorphic_monomials():
    assert semiholomorphic(EVEN2, 1) == MixedPolynomial({(2, 0, 0): 1, (0, 2, 0): -1})
    assert semiholomorphic(CUSP3, 2) == MixedPolynomial({(3, 0, 0): 1, (0, 4, 2): -1})
    assert semiholomorphic(SADDLE3, 1) == MixedPolynomial({(3, 0, 0): 1, (1, 2, 0): -0.75})
    with pytest.raises(SymmetryError):
        semiholomorphic(CUSP3, 1)             # k = 1 is inadmissible here


def test_identity_random_samples():
    rng = np.random.default_rng(1)
    for g, k in ((EVEN2, 1), (CUSP3, 2), (SADDLE3, 1), (ODD3, 1)):
        f = semiholomorphic(g, k)
        n = g.degree
        worst = 0.0
        for _ in range(250):
            u = rng.standard_normal() + 1j * rng.standard_normal()
            r = 10 ** rng.uniform(-3, 0.5)
            t = rng.uniform(0, 2 * np.pi)
            lhs = f.evaluate(u, r * np.exp(1j * t))
            rhs = r ** (k * n) * g.eval(u / r ** k, t)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        assert worst < 1e-9


def test_newton_data():
    nd = newton_data(semiholomorphic(EVEN2, 1))
    assert nd.support == ((0, 2), (2, 0))
    assert nd.convenient
    assert nd.radially_weighted_homogeneous
    nd2 = newton_data(semiholomorphic(CUSP3, 2))
    assert nd2.support == ((0, 6), (3, 0))    # on the line 2 mu + nu = 6
    assert nd2.radially_weighted_homogeneous
    nd3 = newton_data(MixedPolynomial({(2, 0, 0): 1, (0, 2, 0): -1, (0, 5, 0): 1}))
    assert not nd3.radially_weighted_homogeneous
    assert (0, 5) not in nd3.boundary_vertices  # dominated point above Gamma_f


def test_derivative_u_and_pure_v_terms():
    f = semiholomorphic(SADDLE3, 1)
    a = MixedPolynomial({(0, 3, 2): 2.5, (0, 1, 0): -1.0})   # pure (v, vbar) part
    lhs = derivative_u(MixedPolynomial({**f.monomials, **a.monomials}))
    assert lhs == derivative_u(f)
    assert derivative_u(semiholomorphic(CUSP3, 2)) == MixedPolynomial({(2, 0, 0): 3.0})


def test_verify_cone():
    rep = verify_cone(semiholomorphic(SADDLE3, 1), SADDLE3, 1)
    assert rep["passed"] and rep["max_relative_mismatch"] < 1e-6
    rep2 = verify_cone(semiholomorphic(CUSP3, 2), CUSP3, 2)
    assert rep2["passed"]                     # degenerate saddle at the origin
    rep3 = verify_cone(semiholomorphic(ODD3, 1), ODD3, 1)
    assert rep3["passed"]


def test_pruning_reported():
    f = MixedPolynomial({(1, 0, 0): 1.0, (0, 1, 1): 1e-16})
    assert len(f) == 1
    assert f.pruned_total > 0


def test_json_roundtrip_and_svg(tmp_path):
    f = semiholomorphic(ODD3, 1)
    f.save(tmp_path / "f.json")
    import json

    back = MixedPolynomial.from_json(json.loads((tmp_path / "f.json").read_text()))
    assert back == f
    nd = newton_data(f)
    svg1 = newton_svg(nd).render()
    svg2 = newton_svg(newton_data(f)).render()
    assert svg1 == svg2


def test_random_even_loops_all_invariants():
    rng = np.random.default_rng(4)
    for _ in range(6):
        n = int(rng.integers(2, 5))
        curves = []
        for m in range(n):
            degs = rng.choice([-4, -2, 0, 2, 4], size=2, replace=False)
            cs = 0.5 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
            curves.append(TrigCurve(degs, cs))
        g = PolyLoop.closed_form(curves)
        assert check_symmetry(g) == "even"
        k = minimal_k(g)
        f = semiholomorphic(g, k)
        assert newton_data(f).radially_weighted_homogeneous
        u = rng.standard_normal() + 1j * rng.standard_normal()
        r, t = 0.7, 1.3
        lhs = f.evaluate(u, r * np.exp(1j * t))
        rhs = r ** (k * n) * g.eval(u / r ** k, t)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))
