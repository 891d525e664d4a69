import cmath
import math

import numpy as np
import pytest

import liewn


def test_shipped_algebras_load_and_validate():
    stems = liewn.shipped_algebras()
    assert "table1" in stems and "su4_cwb" in stems
    for stem in stems:
        assert liewn.load_algebra(stem).validate() == ""


def test_parametrized_family():
    a = liewn.load_algebra("table1")
    assert a.order == 3
    assert a.parameters == ["upsilon", "epsilon"]
    xi, det = a.coupling()
    assert det == "exp(-upsilon*L2)"
    assert a.similarity_transform(1, 2) == "-upsilon*L1*g1 + g2"
    system = a.decouple()
    assert len(system["rhs"]) == 3
    assert not system["locally_valid"]


def test_pauli_basis_is_locally_valid():
    system = liewn.load_algebra("su2_pauli").decouple(emit="latex")
    assert system["locally_valid"]
    assert system["det"] == "\\cos(\\Theta_{2})"


def test_su2_trajectory_and_residual():
    a = liewn.load_algebra("su2_cwb")
    eta = 1.1
    t = a.integrate([eta, 0, eta], t1=1.2, samples=25)
    assert t.states.shape == (25, 3)
    assert t.det[0] == 1
    x = eta * t.grid[-1]
    assert abs(t.final_state()[0] + 1j * math.tan(x)) < 1e-8
    dense = a.integrate("const:1.1,0,1.1", t1=0.6, samples=401)
    assert a.residual(dense, "const:1.1,0,1.1") < 1e-6


def test_integration_error_is_raised():
    a = liewn.load_algebra("su2_cwb")
    with pytest.raises(liewn._core.LiewnError):
        a.integrate([1, 0, 1], t1=2.0)


def test_hadamard_from_printed_coefficients():
    g = liewn.sun_generators(2, basis="qubit")
    lam = [-1, math.log(2) - 1j * math.pi, -1]
    u = liewn.assemble_teo(g, lam) * cmath.exp(1j * lam[1].imag / 2)
    ok, phase, residual = liewn.verify_gate(u, "hadamard")
    assert ok
    assert abs(phase + 1) < 1e-12
    assert residual < 1e-12


def test_matrix_oracle_matches_decoupled_flow():
    g = liewn.sun_generators(3)
    eta = [0.3, -0.2j, 0.1, 0.4, -0.3, 0.2 + 0.1j, 0.05, -0.1]
    a = liewn.sun_algebra(3)
    u = liewn.assemble_teo(g, a.integrate(eta).final_state())
    assert np.linalg.norm(u - liewn.matrix_oracle(g, eta)) < 1e-8
    assert np.linalg.norm(u - liewn.direct_exponential(g, eta, 1.0)) < 1e-8


def test_bch_closed_form():
    lam = -1j * math.pi / (2 * math.sqrt(2))
    l1, l2, l3 = liewn.bch_closed_form_3gen(lam, 2 * lam, lam, 1, -1)
    assert abs(l1 + 1) < 1e-14 and abs(l3 + 1) < 1e-14
    assert liewn.unitarity_check_su2(l1, l2, l3)["pass"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        liewn.load_algebra("no_such_algebra")
    with pytest.raises(ValueError):
        liewn.gate("swap")
    with pytest.raises(ValueError):
        liewn.load_algebra("table1").similarity_transform(0, 1)


def test_fixture_subset():
    results = liewn.run_fixtures("table1")
    assert [r[0] for r in results] == ["table1.decoupled", "table1.coupling", "table1.bch"]
    assert all(r[1] for r in results)
