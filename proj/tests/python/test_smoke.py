import math

import pytest

import sqcrys


def test_hard_well_levels():
    h = sqcrys.hard_square(math.sqrt(2))
    assert h.value(0.5) is None
    assert h.value(1.2) == -1.0
    assert h.value(2.0) == 0.0
    with pytest.raises(ValueError):
        sqcrys.hard_square(0.9)


def test_energies():
    h = sqcrys.preset("hard-sqrt2")
    grid = [(i, j) for i in range(3) for j in range(3)]
    assert sqcrys.total_energy(h, grid) == -20.0
    assert sqcrys.four_point_energy(h, [(0, 0), (1, 1), (1, 0), (0, 1)]) == -4.0
    assert sqcrys.lattice_energy_per_point(h, 1.0) == -4.0
    assert sqcrys.total_energy(h, [(0, 0), (0.5, 0)]) is None


def test_spectrum_fixture():
    v = sqcrys.hermite_well(-1, 2, 3, -1, -1, 1)
    eig = [e["eigenvalue"] for e in sqcrys.e4_spectrum(v)]
    assert eig == pytest.approx([0, 20, 28, 0, 12, 16], abs=1e-10)


def test_conditions_and_scale():
    v = sqcrys.exv3(truncated=True)
    v.set_alphas(0.01, 0.07, 0.09)
    rep = sqcrys.check_conditions(v)
    status = {c["id"]: c["status"] for c in rep["conditions"]}
    assert all(status[i] == "holds" for i in "0123456")
    s = sqcrys.optimal_scale(v)
    assert s["energy"] == pytest.approx(-4.0)


def test_number_theory():
    assert [sqcrys.count_representations(n) for n in (1, 5, 25, 3)] == [4, 8, 12, 0]
    assert sqcrys.m_of_r(25) == 3
    assert sqcrys.f_map(1, 0) == (1, 1)
    assert 1 in sqcrys.d_tilde(5) and 2 not in sqcrys.d_tilde(5)
    assert sqcrys.verify_cover(15, 8)["verdict"] == "exact"


def test_graph_and_charts():
    pts = sqcrys.perturbed_lattice(8, 0.01, 0.3, 3)
    g = sqcrys.bond_graph(pts, 0.05, 0.09)
    assert g["n"] == 64
    phi = sqcrys.embed(pts, 0.05, 0.09)
    assert len(phi) > 0
    sup, edge, L = sqcrys.affine_distortion(pts, 0.05, 0.09)
    assert sup <= L * edge * (1 + 1e-12)


def test_minimizers():
    h = sqcrys.preset("hard-sqrt2")
    assert sqcrys.hard_minimize(h, 9)["energy"] == -20.0
    v = sqcrys.preset("exv3-truncated")
    r = sqcrys.multi_start(v, 4, restarts=4, seed=2)
    assert r["energy"] == pytest.approx(-6.0, abs=1e-8)
    back = sqcrys.potential_from_json(v.to_json())
    assert back.value(1.1) == v.value(1.1)
