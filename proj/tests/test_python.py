"""Smoke tests for the python extension; run directly with python3."""

import json
import math

import _linklab as ll


def test_linking_engines():
    a, b = ll.torus_link_pair(2)
    value, err = ll.gauss_linking(a, b)
    assert abs(value - 2.0) < 1e-3, (value, err)
    assert ll.crossing_sign_linking(a.to_polyline(512), b.to_polyline(512)) == 2
    assert ll.causal_linking_number(a, b) == 2

    ring = ll.circle([0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], 1.0)
    assert ll.is_spatial(ring)
    far = ll.polyline([[0, 4, -1, -1], [0, 4, 1, -1], [0, 4, 1, 1], [0, 4, -1, 1]])
    value, _ = ll.gauss_linking(ring, far)
    assert abs(value) < 1e-6


def test_mollifier_and_grid():
    s = ll.Mollifier.gaussian(0.1)
    assert abs(s.integral() - 1.0) < 1e-12
    assert abs(s.hat([0, 0, 0, 0]) - 1.0) < 1e-12
    assert s.effective_radius() < 1.0

    bump = ll.Mollifier.bump(0.2)
    assert abs(bump.integral() - 1.0) < 1e-9

    grid = ll.suggest_shell_grid(0.12, 4.8, 2.2).scaled(0.35)
    assert grid.radial_nodes >= 4
    assert grid.k_max() > 20.0


def test_intrinsic_commutator():
    first, second = ll.reference_link_pair()
    model = ll.massless_model(0.0, 1.0)
    grid = ll.suggest_shell_grid(0.12, 4.8, 2.2).scaled(0.35)
    rep = ll.intrinsic_commutator(model, ll.Mollifier.gaussian(0.12), first,
                                  ll.Mollifier.gaussian(0.12), second, grid, workers=3)
    assert abs(rep.value.real) < 1e-12 * abs(rep.value)
    assert abs(rep.value.imag - 2.0) < 0.02, rep.value
    assert rep.error_estimate < 0.02
    assert rep.l1_scale > abs(rep.value)

    gapped = ll.massive_atom_model(3.0)
    rep0 = ll.intrinsic_commutator(gapped, ll.Mollifier.gaussian(0.12), first,
                                   ll.Mollifier.gaussian(0.12), second, grid, workers=3)
    assert abs(rep0.value) < 1e-6 * rep0.l1_scale


def test_scene_round_trip():
    scene = {
        "experiment": "sweep-linking",
        "mollifiers": {"s": {"kind": "gaussian", "width": 0.12}},
        "model": {"components": [
            {"c1": 0.0, "c2": 1.0,
             "mass": {"kind": "atom", "value": 0.0, "weight": 1.0}}]},
        "grid": {"kind": "suggest", "min_width": 0.12, "extent": 4.8,
                 "transverse": 2.2, "scale": 0.35},
        "params": {"mollifier": "s", "lambdas": [1]},
        "tolerances": {"ratio_tol": 0.02},
        "output": {"table": "t.csv"},
    }
    assert ll.validate_scene_text(json.dumps(scene)) == []

    bad = dict(scene, params={"mollifier": "missing", "lambdas": [1]})
    diags = ll.validate_scene_text(json.dumps(bad))
    assert diags == ["params.mollifier: unknown mollifier 'missing'"], diags

    code, report, table = ll.run_scene_text(json.dumps(scene), workers=3)
    assert code == 0, report
    assert "# result: PASS" in report
    assert table.startswith("parameter,value_re,value_im,error\n")
    row = table.splitlines()[1].split(",")
    assert math.isclose(float(row[2]), 2.0, rel_tol=0.02)


def main():
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"{name}: ok")
    print("python smoke: all passed")


if __name__ == "__main__":
    main()
