"""Smoke test for the layerpot Python bindings.

Build and install the extension first:

    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
"""

import cmath
import math

import layerpot_py as lp

UNIT = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]


def close(a, b, tol):
    return abs(a - b) <= tol * max(abs(b), 1e-300)


def test_element():
    e = lp.Element(UNIT)
    assert math.isclose(e.area, 0.5)
    assert math.isclose(e.diameter, math.sqrt(2.0))
    proj = e.project([0.25, 0.25, 0.1])
    assert proj["location"] == "interior"
    assert math.isclose(abs(proj["h"]), 0.1)
    try:
        lp.Element([[0, 0, 0], [1, 0, 0], [2, 0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("degenerate element accepted")


def test_against_reference():
    e = lp.Element(UNIT)
    density = [(0, 0, 1.0), (1, 1, -0.5), (0, 2, 2.0)]
    for kernel, k in [("laplace", 0.0), ("helmholtz", 1.3)]:
        for h in [1e-4, 0.05, 0.7]:
            point = [0.3, 0.2, h]
            got = lp.evaluate(e, point, density, kernel=kernel, k=k, normal=e.normal)
            want = lp.reference(e, point, density, kernel=kernel, k=k)
            for g, w in zip([got.v, got.k, got.k_prime, got.d], want):
                assert close(g, w, 1e-8), (kernel, h, g, w)


def test_monomials_and_shapes():
    e = lp.Element([[0.1, 0.0, 0.2], [1.2, 0.3, 0.0], [0.2, 0.9, 0.4]])
    point = [0.5, 0.4, 0.6]
    mono = lp.monomials(e, point, 3, kernel="helmholtz", k=2.0)
    assert mono.order == 3
    assert mono.get(0, 0).k_prime is None
    combined = mono.contract([(1, 0, 2.0), (0, 2, 3.0)])
    parts = 2.0 * mono.get(1, 0).v + 3.0 * mono.get(0, 2).v
    assert close(combined.v, parts, 1e-13)

    # Lagrange shape functions sum to one, so their potentials sum to those of a constant.
    shapes = lp.lagrange(e, point, 2, kernel="helmholtz", k=2.0)
    assert len(shapes) == 6
    total = sum(s.v for s in shapes)
    assert close(total, mono.get(0, 0).v, 1e-10)


def test_errors():
    e = lp.Element(UNIT)
    try:
        lp.evaluate(e, [0.5, 0.0, 0.0], [(0, 0, 1.0)])
    except lp.LayerpotError as err:
        assert "contour" in str(err)
    else:
        raise AssertionError("edge point accepted")
    try:
        lp.evaluate(e, [0.2, 0.2, 0.1], [(0, 0, 1.0)], kernel="helmholtz", k=0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("zero wavenumber accepted")


def test_laplace_limit():
    e = lp.Element(UNIT)
    point = [0.2, 0.3, 0.05]
    lap = lp.evaluate(e, point, [(1, 0, 1.0)])
    hel = lp.evaluate(e, point, [(1, 0, 1.0)], kernel="helmholtz", k=1e-8)
    assert close(hel.v, lap.v, 1e-6)
    assert abs(cmath.phase(hel.v)) < 1e-6


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
    print("smoke test passed")
