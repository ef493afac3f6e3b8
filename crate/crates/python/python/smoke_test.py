"""Smoke test for the qframe extension module.

Build and run from the repository root:

    cargo build --release -p qframe-python --features extension-module
    cp target/release/libqframe.so crates/python/python/qframe.so
    python3 crates/python/python/smoke_test.py
"""

import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import qframe  # noqa: E402

TOL = 1e-10


def max_abs(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    frame = qframe.Frame.wootters(3).renormalize("standard")
    dual = frame.canonical_dual()
    ok, residual = frame.is_dual(dual)
    assert ok and residual <= TOL, residual
    assert len(frame) == 9 and frame.dim == 3 and frame.convention == "standard"

    lo, hi = qframe.Frame.wootters(3).bounds()
    assert abs(hi - lo) <= 1e-12 * hi

    _, scalar, residual = qframe.closed_form_dual("wootters", 3)
    assert abs(scalar - 9.0) <= 1e-9 and residual <= TOL, (scalar, residual)

    pair = qframe.DualPair(frame, dual)
    rho = qframe.random_state(3, 11)
    povm = qframe.random_povm(3, 4, 12)
    for k in range(len(povm)):
        trace, deformed, total = pair.probabilities(rho, povm, k)
        assert abs(trace - deformed) <= TOL and abs(trace - total) <= TOL
        assert abs(trace - qframe.born_rule(rho, povm, k)) <= 1e-14

    rep = pair.rep_state(rho)
    assert abs(sum(w * v for w, v in zip(frame.weights, rep)) - 1.0) <= TOL
    for s in map(sum, zip(*pair.rep_effects(povm, "E"))):
        assert abs(s - 1.0) <= TOL
    assert max_abs(dual.reconstruct(frame.represent(rho)), rho) <= TOL

    # pure state with a negative quasi-probability
    psi = [1 / 2**0.5, 1j / 2**0.5, 0]
    pure = [[a * b.conjugate() for b in psi] for a in psi]
    report = frame.negativity(pair.rep_state(pure))
    assert report["min_value"] < 0 and report["count_negative"] >= 1, report

    basis = [[[1.0 if (i, j) == (k, k) else 0.0 for j in range(3)] for i in range(3)] for k in range(3)]
    classical, violations = pair.classicality_check(basis, [basis])
    assert classical and not violations
    classical, violations = pair.classicality_check(basis + [pure], [basis])
    assert not classical and violations

    algebra = qframe.StarAlgebra(frame, dual)
    r = algebra.represent(pure)
    assert algebra.is_pure_state(r)
    square = algebra.product(r, r)
    assert max(abs(x - y) for x, y in zip(square, r)) <= 1e-9
    unit = algebra.identity()
    assert max(abs(x - y) for x, y in zip(algebra.product(unit, r), r)) <= TOL
    assert abs(algebra.inner_product(r, r) - 1.0) <= TOL

    for w in qframe.witness_batch(2, 5):
        assert w["verdict"] == "no_positive_dual_witnessed", w
    assert qframe.identity_choi_pt_min_eig(3) <= -1 + TOL
    assert pair.choi_pt_min_eig() <= -1 + TOL

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "frame.json")
        frame.save(path)
        again = qframe.Frame.load(path)
        assert again.id == frame.id and again.elements() == frame.elements()

    try:
        qframe.Frame.wootters(2)
    except qframe.QframeException as e:
        assert "does not span" in str(e)
    else:
        raise AssertionError("wootters(2) should fail")

    print("qframe python smoke test: ok")


if __name__ == "__main__":
    main()
