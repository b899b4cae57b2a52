"""Smoke test for the `inbl` extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

from fractions import Fraction

import inbl


def main():
    refs = inbl.ReferenceSystem(seed=7, bits=3, periods=40, lam="1/2")
    assert refs.num_bits == 3 and refs.total_ticks == 40 * 6

    w = inbl.ProductString("HLH")
    assert w.index == 6 and w.level(2) == "L"
    assert inbl.ProductString.from_index(3, 1) == inbl.ProductString("LLL")
    assert w.flipped(2) == inbl.ProductString("HHH")

    y = inbl.FactoredSuperposition.uniform(3)
    e = y.expand()
    assert len(e) == 8
    for k in range(refs.num_periods):
        assert y.evaluate(refs, k) == e.evaluate(refs, k)
    lo, hi = min(map(abs, y.readouts(refs))), max(map(abs, y.readouts(refs)))
    assert Fraction(1, 8) <= lo and hi <= Fraction(27, 8)

    # NOT at bit 2 twice scales every term by lambda^2
    twice = e.apply_not(2, "1/2").apply_not(2, "1/2")
    assert all(c == Fraction(1, 4) for _, c in twice.terms())
    assert inbl.Superposition.from_json(e.to_json()) == e

    result = inbl.tsinbl_identify(refs, w, max_periods=20)
    for bit, level in result["decided"].items():
        assert w.level(int(bit)) == level
    assert (string := inbl.baseline_search(inbl.ReferenceSystem(3, 3, 40, "1"), w, 1e-6)[0]) == "HLH", string

    assert inbl.error_bound(4, 3) == Fraction(1, 16)
    assert inbl.required_periods(4, 1e-3) == 6
    assert inbl.resolution_bits(200) == 317

    report = inbl.amplitude_range(3, "1/2")
    assert all(c["pass"] for c in report["checks"]), report["checks"]
    report = inbl.not_gate_demo(3, 2, lam="1")
    assert all(c["pass"] for c in report["checks"]), report["checks"]
    print("smoke test ok")


if __name__ == "__main__":
    main()
