"""Smoke test for the lensbook extension module.

Build it first:

    cargo build --release -p lensbook-py --features extension-module
    cp target/release/liblensbook_py.so python/lensbook.so
"""
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import lensbook


def main():
    inp = lensbook.PlatInput(2, 4, "a(1,2)")
    assert inp.n == 2 and inp.p == 4
    r = lensbook.run(inp)
    book = json.loads(r.to_json())
    assert book["page"]["genus"] == 0
    assert all(t["sign"] == 1 for t in book["monodromy"])
    assert book["manifold"] == {"p": 4}
    assert r.h1() == [4]
    assert r.verify() == []
    assert dict(r.stage_framings())["ladder"] == -2
    assert r.to_svg().startswith("<svg")
    assert lensbook.verify_trace(inp, r.trace_text(), r.to_json()) == []

    bad = r.trace_text().replace("e=+1", "e=-1", 1)
    assert lensbook.verify_trace(inp, bad) != []

    sphere = lensbook.run(lensbook.PlatInput.parse("n=3 p=0 a(1,4) a(2,5)^-1"))
    assert sphere.h1() == [0]

    try:
        lensbook.run(lensbook.PlatInput(2, 2, "a(1,2)"))
    except lensbook.HypothesisViolated as e:
        assert "p > 2n-2" in str(e)
    else:
        raise AssertionError("p <= 2n-2 was accepted")

    try:
        lensbook.PlatInput(1, 3, "a(1,5)")
    except lensbook.BraidParseError:
        pass
    else:
        raise AssertionError("out-of-range strand was accepted")

    factors, left, right = lensbook.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert factors == [2, 6, 12]
    big = 2**100
    assert lensbook.smith_normal_form([[big]])[0] == [big]

    print("lensbook smoke test: ok")


if __name__ == "__main__":
    main()
