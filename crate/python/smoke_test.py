"""Quick end-to-end check of the Python bindings.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json
import sys

import hypersphere_lab_py as hl


def main():
    p = hl.PointSet.trivial(3, 10, seed=7)
    assert len(p) == 10 and p.dimension == 3 and p.backend == "rational"
    s = p.spectrum()
    assert s.certified
    assert s.counts == {4: 84, 9: 1}, s.counts
    assert p.general_position_witness() is None

    # the file format round-trips
    q = hl.PointSet.from_json(p.to_json())
    assert q.spectrum().counts == s.counts

    # inversion away from the set keeps every count
    r = p.invert(["0", "0", "0"])
    assert r.spectrum().counts == s.counts

    # after lifting, spheres become hyperplanes through the same points
    assert p.lift().spectrum(hyperplanes=True).counts == s.counts

    c = hl.PointSet.coset(4, 9, l=1)
    cs = c.spectrum()
    assert (cs.ordinary, cs.next) == hl.oracle(4, 9, l=1), (cs, hl.oracle(4, 9, l=1))

    assert hl.oracle(4, 12, l=3) == (312, 80)
    assert hl.formula(4, 12) == (312, 80)
    assert hl.formula(3, 10) == (84, None)

    try:
        hl.PointSet.from_json(json.dumps({"dimension": 2, "backend": "rational",
                                          "points": [["1", "2"], ["1/0", "3"]]}))
    except ValueError as e:
        assert "points[1][0]" in str(e)
    else:
        raise AssertionError("bad input accepted")

    failed = [name for name, ok, _ in hl.run_selftest(seed=1) if not ok]
    assert not failed, failed
    print("smoke test ok:", s)
    return 0


if __name__ == "__main__":
    sys.exit(main())
