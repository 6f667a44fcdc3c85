"""Smoke test for the compiled module: build with `maturin build -m crates/python/Cargo.toml` and install the wheel."""

import json
import math

import fluidsymp


def main():
    names = [e["name"] for e in json.loads(fluidsymp.catalogue_json())]
    assert len(names) == 6 and "steady_abc" in names, names

    vortex = fluidsymp.Scenario("accelerating_vortex")
    s = vortex.sample([0.5, 0.3, -0.2, 0.1])
    assert s.momentum_residual < 1e-12
    omega, a = vortex.params["omega"], vortex.params["a"]
    assert math.isclose(abs(s.liouville), 2 * omega * a, rel_tol=1e-10), s.liouville

    m = fluidsymp.run_verify(vortex, suites=["core", "contact"], points=64)
    assert m.exit_code() == 0, [i for i in m.ids() if m.check(i)[0] == "fail"]
    status, worst, tol = m.check("closedness.ideal")
    assert status == "pass" and worst <= tol
    json.loads(m.to_json())

    m = fluidsymp.run_verify(fluidsymp.Scenario("steady_abc"), suites=["core"], points=32)
    assert m.exit_code(strict=True) == 3

    rotation = fluidsymp.Scenario("columnar_vortex", params={"w0": 0.0})
    period = 2 * math.pi / rotation.params["omega"]
    steps = 4000
    rows = fluidsymp.run_trace(rotation, "trajectory", [0.0, 1.0, 0.0, 0.0], period / steps, steps)
    end = rows[-1][1]
    assert math.dist(end[1:], [1.0, 0.0, 0.0]) < 1e-6, end

    assert fluidsymp.evaluate("2^3^2 - x", [0, 2, 0, 0]) == 510.0
    print("smoke test passed")


if __name__ == "__main__":
    main()
