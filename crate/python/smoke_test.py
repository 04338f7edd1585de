"""Smoke test for the Python bindings.

Build and install first, e.g. `pip install ./crates/py`, then run
`python python/smoke_test.py`.
"""

import json

import etale


def main():
    cert = etale.demo_basic()
    assert cert.kind == "global-cover"
    report = cert.verify()
    assert report.ok and not report.violations, report
    leaves = cert.to_dict()["result"]["leaves"]
    assert [leaf["f"] for leaf in leaves] == ["5"]

    problem = etale.Problem("Zloc:5", ["x^2 - 2"])
    local = etale.standardize(problem)
    assert local.kind == "local-etale"
    assert etale.verify_certificate(local.to_json())

    same = etale.Problem({"kind": "Zloc", "p": 5}, ["x^2 - 2"], vars=["x"])
    assert etale.standardize(same).to_json() == local.to_json()

    residual = etale.decompose_residual(etale.Problem("Zloc:5", ["x^3 - x"]))
    assert len(residual.to_dict()["result"]["components"]) >= 1

    over_base = etale.cover(etale.Problem("Z", ["x^2 - x"]), over_r=True)
    assert over_base.kind == "global-cover-over-base" and over_base.verify()

    data = cert.to_dict()
    data["result"]["leaves"][0]["f"] = "7"
    report = etale.verify_certificate(json.dumps(data))
    assert not report.ok
    assert any(path.startswith("$.result.leaves[0]") for path, _ in report.violations)

    try:
        etale.standardize(etale.Problem("Zloc:5", ["x^2 - 5"]))
    except etale.EtaleError as e:
        assert e.args[1] == etale.EXIT_PIPELINE
    else:
        raise AssertionError("a ramified input was accepted")

    try:
        etale.Problem("Zloc:6", ["x"])
    except etale.EtaleError as e:
        assert e.args[1] == etale.EXIT_PARSE
    else:
        raise AssertionError("a composite modulus was accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
