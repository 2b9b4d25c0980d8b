import choreo


def two_component_cubic():
    return {"degree": 3, "coeffs": {"y^2 z": 1.0, "x^3": -1.0, "x z^2": 1.0}}


def test_preset_names():
    names = choreo.preset_names()
    assert "sec7-2" in names
    assert len(names) == 7


def test_topology_summary():
    topo = choreo.trace_topology(two_component_cubic())
    kinds = sorted(c["kind"] for c in topo["components"])
    assert kinds == ["one_sided", "oval"]
    assert topo["cubic_type"] == "type_i"


def test_run_small_pencil():
    cfg = choreo.preset_config("sec7-2")
    cfg["tracker"]["steps"] = 400
    report, code = choreo.run_scenario(cfg)
    assert code == 0
    assert report["error"] is None
    assert report["curve_type"] == "type_i"
    values = set(report["c"].values())
    assert len(values) == 1
    assert abs(values.pop()) == 1
    law = [v for v in report["verdicts"] if v["id"] == "Sec3_3"]
    assert law and law[0]["satisfied"]


def test_bad_config_exit_code():
    report, code = choreo.run_scenario({"family": {"kind": "line_pencil"}})
    assert code == 4
    assert report["error"]["kind"] == "config_error"


def test_reports_deterministic():
    cfg = choreo.preset_config("sec7-2")
    cfg["tracker"]["steps"] = 300
    a, _ = choreo.run_scenario(cfg)
    b, _ = choreo.run_scenario(cfg)
    assert a == b
