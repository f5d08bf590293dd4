"""Registry entries and the command-line surface."""

from __future__ import annotations

import io
import json
from contextlib import redirect_stdout

import numpy as np
import pytest

from xplego.cli import main
from xplego.code_structure import (
    canonical_form,
    codewords,
    counting_check,
    orbit_decomposition,
    z_support,
)
from xplego.dense_oracle import stabilizes, state_from_pairs
from xplego.registry import (
    UnknownCodeError,
    group_from_json,
    group_to_json,
    lookup,
    registry,
)
from xplego.xp_algebra import XpOperator


def run_cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(list(argv))
    return rc, buf.getvalue()


def test_every_entry_is_canonical_and_serializable():
    for name, entry in registry().items():
        canonical = canonical_form(entry.group)
        assert canonical_form(canonical).generators == canonical.generators, name
        doc = json.loads(json.dumps(group_to_json(canonical, entry.designation)))
        parsed, designation = group_from_json(doc)
        assert parsed.generators == canonical.generators, name
        assert designation == entry.designation, name


def test_counting_on_power_of_two_entries():
    for name, entry in registry().items():
        assert counting_check(entry.group), name


def test_atomic_states_are_stabilized():
    for name in ("zero", "H-magic", "bell", "hadamard", "phase", "ghz", "xspider"):
        entry = lookup(name)
        table = codewords(entry.group)
        assert len(table.entries) == 1, name
        vec = state_from_pairs(table.entries[0], entry.group.n, entry.group.precision)
        for op in entry.group.generators:
            assert stabilizes(op, vec, tol=1e-9), name


def test_magic_entry_matches_its_state():
    entry = lookup("H-magic")
    assert entry.group.generators == (XpOperator(8, (1,), (6,), 2),)
    state = state_from_pairs([(0, 0), (1, 2)], 1, 8)
    assert stabilizes(entry.group.generators[0], state, tol=1e-12)


def test_reed_muller_structure():
    entry = lookup("rm15")
    g = canonical_form(entry.group)
    assert g.n == 15 and g.precision == 2
    assert len(g.x_block) == 4 and len(g.z_block) == 10
    od = orbit_decomposition(g)
    assert od.regular and len(od.logical_x_dirs) == 1
    assert len(z_support(g)) == 32


def test_lookup_unknown_reports_candidates():
    with pytest.raises(UnknownCodeError) as err:
        lookup("not-a-code")
    assert "steane-xp" in str(err.value)


def test_cli_show_is_stable():
    rc1, out1 = run_cli("show", "722")
    rc2, out2 = run_cli("show", "722")
    assert rc1 == rc2 == 0
    assert out1 == out2
    assert "x: 1 1 1 0 0 0 0 | z: 0 0 7 0 0 0 0 | p: 9" in out1


def test_cli_canonical_is_stable(tmp_path):
    src = tmp_path / "in.json"
    entry = lookup("lego6-steane")
    src.write_text(json.dumps(group_to_json(entry.group, entry.designation)))
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["canonical", str(src), "-o", str(out1)]) == 0
    assert main(["canonical", str(src), "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    parsed, _ = group_from_json(json.loads(out1.read_text()))
    assert parsed.generators == canonical_form(entry.group).generators


def test_cli_enumerate_golden_line():
    rc, out = run_cli("enumerate", "steane-xp")
    assert rc == 0
    assert "A = 1 + 21z^4 + 42z^6" in out
    assert "distance = 3" in out


def test_cli_enumerate_biased():
    rc, out = run_cli("enumerate", "711", "--biased")
    assert rc == 0
    assert "dZ = 1" in out and "dX = 3" in out


def test_cli_trace_network(tmp_path):
    from importlib import resources
    path = resources.files("xplego").joinpath("data/networks/722_selftrace.json")
    rc, out = run_cli("trace", str(path))
    assert rc == 0
    doc = json.loads(out)
    assert doc["counting_check"] is True
    assert doc["matrix"]["n"] == 5


def test_cli_decode_report():
    rc, out = run_cli("decode", "--code", "steane-xp",
                      "--channel", "depolarizing:0.02", "--shots", "40", "--seed", "1")
    assert rc == 0
    doc = json.loads(out)
    assert doc["shots"] == 40
    assert 0.0 <= doc["rate"] <= 1.0


def test_cli_verify_single_code():
    rc, out = run_cli("verify", "422")
    assert rc == 0
    assert "[ok]" in out and "FAIL" not in out


def test_cli_unknown_name_is_usage_error():
    rc, _ = run_cli("show", "no-such-code")
    assert rc == 1


def test_cli_usage_error_exit_code():
    rc, _ = run_cli("bogus-command")
    assert rc == 1


def test_cli_trace_is_stable_and_matches_printed_matrix():
    from importlib import resources
    path = resources.files("xplego").joinpath("data/networks/722_selftrace.json")
    rc1, out1 = run_cli("trace", str(path))
    rc2, out2 = run_cli("trace", str(path))
    assert rc1 == rc2 == 0 and out1 == out2
    got = json.loads(out1)["matrix"]
    want = group_to_json(canonical_form(lookup("722-traced").group),
                         lookup("722-traced").designation)
    assert json.dumps(got, sort_keys=True) == json.dumps(want, sort_keys=True)


def test_cli_decode_with_kraus_file(tmp_path):
    p = 0.05
    kraus = [
        [[[np.sqrt(1 - p), 0.0], [0.0, 0.0]], [[0.0, 0.0], [np.sqrt(1 - p), 0.0]]],
        [[[0.0, 0.0], [np.sqrt(p), 0.0]], [[np.sqrt(p), 0.0], [0.0, 0.0]]],
    ]
    path = tmp_path / "chan.json"
    path.write_text(json.dumps(kraus))
    rc, out = run_cli("decode", "--code", "steane-xp",
                      "--channel", f"kraus:{path}", "--shots", "30", "--seed", "2")
    assert rc == 0
    assert json.loads(out)["shots"] == 30
