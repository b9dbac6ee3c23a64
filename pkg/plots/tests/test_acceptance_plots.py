"""Acceptance criterion for the plotting component, one test (run pytest -v).

Round trip: every figure kind renders byte-identically from the committed
fixtures, the synthetic power law is annotated at slope 0.50 +/- 0.01, schema
errors name the missing column, inputs are never mutated — and the simulator
package stays independent of this one.
"""

import hashlib
from pathlib import Path

import pytest

from bo4plot import SchemaError, figures
from bo4plot.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
REPO = Path(__file__).resolve().parents[2]


def _fingerprint():
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(FIXTURES.iterdir())
    }


def test_criterion_11_plot_round_trip(tmp_path):
    before = _fingerprint()

    # every kind, rendered twice through the CLI: byte-identical pairs
    jobs = [
        ("energy_trace", "trajectory.csv"),
        ("energy_trace", "loss_report.json"),
        ("loglog_fit", "powerlaw.csv"),
        ("loglog_fit", "bona_smith_report.json"),
        ("loglog_fit", "mollifier_report.json"),
        ("spectrum_waterfall", "manifest.json"),
    ]
    for i, (kind, src) in enumerate(jobs):
        first = tmp_path / f"{i}_a.png"
        second = tmp_path / f"{i}_b.png"
        assert main([kind, "--in", str(FIXTURES / src), "--out", str(first)]) == 0
        assert main([kind, "--in", str(FIXTURES / src), "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes(), (kind, src)

    # synthetic y = x^0.5: slope within 0.50 +/- 0.01 and annotated on the figure
    result = figures.loglog_fit(FIXTURES / "powerlaw.csv", tmp_path / "pow.png")
    assert abs(result["slope"] - 0.5) <= 0.01  # measured 0.5 to 1e-15
    assert result["annotation"] == "slope = 0.500"

    # schema mismatch is a named-column error, not a traceback
    bad = tmp_path / "bad.csv"
    bad.write_text("t,hs_4,E_l2\n0,1,1\n1,2,2\n")
    with pytest.raises(SchemaError, match="'E_s'"):
        figures.energy_trace(bad, tmp_path / "bad.png")

    # plotting is read-only: the fixture corpus is untouched
    assert _fingerprint() == before

    # independence both ways: the simulator never references this package
    # (its suite runs with plots absent), and these modules never import it
    for tree in (REPO / "src", REPO / "tests"):
        assert [p for p in tree.rglob("*.py") if "bo4plot" in p.read_text()] == []
    plot_src = REPO / "plots" / "src"
    assert [p for p in plot_src.rglob("*.py") if "bo4lab" in p.read_text()] == []
