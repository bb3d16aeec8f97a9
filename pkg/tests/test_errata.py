import json

import pytest

from wheelgreen import errata
from wheelgreen.errors import LedgerStateError, UnresolvedReconstructionError
from wheelgreen.wheel import WheelParams

EXPECTED = {
    "thm21_Nk": "reconstructed",
    "thm21_border": "reconstructed",
    "thm21_corner": "verified-as-printed",
    "prop31_Rij": "reconstructed",
    "prop31_Rhub": "reconstructed",
    "prop31_kirchhoff": "reconstructed",
    "cor32_kirchhoff": "reconstructed",
    "grinv_circulant": "reconstructed",
    "mr_entries": "verified-as-printed",
    "f_entries": "verified-as-printed",
    "h_columns": "reconstructed",
    "k_blocks": "verified-as-printed",
    "m_blocks": "reconstructed",
    "gs_vector": "verified-as-printed",
}


@pytest.fixture(scope="module")
def ledger():
    return errata.Reconciliation().run()


def test_default_sweep_size():
    sweep = errata.default_sweep()
    assert len(sweep) == 75
    assert max(p.n for p in sweep) == 30
    assert sweep == sorted(sweep, key=lambda p: (p.m, p.d, p.a, p.c))


def test_statuses(ledger):
    assert {r.formula_id: r.status for r in ledger} == EXPECTED
    assert set(errata.REQUIRED_IDS) <= set(EXPECTED)


def test_records_are_consistent(ledger):
    for r in ledger:
        assert r.max_abs_deviation <= errata.ACCEPT_TOL
        if r.status == "verified-as-printed":
            assert r.edits == [] and r.max_abs_deviation <= errata.PRINTED_TOL
        else:
            assert r.edits
        # every formula has exactly one reading that survives the sweep
        assert r.candidates_matching == 1, r.formula_id
        assert r.sweep_size > 0


def test_accepted_readings(ledger):
    assert ledger["thm21_Nk"].accepted_options == {"ops": ["-", "+", "+"], "index": "shifted"}
    assert ledger["cor32_kirchhoff"].accepted_options == {"op": "+"}
    assert ledger["prop31_kirchhoff"].accepted_options == {"final": "corrected"}
    assert ledger["cor32_kirchhoff"].sweep_size == 15


def test_ledger_is_deterministic(ledger):
    again = errata.Reconciliation().run()
    assert again.to_json() == ledger.to_json()
    json.loads(ledger.to_json())


def test_report_before_run():
    rec = errata.Reconciliation([WheelParams(3, 1, 1, 1)])
    assert not rec.has_run
    with pytest.raises(LedgerStateError):
        errata.errata_report(rec)
    rec.run()
    assert rec.has_run
    assert errata.errata_report(rec)["thm21_corner"].status == "verified-as-printed"


def test_operator_only_candidates():
    rec = errata.Reconciliation(errata.default_sweep(range(2, 4), range(1, 3)), operators_only=True)
    led = rec.run()
    assert set(led.unresolved()) == {
        "thm21_Nk", "thm21_border", "prop31_Rij", "prop31_Rhub",
        "prop31_kirchhoff", "grinv_circulant", "m_blocks",
    }
    assert led["cor32_kirchhoff"].status == "reconstructed"
    with pytest.raises(UnresolvedReconstructionError):
        rec.require_resolved("thm21_Nk")
    assert led["thm21_Nk"].max_abs_deviation > errata.ACCEPT_TOL


def test_missing_required_id_rejected():
    with pytest.raises(LedgerStateError, match="thm21_Nk"):
        errata.ErrataLedger([])
