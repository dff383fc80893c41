"""The claim battery itself: ids, outcomes, crash containment."""

import math

import numpy as np
import pytest

from lambda_holonomy import claims as claims_mod
from lambda_holonomy.claims import ALL_CLAIM_IDS, ClaimSettings, run_claims


def test_claim_ids_are_one_through_nine():
    assert ALL_CLAIM_IDS == tuple(range(1, 10))


def test_light_settings_shrink_the_battery():
    light = ClaimSettings.light()
    full = ClaimSettings.default()
    assert light.spectrum_samples < full.spectrum_samples
    assert light.grid_n < full.grid_n
    assert len(light.scaling_ratios) < len(full.scaling_ratios)


def test_single_claim_runs_and_reports():
    out = run_claims(ClaimSettings.light(), claim_ids=(1,))
    assert len(out) == 1
    o = out[0]
    assert o.claim_id == 1
    assert o.passed
    assert o.value <= o.threshold
    assert o.elapsed >= 0.0
    assert o.criterion


def test_outcomes_are_deterministic():
    a = run_claims(ClaimSettings.light(), claim_ids=(2,))[0]
    b = run_claims(ClaimSettings.light(), claim_ids=(2,))[0]
    assert a.value == b.value
    assert a.passed == b.passed


def test_unknown_claim_id_is_rejected():
    with pytest.raises(ValueError, match="unknown claim ids"):
        run_claims(ClaimSettings.light(), claim_ids=(1, 42))


def test_crashed_claim_becomes_a_failed_row(monkeypatch):
    def boom(settings):
        raise RuntimeError("synthetic failure for the table test")

    monkeypatch.setitem(claims_mod._CLAIMS, 4, boom)
    out = run_claims(ClaimSettings.light(), claim_ids=(3, 4))
    assert [o.claim_id for o in out] == [3, 4]
    assert out[0].passed
    crashed = out[1]
    assert not crashed.passed
    assert math.isnan(crashed.value)
    assert "RuntimeError" in crashed.detail
    assert "synthetic failure" in crashed.detail


def test_negative_control_flags_exactly_the_sign_claim():
    # claim 9 replays the battery with the flipped-sign connection wired
    # in where the corrected one belongs; only the triviality claim may
    # notice, anything else failing means a claim tests the wrong object
    out = run_claims(ClaimSettings.light(), claim_ids=(9,))[0]
    assert out.passed, out.detail


def test_requested_order_is_id_order():
    out = run_claims(ClaimSettings.light(), claim_ids=(2, 1))
    assert [o.claim_id for o in out] == [1, 2]
