import pytest

from scalefuture.adapters.tables import read_table, render_table
from scalefuture.commands.figures import FIGURE_IDS, reproduce_figure, summary_table
from scalefuture.core.config import RunConfig
from scalefuture.core.errors import UsageError


EXPECTED_CLAIMS = {
    "fig3": {"recent_predecessor_closer", "beta_alpha_lag", "unpreceded_rows_zero", "row_sums"},
    "fig4": {"alpha_peak", "beta_peak", "overlay_alpha", "overlay_beta", "value_ratio_invariant",
             "decision_invariant", "scan_cost_stretch", "scan_alpha_first", "row_sums_x1", "row_sums_x4"},
    "fig5": {"power_law_slope", "halving_5", "halving_10"},
    "fig6": {"shock_peak", "food_peak", "early_window_negative", "late_window_positive",
             "neutral_choice_empty", "row_sums"},
    "fig7": {"alpha_food_bump", "alpha_food_lag", "alpha_water_bump", "alpha_water_lag",
             "beta_food_bump", "beta_food_lag", "beta_water_bump", "beta_water_lag",
             "alpha_mass_ratio_sampled", "beta_mass_ratio_sampled", "alpha_mass_ratio_nominal",
             "present_axis_mass_bound", "row_sums"},
    "fig8": {"narrow_window_prefers_alpha", "wide_window_prefers_beta", "single_preference_reversal"},
    "sequences": {"shared_future_AX", "shared_future_BY", "A_predicts_C", "B_predicts_C",
                  "B_expected_before_C", "row_sums"},
}


@pytest.mark.slow
@pytest.mark.parametrize("fig_id", FIGURE_IDS)
def test_figure_claims_hold(fig_id):
    result = reproduce_figure(fig_id)
    failures = [claim.line() for claim in result.claims if not claim.passed]
    assert not failures, "\n".join(failures)
    assert {claim.name for claim in result.claims} == EXPECTED_CLAIMS[fig_id]
    assert result.table.meta["figure"] == fig_id
    assert result.table.meta["axis"] == "exposure"
    assert result.table.rows


def test_fig5_is_deterministic():
    a = reproduce_figure("fig5")
    b = reproduce_figure("fig5")
    config = RunConfig()
    assert render_table(a.table, config) == render_table(b.table, config)


def test_fig4_clear_winner_survives_stretch():
    result = reproduce_figure("fig4")
    assert result.claim("decision_invariant").passed
    assert "'alpha'/'alpha'" in result.claim("decision_invariant").detail
    values = result.table.meta["unequal_cached_values"]
    for scale in ("x1", "x4"):
        assert values[scale]["alpha"] == pytest.approx(2 * values[scale]["beta"], rel=0.1)


def test_fig8_values_flip_with_window():
    result = reproduce_figure("fig8")
    narrow = {row[2]: row[3] for row in result.table.rows if row[:2] == (0.0, 8.0)}
    wide = {row[2]: row[3] for row in result.table.rows if row[:2] == (0.0, 60.0)}
    assert narrow["alpha"] > narrow["beta"]
    assert wide["beta"] > wide["alpha"]


def test_summary_table(tmp_path):
    results = [reproduce_figure("fig3"), reproduce_figure("sequences")]
    table = summary_table(results)
    assert table.columns == ["figure", "claim", "passed", "detail"]
    assert len(table.rows) == sum(len(result.claims) for result in results)
    path = tmp_path / "summary.csv"
    path.write_text(render_table(table))
    parsed = read_table(path)
    passed = parsed.columns.index("passed")
    assert {row[passed] for row in parsed.rows} == {"true"}


def test_unknown_figure():
    with pytest.raises(UsageError):
        reproduce_figure("fig9")
