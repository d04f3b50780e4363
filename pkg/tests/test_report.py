import json
from datetime import date

import pytest

from retroscope.eventstudy import (
    EventOutcome,
    HypothesisResult,
    KeyEvent,
    KWindowResult,
    SkippedEvent,
)
from retroscope.report import (
    RenderedTable,
    chart_payload,
    emit_effect_plot_data,
    emit_prepost_scatter,
    render_event_table,
    result_markdown,
    stable_json,
)
from retroscope.stats import TestResult


def h3_result(cells):
    """cells: list of (date, percent, p_adjusted)."""
    outcomes = []
    for day, percent, p_adj in cells:
        test = TestResult(
            statistic=percent,
            effect_size_d=None,
            p_raw=min(p_adj, 1.0),
            n_a=15,
            n_b=300,
        )
        test.p_adjusted = p_adj
        outcomes.append(
            EventOutcome(
                event=KeyEvent(day, "e", "elections"),
                test=test,
                percent_change=percent,
                significant=p_adj <= 0.05,
            )
        )
    return HypothesisResult(
        analysis="h3",
        alpha=0.05,
        n_events=len(cells),
        n_events_used=len(cells),
        per_event=outcomes,
        labels={"movement": "metoo", "platform": "news"},
    )


def kres(k, d, p_adj, ci=(None, None)):
    test = TestResult(
        statistic=d,
        effect_size_d=d,
        p_raw=min(p_adj, 1.0),
        n_a=6,
        n_b=6,
        ci_low=ci[0],
        ci_high=ci[1],
    )
    test.p_adjusted = p_adj
    return KWindowResult(
        k=k, test=test, percent_change=None, n_events_used=6, skipped=[], per_event=[]
    )


# ---------------------------------------------------------------------------
# render_event_table
# ---------------------------------------------------------------------------

def test_table_positive_significant_cell():
    result = h3_result([(date(2024, 11, 5), 54.7, 0.0005)])
    table = render_event_table(result, "markdown")
    cell = table.rows[0]["metoo:news"]
    assert cell["stars"] == "***"
    assert cell["color"] == pytest.approx(1.0)
    assert "54.7***" in table.to_markdown()


def test_table_zero_cell_unstarred():
    result = h3_result([(date(2024, 11, 5), 0.0, 1.0)])
    cell = render_event_table(result).rows[0]["metoo:news"]
    assert cell["stars"] == ""
    assert cell["color"] == 0.0


def test_table_negative_significant_cell():
    result = h3_result(
        [(date(2024, 11, 5), -85.8, 0.0001), (date(2024, 11, 12), 42.9, 0.2)]
    )
    table = render_event_table(result)
    cell = table.rows[0]["metoo:news"]
    assert cell["stars"] == "***"
    assert cell["color"] == pytest.approx(-1.0)
    assert "-85.8***" in table.to_markdown()
    # color intensity proportional to |value| relative to the table max
    other = table.rows[1]["metoo:news"]
    assert other["color"] == pytest.approx(42.9 / 85.8)


def test_table_wrong_analysis_rejected():
    result = h3_result([(date(2024, 11, 5), 1.0, 0.5)])
    result.analysis = "h1"
    with pytest.raises(ValueError):
        render_event_table(result)


def test_table_multi_dataset_columns():
    a = h3_result([(date(2024, 11, 5), 10.0, 0.5)])
    b = h3_result([(date(2024, 11, 5), -20.0, 0.009)])
    table = render_event_table({"news": a, "reddit": b})
    assert table.columns == ["event", "news", "reddit"]
    assert table.rows[0]["reddit"]["stars"] == "**"


def test_table_json_roundtrip():
    result = h3_result(
        [(date(2024, 11, 5), 54.7, 0.0005), (date(2025, 1, 20), -3.25, 0.8)]
    )
    table = render_event_table(result, "json")
    parsed = json.loads(table.to_json())
    assert parsed["rows"] == table.rows
    assert parsed["columns"] == table.columns


def test_table_csv_and_formats():
    result = h3_result([(date(2024, 11, 5), 54.7, 0.0005)])
    assert "54.7***" in render_event_table(result, "csv").render()
    with pytest.raises(ValueError):
        RenderedTable(format="xml", columns=[], rows=[])


# ---------------------------------------------------------------------------
# emit_effect_plot_data
# ---------------------------------------------------------------------------

def test_effect_plot_point():
    result = HypothesisResult(
        analysis="h1",
        alpha=0.05,
        n_events=6,
        n_events_used=6,
        by_k={7: kres(7, 1.17, 0.001, ci=(0.8, 1.5))},
    )
    payload = emit_effect_plot_data(result, [7])
    point = payload["points"][0]
    assert point == {
        "k": 7,
        "d": 1.17,
        "ci_low": 0.8,
        "ci_high": 1.5,
        "significant": True,
        "missing_ci": False,
    }


def test_effect_plot_empty_ks():
    result = HypothesisResult(
        analysis="h4", alpha=0.05, n_events=6, n_events_used=6,
        by_k={7: kres(7, 0.2, 0.8)},
    )
    assert emit_effect_plot_data(result, []) ["points"] == []


def test_effect_plot_insignificant_and_missing_ci():
    result = HypothesisResult(
        analysis="h4", alpha=0.05, n_events=6, n_events_used=6,
        by_k={3: kres(3, 0.0, 0.9)},
    )
    point = emit_effect_plot_data(result)["points"][0]
    assert not point["significant"]
    assert point["missing_ci"]


def test_effect_plot_wrong_analysis():
    result = h3_result([(date(2024, 11, 5), 1.0, 0.5)])
    with pytest.raises(ValueError):
        emit_effect_plot_data(result)


# ---------------------------------------------------------------------------
# emit_prepost_scatter
# ---------------------------------------------------------------------------

def h5_result():
    outcomes = []
    for day, pre, post, p_adj in [
        (date(2024, 11, 5), 2.0, 1.5, 0.01),
        (date(2025, 1, 20), 1.2, 1.9, 0.4),
    ]:
        test = TestResult(statistic=10.0, effect_size_d=None, p_raw=p_adj, n_a=7, n_b=7)
        test.p_adjusted = p_adj
        outcomes.append(
            EventOutcome(
                event=KeyEvent(day, "e", "elections"),
                test=test,
                direction="anticipatory" if pre > post else "reactive",
                significant=p_adj <= 0.05,
                detail={"pre_mean": pre, "post_mean": post},
            )
        )
    return HypothesisResult(
        analysis="h5",
        alpha=0.05,
        n_events=3,
        n_events_used=2,
        skipped=[SkippedEvent(date(2025, 8, 30), "boundary")],
        per_event=outcomes,
    )


def test_scatter_points_and_directions():
    payload = emit_prepost_scatter(h5_result())
    above = payload["points"][0]
    assert above["pre"] > above["post"]
    assert above["direction"] == "anticipatory"
    assert above["significant"] is True
    below = payload["points"][1]
    assert below["direction"] == "reactive"
    assert below["significant"] is False


def test_scatter_skipped_in_metadata_only():
    payload = emit_prepost_scatter(h5_result())
    assert payload["skipped"] == 1
    assert len(payload["points"]) == 2


def test_scatter_wrong_analysis():
    result = h3_result([(date(2024, 11, 5), 1.0, 0.5)])
    with pytest.raises(ValueError):
        emit_prepost_scatter(result)


# ---------------------------------------------------------------------------
# misc
# ---------------------------------------------------------------------------

def test_chart_payload_dispatch():
    assert chart_payload(h5_result())["chart"] == "prepost_scatter"
    assert chart_payload(h3_result([(date(2024, 11, 5), 1.0, 0.5)]))["chart"] == "event_heat_table"


def test_stable_json_sorted_and_compact():
    assert stable_json({"b": 1, "a": [1.5, None]}) == '{"a":[1.5,null],"b":1}'


def test_result_markdown_runs():
    text = result_markdown(h5_result())
    assert "anticipatory" in text
    text3 = result_markdown(h3_result([(date(2024, 11, 5), 54.7, 0.0005)]))
    assert "54.7***" in text3
