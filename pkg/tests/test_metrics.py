import random

import pytest
from hypothesis import given, strategies as st

from logstencil.metrics import LineIdMismatch, evaluate, normalize_template

from oracles import metrics_by_enumeration

FIVE_MESSAGE_TRUTH = {
    "m1": "connected to <*>",
    "m2": "connected to <*>",
    "m3": "connected to <*>",
    "m4": "shutdown succeeded",
    "m5": "shutdown succeeded",
}
FIVE_MESSAGE_PARSED = {
    "m1": "connected to <*>",
    "m2": "connected to <*>",
    "m3": "connected to <*>",
    "m4": "shutdown succeeded",
    "m5": "shutdown <*>",
}


def test_normalize_template():
    assert normalize_template("  a  <*> ") == "a <*>"
    assert normalize_template("a <*>") == "a <*>"
    assert normalize_template("a\t b\n") == "a b"


@given(st.text(max_size=40))
def test_normalize_is_idempotent(text):
    once = normalize_template(text)
    assert normalize_template(once) == once


def test_hand_enumerated_five_message_fixture():
    report = evaluate(FIVE_MESSAGE_PARSED, FIVE_MESSAGE_TRUTH)
    assert report.ga == pytest.approx(0.6)
    assert report.fga == pytest.approx(0.4)
    assert report.pa == pytest.approx(0.8)
    assert report.fta == pytest.approx(0.4)
    assert report.truth_templates == 2
    assert report.parsed_templates == 3
    assert report.correct_groups == 1
    assert report.correct_templates == 1


def test_perfect_parse_scores_one_everywhere():
    report = evaluate(FIVE_MESSAGE_TRUTH, dict(FIVE_MESSAGE_TRUTH))
    assert (report.ga, report.fga, report.pa, report.fta) == (1.0, 1.0, 1.0, 1.0)


def test_grouping_correct_but_wording_wrong():
    truth = {1: "a <*>", 2: "a <*>", 3: "b"}
    parsed = {1: "a thing", 2: "a thing", 3: "b"}
    report = evaluate(parsed, truth)
    assert report.ga == 1.0
    assert report.fga == 1.0
    assert report.pa == pytest.approx(1 / 3)
    assert report.fta == pytest.approx(0.5)
    assert report.fta <= report.fga


def test_key_mismatch_is_reported_with_ids():
    with pytest.raises(LineIdMismatch) as excinfo:
        evaluate({1: "a", 2: "b"}, {1: "a", 3: "b"})
    assert excinfo.value.missing == [3]
    assert excinfo.value.extra == [2]


def test_empty_inputs_rejected():
    with pytest.raises(ValueError):
        evaluate({}, {})


def _random_instance(rng: random.Random):
    message_count = rng.randint(1, 12)
    truth_templates = [f"truth template {i} <*>" for i in range(rng.randint(1, 4))]
    parsed_templates = [f"parsed template {i} <*>" for i in range(rng.randint(1, 4))]
    truth = {}
    parsed = {}
    for line_id in range(1, message_count + 1):
        truth[line_id] = rng.choice(truth_templates)
        # half the time copy the truth wording so PA/FTA move too
        parsed[line_id] = truth[line_id] if rng.random() < 0.5 else rng.choice(parsed_templates)
    return parsed, truth


def test_matches_enumeration_oracle_on_random_instances():
    rng = random.Random(99)
    for _ in range(200):
        parsed, truth = _random_instance(rng)
        report = evaluate(parsed, truth)
        expected = metrics_by_enumeration(parsed, truth)
        assert report.ga == pytest.approx(expected["GA"])
        assert report.pa == pytest.approx(expected["PA"])
        assert report.fga == pytest.approx(expected["FGA"])
        assert report.fta == pytest.approx(expected["FTA"])


def test_metrics_invariant_under_id_relabeling():
    rng = random.Random(5)
    parsed, truth = _random_instance(rng)
    relabel = {line_id: f"renamed-{line_id}" for line_id in parsed}
    report = evaluate(parsed, truth)
    relabeled = evaluate(
        {relabel[i]: t for i, t in parsed.items()},
        {relabel[i]: t for i, t in truth.items()},
    )
    assert (report.ga, report.fga, report.pa, report.fta) == (
        relabeled.ga,
        relabeled.fga,
        relabeled.pa,
        relabeled.fta,
    )


def test_metrics_invariant_under_input_order():
    rng = random.Random(6)
    parsed, truth = _random_instance(rng)
    ids = list(parsed)
    rng.shuffle(ids)
    report = evaluate(parsed, truth)
    shuffled = evaluate({i: parsed[i] for i in ids}, {i: truth[i] for i in ids})
    assert (report.ga, report.fga, report.pa, report.fta) == (
        shuffled.ga,
        shuffled.fga,
        shuffled.pa,
        shuffled.fta,
    )


def test_report_bounds_and_consistency():
    rng = random.Random(7)
    for _ in range(50):
        parsed, truth = _random_instance(rng)
        report = evaluate(parsed, truth)
        for value in (report.ga, report.fga, report.pa, report.fta):
            assert 0.0 <= value <= 1.0
        assert report.fta <= report.fga + 1e-12
        assert report.correct_groups <= min(report.parsed_templates, report.truth_templates)
        if report.pa == 1.0 and report.ga == 1.0:
            assert report.fga == 1.0 and report.fta == 1.0


def test_per_template_breakdown():
    report = evaluate(FIVE_MESSAGE_PARSED, FIVE_MESSAGE_TRUTH)
    rows = {row.template: row for row in report.per_template}
    assert rows["connected to <*>"].grouped_correctly is True
    assert rows["connected to <*>"].exact is True
    assert rows["shutdown succeeded"].grouped_correctly is False
    assert rows["shutdown <*>"].grouped_correctly is False
    assert rows["connected to <*>"].line_count == 3
