"""Table renderings and the shared JSON payloads."""

from __future__ import annotations

import dataclasses
import json

from slsboard import rank
from slsboard.render import (
    dumps,
    leaderboard_payload,
    render_html,
    render_text,
    table_header,
)


def test_header_puts_dimensions_between_date_and_metrics(fixture_board):
    header = table_header(fixture_board)
    assert header[:7] == ["rank", "team", "entries", "date", "PT", "TL", "TD"]
    assert header[7] == "verb_top1"
    assert header.index("date") < header.index("PT") < header.index("verb_top1")


def test_text_table_lists_rows_in_rank_order(fixture_board):
    text = render_text(fixture_board)
    lines = text.splitlines()
    assert lines[0].startswith("rank")
    first_data = lines[2]
    assert "UTS-Baidu" in first_data and "42.57" in first_data


def test_text_table_empty_board_is_header_only(fixture_board):
    text = render_text(fixture_board.with_submissions([]))
    assert len(text.splitlines()) == 2  # header + rule


def test_unranked_table_preserves_ingestion_order(fixture_board):
    text = render_text(fixture_board, ranked=False)
    lines = [line for line in text.splitlines()[2:]]
    assert lines[2].split()[0] == "UTS-Baidu"  # 2019 row third in the file


def test_html_cells_carry_level_keyed_classes(fixture_board):
    html_text = render_html(fixture_board)
    assert '<td class="sls-pt sls-pt-5">5</td>' in html_text
    assert '<td class="sls-tl sls-tl-4">4</td>' in html_text
    assert '<td class="sls-td sls-td-4">4</td>' in html_text
    # Level 5 and level 0 cells must be distinguishable by class.
    assert "sls-pt-0" not in html_text or "sls-pt-5" in html_text


def test_html_level_classes_distinguish_levels(fixture_board):
    low = dataclasses.replace(
        fixture_board.submissions[0],
        id="low",
        sls=dataclasses.replace(fixture_board.submissions[0].sls, pt=0),
    )
    board = fixture_board.with_submissions([fixture_board.submissions[0], low])
    html_text = render_html(board)
    assert 'class="sls-pt sls-pt-5"' in html_text
    assert 'class="sls-pt sls-pt-0"' in html_text


def test_anonymous_rows_show_placeholder_but_keep_id(fixture_board):
    anonymous = dataclasses.replace(
        fixture_board.submissions[0], id="anon1", anonymous=True
    )
    board = fixture_board.with_submissions([anonymous])
    text = render_text(board)
    assert "(anonymous)" in text
    assert "UTS-Baidu" not in text
    payload = leaderboard_payload(board)
    assert payload["rows"][0]["id"] == "anon1"
    assert payload["rows"][0]["team"] == "(anonymous)"


def test_leaderboard_payload_shape(fixture_board):
    payload = leaderboard_payload(fixture_board)
    assert payload["task_id"] == "epic_kitchens_ar"
    assert payload["primary_metric"] == "action_top1"
    assert payload["count"] == 9
    ranked = rank(fixture_board)
    assert [row["id"] for row in payload["rows"]] == [s.id for _, s in ranked]
    assert [row["rank"] for row in payload["rows"]] == [r for r, _ in ranked]
    row = payload["rows"][0]
    assert row["sls"] == {"tag": "SLS-5-4-4", "pt": 5, "tl": 4, "td": 4}
    assert row["metrics"]["action_top1"] == 42.57


def test_dumps_is_compact_and_newline_terminated():
    text = dumps({"a": [1, 2], "b": "x"})
    assert text == '{"a":[1,2],"b":"x"}\n'
    assert json.loads(text) == {"a": [1, 2], "b": "x"}
