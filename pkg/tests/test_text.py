from __future__ import annotations

from ideation_engine.text import (
    STOP_WORDS,
    content_terms,
    normalize_answer_text,
    raw_tokens,
    split_sentences,
    strip_markdown,
)


def test_raw_tokens_keep_short_tokens():
    assert raw_tokens("A b. C d.") == ["a", "b", "c", "d"]


def test_content_terms_drop_stops_and_short_tokens():
    assert content_terms("What do people dislike about the pot?") == [
        "people", "dislike", "pot"]
    assert content_terms("a I of") == []


def test_stop_word_list_size_is_about_120():
    assert 100 <= len(STOP_WORDS) <= 140


def test_split_sentences_on_punctuation_and_newlines():
    assert split_sentences("A b. C d.") == ["A b.", "C d."]
    assert split_sentences("one line\ntwo line") == ["one line", "two line"]
    assert split_sentences("Really? Yes! Fine.") == ["Really?", "Yes!", "Fine."]
    assert split_sentences("v1.2 is out") == ["v1.2 is out"]


def test_strip_markdown_heading_example():
    assert strip_markdown("# Pot XYZ\nuses induction heating") == \
        "Pot XYZ\nuses induction heating"


def test_strip_markdown_links_emphasis_fences():
    text = "## Title\nSee [the docs](http://x) for *emphasis* and **bold**.\n```py\ncode here\n```"
    stripped = strip_markdown(text)
    assert "the docs" in stripped and "http://x" not in stripped
    assert "emphasis" in stripped and "*" not in stripped
    assert "code here" in stripped and "```" not in stripped


def test_normalize_answer_text_collapses_case_and_space():
    assert normalize_answer_text("  The  POT\tburns ") == "the pot burns"
