"""Deterministic text utilities: tokenization, sentence splitting, markup stripping.

Two tokenizers coexist on purpose. ``raw_tokens`` keeps every alphanumeric
run (passages are indexed with it, so single-letter words still count toward
passage length); ``content_terms`` additionally drops stop words and tokens
shorter than two characters and is used for queries, contexts and concept
candidates.
"""
from __future__ import annotations

import re

# ~120 English function words, fixed in-repo for determinism.
STOP_WORDS = frozenset("""
a about above after again against all am an and any are as at be because been
before being below between both but by can cannot could did do does doing down
during each few for from further had has have having he her here hers herself
him himself his how i if in into is it its itself just me more most my myself
no nor not now of off on once only or other our ours ourselves out over own
same she should so some such than that the their theirs them themselves then
there these they this those through to too under until up very was we were
what when where which while who whom why will with would you your yours
yourself yourselves
""".split())

# Tokens removed from context terms to obtain focus terms.  The stop list
# already covers these; the set keeps the contract explicit if the list changes.
INTERROGATIVE_TERMS = frozenset(
    "what who whom when where why how which many do does did is are was were "
    "can could should would will".split()
)

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SENTENCE_RE = re.compile(r"(?<=[.?!])\s+|\n+")


def raw_tokens(text: str) -> list[str]:
    """Lowercase alphanumeric runs, nothing dropped."""
    return _TOKEN_RE.findall(text.lower())


def content_terms(text: str) -> list[str]:
    """Tokens of length >= 2 with stop words removed, in text order."""
    return [t for t in raw_tokens(text) if len(t) >= 2 and t not in STOP_WORDS]


def term_set(text: str) -> set[str]:
    return set(content_terms(text))


def split_sentences(text: str) -> list[str]:
    """Split on ./?/! followed by whitespace, and on newlines."""
    parts = _SENTENCE_RE.split(text)
    return [p.strip() for p in parts if p and p.strip()]


def normalize_answer_text(text: str) -> str:
    """Normalization used when merging duplicate candidate answers."""
    return " ".join(text.lower().split())


_HEADING_RE = re.compile(r"^#{1,6}\s+", re.MULTILINE)
_FENCE_RE = re.compile(r"^```[^\n]*$", re.MULTILINE)
_IMAGE_RE = re.compile(r"!\[([^\]]*)\]\([^)]*\)")
_LINK_RE = re.compile(r"\[([^\]]+)\]\([^)]*\)")
_EMPHASIS_RE = re.compile(r"\*\*|\*|__|\b_|_\b")


def strip_markdown(text: str) -> str:
    """Remove heading/emphasis/link/fence markup, keeping the visible text."""
    text = _FENCE_RE.sub("", text)
    text = _HEADING_RE.sub("", text)
    text = _IMAGE_RE.sub(r"\1", text)
    text = _LINK_RE.sub(r"\1", text)
    text = _EMPHASIS_RE.sub("", text)
    text = text.replace("`", "")
    # collapse blank lines left behind by removed fences
    lines = [ln.rstrip() for ln in text.split("\n")]
    out: list[str] = []
    for ln in lines:
        if ln == "" and (not out or out[-1] == ""):
            continue
        out.append(ln)
    while out and out[-1] == "":
        out.pop()
    return "\n".join(out)
