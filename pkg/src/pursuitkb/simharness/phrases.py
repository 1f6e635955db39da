"""Phrase set loading for experiments and for training the default model."""

from __future__ import annotations

import re
from importlib import resources

_CLEAN_RE = re.compile(r"[^a-z ]+")


def default_phrase_text() -> str:
    """Raw packaged phrase file (also the default language-model corpus)."""
    return resources.files("pursuitkb.data").joinpath("phrases.txt").read_text("utf-8")


def normalize_phrase(line: str) -> str:
    """Lowercase, strip everything outside a-z/space, collapse whitespace."""
    return " ".join(_CLEAN_RE.sub(" ", line.lower()).split())


def load_phrase_set(
    path=None,
    min_len: int = 16,
    max_len: int = 32,
    min_words: int = 2,
) -> list[str]:
    """Typing-task phrases, filtered to the configured length band.

    Uses the packaged phrase file unless a path is given. The default band
    matches the stimulus lengths used in the experiments (16-32 chars).
    """
    if path is None:
        text = default_phrase_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    phrases = []
    for line in text.splitlines():
        phrase = normalize_phrase(line)
        if not phrase:
            continue
        if min_len <= len(phrase) <= max_len and len(phrase.split()) >= min_words:
            phrases.append(phrase)
    if not phrases:
        raise ValueError("phrase set is empty after filtering")
    return phrases
