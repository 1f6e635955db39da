"""Count-based word/letter prediction trained on a plain-text corpus.

The model keeps unigram and bigram word counts (with the empty string as
the phrase-start context), a per-prefix next-letter table weighted by word
frequency, and the vocabulary. All queries are pure functions returning
deterministic total orders: ranked by count descending, ties alphabetical.
"""

from __future__ import annotations

import hashlib
import json
import re
from bisect import bisect_left
from collections import Counter, defaultdict
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"[a-z]+")

PREDICTION_SLOTS = ("up", "left", "right")
SLOT_BY_ARROW = {"ARROW_UP": "up", "ARROW_LEFT": "left", "ARROW_RIGHT": "right"}

MODE_COMPLETION = "completion"
MODE_NEXT_WORD = "next_word"


class EmptyCorpusError(ValueError):
    pass


class EmptySlotError(ValueError):
    pass


@dataclass(frozen=True)
class LanguageModel:
    unigram: dict[str, int]
    # bigram[""] holds phrase-initial counts.
    bigram: dict[str, dict[str, int]]
    prefix_letters: dict[str, dict[str, int]]
    vocab: frozenset[str]
    sorted_vocab: tuple[str, ...] = field(repr=False)


@dataclass(frozen=True)
class PredictionSet:
    """Current prediction state shown to the user.

    ``slot_map`` assigns the candidate ranked 1/2/3 to the up/left/right
    arrows; unused slots hold the empty string. ``mode`` is ``completion``
    while a word prefix is being typed and ``next_word`` after a word was
    finalized.
    """

    top_letters: tuple[str, ...] = ()
    completions: tuple[str, ...] = ()
    next_words: tuple[str, ...] = ()
    slot_map: dict[str, str] = field(default_factory=lambda: {s: "" for s in PREDICTION_SLOTS})
    mode: str = MODE_NEXT_WORD


EMPTY_PREDICTIONS = PredictionSet()


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def train_model(corpus: str) -> LanguageModel:
    """Count unigrams, bigrams and prefix continuations over the corpus.

    Each line is one phrase: bigrams never cross line boundaries and the
    first token of a line counts toward the phrase-start context.
    """
    unigram: Counter[str] = Counter()
    bigram: defaultdict[str, Counter[str]] = defaultdict(Counter)
    for line in corpus.splitlines():
        tokens = tokenize(line)
        if not tokens:
            continue
        unigram.update(tokens)
        bigram[""][tokens[0]] += 1
        for prev, cur in zip(tokens, tokens[1:]):
            bigram[prev][cur] += 1
    if not unigram:
        raise EmptyCorpusError("corpus contains no alphabetic tokens")

    prefix_letters: defaultdict[str, Counter[str]] = defaultdict(Counter)
    for word, count in unigram.items():
        for i in range(len(word)):
            prefix_letters[word[:i]][word[i]] += count

    return LanguageModel(
        unigram=dict(unigram),
        bigram={k: dict(v) for k, v in bigram.items()},
        prefix_letters={k: dict(v) for k, v in prefix_letters.items()},
        vocab=frozenset(unigram),
        sorted_vocab=tuple(sorted(unigram)),
    )


def _ranked(counts: dict[str, int], limit: int) -> list[str]:
    return [w for w, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:limit]]


def next_letters(model: LanguageModel, prefix: str, prev_word: str = "") -> list[str]:
    """Up to 4 most likely continuation letters for the current prefix.

    Ranked by the total frequency of vocabulary words extending the prefix
    with each letter. ``prev_word`` is accepted for future context-aware
    ranking but not consulted.
    """
    del prev_word
    table = model.prefix_letters.get(prefix.lower())
    if not table:
        return []
    return _ranked(table, 4)


def word_completions(model: LanguageModel, prefix: str) -> list[str]:
    """Up to 3 vocabulary words starting with the prefix, most frequent first."""
    if not prefix:
        raise ValueError("prefix must be non-empty")
    prefix = prefix.lower()
    lo = bisect_left(model.sorted_vocab, prefix)
    candidates: dict[str, int] = {}
    for word in model.sorted_vocab[lo:]:
        if not word.startswith(prefix):
            break
        candidates[word] = model.unigram[word]
    return _ranked(candidates, 3)


def next_words(model: LanguageModel, prev_word: str = "") -> list[str]:
    """Up to 3 follow-up words for the last finalized word.

    Ranked by bigram count; falls back to the overall unigram ranking when
    the context has no bigram mass. The empty context means phrase start.
    """
    table = model.bigram.get(prev_word.lower())
    if table:
        return _ranked(table, 3)
    return _ranked(model.unigram, 3)


def split_buffer(buffer: str) -> tuple[str, str]:
    """(last finalized word, current word prefix) of a text buffer."""
    head, _, prefix = buffer.rpartition(" ")
    prev_word = head.rpartition(" ")[2]
    return prev_word.lower(), prefix.lower()


def predict_set(model: LanguageModel, buffer: str, variant: str) -> PredictionSet:
    """Prediction state for the given buffer under one interface variant.

    The no-prediction variant gets an empty set; the letter-prediction
    variant only needs the top letters; the full variant adds completions
    or next words depending on whether a prefix is being typed.
    """
    if variant == "NoP":
        return EMPTY_PREDICTIONS
    prev_word, prefix = split_buffer(buffer)
    letters = tuple(next_letters(model, prefix, prev_word))
    if variant == "LP":
        return PredictionSet(top_letters=letters)
    if prefix:
        words = tuple(word_completions(model, prefix))
        mode = MODE_COMPLETION
    else:
        words = tuple(next_words(model, prev_word))
        mode = MODE_NEXT_WORD
    slots = {s: (words[i] if i < len(words) else "") for i, s in enumerate(PREDICTION_SLOTS)}
    return PredictionSet(
        top_letters=letters,
        completions=words if mode == MODE_COMPLETION else (),
        next_words=words if mode == MODE_NEXT_WORD else (),
        slot_map=slots,
        mode=mode,
    )


def lp_travel(layout, key, top_letters) -> float:
    """Pursuit travel for a key given the current top-letter predictions.

    A letter key travels the shortened distance iff it is predicted and it
    is the only predicted letter in its cluster; arrows always travel the
    arrow distance; anything else (and the whole NoP variant) travels the
    default distance.
    """
    params = layout.params
    if key.is_arrow:
        return params.arrow_distance_px
    if layout.variant == "NoP":
        return params.move_distance_px
    letter = key.letter
    if letter is None or letter not in top_letters:
        return params.move_distance_px
    cluster = layout.clusters[key.cluster_index]
    predicted_here = sum(
        1 for k in cluster.keys if k.letter is not None and k.letter in top_letters
    )
    return params.lp_move_distance_px if predicted_here == 1 else params.move_distance_px


def apply_word_selection(
    buffer: str, slot: str, predictions: PredictionSet
) -> tuple[str, str]:
    """Commit the predicted word in the given arrow slot.

    In completion mode the current prefix is replaced by the word; in
    next-word mode the word is appended. A trailing space finalizes it.
    """
    word = predictions.slot_map.get(slot, "")
    if not word:
        raise EmptySlotError(f"prediction slot {slot!r} is empty")
    if predictions.mode == MODE_COMPLETION:
        _, prefix = split_buffer(buffer)
        buffer = buffer[: len(buffer) - len(prefix)]
    return buffer + word + " ", word


# --- optional JSON cache keyed by corpus content -----------------------------


def corpus_cache_key(corpus: str) -> str:
    return hashlib.sha256(corpus.encode("utf-8")).hexdigest()[:16]


def save_model(model: LanguageModel, path) -> None:
    doc = {
        "unigram": model.unigram,
        "bigram": model.bigram,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_model(path) -> LanguageModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    unigram = {str(k): int(v) for k, v in doc["unigram"].items()}
    prefix_letters: defaultdict[str, Counter[str]] = defaultdict(Counter)
    for word, count in unigram.items():
        for i in range(len(word)):
            prefix_letters[word[:i]][word[i]] += count
    return LanguageModel(
        unigram=unigram,
        bigram={str(k): {str(w): int(c) for w, c in v.items()} for k, v in doc["bigram"].items()},
        prefix_letters={k: dict(v) for k, v in prefix_letters.items()},
        vocab=frozenset(unigram),
        sorted_vocab=tuple(sorted(unigram)),
    )
