"""Character-level noise injection.

For each sentence, a configurable fraction of its words receives exactly
one random grapheme edit: a deletion, a substitution with a different
cluster drawn from the corpus inventory, or an insertion of an inventory
cluster at a random slot. Words consisting solely of punctuation or
numerals are never touched.

Randomness is fully determined by the configured seed: each sentence gets
its own stream derived from (seed, sentence ordinal), so results do not
depend on worker count or scheduling.
"""

import hashlib
import json
import math
import random
import unicodedata
from dataclasses import dataclass, replace

from .conllu import Corpus, GraphemeInventory, Sentence
from .errors import DataError, DegenerateInventoryError
from .graphemes import grapheme_clusters

ACTIONS = ("delete", "replace", "insert")


@dataclass(frozen=True)
class NoiseConfig:
    """Noise level, seed and relative weights of the three edit actions."""

    level: float
    seed: int
    actions: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if not 0.0 <= self.level <= 1.0:
            raise DataError(f"noise level must be within [0, 1], got {self.level}")
        if not 0 <= self.seed < 2 ** 64:
            raise DataError("seed must be a 64-bit unsigned integer")
        if len(self.actions) != 3 or any(w < 0 for w in self.actions):
            raise DataError("action weights must be three non-negative numbers")
        if not any(self.actions):
            raise DataError("at least one action weight must be positive")


@dataclass(frozen=True)
class Edit:
    token_index: int
    action: str
    original: str
    noised: str


@dataclass(frozen=True)
class SentenceEdits:
    sentence_index: int
    sentence_id: str
    edits: tuple[Edit, ...]


@dataclass(frozen=True)
class NoiseReceipt:
    """Audit trail of every edit, one entry per sentence."""

    entries: tuple[SentenceEdits, ...]

    @property
    def edit_count(self) -> int:
        return sum(len(entry.edits) for entry in self.entries)

    def to_json(self) -> str:
        payload = [
            {
                "sentence_index": entry.sentence_index,
                "sentence_id": entry.sentence_id,
                "edits": [
                    {
                        "token_index": edit.token_index,
                        "action": edit.action,
                        "original": edit.original,
                        "noised": edit.noised,
                    }
                    for edit in entry.edits
                ],
            }
            for entry in self.entries
        ]
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def round_half_up(value: float) -> int:
    """Round to the nearest integer, with .5 rounding away from zero."""
    return math.floor(value + 0.5)


def _has_letterlike(form: str) -> bool:
    return any(unicodedata.category(ch)[0] not in "PN" for ch in form)


def eligible_indices(sentence: Sentence) -> list[int]:
    """Indices of words that contain more than punctuation and numerals."""
    return [i for i, token in enumerate(sentence.tokens) if _has_letterlike(token.form)]


def select_targets(sentence: Sentence, config: NoiseConfig,
                   rng: random.Random) -> list[int]:
    """Pick the word indices to edit, without replacement.

    The requested count is the rounded noise fraction of all tokens,
    capped by how many words are actually eligible.
    """
    eligible = eligible_indices(sentence)
    requested = round_half_up(config.level * len(sentence.tokens))
    count = min(requested, len(eligible))
    if count <= 0:
        return []
    return sorted(rng.sample(eligible, count))


def _weighted_choice(options: list[tuple[str, float]], rng: random.Random) -> str:
    total = sum(weight for _, weight in options)
    point = rng.random() * total
    cumulative = 0.0
    for name, weight in options:
        cumulative += weight
        if point < cumulative:
            return name
    return options[-1][0]


def _perturb_clusters(clusters: list[str], pool: tuple[str, ...],
                      config: NoiseConfig, rng: random.Random) -> tuple[str, str]:
    if not pool:
        raise DegenerateInventoryError("inventory is empty")
    delete_w, replace_w, insert_w = config.actions
    replace_positions = [
        i for i, cluster in enumerate(clusters)
        if len(pool) > 1 or pool[0] != cluster
    ]
    feasible: list[tuple[str, float]] = []
    if delete_w > 0 and len(clusters) >= 2:
        feasible.append(("delete", delete_w))
    if replace_w > 0 and replace_positions:
        feasible.append(("replace", replace_w))
    if insert_w > 0:
        feasible.append(("insert", insert_w))
    if not feasible:
        raise DegenerateInventoryError(
            "degenerate inventory: no feasible edit for this form"
        )
    action = _weighted_choice(feasible, rng)
    if action == "delete":
        at = rng.randrange(len(clusters))
        edited = clusters[:at] + clusters[at + 1:]
    elif action == "replace":
        at = replace_positions[rng.randrange(len(replace_positions))]
        alternatives = [cluster for cluster in pool if cluster != clusters[at]]
        edited = list(clusters)
        edited[at] = alternatives[rng.randrange(len(alternatives))]
    else:
        slot = rng.randrange(len(clusters) + 1)
        edited = clusters[:slot] + [pool[rng.randrange(len(pool))]] + clusters[slot:]
    return unicodedata.normalize("NFC", "".join(edited)), action


def perturb_word(form: str, inventory: GraphemeInventory, config: NoiseConfig,
                 rng: random.Random) -> str:
    """Apply exactly one grapheme edit to ``form``."""
    noised, _ = _perturb_clusters(grapheme_clusters(form), inventory.ordered(),
                                  config, rng)
    return noised


def sentence_rng(seed: int, ordinal: int) -> random.Random:
    """Per-sentence random stream, stable across platforms and workers."""
    digest = hashlib.blake2b(
        seed.to_bytes(8, "big") + ordinal.to_bytes(8, "big"), digest_size=8
    ).digest()
    return random.Random(int.from_bytes(digest, "big"))


def inject(corpus: Corpus, inventory: GraphemeInventory,
           config: NoiseConfig) -> tuple[Corpus, NoiseReceipt]:
    """Noise every sentence of ``corpus`` according to ``config``.

    Tags, lemmas, comments and sentence structure are untouched; only the
    selected word forms change. Output is a pure function of the inputs.
    """
    pool = inventory.ordered()
    new_sentences: list[Sentence] = []
    entries: list[SentenceEdits] = []
    for ordinal, sentence in enumerate(corpus.sentences):
        rng = sentence_rng(config.seed, ordinal)
        targets = select_targets(sentence, config, rng)
        if not targets:
            new_sentences.append(sentence)
            entries.append(SentenceEdits(ordinal, sentence.sent_id, ()))
            continue
        tokens = list(sentence.tokens)
        edits: list[Edit] = []
        for index in targets:
            original = tokens[index].form
            noised, action = _perturb_clusters(
                grapheme_clusters(original), pool, config, rng
            )
            tokens[index] = replace(tokens[index], form=noised)
            edits.append(Edit(index, action, original, noised))
        new_sentences.append(replace(sentence, tokens=tuple(tokens)))
        entries.append(SentenceEdits(ordinal, sentence.sent_id, tuple(edits)))
    noised_corpus = replace(corpus, sentences=tuple(new_sentences))
    return noised_corpus, NoiseReceipt(entries=tuple(entries))
