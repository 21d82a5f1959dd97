"""Subword tokenization and per-corpus tokenization profiles.

Two vocabulary kinds are supported: wordpiece vocabularies loaded from the
usual one-entry-per-line files (greedy longest-match-first splitting, with
``##`` continuation marking and an unknown-token fallback), and byte-pair
encoding models trained here on a corpus's word frequency table. Matching
is case-sensitive throughout; nothing is lowercased or accent-stripped.

A :class:`TokenizationProfile` condenses one corpus under one vocabulary
into the counts and multisets that the divergence measures consume.
"""

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .conllu import Corpus
from .errors import DataError, ParseError
from .graphemes import grapheme_clusters, grapheme_count

WORDPIECE = "wordpiece"
BPE = "bpe"

DEFAULT_CONTINUATION = "##"
DEFAULT_END_OF_WORD = "</w>"
DEFAULT_UNK = "[UNK]"

# Words longer than this many grapheme clusters are not worth a quadratic
# match attempt and map straight to the unknown token.
MAX_WORD_GRAPHEMES = 100

_BPE_HEADER_PREFIX = "#bpe"


@dataclass(frozen=True)
class SubwordVocab:
    """A wordpiece vocabulary or an ordered BPE merge list."""

    kind: str
    entries: tuple
    marker: str
    unk_token: str = DEFAULT_UNK

    def __post_init__(self):
        if self.kind not in (WORDPIECE, BPE):
            raise DataError(f"unknown vocabulary kind {self.kind!r}")

    @cached_property
    def piece_set(self) -> frozenset:
        return frozenset(self.entries)

    @cached_property
    def merge_ranks(self) -> dict:
        return {pair: rank for rank, pair in enumerate(self.entries)}

    def __len__(self) -> int:
        return len(self.entries)


def load_wordpiece_vocab(text: str, marker: str = DEFAULT_CONTINUATION,
                         unk_token: str = DEFAULT_UNK) -> SubwordVocab:
    """Load a one-entry-per-line wordpiece vocabulary file."""
    entries: list[str] = []
    seen: dict[str, int] = {}
    for line_no, line in enumerate(text.split("\n"), start=1):
        entry = line.rstrip("\r")
        if not entry:
            continue
        if entry in seen:
            raise ParseError(
                f"duplicate vocabulary entry {entry!r} (first seen on line {seen[entry]})",
                line_no,
            )
        seen[entry] = line_no
        entries.append(entry)
    if unk_token not in seen:
        raise DataError(f"vocabulary does not contain the unknown token {unk_token!r}")
    return SubwordVocab(kind=WORDPIECE, entries=tuple(entries), marker=marker,
                        unk_token=unk_token)


def wordpiece_tokenize(form: str, vocab: SubwordVocab) -> list[str]:
    """Split one word with greedy longest-match-first wordpiece."""
    if vocab.kind != WORDPIECE:
        raise DataError("wordpiece_tokenize requires a wordpiece vocabulary")
    if len(form) > MAX_WORD_GRAPHEMES and grapheme_count(form) > MAX_WORD_GRAPHEMES:
        return [vocab.unk_token]
    return kernels.wordpiece_match(form, vocab.piece_set, vocab.marker,
                                   vocab.unk_token)


def _word_symbols(form: str, end_marker: str) -> list[str]:
    clusters = grapheme_clusters(form)
    clusters[-1] += end_marker
    return clusters


def train_bpe(corpus: Corpus, merge_count: int,
              end_marker: str = DEFAULT_END_OF_WORD) -> SubwordVocab:
    """Learn a BPE merge list from the corpus's word frequency table.

    Each round merges the most frequent adjacent symbol pair, breaking
    frequency ties toward the lexicographically smallest pair. Training
    stops after ``merge_count`` rounds or as soon as no pair occurs at
    least twice.
    """
    if not corpus.sentences:
        raise DataError("cannot train BPE on an empty corpus")
    if merge_count < 0:
        raise DataError("merge count must be non-negative")

    word_freq = Counter(
        token.form for sentence in corpus.sentences for token in sentence.tokens
    )
    words = [(_word_symbols(form, end_marker), freq)
             for form, freq in word_freq.items()]

    pair_counts: Counter = Counter()
    pair_words: dict[tuple[str, str], set[int]] = {}
    for index, (symbols, freq) in enumerate(words):
        for pair in zip(symbols, symbols[1:]):
            pair_counts[pair] += freq
            pair_words.setdefault(pair, set()).add(index)

    merges: list[tuple[str, str]] = []
    for _ in range(merge_count):
        best_pair = None
        best_count = 1
        for pair, count in pair_counts.items():
            if count > best_count or (count == best_count and
                                      best_pair is not None and pair < best_pair):
                best_pair = pair
                best_count = count
        if best_pair is None:
            break
        merges.append(best_pair)
        first, second = best_pair
        merged = first + second
        for index in sorted(pair_words.pop(best_pair, ())):
            symbols, freq = words[index]
            if best_pair not in zip(symbols, symbols[1:]):
                continue  # stale membership from an earlier merge
            for pair in zip(symbols, symbols[1:]):
                pair_counts[pair] -= freq
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
            out = []
            i = 0
            while i < len(symbols):
                if (i < len(symbols) - 1 and symbols[i] == first
                        and symbols[i + 1] == second):
                    out.append(merged)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            words[index] = (out, freq)
            for pair in zip(out, out[1:]):
                pair_counts[pair] += freq
                pair_words.setdefault(pair, set()).add(index)
    return SubwordVocab(kind=BPE, entries=tuple(merges), marker=end_marker)


def bpe_tokenize(form: str, vocab: SubwordVocab) -> list[str]:
    """Segment one word by replaying the learned merges in order."""
    if vocab.kind != BPE:
        raise DataError("bpe_tokenize requires a BPE vocabulary")
    return kernels.bpe_apply(_word_symbols(form, vocab.marker), vocab.merge_ranks)


def tokenize(form: str, vocab: SubwordVocab) -> list[str]:
    if vocab.kind == WORDPIECE:
        return wordpiece_tokenize(form, vocab)
    return bpe_tokenize(form, vocab)


def save_bpe(vocab: SubwordVocab) -> str:
    """Serialize a BPE model: a header naming the marker, then the merges."""
    if vocab.kind != BPE:
        raise DataError("save_bpe requires a BPE vocabulary")
    lines = [f"{_BPE_HEADER_PREFIX}\teow={vocab.marker}"]
    lines.extend(f"{first}\t{second}" for first, second in vocab.entries)
    return "\n".join(lines) + "\n"


def load_bpe(text: str) -> SubwordVocab:
    lines = text.split("\n")
    header = lines[0] if lines else ""
    if not header.startswith(_BPE_HEADER_PREFIX):
        raise ParseError("missing BPE model header", 1)
    end_marker = DEFAULT_END_OF_WORD
    for part in header.split("\t")[1:]:
        key, _, value = part.partition("=")
        if key == "eow" and value:
            end_marker = value
    merges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ParseError("merge rules need exactly two tab-separated symbols",
                             line_no)
        pair = (cols[0], cols[1])
        if pair in seen:
            raise ParseError(f"duplicate merge rule {pair!r}", line_no)
        seen.add(pair)
        merges.append(pair)
    return SubwordVocab(kind=BPE, entries=tuple(merges), marker=end_marker)


def load_vocab_text(text: str) -> SubwordVocab:
    """Sniff the vocabulary kind from the file content and load it."""
    if text.startswith(_BPE_HEADER_PREFIX):
        return load_bpe(text)
    return load_wordpiece_vocab(text)


@dataclass
class TokenizationProfile:
    """Subword statistics of one corpus under one vocabulary."""

    source_label: str = ""
    split_word_count: int = 0
    subword_tokens: Counter = field(default_factory=Counter)
    word_forms: Counter = field(default_factory=Counter)

    @property
    def word_count(self) -> int:
        return sum(self.word_forms.values())

    @property
    def subword_token_count(self) -> int:
        return sum(self.subword_tokens.values())

    @property
    def subword_type_count(self) -> int:
        return len(self.subword_tokens)

    @property
    def word_type_count(self) -> int:
        return len(self.word_forms)

    def __add__(self, other: "TokenizationProfile") -> "TokenizationProfile":
        label = self.source_label if self.source_label == other.source_label \
            else f"{self.source_label}+{other.source_label}"
        return TokenizationProfile(
            source_label=label,
            split_word_count=self.split_word_count + other.split_word_count,
            subword_tokens=self.subword_tokens + other.subword_tokens,
            word_forms=self.word_forms + other.word_forms,
        )

    def to_json(self) -> str:
        payload = {
            "source_label": self.source_label,
            "word_count": self.word_count,
            "split_word_count": self.split_word_count,
            "subword_token_count": self.subword_token_count,
            "subword_type_count": self.subword_type_count,
            "subword_tokens": dict(sorted(self.subword_tokens.items())),
            "word_forms": dict(sorted(self.word_forms.items())),
        }
        return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TokenizationProfile":
        payload = json.loads(text)
        try:
            profile = cls(
                source_label=payload["source_label"],
                split_word_count=payload["split_word_count"],
                subword_tokens=Counter(payload["subword_tokens"]),
                word_forms=Counter(payload["word_forms"]),
            )
            stated_words = payload["word_count"]
            stated_subwords = payload["subword_token_count"]
            stated_types = payload["subword_type_count"]
        except (KeyError, TypeError) as exc:
            raise DataError(f"profile JSON is missing field {exc}") from exc
        if (profile.word_count != stated_words
                or profile.subword_token_count != stated_subwords
                or profile.subword_type_count != stated_types):
            raise DataError("profile JSON counts disagree with its multisets")
        return profile


def profile(corpus: Corpus, vocab: SubwordVocab) -> TokenizationProfile:
    """Tokenize every word of the corpus and tally the statistics.

    A word counts as split when it yields two or more pieces; an
    unknown-token fallback is a single piece and therefore unsplit.
    """
    result = TokenizationProfile(source_label=corpus.label)
    subwords = result.subword_tokens
    forms = result.word_forms
    split = 0
    if vocab.kind == WORDPIECE:
        tokenize_one = wordpiece_tokenize
    else:
        tokenize_one = bpe_tokenize
    piece_cache: dict[str, list[str]] = {}
    for sentence in corpus.sentences:
        for token in sentence.tokens:
            form = token.form
            pieces = piece_cache.get(form)
            if pieces is None:
                pieces = tokenize_one(form, vocab)
                piece_cache[form] = pieces
            forms[form] += 1
            subwords.update(pieces)
            if len(pieces) >= 2:
                split += 1
    result.split_word_count = split
    return result
