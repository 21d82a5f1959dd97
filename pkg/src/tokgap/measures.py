"""Divergence measures between two tokenization profiles.

All measures compare a source-corpus profile with a target-corpus profile
produced under the same vocabulary: how similarly words split, how much of
the target's subword and word mass the source has seen, and how the
subword type-token ratios relate. String matching is exact, case-sensitive
and post-NFC; continuation markers are part of a subword's identity, so
a word-initial piece never matches its word-internal counterpart.
"""

import json
from collections import Counter
from dataclasses import dataclass, fields

from .errors import DataError
from .subword import TokenizationProfile

SEEN_UNITS = ("subword", "word")
SEEN_MODES = ("token", "type")


@dataclass(frozen=True)
class MeasureReport:
    split_word_ratio_source: float
    split_word_ratio_target: float
    split_word_ratio_difference: float
    avg_subwords_per_word_source: float
    avg_subwords_per_word_target: float
    seen_subwords_token: float
    seen_subwords_type: float
    seen_words_token: float
    seen_words_type: float
    ttr_source: float
    ttr_target: float
    ttr_ratio: float

    def __post_init__(self):
        for name in ("split_word_ratio_source", "split_word_ratio_target",
                     "split_word_ratio_difference", "seen_subwords_token",
                     "seen_subwords_type", "seen_words_token", "seen_words_type"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DataError(f"{name} must lie in [0, 1], got {value}")
        for name in ("avg_subwords_per_word_source", "avg_subwords_per_word_target"):
            if getattr(self, name) < 1.0:
                raise DataError(f"{name} cannot be below 1")
        for name in ("ttr_source", "ttr_target"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise DataError(f"{name} must lie in (0, 1], got {value}")
        if self.ttr_ratio <= 0.0:
            raise DataError("ttr_ratio must be positive")
        expected = abs(self.split_word_ratio_source - self.split_word_ratio_target)
        if abs(self.split_word_ratio_difference - expected) > 1e-12:
            raise DataError("split_word_ratio_difference must be the absolute "
                            "difference of the two ratios")

    def to_json(self) -> str:
        payload = {f.name: getattr(self, f.name) for f in fields(self)}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MeasureReport":
        payload = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(payload) - names
        missing = names - set(payload)
        if unknown or missing:
            raise DataError(
                f"measure report keys mismatch (missing {sorted(missing)}, "
                f"unknown {sorted(unknown)})"
            )
        return cls(**payload)


def split_word_ratio(profile: TokenizationProfile) -> float:
    if profile.word_count == 0:
        raise DataError(f"profile {profile.source_label!r} has zero words")
    return profile.split_word_count / profile.word_count


def split_word_ratio_difference(source: TokenizationProfile,
                                target: TokenizationProfile) -> float:
    """Absolute difference between the two corpora's split word ratios."""
    return abs(split_word_ratio(source) - split_word_ratio(target))


def avg_subwords_per_word(profile: TokenizationProfile) -> float:
    if profile.word_count == 0:
        raise DataError(f"profile {profile.source_label!r} has zero words")
    return profile.subword_token_count / profile.word_count


def seen_ratio(source: TokenizationProfile, target: TokenizationProfile,
               unit: str, mode: str) -> float:
    """Fraction of target units whose string also occurs in the source.

    ``token`` mode weights by occurrence count in the target; ``type`` mode
    counts each distinct string once.
    """
    if unit not in SEEN_UNITS:
        raise DataError(f"unit must be one of {SEEN_UNITS}, got {unit!r}")
    if mode not in SEEN_MODES:
        raise DataError(f"mode must be one of {SEEN_MODES}, got {mode!r}")
    if unit == "subword":
        source_units: Counter = source.subword_tokens
        target_units: Counter = target.subword_tokens
    else:
        source_units = source.word_forms
        target_units = target.word_forms
    if not target_units:
        raise DataError(f"target profile {target.source_label!r} has no {unit} units")
    if mode == "token":
        seen = sum(count for unit_string, count in target_units.items()
                   if unit_string in source_units)
        return seen / sum(target_units.values())
    seen = sum(1 for unit_string in target_units if unit_string in source_units)
    return seen / len(target_units)


def ttr(profile: TokenizationProfile) -> float:
    """Subword-level type-token ratio of one profile."""
    if profile.subword_token_count == 0:
        raise DataError(f"profile {profile.source_label!r} has no subword tokens")
    return profile.subword_type_count / profile.subword_token_count


def ttr_ratio(source: TokenizationProfile, target: TokenizationProfile) -> float:
    """Target type-token ratio divided by source type-token ratio."""
    return ttr(target) / ttr(source)


def compare(source: TokenizationProfile,
            target: TokenizationProfile) -> MeasureReport:
    """All divergence measures between a source and a target profile."""
    source_ratio = split_word_ratio(source)
    target_ratio = split_word_ratio(target)
    return MeasureReport(
        split_word_ratio_source=source_ratio,
        split_word_ratio_target=target_ratio,
        split_word_ratio_difference=abs(source_ratio - target_ratio),
        avg_subwords_per_word_source=avg_subwords_per_word(source),
        avg_subwords_per_word_target=avg_subwords_per_word(target),
        seen_subwords_token=seen_ratio(source, target, "subword", "token"),
        seen_subwords_type=seen_ratio(source, target, "subword", "type"),
        seen_words_token=seen_ratio(source, target, "word", "token"),
        seen_words_type=seen_ratio(source, target, "word", "type"),
        ttr_source=ttr(source),
        ttr_target=ttr(target),
        ttr_ratio=ttr_ratio(source, target),
    )
