"""Quantify and manipulate the subword tokenization gap between a
standard-language corpus and a closely related non-standardized variety.

The package reads POS-annotated corpora, injects reproducible
character-level noise, tokenizes with wordpiece vocabularies or
desk-trained BPE models, computes tokenization divergence measures,
correlates them with externally supplied model accuracies, recommends
noise levels, and converts dialect tagsets to universal POS tags.
"""

__version__ = "0.1.0"

from .conllu import (  # noqa: F401
    Corpus,
    GraphemeInventory,
    Sentence,
    Token,
    extract_inventory,
    parse_conllu,
    write_conllu,
)
from .measures import MeasureReport, compare  # noqa: F401
from .noise import NoiseConfig, NoiseReceipt, inject  # noqa: F401
from .recommend import RecommendationResult, recommend  # noqa: F401
from .stats import CorrelationResult, ObservationSet, spearman  # noqa: F401
from .subword import (  # noqa: F401
    SubwordVocab,
    TokenizationProfile,
    bpe_tokenize,
    load_wordpiece_vocab,
    profile,
    train_bpe,
    wordpiece_tokenize,
)
