"""Dialect tagset conversion to universal POS tags.

A conversion spec combines three rule kinds: direct tag-to-tag mappings,
lexicon-gated rules (the output tag depends on whether the word form or
lemma is listed in an external lexicon), and fusion rules for suffix-like
tags whose tokens merge into the preceding head token. Two specs ship
with the package: one for the extended Farasa tagset used by dialectal
Arabic corpora and one for the Finnish Dialect Corpus tagset. The word
lists the lexicon rules need are corpus-specific configuration and must
be supplied by the caller.

Contraction splitting for Romance-style fused adposition-article forms
lives here too, as the remaining normalization step those corpora need.
"""

import unicodedata
from dataclasses import dataclass, replace
from importlib import resources

from .conllu import Corpus, ExtraRow, Sentence, Token
from .errors import ConversionError, SpecError

UPOS_TAGS = frozenset(
    (
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    )
)

MATCH_FORM = "form"
MATCH_LEMMA = "lemma"

_BUILTIN_SPECS = ("arabic", "finnish")


@dataclass(frozen=True)
class Lexicon:
    """A named set of word forms or lemmas, NFC-normalized."""

    name: str
    entries: frozenset

    @classmethod
    def from_text(cls, name: str, text: str) -> "Lexicon":
        entries = set()
        for line in text.split("\n"):
            entry = line.strip()
            if entry and not entry.startswith("#"):
                entries.add(unicodedata.normalize("NFC", entry))
        return cls(name=name, entries=frozenset(entries))

    def __contains__(self, value: str) -> bool:
        return value in self.entries


@dataclass(frozen=True)
class LexicalRule:
    source_tag: str
    lexicon: str
    match_tag: str
    nonmatch_tag: str
    match_on: str = MATCH_FORM


@dataclass(frozen=True)
class FusionRule:
    source_tag: str
    head_tags: frozenset
    fallback_tag: str


@dataclass(frozen=True)
class TagConversionSpec:
    name: str
    direct_map: dict
    lexical_rules: tuple[LexicalRule, ...]
    fusion_rules: tuple[FusionRule, ...]

    def __post_init__(self):
        outputs = list(self.direct_map.values())
        outputs.extend(rule.fallback_tag for rule in self.fusion_rules)
        for rule in self.lexical_rules:
            outputs.extend((rule.match_tag, rule.nonmatch_tag))
        for rule in self.fusion_rules:
            outputs.extend(rule.head_tags)
        bad = sorted(set(outputs) - UPOS_TAGS)
        if bad:
            raise SpecError(f"spec {self.name!r} produces non-UPOS tags: {bad}")
        keys = (list(self.direct_map)
                + [rule.source_tag for rule in self.lexical_rules]
                + [rule.source_tag for rule in self.fusion_rules])
        duplicates = sorted({key for key in keys if keys.count(key) > 1})
        if duplicates:
            raise SpecError(
                f"spec {self.name!r} maps source tags more than once: {duplicates}"
            )

    @property
    def required_lexicons(self) -> tuple[str, ...]:
        return tuple(sorted({rule.lexicon for rule in self.lexical_rules}))


def load_conversion_spec(text: str, name: str = "custom") -> TagConversionSpec:
    """Parse the line-oriented spec format.

    Plain lines map a source tag to a universal tag. ``LEX`` lines gate on
    lexicon membership (with an optional trailing ``form``/``lemma`` column
    naming what to look up, default ``form``). ``FUSE`` lines merge a
    suffix tag into the preceding token when its converted tag is in the
    allowed head list, falling back to a standalone tag otherwise.
    """
    direct: dict[str, str] = {}
    lexical: list[LexicalRule] = []
    fusion: list[FusionRule] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        keyword = cols[0]
        if keyword == "LEX":
            if len(cols) not in (5, 6):
                raise SpecError(f"line {line_no}: LEX rules need 5 or 6 columns")
            match_on = cols[5] if len(cols) == 6 else MATCH_FORM
            if match_on not in (MATCH_FORM, MATCH_LEMMA):
                raise SpecError(
                    f"line {line_no}: LEX match column must be "
                    f"{MATCH_FORM!r} or {MATCH_LEMMA!r}"
                )
            lexical.append(LexicalRule(
                source_tag=cols[1].lower(), lexicon=cols[2],
                match_tag=cols[3], nonmatch_tag=cols[4], match_on=match_on,
            ))
        elif keyword == "FUSE":
            if len(cols) != 4:
                raise SpecError(f"line {line_no}: FUSE rules need 4 columns")
            heads = frozenset(tag for tag in cols[2].split(",") if tag)
            if not heads:
                raise SpecError(f"line {line_no}: FUSE rule has no head tags")
            fusion.append(FusionRule(source_tag=cols[1].lower(),
                                     head_tags=heads, fallback_tag=cols[3]))
        else:
            if len(cols) != 2:
                raise SpecError(
                    f"line {line_no}: direct mappings need exactly 2 columns"
                )
            source_tag = cols[0].lower()
            if source_tag in direct:
                raise SpecError(f"line {line_no}: duplicate source tag {cols[0]!r}")
            direct[source_tag] = cols[1]
    return TagConversionSpec(name=name, direct_map=direct,
                             lexical_rules=tuple(lexical),
                             fusion_rules=tuple(fusion))


def builtin_spec(name: str) -> TagConversionSpec:
    if name not in _BUILTIN_SPECS:
        raise SpecError(f"no built-in spec named {name!r}; "
                        f"available: {_BUILTIN_SPECS}")
    text = resources.files("tokgap.data").joinpath(f"{name}.tsv").read_text("utf-8")
    return load_conversion_spec(text, name=name)


def _fuse_into(head: Token, suffix: Token) -> Token:
    form = unicodedata.normalize("NFC", head.form + suffix.form)
    return replace(head, form=form)


def convert_sentence(sentence: Sentence, spec: TagConversionSpec,
                     lexicons: dict, passthrough_unknown: bool = False) -> Sentence:
    """Convert one sentence's tags, applying fusion left to right.

    ``lexicons`` maps the names referenced by the spec's LEX rules to
    :class:`Lexicon` objects. Unknown source tags raise unless
    ``passthrough_unknown`` keeps them verbatim.
    """
    lexical_by_tag = {rule.source_tag: rule for rule in spec.lexical_rules}
    fusion_by_tag = {rule.source_tag: rule for rule in spec.fusion_rules}
    out_tokens: list[Token] = []
    # new index of each surviving original token, for extras remapping
    index_map: list[int] = []
    for token in sentence.tokens:
        source_tag = token.upos.lower()
        fusion_rule = fusion_by_tag.get(source_tag)
        if fusion_rule is not None:
            if out_tokens and out_tokens[-1].upos in fusion_rule.head_tags:
                out_tokens[-1] = _fuse_into(out_tokens[-1], token)
                index_map.append(len(out_tokens) - 1)
                continue
            new_tag = fusion_rule.fallback_tag
        elif source_tag in lexical_by_tag:
            rule = lexical_by_tag[source_tag]
            lexicon = lexicons.get(rule.lexicon)
            if lexicon is None:
                raise ConversionError(
                    f"spec {spec.name!r} needs lexicon {rule.lexicon!r}, "
                    "which was not provided"
                )
            if rule.match_on == MATCH_LEMMA:
                key = token.lemma
                if key is None:
                    raise ConversionError(
                        f"token {token.form!r} with tag {token.upos!r} has no "
                        "lemma to disambiguate on"
                    )
            else:
                key = token.form
            new_tag = rule.match_tag if key in lexicon else rule.nonmatch_tag
        elif source_tag in spec.direct_map:
            new_tag = spec.direct_map[source_tag]
        elif passthrough_unknown:
            new_tag = token.upos
        else:
            raise ConversionError(
                f"unknown source tag {token.upos!r} (form {token.form!r}); "
                f"spec {spec.name!r} has no rule for it"
            )
        out_tokens.append(replace(token, upos=new_tag))
        index_map.append(len(out_tokens) - 1)
    extras = _remap_extras(sentence.extras, index_map, len(out_tokens))
    return replace(sentence, tokens=tuple(out_tokens), extras=extras)


def _remap_extras(extras: tuple[ExtraRow, ...], index_map: list[int],
                  new_count: int) -> tuple[ExtraRow, ...]:
    if not extras:
        return extras
    remapped = []
    for extra in extras:
        if extra.anchor < len(index_map):
            anchor = index_map[extra.anchor]
        else:
            anchor = new_count
        remapped.append(replace(extra, anchor=anchor))
    return tuple(remapped)


def convert_farasa(sentence: Sentence, sconj_lexicon: Lexicon,
                   spec: TagConversionSpec | None = None,
                   passthrough_unknown: bool = False) -> Sentence:
    """Convert a sentence tagged with the extended Farasa tagset."""
    if spec is None:
        spec = builtin_spec("arabic")
    return convert_sentence(sentence, spec, {"sconj_forms": sconj_lexicon},
                            passthrough_unknown=passthrough_unknown)


def convert_finnish(sentence: Sentence, aux_lemmas: Lexicon,
                    q_adj_lemmas: Lexicon,
                    spec: TagConversionSpec | None = None,
                    passthrough_unknown: bool = False) -> Sentence:
    """Convert a sentence tagged with the Finnish Dialect Corpus tagset."""
    if spec is None:
        spec = builtin_spec("finnish")
    lexicons = {"aux_lemmas": aux_lemmas, "q_adj_lemmas": q_adj_lemmas}
    return convert_sentence(sentence, spec, lexicons,
                            passthrough_unknown=passthrough_unknown)


def convert_corpus(corpus: Corpus, spec: TagConversionSpec, lexicons: dict,
                   passthrough_unknown: bool = False) -> Corpus:
    sentences = tuple(
        convert_sentence(sentence, spec, lexicons, passthrough_unknown)
        for sentence in corpus.sentences
    )
    return replace(corpus, sentences=sentences)


def load_contraction_table(text: str) -> dict:
    """Parse ``form<TAB>adposition<TAB>article`` lines into a table."""
    table: dict[str, tuple[str, str]] = {}
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise SpecError(f"line {line_no}: contraction rows need 3 columns")
        key = unicodedata.normalize("NFC", cols[0])
        if key in table:
            raise SpecError(f"line {line_no}: duplicate contraction {cols[0]!r}")
        table[key] = (unicodedata.normalize("NFC", cols[1]),
                      unicodedata.normalize("NFC", cols[2]))
    return table


def split_contractions(corpus: Corpus, table: dict,
                       case_fold: bool = False) -> Corpus:
    """Split fused adposition-article forms into two tokens (ADP, DET).

    Matching is case-sensitive unless ``case_fold`` is set, in which case
    lookups casefold both sides but the replacement forms are emitted as
    written in the table.
    """
    if case_fold:
        lookup = {key.casefold(): value for key, value in table.items()}
    else:
        lookup = table
    new_sentences = []
    for sentence in corpus.sentences:
        hit = False
        tokens: list[Token] = []
        index_map: list[int] = []
        for token in sentence.tokens:
            key = token.form.casefold() if case_fold else token.form
            parts = lookup.get(key)
            index_map.append(len(tokens))
            if parts is None:
                tokens.append(token)
            else:
                hit = True
                adposition, article = parts
                tokens.append(Token(form=adposition, upos="ADP"))
                tokens.append(Token(form=article, upos="DET"))
        if hit:
            extras = _remap_extras(sentence.extras, index_map, len(tokens))
            new_sentences.append(replace(sentence, tokens=tuple(tokens),
                                         extras=extras))
        else:
            new_sentences.append(sentence)
    return replace(corpus, sentences=tuple(new_sentences))
