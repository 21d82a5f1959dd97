"""POS-annotated corpora in CoNLL-U format.

Parses and serializes the tab-separated Universal Dependencies exchange
format (10 columns, ``#`` comments, blank-line sentence separators). Word
forms and lemmas are NFC-normalized at parse time so that all downstream
string matching is well-defined across corpora.

Multiword range rows (ids like ``3-4``) and empty-node rows (ids like
``1.1``) are kept for serialization but never enter the token sequence:
every statistic downstream counts syntactic words only.
"""

import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DataError, ParseError
from .graphemes import grapheme_clusters

CONLLU_COLUMNS = 10

_EMPTY = "_"


def _normalize(value: str) -> str:
    return unicodedata.normalize("NFC", value)


@dataclass(frozen=True, slots=True)
class Token:
    """One syntactic word: surface form, POS tag and pass-through columns.

    ``upos`` holds whatever tag column the source provides; it is only
    guaranteed to be a universal POS tag after conversion. The dependency
    and feature columns are carried verbatim so files survive a round
    trip, but nothing in this package interprets them.
    """

    form: str
    upos: str = _EMPTY
    lemma: str | None = None
    xpos: str = _EMPTY
    feats: str = _EMPTY
    head: str = _EMPTY
    deprel: str = _EMPTY
    deps: str = _EMPTY
    misc: str = _EMPTY

    def __post_init__(self):
        if not self.form:
            raise DataError("token form must be non-empty")
        for ch in self.form:
            if ch.isspace() or unicodedata.category(ch) == "Cc":
                raise DataError(
                    f"token form {self.form!r} contains whitespace or control characters"
                )
        if not unicodedata.is_normalized("NFC", self.form):
            raise DataError(f"token form {self.form!r} is not NFC-normalized")


@dataclass(frozen=True, slots=True)
class ExtraRow:
    """A surface-only row: a multiword range or an empty node.

    ``anchor`` is the number of syntactic words that precede the row in
    its sentence, which is all the writer needs to regenerate ids after
    tokens are edited. Ranges keep the number of covered words in
    ``span``; empty nodes keep their sub-index in ``sub``.
    """

    anchor: int
    span: int | None
    sub: str | None
    columns: tuple[str, ...]

    def __post_init__(self):
        if (self.span is None) == (self.sub is None):
            raise DataError("extra row must be either a range or an empty node")
        if len(self.columns) != CONLLU_COLUMNS - 1:
            raise DataError("extra row must carry the nine non-id columns")


@dataclass(frozen=True, slots=True)
class Sentence:
    sent_id: str
    tokens: tuple[Token, ...]
    comments: tuple[str, ...] = ()
    extras: tuple[ExtraRow, ...] = ()

    def __post_init__(self):
        if not self.tokens:
            raise DataError("sentence must contain at least one token")


@dataclass(frozen=True, slots=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    label: str = ""
    split: str | None = None

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)


@dataclass(frozen=True)
class GraphemeInventory:
    """All grapheme clusters occurring in the token forms of a corpus."""

    graphemes: frozenset[str] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.graphemes)

    def __contains__(self, cluster: str) -> bool:
        return cluster in self.graphemes

    def ordered(self) -> tuple[str, ...]:
        """Clusters in a stable order, for reproducible sampling."""
        return tuple(sorted(self.graphemes))


def _parse_token_row(cols: list[str], line_no: int) -> Token:
    lemma = cols[2]
    try:
        return Token(
            form=_normalize(cols[1]),
            upos=cols[3],
            lemma=None if lemma == _EMPTY else _normalize(lemma),
            xpos=cols[4],
            feats=cols[5],
            head=cols[6],
            deprel=cols[7],
            deps=cols[8],
            misc=cols[9],
        )
    except DataError as exc:
        raise ParseError(str(exc), line_no) from exc


def _extract_sent_id(comments: list[str], ordinal: int) -> str:
    for comment in comments:
        body = comment[1:].strip()
        if body.startswith("sent_id"):
            _, _, value = body.partition("=")
            if value.strip():
                return value.strip()
    return str(ordinal)


def parse_conllu(text: str, label: str = "", split: str | None = None) -> Corpus:
    """Parse CoNLL-U text into a :class:`Corpus`.

    Raises :class:`ParseError` with a line number for malformed rows.
    Empty input yields an empty corpus.
    """
    sentences: list[Sentence] = []
    comments: list[str] = []
    tokens: list[Token] = []
    extras: list[ExtraRow] = []
    block_start = 1

    def flush(line_no: int):
        nonlocal comments, tokens, extras
        if not comments and not tokens and not extras:
            return
        if not tokens:
            raise ParseError("sentence block contains no token rows", line_no)
        sentences.append(
            Sentence(
                sent_id=_extract_sent_id(comments, len(sentences) + 1),
                tokens=tuple(tokens),
                comments=tuple(comments),
                extras=tuple(extras),
            )
        )
        comments, tokens, extras = [], [], []

    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line:
            flush(line_no)
            block_start = line_no + 1
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != CONLLU_COLUMNS:
            raise ParseError(
                f"expected {CONLLU_COLUMNS} tab-separated columns, found {len(cols)}",
                line_no,
            )
        row_id = cols[0]
        if "-" in row_id:
            first, _, last = row_id.partition("-")
            if not (first.isdigit() and last.isdigit() and int(last) >= int(first)):
                raise ParseError(f"invalid range id {row_id!r}", line_no)
            span = int(last) - int(first) + 1
            extras.append(ExtraRow(anchor=len(tokens), span=span, sub=None,
                                   columns=tuple(cols[1:])))
        elif "." in row_id:
            base, _, sub = row_id.partition(".")
            if not (base.isdigit() and sub.isdigit()):
                raise ParseError(f"invalid empty-node id {row_id!r}", line_no)
            extras.append(ExtraRow(anchor=len(tokens), span=None, sub=sub,
                                   columns=tuple(cols[1:])))
        elif row_id.isdigit():
            tokens.append(_parse_token_row(cols, line_no))
        else:
            raise ParseError(f"invalid token id {row_id!r}", line_no)
    flush(block_start)
    return Corpus(sentences=tuple(sentences), label=label, split=split)


def write_conllu(corpus: Corpus) -> str:
    """Serialize a corpus back to canonical CoNLL-U text.

    Token ids are renumbered sequentially, so corpora whose sentences were
    edited (fused or split tokens) come out consistent; already-canonical
    input round-trips byte for byte.
    """
    blocks: list[str] = []
    for sentence in corpus.sentences:
        lines: list[str] = list(sentence.comments)
        extras_at: dict[int, list[ExtraRow]] = {}
        for extra in sentence.extras:
            extras_at.setdefault(extra.anchor, []).append(extra)
        for position in range(len(sentence.tokens) + 1):
            for extra in extras_at.get(position, ()):
                if extra.span is not None:
                    row_id = f"{position + 1}-{position + extra.span}"
                else:
                    row_id = f"{position}.{extra.sub}"
                lines.append("\t".join((row_id,) + extra.columns))
            if position == len(sentence.tokens):
                break
            token = sentence.tokens[position]
            lines.append(
                "\t".join(
                    (
                        str(position + 1),
                        token.form,
                        _EMPTY if token.lemma is None else token.lemma,
                        token.upos,
                        token.xpos,
                        token.feats,
                        token.head,
                        token.deprel,
                        token.deps,
                        token.misc,
                    )
                )
            )
        blocks.append("\n".join(lines) + "\n\n")
    return "".join(blocks)


def read_corpus(path, label: str = "", split: str | None = None) -> Corpus:
    """Read a corpus from a file, defaulting the label to the file stem."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_conllu(text, label=label or path.stem, split=split)


def write_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(write_conllu(corpus), encoding="utf-8")


def extract_inventory(corpus: Corpus) -> GraphemeInventory:
    """Collect every grapheme cluster used by the corpus's token forms.

    Punctuation and digits are kept: orthographic differences between
    closely related varieties are often punctuation-based, so the noise
    sampling pool must contain them.
    """
    if not corpus.sentences:
        raise DataError("cannot build inventory from empty corpus")
    clusters: set[str] = set()
    for sentence in corpus.sentences:
        for token in sentence.tokens:
            clusters.update(grapheme_clusters(token.form))
    return GraphemeInventory(graphemes=frozenset(clusters))


def with_sentences(corpus: Corpus, sentences: tuple[Sentence, ...]) -> Corpus:
    """Same corpus metadata, new sentence sequence."""
    return replace(corpus, sentences=sentences)
