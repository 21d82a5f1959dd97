"""Command-line interface.

One executable, ``tokgap``, with a subcommand per pipeline stage:
``inject``, ``train-bpe``, ``profile``, ``measure``, ``correlate``,
``recommend``, ``convert`` and ``report``. Subcommands never modify their
inputs; each run writes its artifacts plus a manifest with content
digests. Exit codes: 0 on success, 1 for usage errors, 2 for data errors
(including missing files).
"""

import argparse
import os
import sys
from pathlib import Path

from . import __version__, convert as convert_mod, manifest as manifest_mod
from .conllu import parse_conllu, read_corpus, write_corpus, extract_inventory
from .errors import ParseError, TokgapError
from .measures import compare
from .noise import NoiseConfig, inject
from .recommend import DEFAULT_GRID, DEFAULT_SEEDS, recommend
from .stats import (
    EXACT_PERMUTATION,
    T_APPROXIMATION,
    ObservationSet,
    correlate_by_group,
)
from .subword import (
    TokenizationProfile,
    load_vocab_text,
    profile,
    save_bpe,
    train_bpe,
)

USAGE_ERROR = 1
DATA_ERROR = 2

VOCAB_DIR_ENV = "TOKGAP_VOCAB_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; we reserve 2 for data errors.
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _resolve_vocab_path(value: str) -> Path:
    path = Path(value)
    if path.exists():
        return path
    vocab_dir = os.environ.get(VOCAB_DIR_ENV)
    if vocab_dir:
        candidate = Path(vocab_dir) / value
        if candidate.exists():
            return candidate
    raise FileNotFoundError(value)


def _load_vocab(value: str):
    path = _resolve_vocab_path(value)
    return path, load_vocab_text(path.read_text(encoding="utf-8"))


def _parse_float_list(text: str, option: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise _UsageError(f"{option} expects comma-separated numbers: {exc}") from exc


def _parse_int_list(text: str, option: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise _UsageError(f"{option} expects comma-separated integers: {exc}") from exc


def _finish(args, command: list[str], inputs: list, outputs: list,
            config: dict) -> int:
    manifest = manifest_mod.build_manifest(command, inputs, outputs, config)
    manifest_path = args.manifest or f"{outputs[0]}.manifest.json"
    manifest_mod.write_manifest(manifest, manifest_path)
    return 0


def _cmd_inject(args, command) -> int:
    corpus = read_corpus(args.input, label=args.label)
    inventory_source = args.inventory_from or args.input
    inventory = extract_inventory(read_corpus(inventory_source))
    weights = (1.0, 1.0, 1.0)
    if args.action_weights:
        weights = _parse_float_list(args.action_weights, "--action-weights")
        if len(weights) != 3:
            raise _UsageError("--action-weights expects three numbers "
                              "(delete,replace,insert)")
    config = NoiseConfig(level=args.level, seed=args.seed, actions=weights)
    noised, receipt = inject(corpus, inventory, config)
    write_corpus(noised, args.output)
    outputs = [args.output]
    if args.receipt:
        Path(args.receipt).write_text(receipt.to_json(), encoding="utf-8")
        outputs.append(args.receipt)
    inputs = [args.input]
    if args.inventory_from:
        inputs.append(args.inventory_from)
    return _finish(args, command, inputs, outputs, {
        "level": args.level,
        "seed": args.seed,
        "action_weights": list(weights),
        "inventory_from": args.inventory_from,
        "edited_tokens": receipt.edit_count,
    })


def _cmd_train_bpe(args, command) -> int:
    corpus = read_corpus(args.input)
    vocab = train_bpe(corpus, args.merges, end_marker=args.end_marker)
    Path(args.output).write_text(save_bpe(vocab), encoding="utf-8")
    return _finish(args, command, [args.input], [args.output], {
        "merges_requested": args.merges,
        "merges_learned": len(vocab),
        "end_marker": args.end_marker,
    })


def _cmd_profile(args, command) -> int:
    corpus = read_corpus(args.input, label=args.label, split=args.split)
    vocab_path, vocab = _load_vocab(args.vocab)
    result = profile(corpus, vocab)
    Path(args.output).write_text(result.to_json(), encoding="utf-8")
    return _finish(args, command, [args.input, vocab_path], [args.output], {
        "vocab": str(vocab_path),
        "vocab_kind": vocab.kind,
        "label": corpus.label,
        "split": args.split,
    })


def _cmd_measure(args, command) -> int:
    source = TokenizationProfile.from_json(
        Path(args.source).read_text(encoding="utf-8"))
    target = TokenizationProfile.from_json(
        Path(args.target).read_text(encoding="utf-8"))
    report = compare(source, target)
    Path(args.output).write_text(report.to_json(), encoding="utf-8")
    return _finish(args, command, [args.source, args.target], [args.output], {
        "source_label": source.source_label,
        "target_label": target.source_label,
    })


def _correlation_rows(observations, measures, method):
    rows = []
    all_warnings = []
    for measure in measures:
        results, warnings = correlate_by_group(observations, measure,
                                               method=method)
        all_warnings.extend(warnings)
        for group in observations.groups:
            if group in results:
                result = results[group]
                rows.append((group, measure, result.rho, result.p_value,
                             result.sample_size))
    return rows, all_warnings


def _cmd_correlate(args, command) -> int:
    observations = ObservationSet.from_csv(
        Path(args.input).read_text(encoding="utf-8"))
    measures = (tuple(args.measures.split(",")) if args.measures
                else observations.measure_names)
    unknown = sorted(set(measures) - set(observations.measure_names))
    if unknown:
        raise _UsageError(f"--measures names absent from the CSV: {unknown}")
    rows, warnings = _correlation_rows(observations, measures, args.p_method)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    lines = ["group\tmeasure\trho\tp\tn"]
    lines.extend(
        f"{group}\t{measure}\t{rho!r}\t{p!r}\t{n}"
        for group, measure, rho, p, n in rows
    )
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return _finish(args, command, [args.input], [args.output], {
        "measures": list(measures),
        "p_method": args.p_method,
        "groups": list(observations.groups),
    })


def _cmd_recommend(args, command) -> int:
    source = read_corpus(args.source)
    target = read_corpus(args.target)
    vocab_path, vocab = _load_vocab(args.vocab)
    grid = _parse_float_list(args.grid, "--grid") if args.grid else DEFAULT_GRID
    seeds = _parse_int_list(args.seeds, "--seeds") if args.seeds else DEFAULT_SEEDS
    result = recommend(source, target, vocab, grid=grid, seeds=seeds,
                       jobs=args.jobs)
    Path(args.output).write_text(result.to_json(), encoding="utf-8")
    return _finish(args, command,
                   [args.source, args.target, vocab_path], [args.output], {
                       "grid": list(grid),
                       "seeds": list(seeds),
                       "jobs": args.jobs,
                       "chosen_level": result.chosen_level,
                   })


def _read_tagged_file(path) -> "list[tuple[list[str], list[tuple[str, str, str | None]]]]":
    """Read a tagged corpus: CoNLL-U or 2/3-column form/tag[/lemma] TSV.

    Returns per-sentence (comments, rows) with rows of (form, tag, lemma).
    """
    text = Path(path).read_text(encoding="utf-8")
    sentences = []
    comments: list[str] = []
    rows: list[tuple[str, str, str | None]] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line:
            if rows:
                sentences.append((comments, rows))
                comments, rows = [], []
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) == 10:
            if "-" in cols[0] or "." in cols[0]:
                continue  # surface rows carry no tag to convert
            rows.append((cols[1], cols[3], None if cols[2] == "_" else cols[2]))
        elif len(cols) == 2:
            rows.append((cols[0], cols[1], None))
        elif len(cols) == 3:
            rows.append((cols[0], cols[1], cols[2] or None))
        else:
            raise ParseError(
                "tagged input rows need 2, 3 or 10 tab-separated columns",
                line_no,
            )
    if rows:
        sentences.append((comments, rows))
    return sentences


def _cmd_convert(args, command) -> int:
    import unicodedata

    from .conllu import Corpus, Sentence, Token, write_conllu

    if not args.spec and not args.contractions:
        raise _UsageError("convert needs --spec and/or --contractions")
    blocks = _read_tagged_file(args.input)
    sentences = []
    for ordinal, (comments, rows) in enumerate(blocks, start=1):
        tokens = tuple(
            Token(
                form=unicodedata.normalize("NFC", form),
                upos=tag,
                lemma=None if lemma is None else unicodedata.normalize("NFC", lemma),
            )
            for form, tag, lemma in rows
        )
        sentences.append(Sentence(sent_id=str(ordinal), tokens=tokens,
                                  comments=tuple(comments)))
    corpus = Corpus(sentences=tuple(sentences), label=Path(args.input).stem)

    inputs = [args.input]
    config: dict = {"spec": args.spec, "contractions": args.contractions,
                    "case_fold": args.case_fold,
                    "passthrough_unknown": args.passthrough_unknown}
    if args.spec:
        if args.spec in ("arabic", "finnish"):
            spec = convert_mod.builtin_spec(args.spec)
        else:
            spec = convert_mod.load_conversion_spec(
                Path(args.spec).read_text(encoding="utf-8"),
                name=Path(args.spec).stem,
            )
            inputs.append(args.spec)
        lexicons = {}
        for item in args.lexicon or []:
            name, _, lex_path = item.partition("=")
            if not name or not lex_path:
                raise _UsageError("--lexicon expects name=path")
            lexicons[name] = convert_mod.Lexicon.from_text(
                name, Path(lex_path).read_text(encoding="utf-8"))
            inputs.append(lex_path)
        corpus = convert_mod.convert_corpus(
            corpus, spec, lexicons,
            passthrough_unknown=args.passthrough_unknown)
        config["lexicons"] = sorted(lexicons)
    if args.contractions:
        table = convert_mod.load_contraction_table(
            Path(args.contractions).read_text(encoding="utf-8"))
        corpus = convert_mod.split_contractions(corpus, table,
                                                case_fold=args.case_fold)
        inputs.append(args.contractions)
    Path(args.output).write_text(write_conllu(corpus), encoding="utf-8")
    return _finish(args, command, inputs, [args.output], config)


def _cmd_report(args, command) -> int:
    from .errors import DataError

    per_measure: dict[str, dict[str, tuple[float, float, int]]] = {}
    group_order: list[str] = []
    for path in args.correlations:
        text = Path(path).read_text(encoding="utf-8")
        lines = [line for line in text.split("\n") if line]
        if not lines or lines[0] != "group\tmeasure\trho\tp\tn":
            raise DataError(f"{path}: not a correlation table "
                            "(expected header group/measure/rho/p/n)")
        for line_no, line in enumerate(lines[1:], start=2):
            cols = line.split("\t")
            if len(cols) != 5:
                raise ParseError("correlation rows need 5 columns", line_no)
            group, measure, rho, p, n = cols
            per_measure.setdefault(measure, {})[group] = (
                float(rho), float(p), int(n))
            if group not in group_order:
                group_order.append(group)
    measures = sorted(per_measure)
    for measure in measures:
        missing = [g for g in group_order if g not in per_measure[measure]]
        if missing:
            raise DataError(
                f"measure {measure!r} lacks groups {missing}; "
                "correlation inputs do not cover a consistent group set"
            )

    header = ["group"]
    for measure in measures:
        header.extend([f"{measure}_rho", f"{measure}_p",
                       f"{measure}_sign", f"{measure}_significant"])
    lines = ["\t".join(header)]
    for group in group_order:
        row = [group]
        for measure in measures:
            rho, p, _ = per_measure[measure][group]
            sign = "+" if rho > 0 else "-" if rho < 0 else "0"
            row.extend([repr(rho), repr(p), sign, str(p < 0.05).lower()])
        lines.append("\t".join(row))
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    outputs = [args.output]
    if args.html:
        Path(args.html).write_text(_html_table(lines), encoding="utf-8")
        outputs.append(args.html)
    return _finish(args, command, list(args.correlations), outputs, {
        "measures": measures,
        "groups": group_order,
    })


def _html_table(tsv_lines: list[str]) -> str:
    def cells(line, tag):
        inner = "".join(f"<{tag}>{value}</{tag}>" for value in line.split("\t"))
        return f"<tr>{inner}</tr>"

    body = [cells(tsv_lines[0], "th")]
    body.extend(cells(line, "td") for line in tsv_lines[1:])
    rows = "\n".join(body)
    return ("<!DOCTYPE html>\n<html><body><table border=\"1\">\n"
            f"{rows}\n</table></body></html>\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="tokgap", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"tokgap {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    inject_p = sub.add_parser("inject", parents=[], help="add character noise")
    inject_p.add_argument("--input", required=True)
    inject_p.add_argument("--level", type=float, required=True)
    inject_p.add_argument("--seed", type=int, required=True)
    inject_p.add_argument("--inventory-from")
    inject_p.add_argument("--receipt")
    inject_p.add_argument("--action-weights")
    inject_p.add_argument("--label", default="")
    inject_p.add_argument("--output", required=True)
    inject_p.add_argument("--manifest")
    inject_p.set_defaults(handler=_cmd_inject)

    train_p = sub.add_parser("train-bpe", help="learn BPE merges on a corpus")
    train_p.add_argument("--input", required=True)
    train_p.add_argument("--merges", type=int, required=True)
    train_p.add_argument("--end-marker", default="</w>")
    train_p.add_argument("--output", required=True)
    train_p.add_argument("--manifest")
    train_p.set_defaults(handler=_cmd_train_bpe)

    profile_p = sub.add_parser("profile", help="tokenization profile of a corpus")
    profile_p.add_argument("--input", required=True)
    profile_p.add_argument("--vocab", required=True)
    profile_p.add_argument("--label", default="")
    profile_p.add_argument("--split")
    profile_p.add_argument("--output", required=True)
    profile_p.add_argument("--manifest")
    profile_p.set_defaults(handler=_cmd_profile)

    measure_p = sub.add_parser("measure", help="divergence between two profiles")
    measure_p.add_argument("--source", required=True)
    measure_p.add_argument("--target", required=True)
    measure_p.add_argument("--output", required=True)
    measure_p.add_argument("--manifest")
    measure_p.set_defaults(handler=_cmd_measure)

    correlate_p = sub.add_parser("correlate",
                                 help="rank correlations against accuracies")
    correlate_p.add_argument("--input", required=True)
    correlate_p.add_argument("--measures")
    correlate_p.add_argument("--p-method",
                             choices=(T_APPROXIMATION, EXACT_PERMUTATION),
                             default=T_APPROXIMATION)
    correlate_p.add_argument("--output", required=True)
    correlate_p.add_argument("--manifest")
    correlate_p.set_defaults(handler=_cmd_correlate)

    recommend_p = sub.add_parser("recommend", help="pick a noise level")
    recommend_p.add_argument("--source", required=True)
    recommend_p.add_argument("--target", required=True)
    recommend_p.add_argument("--vocab", required=True)
    recommend_p.add_argument("--grid")
    recommend_p.add_argument("--seeds")
    recommend_p.add_argument("--jobs", type=int, default=1)
    recommend_p.add_argument("--output", required=True)
    recommend_p.add_argument("--manifest")
    recommend_p.set_defaults(handler=_cmd_recommend)

    convert_p = sub.add_parser("convert", help="map dialect tags to UPOS")
    convert_p.add_argument("--input", required=True)
    convert_p.add_argument("--spec")
    convert_p.add_argument("--lexicon", action="append")
    convert_p.add_argument("--contractions")
    convert_p.add_argument("--case-fold", action="store_true")
    convert_p.add_argument("--passthrough-unknown", action="store_true")
    convert_p.add_argument("--output", required=True)
    convert_p.add_argument("--manifest")
    convert_p.set_defaults(handler=_cmd_convert)

    report_p = sub.add_parser("report", help="grid table from correlation runs")
    report_p.add_argument("--correlations", nargs="+", required=True)
    report_p.add_argument("--html")
    report_p.add_argument("--output", required=True)
    report_p.add_argument("--manifest")
    report_p.set_defaults(handler=_cmd_report)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "subcommand", None):
            raise _UsageError(parser.format_usage())
        return args.handler(args, ["tokgap"] + list(argv))
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        missing = exc.filename if exc.filename else str(exc)
        print(f"tokgap: file not found: {missing}", file=sys.stderr)
        return DATA_ERROR
    except TokgapError as exc:
        print(f"tokgap: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
