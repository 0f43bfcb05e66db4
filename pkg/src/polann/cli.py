"""Command-line front end for the annotation pipeline.

Subcommands cover the full flow: lexicon-based annotation (annotate-pc),
mixture fitting and annotation (fit-gmm, annotate-gmm), dataset splitting
(split), classifier training, hyperparameter search, and prediction
(train, search, predict), and scoring (evaluate, agreement).

Exit codes: 0 on success, 1 on usage errors, 2 on data or validation
errors.  All randomness in one invocation flows from a single --seed;
each consumer derives its own stream by stable hashing.  Output files are
written atomically so interrupted runs never leave partial artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import classifier, corpus, evaluation, formats, gmm, polarity, vectors
from .config import GmmSettings, PipelineConfig, load_config
from .errors import PolannError, ValidationError
from .polarity import LABELS
from .seeding import derive_seed

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; 2 is reserved for data errors here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    """Missing required value discovered after config merging."""


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as stream:
        return stream.read()


def _require(value, flag: str):
    if value is None or (isinstance(value, (tuple, list)) and not value):
        raise _UsageError(f"missing {flag} (pass the flag or set it in --config)")
    return value


def _merge(flag_value, config_value):
    return config_value if flag_value is None else flag_value


def _print_distribution(labels) -> None:
    dist = polarity.label_distribution(labels)
    for label in LABELS:
        print(f"{label}\t{dist[label]}")
    print(f"total\t{sum(dist.values())}")


def _load_annotation_rows(path: str) -> list[formats.AnnotationRow]:
    return formats.read_annotation_rows(_read_text(path))


def _require_coordinates(rows: list[formats.AnnotationRow], path: str) -> None:
    missing = [row.sentence_id for row in rows if row.coordinate is None]
    if missing:
        shown = ", ".join(repr(m) for m in missing[:10])
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise ValidationError(
            f"{path}: rows lack polarity/intensity columns: {shown}{more}"
        )


def _label_map(rows: list[formats.AnnotationRow], path: str) -> dict[str, formats.AnnotationRow]:
    try:
        return formats.rows_by_id(rows)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


# --- annotate-pc ----------------------------------------------------------


def _cmd_annotate_pc(args, config: PipelineConfig) -> int:
    corpus_paths = args.corpus if args.corpus else list(config.paths.corpus)
    _require(corpus_paths, "--corpus")
    lexicon_path = _require(_merge(args.lexicon, config.paths.lexicon), "--lexicon")
    lemma_map_path = _merge(args.lemma_map, config.paths.lemma_map)
    out_path = _require(_merge(args.out, config.paths.out), "--out")

    parts = [
        corpus.parse_conllu(_read_text(path), source=os.path.basename(path))
        for path in corpus_paths
    ]
    merged = parts[0] if len(parts) == 1 else corpus.merge_corpora(parts)
    if lemma_map_path:
        merged = corpus.apply_lemma_map(merged, corpus.load_lemma_map(_read_text(lemma_map_path)))
    lexicon = corpus.load_lexicon(_read_text(lexicon_path))
    annotations = polarity.annotate_pc(merged, lexicon)
    with formats.atomic_write(out_path) as stream:
        formats.write_annotation_rows(formats.rows_from_pc(annotations), stream)
    _print_distribution(annotations)
    return 0


# --- split ----------------------------------------------------------------


def _cmd_split(args, config: PipelineConfig) -> int:
    annotations_path = _require(_merge(args.annotations, config.paths.annotations), "--annotations")
    out_dir = _require(_merge(args.out_dir, config.paths.out_dir), "--out-dir")
    seed = derive_seed(_merge(args.seed, config.seed), "split")

    rows = _load_annotation_rows(annotations_path)
    ids = [row.sentence_id for row in rows]
    train_ids, dev_ids, test_ids = corpus.split_ids(ids, seed)
    os.makedirs(out_dir, exist_ok=True)
    for name, part in (("train.txt", train_ids), ("validation.txt", dev_ids), ("test.txt", test_ids)):
        with formats.atomic_write(os.path.join(out_dir, name)) as stream:
            formats.write_id_list(part, stream)
    print(f"train\t{len(train_ids)}")
    print(f"validation\t{len(dev_ids)}")
    print(f"test\t{len(test_ids)}")
    return 0


# --- fit-gmm / annotate-gmm -------------------------------------------------


def _load_grid(path: str, seed: int, base: GmmSettings) -> list[gmm.GmmConfig]:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"grid {path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, list) or not data:
        raise ValidationError(f"grid {path}: expected a non-empty JSON array")
    allowed = {"covariance_type", "tol", "max_iter", "reg_covar", "n_init"}
    configs = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise ValidationError(f"grid {path}: entry {i} is not an object")
        unknown = sorted(set(entry) - allowed)
        if unknown:
            raise ValidationError(f"grid {path}: entry {i} has unknown keys: {', '.join(unknown)}")
        try:
            configs.append(
                gmm.GmmConfig(
                    covariance_type=entry.get("covariance_type", base.covariance_type),
                    tol=entry.get("tol", base.tol),
                    max_iter=entry.get("max_iter", base.max_iter),
                    reg_covar=entry.get("reg_covar", base.reg_covar),
                    n_init=entry.get("n_init", base.n_init),
                    seed=seed,
                )
            )
        except (ValidationError, TypeError) as exc:
            raise ValidationError(f"grid {path}: entry {i}: {exc}") from None
    return configs


def _cmd_fit_gmm(args, config: PipelineConfig) -> int:
    embeddings_path = _require(_merge(args.embeddings, config.paths.embeddings), "--embeddings")
    annotations_path = _require(_merge(args.annotations, config.paths.annotations), "--annotations")
    labels_path = _require(_merge(args.labels, config.paths.labels), "--labels")
    out_path = _require(_merge(args.out, config.paths.out), "--out")
    seed = derive_seed(_merge(args.seed, config.seed), "gmm")
    standardize = args.standardize or config.gmm.standardize

    store = vectors.load_embeddings(_read_text(embeddings_path))
    rows = _load_annotation_rows(annotations_path)
    _require_coordinates(rows, annotations_path)
    label_rows = _label_map(_load_annotation_rows(labels_path), labels_path)
    labels = []
    for row in rows:
        gold = label_rows.get(row.sentence_id)
        if gold is None:
            raise ValidationError(f"{labels_path}: no label for id {row.sentence_id!r}")
        labels.append(gold.label)

    features = vectors.build_features(store, rows)
    scaler = None
    if standardize:
        features, mean, std = vectors.standardize_features(features)
        scaler = {"mean": mean.tolist(), "std": std.tolist()}

    if args.grid:
        grid = _load_grid(args.grid, seed, config.gmm)
    elif "gmm" in config.model_fields_set:
        grid = [
            gmm.GmmConfig(
                covariance_type=config.gmm.covariance_type,
                tol=config.gmm.tol,
                max_iter=config.gmm.max_iter,
                reg_covar=config.gmm.reg_covar,
                n_init=config.gmm.n_init,
                seed=seed,
            )
        ]
    else:
        grid = gmm.default_grid(seed=seed, tol=config.gmm.tol, max_iter=config.gmm.max_iter)

    params, chosen, scores = gmm.grid_search(features, labels, grid)
    document = gmm.params_to_dict(params)
    if scaler is not None:
        document["feature_scaler"] = scaler
    with formats.atomic_write(out_path) as stream:
        json.dump(document, stream, indent=2)
        stream.write("\n")
    print(f"configurations\t{len(grid)}")
    print(f"covariance_type\t{chosen.covariance_type}")
    print(f"reg_covar\t{chosen.reg_covar:g}")
    print(f"n_init\t{chosen.n_init}")
    print(f"train_macro_f1\t{scores[chosen]:.6f}")
    return 0


def _load_params_document(path: str) -> tuple[gmm.GmmParams, dict | None]:
    try:
        document = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"params {path}: invalid JSON: {exc.msg}") from exc
    params = gmm.params_from_dict(document)
    scaler = document.get("feature_scaler")
    if scaler is not None:
        if not isinstance(scaler, dict) or "mean" not in scaler or "std" not in scaler:
            raise ValidationError(f"params {path}: malformed feature_scaler block")
    return params, scaler


def _cmd_annotate_gmm(args, config: PipelineConfig) -> int:
    embeddings_path = _require(_merge(args.embeddings, config.paths.embeddings), "--embeddings")
    pc_path = _require(_merge(args.pc_annotations, config.paths.annotations), "--pc-annotations")
    params_path = _require(_merge(args.params, config.paths.params), "--params")
    out_path = _require(_merge(args.out, config.paths.out), "--out")

    store = vectors.load_embeddings(_read_text(embeddings_path))
    rows = _load_annotation_rows(pc_path)
    _require_coordinates(rows, pc_path)
    params, scaler = _load_params_document(params_path)
    features = vectors.build_features(store, rows)
    if scaler is not None:
        features, _, _ = vectors.standardize_features(
            features,
            mean=np.asarray(scaler["mean"], dtype=np.float64),
            std=np.asarray(scaler["std"], dtype=np.float64),
        )
    predicted = gmm.predict(params, features)
    out_rows = [
        formats.AnnotationRow(sentence_id=row.sentence_id, label=label, alpha=1.0)
        for row, label in zip(rows, predicted)
    ]
    with formats.atomic_write(out_path) as stream:
        formats.write_label_rows(out_rows, stream)
    _print_distribution(predicted)
    return 0


# --- train / search / predict ----------------------------------------------


def _examples_for(
    ids: list[str],
    by_id: dict[str, formats.AnnotationRow],
    store: vectors.EmbeddingStore,
    what: str,
) -> list[classifier.TrainExample]:
    examples = []
    for sentence_id in ids:
        row = by_id.get(sentence_id)
        if row is None:
            raise ValidationError(f"{what}: id {sentence_id!r} not in the annotation file")
        if sentence_id not in store:
            raise ValidationError(f"{what}: id {sentence_id!r} has no embedding")
        examples.append(
            classifier.TrainExample(
                features=store.vector(sentence_id), label=row.label, alpha=row.alpha
            )
        )
    return examples


def _train_config(args, config: PipelineConfig, seed: int) -> classifier.TrainConfig:
    hidden = args.hidden if args.hidden is not None else list(config.train.hidden_sizes)
    return classifier.TrainConfig(
        learning_rate=_merge(args.learning_rate, config.train.learning_rate),
        batch_size=_merge(args.batch_size, config.train.batch_size),
        max_epochs=_merge(args.max_epochs, config.train.max_epochs),
        patience=_merge(args.patience, config.train.patience),
        clip_norm=_merge(args.clip_norm, config.train.clip_norm),
        loss_kind=_merge(args.loss, config.train.loss),
        hidden_sizes=tuple(hidden),
        seed=seed,
        log_grad_norms=args.log_grad_norms,
    )


def _report_dict(report: classifier.TrainReport) -> dict:
    return {
        "epochs_run": report.epochs_run,
        "best_epoch": report.best_epoch,
        "best_dev_macro_f1": report.best_dev_macro_f1,
        "per_epoch_dev_macro_f1": report.per_epoch_dev_macro_f1,
        "stopped_early": report.stopped_early,
        "grad_norms": report.grad_norms,
    }


def _cmd_train(args, config: PipelineConfig) -> int:
    embeddings_path = _require(_merge(args.embeddings, config.paths.embeddings), "--embeddings")
    annotations_path = _require(_merge(args.annotations, config.paths.annotations), "--annotations")
    out_path = _require(_merge(args.out, config.paths.model), "--out")
    _require(args.train_ids, "--train-ids")
    _require(args.dev_ids, "--dev-ids")
    seed = derive_seed(_merge(args.seed, config.seed), "train")

    store = vectors.load_embeddings(_read_text(embeddings_path))
    by_id = _label_map(_load_annotation_rows(annotations_path), annotations_path)
    train_set = _examples_for(formats.read_id_list(_read_text(args.train_ids)), by_id, store, args.train_ids)
    dev_set = _examples_for(formats.read_id_list(_read_text(args.dev_ids)), by_id, store, args.dev_ids)

    params, report = classifier.train(train_set, dev_set, _train_config(args, config, seed))
    with formats.atomic_write(out_path) as stream:
        classifier.save_model(params, stream)
    if args.report:
        with formats.atomic_write(args.report) as stream:
            json.dump(_report_dict(report), stream, indent=2)
            stream.write("\n")
    print(f"epochs_run\t{report.epochs_run}")
    print(f"best_epoch\t{report.best_epoch}")
    print(f"dev_macro_f1\t{report.best_dev_macro_f1:.6f}")
    return 0


def _cmd_search(args, config: PipelineConfig) -> int:
    embeddings_path = _require(_merge(args.embeddings, config.paths.embeddings), "--embeddings")
    annotations_path = _require(_merge(args.annotations, config.paths.annotations), "--annotations")
    out_path = _require(_merge(args.out, config.paths.model), "--out")
    _require(args.train_ids, "--train-ids")
    _require(args.dev_ids, "--dev-ids")
    _require(args.eval_ids, "--eval-ids")
    master = _merge(args.seed, config.seed)
    n_trials = _merge(args.n_trials, config.train.n_trials)

    store = vectors.load_embeddings(_read_text(embeddings_path))
    by_id = _label_map(_load_annotation_rows(annotations_path), annotations_path)
    train_set = _examples_for(formats.read_id_list(_read_text(args.train_ids)), by_id, store, args.train_ids)
    dev_set = _examples_for(formats.read_id_list(_read_text(args.dev_ids)), by_id, store, args.dev_ids)
    eval_set = _examples_for(formats.read_id_list(_read_text(args.eval_ids)), by_id, store, args.eval_ids)

    base = _train_config(args, config, seed=0)
    params, best_config, log = classifier.random_search(
        train_set,
        dev_set,
        eval_set,
        n_trials=n_trials,
        seed=derive_seed(master, "search"),
        base_config=base,
    )
    with formats.atomic_write(out_path) as stream:
        classifier.save_model(params, stream)
    if args.trial_log:
        with formats.atomic_write(args.trial_log) as stream:
            for entry in log:
                stream.write(json.dumps(entry) + "\n")
    best_score = None
    for entry in log:
        shown = f"{entry['eval_macro_f1']:.6f}" if entry["status"] == "ok" else "-"
        print(f"trial\t{entry['trial']}\t{entry['status']}\t{shown}")
        if entry["status"] == "ok" and entry["seed"] == best_config.seed:
            best_score = entry["eval_macro_f1"]
    print(f"best_eval_macro_f1\t{best_score:.6f}")
    return 0


def _cmd_predict(args, config: PipelineConfig) -> int:
    embeddings_path = _require(_merge(args.embeddings, config.paths.embeddings), "--embeddings")
    model_path = _require(_merge(args.model, config.paths.model), "--model")
    out_path = _require(_merge(args.out, config.paths.out), "--out")

    store = vectors.load_embeddings(_read_text(embeddings_path))
    params = classifier.load_model(_read_text(model_path))
    ids = formats.read_id_list(_read_text(args.ids)) if args.ids else store.ids()
    if not ids:
        raise ValidationError("no ids to predict")
    missing = [i for i in ids if i not in store]
    if missing:
        shown = ", ".join(repr(m) for m in missing[:10])
        raise ValidationError(f"embeddings missing for ids: {shown}")
    features = np.stack([store.vector(i) for i in ids])
    probs = classifier.predict_proba(params, features)
    labels = [LABELS[k] for k in np.argmax(probs, axis=1)]
    # alpha column = winning-class probability, a rough confidence
    rows = [
        formats.AnnotationRow(sentence_id=i, label=label, alpha=float(p))
        for i, label, p in zip(ids, labels, probs.max(axis=1))
    ]
    with formats.atomic_write(out_path) as stream:
        formats.write_label_rows(rows, stream)
    _print_distribution(labels)
    return 0


# --- evaluate / agreement ---------------------------------------------------


def _render_confusion(matrix: evaluation.ConfusionMatrix) -> str:
    names = [str(label) for label in LABELS]
    header = ["gold\\pred"] + names
    body = [
        [names[i]] + [str(int(c)) for c in matrix.counts[i]]
        for i in range(len(names))
    ]
    table = [header] + body
    widths = [max(len(row[col]) for row in table) for col in range(len(header))]
    lines = []
    for row in table:
        first = row[0].ljust(widths[0])
        rest = [cell.rjust(widths[col + 1]) for col, cell in enumerate(row[1:])]
        lines.append("  ".join([first] + rest))
    return "\n".join(lines)


def _confusion_tsv(matrix: evaluation.ConfusionMatrix) -> str:
    names = [str(label) for label in LABELS]
    lines = ["\t".join(["gold\\pred"] + names)]
    for i, name in enumerate(names):
        lines.append("\t".join([name] + [str(int(c)) for c in matrix.counts[i]]))
    return "\n".join(lines) + "\n"


def _metrics_dict(report: evaluation.MetricsReport) -> dict:
    names = [str(label) for label in LABELS]
    return {
        "precision": dict(zip(names, report.precision)),
        "recall": dict(zip(names, report.recall)),
        "f1": dict(zip(names, report.f1)),
        "support": dict(zip(names, report.support)),
        "macro_f1": report.macro_f1,
        "micro_f1": report.micro_f1,
    }


def _cmd_evaluate(args, config: PipelineConfig) -> int:
    gold_path = _require(args.gold, "--gold")
    pred_path = _require(args.pred, "--pred")
    out_dir = _merge(args.out_dir, config.paths.out_dir)

    gold_rows = _load_annotation_rows(gold_path)
    pred_rows = _load_annotation_rows(pred_path)
    ids, gold_labels, pred_labels = formats.align_rows(gold_rows, pred_rows)
    matrix = evaluation.confusion(gold_labels, pred_labels)
    report = evaluation.metrics(matrix, only_present=args.only_present)

    grouped_lines = None
    if args.groups:
        group_map = formats.read_group_map(_read_text(args.groups))
        missing = [i for i in ids if i not in group_map]
        if missing:
            shown = ", ".join(repr(m) for m in missing[:10])
            raise ValidationError(f"{args.groups}: no group for ids: {shown}")
        groups = [group_map[i] for i in ids]
        scores, mean = evaluation.grouped_macro(gold_labels, pred_labels, groups)
        support = {tag: groups.count(tag) for tag in scores}
        grouped_lines = [
            f"{tag}\t{score:.6f}\t{support[tag]}" for tag, score in scores.items()
        ]
        grouped_lines.append(f"mean\t{mean:.6f}\t{len(groups)}")

    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with formats.atomic_write(os.path.join(out_dir, "confusion.tsv")) as stream:
            stream.write(_confusion_tsv(matrix))
        with formats.atomic_write(os.path.join(out_dir, "metrics.json")) as stream:
            json.dump(_metrics_dict(report), stream, indent=2)
            stream.write("\n")
        if grouped_lines is not None:
            with formats.atomic_write(os.path.join(out_dir, "grouped.tsv")) as stream:
                stream.write("\n".join(grouped_lines) + "\n")

    print(_render_confusion(matrix))
    print(json.dumps(_metrics_dict(report), indent=2))
    if grouped_lines is not None:
        for line in grouped_lines:
            print(line)
    return 0


def _cmd_agreement(args, config: PipelineConfig) -> int:
    a_path = _require(args.a, "--a")
    b_path = _require(args.b, "--b")
    a_rows = _load_annotation_rows(a_path)
    b_rows = _load_annotation_rows(b_path)
    _, a_labels, b_labels = formats.align_rows(a_rows, b_rows)
    kappa = evaluation.cohen_kappa(a_labels, b_labels)
    print(f"kappa\t{kappa:.6f}")
    return 0


# --- parser wiring ----------------------------------------------------------


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--loss", choices=["ce", "gdwce"], default=None)
    parser.add_argument("--learning-rate", type=float, default=None)
    parser.add_argument("--batch-size", type=int, default=None)
    parser.add_argument("--max-epochs", type=int, default=None)
    parser.add_argument("--patience", type=int, default=None)
    parser.add_argument("--clip-norm", type=float, default=None)
    parser.add_argument("--hidden", type=int, nargs="*", default=None, metavar="SIZE")
    parser.add_argument("--log-grad-norms", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polann", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="JSON", default=None,
                        help="JSON config supplying defaults for flags")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("annotate-pc", parents=[common],
                       help="annotate a corpus by lexicon scores and nearest centroid")
    p.add_argument("--corpus", nargs="+", metavar="CONLLU", default=None)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--lemma-map", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_annotate_pc)

    p = sub.add_parser("split", parents=[common],
                       help="write 80/10/10 train/validation/test id manifests")
    p.add_argument("--annotations", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("fit-gmm", parents=[common],
                       help="grid-search a 4-component Gaussian mixture on features")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--annotations", default=None)
    p.add_argument("--labels", default=None)
    p.add_argument("--grid", metavar="JSON", default=None)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_fit_gmm)

    p = sub.add_parser("annotate-gmm", parents=[common],
                       help="label sentences with a fitted mixture")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--pc-annotations", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_annotate_gmm)

    p = sub.add_parser("train", parents=[common],
                       help="train the softmax classifier on joined annotation+embedding data")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--annotations", default=None)
    p.add_argument("--train-ids", default=None)
    p.add_argument("--dev-ids", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--report", metavar="JSON", default=None)
    _add_train_flags(p)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("search", parents=[common],
                       help="random hyperparameter search over trained classifiers")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--annotations", default=None)
    p.add_argument("--train-ids", default=None)
    p.add_argument("--dev-ids", default=None)
    p.add_argument("--eval-ids", default=None)
    p.add_argument("--n-trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--trial-log", metavar="JSONL", default=None)
    _add_train_flags(p)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("predict", parents=[common],
                       help="label embeddings with a trained classifier")
    p.add_argument("--embeddings", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--ids", metavar="MANIFEST", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("evaluate", parents=[common],
                       help="score predictions against gold labels")
    p.add_argument("--gold", default=None)
    p.add_argument("--pred", default=None)
    p.add_argument("--groups", metavar="TSV", default=None)
    p.add_argument("--only-present", action="store_true")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("agreement", parents=[common],
                       help="Cohen's kappa between two annotation files")
    p.add_argument("--a", default=None)
    p.add_argument("--b", default=None)
    p.set_defaults(handler=_cmd_agreement)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else PipelineConfig()
        return args.handler(args, config)
    except _UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (PolannError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
