"""Command-line entry point and JSONL plumbing for every subcommand.

Exit codes: 0 success, 1 usage error, 2 data error. All subcommands are
deterministic given --seed and their inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import curation, decoding, distractors, eval_stats, text_metrics, toy_model, training
from .errors import QuizsmithError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if line:
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise corpus_mod.DataFormatError(
                        f"{path}:{lineno}: invalid JSON: {exc}"
                    ) from exc
    return rows


def write_jsonl(rows, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# --- subcommands --------------------------------------------------------------


def _cmd_metrics(args) -> int:
    preds = read_jsonl(args.pred)
    refs = read_jsonl(args.ref)
    if len(preds) != len(refs):
        raise corpus_mod.DataFormatError(
            f"prediction and reference files are not line-aligned "
            f"({len(preds)} vs {len(refs)} lines)"
        )
    config = text_metrics.QaSplitConfig(separator=args.separator)
    predictions = [str(row.get("prediction", row.get("output", ""))) for row in preds]
    references = []
    for row in refs:
        pairs = [
            corpus_mod.QAPair(question=str(r["question"]), answer=str(r["answer"]))
            for r in row.get("references", [])
        ]
        references.append(pairs)
    report = text_metrics.evaluate_predictions(predictions, references, config)
    _emit(report, args.out)
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    records = corpus_mod.load_corpus(args.infile)
    processed = corpus_mod.postprocess_corpus(records)
    if not processed:
        raise corpus_mod.DataFormatError("no records survived post-processing")
    split = corpus_mod.split_corpus(processed, args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus_mod.dump_corpus(processed, out_dir / "postprocessed.jsonl")
    manifest = {
        "seed": args.seed,
        "train": sorted(split.train),
        "validation": sorted(split.validation),
        "test": sorted(split.test),
    }
    (out_dir / "split.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    _emit(
        {
            "records_in": len(records),
            "records_out": len(processed),
            "split_sizes": list(split.sizes()),
        },
        None,
    )
    return EXIT_OK


def _examples_from_corpus(
    records, task: str, separator: str
) -> tuple[toy_model.Vocab, list[training.TrainExample]]:
    symbols: list[str] = []

    def collect(tokens):
        for token in tokens:
            if token not in seen:
                seen.add(token)
                symbols.append(token)
        return tokens

    seen: set[str] = set()
    examples = []
    if task == "qag":
        collect([separator])
        for record in records:
            input_tokens = collect(record.summary.split())
            refs = []
            for ref in record.references:
                refs.append(
                    tuple(collect(ref.question.split() + [separator] + ref.answer.split()))
                )
            examples.append((record.id, tuple(input_tokens), tuple(refs)))
    elif task == "answer":
        for record in records:
            for i, ref in enumerate(record.references):
                input_tokens = collect(ref.question.split())
                target = tuple(collect(ref.answer.split()))
                examples.append((f"{record.id}#{i}", tuple(input_tokens), (target,)))
    else:
        raise UsageError(f"unknown task {task!r}")

    vocab = toy_model.Vocab.build(symbols)
    train_examples = [
        training.TrainExample(
            example_id=example_id,
            input_ids=tuple(vocab.ids(input_tokens)),
            references=tuple(tuple(vocab.ids(ref)) for ref in refs),
        )
        for example_id, input_tokens, refs in examples
    ]
    return vocab, train_examples


def _cmd_train_demo(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    if not records:
        raise corpus_mod.DataFormatError("corpus is empty")
    vocab, examples = _examples_from_corpus(records, args.task, args.separator)
    strategy = training.Strategy[args.strategy]
    result = training.train(
        strategy=strategy,
        params=toy_model.zero_params(vocab.size),
        vocab=vocab,
        examples=examples,
        steps=args.steps,
        learning_rate=args.lr,
        seed=args.seed,
    )
    if args.trace_out:
        write_jsonl(
            (
                {
                    "step": t.step,
                    "example_id": t.example_id,
                    "selected_ref": t.selected_ref,
                    "loss": t.loss,
                }
                for t in result.trace
            ),
            args.trace_out,
        )
    if args.params_out:
        toy_model.save_model(vocab, result.params, args.params_out)
    _emit(
        {
            "strategy": strategy.value,
            "steps": args.steps,
            "examples": len(examples),
            "vocab_size": vocab.size,
            "final_loss": result.trace[-1].loss,
        },
        None,
    )
    return EXIT_OK


def _cmd_decode(args) -> int:
    vocab, params = toy_model.load_model(args.params)
    scorer = toy_model.as_scorer(params, vocab)
    config = decoding.DecodeConfig(
        beams=args.beams,
        alpha=args.alpha,
        max_len=args.max_len,
        temperature=args.temperature,
    )
    rows = read_jsonl(args.infile)
    out_rows = []
    for i, row in enumerate(rows):
        input_ids = vocab.ids(str(row.get("input", "")).split())
        out = dict(row)
        if args.mode == "beam":
            ids = decoding.beam_search(scorer, input_ids, config, eos_id=vocab.eos_id)
            out["output"] = " ".join(vocab.tokens(ids))
        elif args.mode == "sample":
            ids = decoding.sample(scorer, input_ids, config, args.seed + i, eos_id=vocab.eos_id)
            out["output"] = " ".join(vocab.tokens(ids))
        else:
            candidate_ids = decoding.sample_candidates(
                scorer, input_ids, args.k, config, args.seed + 4 * args.k * i, eos_id=vocab.eos_id
            )
            out["candidates"] = [" ".join(vocab.tokens(ids)) for ids in candidate_ids]
        out_rows.append(out)
    write_jsonl(out_rows, args.out)
    return EXIT_OK


def _make_embedder(spec: str, dim: int) -> distractors.Embedder:
    if spec == "trigram":
        return lambda text: distractors.embed_char_trigrams(text, dim)
    if spec.startswith("command:"):
        return distractors.CommandEmbedder(spec[len("command:") :])
    raise UsageError(f"unknown embedder {spec!r}; expected 'trigram' or 'command:<path>'")


def _cmd_distract(args) -> int:
    embedder = _make_embedder(args.embedder, args.dim)
    rows = read_jsonl(args.infile)
    mcqs = []
    for row in rows:
        # Blank candidates (a sampler can emit an immediate end-of-sequence)
        # are useless as quiz options; drop them before selection.
        candidates = [str(c) for c in row["candidates"] if str(c).strip()]
        selected = distractors.select_distractors(
            key=str(row["key"]),
            candidates=candidates,
            k=args.k,
            embedder=embedder,
        )
        mcqs.append(
            distractors.McQuestion(
                question=str(row["question"]),
                key=str(row["key"]),
                distractors=tuple(selected),
            )
        )
    write_jsonl((curation.mcq_to_dict(m) for m in mcqs), args.out)
    if args.batch_id:
        store = curation.BatchStore(args.data_dir)
        batch = curation.CurationBatch(
            batch_id=args.batch_id, seed=args.seed, candidates=tuple(mcqs)
        )
        store.save(batch)
        _emit({"batch_id": batch.batch_id, "status": batch.status, "questions": len(mcqs)}, None)
    return EXIT_OK


def _cmd_stats(args) -> int:
    if args.survey:
        rows = read_jsonl(args.survey)
        responses = [int(row["rating"]) for row in rows]
        mean, margin = eval_stats.aggregate_ratings(responses)
        _emit({"n": len(responses), "mean": mean, "margin": margin}, args.out)
        return EXIT_OK
    if not args.ratings or not args.questions:
        raise UsageError("stats requires --ratings and --questions (or --survey)")
    ratings = [
        eval_stats.RatingRecord(
            rater_id=str(row["rater_id"]),
            question_id=str(row["question_id"]),
            marked=frozenset(str(o) for o in row["marked"]),
            overlap_flags=frozenset(str(o) for o in row.get("overlap_flags", [])),
        )
        for row in read_jsonl(args.ratings)
    ]
    questions = [
        eval_stats.QuestionOptions(
            question_id=str(row["question_id"]),
            key_option=str(row["key_option"]),
            distractor_options=frozenset(str(o) for o in row["distractor_options"]),
        )
        for row in read_jsonl(args.questions)
    ]
    report = eval_stats.compute_stats(ratings, questions)
    _emit(report.as_dict(), args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import serve

    data_dir = os.environ.get("QUIZSMITH_DATA_DIR") or args.data_dir
    if not data_dir:
        raise UsageError("serve requires --data-dir or QUIZSMITH_DATA_DIR")
    serve(port=args.port, data_dir=data_dir, ui_dir=args.ui_dir)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> _Parser:
    shared = _Parser(add_help=False)
    shared.add_argument("--seed", type=int, default=0, help="deterministic seed")

    parser = _Parser(prog="quizsmith", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", parents=[shared], help="score predictions against references")
    p.add_argument("--pred", required=True, help="predictions JSONL ({'prediction': str})")
    p.add_argument("--ref", required=True, help="references JSONL ({'references': [{question, answer}]})")
    p.add_argument("--separator", default="<sep>")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("pipeline", parents=[shared], help="post-process a corpus and split it")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("train-demo", parents=[shared], help="train the toy model on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--strategy", default="MIN_REF", choices=[s.name for s in training.Strategy])
    p.add_argument("--task", default="qag", choices=["qag", "answer"])
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--separator", default="<sep>")
    p.add_argument("--trace-out")
    p.add_argument("--params-out")
    p.set_defaults(func=_cmd_train_demo)

    p = sub.add_parser("decode", parents=[shared], help="decode inputs with a trained checkpoint")
    p.add_argument("--params", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="beam", choices=["beam", "sample", "candidates"])
    p.add_argument("--beams", type=int, default=8)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--max-len", type=int, default=128)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--k", type=int, default=3, help="distractor count for candidates mode")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("distract", parents=[shared], help="select distractors from candidates")
    p.add_argument("--in", dest="infile", required=True, help="JSONL of {question, key, candidates}")
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--embedder", default="trigram", help="trigram | command:<path>")
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--batch-id", help="also persist the questions as a curation batch")
    p.add_argument("--data-dir", default=".")
    p.set_defaults(func=_cmd_distract)

    p = sub.add_parser("stats", parents=[shared], help="human-eval statistics")
    p.add_argument("--ratings")
    p.add_argument("--questions")
    p.add_argument("--survey", help="JSONL of {'rating': 1..5} for survey aggregation")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("serve", parents=[shared], help="run the curation console service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir")
    p.add_argument("--ui-dir", help="static UI bundle to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (QuizsmithError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    sys.exit(main())
