"""Command-line interface.

Commands: generate, finetune, extract, integrate, evaluate, selfcorrect.
Exit codes: 0 success, 2 validation/usage error, 1 runtime error.
Hyper-parameters resolve as defaults < --config file < flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import config as cfgmod
from .alignment import to_subword_alignment, to_word_alignment
from .corpus import read_parallel_corpus, read_subword_maps
from .embedfile import read_embeddings
from .encoder import init_params, load_params, save_params
from .errors import ValidationError
from .estimator import expand_weights
from .evaluation import (
    corpus_eval,
    corpus_self_correction,
    history_csv,
    report_csv,
    self_correction_csv,
    self_correction_history_csv,
)
from .integration import aligner_credits, combine, filter_by_credit, read_manifest, weight_by_credit
from .objective import resolve_weights
from .pharaoh import (
    read_alignment_file,
    read_pharaoh_file,
    read_weights_file,
    write_alignment_file,
    write_pharaoh_file,
    write_weights_file,
)
from .similarity import bidirectional_softmax, predict_links, unit_rows
from .synthetic import SyntheticSpec, synthesize_corpus
from .training import Monitor, finetune, predict_corpus


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_config_flags(parser: argparse.ArgumentParser, names):
    for key in cfgmod.CONFIG_TABLE:
        if key.name not in names:
            continue
        flags = [_flag(key.name)] + [_flag(a) for a in key.aliases]
        kwargs = dict(
            dest=key.name,
            type=key.type,
            default=None,
            help=f"{key.help} (default: {key.default})",
        )
        if key.choices:
            kwargs["choices"] = key.choices
        parser.add_argument(*flags, **kwargs)


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value config file")
    parser.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="random seed (default: 0)"
    )


def _resolve(args: argparse.Namespace) -> dict:
    file_values = None
    if getattr(args, "config", None):
        file_values = cfgmod.parse_config_file(args.config)
    flag_values = {
        key.name: getattr(args, key.name, None) for key in cfgmod.CONFIG_TABLE
    }
    return cfgmod.resolve(file_values, flag_values)


def cmd_generate(args) -> int:
    cfg = _resolve(args)
    spec = SyntheticSpec(
        vocab_size=args.vocab,
        pair_count=args.pairs,
        min_len=args.min_len,
        max_len=args.max_len,
        swap_rate=args.swap,
        corruption_rate=args.corruption,
        seed=cfg["seed"],
    )
    corpus, gold, supervision = synthesize_corpus(spec)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "corpus.src"), "w", encoding="utf-8") as fh:
        for pair in corpus.pairs:
            fh.write(" ".join(pair.source_tokens) + "\n")
    with open(os.path.join(args.out, "corpus.tgt"), "w", encoding="utf-8") as fh:
        for pair in corpus.pairs:
            fh.write(" ".join(pair.target_tokens) + "\n")
    write_pharaoh_file(os.path.join(args.out, "gold.pharaoh"), gold, cfg["index_base"])
    write_alignment_file(
        os.path.join(args.out, "supervision.pharaoh"), supervision, cfg["index_base"]
    )
    meta = {
        "vocab_size": spec.vocab_size,
        "pair_count": spec.pair_count,
        "min_len": spec.min_len,
        "max_len": spec.max_len,
        "swap_rate": spec.swap_rate,
        "corruption_rate": spec.corruption_rate,
        "seed": spec.seed,
        "index_base": cfg["index_base"],
    }
    with open(os.path.join(args.out, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_finetune(args) -> int:
    cfg = _resolve(args)
    corpus = read_parallel_corpus(args.src, args.tgt, cfg["subword_mode"])
    supervision_words = read_alignment_file(args.supervision, cfg["index_base"])
    if len(supervision_words) != len(corpus):
        raise ValidationError(
            f"supervision file has {len(supervision_words)} lines, corpus has {len(corpus)}"
        )
    supervision = [
        to_subword_alignment(align, smap, tmap)
        for align, smap, tmap in zip(supervision_words, corpus.src_maps, corpus.tgt_maps)
    ]
    weights = None
    if args.weights:
        word_weights = read_weights_file(args.weights)
        if len(word_weights) != len(corpus):
            raise ValidationError(
                f"weights file has {len(word_weights)} sentences, corpus has {len(corpus)}"
            )
        weights = [
            expand_weights(align, w, smap, tmap)
            for align, w, smap, tmap in zip(
                supervision_words, word_weights, corpus.src_maps, corpus.tgt_maps
            )
        ]
        for sub, w in zip(supervision, weights):
            resolve_weights(sub, w)

    monitor = None
    if args.gold:
        gold = read_pharaoh_file(args.gold, cfg["index_base"])
        if len(gold) != len(corpus):
            raise ValidationError(
                f"gold file has {len(gold)} lines, corpus has {len(corpus)}"
            )
        monitor = Monitor(
            corpus=corpus,
            gold=tuple(gold),
            reference=tuple(supervision_words),
            predict=cfgmod.predict_config(cfg),
        )

    train_cfg = cfgmod.train_config(cfg)
    params_init = None
    if args.init_checkpoint_out:
        tokens = [
            tok
            for smap, tmap in zip(corpus.src_maps, corpus.tgt_maps)
            for tok in (*smap.subword_tokens, *tmap.subword_tokens)
        ]
        params_init = init_params(
            tokens, dim=train_cfg.dim, kind=train_cfg.kind, seed=train_cfg.seed
        )
        save_params(params_init, args.init_checkpoint_out)
    params, history = finetune(
        corpus, supervision, weights=weights, config=train_cfg,
        params=params_init, monitor=monitor,
    )
    save_params(params, args.checkpoint)
    if args.history:
        with open(args.history, "w", encoding="utf-8") as fh:
            fh.write(history_csv(history))
    if args.selfcorr:
        if not args.gold:
            raise ValidationError("--selfcorr requires --gold")
        with open(args.selfcorr, "w", encoding="utf-8") as fh:
            fh.write(self_correction_history_csv(history))
    return 0


def cmd_extract(args) -> int:
    cfg = _resolve(args)
    if bool(args.checkpoint) == bool(args.embeddings):
        raise ValidationError("provide exactly one of --checkpoint or --embeddings")
    if (args.src_maps or args.tgt_maps) and not args.embeddings:
        raise ValidationError("--src-maps/--tgt-maps only apply with --embeddings")
    corpus = read_parallel_corpus(args.src, args.tgt, cfg["subword_mode"])
    src_maps = list(corpus.src_maps)
    tgt_maps = list(corpus.tgt_maps)
    if args.src_maps:
        src_maps = read_subword_maps(args.src_maps)
        if len(src_maps) != len(corpus):
            raise ValidationError("--src-maps sentence count does not match corpus")
    if args.tgt_maps:
        tgt_maps = read_subword_maps(args.tgt_maps)
        if len(tgt_maps) != len(corpus):
            raise ValidationError("--tgt-maps sentence count does not match corpus")

    predict_cfg = cfgmod.predict_config(cfg)
    predictions = []
    if args.checkpoint:
        params = load_params(args.checkpoint)
        predictions = predict_corpus(params, corpus, predict_cfg)
    else:
        records = read_embeddings(args.embeddings)
        if len(records) != len(corpus):
            raise ValidationError(
                f"embedding file has {len(records)} records, corpus has {len(corpus)} pairs"
            )
        for k, ((hs, ht), smap, tmap) in enumerate(zip(records.records, src_maps, tgt_maps)):
            if hs.shape[0] != smap.subword_count or ht.shape[0] != tmap.subword_count:
                raise ValidationError(
                    f"record {k} row counts {hs.shape[0]}/{ht.shape[0]} do not match "
                    f"subword maps {smap.subword_count}/{tmap.subword_count}"
                )
            M = unit_rows(hs) @ unit_rows(ht).T
            sub = predict_links(bidirectional_softmax(M, predict_cfg.temperature), predict_cfg)
            predictions.append(to_word_alignment(sub, smap, tmap))
    write_alignment_file(args.out, predictions, cfg["index_base"])
    return 0


def cmd_integrate(args) -> int:
    cfg = _resolve(args)
    records = read_manifest(args.manifest, cfg["index_base"])
    credits = aligner_credits(records)
    int_cfg = cfgmod.integration_config(cfg)
    if args.mode in ("union", "intersection"):
        sets = combine(records, args.mode)
    elif args.mode == "filter":
        sets = filter_by_credit(records, credits, int_cfg.f)
    else:
        sets = combine(records, "union")
        weights = weight_by_credit(records, credits, int_cfg)
        if not args.weights_out:
            raise ValidationError("mode 'weight' requires --weights-out")
        write_weights_file(args.weights_out, weights)
    write_alignment_file(args.out, sets, cfg["index_base"])
    return 0


def cmd_evaluate(args) -> int:
    cfg = _resolve(args)
    pred = read_alignment_file(args.pred, cfg["index_base"])
    gold = read_pharaoh_file(args.gold, cfg["index_base"])
    if len(pred) != len(gold):
        raise ValidationError(f"pred has {len(pred)} lines, gold has {len(gold)}")
    sys.stdout.write(report_csv(corpus_eval(pred, gold)))
    return 0


def cmd_selfcorrect(args) -> int:
    cfg = _resolve(args)
    pred = read_alignment_file(args.pred, cfg["index_base"])
    third = read_alignment_file(args.third, cfg["index_base"])
    gold = read_pharaoh_file(args.gold, cfg["index_base"])
    if not (len(pred) == len(third) == len(gold)):
        raise ValidationError(
            f"line counts differ: pred {len(pred)}, third {len(third)}, gold {len(gold)}"
        )
    sys.stdout.write(self_correction_csv(corpus_self_correction(pred, third, gold)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embalign",
        description="Word alignment from supervised contextual embedding fine-tuning.",
    )
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic corpus with gold and noisy supervision")
    _common(p)
    p.add_argument("--vocab", type=int, required=True, help="vocabulary size")
    p.add_argument("--pairs", type=int, required=True, help="number of sentence pairs")
    p.add_argument("--min-len", type=int, default=8, help="minimum sentence length (default: 8)")
    p.add_argument("--max-len", type=int, default=12, help="maximum sentence length (default: 12)")
    p.add_argument("--swap", type=float, default=0.3, help="adjacent swap rate (default: 0.3)")
    p.add_argument(
        "--corruption", type=float, default=0.0,
        help="share of gold links replaced by wrong links (default: 0.0)",
    )
    p.add_argument("--out", required=True, help="output directory")
    _add_config_flags(p, {"index_base"})
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("finetune", help="fine-tune the encoder under supervision")
    _common(p)
    p.add_argument("--src", required=True, help="source corpus file")
    p.add_argument("--tgt", required=True, help="target corpus file")
    p.add_argument("--supervision", required=True, help="Pharaoh supervision file")
    p.add_argument("--weights", help="per-link weight sidecar (switches to weighted objective)")
    p.add_argument("--gold", help="gold Pharaoh file for per-epoch monitoring")
    p.add_argument("--checkpoint", required=True, help="output encoder checkpoint")
    p.add_argument("--init-checkpoint-out", help="also write the initial (untrained) checkpoint")
    p.add_argument("--history", help="output per-epoch history CSV")
    p.add_argument("--selfcorr", help="output per-epoch self-correction CSV (needs --gold)")
    _add_config_flags(
        p,
        {
            "learning_rate", "epochs", "batch_size", "weight_decay", "dropout_rate",
            "temperature", "beta1", "beta2", "eps", "dim", "kind", "c",
            "index_base", "subword_mode",
        },
    )
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("extract", help="predict alignments from a checkpoint or embedding file")
    _common(p)
    p.add_argument("--checkpoint", help="encoder checkpoint")
    p.add_argument("--embeddings", help="binary embedding record file")
    p.add_argument("--src", required=True, help="source corpus file")
    p.add_argument("--tgt", required=True, help="target corpus file")
    p.add_argument("--src-maps", help="sidecar subword maps overriding source segmentation")
    p.add_argument("--tgt-maps", help="sidecar subword maps overriding target segmentation")
    p.add_argument("--out", required=True, help="output Pharaoh predictions (word level)")
    _add_config_flags(p, {"c", "temperature", "index_base", "subword_mode"})
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("integrate", help="combine multiple aligners' Pharaoh files")
    _common(p)
    p.add_argument("--manifest", required=True, help="tab-separated name/path/dev_aer manifest")
    p.add_argument(
        "--mode", required=True, choices=("filter", "weight", "union", "intersection"),
    )
    p.add_argument("--out", required=True, help="output Pharaoh supervision")
    p.add_argument("--weights-out", help="output weight sidecar (weight mode)")
    _add_config_flags(p, {"f", "lambda", "index_base"})
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("evaluate", help="AER/precision/recall of predictions against gold")
    _common(p)
    p.add_argument("--pred", required=True, help="predicted Pharaoh file")
    p.add_argument("--gold", required=True, help="gold Pharaoh file (sure/possible)")
    _add_config_flags(p, {"index_base"})
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("selfcorrect", help="New/Del/Remain of predictions vs third-party vs gold")
    _common(p)
    p.add_argument("--pred", required=True, help="predicted Pharaoh file")
    p.add_argument("--third", required=True, help="third-party Pharaoh file")
    p.add_argument("--gold", required=True, help="gold Pharaoh file")
    _add_config_flags(p, {"index_base"})
    p.set_defaults(func=cmd_selfcorrect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
