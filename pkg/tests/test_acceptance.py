"""Acceptance suite: one test per release criterion, one printed line each.

Benchmark-scale results from the literature (integrated-supervision AER
tables on licensed corpora with full-size language models) are explicitly
NOT reproduced here; they require data and compute outside this package's
scope. They are replaced by the property suites below, which check the
same structural claims on synthetic fixtures: gradient exactness, metric
definitions, the prediction rule, integration algebra, the self-correction
effect, and the integration-ordering pattern.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.
"""

import math
import time

import numpy as np

from conftest import central_difference, max_relative_error
from embalign.alignment import AlignmentSet, GoldAlignment, to_subword_alignment
from embalign.corpus import slice_corpus
from embalign.encoder import init_params
from embalign.evaluation import corpus_eval, evaluate, self_correction
from embalign.integration import (
    AlignerRecord,
    IntegrationConfig,
    aligner_credits,
    combine,
    filter_by_credit,
    total_credit,
    weight_by_credit,
)
from embalign.similarity import PredictConfig, bidirectional_softmax, predict_links
from embalign.synthetic import SyntheticSpec, corrupt_alignment, synthesize_corpus
from embalign.training import (
    Monitor,
    TrainConfig,
    finetune,
    sentence_gradient,
    sentence_objective,
    tune_threshold,
)

SELF_CORRECTION_SEEDS = (101, 102, 103, 104, 105)
ORDERING_SEEDS = (301, 302, 303, 304, 305)
# Criterion-pinned corpus; lr chosen so convergence spans the 10 epochs
# (the default 1e-2 converges inside epoch 1 and flattens the series).
EXPERIMENT_LR = 5e-4


def check(name, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] {name}" + (f" - {detail}" if detail else ""), flush=True)
    assert passed, f"{name}: {detail}"


# --------------------------------------------------------------------------
# 1. Gradient fidelity
# --------------------------------------------------------------------------

def test_gradient_fidelity():
    rng = np.random.default_rng(7001)
    start = time.perf_counter()
    worst = 0.0
    for trial in range(50):
        kind = "static" if trial % 2 == 0 else "attn1"
        vocab_size = int(rng.integers(4, 13))
        params = init_params(
            [f"t{i}" for i in range(vocab_size)],
            dim=int(rng.choice([4, 6])),
            kind=kind,
            seed=int(rng.integers(0, 10_000)),
        )
        m = int(rng.integers(1, 9))
        n = int(rng.integers(1, 11))
        src = rng.integers(0, vocab_size, size=m)
        tgt = rng.integers(0, vocab_size, size=n)
        pool = [(i, j) for i in range(m) for j in range(n)]
        take = int(rng.integers(1, len(pool) + 1))
        supervision = AlignmentSet.of(
            [pool[k] for k in rng.choice(len(pool), size=take, replace=False)],
            "subword",
        )
        weights = None
        if rng.random() < 0.5:
            weights = {p: float(rng.uniform(0, 1)) for p in supervision.pairs}
        temperature = float(rng.choice([1.0, 0.7, 1.5]))
        _, grads = sentence_gradient(params, src, tgt, supervision, weights, temperature)
        fd = central_difference(
            lambda: sentence_objective(params, src, tgt, supervision, weights, temperature),
            params.tensors(),
        )
        for name in grads:
            worst = max(worst, max_relative_error(grads[name], fd[name]))
    elapsed = time.perf_counter() - start
    check(
        "gradient fidelity",
        worst < 1e-4 and elapsed < 30.0,
        f"max rel err {worst:.3e} over 50 instances in {elapsed:.1f}s",
    )


# --------------------------------------------------------------------------
# 2. Metric oracle equivalence (exact)
# --------------------------------------------------------------------------

def _oracle_counts(a, b):
    hits = 0
    for p in a:
        for q in b:
            if p == q:
                hits += 1
                break
    return hits


def test_metric_oracle_equivalence():
    rng = np.random.default_rng(7002)
    start = time.perf_counter()
    agree = True
    for _ in range(1000):
        def pick(size):
            return {
                (int(rng.integers(0, 21)), int(rng.integers(0, 21)))
                for _ in range(size)
            }

        a = pick(int(rng.integers(0, 31)))
        s = pick(int(rng.integers(0, 15)))
        p = s | pick(int(rng.integers(0, 15)))
        r = pick(int(rng.integers(0, 20)))
        gold = GoldAlignment(AlignmentSet.of(s), AlignmentSet.of(p))
        got = evaluate(AlignmentSet.of(a), gold)

        hit_s = _oracle_counts(list(a), list(s))
        hit_p = _oracle_counts(list(a), list(gold.possible.pairs))
        want_aer = 0.0 if not a and not s else 1 - (hit_s + hit_p) / (len(a) + len(s))
        want_precision = hit_p / len(a) if a else None
        want_recall = hit_s / len(s) if s else None
        agree &= got.aer == want_aer
        agree &= got.precision == want_precision and got.recall == want_recall

        sc = self_correction(AlignmentSet.of(a), AlignmentSet.of(r), gold)
        new = [x for x in a if x not in r]
        deleted = [x for x in r if x not in a]
        remaining = [x for x in r if x in a]
        pp = list(gold.possible.pairs)
        want_new = _oracle_counts(new, pp) / len(new) if new else None
        want_del = (
            (len(deleted) - _oracle_counts(deleted, pp)) / len(deleted) if deleted else None
        )
        want_rem = _oracle_counts(remaining, pp) / len(remaining) if remaining else None
        agree &= sc.new_precision == want_new
        agree &= sc.del_rate == want_del
        agree &= sc.remain_precision == want_rem
        if not agree:
            break
    elapsed = time.perf_counter() - start
    check(
        "metric oracle equivalence",
        agree and elapsed < 10.0,
        f"1000 instances exact in {elapsed:.1f}s",
    )


# --------------------------------------------------------------------------
# 3. Prediction rule (paper threshold values)
# --------------------------------------------------------------------------

def test_prediction_rule():
    rng = np.random.default_rng(7003)
    exact = True
    for _ in range(500):
        m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        probs = bidirectional_softmax(rng.normal(size=(m, n)) * 2.0)
        for c in (1e-6, 0.1, 0.5):
            got = predict_links(probs, PredictConfig(c=c)).pairs
            want = {
                (i, j)
                for i in range(m)
                for j in range(n)
                if probs.s2t[i][j] > c and probs.t2s[i][j] > c
            }
            exact &= got == want
    check("prediction rule", exact, "500 matrices x thresholds {1e-6, 0.1, 0.5}, exact")


# --------------------------------------------------------------------------
# 4. Integration algebra
# --------------------------------------------------------------------------

def _random_records(rng, n_aligners, n_sentences=3):
    records = []
    for k in range(n_aligners):
        sentences = []
        for _ in range(n_sentences):
            size = int(rng.integers(0, 9))
            sentences.append(
                AlignmentSet.of(
                    {
                        (int(rng.integers(0, 6)), int(rng.integers(0, 6)))
                        for _ in range(size)
                    },
                    "subword",
                )
            )
        records.append(AlignerRecord(f"al{k}", tuple(sentences), float(rng.uniform(0, 1))))
    return records


def test_integration_algebra():
    rng = np.random.default_rng(7004)
    ok = True
    for _ in range(200):
        records = _random_records(rng, int(rng.integers(2, 7)))
        credits = aligner_credits(records)
        inter = combine(records, "intersection")
        union = combine(records, "union")
        filt = filter_by_credit(records, credits, 0.45)
        for i, u, fl in zip(inter, union, filt):
            ok &= i.pairs <= fl.pairs <= u.pairs

        f1, f2 = sorted(rng.uniform(0, 1, size=2))
        low = filter_by_credit(records, credits, float(f1))
        high = filter_by_credit(records, credits, float(f2))
        ok &= all(h.pairs <= l.pairs for l, h in zip(low, high))

        sharp = weight_by_credit(records, credits, IntegrationConfig(f=0.45, steepness=1e6))
        for k, sentence in enumerate(sharp):
            for pair, w in sentence.items():
                credit = total_credit(pair, k, records, credits)
                if abs(credit - 0.45) > 1e-4:
                    ok &= abs(w - (1.0 if credit > 0.45 else 0.0)) < 1e-6
        if not ok:
            break
    check("integration algebra", ok, "200 fixtures, K in 2..6")


# --------------------------------------------------------------------------
# 5. Worked ensemble numbers
# --------------------------------------------------------------------------

def test_worked_ensemble_numbers():
    one = AlignmentSet.of([(0, 0)], "subword")
    credits = aligner_credits(
        [AlignerRecord("a", (one,), 0.2), AlignerRecord("b", (one,), 0.3)]
    )
    ok = math.isclose(credits[0], 0.52498, abs_tol=1e-5)
    ok &= math.isclose(credits[1], 0.47502, abs_tol=1e-5)

    w_at_one = 1.0 / (1.0 + math.exp(-0.5 * (1.0 - 0.45)))
    record = AlignerRecord("a", (one,), 0.0)
    weights = weight_by_credit([record], [1.0], IntegrationConfig(f=0.45, steepness=0.5))
    ok &= math.isclose(weights[0][(0, 0)], 0.56831, abs_tol=1e-5)
    ok &= weights[0][(0, 0)] == w_at_one

    at_threshold = weight_by_credit([record], [0.45], IntegrationConfig(f=0.45, steepness=0.5))
    ok &= at_threshold[0][(0, 0)] == 0.5

    check(
        "worked ensemble numbers",
        ok,
        f"credits {credits[0]:.5f}/{credits[1]:.5f}, w(1)={weights[0][(0,0)]:.5f}, w(f)=0.5",
    )


# --------------------------------------------------------------------------
# 6 & 7. Self-correction at desk scale + clean-supervision sanity
# --------------------------------------------------------------------------

def _self_correction_run(seed, corruption):
    """Train on 1800 pairs, tune the threshold on a 100-pair dev slice,
    measure the per-epoch series and final AER on the disjoint 100-pair
    held-out slice (whose supervision never enters training)."""
    spec = SyntheticSpec(
        vocab_size=200, pair_count=2000, min_len=8, max_len=12,
        swap_rate=0.3, corruption_rate=corruption, seed=seed,
    )
    corpus, gold, supervision = synthesize_corpus(spec)
    train = slice_corpus(corpus, 0, 1800)
    dev = slice_corpus(corpus, 1800, 1900)
    held = slice_corpus(corpus, 1900, 2000)
    sup_train = [
        to_subword_alignment(s, m1, m2)
        for s, m1, m2 in zip(supervision[:1800], train.src_maps, train.tgt_maps)
    ]
    config = TrainConfig(seed=seed, learning_rate=EXPERIMENT_LR)
    tokens = [
        t
        for smap, tmap in zip(corpus.src_maps, corpus.tgt_maps)
        for t in (*smap.subword_tokens, *tmap.subword_tokens)
    ]
    params0 = init_params(tokens, dim=config.dim, kind=config.kind, seed=seed)

    params, _ = finetune(train, sup_train, config=config, params=params0)
    c_star, _ = tune_threshold(params, dev, gold[1800:1900])

    monitor = Monitor(
        corpus=held,
        gold=tuple(gold[1900:2000]),
        reference=tuple(supervision[1900:2000]),
        predict=PredictConfig(c=c_star),
    )
    _, history = finetune(train, sup_train, config=config, params=params0, monitor=monitor)
    supervision_aer = corpus_eval(supervision[1900:2000], gold[1900:2000]).aer
    return c_star, history, supervision_aer


def test_self_correction_at_desk_scale():
    passing = 0
    details = []
    for seed in SELF_CORRECTION_SEEDS:
        start = time.perf_counter()
        c_star, history, supervision_aer = _self_correction_run(seed, corruption=0.2)
        elapsed = time.perf_counter() - start
        first, last = history[0], history[-1]
        improved = last.aer <= 0.8 * supervision_aer
        rising = (
            last.new_precision > first.new_precision and last.del_rate > first.del_rate
        )
        in_time = elapsed < 120.0
        if improved and rising and in_time:
            passing += 1
        details.append(
            f"seed {seed}: aer {last.aer:.3f} vs sup {supervision_aer:.3f}, "
            f"new {first.new_precision:.2f}->{last.new_precision:.2f}, "
            f"del {first.del_rate:.2f}->{last.del_rate:.2f}, {elapsed:.0f}s"
        )
    check(
        "self-correction at desk scale",
        passing >= 4,
        f"{passing}/5 seeds pass; " + "; ".join(details),
    )


def test_clean_supervision_sanity():
    start = time.perf_counter()
    _, history, _ = _self_correction_run(SELF_CORRECTION_SEEDS[0], corruption=0.0)
    elapsed = time.perf_counter() - start
    final_aer = history[-1].aer
    check(
        "clean-supervision sanity",
        final_aer <= 0.05 and elapsed < 120.0,
        f"held-out AER {final_aer:.4f} in {elapsed:.0f}s",
    )


# --------------------------------------------------------------------------
# 8. Integration ordering pattern (benchmark tables NOT reproduced)
# --------------------------------------------------------------------------

def _ensemble_fixture(seed):
    """Three synthetic aligners = gold corrupted at different rates; their
    dev AERs are measured on a dev slice, as a real ensemble would."""
    spec = SyntheticSpec(
        vocab_size=100, pair_count=400, min_len=8, max_len=12,
        swap_rate=0.3, corruption_rate=0.0, seed=seed,
    )
    corpus, gold, _ = synthesize_corpus(spec)
    rng = np.random.default_rng(seed + 9000)
    records = []
    for name, rate in (("good", 0.15), ("mid", 0.3), ("bad", 0.45)):
        sentences = []
        for pair, g in zip(corpus.pairs, gold):
            n = len(pair.source_tokens)
            sentences.append(
                AlignmentSet(
                    corrupt_alignment(g.sure.pairs, n, len(pair.target_tokens), rate, rng),
                    "word",
                )
            )
        dev_aer = corpus_eval(sentences[:100], gold[:100]).aer
        records.append(AlignerRecord(name, tuple(sentences), dev_aer))
    return records, gold


def test_integration_ordering_pattern():
    # Absolute benchmark AERs (licensed corpora + full-size language models)
    # are out of scope; this checks the ordering pattern only: credit-based
    # filtering/weighting never scores worse than plain intersection.
    ok = True
    details = []
    for seed in ORDERING_SEEDS:
        records, gold = _ensemble_fixture(seed)
        credits = aligner_credits(records)
        inter_aer = corpus_eval(combine(records, "intersection"), gold).aer
        filt_aer = corpus_eval(filter_by_credit(records, credits, 0.45), gold).aer
        weights = weight_by_credit(records, credits, IntegrationConfig())
        weight_sets = [
            AlignmentSet.of([p for p, w in sentence.items() if w > 0.5], "word")
            for sentence in weights
        ]
        weight_aer = corpus_eval(weight_sets, gold).aer
        ok &= filt_aer <= inter_aer and weight_aer <= inter_aer
        details.append(
            f"seed {seed}: inter {inter_aer:.3f}, filter {filt_aer:.3f}, weight {weight_aer:.3f}"
        )
    check("integration ordering pattern", ok, "; ".join(details))
