"""Alignment quality metrics.

AER follows the standard sure/possible definition:

    AER = 1 - (|A ∩ S| + |A ∩ P|) / (|A| + |S|)

Precision counts hits against possible links, recall against sure links.
Self-correction compares predictions A with a third-party reference R
against gold:

    new    = |(A \\ R) ∩ P| / |A \\ R|     precision of newly found links
    del    = |(R \\ A) \\ P| / |R \\ A|     share of dropped links truly wrong
    remain = |(R ∩ A) ∩ P| / |R ∩ A|     precision of kept reference links

Zero denominators yield an explicit ``None`` (undefined), never silent 0;
the one exception is AER's perfect-vacuous convention (0 when |A|+|S|=0).
Corpus-level metrics pool numerators and denominators over sentences
(micro-averaging).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alignment import AlignmentSet, GoldAlignment, require_granularity
from .errors import ValidationError


@dataclass(frozen=True)
class EvalReport:
    aer: float
    precision: float | None
    recall: float | None
    n_predicted: int
    n_sure: int
    n_possible: int
    n_hit_sure: int
    n_hit_possible: int


@dataclass(frozen=True)
class SelfCorrectionReport:
    new_precision: float | None
    del_rate: float | None
    remain_precision: float | None
    n_new: int = 0
    n_deleted: int = 0
    n_remaining: int = 0
    n_new_hit: int = 0
    n_del_hit: int = 0
    n_remain_hit: int = 0


def _counts(predicted: AlignmentSet, gold: GoldAlignment) -> tuple[int, int, int, int, int]:
    require_granularity(predicted, "word", "predicted alignment")
    a = predicted.pairs
    s = gold.sure.pairs
    p = gold.possible.pairs
    return len(a), len(s), len(p), len(a & s), len(a & p)


def _aer_from_counts(n_a: int, n_s: int, hit_s: int, hit_p: int) -> float:
    if n_a + n_s == 0:
        return 0.0
    return 1.0 - (hit_s + hit_p) / (n_a + n_s)


def aer(predicted: AlignmentSet, gold: GoldAlignment) -> float:
    n_a, n_s, _, hit_s, hit_p = _counts(predicted, gold)
    return _aer_from_counts(n_a, n_s, hit_s, hit_p)


def precision_recall(
    predicted: AlignmentSet, gold: GoldAlignment
) -> tuple[float | None, float | None]:
    n_a, n_s, _, hit_s, hit_p = _counts(predicted, gold)
    precision = hit_p / n_a if n_a else None
    recall = hit_s / n_s if n_s else None
    return precision, recall


def evaluate(predicted: AlignmentSet, gold: GoldAlignment) -> EvalReport:
    n_a, n_s, n_p, hit_s, hit_p = _counts(predicted, gold)
    return EvalReport(
        aer=_aer_from_counts(n_a, n_s, hit_s, hit_p),
        precision=hit_p / n_a if n_a else None,
        recall=hit_s / n_s if n_s else None,
        n_predicted=n_a,
        n_sure=n_s,
        n_possible=n_p,
        n_hit_sure=hit_s,
        n_hit_possible=hit_p,
    )


def corpus_eval(predicted: Sequence[AlignmentSet], gold: Sequence[GoldAlignment]) -> EvalReport:
    """Micro-pooled corpus metrics: pool counts over sentences, then divide."""
    if len(predicted) != len(gold):
        raise ValidationError(
            f"predicted has {len(predicted)} sentences, gold has {len(gold)}"
        )
    if not predicted:
        raise ValidationError("cannot evaluate an empty corpus")
    n_a = n_s = n_p = hit_s = hit_p = 0
    for pred_k, gold_k in zip(predicted, gold):
        a, s, p, hs, hp = _counts(pred_k, gold_k)
        n_a += a
        n_s += s
        n_p += p
        hit_s += hs
        hit_p += hp
    return EvalReport(
        aer=_aer_from_counts(n_a, n_s, hit_s, hit_p),
        precision=hit_p / n_a if n_a else None,
        recall=hit_s / n_s if n_s else None,
        n_predicted=n_a,
        n_sure=n_s,
        n_possible=n_p,
        n_hit_sure=hit_s,
        n_hit_possible=hit_p,
    )


def _self_correction_counts(
    predicted: AlignmentSet, reference: AlignmentSet, gold: GoldAlignment
) -> tuple[int, int, int, int, int, int]:
    require_granularity(predicted, "word", "predicted alignment")
    require_granularity(reference, "word", "reference alignment")
    a = predicted.pairs
    r = reference.pairs
    p = gold.possible.pairs
    new = a - r
    deleted = r - a
    remaining = r & a
    return (
        len(new & p), len(new),
        len(deleted - p), len(deleted),
        len(remaining & p), len(remaining),
    )


def self_correction(
    predicted: AlignmentSet, reference: AlignmentSet, gold: GoldAlignment
) -> SelfCorrectionReport:
    counts = _self_correction_counts(predicted, reference, gold)
    return _self_correction_report(counts)


def _self_correction_report(counts) -> SelfCorrectionReport:
    new_hit, new_n, del_hit, del_n, rem_hit, rem_n = counts
    return SelfCorrectionReport(
        new_precision=new_hit / new_n if new_n else None,
        del_rate=del_hit / del_n if del_n else None,
        remain_precision=rem_hit / rem_n if rem_n else None,
        n_new=new_n,
        n_deleted=del_n,
        n_remaining=rem_n,
        n_new_hit=new_hit,
        n_del_hit=del_hit,
        n_remain_hit=rem_hit,
    )


def corpus_self_correction(
    predicted: Sequence[AlignmentSet],
    reference: Sequence[AlignmentSet],
    gold: Sequence[GoldAlignment],
) -> SelfCorrectionReport:
    if not (len(predicted) == len(reference) == len(gold)):
        raise ValidationError("predicted/reference/gold lengths differ")
    if not predicted:
        raise ValidationError("cannot evaluate an empty corpus")
    totals = [0] * 6
    for pred_k, ref_k, gold_k in zip(predicted, reference, gold):
        for idx, c in enumerate(_self_correction_counts(pred_k, ref_k, gold_k)):
            totals[idx] += c
    return _self_correction_report(totals)


def _fmt(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.6f}"


def report_csv(report: EvalReport) -> str:
    """CSV rows ``metric,value,numerator,denominator`` for aer/precision/recall."""
    lines = ["metric,value,numerator,denominator"]
    lines.append(
        f"aer,{_fmt(report.aer)},{report.n_hit_sure + report.n_hit_possible},"
        f"{report.n_predicted + report.n_sure}"
    )
    lines.append(f"precision,{_fmt(report.precision)},{report.n_hit_possible},{report.n_predicted}")
    lines.append(f"recall,{_fmt(report.recall)},{report.n_hit_sure},{report.n_sure}")
    return "\n".join(lines) + "\n"


def self_correction_csv(report: SelfCorrectionReport) -> str:
    lines = ["metric,value,numerator,denominator"]
    lines.append(f"new,{_fmt(report.new_precision)},{report.n_new_hit},{report.n_new}")
    lines.append(f"del,{_fmt(report.del_rate)},{report.n_del_hit},{report.n_deleted}")
    lines.append(
        f"remain,{_fmt(report.remain_precision)},{report.n_remain_hit},{report.n_remaining}"
    )
    return "\n".join(lines) + "\n"


def history_csv(history) -> str:
    """Per-epoch training history: ``epoch,mean_neg_objective,aer``."""
    lines = ["epoch,mean_neg_objective,aer"]
    for stats in history:
        lines.append(f"{stats.epoch},{stats.mean_neg_objective:.6f},{_fmt(stats.aer)}")
    return "\n".join(lines) + "\n"


def self_correction_history_csv(history) -> str:
    """Per-epoch self-correction series: ``epoch,new,del,remain,aer``."""
    lines = ["epoch,new,del,remain,aer"]
    for stats in history:
        lines.append(
            f"{stats.epoch},{_fmt(stats.new_precision)},{_fmt(stats.del_rate)},"
            f"{_fmt(stats.remain_precision)},{_fmt(stats.aer)}"
        )
    return "\n".join(lines) + "\n"
