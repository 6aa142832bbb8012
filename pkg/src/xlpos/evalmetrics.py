"""Token-level per-tag precision/recall/F1 with a macro-averaged overall row."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .corpus import Sentence, Text, check_upos, split_lines


class EvalError(ValueError):
    pass


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class TagScore:
    tag: str
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)

    @property
    def support(self) -> int:
        return self.tp + self.fn


@dataclass(frozen=True)
class EvalReport:
    per_tag: tuple[TagScore, ...]
    overall: tuple[float, float, float]
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


def macro_overall(per_tag: Sequence) -> tuple[float, float, float]:
    """Unweighted means of (precision, recall, f1).

    Rows may be TagScore objects or plain (p, r, f1) triples.
    """
    if not per_tag:
        raise EvalError("macro average of an empty table")
    rows = [(s.precision, s.recall, s.f1) if isinstance(s, TagScore) else tuple(s) for s in per_tag]
    n = len(rows)
    return tuple(sum(r[k] for r in rows) / n for k in range(3))


def count_pairs(pairs) -> tuple[Counter, Counter, Counter, int, int]:
    tp, fp, fn = Counter(), Counter(), Counter()
    correct = total = 0
    for gold, pred in pairs:
        total += 1
        if gold == pred:
            tp[gold] += 1
            correct += 1
        else:
            fn[gold] += 1
            fp[pred] += 1
    return tp, fp, fn, correct, total


def report_from_pairs(pairs) -> EvalReport:
    """Build a report from an iterable of (gold_tag, predicted_tag)."""
    tp, fp, fn, correct, total = count_pairs(pairs)
    gold_tags = {t for t in set(tp) | set(fn) if tp[t] + fn[t] > 0}
    if not gold_tags:
        raise EvalError("no gold tokens to evaluate")
    per_tag = tuple(TagScore(t, tp[t], fp[t], fn[t]) for t in sorted(gold_tags))
    return EvalReport(per_tag, macro_overall(per_tag), correct, total)


def evaluate(gold: Sequence[Sentence], predicted: Sequence[Sentence]) -> EvalReport:
    if len(gold) != len(predicted):
        raise EvalError(f"{len(gold)} gold sentences vs {len(predicted)} predicted")

    def pairs():
        for k, (g, p) in enumerate(zip(gold, predicted)):
            if len(g) != len(p):
                raise EvalError(f"sentence {k}: {len(g)} gold tokens vs {len(p)} predicted")
            for pos, (gt, pt) in enumerate(zip(g.tokens, p.tokens)):
                if gt.form != pt.form:
                    raise EvalError(f"sentence {k}, position {pos}: form {gt.form!r} vs {pt.form!r}")
                if gt.tag is None or pt.tag is None:
                    raise EvalError(f"sentence {k}, position {pos}: missing tag")
                yield gt.tag, pt.tag

    return report_from_pairs(pairs())


def parse_columns(data: Text) -> list[tuple[str, str]]:
    """Read ``form<TAB>gold<TAB>pred`` lines; blank lines separate sentences and are ignored."""
    out = []
    for lineno, line in enumerate(split_lines(data), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise EvalError(f"line {lineno}: expected form<TAB>gold<TAB>pred")
        try:
            out.append((check_upos(fields[1]), check_upos(fields[2])))
        except ValueError as e:
            raise EvalError(f"line {lineno}: {e}") from None
    return out


def _fmt(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def render_table(report: EvalReport) -> str:
    lines = [
        "# P/R/F1 are 0 when their denominator is 0; Overall is the unweighted mean over tags",
        f"{'TAG':<8}{'P':>6}{'R':>6}{'F1':>6}{'SUPPORT':>9}",
    ]
    for s in report.per_tag:
        lines.append(f"{s.tag:<8}{_fmt(s.precision):>6}{_fmt(s.recall):>6}{_fmt(s.f1):>6}{s.support:>9}")
    p, r, f = report.overall
    lines.append(f"{'Overall':<8}{_fmt(p):>6}{_fmt(r):>6}{_fmt(f):>6}{report.total:>9}")
    lines.append(f"accuracy {_fmt(report.accuracy)} ({report.correct}/{report.total})")
    return "\n".join(lines) + "\n"


def dump_keyvalue(report: EvalReport) -> str:
    p, r, f = report.overall
    lines = [
        f"overall.precision={p!r}", f"overall.recall={r!r}", f"overall.f1={f!r}",
        f"accuracy={report.accuracy!r}", f"correct={report.correct}", f"total={report.total}",
    ]
    for s in report.per_tag:
        lines += [
            f"{s.tag}.precision={s.precision!r}", f"{s.tag}.recall={s.recall!r}",
            f"{s.tag}.f1={s.f1!r}", f"{s.tag}.support={s.support}",
            f"{s.tag}.tp={s.tp}", f"{s.tag}.fp={s.fp}", f"{s.tag}.fn={s.fn}",
        ]
    return "\n".join(lines) + "\n"
