"""Word alignment: IBM Model 1 and a diagonal-prior Model 2 (fast_align style) trained with EM,
symmetrization heuristics, and Pharaoh-format I/O."""

from __future__ import annotations

import math
import re
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .corpus import SentencePair

NULL = None  # source-side NULL word key in the translation table
FLOOR = 1e-12


class AlignmentLink(NamedTuple):
    src: int
    tgt: int


Alignment = frozenset  # frozenset[AlignmentLink]


class Variant(str, Enum):
    IBM1 = "ibm1"
    DIAG_IBM2 = "diag"


class Heuristic(str, Enum):
    INTERSECTION = "intersection"
    UNION = "union"
    GROW_DIAG_FINAL_AND = "grow-diag-final-and"


@dataclass(frozen=True)
class DiagonalParams:
    tension: float = 4.0
    null_prob: float = 0.08

    def __post_init__(self):
        if not self.tension >= 0:
            raise ValueError(f"tension must be >= 0, got {self.tension}")
        if not 0 <= self.null_prob < 1:
            raise ValueError(f"null_prob must be in [0, 1), got {self.null_prob}")


@dataclass
class AlignModel:
    # table[e][f] = t(f | e); e is NULL for the null word
    table: dict
    params: DiagonalParams = field(default_factory=DiagonalParams)
    variant: Variant = Variant.DIAG_IBM2
    # log-likelihood of the corpus under the table entering each EM iteration
    history: list = field(default_factory=list)

    def t(self, f, e) -> float:
        row = self.table.get(e)
        if row is None or f not in row:
            return FLOOR
        return row[f]


def link_prior(variant: Variant, params: DiagonalParams, n: int, m: int, j: int) -> list[float]:
    """Prior over source positions for target position j (0-based) in an n x m pair.

    Index 0 is NULL; index i+1 is source word i.
    """
    p0 = params.null_prob
    if variant == Variant.IBM1:
        return [p0] + [(1.0 - p0) / n] * n
    # 1-based positions as in fast_align
    jj = (j + 1) / m
    w = [math.exp(-params.tension * abs((i + 1) / n - jj)) for i in range(n)]
    z = sum(w)
    return [p0] + [(1.0 - p0) * x / z for x in w]


def _prior_table(variant, params, n, m, cache):
    key = (n, m)
    if key not in cache:
        cache[key] = [link_prior(variant, params, n, m, j) for j in range(m)]
    return cache[key]


def _init_table(pairs: Sequence[SentencePair]) -> dict:
    cooc = defaultdict(set)
    for p in pairs:
        tgt = set(p.target)
        cooc[NULL] |= tgt
        for e in p.source:
            cooc[e] |= tgt
    table = {}
    for e, fs in cooc.items():
        u = 1.0 / len(fs)
        table[e] = {f: u for f in sorted(fs)}
    return table


def _estep(pairs, table, variant, params):
    counts: dict = {}
    ll = 0.0
    cache: dict = {}
    for p in pairs:
        src = (NULL,) + p.source
        priors = _prior_table(variant, params, len(p.source), len(p.target), cache)
        for j, f in enumerate(p.target):
            prior = priors[j]
            w = []
            for i, e in enumerate(src):
                row = table.get(e)
                t = row.get(f, FLOOR) if row is not None else FLOOR
                w.append(prior[i] * t)
            z = sum(w)
            if z <= 0.0:
                ll += math.log(FLOOR)
                continue
            ll += math.log(z)
            for i, e in enumerate(src):
                if w[i] > 0.0:
                    row = counts.setdefault(e, {})
                    row[f] = row.get(f, 0.0) + w[i] / z
    return counts, ll


def _estep_chunk(args):
    return _estep(*args)


def _merge_counts(parts):
    counts: dict = {}
    ll = 0.0
    for c, part_ll in parts:
        ll += part_ll
        for e, row in c.items():
            acc = counts.setdefault(e, {})
            for f, v in row.items():
                acc[f] = acc.get(f, 0.0) + v
    return counts, ll


def train(
    pairs: Sequence[SentencePair],
    variant: Variant = Variant.DIAG_IBM2,
    iterations: int = 5,
    params: Optional[DiagonalParams] = None,
    workers: int = 1,
    callback: Optional[Callable[[int, AlignModel], None]] = None,
) -> AlignModel:
    """Estimate t(f|e) with EM.

    ``workers > 1`` splits the E-step across processes; the table then matches the
    sequential run only up to floating-point summation order (about 1e-9).
    ``callback(k, model)`` is called after the k-th M-step.
    """
    if not pairs:
        raise ValueError("cannot train an aligner on an empty corpus")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    variant = Variant(variant)
    params = params or DiagonalParams()
    pairs = list(pairs)
    model = AlignModel(_init_table(pairs), params, variant)

    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        size = -(-len(pairs) // workers)
        chunks = [pairs[k:k + size] for k in range(0, len(pairs), size)]
    try:
        for k in range(1, iterations + 1):
            if pool is None:
                counts, ll = _estep(pairs, model.table, variant, params)
            else:
                jobs = [(c, model.table, variant, params) for c in chunks]
                counts, ll = _merge_counts(pool.map(_estep_chunk, jobs))
            model.history.append(ll)
            for e, row in model.table.items():
                c = counts.get(e)
                if not c:
                    continue  # no expected mass (e.g. NULL with null_prob=0): keep row
                total = sum(c.values())
                model.table[e] = {f: c.get(f, 0.0) / total for f in row}
            if callback is not None:
                callback(k, model)
    finally:
        if pool is not None:
            pool.shutdown()
    return model


def link_posteriors(model: AlignModel, pair: SentencePair) -> list[list[float]]:
    """Posterior p(a_j = i | f, e) per target position; column 0 is NULL."""
    src = (NULL,) + pair.source
    n, m = len(pair.source), len(pair.target)
    out = []
    for j, f in enumerate(pair.target):
        prior = link_prior(model.variant, model.params, n, m, j)
        w = [prior[i] * model.t(f, e) for i, e in enumerate(src)]
        z = sum(w)
        out.append([x / z for x in w] if z > 0 else [0.0] * len(w))
    return out


def decode(model: AlignModel, pair: SentencePair) -> Alignment:
    """Viterbi alignment: each target word links to its best source word, or to nothing if NULL wins.

    Ties go to the smallest source index; NULL wins only when strictly better.
    """
    n, m = len(pair.source), len(pair.target)
    links = set()
    for j, f in enumerate(pair.target):
        prior = link_prior(model.variant, model.params, n, m, j)
        best_i, best = -1, -1.0
        for i, e in enumerate(pair.source):
            s = prior[i + 1] * model.t(f, e)
            if s > best:
                best_i, best = i, s
        if prior[0] * model.t(f, NULL) > best:
            continue
        links.add(AlignmentLink(best_i, j))
    return frozenset(links)


def corpus_log_likelihood(model: AlignModel, pairs: Iterable[SentencePair]) -> float:
    ll = 0.0
    for p in pairs:
        n, m = len(p.source), len(p.target)
        for j, f in enumerate(p.target):
            prior = link_prior(model.variant, model.params, n, m, j)
            z = prior[0] * model.t(f, NULL)
            for i, e in enumerate(p.source):
                z += prior[i + 1] * model.t(f, e)
            ll += math.log(max(z, FLOOR))
    return ll


def transpose(a: Iterable) -> Alignment:
    return frozenset(AlignmentLink(j, i) for i, j in a)


_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def _grow_diag_final_and(e2f: frozenset, f2e: frozenset) -> set:
    union = e2f | f2e
    alignment = set(e2f & f2e)
    if not union:
        return alignment
    srclen = max(i for i, _ in union) + 1
    tgtlen = max(j for _, j in union) + 1
    src_aligned = {i for i, _ in alignment}
    tgt_aligned = {j for _, j in alignment}

    def add(i, j):
        alignment.add((i, j))
        src_aligned.add(i)
        tgt_aligned.add(j)

    added = True
    while added:
        added = False
        for i in range(srclen):
            for j in range(tgtlen):
                if (i, j) not in alignment:
                    continue
                for di, dj in _NEIGHBORS:
                    ni, nj = i + di, j + dj
                    if (ni not in src_aligned or nj not in tgt_aligned) and (ni, nj) in union:
                        add(ni, nj)
                        added = True

    for directional in (e2f, f2e):
        for i in range(srclen):
            for j in range(tgtlen):
                if i not in src_aligned and j not in tgt_aligned and (i, j) in directional:
                    add(i, j)
    return alignment


def symmetrize(forward: Iterable, reverse: Iterable, heuristic=Heuristic.GROW_DIAG_FINAL_AND) -> Alignment:
    """Combine a source->target alignment with a target->source one.

    ``reverse`` holds (target, source) links, as decoded by a model trained on reversed pairs.
    """
    fwd = frozenset(AlignmentLink(*x) for x in forward)
    rev = transpose(reverse)
    heuristic = Heuristic(heuristic)
    if heuristic == Heuristic.INTERSECTION:
        out = fwd & rev
    elif heuristic == Heuristic.UNION:
        out = fwd | rev
    else:
        out = _grow_diag_final_and(fwd, rev)
    return frozenset(AlignmentLink(*x) for x in out)


_PHARAOH_LINK = re.compile(r"(\d+)-(\d+)", re.ASCII)


def parse_pharaoh(line: str) -> Alignment:
    links = set()
    for tok in line.split():
        m = _PHARAOH_LINK.fullmatch(tok)
        if m is None:
            raise ValueError(f"malformed alignment token {tok!r}")
        links.add(AlignmentLink(int(m[1]), int(m[2])))
    return frozenset(links)


def write_pharaoh(a: Iterable) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(a))


def read_pharaoh_file(path) -> list[Alignment]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            try:
                out.append(parse_pharaoh(line))
            except ValueError as e:
                raise ValueError(f"{path}: line {lineno}: {e}") from None
    return out


def dump_pharaoh(alignments: Iterable) -> bytes:
    return "".join(write_pharaoh(a) + "\n" for a in alignments).encode("utf-8")


def align_corpus(
    pairs: Sequence[SentencePair],
    variant: Variant = Variant.DIAG_IBM2,
    iterations: int = 5,
    params: Optional[DiagonalParams] = None,
    heuristic=Heuristic.GROW_DIAG_FINAL_AND,
    workers: int = 1,
) -> list[Alignment]:
    """Train both directions, decode, and symmetrize every pair."""
    fwd_model = train(pairs, variant, iterations, params, workers)
    rev_pairs = [p.reversed() for p in pairs]
    rev_model = train(rev_pairs, variant, iterations, params, workers)
    return [
        symmetrize(decode(fwd_model, p), decode(rev_model, rp), heuristic)
        for p, rp in zip(pairs, rev_pairs)
    ]


def null_rate(pairs: Sequence[SentencePair], alignments: Sequence) -> float:
    """Fraction of target tokens with no link."""
    total = unaligned = 0
    for p, a in zip(pairs, alignments):
        linked = {j for _, j in a}
        total += len(p.target)
        unaligned += len(p.target) - len(linked)
    return unaligned / total if total else 0.0
