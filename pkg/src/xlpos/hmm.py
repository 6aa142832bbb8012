"""First-order HMM tagger: count-based training, Viterbi decoding, and a count file format."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import UPOS_INDEX, Sentence, Text, check_upos

NEG_INF = float("-inf")
MAGIC = "HMM-COUNTS v1"
BRUTE_FORCE_LIMIT = 10**7


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DecodingConfig:
    transition_alpha: float = 1e-6

    def __post_init__(self):
        if not self.transition_alpha >= 0:
            raise ValueError(f"transition_alpha must be >= 0, got {self.transition_alpha}")


@dataclass
class HmmModel:
    """Raw counts; probabilities are derived on demand.

    ``states`` is kept in UPOS order, which is also the decoding tie-break order.
    """

    states: tuple[str, ...]
    initial: Counter = field(default_factory=Counter)
    transitions: Counter = field(default_factory=Counter)  # (q, q') -> count
    emissions: Counter = field(default_factory=Counter)  # (q, w) -> count
    state_freq: Counter = field(default_factory=Counter)

    def __post_init__(self):
        self.states = tuple(sorted(set(self.states), key=UPOS_INDEX.__getitem__))
        self.initial = Counter(self.initial)
        self.transitions = Counter(self.transitions)
        self.emissions = Counter(self.emissions)
        self.state_freq = Counter(self.state_freq)
        self.vocabulary = frozenset(w for (_, w), c in self.emissions.items() if c > 0)
        self._trans_total = Counter()
        for (q, _), c in self.transitions.items():
            self._trans_total[q] += c

    @property
    def n_sentences(self) -> int:
        return sum(self.initial.values())

    def final_count(self, q: str) -> int:
        return self.state_freq[q] - self._trans_total[q]

    def check(self):
        """Raise ModelFormatError if the counts are not those of some tagged corpus."""
        known = set(self.states)
        for tbl, name in ((self.initial, "INIT"), (self.state_freq, "STATES")):
            for q, c in tbl.items():
                if q not in known or c < 0:
                    raise ModelFormatError(f"{name}: bad record for state {q!r}")
        for (q, q2), c in self.transitions.items():
            if q not in known or q2 not in known or c < 0:
                raise ModelFormatError(f"TRANS: bad record {q!r} -> {q2!r}")
        emitted = Counter()
        for (q, _), c in self.emissions.items():
            if q not in known or c < 0:
                raise ModelFormatError(f"EMIT: bad record for state {q!r}")
            emitted[q] += c
        finals = 0
        for q in self.states:
            if emitted[q] != self.state_freq[q]:
                raise ModelFormatError(
                    f"state {q}: frequency {self.state_freq[q]} != emitted total {emitted[q]}"
                )
            fin = self.final_count(q)
            if fin < 0:
                raise ModelFormatError(f"state {q}: more outgoing transitions than occurrences")
            finals += fin
        if finals != self.n_sentences:
            raise ModelFormatError(
                f"{self.n_sentences} sentence starts but {finals} sentence ends"
            )

    def __eq__(self, other):
        if not isinstance(other, HmmModel):
            return NotImplemented
        nz = lambda c: {k: v for k, v in c.items() if v}
        return (
            self.states == other.states
            and nz(self.initial) == nz(other.initial)
            and nz(self.transitions) == nz(other.transitions)
            and nz(self.emissions) == nz(other.emissions)
            and nz(self.state_freq) == nz(other.state_freq)
        )


def train(corpus: Iterable[Sentence]) -> HmmModel:
    initial, transitions, emissions, freq = Counter(), Counter(), Counter(), Counter()
    n = 0
    for k, sent in enumerate(corpus):
        if not len(sent):
            raise ValueError(f"sentence {k} is empty")
        prev = None
        for pos, tok in enumerate(sent.tokens):
            q = tok.tag
            if q is None:
                raise ValueError(f"sentence {k}, token {pos} ({tok.form!r}) has no tag")
            if prev is None:
                initial[q] += 1
            else:
                transitions[prev, q] += 1
            emissions[q, tok.form] += 1
            freq[q] += 1
            prev = q
        n += 1
    if n == 0:
        raise ValueError("cannot train an HMM on an empty corpus")
    return HmmModel(tuple(freq), initial, transitions, emissions, freq)


def initial_prob(model: HmmModel, q: str) -> float:
    total = model.n_sentences
    return model.initial[q] / total if total else 0.0


def transition_prob(model: HmmModel, q: str, q2: str, config: DecodingConfig = DecodingConfig()) -> float:
    alpha = config.transition_alpha
    denom = model._trans_total[q] + alpha * len(model.states)
    if denom == 0:
        return 0.0
    return (model.transitions[q, q2] + alpha) / denom


def emission(model: HmmModel, q: str, w: str, config: DecodingConfig = DecodingConfig()) -> float:
    """b_q(w), with the out-of-vocabulary rule b_q(w) = 1 / f(q).

    The OOV value is not renormalized over the vocabulary.
    """
    if q not in model.states:
        raise KeyError(f"unknown state {q!r}")
    f = model.state_freq[q]
    if f == 0:
        return 0.0
    if w in model.vocabulary:
        return model.emissions[q, w] / f
    return 1.0 / f


# Log-scores are snapped to a 2**-32 grid: sums of grid values are exact in double
# precision while |sum| < 2**21, so path scores do not depend on summation order and
# mathematically equal paths tie exactly.
_GRID = 32


def _log(x: float) -> float:
    if x <= 0:
        return NEG_INF
    return math.ldexp(round(math.ldexp(math.log(x), _GRID)), -_GRID)


def _advance(delta, log_init, log_trans, col):
    if delta is None:
        return [a + b for a, b in zip(log_init, col)]
    n = len(col)
    return [max(delta[p] + log_trans[p][q] for p in range(n)) + col[q] for q in range(n)]


def score_tables(model: HmmModel, words: Sequence[str], config: DecodingConfig = DecodingConfig()):
    """Log initial vector, log transition matrix, and one log emission column per word.

    If a known word would leave every path with probability 0, its column is replaced
    by the OOV column (1 / f(q)). Viterbi and the brute-force oracle both score with
    these tables, so the fallback is part of the scoring function itself.
    """
    states = model.states
    log_init = [_log(initial_prob(model, q)) for q in states]
    log_trans = [[_log(transition_prob(model, q, q2, config)) for q2 in states] for q in states]
    oov_col = [_log(1.0 / model.state_freq[q]) if model.state_freq[q] else NEG_INF for q in states]
    cols = []
    delta = None
    for w in words:
        col = [_log(emission(model, q, w, config)) for q in states]
        new = _advance(delta, log_init, log_trans, col)
        alive_before = delta is None or any(x > NEG_INF for x in delta)
        if alive_before and all(x == NEG_INF for x in new):
            col = oov_col
            new = _advance(delta, log_init, log_trans, col)
        cols.append(col)
        delta = new
    return log_init, log_trans, cols


def path_score(log_init, log_trans, cols, path: Sequence[int]) -> float:
    s = log_init[path[0]] + cols[0][path[0]]
    for t in range(1, len(path)):
        s = (s + log_trans[path[t - 1]][path[t]]) + cols[t][path[t]]
    return s


def viterbi_indices(log_init, log_trans, cols) -> list[int]:
    """Max-product DP in log space. Ties go to the lowest state index, both for
    the final state and for each back-pointer."""
    n_states = len(log_init)
    delta = [log_init[q] + cols[0][q] for q in range(n_states)]
    backptrs = []
    for t in range(1, len(cols)):
        new, bp = [], []
        for q in range(n_states):
            best_p, best = 0, delta[0] + log_trans[0][q]
            for p in range(1, n_states):
                s = delta[p] + log_trans[p][q]
                if s > best:
                    best_p, best = p, s
            new.append(best + cols[t][q])
            bp.append(best_p)
        delta = new
        backptrs.append(bp)
    if all(x == NEG_INF for x in delta):
        # every sequence scores -inf; all tie, so the lowest-index sequence wins
        return [0] * len(cols)
    q = max(range(n_states), key=lambda k: (delta[k], -k))
    path = [q]
    for bp in reversed(backptrs):
        q = bp[q]
        path.append(q)
    path.reverse()
    return path


def brute_force_indices(log_init, log_trans, cols) -> list[int]:
    """Exhaustive search over all state sequences.

    Among equal scores the winner is the lexicographically smallest sequence read
    from the last position backwards, which is the order Viterbi's back-pointer
    tie-break produces.
    """
    n_states, length = len(log_init), len(cols)
    if n_states ** length > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{n_states}^{length} sequences exceed the brute-force limit")
    best_key, best_path = None, None
    for path in itertools.product(range(n_states), repeat=length):
        s = path_score(log_init, log_trans, cols, path)
        key = (-s, path[::-1])
        if best_key is None or key < best_key:
            best_key, best_path = key, path
    return list(best_path)


def viterbi(model: HmmModel, words: Sequence[str], config: DecodingConfig = DecodingConfig()) -> list[str]:
    if not words:
        raise ValueError("cannot decode an empty sentence")
    path = viterbi_indices(*score_tables(model, words, config))
    return [model.states[k] for k in path]


def brute_force_decode(model: HmmModel, words: Sequence[str], config: DecodingConfig = DecodingConfig()) -> list[str]:
    if not words:
        raise ValueError("cannot decode an empty sentence")
    path = brute_force_indices(*score_tables(model, words, config))
    return [model.states[k] for k in path]


def tag_sentences(model: HmmModel, sentences: Iterable[Sentence], config: DecodingConfig = DecodingConfig()) -> list[Sentence]:
    out = []
    for s in sentences:
        tags = viterbi(model, s.forms, config)
        out.append(Sentence.from_pairs(zip(s.forms, tags), s.id))
    return out


def save_model(model: HmmModel) -> bytes:
    lines = [MAGIC, "STATES"]
    lines += [f"{q}\t{model.state_freq[q]}" for q in model.states]
    lines.append("INIT")
    lines += [f"{q}\t{model.initial[q]}" for q in model.states if model.initial[q]]
    lines.append("TRANS")
    order = UPOS_INDEX.__getitem__
    for (q, q2), c in sorted(model.transitions.items(), key=lambda kv: (order(kv[0][0]), order(kv[0][1]))):
        if c:
            lines.append(f"{q}\t{q2}\t{c}")
    lines.append("EMIT")
    for (q, w), c in sorted(model.emissions.items(), key=lambda kv: (order(kv[0][0]), kv[0][1])):
        if c:
            lines.append(f"{q}\t{w}\t{c}")
    return ("\n".join(lines) + "\n").encode("utf-8")


_SECTIONS = ("STATES", "INIT", "TRANS", "EMIT")
_ARITY = {"STATES": 2, "INIT": 2, "TRANS": 3, "EMIT": 3}


def load_model(data: Text) -> HmmModel:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise ModelFormatError(f"expected header {MAGIC!r}, got {lines[0] if lines else ''!r}")
    records = {s: [] for s in _SECTIONS}
    section = None
    seen = []
    for lineno, line in enumerate(lines[1:], 2):
        if line in _SECTIONS:
            section = line
            seen.append(line)
            continue
        if section is None:
            raise ModelFormatError(f"line {lineno}: record outside any section")
        fields = line.split("\t")
        if len(fields) != _ARITY[section]:
            raise ModelFormatError(f"line {lineno}: expected {_ARITY[section]} fields in {section}")
        try:
            count = int(fields[-1])
            for tag in fields[: 1 if section == "EMIT" else len(fields) - 1]:
                check_upos(tag)
        except ValueError as e:
            raise ModelFormatError(f"line {lineno}: {e}") from None
        records[section].append((tuple(fields[:-1]), count, lineno))
    if seen != list(_SECTIONS):
        raise ModelFormatError(f"sections must appear once in order {_SECTIONS}, got {seen}")

    def collect(section, key):
        c = Counter()
        for fields, count, lineno in records[section]:
            k = key(fields)
            if k in c:
                raise ModelFormatError(f"line {lineno}: duplicate {section} record")
            c[k] = count
        return c

    freq = collect("STATES", lambda f: f[0])
    model = HmmModel(
        tuple(freq),
        collect("INIT", lambda f: f[0]),
        collect("TRANS", tuple),
        collect("EMIT", tuple),
        freq,
    )
    model.check()
    return model
