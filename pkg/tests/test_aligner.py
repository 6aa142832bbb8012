import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xlpos.aligner import (
    NULL, AlignModel, DiagonalParams, Heuristic, Variant, corpus_log_likelihood, decode,
    link_posteriors, link_prior, parse_pharaoh, symmetrize, train, transpose, write_pharaoh,
)
from xlpos.corpus import SentencePair


def P(src, tgt):
    return SentencePair(src.split(), tgt.split())


TWO_PAIR = [P("a b", "x y"), P("a", "x")]


def random_bitext(rng, n_pairs, vocab=6):
    src_vocab = [f"s{k}" for k in range(vocab)]
    tgt_vocab = [f"t{k}" for k in range(vocab)]
    return [
        SentencePair(rng.choices(src_vocab, k=rng.randint(1, 5)), rng.choices(tgt_vocab, k=rng.randint(1, 5)))
        for _ in range(n_pairs)
    ]


def test_single_pair_symmetric_fixed_point():
    model = train([P("a", "x")], Variant.IBM1, 5, DiagonalParams(null_prob=0.5))
    assert model.table["a"]["x"] == pytest.approx(1.0)
    assert model.table[NULL]["x"] == pytest.approx(1.0)
    ((p_null, p_a),) = link_posteriors(model, P("a", "x"))
    assert p_null == pytest.approx(0.5) and p_a == pytest.approx(0.5)


def test_first_iteration_by_hand():
    # pair 1: each target word splits 1/2-1/2 between a and b; pair 2 sends x fully to a
    model = train(TWO_PAIR, Variant.IBM1, 1, DiagonalParams(null_prob=0.0))
    assert model.table["a"] == pytest.approx({"x": 0.75, "y": 0.25})
    assert model.table["b"] == pytest.approx({"x": 0.5, "y": 0.5})


def test_second_pair_disambiguates():
    model = train(TWO_PAIR, Variant.IBM1, 10, DiagonalParams(null_prob=0.0))
    assert model.table["a"]["x"] > 0.9
    assert model.table["b"]["y"] > 0.9
    assert decode(model, P("a b", "x y")) == {(0, 0), (1, 1)}


def test_identity_corpus_decodes_identity():
    pairs = [P("a b", "a b"), P("b c", "b c"), P("a c", "a c")]
    for variant in Variant:
        model = train(pairs, variant, 5)
        assert decode(model, P("a b", "a b")) == {(0, 0), (1, 1)}


def test_unexplainable_word_goes_to_null():
    model = AlignModel({"a": {"x": 1.0, "z": 0.0}, NULL: {"x": 0.5, "z": 0.5}}, DiagonalParams(null_prob=0.1), Variant.IBM1)
    assert decode(model, P("a", "x z")) == {(0, 0)}


def test_decode_tie_goes_to_smallest_source_index():
    model = AlignModel({"a": {"x": 0.5}, "b": {"x": 0.5}, NULL: {"x": 0.0}}, DiagonalParams(null_prob=0.1), Variant.IBM1)
    assert decode(model, P("a b", "x")) == {(0, 0)}


def test_diagonal_prior_values():
    p0 = 0.08
    prior = link_prior(Variant.DIAG_IBM2, DiagonalParams(4.0, p0), 2, 2, 0)
    z = 1 + math.exp(-2)
    assert prior == pytest.approx([p0, (1 - p0) / z, (1 - p0) * math.exp(-2) / z])
    assert sum(prior) == pytest.approx(1.0)
    assert link_prior(Variant.IBM1, DiagonalParams(4.0, p0), 4, 3, 1) == pytest.approx([p0] + [(1 - p0) / 4] * 4)


def test_zero_tension_equals_ibm1():
    pairs = random_bitext(random.Random(3), 20)
    a = train(pairs, Variant.IBM1, 4, DiagonalParams(0.0, 0.1))
    b = train(pairs, Variant.DIAG_IBM2, 4, DiagonalParams(0.0, 0.1))
    for e in a.table:
        assert a.table[e] == pytest.approx(b.table[e], abs=1e-12)


def test_train_errors():
    with pytest.raises(ValueError):
        train([], Variant.IBM1, 1)
    with pytest.raises(ValueError):
        train(TWO_PAIR, Variant.IBM1, 0)
    with pytest.raises(ValueError):
        DiagonalParams(tension=-1)
    with pytest.raises(ValueError):
        DiagonalParams(null_prob=1.0)


@pytest.mark.parametrize("variant", list(Variant))
def test_em_monotone_and_rows_normalized(variant):
    pairs = random_bitext(random.Random(11), 40)
    lls = []

    def check(k, model):
        for e, row in model.table.items():
            assert abs(sum(row.values()) - 1.0) <= 1e-9, e
        lls.append(corpus_log_likelihood(model, pairs))

    model = train(pairs, variant, 8, callback=check)
    assert all(b >= a - 1e-9 for a, b in zip(lls, lls[1:]))
    # the E-step's own bookkeeping agrees with the standalone diagnostic
    assert model.history[1:] == pytest.approx(lls[:-1], rel=1e-12)


def test_parallel_estep_matches_sequential():
    pairs = random_bitext(random.Random(5), 30)
    seq = train(pairs, Variant.DIAG_IBM2, 3)
    par = train(pairs, Variant.DIAG_IBM2, 3, workers=2)
    for e, row in seq.table.items():
        for f, v in row.items():
            assert abs(par.table[e][f] - v) <= 1e-9


def test_training_is_deterministic():
    pairs = random_bitext(random.Random(9), 25)
    assert train(pairs, iterations=4).table == train(pairs, iterations=4).table


def _direct_log_likelihood(table, variant, p0, tension, pairs):
    """Independent re-summation of log p(f | e) straight from the model definition."""
    total = 0.0
    for pair in pairs:
        n, m = len(pair.source), len(pair.target)
        for j, f in enumerate(pair.target, start=1):
            if variant == Variant.IBM1:
                weights = [1.0] * n
            else:
                weights = [math.exp(-tension * abs(i / n - j / m)) for i in range(1, n + 1)]
            norm = sum(weights)
            prob = p0 * table[NULL].get(f, 1e-12)
            for i, e in enumerate(pair.source):
                prob += (1 - p0) * weights[i] / norm * table.get(e, {}).get(f, 1e-12)
            total += math.log(prob)
    return total


@pytest.mark.parametrize("variant", list(Variant))
def test_log_likelihood_matches_direct_sum(variant):
    pairs = [P("a b c", "x y"), P("b", "y z"), P("c a", "z x w")]
    model = train(pairs, variant, 3, DiagonalParams(4.0, 0.08))
    expected = _direct_log_likelihood(model.table, variant, 0.08, 4.0, pairs)
    assert abs(corpus_log_likelihood(model, pairs) - expected) <= 1e-12


def test_log_likelihood_trivial_cases():
    model = AlignModel({"a": {"x": 1.0}, NULL: {"x": 1.0}}, DiagonalParams(null_prob=0.0), Variant.IBM1)
    assert corpus_log_likelihood(model, [P("a", "x")]) == 0.0
    model = train([P("a b", "x y")], Variant.IBM1, 2)
    assert corpus_log_likelihood(model, [P("a b", "x y")]) < 0


# symmetrization

def reference_gdfa(srclen, tgtlen, e2f, f2e):
    """Grid transcription of the published grow-diag-final-and pseudocode, used as an oracle."""
    union = [[(i, j) in e2f or (i, j) in f2e for j in range(tgtlen)] for i in range(srclen)]
    a = [[(i, j) in e2f and (i, j) in f2e for j in range(tgtlen)] for i in range(srclen)]

    def src_aligned(i):
        return any(a[i])

    def tgt_aligned(j):
        return any(a[i][j] for i in range(srclen))

    neighboring = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))
    new_points = True
    while new_points:
        new_points = False
        for e in range(srclen):
            for f in range(tgtlen):
                if not a[e][f]:
                    continue
                for de, df in neighboring:
                    en, fn = e + de, f + df
                    if not (0 <= en < srclen and 0 <= fn < tgtlen):
                        continue
                    if (not src_aligned(en) or not tgt_aligned(fn)) and union[en][fn]:
                        a[en][fn] = True
                        new_points = True
    for directional in (e2f, f2e):
        for en in range(srclen):
            for fn in range(tgtlen):
                if not src_aligned(en) and not tgt_aligned(fn) and (en, fn) in directional:
                    a[en][fn] = True
    return {(i, j) for i in range(srclen) for j in range(tgtlen) if a[i][j]}


def test_symmetrize_identical_directions():
    fwd = {(0, 0), (1, 2), (2, 1)}
    for h in Heuristic:
        assert symmetrize(fwd, transpose(fwd), h) == fwd


def test_intersection_example():
    assert symmetrize({(0, 0), (1, 1)}, {(0, 0)}, Heuristic.INTERSECTION) == {(0, 0)}
    assert symmetrize({(0, 0), (1, 1)}, {(0, 0)}, Heuristic.UNION) == {(0, 0), (1, 1)}


def test_gdfa_small_example():
    # reverse {(0,0),(0,1)} transposes to {(0,0),(1,0)}; growing from (0,0) visits the
    # horizontal neighbour (1,0) before the diagonal (1,1), and both qualify
    got = symmetrize({(0, 0), (1, 1)}, {(0, 0), (0, 1)}, Heuristic.GROW_DIAG_FINAL_AND)
    assert got == {(0, 0), (1, 0), (1, 1)}


def test_gdfa_final_and_adds_only_unaligned_pairs():
    # (3,3) is isolated and only in the forward direction; both words are unaligned
    got = symmetrize({(0, 0), (3, 3)}, {(0, 0)}, Heuristic.GROW_DIAG_FINAL_AND)
    assert got == {(0, 0), (3, 3)}


links = st.frozensets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12)


@settings(max_examples=300)
@given(links, links)
def test_gdfa_matches_reference(fwd, rev_fwd_oriented):
    got = symmetrize(fwd, transpose(rev_fwd_oriented), Heuristic.GROW_DIAG_FINAL_AND)
    assert got == reference_gdfa(6, 6, fwd, rev_fwd_oriented)


@given(links, links)
def test_symmetrize_nesting(fwd, rev):
    inter = symmetrize(fwd, rev, Heuristic.INTERSECTION)
    gdfa = symmetrize(fwd, rev, Heuristic.GROW_DIAG_FINAL_AND)
    union = symmetrize(fwd, rev, Heuristic.UNION)
    assert inter <= gdfa <= union


# Pharaoh

def test_parse_pharaoh():
    assert parse_pharaoh("0-0 1-1") == {(0, 0), (1, 1)}
    assert parse_pharaoh("") == frozenset()
    assert parse_pharaoh("  \n") == frozenset()


@pytest.mark.parametrize("bad", ["0", "0-", "a-1", "0-1-2", "-1-0", "0:1"])
def test_parse_pharaoh_errors(bad):
    with pytest.raises(ValueError):
        parse_pharaoh(bad)


def test_write_pharaoh_sorted():
    assert write_pharaoh({(2, 0), (0, 1), (0, 0)}) == "0-0 0-1 2-0"


@given(links)
def test_pharaoh_round_trip(a):
    assert parse_pharaoh(write_pharaoh(a)) == a
    assert write_pharaoh(parse_pharaoh(write_pharaoh(a))) == write_pharaoh(a)
