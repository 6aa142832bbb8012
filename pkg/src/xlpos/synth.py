"""Synthetic tagged bitext: a toy English-like grammar whose "translation" is a
word-for-word cipher, so the true alignment is the identity and target tags equal
source tags."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Sentence, SentencePair, Token

# 40 words, each with exactly one tag
LEXICON = {
    "DET": ["the", "a", "this", "every"],
    "ADJ": ["big", "small", "red", "old", "happy"],
    "NOUN": ["dog", "cat", "house", "tree", "river", "book", "child", "car"],
    "PRON": ["she", "he", "they"],
    "PROPN": ["Anna", "Paris", "Tom"],
    "VERB": ["sees", "likes", "finds", "see", "like", "find"],
    "AUX": ["can", "will"],
    "ADV": ["quickly", "often", "slowly"],
    "ADP": ["in", "near", "with"],
    "CCONJ": ["and", "but"],
    "PUNCT": ["."],
}

_SYLLABLES = [c + v for c in "bdfgklmnprstvz" for v in "aeiou"]


@dataclass
class SynthCorpus:
    source: list[Sentence]
    bitext: list[SentencePair]
    target_gold: list[Sentence]
    test_gold: list[Sentence]
    cipher: dict


def make_cipher(rng: random.Random) -> dict:
    words = [w for ws in LEXICON.values() for w in ws]
    taken = set(words)
    cipher = {}
    for w in words:
        while True:
            pseudo = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 3)))
            if pseudo not in taken:
                break
        taken.add(pseudo)
        cipher[w] = pseudo
    return cipher


def _pick(rng, tag):
    return (rng.choice(LEXICON[tag]), tag)


def _noun_phrase(rng):
    r = rng.random()
    if r < 0.6:
        out = [_pick(rng, "DET")]
        if rng.random() < 0.4:
            out.append(_pick(rng, "ADJ"))
        out.append(_pick(rng, "NOUN"))
        return out
    if r < 0.8:
        return [_pick(rng, "PRON")]
    return [_pick(rng, "PROPN")]


def _verb_phrase(rng):
    out = []
    if rng.random() < 0.3:
        out.append(_pick(rng, "AUX"))
    out.append(_pick(rng, "VERB"))
    r = rng.random()
    if r < 0.7:
        out += _noun_phrase(rng)
        if rng.random() < 0.3:
            out.append(_pick(rng, "ADP"))
            out += _noun_phrase(rng)
    elif r < 0.9:
        out.append(_pick(rng, "ADV"))
    return out


def _clause(rng):
    return _noun_phrase(rng) + _verb_phrase(rng)


def generate_sentence(rng: random.Random) -> list[tuple[str, str]]:
    words = _clause(rng)
    if rng.random() < 0.2:
        words.append(_pick(rng, "CCONJ"))
        words += _clause(rng)
    words.append((".", "PUNCT"))
    return words


def synthesize(seed: int, n_sentences: int, n_test: int = 100) -> SynthCorpus:
    if n_sentences < 1:
        raise ValueError(f"n_sentences must be >= 1, got {n_sentences}")
    if n_test < 0:
        raise ValueError(f"n_test must be >= 0, got {n_test}")
    rng = random.Random(seed)
    cipher = make_cipher(rng)
    source, bitext, target = [], [], []
    for k in range(n_sentences):
        words = generate_sentence(rng)
        sid = f"synth-{k + 1}"
        source.append(Sentence(tuple(Token(w, t) for w, t in words), sid))
        target.append(Sentence(tuple(Token(cipher[w], t) for w, t in words), sid))
        bitext.append(SentencePair([w for w, _ in words], [cipher[w] for w, _ in words]))
    test = []
    for k in range(n_test):
        words = generate_sentence(rng)
        test.append(Sentence(tuple(Token(cipher[w], t) for w, t in words), f"synth-test-{k + 1}"))
    return SynthCorpus(source, bitext, target, test, cipher)
