"""CoNLL-U and bitext readers/writers, plus the UPOS and coarse universal tag inventories."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Optional, Union

UPOS_TAGS = (
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
)
UPOS_INDEX = {t: i for i, t in enumerate(UPOS_TAGS)}

PETROV_TAGS = (
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PART", "X", "PUNCT",
)

_UPOS_TO_PETROV = {
    "ADJ": "ADJ", "ADP": "ADP", "ADV": "ADV", "AUX": "VERB", "CCONJ": "CONJ",
    "DET": "DET", "INTJ": "X", "NOUN": "NOUN", "NUM": "NUM", "PART": "PART",
    "PRON": "PRON", "PROPN": "NOUN", "PUNCT": "PUNCT", "SCONJ": "CONJ",
    "SYM": "X", "VERB": "VERB", "X": "X",
}

BITEXT_SEP = " ||| "

Text = Union[str, bytes]


class FormatError(ValueError):
    """Raised on malformed CoNLL-U or bitext input; carries the 1-based line number."""

    def __init__(self, msg: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            msg = f"line {lineno}: {msg}"
        super().__init__(msg)


def check_upos(tag: str) -> str:
    if tag not in UPOS_INDEX:
        raise ValueError(f"unknown UPOS tag {tag!r}")
    return tag


def to_petrov(tag: str) -> str:
    return _UPOS_TO_PETROV[check_upos(tag)]


@dataclass(frozen=True)
class Token:
    form: str
    tag: Optional[str] = None

    def __post_init__(self):
        if not self.form:
            raise ValueError("empty token form")
        if "\t" in self.form or "\n" in self.form or "\r" in self.form:
            raise ValueError(f"token form contains tab/newline: {self.form!r}")
        if self.tag is not None:
            check_upos(self.tag)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Optional[str]]], id: Optional[str] = None) -> "Sentence":
        return cls(tuple(Token(f, t) for f, t in pairs), id)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def tags(self) -> list[Optional[str]]:
        return [t.tag for t in self.tokens]

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class SentencePair:
    source: tuple[str, ...]
    target: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        if not self.source or not self.target:
            raise ValueError("both sides of a sentence pair must be non-empty")

    def reversed(self) -> "SentencePair":
        return SentencePair(self.target, self.source)


def split_lines(data: Text) -> list[str]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    # str.splitlines would also break on U+2028 etc., which may occur inside forms
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in data.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def parse_conllu(data: Text, strict: bool = True) -> list[Sentence]:
    """Parse CoNLL-U text into sentences of syntactic words.

    Multiword-token range lines (``1-2``) and empty nodes (``3.1``) are skipped.
    With ``strict=False`` an unknown UPOS value becomes ``X`` instead of raising.
    """
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    sent_id = None

    def flush():
        nonlocal tokens, sent_id
        if tokens:
            sentences.append(Sentence(tuple(tokens), sent_id))
        tokens = []
        sent_id = None

    for lineno, line in enumerate(split_lines(data), 1):
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "sent_id":
                sent_id = value.strip()
            continue
        fields = line.split("\t")
        if len(fields) < 10:
            raise FormatError(f"expected 10 tab-separated fields, got {len(fields)}", lineno)
        tid = fields[0]
        if "-" in tid or "." in tid:
            continue
        upos = fields[3]
        if upos == "_":
            tag = None
        elif upos in UPOS_INDEX:
            tag = upos
        elif strict:
            raise FormatError(f"unknown UPOS tag {upos!r}", lineno)
        else:
            tag = "X"
        try:
            tokens.append(Token(fields[1], tag))
        except ValueError as e:
            raise FormatError(str(e), lineno) from None
    flush()
    return sentences


def write_conllu(sentences: Iterable[Sentence]) -> bytes:
    out = io.StringIO()
    for sent in sentences:
        if sent.id is not None:
            out.write(f"# sent_id = {sent.id}\n")
        for i, tok in enumerate(sent.tokens, 1):
            cols = [str(i), tok.form, "_", tok.tag or "_", "_", "_", "_", "_", "_", "_"]
            out.write("\t".join(cols) + "\n")
        out.write("\n")
    return out.getvalue().encode("utf-8")


def parse_bitext(data: Text) -> list[SentencePair]:
    pairs = []
    for lineno, line in enumerate(split_lines(data), 1):
        src, sep, tgt = line.partition(BITEXT_SEP)
        if not sep:
            raise FormatError("missing ' ||| ' separator", lineno)
        src_toks = [t for t in src.split(" ") if t]
        tgt_toks = [t for t in tgt.split(" ") if t]
        if not src_toks or not tgt_toks:
            raise FormatError("empty side in bitext line", lineno)
        pairs.append(SentencePair(src_toks, tgt_toks))
    return pairs


def write_bitext(pairs: Iterable[SentencePair]) -> bytes:
    lines = [" ".join(p.source) + BITEXT_SEP + " ".join(p.target) + "\n" for p in pairs]
    return "".join(lines).encode("utf-8")


def read_conllu(path, strict: bool = True) -> list[Sentence]:
    with open(path, "rb") as f:
        data = f.read()
    try:
        return parse_conllu(data, strict=strict)
    except FormatError as e:
        raise FormatError(f"{path}: {e}") from None


def read_bitext(path) -> list[SentencePair]:
    with open(path, "rb") as f:
        data = f.read()
    try:
        return parse_bitext(data)
    except FormatError as e:
        raise FormatError(f"{path}: {e}") from None
